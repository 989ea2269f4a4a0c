//! Brute-force ground truth: trial division and multiplicative order.
//!
//! Slow on purpose. These routines work on machine words and are only meant
//! for the desk-scale ranges the verification sweeps cover (primality up to
//! about 1e14, factoring up to about 1e9).

use num_integer::Integer;

use crate::error::{precondition, Result};

/// Trial division by 2, 3 and then `6j ± 1` up to the square root.
pub fn oracle_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// The two prime factors `(p, q)` with `p <= q`, if there are exactly two.
    pub fn as_semiprime(&self) -> Option<(u64, u64)> {
        match self.factors.as_slice() {
            [(p, 2)] => Some((*p, *p)),
            [(p, 1), (q, 1)] => Some((*p, *q)),
            _ => None,
        }
    }
}

pub fn oracle_factor(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(precondition(format!("cannot factor {n}")));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |rest: &mut u64, d: u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(d) {
            *rest /= d;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
    };
    push(&mut rest, 2);
    push(&mut rest, 3);
    let mut d = 5u64;
    while d.saturating_mul(d) <= rest {
        push(&mut rest, d);
        push(&mut rest, d + 2);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Carmichael function: the exponent of the unit group modulo `n`.
pub fn carmichael(n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    let f = oracle_factor(n)?;
    Ok(f.factors().iter().fold(1u64, |acc, &(p, e)| {
        let lambda = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            (p - 1) * p.pow(e - 1)
        };
        acc.lcm(&lambda)
    }))
}

const STEPPING_LIMIT: u64 = 100_000;

/// Multiplicative order of `a` modulo `n`.
///
/// Direct stepping for `n <= 1e5`; above that, the order is carved out of
/// the Carmichael exponent one prime factor at a time.
pub fn oracle_order(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(precondition(format!("order modulus must be >= 2, got {n}")));
    }
    if a.gcd(&n) != 1 {
        return Err(precondition(format!("{a} is not a unit modulo {n}")));
    }
    let a = a % n;
    if n <= STEPPING_LIMIT {
        let mut e = 1;
        let mut x = a;
        while x != 1 {
            x = x * a % n;
            e += 1;
        }
        return Ok(e);
    }
    let lambda = carmichael(n)?;
    let mut order = lambda;
    for q in oracle_factor(lambda.max(2))?.primes() {
        while order % q == 0 && pow_mod(a, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_examples() {
        assert!(oracle_is_prime(337));
        assert!(!oracle_is_prime(1649));
        assert!(!oracle_is_prime(1));
        assert!(!oracle_is_prime(0));
        assert!(oracle_is_prime(2));
        assert!(oracle_is_prime(3));
        assert!(!oracle_is_prime(25));
        assert!(!oracle_is_prime(49));
        assert!(oracle_is_prime(1_000_000_007));
    }

    #[test]
    fn primality_matches_sieve() {
        let limit = 100_000usize;
        let mut composite = vec![false; limit + 1];
        for i in 2..=limit {
            if !composite[i] {
                for j in (i * i..=limit).step_by(i) {
                    composite[j] = true;
                }
            }
            assert_eq!(oracle_is_prime(i as u64), !composite[i], "{i}");
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(oracle_factor(1649).unwrap().factors(), &[(17, 1), (97, 1)]);
        assert_eq!(oracle_factor(1024).unwrap().factors(), &[(2, 10)]);
        assert_eq!(oracle_factor(13).unwrap().factors(), &[(13, 1)]);
        assert_eq!(oracle_factor(2).unwrap().factors(), &[(2, 1)]);
        assert!(oracle_factor(1).is_err());
        assert!(oracle_factor(0).is_err());
    }

    #[test]
    fn factorizations_remultiply() {
        for n in 2..50_000u64 {
            let f = oracle_factor(n).unwrap();
            assert_eq!(f.product(), n as u128);
            assert!(f.primes().all(oracle_is_prime));
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn semiprime_shape() {
        assert_eq!(oracle_factor(1649).unwrap().as_semiprime(), Some((17, 97)));
        assert_eq!(oracle_factor(289).unwrap().as_semiprime(), Some((17, 17)));
        assert_eq!(oracle_factor(13).unwrap().as_semiprime(), None);
        assert_eq!(oracle_factor(30).unwrap().as_semiprime(), None);
    }

    #[test]
    fn order_examples() {
        assert_eq!(oracle_order(27, 97).unwrap(), 16);
        assert_eq!(oracle_order(10, 17).unwrap(), 16);
        assert_eq!(oracle_order(1, 2).unwrap(), 1);
        assert_eq!(oracle_order(1, 1649).unwrap(), 1);
        assert!(oracle_order(17, 1649).is_err());
        assert!(oracle_order(3, 1).is_err());
    }

    #[test]
    fn large_modulus_order_uses_carmichael_route() {
        // 1_000_003 is prime and 2 generates a subgroup we can step through.
        let n = 1_000_003u64;
        let fast = oracle_order(2, n).unwrap();
        let mut e = 1;
        let mut x = 2u64;
        while x != 1 {
            x = x * 2 % n;
            e += 1;
        }
        assert_eq!(fast, e);
    }

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael(1).unwrap(), 1);
        assert_eq!(carmichael(8).unwrap(), 2);
        assert_eq!(carmichael(16).unwrap(), 4);
        assert_eq!(carmichael(561).unwrap(), 80);
        assert_eq!(carmichael(97).unwrap(), 96);
    }
}
