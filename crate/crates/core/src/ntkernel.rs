//! Exact number-theoretic primitives over arbitrary-precision naturals.
//!
//! Everything here is a pure function of its arguments. Nothing rounds.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{precondition, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Value of a Jacobi (or Legendre) symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Minus),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Plus,
            _ => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Lowest 64 bits of `x`.
#[inline]
pub(crate) fn low_u64(x: &Natural) -> u64 {
    x.iter_u64_digits().next().unwrap_or(0)
}

/// `2^e`.
pub fn pow2(e: u64) -> Natural {
    Natural::one() << e
}

/// `base^exponent mod modulus` by left-to-right square-and-multiply.
///
/// The exponent is scanned from its most significant bit down. A sliding
/// window would cut the multiplications by roughly a fifth; not worth it at
/// the sizes this crate targets.
pub fn mod_pow(base: &Natural, exponent: &Natural, modulus: &Natural) -> Result<Natural> {
    if modulus < &Natural::from(2u8) {
        return Err(precondition(format!(
            "mod_pow modulus must be >= 2, got {modulus}"
        )));
    }
    let base = base % modulus;
    let mut acc = Natural::one();
    for i in (0..exponent.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exponent.bit(i) {
            acc = &acc * &base % modulus;
        }
    }
    Ok(acc)
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`, by quadratic reciprocity.
///
/// Factors of two are pulled out of the numerator using `n mod 8`; odd
/// numerator and denominator are swapped with a sign flip when both are
/// `3 mod 4`. Returns `Sign::Zero` exactly when `gcd(a, n) > 1`.
pub fn jacobi(a: &Natural, n: &Natural) -> Result<Sign> {
    if n.is_zero() || n.is_even() {
        return Err(precondition(format!(
            "jacobi denominator must be odd and positive, got {n}"
        )));
    }
    let mut num = a % n;
    let mut den = n.clone();
    let mut sign = Sign::Plus;
    while !num.is_zero() {
        let twos = num.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            num >>= twos;
            let r = low_u64(&den) & 7;
            if twos & 1 == 1 && (r == 3 || r == 5) {
                sign = sign.flip();
            }
        }
        if low_u64(&num) & 3 == 3 && low_u64(&den) & 3 == 3 {
            sign = sign.flip();
        }
        std::mem::swap(&mut num, &mut den);
        num %= &den;
    }
    Ok(if den.is_one() { sign } else { Sign::Zero })
}

/// Floor square root. The flag is true iff `x` is a perfect square.
///
/// Integer Newton iteration started above the root (from the bit length), so
/// the iterates decrease monotonically and the first non-decrease is the floor.
pub fn isqrt(x: &Natural) -> (Natural, bool) {
    if x.is_zero() {
        return (Natural::zero(), true);
    }
    let mut root = Natural::one() << x.bits().div_ceil(2);
    loop {
        let next = (&root + x / &root) >> 1u32;
        if next >= root {
            break;
        }
        root = next;
    }
    let sq = &root * &root;
    let above = &sq + (&root << 1u32) + 1u32;
    assert!(
        sq <= *x && *x < above,
        "isqrt did not converge to the floor"
    );
    let exact = sq == *x;
    (root, exact)
}

// Quadratic residues modulo 64, as a bitmask.
const SQUARES_MOD_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// True iff `x` is a perfect square. Agrees with the flag from [`isqrt`].
pub fn is_perfect_square(x: &Natural) -> bool {
    if SQUARES_MOD_64 >> (low_u64(x) & 63) & 1 == 0 {
        return false;
    }
    isqrt(x).1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    fn naive_pow(base: u64, exp: u64, m: u64) -> u64 {
        let mut acc = 1 % m;
        for _ in 0..exp {
            acc = acc * (base % m) % m;
        }
        acc
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(naive_pow(2, 6, 19), 7);
        assert_eq!(mod_pow(&nat(2), &nat(6), &nat(19)).unwrap(), nat(7));
        assert_eq!(mod_pow(&nat(12345), &nat(0), &nat(7)).unwrap(), nat(1));
        assert_eq!(mod_pow(&nat(0), &nat(0), &nat(2)).unwrap(), nat(1));

        assert_eq!(naive_pow(27, 824, 1649), 1648);
        assert_eq!(naive_pow(3, 824, 1649), 1614);
        assert_eq!(mod_pow(&nat(27), &nat(824), &nat(1649)).unwrap(), nat(1648));
        assert_eq!(mod_pow(&nat(3), &nat(824), &nat(1649)).unwrap(), nat(1614));
    }

    #[test]
    fn mod_pow_rejects_small_modulus() {
        assert!(mod_pow(&nat(3), &nat(2), &nat(1)).is_err());
        assert!(mod_pow(&nat(3), &nat(2), &nat(0)).is_err());
    }

    #[test]
    fn mod_pow_matches_repeated_multiplication() {
        for m in 2..=300u64 {
            let modulus = nat(m);
            for b in 0..=300u64 {
                let base = nat(b);
                let mut expected = 1 % m;
                for e in 0..=300u64 {
                    assert_eq!(
                        mod_pow(&base, &nat(e), &modulus).unwrap(),
                        nat(expected),
                        "{b}^{e} mod {m}"
                    );
                    expected = expected * (b % m) % m;
                }
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(&nat(2), &nat(13)).unwrap(), Sign::Minus);
        assert_eq!(jacobi(&nat(0), &nat(3)).unwrap(), Sign::Zero);
        assert_eq!(jacobi(&nat(5), &nat(337)).unwrap(), Sign::Minus);
        assert_eq!(jacobi(&nat(3), &nat(1649)).unwrap(), Sign::Minus);
        assert_eq!(jacobi(&nat(7), &nat(1)).unwrap(), Sign::Plus);
        assert_eq!(jacobi(&nat(0), &nat(1)).unwrap(), Sign::Plus);
    }

    #[test]
    fn jacobi_two_over_13_by_squaring() {
        let squares: Vec<u64> = (1..13u64).map(|x| x * x % 13).collect();
        assert!(!squares.contains(&2));
    }

    #[test]
    fn jacobi_rejects_even_or_zero_denominator() {
        assert!(jacobi(&nat(3), &nat(0)).is_err());
        assert!(jacobi(&nat(3), &nat(10)).is_err());
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&nat(25)), (nat(5), true));
        assert_eq!(isqrt(&nat(21)), (nat(4), false));
        assert_eq!(isqrt(&nat(0)), (nat(0), true));
        assert_eq!(isqrt(&nat(1)), (nat(1), true));
        assert_eq!(isqrt(&nat(3)), (nat(1), false));
    }

    #[test]
    fn isqrt_floor_up_to_a_million() {
        for x in 0..=1_000_000u64 {
            let (r, exact) = isqrt(&nat(x));
            let r = u64::try_from(&r).unwrap();
            assert!(r * r <= x && x < (r + 1) * (r + 1), "isqrt({x}) = {r}");
            assert_eq!(exact, r * r == x);
        }
    }

    #[test]
    fn isqrt_large_squares() {
        let r = pow2(200) + nat(12345);
        let sq = &r * &r;
        assert_eq!(isqrt(&sq), (r.clone(), true));
        assert_eq!(isqrt(&(&sq - 1u32)), (&r - 1u32, false));
        assert_eq!(isqrt(&(&sq + 1u32)), (r, false));
    }

    #[test]
    fn perfect_square_examples() {
        assert!(!is_perfect_square(&nat(1649)));
        assert!(is_perfect_square(&nat(289)));
        assert!(is_perfect_square(&nat(1)));
        assert!(is_perfect_square(&nat(0)));
        for x in 0..20_000u64 {
            assert_eq!(is_perfect_square(&nat(x)), isqrt(&nat(x)).1, "{x}");
        }
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::Minus * Sign::Plus, Sign::Minus);
        assert_eq!(Sign::Zero * Sign::Minus, Sign::Zero);
        for v in [-1, 0, 1] {
            assert_eq!(Sign::from_value(v).unwrap().value(), v);
        }
        assert_eq!(Sign::from_value(2), None);
    }
}
