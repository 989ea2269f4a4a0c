//! Sufficient primality test for `N = m·p^z + 1` with `p` prime.
//!
//! If `2·p^z + 1 > √N`, `a^(N-1) ≡ 1` and `a^(m·p^(z-1)) ≢ 1 (mod N)`, then
//! `N` is prime. Failing any condition proves nothing: the outcome is
//! inconclusive, never composite.
//!
//! The `2·p^z + 1` bound leans on every prime factor of `N` being
//! `1 mod 2·p^z`, which needs both `p` and `N` odd. Otherwise the factors are
//! only known to be `1 mod p^z`, a cofactor of `p^z + 1` is not excluded
//! (`15 = 7·2 + 1` passes the other two conditions with `a = 4`), and the
//! bound tightens to `p^z + 1 > √N`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{precondition, Result};
use crate::ntkernel::{mod_pow, Natural};
use crate::oracle::oracle_is_prime;

/// Largest `p` whose primality is checked by trial division at construction.
pub const VERIFIED_PRIME_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlsInstance {
    candidate: Natural,
    m: Natural,
    p: Natural,
    z: u64,
    p_verified: bool,
}

impl BlsInstance {
    /// Checks `N = m·p^z + 1` with `m >= 1`, `z >= 1` and `p` prime.
    ///
    /// Primality of `p` is confirmed by trial division up to
    /// [`VERIFIED_PRIME_LIMIT`]; larger `p` are taken on trust and
    /// [`BlsInstance::p_verified`] reports `false`.
    pub fn new(candidate: Natural, m: Natural, p: Natural, z: u64) -> Result<Self> {
        if z == 0 {
            return Err(precondition("z must be at least 1"));
        }
        if m.is_zero() {
            return Err(precondition("m must be positive"));
        }
        if p < Natural::from(2u8) {
            return Err(precondition(format!("p = {p} is not prime")));
        }
        let pz = p.pow(u32::try_from(z).map_err(|_| precondition("z is too large"))?);
        if &m * &pz + 1u8 != candidate {
            return Err(precondition(format!(
                "{m}·{p}^{z} + 1 = {} is not {candidate}",
                &m * &pz + 1u8
            )));
        }
        let p_verified = match p.to_u64() {
            Some(small) if small <= VERIFIED_PRIME_LIMIT => {
                if !oracle_is_prime(small) {
                    return Err(precondition(format!("p = {p} is not prime")));
                }
                true
            }
            _ => false,
        };
        Ok(BlsInstance {
            candidate,
            m,
            p,
            z,
            p_verified,
        })
    }

    pub fn candidate(&self) -> &Natural {
        &self.candidate
    }

    pub fn m(&self) -> &Natural {
        &self.m
    }

    pub fn p(&self) -> &Natural {
        &self.p
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    /// Whether `p` was proven prime rather than assumed.
    pub fn p_verified(&self) -> bool {
        self.p_verified
    }

    /// `m·p^(z-1)`, the exponent of the order condition. Equals `m` when `z = 1`.
    pub fn order_exponent(&self) -> Natural {
        &self.m * self.p.pow(self.z as u32 - 1)
    }

    /// `(2·p^z + 1)^2 > N` for odd `p` and odd `N`, else `(p^z + 1)^2 > N`.
    pub fn size_bound_holds(&self) -> bool {
        let pz = self.p.pow(self.z as u32);
        let step = if self.p.is_odd() && self.candidate.is_odd() {
            pz << 1u8
        } else {
            pz
        };
        let bound = step + 1u8;
        &bound * &bound > self.candidate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlsCondition {
    SizeBound,
    FermatCondition,
    OrderCondition,
}

impl fmt::Display for BlsCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlsCondition::SizeBound => "size bound p^z against sqrt(N)",
            BlsCondition::FermatCondition => "Fermat condition a^(N-1) = 1",
            BlsCondition::OrderCondition => "order condition a^(m·p^(z-1)) != 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlsOutcome {
    Prime,
    /// The first condition that failed, in the order size, Fermat, order.
    Inconclusive(BlsCondition),
}

impl BlsOutcome {
    pub fn is_prime(self) -> bool {
        self == BlsOutcome::Prime
    }
}

pub fn bls_power_test(inst: &BlsInstance, base: &Natural) -> Result<BlsOutcome> {
    if base < &Natural::from(2u8) || base >= &inst.candidate {
        return Err(precondition(format!(
            "base {base} outside [2, {})",
            inst.candidate
        )));
    }
    if !inst.size_bound_holds() {
        return Ok(BlsOutcome::Inconclusive(BlsCondition::SizeBound));
    }
    let n = &inst.candidate;
    if !mod_pow(base, &(n - 1u8), n)?.is_one() {
        return Ok(BlsOutcome::Inconclusive(BlsCondition::FermatCondition));
    }
    if mod_pow(base, &inst.order_exponent(), n)?.is_one() {
        return Ok(BlsOutcome::Inconclusive(BlsCondition::OrderCondition));
    }
    Ok(BlsOutcome::Prime)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlsSearch {
    pub outcome: BlsOutcome,
    /// The base that proved primality.
    pub base: Option<Natural>,
    pub bases_tried: u64,
}

/// Tries the prime bases `2, 3, 5, 7, ...` up to `base_limit` (and below `N`).
///
/// Returns at the first base that proves primality. A failed size bound
/// returns at once since no base can help. When every base fails, the
/// reported condition is `FermatCondition` if any base failed it, otherwise
/// `OrderCondition`.
pub fn bls_search(inst: &BlsInstance, base_limit: u64) -> Result<BlsSearch> {
    if base_limit < 2 {
        return Err(precondition(format!(
            "base limit {base_limit} admits no base"
        )));
    }
    if !inst.size_bound_holds() {
        return Ok(BlsSearch {
            outcome: BlsOutcome::Inconclusive(BlsCondition::SizeBound),
            base: None,
            bases_tried: 0,
        });
    }
    let mut tried = 0;
    let mut fermat_failed = false;
    for a in (2..=base_limit).filter(|&a| oracle_is_prime(a)) {
        let base = Natural::from(a);
        if base >= inst.candidate {
            break;
        }
        tried += 1;
        match bls_power_test(inst, &base)? {
            BlsOutcome::Prime => {
                return Ok(BlsSearch {
                    outcome: BlsOutcome::Prime,
                    base: Some(base),
                    bases_tried: tried,
                })
            }
            BlsOutcome::Inconclusive(BlsCondition::FermatCondition) => fermat_failed = true,
            BlsOutcome::Inconclusive(_) => {}
        }
    }
    let failed = if fermat_failed {
        BlsCondition::FermatCondition
    } else {
        BlsCondition::OrderCondition
    };
    Ok(BlsSearch {
        outcome: BlsOutcome::Inconclusive(failed),
        base: None,
        bases_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u64, m: u64, p: u64, z: u64) -> BlsInstance {
        BlsInstance::new(n.into(), m.into(), p.into(), z).unwrap()
    }

    #[test]
    fn power_test_examples() {
        let t = |i: &BlsInstance, a: u64| bls_power_test(i, &Natural::from(a)).unwrap();
        assert_eq!(t(&inst(19, 2, 3, 2), 2), BlsOutcome::Prime);
        assert_eq!(t(&inst(37, 4, 3, 2), 2), BlsOutcome::Prime);
        assert_eq!(
            t(&inst(25, 8, 3, 1), 7),
            BlsOutcome::Inconclusive(BlsCondition::OrderCondition)
        );
        // 2^24 mod 25 = 16.
        assert_eq!(
            t(&inst(25, 8, 3, 1), 2),
            BlsOutcome::Inconclusive(BlsCondition::FermatCondition)
        );
        // 2·3 + 1 = 7 and 49 < 55.
        assert_eq!(
            t(&inst(55, 18, 3, 1), 2),
            BlsOutcome::Inconclusive(BlsCondition::SizeBound)
        );
    }

    #[test]
    fn even_prime_or_even_candidate_uses_tighter_bound() {
        let t = |i: &BlsInstance, a: u64| bls_power_test(i, &Natural::from(a)).unwrap();
        // With the 2·p^z + 1 bound each of these would be declared prime.
        for (n, m, p, z, a) in [
            (15, 7, 2, 1, 4),
            (45, 11, 2, 2, 8),
            (561, 35, 2, 4, 5),
            (276, 25, 11, 1, 13),
        ] {
            assert_eq!(
                t(&inst(n, m, p, z), a),
                BlsOutcome::Inconclusive(BlsCondition::SizeBound),
                "{n} = {m}·{p}^{z} + 1"
            );
        }
        // 17 = 1·2^4 + 1: (16 + 1)^2 > 17, and 3 has order 16.
        assert_eq!(t(&inst(17, 1, 2, 4), 3), BlsOutcome::Prime);
    }

    #[test]
    fn power_test_base_range() {
        let i = inst(19, 2, 3, 2);
        assert!(bls_power_test(&i, &Natural::from(1u8)).is_err());
        assert!(bls_power_test(&i, &Natural::from(19u8)).is_err());
    }

    #[test]
    fn construction_errors() {
        let mk = |n: u64, m: u64, p: u64, z: u64| BlsInstance::new(n.into(), m.into(), p.into(), z);
        assert!(mk(37, 36, 3, 0).is_err());
        assert!(mk(19, 3, 3, 2).is_err());
        assert!(mk(17, 4, 4, 1).is_err());
        assert!(mk(1, 0, 3, 1).is_err());
        assert!(mk(19, 2, 3, 2).unwrap().p_verified());
    }

    #[test]
    fn large_p_is_trusted_not_verified() {
        let p = Natural::from(1_000_000_007u64);
        let n = &p * 2u8 + 1u8;
        let i = BlsInstance::new(n, 2u8.into(), p, 1).unwrap();
        assert!(!i.p_verified());
    }

    #[test]
    fn order_exponent_for_first_power_is_m() {
        assert_eq!(inst(25, 8, 3, 1).order_exponent(), Natural::from(8u8));
        assert_eq!(inst(19, 2, 3, 2).order_exponent(), Natural::from(6u8));
    }

    #[test]
    fn search_examples() {
        let s = bls_search(&inst(19, 2, 3, 2), 20).unwrap();
        assert_eq!(s.outcome, BlsOutcome::Prime);
        assert_eq!(s.base, Some(Natural::from(2u8)));

        let s = bls_search(&inst(25, 8, 3, 1), 20).unwrap();
        assert!(!s.outcome.is_prime());
        assert_eq!(s.base, None);

        let s = bls_search(&inst(55, 18, 3, 1), 20).unwrap();
        assert_eq!(s.outcome, BlsOutcome::Inconclusive(BlsCondition::SizeBound));
        assert_eq!(s.bases_tried, 0);

        assert!(bls_search(&inst(19, 2, 3, 2), 1).is_err());
    }
}
