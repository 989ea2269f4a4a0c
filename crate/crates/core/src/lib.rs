//! Primality tests for numbers of the form `k·2^n + 1` and `m·p^z + 1`.
//!
//! The extended Proth test in [`proth`] decides primality of
//! `N = k·2^n + 1` whenever `2^(3n) > N`, a much weaker bound than the
//! classical `2^n > k`. When the Euler condition alone cannot separate a
//! prime from a product of two primes, the factors are recovered from the
//! bits of `k`. [`bls`] holds a sufficient test for `N = m·p^z + 1`,
//! [`oracle`] brute-force ground truth, and [`sweep`] exhaustive
//! cross-checks that run data-parallel with the `parallel` feature.

pub mod bls;
pub mod error;
pub mod ntkernel;
pub mod oracle;
pub mod proth;
pub mod sweep;

pub use bls::{bls_power_test, bls_search, BlsCondition, BlsInstance, BlsOutcome, BlsSearch};
pub use error::{Error, Result};
pub use ntkernel::{is_perfect_square, isqrt, jacobi, mod_pow, Natural, Sign};
pub use oracle::{oracle_factor, oracle_is_prime, oracle_order, Factorization};
pub use proth::{
    classic_proth_test, decompose, euler_residue, extended_proth_test,
    extended_proth_test_with_base, find_witness, regime, semiprime_resolve, EulerResidue, Evidence,
    InapplicableReason, ProthForm, RegimeCheck, SemiprimeSolution, TestOptions, Verdict,
    VerdictKind, Witness,
};
