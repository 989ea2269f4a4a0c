use proth_core::sweep::{bls_coverage, ALL_CORES};

/// The power-of-p test is sufficient only; this records how far prime bases
/// up to 50 get on every prime below 200000.
#[test]
fn prime_bases_up_to_50_prove_every_prime_below_200000() {
    let summary = bls_coverage(200_000, 50, ALL_CORES);
    println!(
        "{} primes, {} instances, {} proved, {} unproved",
        summary.primes,
        summary.instances,
        summary.proved,
        summary.unproved.len()
    );
    assert!(summary.primes > 10_000);
    assert_eq!(summary.unproved, vec![]);
}
