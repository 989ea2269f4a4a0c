//! Exhaustive sweeps over integer ranges.
//!
//! Every candidate is independent, so the sweeps fan out over a rayon pool
//! when the `parallel` feature is on and more than one worker is requested.
//! Results are always returned in ascending order of the swept value, so the
//! worker count never changes the output.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use crate::bls::{bls_power_test, bls_search, BlsInstance};
use crate::error::Error;
use crate::ntkernel::{jacobi, Natural, Sign};
use crate::oracle::{oracle_factor, oracle_is_prime};
use crate::proth::{
    euler_residue, extended_proth_test, extended_proth_test_with_base, semiprime_resolve,
    EulerResidue, Evidence, ProthForm, RegimeCheck, TestOptions, Verdict,
};

/// Worker count meaning "one per available core".
pub const ALL_CORES: usize = 0;

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(workers: usize, op: impl FnOnce() -> R + Send) -> R {
    if workers == ALL_CORES {
        return op();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool")
        .install(op)
}

/// Folds `f` over `range`, merging per-worker accumulators with `merge`.
///
/// `merge` must be associative and `identity()` its neutral element; the
/// sequential path never calls `merge`.
pub fn fold_range<A, I, F, M>(
    range: RangeInclusive<u64>,
    workers: usize,
    identity: I,
    fold: F,
    merge: M,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        use rayon::prelude::*;
        return in_pool(workers, || {
            range
                .into_par_iter()
                .fold(&identity, &fold)
                .reduce(&identity, &merge)
        });
    }
    let _ = (workers, &merge);
    range.fold(identity(), fold)
}

/// `range.filter_map(f)`, in ascending order for any worker count.
pub fn filter_map_range<R, F>(range: RangeInclusive<u64>, workers: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != 1 {
        use rayon::prelude::*;
        return in_pool(workers, || range.into_par_iter().filter_map(&f).collect());
    }
    let _ = workers;
    range.filter_map(f).collect()
}

/// Word-sized pre-filter: is `v` odd, `>= 3`, with `2^(3n) > v`?
fn in_cube_regime(v: u64) -> bool {
    if v < 3 || v.is_multiple_of(2) {
        return false;
    }
    let n = (v - 1).trailing_zeros();
    let bits = u64::BITS - v.leading_zeros();
    bits <= 3 * n
}

/// Tallies from cross-checking the extended test against trial division.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub tested: u64,
    pub primes: u64,
    pub semiprimes_factored: u64,
    pub euler_composites: u64,
    /// Composites settled by a perfect square or a shared factor.
    pub other_composites: u64,
    /// Candidates where the verdict contradicts the oracle, ascending.
    pub disagreements: Vec<u64>,
    /// Candidates where the test returned an error, ascending.
    pub errors: Vec<u64>,
}

impl VerifySummary {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.errors.is_empty()
    }

    fn merge(mut self, other: VerifySummary) -> VerifySummary {
        self.tested += other.tested;
        self.primes += other.primes;
        self.semiprimes_factored += other.semiprimes_factored;
        self.euler_composites += other.euler_composites;
        self.other_composites += other.other_composites;
        self.disagreements.extend(other.disagreements);
        self.errors.extend(other.errors);
        self
    }

    fn record(mut self, v: u64, opts: &TestOptions) -> VerifySummary {
        if !in_cube_regime(v) {
            return self;
        }
        self.tested += 1;
        let verdict = match extended_proth_test(&Natural::from(v), opts) {
            Ok(verdict) => verdict,
            Err(_) => {
                self.errors.push(v);
                return self;
            }
        };
        match &verdict {
            Verdict::Prime { .. } => self.primes += 1,
            Verdict::Composite {
                evidence: Evidence::FactorPair { .. },
                ..
            } => self.semiprimes_factored += 1,
            Verdict::Composite {
                evidence: Evidence::EulerWitness { .. },
                ..
            } => self.euler_composites += 1,
            Verdict::Composite { .. } => self.other_composites += 1,
            Verdict::Inapplicable(_) => {
                self.errors.push(v);
                return self;
            }
        }
        if verdict.is_prime() != oracle_is_prime(v) {
            self.disagreements.push(v);
        }
        self
    }
}

/// Runs the extended test on every odd `N <= limit` with `2^(3n) > N` and
/// compares each verdict with trial division.
pub fn verify_extended(limit: u64, opts: &TestOptions, workers: usize) -> VerifySummary {
    if limit < 3 {
        return VerifySummary::default();
    }
    let mut summary = fold_range(
        3..=limit,
        workers,
        VerifySummary::default,
        |acc, v| acc.record(v, opts),
        VerifySummary::merge,
    );
    summary.disagreements.sort_unstable();
    summary.errors.sort_unstable();
    summary
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub form: ProthForm,
    pub regime: RegimeCheck,
    pub verdict: Verdict,
    /// Wall time spent in the primality test for this candidate.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOutcome {
    /// Primes found, ascending.
    pub hits: Vec<SearchHit>,
    /// Candidates whose test returned an error, ascending.
    pub errors: Vec<(u64, Error)>,
}

/// Finds the primes in `[lo, hi]` that the extended test can certify.
///
/// With `new_regime_only`, candidates the classical test already covers
/// (`2^n > k`) are skipped.
pub fn search_proth_primes(
    range: RangeInclusive<u64>,
    new_regime_only: bool,
    opts: &TestOptions,
    workers: usize,
) -> SearchOutcome {
    let results = filter_map_range(range, workers, |v| {
        if !in_cube_regime(v) {
            return None;
        }
        let candidate = Natural::from(v);
        let form = ProthForm::decompose(&candidate).ok()?;
        let regime = form.regime();
        if new_regime_only && regime.classic_ok {
            return None;
        }
        let started = Instant::now();
        match extended_proth_test(&candidate, opts) {
            Ok(verdict) if verdict.is_prime() => Some(Ok(SearchHit {
                form,
                regime,
                verdict,
                elapsed: started.elapsed(),
            })),
            Ok(_) => None,
            Err(e) => Some(Err((v, e))),
        }
    });
    let mut outcome = SearchOutcome::default();
    for r in results {
        match r {
            Ok(hit) => outcome.hits.push(hit),
            Err(e) => outcome.errors.push(e),
        }
    }
    outcome
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemiprimeSummary {
    /// Semiprimes `p·q` with `p ≡ q ≡ 1 (mod 2^n)` in the cube regime.
    pub semiprimes: u64,
    /// Bases with Jacobi symbol -1 and Euler residue -1 that were forced.
    pub forced_bases: u64,
    pub recovered: u64,
    /// `(N, a)` pairs where the factors were not recovered exactly.
    pub mismatches: Vec<(u64, u64)>,
}

impl SemiprimeSummary {
    fn merge(mut self, other: SemiprimeSummary) -> SemiprimeSummary {
        self.semiprimes += other.semiprimes;
        self.forced_bases += other.forced_bases;
        self.recovered += other.recovered;
        self.mismatches.extend(other.mismatches);
        self
    }
}

/// For every cube-regime semiprime `N <= limit` whose factors are both
/// `1 mod 2^n`, forces each base `a <= max_base` that passes the Jacobi and
/// Euler conditions through the extended test and checks that exactly the
/// oracle's factor pair comes back.
pub fn semiprime_recovery(limit: u64, max_base: u64, workers: usize) -> SemiprimeSummary {
    if limit < 3 {
        return SemiprimeSummary::default();
    }
    let mut summary = fold_range(
        3..=limit,
        workers,
        SemiprimeSummary::default,
        |mut acc, v| {
            if !in_cube_regime(v) {
                return acc;
            }
            let Some((p, q)) = oracle_factor(v).ok().and_then(|f| f.as_semiprime()) else {
                return acc;
            };
            let modulus = 1u64 << (v - 1).trailing_zeros();
            if p % modulus != 1 || q % modulus != 1 {
                return acc;
            }
            acc.semiprimes += 1;
            let candidate = Natural::from(v);
            let expected = (Natural::from(p), Natural::from(q));
            let form = ProthForm::decompose(&candidate).expect("odd candidate");
            for a in 2..=max_base.min(v - 1) {
                let base = Natural::from(a);
                if jacobi(&base, &candidate) != Ok(Sign::Minus)
                    || euler_residue(&candidate, &base) != Ok(EulerResidue::MinusOne)
                {
                    continue;
                }
                acc.forced_bases += 1;
                let direct = semiprime_resolve(&form).map(|s| (s.p, s.q));
                let via_test = match extended_proth_test_with_base(&candidate, &base) {
                    Ok(Verdict::Composite {
                        evidence: Evidence::FactorPair { p, q },
                        ..
                    }) => Some((p, q)),
                    _ => None,
                };
                if direct.as_ref() == Some(&expected) && via_test.as_ref() == Some(&expected) {
                    acc.recovered += 1;
                } else {
                    acc.mismatches.push((v, a));
                }
            }
            acc
        },
        SemiprimeSummary::merge,
    );
    summary.mismatches.sort_unstable();
    summary
}

/// `(N, m, p, z)` with `N - 1 = m·p^z`, `p` prime and `(2p^z + 1)^2 > N`.
///
/// This is the untightened bound, so it also lists instances (even `p` or
/// even `N`) that [`BlsInstance::size_bound_holds`] goes on to reject.
pub fn bls_decompositions(v: u64) -> Vec<(u64, u64, u64, u32)> {
    if v < 3 {
        return Vec::new();
    }
    let Ok(f) = oracle_factor(v - 1) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for &(p, e) in f.factors() {
        let mut pz = 1u64;
        for z in 1..=e {
            pz *= p;
            let bound = 2 * pz as u128 + 1;
            if bound * bound > v as u128 {
                out.push((v, (v - 1) / pz, p, z));
            }
        }
    }
    out
}

fn instance(v: u64, m: u64, p: u64, z: u32) -> BlsInstance {
    BlsInstance::new(v.into(), m.into(), p.into(), z as u64)
        .expect("decomposition of N - 1 is consistent")
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlsSoundnessSummary {
    pub composites: u64,
    pub instances: u64,
    pub tests: u64,
    /// `(N, m, p, z, a)` where a composite was declared prime.
    pub false_primes: Vec<(u64, u64, u64, u32, u64)>,
}

impl BlsSoundnessSummary {
    fn merge(mut self, other: BlsSoundnessSummary) -> BlsSoundnessSummary {
        self.composites += other.composites;
        self.instances += other.instances;
        self.tests += other.tests;
        self.false_primes.extend(other.false_primes);
        self
    }
}

/// Runs the power-of-p test on every composite `N <= limit`, every valid
/// decomposition of `N - 1`, and every base in `bases` below `N`.
pub fn bls_soundness(
    limit: u64,
    bases: RangeInclusive<u64>,
    workers: usize,
) -> BlsSoundnessSummary {
    if limit < 4 {
        return BlsSoundnessSummary::default();
    }
    let mut summary = fold_range(
        4..=limit,
        workers,
        BlsSoundnessSummary::default,
        |mut acc, v| {
            if oracle_is_prime(v) {
                return acc;
            }
            acc.composites += 1;
            for (_, m, p, z) in bls_decompositions(v) {
                acc.instances += 1;
                let inst = instance(v, m, p, z);
                for a in bases.clone().take_while(|&a| a < v) {
                    acc.tests += 1;
                    let outcome =
                        bls_power_test(&inst, &Natural::from(a)).expect("base is in range");
                    if outcome.is_prime() {
                        acc.false_primes.push((v, m, p, z, a));
                    }
                }
            }
            acc
        },
        BlsSoundnessSummary::merge,
    );
    summary.false_primes.sort_unstable();
    summary
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlsCoverageSummary {
    pub primes: u64,
    pub instances: u64,
    pub proved: u64,
    /// `(N, m, p, z)` where no base up to the limit proved primality.
    pub unproved: Vec<(u64, u64, u64, u32)>,
}

impl BlsCoverageSummary {
    fn merge(mut self, other: BlsCoverageSummary) -> BlsCoverageSummary {
        self.primes += other.primes;
        self.instances += other.instances;
        self.proved += other.proved;
        self.unproved.extend(other.unproved);
        self
    }
}

/// How often base search proves the primes `N <= limit`, over every
/// decomposition of `N - 1` that passes the size bound. An empirical measurement: the test is
/// sufficient only, so nothing guarantees full coverage.
pub fn bls_coverage(limit: u64, base_limit: u64, workers: usize) -> BlsCoverageSummary {
    if limit < 3 {
        return BlsCoverageSummary::default();
    }
    let mut summary = fold_range(
        3..=limit,
        workers,
        BlsCoverageSummary::default,
        |mut acc, v| {
            if !oracle_is_prime(v) {
                return acc;
            }
            let instances: Vec<_> = bls_decompositions(v)
                .into_iter()
                .map(|(_, m, p, z)| ((m, p, z), instance(v, m, p, z)))
                .filter(|(_, inst)| inst.size_bound_holds())
                .collect();
            if instances.is_empty() {
                return acc;
            }
            acc.primes += 1;
            for ((m, p, z), inst) in instances {
                acc.instances += 1;
                let found = bls_search(&inst, base_limit)
                    .map(|s| s.outcome.is_prime())
                    .unwrap_or(false);
                if found {
                    acc.proved += 1;
                } else {
                    acc.unproved.push((v, m, p, z));
                }
            }
            acc
        },
        BlsCoverageSummary::merge,
    );
    summary.unproved.sort_unstable();
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_prefilter_matches_regime() {
        for v in 0..50_000u64 {
            let expected = v >= 3
                && v % 2 == 1
                && ProthForm::decompose(&Natural::from(v))
                    .unwrap()
                    .regime()
                    .cube_ok;
            assert_eq!(in_cube_regime(v), expected, "{v}");
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let opts = TestOptions::default();
        let seq = verify_extended(30_000, &opts, 1);
        let par = verify_extended(30_000, &opts, 4);
        assert_eq!(seq, par);
        assert!(seq.is_clean());

        let strip = |o: SearchOutcome| -> Vec<(ProthForm, Verdict)> {
            o.hits.into_iter().map(|h| (h.form, h.verdict)).collect()
        };
        let seq = search_proth_primes(3..=30_000, false, &opts, 1);
        let par = search_proth_primes(3..=30_000, false, &opts, 3);
        assert_eq!(strip(seq), strip(par));
    }

    #[test]
    fn search_small_range() {
        let found: Vec<u64> = search_proth_primes(3..=100, false, &TestOptions::default(), 1)
            .hits
            .iter()
            .map(|h| u64::try_from(h.form.candidate()).unwrap())
            .collect();
        for p in [3, 5, 13, 17, 41, 97] {
            assert!(found.contains(&p), "{p} missing from {found:?}");
        }
        assert!(found.iter().all(|&p| oracle_is_prime(p)));
    }

    #[test]
    fn new_regime_search_includes_337() {
        let hits = search_proth_primes(300..=400, true, &TestOptions::default(), 1).hits;
        assert!(hits
            .iter()
            .any(|h| h.form.candidate() == &Natural::from(337u32)));
        assert!(hits.iter().all(|h| !h.regime.classic_ok));
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn empty_ranges() {
        assert_eq!(verify_extended(2, &TestOptions::default(), 1).tested, 0);
        assert!(
            search_proth_primes(10..=9, false, &TestOptions::default(), 1)
                .hits
                .is_empty()
        );
    }

    #[test]
    fn decompositions_are_valid() {
        for v in 3..5_000u64 {
            for (n, m, p, z) in bls_decompositions(v) {
                assert_eq!(n, v);
                assert_eq!(m * p.pow(z) + 1, v);
                assert!(oracle_is_prime(p));
            }
        }
        assert!(bls_decompositions(19).contains(&(19, 2, 3, 2)));
    }
}
