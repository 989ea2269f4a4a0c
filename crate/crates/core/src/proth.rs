//! Proth-form primality testing.
//!
//! A candidate `N = k·2^n + 1` (k odd) is tested with a base `a` whose Jacobi
//! symbol modulo `N` is -1. The classical test needs `2^n > k`. The extended
//! test only needs `2^(3n) > N`: when `a^((N-1)/2) ≡ -1` the candidate is
//! either prime or a product of two primes `(2^n·u + 1)(2^n·v + 1)`, and in
//! that regime `u + v` and `u·v` can be read straight off the bits of `k`,
//! so the factorization (if any) falls out of one quadratic.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::ntkernel::{is_perfect_square, isqrt, jacobi, low_u64, mod_pow, Natural, Sign};

/// Default number of bases tried by [`find_witness`].
pub const DEFAULT_WITNESS_CAP: u64 = 1_000;

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// `N = k·2^n + 1` with `k` odd and `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProthForm {
    candidate: Natural,
    k: Natural,
    n: u64,
}

impl ProthForm {
    /// Splits an odd `N >= 3` into its unique `(k, n)`.
    pub fn decompose(candidate: &Natural) -> Result<Self> {
        if candidate < &Natural::from(3u8) || candidate.is_even() {
            return Err(Error::Inapplicable(format!(
                "{candidate} is not an odd number >= 3"
            )));
        }
        let even = candidate - 1u8;
        let n = even.trailing_zeros().expect("N - 1 is nonzero");
        Ok(ProthForm {
            k: even >> n,
            n,
            candidate: candidate.clone(),
        })
    }

    /// Builds `N = k·2^n + 1` from its parts.
    pub fn from_pair(k: Natural, n: u64) -> Result<Self> {
        if k.is_even() {
            return Err(precondition(format!("k must be odd, got {k}")));
        }
        if n == 0 {
            return Err(precondition("n must be at least 1"));
        }
        let candidate = (&k << n) + 1u8;
        Ok(ProthForm { candidate, k, n })
    }

    pub fn candidate(&self) -> &Natural {
        &self.candidate
    }

    pub fn k(&self) -> &Natural {
        &self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn regime(&self) -> RegimeCheck {
        regime(self)
    }
}

impl fmt::Display for ProthForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}·2^{} + 1", self.candidate, self.k, self.n)
    }
}

pub fn decompose(candidate: &Natural) -> Result<ProthForm> {
    ProthForm::decompose(candidate)
}

/// Which size bounds a [`ProthForm`] satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegimeCheck {
    /// `2^(3n) > N`: the extended test applies.
    pub cube_ok: bool,
    /// `2^(2n) > N`: a -1 Euler residue alone proves primality.
    pub square_ok: bool,
    /// `2^n > k`: the classical test applies.
    pub classic_ok: bool,
}

/// Size bounds by exact comparison.
///
/// `x < 2^b` holds exactly when `x` has at most `b` bits, so every flag is a
/// bit-length comparison and no root is ever taken.
pub fn regime(form: &ProthForm) -> RegimeCheck {
    let bits = form.candidate.bits();
    RegimeCheck {
        cube_ok: bits <= form.n.saturating_mul(3),
        square_ok: bits <= form.n.saturating_mul(2),
        classic_ok: form.k.bits() <= form.n,
    }
}

/// Outcome of the base search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Smallest `a >= 2` with `(a/N) = -1`.
    NonResidue(Natural),
    /// A base `a` with `(a/N) = 0` turned up first; `factor = gcd(a, N)`.
    SharedFactor { base: Natural, factor: Natural },
}

/// Scans `a = 2, 3, ...` (up to `cap` and below `N`) for a Jacobi -1 base.
///
/// `N` must not be a perfect square: every symbol modulo a square is 0 or +1
/// and the scan could never succeed.
pub fn find_witness(candidate: &Natural, cap: u64) -> Result<Witness> {
    if candidate < &Natural::from(3u8) || candidate.is_even() {
        return Err(precondition(format!(
            "witness search needs odd N >= 3, got {candidate}"
        )));
    }
    if is_perfect_square(candidate) {
        return Err(precondition(format!("{candidate} is a perfect square")));
    }
    let mut a = Natural::from(2u8);
    let cap = Natural::from(cap);
    while a <= cap && &a < candidate {
        match jacobi(&a, candidate)? {
            Sign::Minus => return Ok(Witness::NonResidue(a)),
            Sign::Zero => {
                let factor = a.gcd(candidate);
                return Ok(Witness::SharedFactor { base: a, factor });
            }
            Sign::Plus => a += 1u8,
        }
    }
    Err(Error::WitnessExhausted {
        n: candidate.clone(),
        cap: u64::try_from(&cap).unwrap_or(u64::MAX),
    })
}

/// `a^((N-1)/2) mod N`, sorted into the three cases that matter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerResidue {
    PlusOne,
    MinusOne,
    Other(Natural),
}

pub fn euler_residue(candidate: &Natural, base: &Natural) -> Result<EulerResidue> {
    if candidate < &Natural::from(3u8) || candidate.is_even() {
        return Err(precondition(format!(
            "Euler residue needs odd N >= 3, got {candidate}"
        )));
    }
    if base < &Natural::from(2u8) || base >= candidate {
        return Err(precondition(format!(
            "base {base} outside [2, {candidate})"
        )));
    }
    let minus_one = candidate - 1u8;
    let r = mod_pow(base, &(&minus_one >> 1u8), candidate)?;
    Ok(if r.is_one() {
        EulerResidue::PlusOne
    } else if r == minus_one {
        EulerResidue::MinusOne
    } else {
        EulerResidue::Other(r)
    })
}

/// A factorization `N = (2^n·u + 1)(2^n·v + 1)` recovered from `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiprimeSolution {
    pub u: Natural,
    pub v: Natural,
    pub p: Natural,
    pub q: Natural,
    /// `k mod 2^n`, which equals `u + v`.
    pub s: Natural,
    /// `k >> n`, which equals `u·v`.
    pub prod: Natural,
}

/// Solves `u + v = k mod 2^n`, `u·v = k >> n` for integers `1 <= u <= v`.
///
/// Meaningful when `2^(3n) > N`; outside that regime a semiprime may go
/// unnoticed, but any returned pair is still an exact factorization.
/// `None` means there is no nontrivial solution.
pub fn semiprime_resolve(form: &ProthForm) -> Option<SemiprimeSolution> {
    let n = form.n;
    let prod = &form.k >> n;
    let s = &form.k - (&prod << n);

    let s_sq = &s * &s;
    let four_prod = &prod << 2u8;
    if s_sq < four_prod {
        return None;
    }
    let (root, exact) = isqrt(&(s_sq - four_prod));
    if !exact {
        return None;
    }
    // s^2 - root^2 = 4·prod, so s and root always share parity.
    assert_eq!(
        low_u64(&s) & 1,
        low_u64(&root) & 1,
        "parity mismatch solving for u with k = {}",
        form.k
    );
    let u = (&s - &root) >> 1u8;
    if u.is_zero() {
        return None;
    }
    let v = &s - &u;
    let p = (&u << n) + 1u8;
    let q = (&v << n) + 1u8;
    assert_eq!(
        &p * &q,
        form.candidate,
        "recovered factors do not multiply back"
    );
    Some(SemiprimeSolution {
        u,
        v,
        p,
        q,
        s,
        prod,
    })
}

/// Why a composite verdict was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// `base^((N-1)/2) mod N = residue`, which is not -1.
    EulerWitness { base: Natural, residue: Natural },
    /// `1 < factor < N` and `factor | N`.
    SharedFactor(Natural),
    /// `p·q = N`.
    FactorPair { p: Natural, q: Natural },
    /// `root^2 = N`.
    PerfectSquare(Natural),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Prime,
    Composite,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InapplicableReason {
    /// Even, or less than 3.
    NotOddForm,
    /// `2^(3n) <= N`.
    OutsideCubeRegime,
    /// `2^n <= k`.
    OutsideClassicRegime,
}

impl fmt::Display for InapplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InapplicableReason::NotOddForm => "not an odd number >= 3",
            InapplicableReason::OutsideCubeRegime => "2^(3n) <= N",
            InapplicableReason::OutsideClassicRegime => "2^n <= k",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Prime {
        witness: Natural,
    },
    Composite {
        witness: Option<Natural>,
        evidence: Evidence,
    },
    Inapplicable(InapplicableReason),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Prime { .. } => VerdictKind::Prime,
            Verdict::Composite { .. } => VerdictKind::Composite,
            Verdict::Inapplicable(_) => VerdictKind::Inapplicable,
        }
    }

    pub fn is_prime(&self) -> bool {
        matches!(self, Verdict::Prime { .. })
    }

    pub fn witness(&self) -> Option<&Natural> {
        match self {
            Verdict::Prime { witness } => Some(witness),
            Verdict::Composite { witness, .. } => witness.as_ref(),
            Verdict::Inapplicable(_) => None,
        }
    }

    pub fn evidence(&self) -> Option<&Evidence> {
        match self {
            Verdict::Composite { evidence, .. } => Some(evidence),
            _ => None,
        }
    }

    fn euler(base: Natural, residue: Natural) -> Verdict {
        Verdict::Composite {
            witness: Some(base.clone()),
            evidence: Evidence::EulerWitness { base, residue },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestOptions {
    /// Largest base tried by the witness search.
    pub witness_cap: u64,
    /// Divide by the primes below 100 before searching for a witness. Only
    /// the evidence of a composite verdict can change, never the verdict.
    pub trial_division: bool,
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            trial_division: false,
        }
    }
}

/// Steps shared by both tests before a base is chosen. `Err` carries an
/// early verdict.
fn screen(
    candidate: &Natural,
    opts: &TestOptions,
    admits: impl Fn(&RegimeCheck) -> Option<InapplicableReason>,
) -> std::result::Result<(ProthForm, RegimeCheck), Verdict> {
    let form = ProthForm::decompose(candidate)
        .map_err(|_| Verdict::Inapplicable(InapplicableReason::NotOddForm))?;
    let regime = form.regime();
    if let Some(reason) = admits(&regime) {
        return Err(Verdict::Inapplicable(reason));
    }
    let (root, exact) = isqrt(candidate);
    if exact {
        return Err(Verdict::Composite {
            witness: None,
            evidence: Evidence::PerfectSquare(root),
        });
    }
    if opts.trial_division {
        for &p in &SMALL_PRIMES {
            let p = Natural::from(p);
            if &p < candidate && (candidate % &p).is_zero() {
                return Err(Verdict::Composite {
                    witness: None,
                    evidence: Evidence::SharedFactor(p),
                });
            }
        }
    }
    Ok((form, regime))
}

fn choose_base(candidate: &Natural, cap: u64) -> Result<std::result::Result<Natural, Verdict>> {
    Ok(match find_witness(candidate, cap)? {
        Witness::NonResidue(a) => Ok(a),
        Witness::SharedFactor { base, factor } => Err(Verdict::Composite {
            witness: Some(base),
            evidence: Evidence::SharedFactor(factor),
        }),
    })
}

fn cube_gate(r: &RegimeCheck) -> Option<InapplicableReason> {
    (!r.cube_ok).then_some(InapplicableReason::OutsideCubeRegime)
}

fn classic_gate(r: &RegimeCheck) -> Option<InapplicableReason> {
    (!r.classic_ok).then_some(InapplicableReason::OutsideClassicRegime)
}

/// Euler condition plus semiprime resolution, for a base with `(a/N) = -1`.
fn conclude_extended(form: &ProthForm, regime: &RegimeCheck, base: Natural) -> Result<Verdict> {
    match euler_residue(&form.candidate, &base)? {
        EulerResidue::PlusOne => Ok(Verdict::euler(base, Natural::one())),
        EulerResidue::Other(r) => Ok(Verdict::euler(base, r)),
        EulerResidue::MinusOne if regime.square_ok => Ok(Verdict::Prime { witness: base }),
        EulerResidue::MinusOne => Ok(match semiprime_resolve(form) {
            Some(sol) => Verdict::Composite {
                witness: Some(base),
                evidence: Evidence::FactorPair { p: sol.p, q: sol.q },
            },
            None => Verdict::Prime { witness: base },
        }),
    }
}

/// Decides primality of `N = k·2^n + 1` whenever `2^(3n) > N`.
///
/// Candidates outside that regime come back as
/// `Verdict::Inapplicable`. The only error is a base search that ran past
/// `opts.witness_cap`.
pub fn extended_proth_test(candidate: &Natural, opts: &TestOptions) -> Result<Verdict> {
    let (form, regime) = match screen(candidate, opts, cube_gate) {
        Ok(v) => v,
        Err(verdict) => return Ok(verdict),
    };
    match choose_base(candidate, opts.witness_cap)? {
        Ok(base) => conclude_extended(&form, &regime, base),
        Err(verdict) => Ok(verdict),
    }
}

/// [`extended_proth_test`] with a caller-chosen base instead of the
/// smallest one. The base must satisfy `(a/N) = -1`.
pub fn extended_proth_test_with_base(candidate: &Natural, base: &Natural) -> Result<Verdict> {
    let (form, regime) = match screen(candidate, &TestOptions::default(), cube_gate) {
        Ok(v) => v,
        Err(verdict) => return Ok(verdict),
    };
    if base < &Natural::from(2u8) || base >= candidate {
        return Err(precondition(format!(
            "base {base} outside [2, {candidate})"
        )));
    }
    if jacobi(base, candidate)? != Sign::Minus {
        return Err(precondition(format!(
            "base {base} does not have Jacobi symbol -1 modulo {candidate}"
        )));
    }
    conclude_extended(&form, &regime, base.clone())
}

/// Classical Proth test, defined only when `2^n > k`.
pub fn classic_proth_test(candidate: &Natural, opts: &TestOptions) -> Result<Verdict> {
    if let Err(verdict) = screen(candidate, opts, classic_gate) {
        return Ok(verdict);
    }
    let base = match choose_base(candidate, opts.witness_cap)? {
        Ok(base) => base,
        Err(verdict) => return Ok(verdict),
    };
    Ok(match euler_residue(candidate, &base)? {
        EulerResidue::MinusOne => Verdict::Prime { witness: base },
        EulerResidue::PlusOne => Verdict::euler(base, Natural::one()),
        EulerResidue::Other(r) => Verdict::euler(base, r),
    })
}
