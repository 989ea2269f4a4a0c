//! Per-candidate reports and their two renderings.
//!
//! Every number that can outgrow a machine word is carried as a decimal
//! string so that JSON consumers never have to guess an integer width.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use proth_core::{
    BlsCondition, BlsInstance, BlsOutcome, Evidence, ProthForm, RegimeCheck, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Input {
    Number(String),
    Pair { k: String, n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeRecord {
    pub cube_ok: bool,
    pub square_ok: bool,
    pub classic_ok: bool,
}

impl From<RegimeCheck> for RegimeRecord {
    fn from(r: RegimeCheck) -> Self {
        RegimeRecord {
            cube_ok: r.cube_ok,
            square_ok: r.square_ok,
            classic_ok: r.classic_ok,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Prime,
    Composite,
    Inapplicable,
    Inconclusive,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum EvidenceRecord {
    EulerWitness { base: String, residue: String },
    SharedFactor { factor: String },
    FactorPair { p: String, q: String },
    PerfectSquare { root: String },
}

impl From<&Evidence> for EvidenceRecord {
    fn from(e: &Evidence) -> Self {
        match e {
            Evidence::EulerWitness { base, residue } => EvidenceRecord::EulerWitness {
                base: base.to_string(),
                residue: residue.to_string(),
            },
            Evidence::SharedFactor(g) => EvidenceRecord::SharedFactor {
                factor: g.to_string(),
            },
            Evidence::FactorPair { p, q } => EvidenceRecord::FactorPair {
                p: p.to_string(),
                q: q.to_string(),
            },
            Evidence::PerfectSquare(r) => EvidenceRecord::PerfectSquare {
                root: r.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceRecord>,
    /// Why no verdict was reached (inapplicable, inconclusive or error).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl VerdictRecord {
    fn bare(kind: Kind) -> Self {
        VerdictRecord {
            kind,
            witness: None,
            evidence: None,
            reason: None,
        }
    }

    pub fn prime(witness: Option<String>) -> Self {
        VerdictRecord {
            witness,
            ..Self::bare(Kind::Prime)
        }
    }

    pub fn composite(evidence: EvidenceRecord) -> Self {
        VerdictRecord {
            evidence: Some(evidence),
            ..Self::bare(Kind::Composite)
        }
    }

    pub fn inapplicable(reason: impl Into<String>) -> Self {
        VerdictRecord {
            reason: Some(reason.into()),
            ..Self::bare(Kind::Inapplicable)
        }
    }

    pub fn error(reason: impl Into<String>) -> Self {
        VerdictRecord {
            reason: Some(reason.into()),
            ..Self::bare(Kind::Error)
        }
    }
}

impl From<&Verdict> for VerdictRecord {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::Prime { witness } => VerdictRecord::prime(Some(witness.to_string())),
            Verdict::Composite { witness, evidence } => VerdictRecord {
                witness: witness.as_ref().map(ToString::to_string),
                ..VerdictRecord::composite(evidence.into())
            },
            Verdict::Inapplicable(reason) => VerdictRecord::inapplicable(reason.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestUsed {
    Extended,
    Classic,
    Bls,
    Oracle,
}

impl fmt::Display for TestUsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestUsed::Extended => "extended",
            TestUsed::Classic => "classic",
            TestUsed::Bls => "bls",
            TestUsed::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlsRecord {
    pub m: String,
    pub p: String,
    pub z: u64,
    pub p_verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<String>,
    pub bases_tried: u64,
}

impl BlsRecord {
    pub fn new(inst: &BlsInstance, outcome: BlsOutcome, bases_tried: u64) -> Self {
        BlsRecord {
            m: inst.m().to_string(),
            p: inst.p().to_string(),
            z: inst.z(),
            p_verified: inst.p_verified(),
            failed_condition: match outcome {
                BlsOutcome::Prime => None,
                BlsOutcome::Inconclusive(c) => Some(condition_name(c).to_owned()),
            },
            bases_tried,
        }
    }
}

fn condition_name(c: BlsCondition) -> &'static str {
    match c {
        BlsCondition::SizeBound => "SizeBound",
        BlsCondition::FermatCondition => "FermatCondition",
        BlsCondition::OrderCondition => "OrderCondition",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: Input,
    /// The candidate `N`, in decimal.
    pub candidate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bls: Option<BlsRecord>,
    pub verdict: VerdictRecord,
    pub test_used: TestUsed,
    pub elapsed_us: u64,
}

impl Report {
    pub fn new(
        input: Input,
        candidate: String,
        verdict: VerdictRecord,
        test_used: TestUsed,
    ) -> Self {
        Report {
            input,
            candidate,
            k: None,
            n: None,
            regime: None,
            bls: None,
            verdict,
            test_used,
            elapsed_us: 0,
        }
    }

    pub fn with_form(mut self, form: &ProthForm) -> Self {
        self.k = Some(form.k().to_string());
        self.n = Some(form.n());
        self.regime = Some(form.regime().into());
        self
    }

    pub fn with_elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_us = u64::try_from(elapsed.as_micros()).unwrap_or(u64::MAX);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// The report with its timing zeroed, for comparisons.
    pub fn canonical(&self) -> Report {
        Report {
            elapsed_us: 0,
            ..self.clone()
        }
    }
}

impl fmt::Display for EvidenceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvidenceRecord::EulerWitness { base, residue } => {
                write!(f, "Euler witness: {base}^((N-1)/2) = {residue} (mod N)")
            }
            EvidenceRecord::SharedFactor { factor } => write!(f, "shared factor {factor}"),
            EvidenceRecord::FactorPair { p, q } => write!(f, "factors {p} × {q}"),
            EvidenceRecord::PerfectSquare { root } => write!(f, "perfect square {root}^2"),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.verdict;
        let kind = match v.kind {
            Kind::Prime => "prime",
            Kind::Composite => "composite",
            Kind::Inapplicable => "inapplicable",
            Kind::Inconclusive => "inconclusive",
            Kind::Error => "error",
        };
        writeln!(f, "{}: {kind}", self.candidate)?;
        if let Input::Pair { k, n } = &self.input {
            writeln!(f, "  input: k = {k}, n = {n}")?;
        }
        if let (Some(k), Some(n)) = (&self.k, self.n) {
            writeln!(f, "  form: {} = {k}·2^{n} + 1", self.candidate)?;
        }
        if let Some(r) = &self.regime {
            writeln!(
                f,
                "  regime: cube_ok={} square_ok={} classic_ok={}",
                r.cube_ok, r.square_ok, r.classic_ok
            )?;
        }
        if let Some(b) = &self.bls {
            writeln!(
                f,
                "  bls form: {} = {}·{}^{} + 1 (p {}, bases tried: {})",
                self.candidate,
                b.m,
                b.p,
                b.z,
                if b.p_verified {
                    "verified prime"
                } else {
                    "assumed prime"
                },
                b.bases_tried
            )?;
        }
        if let Some(w) = &v.witness {
            writeln!(f, "  witness: a = {w}")?;
        }
        if let Some(e) = &v.evidence {
            writeln!(f, "  evidence: {e}")?;
        }
        if let Some(r) = &v.reason {
            writeln!(f, "  reason: {r}")?;
        }
        write!(f, "  test: {}, {} µs", self.test_used, self.elapsed_us)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proth_core::{extended_proth_test, Natural, TestOptions};

    fn report_for(v: u64) -> Report {
        let n = Natural::from(v);
        let verdict = extended_proth_test(&n, &TestOptions::default()).unwrap();
        Report::new(
            Input::Number(v.to_string()),
            v.to_string(),
            (&verdict).into(),
            TestUsed::Extended,
        )
        .with_form(&ProthForm::decompose(&n).unwrap())
    }

    #[test]
    fn json_shape() {
        let json: serde_json::Value = serde_json::from_str(&report_for(1649).to_json()).unwrap();
        assert_eq!(json["input"], "1649");
        assert_eq!(json["k"], "103");
        assert_eq!(json["n"], 4);
        assert_eq!(json["regime"]["cube_ok"], true);
        assert_eq!(json["regime"]["square_ok"], false);
        assert_eq!(json["verdict"]["kind"], "Composite");
        assert_eq!(json["verdict"]["witness"], "3");
        assert_eq!(json["verdict"]["evidence"]["type"], "EulerWitness");
        assert_eq!(json["verdict"]["evidence"]["residue"], "1614");
        assert_eq!(json["test_used"], "extended");
    }

    #[test]
    fn human_rendering_carries_the_same_facts() {
        let text = report_for(337).to_string();
        assert!(text.starts_with("337: prime"));
        assert!(text.contains("337 = 21·2^4 + 1"));
        assert!(text.contains("cube_ok=true square_ok=false classic_ok=false"));
        assert!(text.contains("witness: a = 5"));
        assert!(text.contains("test: extended"));
    }

    #[test]
    fn pair_input_round_trips() {
        let mut r = report_for(337);
        r.input = Input::Pair {
            k: "21".into(),
            n: 4,
        };
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
