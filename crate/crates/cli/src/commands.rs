//! Command implementations. Each returns its process exit code and writes
//! reports to `out` and diagnostics to `err`.

use std::io::{self, Write};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{Num, ToPrimitive, Zero};
use serde::Serialize;

use proth_core::sweep::{search_proth_primes, verify_extended};
use proth_core::{
    bls_power_test, bls_search, classic_proth_test, extended_proth_test, oracle_factor,
    oracle_is_prime, BlsInstance, BlsOutcome, Natural, ProthForm, TestOptions, Verdict,
};

use crate::args::{BlsArgs, Cli, Command, SearchArgs, TestArgs};
use crate::report::{BlsRecord, EvidenceRecord, Input, Kind, Report, TestUsed, VerdictRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INAPPLICABLE: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;
pub const EXIT_DISAGREEMENT: u8 = 5;

/// Largest candidate the trial-division fallback will take on.
pub const ORACLE_LIMIT: u64 = 100_000_000_000_000;

/// Default `--base-limit` for the bls command.
pub const DEFAULT_BASE_LIMIT: u64 = 50;

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let ctx = Context {
        json: cli.json,
        hex: cli.hex,
        workers: cli.workers,
        opts: TestOptions {
            witness_cap: cli.witness_cap,
            ..TestOptions::default()
        },
    };
    match &cli.command {
        Command::Test { n, test } => ctx.cmd_test(n, test, out, err),
        Command::Pair { k, n, test } => ctx.cmd_pair(k, n, test, out, err),
        Command::Search(args) => ctx.cmd_search(args, out, err),
        Command::Bls(args) => ctx.cmd_bls(args, out, err),
        Command::Verify { limit } => ctx.cmd_verify(limit, out, err),
    }
}

struct Context {
    json: bool,
    hex: bool,
    workers: usize,
    opts: TestOptions,
}

/// Parses a decimal natural, or `0x`-prefixed hex when `allow_hex` is set.
pub fn parse_natural(text: &str, allow_hex: bool) -> Result<Natural, String> {
    let text = text.trim();
    let hex = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X"));
    let parsed = match hex {
        Some(_) if !allow_hex => {
            return Err(format!("{text:?}: hex input needs --hex"));
        }
        Some(digits) => BigUint::from_str_radix(digits, 16),
        None if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) => {
            BigUint::from_str_radix(text, 10)
        }
        None => return Err(format!("{text:?} is not a nonnegative decimal integer")),
    };
    parsed.map_err(|e| format!("{text:?}: {e}"))
}

fn usage(err: &mut dyn Write, msg: &str) -> io::Result<u8> {
    writeln!(err, "error: {msg}")?;
    Ok(EXIT_USAGE)
}

impl Context {
    fn natural(&self, text: &str) -> Result<Natural, String> {
        parse_natural(text, self.hex)
    }

    fn word(&self, text: &str, what: &str) -> Result<u64, String> {
        self.natural(text)?
            .to_u64()
            .ok_or_else(|| format!("{what} {text} does not fit in 64 bits"))
    }

    fn emit(&self, report: &Report, out: &mut dyn Write) -> io::Result<()> {
        if self.json {
            writeln!(out, "{}", report.to_json())
        } else {
            writeln!(out, "{report}")
        }
    }

    /// Runs the chosen Proth test on `candidate` and builds its report.
    fn proth_report(&self, input: Input, candidate: &Natural, test: &TestArgs) -> (Report, u8) {
        let started = Instant::now();
        let form = ProthForm::decompose(candidate).ok();
        let (used, result) = if test.classic {
            (TestUsed::Classic, classic_proth_test(candidate, &self.opts))
        } else {
            (
                TestUsed::Extended,
                extended_proth_test(candidate, &self.opts),
            )
        };
        let (record, code) = match &result {
            Ok(v @ Verdict::Inapplicable(_)) => {
                if test.oracle_fallback {
                    if let Some(report) = self.oracle_report(input.clone(), candidate, &form) {
                        return (report.with_elapsed(started.elapsed()), EXIT_OK);
                    }
                }
                (v.into(), EXIT_INAPPLICABLE)
            }
            Ok(v) => (v.into(), EXIT_OK),
            Err(e) => (VerdictRecord::error(e.to_string()), EXIT_INAPPLICABLE),
        };
        let mut report = Report::new(input, candidate.to_string(), record, used);
        if let Some(form) = &form {
            report = report.with_form(form);
        }
        (report.with_elapsed(started.elapsed()), code)
    }

    fn oracle_report(
        &self,
        input: Input,
        candidate: &Natural,
        form: &Option<ProthForm>,
    ) -> Option<Report> {
        let v = candidate
            .to_u64()
            .filter(|&v| (2..=ORACLE_LIMIT).contains(&v))?;
        let record = if oracle_is_prime(v) {
            VerdictRecord::prime(None)
        } else {
            let smallest = oracle_factor(v).ok()?.primes().next()?;
            VerdictRecord::composite(EvidenceRecord::SharedFactor {
                factor: smallest.to_string(),
            })
        };
        let mut report = Report::new(input, candidate.to_string(), record, TestUsed::Oracle);
        if let Some(form) = form {
            report = report.with_form(form);
        }
        Some(report)
    }

    fn cmd_test(
        &self,
        text: &str,
        test: &TestArgs,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> io::Result<u8> {
        let candidate = match self.natural(text) {
            Ok(v) => v,
            Err(msg) => return usage(err, &msg),
        };
        let (report, code) =
            self.proth_report(Input::Number(text.trim().to_owned()), &candidate, test);
        self.emit(&report, out)?;
        Ok(code)
    }

    fn cmd_pair(
        &self,
        k_text: &str,
        n_text: &str,
        test: &TestArgs,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> io::Result<u8> {
        let k = match self.natural(k_text) {
            Ok(k) => k,
            Err(msg) => return usage(err, &msg),
        };
        let n = match self.word(n_text, "n") {
            Ok(n) => n,
            Err(msg) => return usage(err, &msg),
        };
        if k.is_zero() {
            return usage(err, "k must be positive");
        }
        let form = match ProthForm::from_pair(k.clone(), n) {
            Ok(form) => form,
            Err(e) => return usage(err, &e.to_string()),
        };
        let input = Input::Pair {
            k: k.to_string(),
            n,
        };
        let (report, code) = self.proth_report(input, form.candidate(), test);
        if !self.json {
            writeln!(out, "N = {}·2^{} + 1 = {}", k, n, form.candidate())?;
        }
        self.emit(&report, out)?;
        Ok(code)
    }

    fn cmd_search(
        &self,
        args: &SearchArgs,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> io::Result<u8> {
        let (lo, hi) = match (self.word(&args.lo, "lo"), self.word(&args.hi, "hi")) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            (Err(msg), _) | (_, Err(msg)) => return usage(err, &msg),
        };
        if lo < 3 {
            return usage(err, "lo must be at least 3");
        }
        if lo > hi {
            return usage(err, &format!("empty range: lo = {lo} > hi = {hi}"));
        }
        let found = search_proth_primes(lo..=hi, args.new_regime_only, &self.opts, self.workers);
        for hit in &found.hits {
            let candidate = hit.form.candidate();
            let report = Report::new(
                Input::Number(candidate.to_string()),
                candidate.to_string(),
                (&hit.verdict).into(),
                TestUsed::Extended,
            )
            .with_form(&hit.form)
            .with_elapsed(hit.elapsed);
            self.emit(&report, out)?;
        }
        for (v, e) in &found.errors {
            writeln!(err, "error: {v}: {e}")?;
        }
        Ok(if found.errors.is_empty() {
            EXIT_OK
        } else {
            EXIT_INAPPLICABLE
        })
    }

    fn cmd_bls(&self, args: &BlsArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
        let parsed = (|| -> Result<_, String> {
            Ok((
                self.natural(&args.n)?,
                self.natural(&args.m)?,
                self.natural(&args.p)?,
                self.word(&args.z, "z")?,
            ))
        })();
        let (candidate, m, p, z) = match parsed {
            Ok(t) => t,
            Err(msg) => return usage(err, &msg),
        };
        let started = Instant::now();
        let inst = match BlsInstance::new(candidate.clone(), m, p, z) {
            Ok(inst) => inst,
            Err(e) => return usage(err, &e.to_string()),
        };
        let (outcome, base, tried) = match &args.base {
            Some(text) => {
                let base = match self.natural(text) {
                    Ok(b) => b,
                    Err(msg) => return usage(err, &msg),
                };
                match bls_power_test(&inst, &base) {
                    Ok(outcome) => (outcome, Some(base), 1),
                    Err(e) => return usage(err, &e.to_string()),
                }
            }
            None => {
                let limit = args.base_limit.unwrap_or(DEFAULT_BASE_LIMIT);
                match bls_search(&inst, limit) {
                    Ok(s) => (s.outcome, s.base, s.bases_tried),
                    Err(e) => return usage(err, &e.to_string()),
                }
            }
        };
        let record = match outcome {
            BlsOutcome::Prime => VerdictRecord::prime(base.as_ref().map(ToString::to_string)),
            BlsOutcome::Inconclusive(c) => VerdictRecord {
                kind: Kind::Inconclusive,
                witness: None,
                evidence: None,
                reason: Some(c.to_string()),
            },
        };
        let mut report = Report::new(
            Input::Number(args.n.trim().to_owned()),
            candidate.to_string(),
            record,
            TestUsed::Bls,
        )
        .with_elapsed(started.elapsed());
        report.bls = Some(BlsRecord::new(&inst, outcome, tried));
        self.emit(&report, out)?;
        Ok(if outcome.is_prime() {
            EXIT_OK
        } else {
            EXIT_INCONCLUSIVE
        })
    }

    fn cmd_verify(&self, limit: &str, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
        let limit = match self.word(limit, "limit") {
            Ok(l) => l,
            Err(msg) => return usage(err, &msg),
        };
        let started = Instant::now();
        let summary = verify_extended(limit, &self.opts, self.workers);
        let elapsed_ms = u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX);
        let record = VerifyRecord {
            limit,
            tested: summary.tested,
            primes: summary.primes,
            semiprimes_factored: summary.semiprimes_factored,
            euler_composites: summary.euler_composites,
            other_composites: summary.other_composites,
            disagreements: summary.disagreements.clone(),
            errors: summary.errors.clone(),
            elapsed_ms,
        };
        if self.json {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&record).expect("summary serializes")
            )?;
        } else {
            writeln!(out, "verified odd N <= {limit} with 2^(3n) > N")?;
            writeln!(out, "  tested: {}", record.tested)?;
            writeln!(out, "  primes: {}", record.primes)?;
            writeln!(out, "  semiprimes factored: {}", record.semiprimes_factored)?;
            writeln!(
                out,
                "  Euler-witness composites: {}",
                record.euler_composites
            )?;
            writeln!(out, "  other composites: {}", record.other_composites)?;
            writeln!(out, "  disagreements: {}", record.disagreements.len())?;
            writeln!(out, "  errors: {}", record.errors.len())?;
            writeln!(out, "  elapsed: {elapsed_ms} ms")?;
        }
        if summary.is_clean() {
            return Ok(EXIT_OK);
        }
        for v in &summary.disagreements {
            writeln!(err, "disagreement: N = {v}")?;
        }
        for v in &summary.errors {
            match extended_proth_test(&Natural::from(*v), &self.opts) {
                Err(e) => writeln!(err, "error: N = {v}: {e}")?,
                Ok(verdict) => writeln!(err, "error: N = {v}: unexpected {:?}", verdict.kind())?,
            }
        }
        Ok(EXIT_DISAGREEMENT)
    }
}

#[derive(Debug, Serialize)]
struct VerifyRecord {
    limit: u64,
    tested: u64,
    primes: u64,
    semiprimes_factored: u64,
    euler_composites: u64,
    other_composites: u64,
    disagreements: Vec<u64>,
    errors: Vec<u64>,
    elapsed_ms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_gated_hex() {
        assert_eq!(parse_natural("337", false).unwrap(), Natural::from(337u32));
        assert_eq!(parse_natural(" 42 ", false).unwrap(), Natural::from(42u32));
        assert!(parse_natural("0x151", false).is_err());
        assert_eq!(parse_natural("0x151", true).unwrap(), Natural::from(337u32));
        assert!(parse_natural("-5", false).is_err());
        assert!(parse_natural("+5", false).is_err());
        assert!(parse_natural("", false).is_err());
        assert!(parse_natural("12a", false).is_err());
        assert!(parse_natural("0xzz", true).is_err());
    }
}
