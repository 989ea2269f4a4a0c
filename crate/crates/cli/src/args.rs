use clap::{Args, Parser, Subcommand};

use proth_core::proth::DEFAULT_WITNESS_CAP;

/// Primality testing for k·2^n + 1 beyond the classical Proth bound.
#[derive(Debug, Parser)]
#[command(name = "proth", version)]
pub struct Cli {
    /// Emit one JSON object per line instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for range commands (0 = one per core).
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Largest base tried when looking for a Jacobi -1 witness.
    #[arg(long, global = true, default_value_t = DEFAULT_WITNESS_CAP)]
    pub witness_cap: u64,

    /// Accept 0x-prefixed hexadecimal numbers.
    #[arg(long, global = true)]
    pub hex: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Fall back to trial division (N <= 1e14) when the form does not apply.
    #[arg(long)]
    pub oracle_fallback: bool,

    /// Run the classical test (needs 2^n > k) instead of the extended one.
    #[arg(long)]
    pub classic: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub lo: String,
    pub hi: String,

    /// Only report primes with 2^n <= k, out of reach of the classical test.
    #[arg(long)]
    pub new_regime_only: bool,
}

#[derive(Debug, Args)]
pub struct BlsArgs {
    /// Candidate N = m·p^z + 1.
    pub n: String,
    pub m: String,
    /// Prime p.
    pub p: String,
    pub z: String,

    /// Test a single base.
    #[arg(long, conflicts_with = "base_limit")]
    pub base: Option<String>,

    /// Try prime bases up to this limit (default 50).
    #[arg(long)]
    pub base_limit: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a single candidate N.
    Test {
        n: String,
        #[command(flatten)]
        test: TestArgs,
    },
    /// Test N = k·2^n + 1.
    Pair {
        k: String,
        n: String,
        #[command(flatten)]
        test: TestArgs,
    },
    /// List the primes in [lo, hi] the extended test certifies.
    Search(SearchArgs),
    /// Test N = m·p^z + 1 with the power-of-p criterion.
    Bls(BlsArgs),
    /// Cross-check the extended test against trial division up to a limit.
    Verify {
        #[arg(default_value = "2000000")]
        limit: String,
    },
}
