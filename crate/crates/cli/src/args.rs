use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "heegner-forge", version, about = "Prime-rich Heegner quadratics: scans, constants, keys and channel plans")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table, global = true)]
    pub output_format: OutputFormat,

    /// Seed for every random choice; identical seeds give identical output.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for scans and sweeps.
    #[arg(long, env = "HEEGNER_FORGE_THREADS", default_value_t = 1, global = true)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

/// `(Z, k, H)` with the usual defaults.
#[derive(Debug, Args)]
pub struct Family {
    #[arg(long = "Z", default_value = "1")]
    pub z: BigUint,
    #[arg(long = "k", default_value = "0")]
    pub k: BigUint,
    #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
    pub h: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate f(n) over [from, to] and flag primes.
    Scan {
        #[command(flatten)]
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
    },
    /// Prime counts over [n-from, n-to] for each k in [k-from, k-to].
    Sweep {
        #[arg(long = "Z", default_value_t = 1)]
        z: u64,
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
        #[arg(long)]
        k_from: u64,
        #[arg(long)]
        k_to: u64,
        #[arg(long, allow_negative_numbers = true)]
        n_from: i64,
        #[arg(long, allow_negative_numbers = true)]
        n_to: i64,
    },
    /// Bateman-Horn constant as a truncated Euler product.
    Constant {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: u64,
    },
    /// Residue census for -H up to x and the closed-form constant approximation.
    Approx {
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
        #[arg(long)]
        x: u64,
        /// Use this imbalance instead of the census value.
        #[arg(long)]
        delta_p: Option<f64>,
    },
    /// Actual prime count against the Bateman-Horn expectation.
    Richness {
        #[command(flatten)]
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: u64,
    },
    /// Zk that centres the polynomial on [from, to].
    Optimize {
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
        /// Also score every Zk within this distance of the closed-form centre.
        #[arg(long)]
        sweep_window: Option<u64>,
    },
    /// Generate a structured RSA-style key pair.
    Keygen {
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
        #[arg(long, default_value_t = heegner_forge::keygen::DEFAULT_MIN_BITS)]
        min_bits: u64,
        #[arg(long, default_value = "1e80", value_parser = parse_big)]
        z_lo: BigUint,
        #[arg(long, default_value = "1e85", value_parser = parse_big)]
        z_hi: BigUint,
        #[arg(long, default_value = "1e80", value_parser = parse_big)]
        k_lo: BigUint,
        #[arg(long, default_value = "1e85", value_parser = parse_big)]
        k_hi: BigUint,
        #[arg(long, default_value_t = heegner_forge::keygen::DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u64,
        /// Single Miller-Rabin round per candidate (faster, weaker).
        #[arg(long = "paper-faithful")]
        single_round: bool,
        /// Write the full key file here; stdout then gets only the public key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product Zk behind a structured prime.
    Recover {
        #[arg(long)]
        p: BigUint,
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
    },
    /// Mirrored channel-to-frequency plan for channels [0, n2].
    Channels {
        #[arg(long)]
        n2: u64,
        #[arg(long = "H", default_value_t = 163, allow_negative_numbers = true)]
        h: i64,
    },
    /// Historical prime-rich quadratics as family members.
    Catalog,
    /// Naive random prime of the given size, with timing.
    Baseline {
        #[arg(long)]
        bits: u64,
    },
}

/// Decimal integer or `1eNN` shorthand.
fn parse_big(s: &str) -> Result<BigUint, String> {
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: BigUint = m.parse().map_err(|_| format!("bad mantissa in {s:?}"))?;
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return Ok(m * BigUint::from(10u32).pow(e));
    }
    s.parse().map_err(|_| format!("{s:?} is not a non-negative integer"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_shorthand() {
        assert_eq!(parse_big("1e3").unwrap(), BigUint::from(1000u32));
        assert_eq!(parse_big("25E2").unwrap(), BigUint::from(2500u32));
        assert_eq!(parse_big("123").unwrap(), BigUint::from(123u32));
        assert!(parse_big("-5").is_err());
        assert!(parse_big("1e").is_err());
    }
}
