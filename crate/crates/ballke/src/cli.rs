use std::path::PathBuf;

use ballke_core::kernel::TruncationOrder;
use ballke_core::lemmas::Suite;
use clap::{Parser, Subcommand, ValueEnum};

/// Exact and numeric checks that the Bergman metric of a cyclic ball
/// quotient is not Kähler–Einstein.
#[derive(Parser, Debug)]
#[command(name = "ballke", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    All,
    Comb1,
    Rearrange,
    Fmono,
    Main,
    Simplified,
    Elementary,
    Lmono,
}

impl Which {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Which::All => Suite::ALL.to_vec(),
            Which::Comb1 => vec![Suite::Comb1],
            Which::Rearrange => vec![Suite::Rearrange],
            Which::Fmono => vec![Suite::Fmono],
            Which::Main => vec![Suite::Main],
            Which::Simplified => vec![Suite::Simplified],
            Which::Elementary => vec![Suite::Elementary],
            Which::Lmono => vec![Suite::Lmono],
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the residual series of one group and compare it with the case prediction.
    Verify {
        /// Group order.
        #[arg(long)]
        m: u32,
        /// Comma-separated exponents t_1,…,t_n.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Truncation order: `auto` or an integer.
        #[arg(long, default_value = "auto", value_parser = parse_order)]
        order: TruncationOrder,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify every canonical group with m <= max-m and 2 <= n <= max-n.
    Scan {
        #[arg(long)]
        max_m: u32,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "auto", value_parser = parse_order)]
        order: TruncationOrder,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=256))]
        jobs: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run bounded scans of the binomial inequalities.
    Lemmas {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        /// Primary bound of each selected suite (defaults to the full scan).
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=60))]
        max: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sample the Monge–Ampère defect on a slice grid and random interior points.
    Numeric {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 0.8)]
        radius: f64,
        /// Number of slice points and of random interior points.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample file (`.json` for JSON, anything else for CSV). Relative
        /// paths resolve against `BALLKE_OUT_DIR` when it is set.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

pub fn parse_order(s: &str) -> Result<TruncationOrder, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TruncationOrder::Auto);
    }
    match s.parse::<usize>() {
        Ok(d) if (1..=2000).contains(&d) => Ok(TruncationOrder::Fixed(d)),
        _ => Err(format!("expected `auto` or an integer in 1..=2000, got `{s}`")),
    }
}

pub fn parse_t(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| format!("invalid exponent `{}` in --t", p.trim()))
        })
        .collect()
}
