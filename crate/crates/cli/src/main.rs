//! `poset-cde`: analyze posets, shapes and families for coincidental down-degree
//! expectations, emit certificates and witnesses, run rowmotion dynamics, and count
//! tableaux.
//!
//! Exit codes: 0 success, 1 property refuted, 2 input error, 3 budget exceeded.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "poset-cde",
    version,
    about = "Down-degree expectations on lattices of order ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected down-degree under uniform, maximal-chain and k-chain distributions.
    Analyze(Opts),
    /// Certify that J(P) is tCDE, or check a saved certificate with --check.
    CertTcde(Opts),
    /// Find a toggle-symmetric counterexample on J(P), or check a saved one with --check.
    Witness(Opts),
    /// Orbit decomposition of J(P) under rowmotion, gyration or a rank order.
    Orbits(Opts),
    /// Orbit averages of a statistic under a map on J(P).
    Homomesy(Opts),
    /// Standard and barely set-valued tableau counts of a shape.
    CountTableaux(Opts),
    /// Run the CDE, mCDE or tCDE predicate over a family of shapes or posets.
    Scan(Opts),
    /// Verify the certified constant for every member of a family.
    Family(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PredicateArg {
    Cde,
    Mcde,
    Tcde,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// Poset JSON file: {"n": N, "relations": [[p, q], ...]} with p < q.
    #[arg(long, value_name = "FILE")]
    pub poset: Option<PathBuf>,
    /// Shape literal: straight:3,2 | skew:4,3,3,3/2,2 | shifted:3,2,1.
    #[arg(long, value_name = "LIT")]
    pub shape: Option<String>,
    /// Family literal: minuscule:E6, minuscule:axb:2x3, chain:4, grid:2,3, or for
    /// scan and family a family name (straight, strict, skew, minuscule, balanced,
    /// shifted-balanced).
    #[arg(long, value_name = "LIT")]
    pub family: Option<String>,
    /// rowmotion | gyration | sigma:LIST (ranks toggled first to last).
    #[arg(long, value_name = "MAP", default_value = "rowmotion")]
    pub map: String,
    /// Size bound for scan and family.
    #[arg(long)]
    pub k: Option<usize>,
    /// Multichain length for analyze.
    #[arg(long)]
    pub m: Option<usize>,
    /// Maximum number of order ideals.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Maximum boxes for brute-force tableau enumeration.
    #[arg(long)]
    pub enum_budget: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Analyze J(P) rather than the poset file itself.
    #[arg(long)]
    pub lattice: bool,
    /// Also allow the statistic e_bottom - e_top in certificates and witnesses.
    #[arg(long)]
    pub balance_ends: bool,
    /// Validate a previously emitted certificate or witness file.
    #[arg(long, value_name = "FILE")]
    pub check: Option<PathBuf>,
    /// Statistic for homomesy: antichain (default) or toggle:P.
    #[arg(long, default_value = "antichain")]
    pub stat: String,
    /// Include every barely set-valued filling (skew shapes of at most 5 boxes).
    #[arg(long)]
    pub fillings: bool,
    #[arg(long, value_enum, default_value = "cde")]
    pub predicate: PredicateArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(o) => commands::analyze(o),
        Command::CertTcde(o) => commands::cert_tcde(o),
        Command::Witness(o) => commands::witness(o),
        Command::Orbits(o) => commands::orbits(o),
        Command::Homomesy(o) => commands::homomesy(o),
        Command::CountTableaux(o) => commands::count_tableaux(o),
        Command::Scan(o) => commands::scan(o),
        Command::Family(o) => commands::family(o),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
