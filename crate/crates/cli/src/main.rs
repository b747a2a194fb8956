use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nottingham_core::bounds::ParamSet;
use nottingham_core::suites::{run_search, run_suite, table_rows, RangeSpec, RunReport, Suite, SuiteConfig};

/// Verification suites, witness search and bound tables for depths of
/// p-th powers in the Nottingham group.
#[derive(Parser, Debug)]
#[command(name = "nottingham", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named verification suite over a parameter grid.
    Verify(VerifyArgs),
    /// Search for f, g over F_p attaining the depth bound.
    Search(SearchArgs),
    /// Tabulate e(k, n) and the depth bound.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of: theorem-a, theorem-b, lemma-powers, lemma-basic, up-congruence,
    /// matrix-vs-direct, c-vs-pi, bridge, mp-row, modp, ens, csum, genfun,
    /// slm, residue, kk0, corollary-pm.
    suite: String,
    /// Primes, e.g. "2,3" or "2..5" (non-primes are rejected).
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    k: Option<String>,
    /// May use k as a bound, e.g. "k..8".
    #[arg(long)]
    n: Option<String>,
    /// Exponent of p for corollary-pm.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random candidates after the structured ones (theorem-b).
    #[arg(long)]
    budget: Option<usize>,
    /// Random samples per grid point (lemma-basic, corollary-pm).
    #[arg(long)]
    samples: Option<usize>,
    /// Largest index for the rational-function suites.
    #[arg(long)]
    jmax: Option<usize>,
    /// Working precision for lemma-powers, lemma-basic and mp-row.
    #[arg(long)]
    precision_override: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 6)]
    kmax: u64,
    #[arg(long, default_value_t = 12)]
    nmax: u64,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

enum Failure {
    Usage(String),
}

fn range(flag: &str, v: Option<String>) -> Result<Option<RangeSpec>, Failure> {
    v.map(|s| s.parse().map_err(|e| Failure::Usage(format!("--{flag}: {e}")))).transpose()
}

fn verify(args: VerifyArgs) -> Result<(RunReport, bool), Failure> {
    let suite: Suite = args.suite.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    let cfg = SuiteConfig {
        p: range("p", args.p)?,
        k: range("k", args.k)?,
        n: range("n", args.n)?,
        m: args.m,
        seed: args.seed,
        budget: args.budget,
        samples: args.samples,
        jmax: args.jmax,
        precision_override: args.precision_override,
    };
    let report = run_suite(suite, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((report, args.json))
}

fn search(args: SearchArgs) -> Result<(RunReport, bool), Failure> {
    let ps = ParamSet::new(args.p, args.k, args.n).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((run_search(&ps, args.budget, args.seed), args.json))
}

fn table(args: TableArgs) -> Result<ExitCode, Failure> {
    let rows = table_rows(args.p, args.kmax, args.nmax).map_err(|e| Failure::Usage(e.to_string()))?;
    if args.csv {
        println!("p,k,n,e,bound");
        for r in &rows {
            println!("{},{},{},{},{}", r.p, r.k, r.n, r.e, r.bound);
        }
    } else if args.json {
        let grid = vec![
            ("p".to_string(), args.p.to_string()),
            ("kmax".to_string(), args.kmax.to_string()),
            ("nmax".to_string(), args.nmax.to_string()),
        ];
        let mut report = RunReport::new("table", grid, 0, Vec::new());
        report.pass = true;
        report.table = Some(rows);
        println!("{}", report.to_json());
    } else {
        println!("{:>4} {:>4} {:>4} {:>6}", "k", "n", "e", "bound");
        for r in &rows {
            println!("{:>4} {:>4} {:>4} {:>6}", r.k, r.n, r.e, r.bound);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Table(a) => {
            return table(a).unwrap_or_else(|Failure::Usage(msg)| {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            })
        }
    };
    match outcome {
        Ok((report, json)) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
