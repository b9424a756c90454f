use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cube_entropy::cube::NoiseParam;
use cube_entropy::error::Result;
use cube_entropy::io::read_function;
use cube_entropy::verify::commands::{bound_sweep, lp_instance, parse_range, theorem_sweep, LpSource, Theorem};
use cube_entropy::verify::ck::ck_search_with;
use cube_entropy::verify::report::{to_csv, to_json};
use cube_entropy::verify::suite::{run_suite, SuiteConfig};
use cube_entropy::verify::{all_pass, CheckReport, Ctx};

#[derive(Parser)]
#[command(name = "verify", version, about = "Check entropy, noise and LP bounds on the boolean cube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Mgl,
    Smgl,
    Main,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full configured suite.
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one checker over seeded random functions.
    Theorem {
        name: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exhaustive search over every boolean function on a small cube.
    CkSearch {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        eps_grid: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Solve one program instance and check the dominance chain.
    Lp {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: f64,
        /// CubeFunction file (JSON or CUBF binary); uses A = {1..k}, m = k + 1.
        #[arg(long, conflicts_with = "random")]
        from_function: Option<PathBuf>,
        /// Boundary data from a seeded random nonnegative set function.
        #[arg(long)]
        random: bool,
        /// With --random, draw every entry independently instead.
        #[arg(long, requires = "random")]
        iid: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the program in plain-text standard form to this path.
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sweep one bound over a dimension range and noise grid.
    Sweep {
        #[arg(long, value_enum)]
        bound: Bound,
        #[arg(long, default_value = "3..8")]
        n_range: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.4, 0.45, 0.49])]
        eps_grid: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Emit every instance instead of one report per cell.
        #[arg(long)]
        per_instance: bool,
    },
}

fn render(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => to_json(reports),
        Format::Csv => to_csv(reports),
    }
}

fn summarize(reports: &[CheckReport]) {
    for r in reports {
        eprintln!(
            "{} {} n={} eps={} margin={:e} instances={} violations={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.n.map_or("-".into(), |n| n.to_string()),
            r.eps.map_or("-".into(), |e| e.to_string()),
            r.margin,
            r.instances,
            r.violations,
        );
    }
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx::default();
    let (reports, format) = match cli.command {
        Command::Suite { config, out } => {
            let cfg = match config {
                Some(path) => SuiteConfig::load(path)?,
                None => SuiteConfig::default(),
            };
            let output = run_suite(&cfg)?;
            summarize(&output.reports);
            eprintln!("{}", output.header.substitution);
            let json = output.to_json();
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            return Ok(output.pass());
        }
        Command::Theorem { name, n, eps, trials, seed, format } => {
            (theorem_sweep(&ctx, name.parse()?, n, eps, trials, seed)?, format)
        }
        Command::CkSearch { n, eps, mut eps_grid, format } => {
            eps_grid.extend(eps);
            if eps_grid.is_empty() {
                eps_grid = vec![0.3, 0.4, 0.45, 0.49];
            }
            let mut reports = Vec::new();
            for e in eps_grid {
                reports.extend(ck_search_with(&ctx, n, NoiseParam::new(e)?)?.reports());
            }
            (reports, format)
        }
        Command::Lp { k, lambda, from_function, random, iid, seed, export, format } => {
            let source = match (from_function, random, iid) {
                (Some(path), _, _) => LpSource::Function(read_function(path)?),
                (None, true, false) => LpSource::Random { seed },
                (None, true, true) => LpSource::RandomIid { seed },
                (None, false, _) => LpSource::Zero,
            };
            let (problem, reports) = lp_instance(&ctx, k, lambda, &source)?;
            if let Some(path) = export {
                std::fs::write(path, problem.to_text())?;
            }
            (reports, format)
        }
        Command::Sweep { bound, n_range, eps_grid, trials, seed, format, per_instance } => {
            let bound = match bound {
                Bound::Mgl => Theorem::Mgl,
                Bound::Smgl => Theorem::Smgl,
                Bound::Main => Theorem::Main,
            };
            (bound_sweep(&ctx, bound, parse_range(&n_range)?, &eps_grid, trials, seed, per_instance)?, format)
        }
    };
    print!("{}", render(&reports, format));
    if matches!(format, Format::Json) {
        println!();
    }
    Ok(all_pass(&reports))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
