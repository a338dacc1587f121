use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use otw_cli::bench::{bench, bench_csv, BenchFamily};
use otw_cli::error::write_file;
use otw_cli::report::reports_csv;
use otw_cli::run::{run_algorithm, Algorithm, RunOptions};
use otw_cli::seeds::{parse_m_range, parse_seeds};
use otw_cli::suites::{rows_csv, run_suite, summarize, Suite};
use otw_cli::{CliError, CliResult};
use otw_core::instances::{
    gen_adaptive_star, gen_greedy_hard_line, gen_random, read_instance, to_json, validate_instance,
    write_instance, Family, GenParams, Instance, GREEDY_HARD_EPSILON,
};
use otw_core::transport::{GreedyAssigner, ItinerantAssigner, RetrospectiveAssigner};

#[derive(Parser)]
#[command(
    name = "otw",
    version,
    about = "Online transportation simulators, oracles and invariant suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFamily {
    Euclidean,
    Line,
    Graph,
    StarAdaptive,
    GreedyHard,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Adversary {
    #[value(name = "C")]
    C,
    Greedy,
    Retrospective,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    Gen {
        family: GenFamily,
        #[arg(long, env = "OTW_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Number of arrivals (default: fill every slot)
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        cap_min: u32,
        #[arg(long, default_value_t = 3)]
        cap_max: u32,
        /// Offset for the greedy-hard family
        #[arg(long, default_value_t = GREEDY_HARD_EPSILON)]
        eps: f64,
        /// Algorithm the star-adaptive adversary plays against
        #[arg(long, value_enum, default_value_t = Adversary::C)]
        against: Adversary,
        /// Output path; the instance JSON goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm on an instance file and print a report row
    Run {
        instance: PathBuf,
        #[arg(long, value_enum)]
        alg: Algorithm,
        /// Write the event trace (or the assignment table for baselines) here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Enable inline guards and invariant checks; exit 1 on any failure
        #[arg(long)]
        assert: bool,
        /// Add a wall-clock column to the report
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite over a seed range
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Seeds as N, A..B or A..=B (both ends included)
        #[arg(long, default_value = "1..100")]
        seeds: String,
        /// Write one CSV row per checked quantity here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate empirical competitive ratios
    Bench {
        #[arg(value_enum)]
        family: BenchFamily,
        #[arg(long, default_value = "2..8")]
        m: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, env = "OTW_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summary_line(inst: &Instance) -> String {
    let violations = validate_instance(inst);
    format!(
        "{}: m={} k={} capacity={} {}",
        inst.name,
        inst.garage_count(),
        inst.car_count(),
        inst.layout.total_capacity(),
        if violations.is_empty() {
            "valid".to_string()
        } else {
            format!("INVALID ({} violations)", violations.len())
        }
    )
}

#[allow(clippy::too_many_arguments)]
fn gen(
    family: GenFamily,
    seed: u64,
    m: usize,
    k: Option<usize>,
    caps: (u32, u32),
    eps: f64,
    against: Adversary,
    out: Option<PathBuf>,
) -> CliResult<()> {
    let inst = match family {
        GenFamily::GreedyHard => gen_greedy_hard_line(m, eps)?,
        GenFamily::StarAdaptive => match against {
            Adversary::C => gen_adaptive_star(m, ItinerantAssigner::new)?,
            Adversary::Greedy => gen_adaptive_star(m, GreedyAssigner::new)?,
            Adversary::Retrospective => gen_adaptive_star(m, RetrospectiveAssigner::new)?,
        },
        random => {
            let family = match random {
                GenFamily::Euclidean => Family::Euclidean,
                GenFamily::Line => Family::Line,
                _ => Family::Graph,
            };
            let mut p = GenParams::new(seed, family, m);
            p.capacity_range = caps;
            p.arrivals = k;
            gen_random(&p)?
        }
    };
    match &out {
        Some(path) => {
            write_instance(&inst, path)?;
            println!("{}", summary_line(&inst));
        }
        None => {
            print!("{}", to_json(&inst));
            eprintln!("{}", summary_line(&inst));
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Gen {
            family,
            seed,
            m,
            k,
            cap_min,
            cap_max,
            eps,
            against,
            out,
        } => {
            gen(family, seed, m, k, (cap_min, cap_max), eps, against, out)?;
            Ok(true)
        }
        Command::Run {
            instance,
            alg,
            trace,
            assert,
            timing,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let opts = RunOptions {
                assert,
                trace: trace.is_some(),
            };
            let result = run_algorithm(&inst, alg, opts)?;
            if let (Some(path), Some(text)) = (&trace, &result.trace) {
                write_file(path, text)?;
            }
            emit(
                out.as_ref(),
                &reports_csv(std::slice::from_ref(&result.report), timing)?,
            )?;
            let ok = result.report.all_pass();
            if !ok {
                for c in result.report.failures() {
                    eprintln!("FAIL {}: {}", c.name, c.detail);
                }
                if let Some(dump) = &result.counterexample {
                    eprintln!("counterexample:\n{dump}");
                }
            }
            Ok(ok)
        }
        Command::Verify { suite, seeds, out } => {
            let seeds = parse_seeds(&seeds)?;
            let rows = run_suite(suite, &seeds)?;
            if let Some(path) = &out {
                write_file(path, &rows_csv(&rows)?)?;
            }
            let mut ok = true;
            for s in summarize(&rows) {
                println!("{}: {}/{} pass", s.suite, s.passed, s.cases);
                if s.suite == "mpfs" {
                    for r in &rows {
                        if r.suite == "mpfs" {
                            println!("  {}: {}", r.check, r.detail);
                        }
                    }
                }
                if let Some(f) = &s.first_failure {
                    ok = false;
                    println!(
                        "  first counterexample: seed {} ({}) {}: {} vs {} {}",
                        f.seed, f.instance, f.check, f.value, f.bound, f.detail
                    );
                }
            }
            Ok(ok)
        }
        Command::Bench {
            family,
            m,
            trials,
            seed,
            out,
        } => {
            let rows = bench(family, parse_m_range(&m)?, trials, seed)?;
            emit(out.as_ref(), &bench_csv(&rows)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Core(otw_core::Error::Invalid(list)) = &e {
                for v in list {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}
