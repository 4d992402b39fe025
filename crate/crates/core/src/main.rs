use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use robust_knapsack::bounds::{bound_table, parse_grid};
use robust_knapsack::exact::{brute_force_opt, robustness_sweep_with, SweepOptions};
use robust_knapsack::generate::{generate, GeneratorKind, GeneratorSpec};
use robust_knapsack::greedy::{agreedy, mgreedy, Solution};
use robust_knapsack::policy::{execute_policy, make_fit_oracle};
use robust_knapsack::verify::verify_instance;
use robust_knapsack::{Error, Instance, Result};

#[derive(Parser)]
#[command(
    name = "robust-knapsack",
    version,
    about = "Submodular knapsack maximization with unknown capacity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Modular,
    Coverage,
    ConcaveModular,
    Planted,
}

impl From<Kind> for GeneratorKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Modular => GeneratorKind::Modular,
            Kind::Coverage => GeneratorKind::Coverage,
            Kind::ConcaveModular => GeneratorKind::ConcaveModular,
            Kind::Planted => GeneratorKind::Planted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Opt,
    Mgreedy,
    Agreedy,
    Policy,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        size_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Element universe size (coverage, planted). Defaults to 2n.
        #[arg(long)]
        elements: Option<usize>,
        /// Probability an item covers an element (coverage, planted).
        #[arg(long)]
        density: Option<f64>,
        /// Exponent of the concave-modular objective.
        #[arg(long)]
        exponent: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve one instance at a known capacity.
    Eval {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        gamma: u64,
        #[arg(long, value_enum)]
        alg: Alg,
    },
    /// Evaluate every algorithm at every breakpoint capacity.
    Sweep {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Tabulate the robustness factor over a curvature grid.
    Bound {
        /// Grid as start:end:step.
        #[arg(long, default_value = "0:1:0.1")]
        grid: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every checker on an instance.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_solution(inst: &Instance, label: &str, gamma: u64, sol: &Solution) {
    println!("algorithm: {label}");
    println!("capacity: {gamma}");
    println!("items: {}", sol.ids(inst).join(","));
    println!("value: {}", sol.value);
    println!("total_size: {}", sol.total_size);
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            size_max,
            seed,
            elements,
            density,
            exponent,
            output,
        } => {
            let mut spec = GeneratorSpec::new(kind.into(), n, size_max, seed);
            if let Some(m) = elements {
                spec.elements = m;
            }
            if let Some(d) = density {
                spec.density = d;
            }
            if let Some(e) = exponent {
                spec.exponent = e;
            }
            emit(output.as_deref(), &generate(&spec)?.to_json())?;
        }
        Command::Eval { input, gamma, alg } => {
            if gamma == 0 {
                return Err(Error::Usage("capacity must be at least 1".into()));
            }
            let inst = Instance::load(&input)?;
            match alg {
                Alg::Opt => print_solution(&inst, "opt", gamma, &brute_force_opt(&inst, gamma)?),
                Alg::Mgreedy => print_solution(&inst, "mgreedy", gamma, &mgreedy(&inst, gamma)),
                Alg::Agreedy => print_solution(&inst, "agreedy", gamma, &agreedy(&inst, gamma)),
                Alg::Policy => {
                    let trace = execute_policy(&inst, &mut make_fit_oracle(gamma));
                    print_solution(&inst, "policy", gamma, &trace.packed);
                    println!("trace:");
                    for a in &trace.attempts {
                        let outcome = if a.fitted { "fit" } else { "overflow" };
                        println!("  {} {} {:?}", inst.id(a.item), outcome, a.phase);
                    }
                    println!("fit_queries: {}", trace.query_count);
                }
            }
        }
        Command::Sweep {
            input,
            output,
            parallel,
        } => {
            let inst = Instance::load(&input)?;
            let report = robustness_sweep_with(&inst, SweepOptions { parallel })?;
            emit(output.as_deref(), &report.to_csv())?;
        }
        Command::Bound { grid, output } => {
            let table = bound_table(&parse_grid(&grid)?)?;
            emit(output.as_deref(), &table.to_csv())?;
        }
        Command::Verify {
            input,
            trials,
            seed,
        } => {
            let inst = Instance::load_unchecked(&input)?;
            let report = verify_instance(&inst, trials, seed)?;
            print!("{}", report.render(&inst));
            let ok = report.passed();
            println!(
                "{}",
                if ok {
                    "verification passed"
                } else {
                    "verification FAILED"
                }
            );
            return Ok(ok);
        }
    }
    Ok(true)
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
