use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use privinfo::belief::{AtomicDist, RationalDist};
use privinfo::design_games::{designer_optimum, DesignerProblem};
use privinfo::disclosure::{
    disclosure_intervals, finite_disclosure, independence_table, sample_disclosures, samples_to_csv,
};
use privinfo::error::Error;
use privinfo::feasibility::{feasibility_certificate, is_feasible_pair};
use privinfo::infobounds::{check_binary_strengthening, check_quadratic_bound, check_superadditivity};
use privinfo::par::Exec;
use privinfo::structures::{build_associated_set, FiniteStructure, GridPartition, GridSet, RegionSet};
use privinfo::uniqueness::{
    grid_set_report, is_pareto_optimal_2x2, lorentz_matrix, partition_uniqueness_grid, switched_mate,
    BinaryMatrix, UniquenessReport, Witness,
};
use privinfo::welfare::{maximize_welfare, WelfareProblem};

#[derive(Parser)]
#[command(name = "privinfo", version, about = "Private private information structures")]
struct Cli {
    /// Absolute tolerance for order and equality tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Grid resolution R for rasterization.
    #[arg(long, global = true, default_value_t = 256)]
    resolution: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ineq {
    Superadditivity,
    Binary,
    Quadratic,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugate of a belief distribution (CSV: CDF of the conjugate).
    Conjugate {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Exact rational arithmetic; rationals are printed as strings.
        #[arg(long)]
        exact: bool,
    },
    /// Whether a pair of belief distributions is on the Pareto frontier.
    ParetoCheck {
        #[arg(long)]
        mu1: PathBuf,
        #[arg(long)]
        mu2: PathBuf,
    },
    /// Set (or partition) of uniqueness test for a grid or a binary matrix.
    Uniqueness {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Read the cells as state labels and run the partition test.
        #[arg(long)]
        partition: bool,
    },
    /// Optimal private disclosure about the state, independent of agent 1's signal.
    Disclose {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Also write the sampled `s1,s2star` pairs to this CSV file.
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Whether two belief distributions can come from independent signals.
    Feasible {
        #[arg(long)]
        mu1: PathBuf,
        #[arg(long)]
        mu2: PathBuf,
    },
    /// Welfare-maximizing private private structure for two decision makers.
    Welfare {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Information inequality report for a private private structure.
    Bounds {
        #[arg(long, value_enum)]
        ineq: Ineq,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Designer-optimal recommendations in a zero-sum game.
    Designer {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Rasterize a region set (or the set associated with a structure).
    Rasterize {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Input(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Budget(_)) => 3,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Input(s) => s.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

enum Output {
    Json(Value),
    Text(String),
}

fn read_json(path: Option<&Path>) -> Outcome<Value> {
    let (text, name) = match path {
        Some(p) if p != Path::new("-") => (
            fs::read_to_string(p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?,
            p.display().to_string(),
        ),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("cannot read stdin: {e}")))?;
            (s, "stdin".to_string())
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON in {name}: {e}")))
}

fn read_dist(path: &Path) -> Outcome<AtomicDist> {
    Ok(AtomicDist::<f64>::from_json(&read_json(Some(path))?)?)
}

fn csv_unsupported(cmd: &str) -> Failure {
    Failure::Input(format!("--format csv is not available for `{cmd}`"))
}

fn run(cli: &Cli) -> Outcome<Output> {
    let exec = Exec::Parallel;
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Conjugate { input, exact } => {
            let v = read_json(input.as_deref())?;
            if *exact {
                let c = RationalDist::from_json(&v)?.conjugate();
                Ok(if csv { Output::Text(c.step_cdf().to_csv()) } else { Output::Json(c.to_json()) })
            } else {
                let c = AtomicDist::<f64>::from_json(&v)?.conjugate();
                Ok(if csv { Output::Text(c.step_cdf().to_csv()) } else { Output::Json(c.to_json()) })
            }
        }
        Command::ParetoCheck { mu1, mu2 } => {
            if csv {
                return Err(csv_unsupported("pareto-check"));
            }
            let optimal = is_pareto_optimal_2x2(&read_dist(mu1)?, &read_dist(mu2)?, cli.tol)?;
            Ok(Output::Json(json!({ "pareto_optimal": optimal })))
        }
        Command::Uniqueness { input, partition } => {
            if csv {
                return Err(csv_unsupported("uniqueness"));
            }
            let v = read_json(input.as_deref())?;
            let report = if v.is_array() {
                let m = BinaryMatrix::from_json(&v)?;
                let unique = lorentz_matrix(&m);
                let witness = if unique { None } else { switched_mate(&m).map(Witness::Mate) };
                UniquenessReport { unique, witness }
            } else if *partition {
                let g = GridPartition::from_json(&v)?;
                UniquenessReport { unique: partition_uniqueness_grid(&g, exec)?, witness: None }
            } else {
                grid_set_report(&GridSet::from_json(&v)?, exec)?
            };
            Ok(Output::Json(report.to_json()))
        }
        Command::Disclose { input, samples, samples_out } => {
            let s = FiniteStructure::from_json(&read_json(input.as_deref())?)?;
            let disclosed = finite_disclosure(&s)?;
            let draws = sample_disclosures(&s, *samples, cli.seed, exec)?;
            if let Some(path) = samples_out {
                fs::write(path, samples_to_csv(&draws))
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            if csv {
                return Ok(Output::Text(samples_to_csv(&draws)));
            }
            let intervals: Vec<Value> = disclosure_intervals(&s)?
                .iter()
                .map(|iv| json!([privinfo::scalar::rational_string(&iv.lo), privinfo::scalar::rational_string(&iv.hi)]))
                .collect();
            let mut out = json!({
                "structure": disclosed.to_json(),
                "intervals": intervals,
                "beliefs": disclosed.posterior_binary(1)?.to_json(),
            });
            if !draws.is_empty() {
                let t = independence_table(&s, &draws)?;
                out["samples"] = json!(draws.len());
                out["seed"] = json!(cli.seed);
                out["independence_max_z"] = json!(t.max_z);
            }
            Ok(Output::Json(out))
        }
        Command::Feasible { mu1, mu2 } => {
            if csv {
                return Err(csv_unsupported("feasible"));
            }
            let (a, b) = (read_dist(mu1)?, read_dist(mu2)?);
            let feasible = is_feasible_pair(&a, &b, cli.tol);
            let certificate = feasibility_certificate(&a, &b, cli.tol).map(|s| s.to_json());
            Ok(Output::Json(json!({ "feasible": feasible, "certificate": certificate })))
        }
        Command::Welfare { input } => {
            if csv {
                return Err(csv_unsupported("welfare"));
            }
            let p = WelfareProblem::from_json(&read_json(input.as_deref())?)?;
            Ok(Output::Json(maximize_welfare(&p, exec).to_json()))
        }
        Command::Bounds { ineq, input } => {
            if csv {
                return Err(csv_unsupported("bounds"));
            }
            let s = FiniteStructure::from_json(&read_json(input.as_deref())?)?;
            let report = match ineq {
                Ineq::Superadditivity => check_superadditivity(&s)?,
                Ineq::Binary => check_binary_strengthening(&s)?,
                Ineq::Quadratic => check_quadratic_bound(&s)?,
            };
            Ok(Output::Json(report.to_json()))
        }
        Command::Designer { input } => {
            if csv {
                return Err(csv_unsupported("designer"));
            }
            let p = DesignerProblem::from_json(&read_json(input.as_deref())?)?;
            eprintln!(
                "warning: recommendations are constrained to the Nash equilibrium product; \
                 this is only forced when the game's correlated equilibrium is unique, which is not checked"
            );
            let sol = designer_optimum(&p)?;
            Ok(Output::Json(sol.to_json(&p)?))
        }
        Command::Rasterize { input } => {
            let v = read_json(input.as_deref())?;
            let region = if v.get("bands").is_some() {
                RegionSet::from_json(&v)?
            } else {
                build_associated_set(&FiniteStructure::from_json(&v)?)?
            };
            let grid = region.rasterize(cli.resolution, exec)?;
            if csv {
                let mut out = String::from("i,j,p\n");
                for (i, row) in grid.layer_matrix(1).iter().enumerate() {
                    for (j, p) in row.iter().enumerate() {
                        out.push_str(&format!("{i},{j},{p}\n"));
                    }
                }
                return Ok(Output::Text(out));
            }
            Ok(Output::Json(grid.to_json()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match out {
                Output::Json(v) => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
                Output::Text(t) => t,
            };
            let mut stdout = io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message().replace('\n', " "));
            ExitCode::from(f.exit_code())
        }
    }
}
