use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rispace::checks::{self, CheckSuiteConfig};
use rispace::classh;
use rispace::optimal;
use rispace::phifun::tabulate;
use rispace::report::{self, Report};
use rispace::{Error, EvaluationGrid, OperatorSpec, PhiExpr, SpaceSpec};

#[derive(Parser)]
#[command(name = "rispace", version, about = "Hardy operators on rearrangement-invariant spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Common {
    /// Evaluation grid as tmin,tmax,n.
    #[arg(long)]
    grid: Option<EvaluationGrid>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (directory for `check`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite of named checks.
    Check {
        /// Built-in suite name.
        #[arg(long, conflicts_with = "config")]
        suite: Option<String>,
        /// Suite configuration file (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate a function on the grid as CSV.
    Tabulate {
        #[arg(value_enum)]
        kind: Kind,
        /// φ as JSON, a shorthand name, or a file.
        #[arg(long)]
        phi: Option<String>,
        /// Space as JSON or a file.
        #[arg(long)]
        space: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Class-𝓗 verification.
    Classh {
        #[command(subcommand)]
        action: ClasshAction,
    },
    /// Fundamental function of the optimal range of S on X.
    Range {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        common: Common,
    },
    /// Optimal domain of S into X.
    Domain {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        common: Common,
    },
    /// The functors D_X and R_X.
    Functor {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        space: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum ClasshAction {
    Verify {
        /// Operator as JSON or a file.
        #[arg(long)]
        operator: String,
        #[arg(long, default_value_t = 200)]
        corpus: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Phi,
    Tilde,
    Psi,
    W,
    Bracket,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    D,
    R,
}

/// Failures split by exit code.
enum Failure {
    Input(anyhow::Error),
    Run(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::InvalidOperator(_) => Failure::Input(e.into()),
            other => Failure::Run(other.into()),
        }
    }
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

/// Inline JSON, a file holding JSON, or a bare name taken as a JSON string.
fn json_arg(s: &str) -> Result<Value, Failure> {
    let p = Path::new(s);
    if p.is_file() {
        let text = fs::read_to_string(p).with_context(|| format!("reading {s}")).map_err(input)?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {s}")).map_err(input);
    }
    Ok(serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string())))
}

fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents).map_err(Failure::Run),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Check { suite, config, common } => {
            let mut cfg = match (suite, config) {
                (Some(name), _) => checks::builtin_suite(&name).ok_or_else(|| input(anyhow!("unknown suite {name:?}")))?,
                (None, Some(path)) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
                    serde_json::from_str::<CheckSuiteConfig>(&text)
                        .with_context(|| format!("parsing {}", path.display()))
                        .map_err(input)?
                }
                (None, None) => return Err(input(anyhow!("give --suite or --config"))),
            };
            if let Some(g) = common.grid {
                cfg.grid = g;
            }
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            let reports = checks::run_suite(&cfg)?;
            if let Some(dir) = &common.out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(Failure::Run)?;
                for (i, r) in reports.iter().enumerate() {
                    write_atomic(&dir.join(format!("{i:03}-{}.json", r.check)), &pretty(r)).map_err(Failure::Run)?;
                }
                write_atomic(&dir.join("summary.csv"), &report::summary_csv(&reports)).map_err(Failure::Run)?;
            }
            match common.format {
                Format::Csv => print!("{}", report::summary_csv(&reports)),
                Format::Json if common.out.is_none() => print!("{}", pretty(&reports)),
                Format::Json => {
                    for r in &reports {
                        println!("{:<22} {}", r.check, r.verdict.as_str());
                    }
                }
            }
            Ok(reports.iter().all(|r: &Report| r.verdict.ok()))
        }
        Command::Tabulate { kind, phi, space, common } => {
            let grid = common.grid.unwrap_or_default();
            let t = grid.points();
            let phi = phi.map(|s| json_arg(&s).and_then(|v| Ok(PhiExpr::from_json(&v)?))).transpose()?;
            let space = space.map(|s| json_arg(&s).and_then(|v| Ok(SpaceSpec::from_json(&v)?))).transpose()?;
            let need_phi = || phi.clone().ok_or_else(|| input(anyhow!("this table needs --phi")));
            let columns: Vec<(&str, Vec<f64>)> = match kind {
                Kind::Phi => vec![("phi", tabulate(&need_phi()?, &grid)?)],
                Kind::Tilde => vec![("tilde", tabulate(&PhiExpr::tilde_of(need_phi()?), &grid)?)],
                Kind::Psi => vec![("psi", tabulate(&PhiExpr::psi_of(need_phi()?), &grid)?)],
                Kind::W => {
                    let x = space.ok_or_else(|| input(anyhow!("W needs --space")))?;
                    vec![("w", optimal::domain(&x, &grid)?.fundamental)]
                }
                Kind::Bracket => {
                    let x = match (space, phi) {
                        (Some(x), _) => x,
                        (None, Some(p)) => SpaceSpec::Lorentz(p),
                        (None, None) => return Err(input(anyhow!("bracket needs --space or --phi"))),
                    };
                    let r = optimal::range(&x, &grid)?;
                    vec![("lower", r.fundamental_lower), ("upper", r.fundamental_upper)]
                }
            };
            let text = match common.format {
                Format::Csv => {
                    let cols: Vec<(&str, &[f64])> = columns.iter().map(|(n, v)| (*n, v.as_slice())).collect();
                    report::table_csv(&t, &cols)
                }
                Format::Json => {
                    let mut m = serde_json::Map::new();
                    m.insert("t".into(), json!(t));
                    for (n, v) in &columns {
                        m.insert((*n).into(), json!(v));
                    }
                    pretty(&Value::Object(m))
                }
            };
            emit(common.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Classh { action: ClasshAction::Verify { operator, corpus, seed, out } } => {
            let op = OperatorSpec::from_json(&json_arg(&operator)?)?;
            op.validate(&EvaluationGrid::default())?;
            let rep = classh::verify(&op, corpus, seed);
            emit(out.as_deref(), &pretty(&rep))?;
            for s in &rep.sections {
                eprintln!("{:<12} {} ({} of {} failed)", format!("{:?}", s.axiom), if s.pass { "pass" } else { "fail" }, s.failures, s.checked);
            }
            Ok(rep.pass)
        }
        Command::Range { space, common } => {
            let x = SpaceSpec::from_json(&json_arg(&space)?)?;
            let grid = common.grid.unwrap_or_default();
            let r = optimal::range(&x, &grid)?;
            let text = match common.format {
                Format::Json => pretty(&r),
                Format::Csv => report::table_csv(&r.points, &[("lower", &r.fundamental_lower), ("upper", &r.fundamental_upper)]),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Domain { space, common } => {
            let x = SpaceSpec::from_json(&json_arg(&space)?)?;
            let grid = common.grid.unwrap_or_default();
            let d = optimal::domain(&x, &grid)?;
            let text = match common.format {
                Format::Json => pretty(&d),
                Format::Csv => report::table_csv(&d.points, &[("w", &d.fundamental)]),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Functor { which, space, common } => {
            let x = SpaceSpec::from_json(&json_arg(&space)?)?;
            let grid = common.grid.unwrap_or_default();
            let (pts, lower, upper, json) = match which {
                Which::D => {
                    let d = optimal::functor_dx(&x, &grid)?;
                    let j = pretty(&d);
                    (d.points, d.fundamental, d.fundamental_upper, j)
                }
                Which::R => {
                    let r = optimal::functor_rx(&x, &grid)?;
                    let j = pretty(&r);
                    (r.points, r.fundamental_lower, r.fundamental_upper, j)
                }
            };
            let text = match common.format {
                Format::Json => json,
                Format::Csv => report::table_csv(&pts, &[("lower", &lower), ("upper", &upper)]),
            };
            emit(common.out.as_deref(), &text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
