//! `spa`: run scenario queries and the bundled gallery from the command line.

mod commands;
mod error;
mod gallery;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args as ClapArgs, Parser, Subcommand};

use commands::{dispatch, Settings};
use error::CliError;
use report::{parse_precision, Args};
use scenario::{Env, Scenario};

/// Exit status when a gallery row or a scenario expectation fails.
const EXIT_MISMATCH: u8 = 1;

#[derive(Parser)]
#[command(name = "spa", version, about = "Exact computations with adic spectra at desk scale")]
struct Cli {
    /// p-adic precision and degree cut-off.
    #[arg(long, global = true, default_value = "8,32", value_parser = parse_precision)]
    precision: (i64, u32),
    /// Truncation for ascending families.
    #[arg(long = "n-max", global = true, default_value_t = 8)]
    n_max: usize,
    /// Also write the output to DIR/<command>.txt (overrides SPA_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapArgs)]
struct ScenarioArg {
    /// Scenario JSON with the named definitions.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// |f(x)| for a point and a series.
    Eval {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        point: String,
        /// A series name or a literal in T.
        #[arg(long)]
        series: String,
    },
    /// Type, support and continuity of a point.
    Classify {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        point: String,
    },
    /// Membership of a point in a rational subset (`whole` is always defined).
    Member {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        point: String,
        #[arg(long)]
        subset: String,
    },
    /// Pieces of a covering and verification at sample points.
    Cover {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        covering: String,
        /// Comma-separated point names; defaults to all scenario points.
        #[arg(long)]
        samples: Option<String>,
    },
    /// Refines a Laurent covering into simple Laurent coverings.
    Reduce {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        covering: String,
    },
    /// Presentation of the localization along a rational subset.
    Localize {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        subset: String,
    },
    /// Completion of a presentation.
    Complete {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
    },
    /// Quotient by one relation.
    Quotient {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
        #[arg(long)]
        relation: String,
    },
    /// Generic fiber of an integral model.
    GenericFiber {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
    },
    /// Reduction modulo p of an integral model.
    SpecialFiber {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
    },
    /// Fiber product of two presentations over a third.
    FiberProduct {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        over: String,
        /// `adic` or `ascending`.
        #[arg(long, default_value = "adic")]
        mode: String,
    },
    /// Analytification of an affine scheme of finite type over Qp.
    Analytify {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        presentation: String,
        /// Comma-separated series to test as global sections.
        #[arg(long)]
        test: Option<String>,
    },
    /// The projective line from two disc charts and its global sections.
    ProjectiveLine {
        #[command(flatten)]
        sc: ScenarioArg,
        #[arg(long)]
        test: Option<String>,
    },
    /// Three-term sequence for the covering {|t| <= 1}, {|t| >= 1}.
    SheafCheck {
        #[command(flatten)]
        sc: ScenarioArg,
        /// Scenario name, presentation JSON file, or catalog entry.
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value = "T")]
        t: String,
    },
    /// Certificates that Z dies on both halves of the non-sheafy covering.
    Buzver,
    /// Number of points of Spa of an affinoid field.
    SpaCount {
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long)]
        discrete: bool,
    },
    /// Runs the bundled scenarios and prints a conformance table.
    Gallery,
    /// Runs every query of a scenario and checks its expectations.
    Run { scenario: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Classify { .. } => "classify",
            Command::Member { .. } => "member",
            Command::Cover { .. } => "cover",
            Command::Reduce { .. } => "reduce",
            Command::Localize { .. } => "localize",
            Command::Complete { .. } => "complete",
            Command::Quotient { .. } => "quotient",
            Command::GenericFiber { .. } => "generic-fiber",
            Command::SpecialFiber { .. } => "special-fiber",
            Command::FiberProduct { .. } => "fiber-product",
            Command::Analytify { .. } => "analytify",
            Command::ProjectiveLine { .. } => "projective-line",
            Command::SheafCheck { .. } => "sheaf-check",
            Command::Buzver => "buzver",
            Command::SpaCount { .. } => "spa-count",
            Command::Gallery => "gallery",
            Command::Run { .. } => "run",
        }
    }

    /// Scenario path and named arguments of a single-query command.
    fn query(&self) -> (Option<&PathBuf>, Args) {
        let mut a = Args::default();
        let sc = match self {
            Command::Eval { sc, point, series } => {
                a.set("point", Some(point));
                a.set("series", Some(series));
                sc
            }
            Command::Classify { sc, point } => {
                a.set("point", Some(point));
                sc
            }
            Command::Member { sc, point, subset } => {
                a.set("point", Some(point));
                a.set("subset", Some(subset));
                sc
            }
            Command::Cover { sc, covering, samples } => {
                a.set("covering", Some(covering));
                a.set("samples", samples.as_ref());
                sc
            }
            Command::Reduce { sc, covering } => {
                a.set("covering", Some(covering));
                sc
            }
            Command::Localize {
                sc,
                presentation,
                subset,
            } => {
                a.set("presentation", Some(presentation));
                a.set("subset", Some(subset));
                sc
            }
            Command::Complete { sc, presentation }
            | Command::GenericFiber { sc, presentation }
            | Command::SpecialFiber { sc, presentation } => {
                a.set("presentation", Some(presentation));
                sc
            }
            Command::Quotient {
                sc,
                presentation,
                relation,
            } => {
                a.set("presentation", Some(presentation));
                a.set("relation", Some(relation));
                sc
            }
            Command::FiberProduct {
                sc,
                left,
                right,
                over,
                mode,
            } => {
                a.set("left", Some(left));
                a.set("right", Some(right));
                a.set("over", Some(over));
                a.set("mode", Some(mode));
                sc
            }
            Command::Analytify { sc, presentation, test } => {
                a.set("presentation", Some(presentation));
                a.set("test", test.as_ref());
                sc
            }
            Command::ProjectiveLine { sc, test } => {
                a.set("test", test.as_ref());
                sc
            }
            Command::SheafCheck { sc, presentation, t } => {
                a.set("presentation", Some(presentation));
                a.set("t", Some(t));
                sc
            }
            Command::SpaCount { rank, discrete } => {
                a.set("rank", Some(rank));
                a.set("discrete", Some(discrete));
                return (None, a);
            }
            Command::Buzver | Command::Gallery | Command::Run { .. } => return (None, a),
        };
        (sc.scenario.as_ref(), a)
    }
}

fn execute(cli: &Cli, set: Settings) -> Result<(String, u8), CliError> {
    match &cli.command {
        Command::Gallery => {
            let rows = gallery::run_gallery(gallery::GALLERY, set);
            let ok = rows.iter().all(|r| r.failures.is_empty() && r.queries > 0);
            Ok((gallery::render_table(&rows), if ok { 0 } else { EXIT_MISMATCH }))
        }
        Command::Run { scenario } => {
            let sc = Scenario::load(scenario)?;
            let mut out = String::new();
            if let Some(t) = &sc.title {
                out.push_str(&format!("## {t}\n"));
            }
            let mut code = 0u8;
            for o in gallery::run_scenario(&sc, set)? {
                match &o.result {
                    Ok(rep) => out.push_str(&rep.to_string()),
                    Err(e) => {
                        out.push_str(&format!("# {}\nerror: {e}\n", o.command));
                        code = code.max(e.exit_code() as u8);
                    }
                }
                if !o.mismatches.is_empty() {
                    out.push_str(&format!("mismatch: {}\n", gallery::describe_failure(&o)));
                    code = code.max(EXIT_MISMATCH);
                }
            }
            Ok((out, code))
        }
        cmd => {
            let (path, args) = cmd.query();
            let sc = match path {
                Some(p) => Scenario::load(p)?,
                None => Scenario::default(),
            };
            let env = Env::build(&sc, set.precision.1)?;
            let rep = dispatch(cmd.name(), &env, &args, set)?;
            Ok((rep.to_string(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let set = Settings {
        precision: cli.precision,
        n_max: cli.n_max,
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("SPA_OUT_DIR").map(PathBuf::from));
    let (text, code) = match execute(&cli, set) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    print!("{text}");
    if let Some(dir) = out_dir {
        let path = dir.join(format!("{}.txt", cli.command.name()));
        if let Err(e) = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, &text)) {
            eprintln!("error: cannot write `{}`: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
