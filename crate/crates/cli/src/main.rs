use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rforge_core::amplify::{amplify, choose_rho, Delta, ExpanderGraph};
use rforge_core::approx::{cover_sequence_cost, two_factor_cover};
use rforge_core::checks::{run_suite, CheckOptions, GadgetChoice, Suite, SuiteReport};
use rforge_core::fglss::Fglss;
use rforge_core::generate::{generate, GenParams, Kind};
use rforge_core::io::{read_json, to_json, InstanceFile};
use rforge_core::pipeline::{render_report, run_pipeline, PipelineOptions};
use rforge_core::reduce::{
    labelcover_to_hvc_with, labelcover_to_setcover_with, p2csp_to_labelcover, MonotoneGadget, Orientation,
};
use rforge_core::seed::SeedStream;
use rforge_core::solve::{solve_cost_hvc, solve_cost_setcover, solve_maxpar, solve_minlab, SolveResult, DEFAULT_CAP};
use rforge_core::{format_rational, normalize_self_loops, parse_rational, Error};

#[derive(Parser)]
#[command(name = "rforge", version, about = "Reconfiguration instances, exact solvers, reductions and property checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance with feasible start and goal.
    Gen(GenArgs),
    /// Apply one reduction to an instance file.
    Reduce {
        #[arg(value_enum)]
        which: Reduction,
        #[command(flatten)]
        io: InOut,
        /// Orientation of the partner sets at the later endpoint (l2sc, l2hvc).
        #[arg(long, value_enum, default_value_t = OrientationArg::Corrected)]
        orientation: OrientationArg,
    },
    /// Compute an exact objective value and a witness sequence.
    Solve {
        #[arg(value_enum)]
        objective: Objective,
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Two-factor approximation for set cover or hypergraph vertex cover.
    Approx {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        budget: Budget,
        /// Also solve exactly and report the ratio.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Amplify a verifier along expander walks.
    Amplify(AmplifyArgs),
    /// Run a property suite (or `all`).
    Check {
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: Budget,
        /// Negative control: run the reductions with a gadget that breaks the covering law.
        #[arg(long)]
        corrupt_gadget: bool,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verifier → FGLSS → normalized → label cover → set cover / hypergraph VC.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        /// Staging directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_amplify: bool,
        /// Walk length of the amplification stage.
        #[arg(long, default_value_t = 1)]
        rho: usize,
        #[command(flatten)]
        budget: Budget,
    },
    /// Render the report of a staged pipeline directory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Budget {
    /// State budget per solve.
    #[arg(long, env = "RFORGE_CAP", default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Vertices, or universe size for set cover.
    #[arg(long, default_value_t = 3)]
    vertices: usize,
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0.6)]
    tightness: f64,
    /// Sets (set cover) or hyperedges (hypergraph).
    #[arg(long, default_value_t = 5)]
    items: usize,
    #[arg(long, default_value_t = 2)]
    uniformity: usize,
    #[arg(long, default_value_t = 1000)]
    attempts: usize,
}

#[derive(Args)]
struct AmplifyArgs {
    #[command(flatten)]
    io: InOut,
    /// Walk length; alternatively give --eps and --delta.
    #[arg(long, conflicts_with_all = ["eps", "delta"])]
    rho: Option<usize>,
    #[arg(long, requires = "delta")]
    eps: Option<String>,
    #[arg(long, requires = "eps")]
    delta: Option<String>,
    /// Degree of a random expander (power of two); default is the complete
    /// graph with loops on 2^r vertices.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Csp,
    Labelcover,
    Setcover,
    Hypergraph,
    Verifier,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Csp => Kind::Csp,
            KindArg::Labelcover => Kind::Labelcover,
            KindArg::Setcover => Kind::Setcover,
            KindArg::Hypergraph => Kind::Hypergraph,
            KindArg::Verifier => Kind::Verifier,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    Fglss,
    P2l,
    L2sc,
    L2hvc,
    Normalize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Corrected,
    Verbatim,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    Maxpar,
    Minlab,
    ScCost,
    HvcCost,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

/// A run that completed but found a property violation.
#[derive(Debug)]
struct Violation;

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("property violation")
    }
}

impl std::error::Error for Violation {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Violation>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExhausted { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> anyhow::Result<InstanceFile> {
    Ok(read_json(path)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen(a) => {
            let params = GenParams {
                vertices: a.vertices,
                alphabet: a.alphabet,
                density: a.density,
                tightness: a.tightness,
                items: a.items,
                uniformity: a.uniformity,
                attempts: a.attempts,
            };
            let file = generate(a.kind.into(), &params, SeedStream::new(a.seed))?;
            emit(a.out.as_deref(), &to_json(&file)?)
        }
        Command::Reduce { which, io, orientation } => {
            let input = load(&io.input)?;
            let out = reduce(which, &input, orientation)?;
            emit(io.out.as_deref(), &to_json(&out)?)
        }
        Command::Solve { objective, io, budget, format } => {
            let input = load(&io.input)?;
            let r = solve(objective, &input, budget.cap)?;
            let text = match format {
                Format::Json => to_json(&r)?,
                Format::Csv => format!(
                    "objective,value,states_explored,witness_length\n{},{},{},{}\n",
                    objective_name(objective),
                    format_rational(&r.value),
                    r.states_explored,
                    r.witness.len()
                ),
                Format::Md => format!(
                    "| objective | value | states explored | witness length |\n|---|---|---|---|\n| {} | {} | {} | {} |\n",
                    objective_name(objective),
                    format_rational(&r.value),
                    r.states_explored,
                    r.witness.len()
                ),
            };
            emit(io.out.as_deref(), &text)
        }
        Command::Approx { io, budget, exact, format } => {
            let input = load(&io.input)?;
            let (start, goal) = match &input {
                InstanceFile::Setcover { start, goal, .. } | InstanceFile::Hypergraph { start, goal, .. } => {
                    (start, goal)
                }
                other => bail!("approx needs a setcover or hypergraph instance, got {}", other.kind()),
            };
            let seq = two_factor_cover(input.instance(), start, goal)?;
            let cost = cover_sequence_cost(input.instance(), &seq)?;
            let exact_value = if exact {
                let obj = if matches!(input, InstanceFile::Setcover { .. }) {
                    Objective::ScCost
                } else {
                    Objective::HvcCost
                };
                Some(solve(obj, &input, budget.cap)?.value)
            } else {
                None
            };
            let peak = seq.max_size().unwrap_or(0);
            let text = match format {
                Format::Json => to_json(&serde_json::json!({
                    "cost": format_rational(&cost),
                    "peak": peak,
                    "exact": exact_value.map(|v| format_rational(&v)),
                    "sequence": seq,
                }))?,
                Format::Csv => format!(
                    "cost,peak,exact\n{},{peak},{}\n",
                    format_rational(&cost),
                    exact_value.map(|v| format_rational(&v)).unwrap_or_default()
                ),
                Format::Md => format!(
                    "| cost | peak | exact |\n|---|---|---|\n| {} | {peak} | {} |\n",
                    format_rational(&cost),
                    exact_value.map(|v| format_rational(&v)).unwrap_or_default()
                ),
            };
            emit(io.out.as_deref(), &text)
        }
        Command::Amplify(a) => {
            let input = load(&a.io.input)?;
            let InstanceFile::Verifier { verifier, start, goal } = input else {
                bail!("amplify needs a verifier instance");
            };
            let rho = match (a.rho, &a.eps, &a.delta) {
                (Some(rho), _, _) => rho,
                (None, Some(eps), Some(delta)) => {
                    choose_rho(parse_rational(eps)?, &Delta::Value(parse_rational(delta)?))?
                }
                _ => bail!("give --rho or both --eps and --delta"),
            };
            let n = verifier.randomness_count();
            let x = match a.degree {
                None => ExpanderGraph::complete_with_loops(n)?,
                Some(d) => ExpanderGraph::random(n, d, 1.0, SeedStream::new(a.seed).derive("expander"), 64)?,
            };
            eprintln!("rho = {rho}, expander n = {n}, d = {}, certified lambda/d = {:.6}", x.degree(), x.ratio());
            let v = amplify(&verifier, &x, rho)?;
            emit(a.io.out.as_deref(), &to_json(&InstanceFile::Verifier { verifier: v, start, goal })?)
        }
        Command::Check { suite, trials, seed, budget, corrupt_gadget, format, out } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse::<Suite>()?]
            };
            let opts = CheckOptions {
                trials,
                seed,
                cap: budget.cap,
                gadget: if corrupt_gadget {
                    GadgetChoice::Corrupted
                } else {
                    GadgetChoice::Monotone
                },
            };
            let reports: Vec<SuiteReport> = suites.into_iter().map(|s| run_suite(s, &opts)).collect();
            let text = match format {
                Format::Json => to_json(&reports)?,
                Format::Md => reports.iter().map(SuiteReport::to_markdown).collect::<Vec<_>>().join("\n"),
                Format::Csv => {
                    let mut s = String::new();
                    for (i, r) in reports.iter().enumerate() {
                        let csv = r.to_csv();
                        s.push_str(if i == 0 { &csv } else { csv.split_once('\n').map_or("", |x| x.1) });
                    }
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            if reports.iter().all(SuiteReport::ok) {
                Ok(())
            } else {
                Err(Violation.into())
            }
        }
        Command::Pipeline { input, out, no_amplify, rho, budget } => {
            let file = load(&input)?;
            let opts = PipelineOptions {
                rho: (!no_amplify).then_some(rho),
                cap: budget.cap,
            };
            run_pipeline(&file, &out, &opts)?;
            let (md, csv) = render_report(&out)?;
            fs::write(out.join("report.md"), &md)?;
            fs::write(out.join("report.csv"), csv)?;
            print!("{md}");
            Ok(())
        }
        Command::Report { input, format, out } => {
            let (md, csv) = render_report(&input)?;
            let text = match format {
                Format::Md => md,
                Format::Csv => csv,
                Format::Json => bail!("report supports md and csv"),
            };
            emit(out.as_deref(), &text)
        }
    }
}

fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Maxpar => "maxpar",
        Objective::Minlab => "minlab",
        Objective::ScCost => "sc-cost",
        Objective::HvcCost => "hvc-cost",
    }
}

fn solve(objective: Objective, input: &InstanceFile, cap: u64) -> anyhow::Result<SolveResult> {
    Ok(match (objective, input) {
        (Objective::Maxpar, InstanceFile::Csp { graph, start, goal }) => solve_maxpar(graph, start, goal, cap)?,
        (Objective::Minlab, InstanceFile::Labelcover { graph, start, goal }) => {
            solve_minlab(graph, start, goal, cap)?
        }
        (Objective::ScCost, InstanceFile::Setcover { system, start, goal }) => {
            solve_cost_setcover(system, start, goal, cap)?
        }
        (Objective::HvcCost, InstanceFile::Hypergraph { hypergraph, start, goal }) => {
            solve_cost_hvc(hypergraph, start, goal, cap)?
        }
        (o, f) => {
            return Err(anyhow!(Error::Precondition(format!(
                "{} is not defined for a {} instance",
                objective_name(o),
                f.kind()
            ))))
        }
    })
}

fn reduce(which: Reduction, input: &InstanceFile, orientation: OrientationArg) -> anyhow::Result<InstanceFile> {
    let orientation = match orientation {
        OrientationArg::Corrected => Orientation::Corrected,
        OrientationArg::Verbatim => Orientation::Verbatim,
    };
    Ok(match (which, input) {
        (Reduction::Fglss, InstanceFile::Verifier { verifier, start, goal }) => {
            let fg = Fglss::build(verifier)?;
            InstanceFile::Csp {
                start: fg.embed_proof(start)?,
                goal: fg.embed_proof(goal)?,
                graph: fg.into_graph(),
            }
        }
        (Reduction::Normalize, InstanceFile::Csp { graph, start, goal }) => InstanceFile::Csp {
            graph: normalize_self_loops(graph)?,
            start: start.clone(),
            goal: goal.clone(),
        },
        (Reduction::P2l, InstanceFile::Csp { graph, start, goal }) => {
            let (graph, start, goal) = p2csp_to_labelcover(graph, start, goal)?;
            InstanceFile::Labelcover { graph, start, goal }
        }
        (Reduction::L2sc, InstanceFile::Labelcover { graph, start, goal }) => {
            let (red, start, goal) = labelcover_to_setcover_with(graph, start, goal, orientation, &MonotoneGadget)?;
            InstanceFile::Setcover { system: red.system, start, goal }
        }
        (Reduction::L2hvc, InstanceFile::Labelcover { graph, start, goal }) => {
            let (red, start, goal) = labelcover_to_hvc_with(graph, start, goal, orientation, &MonotoneGadget)?;
            InstanceFile::Hypergraph { hypergraph: red.hypergraph, start, goal }
        }
        (_, f) => bail!("this reduction does not apply to a {} instance", f.kind()),
    })
}
