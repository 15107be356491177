mod render;

use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plumb_core::diagram::{build, DiagramError, SymbolicDiagram};
use plumb_core::graph::{parse_graph, GraphError, PlumbingGraph};
use plumb_core::map::h1_from_diagram;
use plumb_core::planner::{
    optimize_cocycle, parse_drill_overrides, plan_drills, predicted_genus, DrillPlan, PlanError,
};
use plumb_core::verify::{verify_diagram, verify_graph, VerificationReport};
use thiserror::Error;

use render::{render, Format, RenderSpec};

#[derive(Parser)]
#[command(
    name = "plumb",
    version,
    about = "Heegaard diagrams of plumbed 3-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the drill inventory of every vertex and the predicted genus.
    Plan(Common),
    /// Build the diagram and print it as JSON.
    Build(Common),
    /// Build (or load) a diagram and check it; exit 1 on any failed check.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Verify this diagram document instead of building one.
        #[arg(long, value_name = "PATH")]
        check_diagram: Option<PathBuf>,
    },
    /// Compare first homology of the diagram with the plumbing matrix.
    Homology(Common),
    /// Draw the diagram.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "svg")]
        format: FormatArg,
    },
}

#[derive(Args)]
struct Common {
    /// Plumbing graph file.
    file: PathBuf,
    /// Re-gauge the edge signs to minimize genus before planning.
    #[arg(long)]
    optimize_cocycle: bool,
    /// Extra drills per vertex, such as `v=+,-;w=` (repeatable).
    #[arg(long = "drills", value_name = "SPEC")]
    drills: Vec<String>,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Tikz,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Graph { path: String, source: GraphError },
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("{path}: {message}")]
    BadDocument { path: String, message: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed")]
    Failed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Graph { .. } => 2,
            CliError::Plan(PlanError::Override(_) | PlanError::UnknownVertex(_)) => 2,
            CliError::Plan(_) | CliError::Diagram(DiagramError::Plan(_)) => 3,
            CliError::Diagram(_)
            | CliError::BadDocument { .. }
            | CliError::Write { .. }
            | CliError::Failed => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn load(opts: &Common) -> Result<(PlumbingGraph, DrillPlan), CliError> {
    let text = read(&opts.file)?;
    let mut graph = parse_graph(&text).map_err(|source| CliError::Graph {
        path: opts.file.display().to_string(),
        source,
    })?;
    if opts.optimize_cocycle {
        graph = optimize_cocycle(&graph);
    }
    let mut overrides = Vec::new();
    for spec in &opts.drills {
        overrides.extend(parse_drill_overrides(spec)?);
    }
    let mut plan = plan_drills(&graph);
    if !overrides.is_empty() {
        plan = plan.with_overrides(&graph, &overrides)?;
    }
    plan.validate(&graph)?;
    Ok((graph, plan))
}

fn emit(opts: &Common, text: &str) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn signs(list: &[plumb_core::graph::Sign]) -> String {
    list.iter()
        .map(|s| s.symbol().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_plan(opts: &Common) -> Result<(), CliError> {
    let (graph, plan) = load(opts)?;
    let mut out = String::new();
    for vd in &plan.vertices {
        let v = &graph.vertices()[vd.vertex];
        let main = vd
            .main
            .map_or("none".to_string(), |i| vd.extras[i].symbol().to_string());
        out += &format!(
            "vertex {} (genus {}, euler {}): drills: {} (main: {main})\n",
            v.id,
            v.genus,
            v.euler,
            signs(&vd.all_signs())
        );
    }
    out += &format!("genus {}\n", predicted_genus(&graph, &plan)?);
    emit(opts, &out)
}

fn cmd_build(opts: &Common) -> Result<(), CliError> {
    let (graph, plan) = load(opts)?;
    emit(opts, &build(&graph, &plan)?.to_json())
}

fn use_color() -> bool {
    std::env::var_os("PLUMB_NO_COLOR").is_none() && std::io::stderr().is_terminal()
}

fn summary(report: &VerificationReport) -> String {
    let color = use_color();
    let mark = |ok: bool| match (ok, color) {
        (true, true) => "\x1b[32mok\x1b[0m",
        (false, true) => "\x1b[31mFAILED\x1b[0m",
        (true, false) => "ok",
        (false, false) => "FAILED",
    };
    let h1 = |h: &Option<plumb_core::linalg::H1Summary>| {
        h.as_ref().map_or("n/a".to_string(), |h| h.to_string())
    };
    let mut s = String::new();
    s += &format!(
        "genus: predicted {}, declared {}, compiled {} .. {}\n",
        report.genus_predicted,
        report.genus_declared,
        report
            .genus_compiled
            .map_or("n/a".to_string(), |g| g.to_string()),
        mark(
            report.genus_compiled == Some(report.genus_predicted)
                && report.genus_declared == report.genus_predicted
        )
    );
    s += &format!("red cut system .. {}\n", mark(report.red_cut_ok));
    s += &format!("blue cut system .. {}\n", mark(report.blue_cut_ok));
    let note = if report.h1_authoritative {
        ""
    } else {
        " (informative)"
    };
    s += &format!(
        "H1: diagram {}, oracle {}{note} .. {}\n",
        h1(&report.h1_diagram),
        report.h1_oracle,
        mark(report.h1_match || !report.h1_authoritative)
    );
    for e in &report.errors {
        s += &format!("error: {e}\n");
    }
    s
}

fn cmd_verify(opts: &Common, check: Option<&Path>) -> Result<(), CliError> {
    let (graph, plan) = load(opts)?;
    let report = match check {
        Some(path) => {
            let text = read(path)?;
            let d = SymbolicDiagram::from_json(&text).map_err(|e| CliError::BadDocument {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            verify_diagram(&d, &graph, &plan)?
        }
        None => verify_graph(&graph, &plan)?.1,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    emit(opts, &json)?;
    eprint!("{}", summary(&report));
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_homology(opts: &Common) -> Result<(), CliError> {
    let (graph, plan) = load(opts)?;
    let (d, report) = verify_graph(&graph, &plan)?;
    let diagram = h1_from_diagram(&d).map_err(|e| DiagramError::Invalid(e.to_string()))?;
    let mut out = String::new();
    out += &format!("diagram H1: {diagram}\n");
    out += &format!("oracle H1: {}\n", report.h1_oracle);
    out += &format!("relation SNF: [{}]\n", list(&report.relation_snf.0));
    out += &format!("plumbing SNF: [{}]\n", list(&report.oracle_snf.0));
    let verdict = match (report.h1_match, report.h1_authoritative) {
        (true, true) => "match",
        (false, true) => "MISMATCH",
        (true, false) => "match (informative: graph has cycles)",
        (false, false) => "differ (informative: graph has cycles)",
    };
    out += &format!("{verdict}\n");
    emit(opts, &out)?;
    if report.h1_authoritative && !report.h1_match {
        Err(CliError::Failed)
    } else {
        Ok(())
    }
}

fn cmd_render(opts: &Common, format: FormatArg) -> Result<(), CliError> {
    let (graph, plan) = load(opts)?;
    let d = build(&graph, &plan)?;
    let format = match format {
        FormatArg::Svg => Format::Svg,
        FormatArg::Tikz => Format::Tikz,
    };
    emit(opts, &render(&d, &RenderSpec::new(format)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plan(c) => cmd_plan(c),
        Command::Build(c) => cmd_build(c),
        Command::Verify {
            common,
            check_diagram,
        } => cmd_verify(common, check_diagram.as_deref()),
        Command::Homology(c) => cmd_homology(c),
        Command::Render { common, format } => cmd_render(common, *format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("plumb: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
