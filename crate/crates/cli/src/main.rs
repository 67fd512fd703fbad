mod campaign;
mod error;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cayley_nzflow::constructions::{a4_counterexample, a4_simple_subgraph, campaign_specs, construct, GammaSpec, Report};
use cayley_nzflow::flow::{oracle_nz3, verify, FlowJson, Z3Flow};
use cayley_nzflow::graph::{CayleyMultigraph, Graph, GraphJson};
use cayley_nzflow::group::{FiniteGroup, GroupJson, TableGroup};
use cayley_nzflow::pseudoforest::{flow_from_certificate, search_certificate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "nzflow", version, about = "Nowhere-zero Z3-flows on Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and print its JSON description.
    Group {
        #[command(subcommand)]
        which: GroupCommand,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Build a Cayley multigraph from a group file and a connection multiset.
    Cayley {
        #[arg(long)]
        group: PathBuf,
        /// Comma-separated words, e.g. "x,a,a^-1,y,y^-1"; repeat for multiplicity.
        #[arg(long)]
        connection: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Verify or find nowhere-zero Z3-flows.
    Flow {
        #[command(subcommand)]
        which: FlowCommand,
    },
    /// Run one construction and write its artifacts.
    Construct(ConstructArgs),
    /// Run a grid of constructions and print a report.
    Campaign(CampaignArgs),
}

#[derive(Subcommand)]
enum GroupCommand {
    /// `(Z2^2 x Zp) ⋊ Z3k` with `y^-1 a y = a^r`.
    FamilyI {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
    },
    /// `A4 x Zp` with `y^3 = a^s`.
    FamilyIi {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        s: u32,
    },
    /// A group from a JSON file: a group description or a bare table of rows.
    Table {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum FlowCommand {
    /// Exit 0 iff the flow is valid and nowhere-zero.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        flow: PathBuf,
    },
    /// Print a flow, or NONE with exit 1.
    Find {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Oracle,
    Certificate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Gamma1,
    Gamma2,
    Gamma3,
    Gamma4,
    A4,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    which: Which,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long, value_delimiter = ',', default_value = "gamma1,gamma2,gamma3,gamma4")]
    families: Vec<String>,
    #[arg(long, default_value_t = 13)]
    p_max: u32,
    #[arg(long, value_delimiter = ',', default_value = "1,5")]
    k_set: Vec<u32>,
    /// Re-derive certificates for this many cases with the generic matcher.
    #[arg(long, default_value_t = 0)]
    oracle_spot_check: usize,
    #[arg(long)]
    jobs: Option<usize>,
    /// Omit wall times so the report is byte-identical across runs.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::new("format", format!("{}: {e}", path.display())))
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `out` if given, otherwise to stdout.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new("io", e.to_string())),
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Ok(Graph::from_json(&read_json::<GraphJson>(path)?)?)
}

fn load_group(path: &Path) -> Result<FiniteGroup, CliError> {
    let value: serde_json::Value = read_json(path)?;
    if let Some(rows) = value.as_array() {
        let rows: Vec<Vec<u32>> = serde_json::from_value(serde_json::Value::Array(rows.clone()))?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CliError::new("format", "the table is not square"));
        }
        return Ok(FiniteGroup::from_table(TableGroup::new(n, rows.concat())?));
    }
    Ok(FiniteGroup::from_json(&serde_json::from_value::<GroupJson>(value)?)?)
}

fn need(value: Option<u32>, name: &str, which: &str) -> Result<u32, CliError> {
    value.ok_or_else(|| CliError::parameter(format!("{which} needs --{name}")))
}

fn group_command(which: &GroupCommand, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let group = match which {
        GroupCommand::FamilyI { p, k, r } => FiniteGroup::family_i(*p, *k, *r)?,
        GroupCommand::FamilyIi { p, s } => FiniteGroup::family_ii(*p, *s)?,
        GroupCommand::Table { file } => load_group(file)?,
    };
    emit(out, &to_pretty(&group.to_json())?)?;
    Ok(ExitCode::SUCCESS)
}

fn cayley_command(group: &Path, connection: &str, out: Option<&Path>, dot: Option<&Path>) -> Result<ExitCode, CliError> {
    let group = load_group(group)?;
    let cay = CayleyMultigraph::parse(&group, connection)?;
    emit(out, &to_pretty(&cay.graph().to_json())?)?;
    if let Some(path) = dot {
        write_file(path, &cay.graph().to_dot(Some(group.labels())))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn flow_verify(graph: &Path, flow: &Path) -> Result<ExitCode, CliError> {
    let graph = load_graph(graph)?;
    let flow = Z3Flow::from_json(&read_json::<FlowJson>(flow)?)?;
    let check = verify(&graph, &flow)?;
    emit(None, &to_pretty(&check)?)?;
    Ok(if check.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn flow_find(graph: &Path, method: Method, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let graph = load_graph(graph)?;
    let found = match method {
        Method::Oracle => oracle_nz3(&graph)?,
        Method::Certificate => match search_certificate(&graph)? {
            Some(cert) => Some(flow_from_certificate(&graph, &cert)?),
            None => None,
        },
    };
    match found {
        Some(flow) => {
            emit(out, &to_pretty(&flow.to_json())?)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("NONE");
            Ok(ExitCode::from(1))
        }
    }
}

fn construct_command(args: &ConstructArgs) -> Result<ExitCode, CliError> {
    let name = match args.which {
        Which::Gamma1 => "gamma1",
        Which::Gamma2 => "gamma2",
        Which::Gamma3 => "gamma3",
        Which::Gamma4 => "gamma4",
        Which::A4 => "a4",
    };
    let spec = match args.which {
        Which::Gamma1 | Which::Gamma2 => {
            let (p, k, r) = (need(args.p, "p", name)?, need(args.k, "k", name)?, need(args.r, "r", name)?);
            Some(if matches!(args.which, Which::Gamma1) { GammaSpec::Gamma1 { p, k, r } } else { GammaSpec::Gamma2 { p, k, r } })
        }
        Which::Gamma3 | Which::Gamma4 => {
            let (p, s) = (need(args.p, "p", name)?, need(args.s, "s", name)?);
            Some(if matches!(args.which, Which::Gamma3) { GammaSpec::Gamma3 { p, s } } else { GammaSpec::Gamma4 { p, s } })
        }
        Which::A4 => None,
    };
    let dir = &args.out_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = vec!["group.json", "graph.json", "graph.dot", "report.json"];
    let (cayley, report) = match spec {
        Some(spec) => {
            let c = construct(&spec)?;
            write_file(&dir.join("flow.json"), &to_pretty(&c.flow.to_json())?)?;
            files.push("flow.json");
            if let Some(cert) = &c.certificate {
                write_file(&dir.join("certificate.json"), &to_pretty(&cert.to_json())?)?;
                files.push("certificate.json");
            }
            (c.cayley, c.report)
        }
        None => {
            let cay = a4_counterexample()?;
            let mut report = Report::new("a4", &[]);
            report.check("oracle finds no nowhere-zero flow", oracle_nz3(cay.graph())?.is_none());
            report.check("simple subgraph is non-bipartite", !a4_simple_subgraph()?.graph().is_bipartite());
            (cay, report)
        }
    };
    write_file(&dir.join("group.json"), &to_pretty(&cayley.group().to_json())?)?;
    write_file(&dir.join("graph.json"), &to_pretty(&cayley.graph().to_json())?)?;
    write_file(&dir.join("graph.dot"), &cayley.graph().to_dot(Some(cayley.group().labels())))?;
    write_file(&dir.join("report.json"), &to_pretty(&report)?)?;
    files.sort_unstable();
    let summary = json!({
        "construction": report.construction,
        "params": report.params,
        "all_pass": report.all_pass(),
        "files": files,
    });
    emit(None, &to_pretty(&summary)?)?;
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn campaign_command(args: &CampaignArgs) -> Result<ExitCode, CliError> {
    let families: Vec<&str> = args.families.iter().map(|f| f.trim()).collect();
    if let Some(&k) = args.k_set.iter().find(|&&k| k % 2 == 0) {
        return Err(CliError::parameter(format!("k = {k} must be odd")));
    }
    let specs = campaign_specs(&families, args.p_max, &args.k_set)?;
    let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::parameter("--jobs must be positive"));
    }
    let options = campaign::Options { spot_checks: args.oracle_spot_check, jobs, deterministic: args.deterministic };
    let report = campaign::run(&specs, &options);
    emit(args.out.as_deref(), &to_pretty(&report)?)?;
    Ok(if report.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Group { which, out } => group_command(which, out.as_deref()),
        Command::Cayley { group, connection, out, dot } => cayley_command(group, connection, out.as_deref(), dot.as_deref()),
        Command::Flow { which: FlowCommand::Verify { graph, flow } } => flow_verify(graph, flow),
        Command::Flow { which: FlowCommand::Find { graph, method, out } } => flow_find(graph, *method, out.as_deref()),
        Command::Construct(args) => construct_command(args),
        Command::Campaign(args) => campaign_command(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
