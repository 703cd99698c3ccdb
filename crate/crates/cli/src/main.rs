//! `densegrowth`: synthesize graphs with a prescribed non-backtracking growth rate,
//! inspect spectra, extract subgroups and re-verify certificates.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use densegrowth::spectral::{self, NbOperator};
use densegrowth::stallings::{self, DEFAULT_NMAX};
use densegrowth::synthesis::{self, verify_certificate, Certificate, Limits};
use densegrowth::{GraphDocument, Multigraph};

const EXIT_INVALID: u8 = 1;
const EXIT_RESOURCES: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "densegrowth", version, about)]
struct Cli {
    /// Suppress the human-readable summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a graph whose growth rate lies within eps of the target.
    Synth(SynthArgs),
    /// Print the growth-rate enclosure, girth and degree histogram of a graph.
    Spectrum(InputArgs),
    /// Extract the subgroup of the free group carried by a graph.
    Subgroup(SubgroupArgs),
    /// Re-check a certificate from scratch.
    Verify(InputArgs),
    /// Convert a graph or certificate to a graph document or Graphviz.
    Export(ExportArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long)]
    target: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Limits::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, default_value_t = Limits::default().max_iters)]
    max_iters: usize,
    #[arg(long, default_value_t = Limits::default().max_cover_attempts)]
    max_cover_attempts: usize,
    /// Girth demanded before the sweep instead of the certified value.
    #[arg(long)]
    girth_override: Option<usize>,
    /// Certificate output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Graph document or certificate.
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct SubgroupArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Free-group rank; defaults to half the maximum degree.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    basepoint: usize,
    #[arg(long, default_value_t = DEFAULT_NMAX)]
    nmax: usize,
    /// Generators file output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    GraphJson,
    Dot,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::GraphJson)]
    format: Format,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_INVALID, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// A graph document, or the graph embedded in a certificate.
fn load_graph(path: &Path) -> Result<(Multigraph, Option<Certificate>), Failure> {
    let text = read(path)?;
    match GraphDocument::decode(&text) {
        Ok(doc) => Ok((doc.to_graph().map_err(invalid)?, None)),
        Err(graph_err) => match Certificate::decode(&text) {
            Ok(cert) => Ok((cert.graph.clone(), Some(cert))),
            Err(_) => Err(invalid(format!("{}: {graph_err}", path.display()))),
        },
    }
}

fn synth(args: SynthArgs, quiet: bool) -> Outcome {
    let limits = Limits {
        max_vertices: args.max_vertices,
        max_iters: args.max_iters,
        max_cover_attempts: args.max_cover_attempts,
        girth_override: args.girth_override,
    };
    let cert = synthesis::synthesize(args.rank, args.target, args.eps, args.seed, limits).map_err(|e| {
        let code = if e.is_resource() { EXIT_RESOURCES } else { EXIT_INVALID };
        let mut message = e.to_string();
        if !e.trace.is_empty() {
            message.push_str(&format!(" after {} sweep states", e.trace.len()));
        }
        Failure::new(code, message)
    })?;
    let failed: Vec<_> = verify_certificate(&cert).into_iter().filter(|c| !c.passed).collect();
    if !failed.is_empty() {
        let list: Vec<String> = failed.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
        return Err(Failure::new(EXIT_VERIFY, list.join("\n")));
    }
    if let Some(out) = &args.out {
        write(out, &cert.encode())?;
    }
    if !quiet {
        println!(
            "alpha={} lambda=[{},{}] eps={} vertices={} steps={}",
            args.target,
            cert.eigenvalue.lower,
            cert.eigenvalue.upper,
            args.eps,
            cert.graph.vertex_count(),
            cert.stats.sweep_steps
        );
    }
    Ok(())
}

fn spectrum(args: InputArgs, quiet: bool) -> Outcome {
    let (g, _) = load_graph(&args.input)?;
    let est = spectral::growth_rate(&g).map_err(invalid)?;
    if quiet {
        return Ok(());
    }
    if g.is_cycle() {
        println!("lambda=[1,1] (cycle)");
        return Ok(());
    }
    let strongly = NbOperator::new(&g).map(|op| op.is_strongly_connected()).unwrap_or(false);
    let girth = g.girth().map_or("inf".to_string(), |x| x.to_string());
    let histogram: Vec<String> = g
        .degree_histogram()
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect();
    println!("lambda=[{},{}]", est.lower, est.upper);
    println!("girth={girth}");
    println!("degrees={}", histogram.join(","));
    println!("strongly_connected={strongly}");
    Ok(())
}

fn subgroup(args: SubgroupArgs, quiet: bool) -> Outcome {
    let (g, _) = load_graph(&args.input)?;
    let r = args
        .rank
        .unwrap_or_else(|| g.degrees().into_iter().max().unwrap_or(0).div_ceil(2).max(1));
    let report = stallings::subgroup_report(&g, r, args.basepoint, args.nmax).map_err(invalid)?;
    if !report.core.check_folded() {
        return Err(Failure::new(EXIT_VERIFY, "labelled core is not folded"));
    }
    if let Some(out) = &args.out {
        write(out, &report.generators_file())?;
    }
    if let Some(path) = &args.report {
        write(path, &report.to_json())?;
    }
    if !quiet {
        println!(
            "rank={} r={} basepoint={} omega={} lambda=[{},{}]",
            report.rank, r, report.basepoint, report.omega_estimate, report.lambda.lower, report.lambda.upper
        );
        let head: Vec<String> = report.gamma.iter().take(11).map(|c| c.to_string()).collect();
        println!("gamma[0..]={}", head.join(","));
    }
    Ok(())
}

fn verify(args: InputArgs, quiet: bool) -> Outcome {
    let text = read(&args.input)?;
    let cert = Certificate::decode(&text)
        .map_err(|e| Failure::new(EXIT_VERIFY, format!("certificate rejected: {e}")))?;
    let checks = verify_certificate(&cert);
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("FAILED {}: {}", c.name, c.detail))
        .collect();
    if !failed.is_empty() {
        return Err(Failure::new(EXIT_VERIFY, failed.join("\n")));
    }
    if !quiet {
        for c in &checks {
            println!("ok {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}

fn export(args: ExportArgs) -> Outcome {
    let (g, _) = load_graph(&args.input)?;
    let text = match args.format {
        Format::GraphJson => g.encode(),
        Format::Dot => g.to_dot(),
    };
    match &args.out {
        Some(out) => write(out, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved here for resource failures.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INVALID)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let quiet = cli.quiet;
    let result = match cli.command {
        Command::Synth(a) => synth(a, quiet),
        Command::Spectrum(a) => spectrum(a, quiet),
        Command::Subgroup(a) => subgroup(a, quiet),
        Command::Verify(a) => verify(a, quiet),
        Command::Export(a) => export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
