//! Command-line front end: analyze a space, embed a tree into a cube, scan
//! the exponent axis, or run the randomized verification suites.
//!
//! Exit codes: 0 on success, 1 on suite failure, 2 on parse errors, 3 on
//! metric violations. `CUBEMETRICS_THREADS` caps worker threads.

mod input;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use cubemetrics::oracles::{run_linalg_suite, run_omnibus_suite, run_trees_suite, SuiteReport};
use cubemetrics::report::{analyze, scan_p, AnalysisInput, ReportError};
use cubemetrics::{Mode, DEFAULT_TOL};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cubemetrics",
    about = "Metric invariants of finite metric spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CliMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Omnibus,
    Trees,
    Linalg,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full invariant report for one input file
    Analyze {
        input: PathBuf,
        /// Numeric mode
        #[arg(long, value_enum, default_value = "exact")]
        mode: CliMode,
        /// Absolute tolerance for float comparisons
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a tree isometrically into a weighted cube
    EmbedTree {
        tree: PathBuf,
        /// Root vertex of the embedding
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Write the cube JSON here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit det(D_p), cof(D_p) and the inverse sum over an exponent range
    ScanP {
        input: PathBuf,
        #[arg(long, default_value_t = 0.25)]
        pmin: f64,
        #[arg(long, default_value_t = 8.0)]
        pmax: f64,
        /// Number of rows, endpoints included
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

const EXIT_SUITE_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_METRIC: u8 = 3;

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn parse_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: msg.into(),
    }
}

fn classify_report_error(e: ReportError) -> Failure {
    let code = match &e {
        ReportError::Metric(_) => EXIT_METRIC,
        ReportError::Cube(cubemetrics::hamming::CubeError::Metric(_)) => EXIT_METRIC,
        ReportError::Tree(cubemetrics::trees::TreeError::Metric(_)) => EXIT_METRIC,
        _ => EXIT_SUITE_FAILURE,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("CUBEMETRICS_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn read_input(path: &PathBuf) -> Result<AnalysisInput, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_failure(format!("cannot read {}: {e}", path.display())))?;
    input::parse_input(&text).map_err(|e| parse_failure(e.to_string()))
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure {
            code: EXIT_SUITE_FAILURE,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.cmd {
        Command::Analyze {
            input,
            mode,
            tol,
            out,
        } => {
            let parsed = read_input(&input)?;
            let mode = match mode {
                CliMode::Exact => Mode::Exact,
                CliMode::Float => Mode::Float,
            };
            let report = analyze(&parsed, mode, tol).map_err(classify_report_error)?;
            let json = output::report_to_json(&report, &input.display().to_string());
            let text = serde_json::to_string_pretty(&json).expect("serializable");
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EmbedTree { tree, root, out } => {
            let parsed = read_input(&tree)?;
            let AnalysisInput::Tree(t) = parsed else {
                return Err(parse_failure("embed-tree expects a tree input"));
            };
            let cube = t.embed_in_cube(root).map_err(|e| Failure {
                code: EXIT_SUITE_FAILURE,
                message: e.to_string(),
            })?;
            let text =
                serde_json::to_string_pretty(&input::emit_cube(&cube)).expect("serializable");
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ScanP {
            input,
            pmin,
            pmax,
            steps,
            out,
        } => {
            let parsed = read_input(&input)?;
            let space = parsed
                .to_space(Mode::Float, DEFAULT_TOL)
                .map_err(classify_report_error)?;
            let rows = scan_p(&space, pmin, pmax, steps).map_err(classify_report_error)?;
            write_or_print(&out, output::scan_to_csv(&rows).trim_end())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed, count } => {
            let report = match suite {
                Suite::Omnibus => run_omnibus_suite(seed, count),
                Suite::Trees => run_trees_suite(seed, count),
                Suite::Linalg => run_linalg_suite(seed, count),
            };
            print_suite(&report);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_SUITE_FAILURE))
            }
        }
    }
}

fn print_suite(report: &SuiteReport) {
    if report.passed() {
        println!(
            "suite {}: {} instances, all consistent",
            report.name, report.count
        );
    } else {
        println!(
            "suite {}: {} instances, {} FAILURES",
            report.name,
            report.count,
            report.failures.len()
        );
        for f in &report.failures {
            println!("  {f}");
        }
    }
}
