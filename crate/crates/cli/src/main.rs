//! `pipecheck`: validity checking for sequential ML pipelines from the
//! command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors (unreadable
//! or malformed files, failed runs).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pipecheck_core::bench::{
    parse_report_json, render_report, run_comparison, write_jsonl, BenchConfig, ReportFormat,
};
use pipecheck_core::dataset::{extract_features, load_dataset, Dataset, Format};
use pipecheck_core::features::{Binary, FeatureVector};
use pipecheck_core::kb::{generate_default, KnowledgeBase};
use pipecheck_core::pipeline::{parse_pipeline, PipelineSpec, Verdict, DEFAULT_MAX_STEPS};
use pipecheck_core::surrogate::{evaluate_with_trace, map_to_surrogate, FiringRecord};
use pipecheck_core::tmethod::execute_pipeline;

#[derive(Parser)]
#[command(name = "pipecheck", version, about = "Decide ML pipeline validity without executing the pipeline", long_about = None)]
struct Cli {
    /// Knowledge base JSON; defaults to the PIPECHECK_KB environment variable.
    #[arg(long, global = true, env = "PIPECHECK_KB")]
    kb: Option<PathBuf>,

    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output format where a choice exists.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Markdown)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Markdown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DataFormat {
    Arff,
    Csv,
}

#[derive(Args)]
struct DataArg {
    /// Dataset file (.arff, or .csv with a .csv.schema.json sidecar).
    #[arg(long)]
    data: PathBuf,
    /// Override the format inferred from the file extension.
    #[arg(long, value_enum)]
    data_format: Option<DataFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a dataset's transformed-feature vector as JSON.
    ExtractFeatures(DataArg),
    /// Probe the built-in components and write the knowledge base.
    GenKb {
        /// Output path for the KB JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Judge a pipeline with the surrogate (no execution).
    Eval {
        /// Pipeline JSON file.
        #[arg(long)]
        pipeline: PathBuf,
        /// Dataset to abstract into the initial token...
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, value_enum)]
        data_format: Option<DataFormat>,
        /// ...or a precomputed 16-key feature-vector JSON.
        #[arg(long)]
        features: Option<PathBuf>,
        /// Include the full firing trace in the output.
        #[arg(long)]
        trace: bool,
    },
    /// Judge a pipeline by actually executing it.
    Exec {
        /// Pipeline JSON file.
        #[arg(long)]
        pipeline: PathBuf,
        #[command(flatten)]
        data: DataArg,
        /// Execution budget in milliseconds.
        #[arg(long, default_value_t = 30_000)]
        timeout_ms: u64,
    },
    /// Compare surrogate and execution verdicts over random pipelines.
    Bench {
        /// Dataset files; the comparison runs per dataset.
        #[arg(long, required = true, num_args = 1..)]
        data: Vec<PathBuf>,
        /// Random pipelines per dataset.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_len: usize,
        #[arg(long, default_value_t = 30_000)]
        timeout_ms: u64,
        /// Count timeout verdicts in the agreement statistics.
        #[arg(long)]
        include_timeouts: bool,
        /// Write the report JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the per-pipeline JSONL audit log here
        /// (default: next to --out, or bench_audit.jsonl).
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Re-render a saved report.
    Report {
        /// Report JSON produced by `bench --out`.
        #[arg(long)]
        input: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn data(e: impl std::fmt::Display) -> CliError {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn infer_format(path: &Path, explicit: Option<DataFormat>) -> Format {
    match explicit {
        Some(DataFormat::Arff) => Format::ArffSubset,
        Some(DataFormat::Csv) => Format::CsvWithSchema,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Format::CsvWithSchema,
            _ => Format::ArffSubset,
        },
    }
}

fn load_data(path: &Path, explicit: Option<DataFormat>) -> Result<Dataset, CliError> {
    load_dataset(path, infer_format(path, explicit))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_kb(path: &Option<PathBuf>) -> Result<KnowledgeBase, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Usage("--kb (or PIPECHECK_KB) is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    KnowledgeBase::from_json_str(&text).map_err(CliError::data)
}

fn load_pipeline(path: &Path) -> Result<PipelineSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_pipeline(&text, DEFAULT_MAX_STEPS).map_err(CliError::data)
}

fn verdict_json(
    verdict: &Verdict,
    error_text: Option<String>,
    trace: Option<&[FiringRecord]>,
) -> serde_json::Value {
    let mut value = json!({
        "valid": verdict.valid,
        "failing_step": verdict.failure.as_ref().map(|f| f.step),
        "failing_component": verdict.failure.as_ref().map(|f| f.component.clone()),
        "violated_features": verdict.violated_features(),
        "reason": verdict.failure.as_ref().map(|f| match f.reason {
            pipecheck_core::pipeline::FailureReason::CapabilityViolation(_) => "capability_violation",
            pipecheck_core::pipeline::FailureReason::ExecutionFailed(_) => "execution_failed",
            pipecheck_core::pipeline::FailureReason::NoPredictiveModel => "no_predictive_model",
            pipecheck_core::pipeline::FailureReason::Timeout => "timeout",
        }),
        "micros": verdict.duration_micros,
    });
    if let Some(text) = error_text {
        value["error_text"] = json!(text);
    }
    if let Some(trace) = trace {
        value["trace"] = serde_json::to_value(trace).expect("trace serializes");
    }
    value
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ExtractFeatures(arg) => {
            let dataset = load_data(&arg.data, arg.data_format)?;
            println!("{}", extract_features(&dataset).to_json_string());
            Ok(())
        }

        Command::GenKb { out } => {
            let report = generate_default();
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            for conflict in &report.conflicts {
                eprintln!("warning: effect conflict {conflict:?}");
            }
            std::fs::write(&out, report.kb.to_json_string()).map_err(CliError::data)?;
            eprintln!("wrote {} ({} components)", out.display(), report.kb.components.len());
            Ok(())
        }

        Command::Eval {
            pipeline,
            data,
            data_format,
            features,
            trace,
        } => {
            let kb = load_kb(&cli.kb)?;
            let spec = load_pipeline(&pipeline)?;
            let token: FeatureVector<Binary> = match (&data, &features) {
                (Some(path), None) => extract_features(&load_data(path, data_format)?),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
                    FeatureVector::from_json_str(&text).map_err(CliError::data)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --data or --features is required".into(),
                    ))
                }
            };
            let (net, token) = map_to_surrogate(&spec, token, &kb).map_err(CliError::data)?;
            let (verdict, firings) = evaluate_with_trace(&net, token);
            let output = verdict_json(&verdict, None, trace.then_some(firings.as_slice()));
            println!("{}", serde_json::to_string_pretty(&output).unwrap());
            Ok(())
        }

        Command::Exec {
            pipeline,
            data,
            timeout_ms,
        } => {
            let spec = load_pipeline(&pipeline)?;
            let dataset = load_data(&data.data, data.data_format)?;
            let outcome = execute_pipeline(&spec, &dataset, timeout_ms.saturating_mul(1000));
            let error_text = outcome.verdict.failure.as_ref().and_then(|f| match &f.reason {
                pipecheck_core::pipeline::FailureReason::ExecutionFailed(text) => Some(text.clone()),
                _ => None,
            });
            let mut output = verdict_json(&outcome.verdict, error_text, None);
            output["artifact"] = serde_json::to_value(&outcome.artifact).unwrap();
            println!("{}", serde_json::to_string_pretty(&output).unwrap());
            Ok(())
        }

        Command::Bench {
            data,
            n,
            max_len,
            timeout_ms,
            include_timeouts,
            out,
            audit,
        } => {
            let kb = match &cli.kb {
                Some(_) => load_kb(&cli.kb)?,
                None => {
                    eprintln!("no --kb given; generating the knowledge base in-process");
                    generate_default().kb
                }
            };
            let datasets: Vec<Dataset> = data
                .iter()
                .map(|path| load_data(path, None))
                .collect::<Result<_, _>>()?;
            let config = BenchConfig {
                pipelines_per_dataset: n,
                seed: cli.seed,
                max_steps: max_len,
                timeout_micros: timeout_ms.saturating_mul(1000),
                include_timeouts,
            };
            let outcome = run_comparison(&datasets, &kb, &config).map_err(CliError::data)?;

            let audit_path = audit.unwrap_or_else(|| match &out {
                Some(out) => out.with_extension("audit.jsonl"),
                None => PathBuf::from("bench_audit.jsonl"),
            });
            let file = std::fs::File::create(&audit_path)
                .map_err(|e| CliError::Data(format!("{}: {e}", audit_path.display())))?;
            write_jsonl(&outcome.records, std::io::BufWriter::new(file)).map_err(CliError::data)?;
            eprintln!("audit log: {}", audit_path.display());

            if let Some(out) = &out {
                std::fs::write(out, render_report(&outcome.report, ReportFormat::Json))
                    .map_err(CliError::data)?;
                eprintln!("report: {}", out.display());
            }
            let format = match cli.format {
                OutputFormat::Json => ReportFormat::Json,
                OutputFormat::Markdown => ReportFormat::MarkdownTable,
            };
            println!("{}", render_report(&outcome.report, format));
            Ok(())
        }

        Command::Report { input } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
            let report = parse_report_json(&text).map_err(CliError::data)?;
            let format = match cli.format {
                OutputFormat::Json => ReportFormat::Json,
                OutputFormat::Markdown => ReportFormat::MarkdownTable,
            };
            println!("{}", render_report(&report, format));
            Ok(())
        }
    }
}
