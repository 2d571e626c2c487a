//! Benchmark harness: generate random pipelines, judge each one with both
//! the surrogate and the execution oracle, and aggregate the comparison.
//!
//! Pipeline `i` of a run is `random_pipeline(seed + i)`, so a report is
//! fully reproducible from its seed and every dataset sees the identical
//! pipeline set. Evaluations fan out over a worker pool; records are
//! collected back in index order, so everything except the timing fields is
//! byte-stable across runs.

use std::io::Write;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::Stopwatch;
use crate::dataset::{extract_features, Dataset};
use crate::kb::KnowledgeBase;
use crate::pipeline::{random_pipeline, Verdict, DEFAULT_MAX_STEPS};
use crate::surrogate::{evaluate_with_trace, map_to_surrogate, FiringRecord, MissingKnowledge};
use crate::tmethod::execute_pipeline;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub pipelines_per_dataset: usize,
    pub seed: u64,
    pub max_steps: usize,
    pub timeout_micros: u64,
    /// When false (the default), timeout verdicts are excluded from the
    /// agreement statistics: a timeout says something about the budget, not
    /// about the pipeline's logic.
    pub include_timeouts: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            pipelines_per_dataset: 1000,
            seed: 42,
            max_steps: DEFAULT_MAX_STEPS,
            timeout_micros: 30_000_000,
            include_timeouts: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodStats {
    pub invalid: usize,
    pub valid: usize,
    pub invalid_micros: u64,
    pub valid_micros: u64,
}

impl MethodStats {
    fn add(&mut self, verdict: &Verdict) {
        if verdict.valid {
            self.valid += 1;
            self.valid_micros += verdict.duration_micros;
        } else {
            self.invalid += 1;
            self.invalid_micros += verdict.duration_micros;
        }
    }

    pub fn total(&self) -> usize {
        self.invalid + self.valid
    }

    pub fn total_micros(&self) -> u64 {
        self.invalid_micros + self.valid_micros
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetReport {
    pub dataset: String,
    pub seed: u64,
    pub pipelines: usize,
    pub tmethod: MethodStats,
    pub surrogate: MethodStats,
    pub agreements: usize,
    pub disagreements: usize,
    /// Timeout verdicts left out of the agreement statistics.
    pub timeouts_excluded: usize,
    /// agreeing / compared, in percent.
    pub accuracy_pct: f64,
    /// Execution-oracle time spent on pipelines that turned out invalid,
    /// as a percentage of its total time.
    pub tmethod_wasted_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub config: BenchConfig,
    pub rows: Vec<DatasetReport>,
}

/// One line of the JSONL audit log. Divergent pipelines carry their full
/// surrogate trace and execution error so no disagreement is averaged away.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineRecord {
    pub dataset: String,
    pub index: usize,
    pub pipeline_seed: u64,
    pub pipeline_id: String,
    pub steps: Vec<String>,
    pub surrogate: Verdict,
    pub tmethod: Verdict,
    pub divergent: bool,
    pub excluded_timeout: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surrogate_trace: Option<Vec<FiringRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tmethod_error: Option<String>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    MissingKnowledge(#[from] MissingKnowledge),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug)]
pub struct ComparisonOutcome {
    pub report: ComparisonReport,
    pub records: Vec<PipelineRecord>,
}

/// Evaluates one pipeline with both methods. The surrogate time includes
/// the mapping step, not just the firings.
fn judge(
    dataset: &Dataset,
    features: crate::features::FeatureVector<crate::features::Binary>,
    kb: &KnowledgeBase,
    config: &BenchConfig,
    index: usize,
) -> Result<PipelineRecord, MissingKnowledge> {
    let pipeline_seed = config.seed.wrapping_add(index as u64);
    let spec = random_pipeline(pipeline_seed, config.max_steps);

    let watch = Stopwatch::start();
    let (net, token) = map_to_surrogate(&spec, features, kb)?;
    let (mut surrogate_verdict, trace) = evaluate_with_trace(&net, token);
    surrogate_verdict.duration_micros = watch.elapsed_micros();

    let outcome = execute_pipeline(&spec, dataset, config.timeout_micros);
    let tmethod_verdict = outcome.verdict;

    let excluded_timeout = tmethod_verdict.is_timeout() && !config.include_timeouts;
    let divergent = !excluded_timeout && surrogate_verdict.valid != tmethod_verdict.valid;

    let tmethod_error = tmethod_verdict.failure.as_ref().and_then(|f| match &f.reason {
        crate::pipeline::FailureReason::ExecutionFailed(text) => Some(text.clone()),
        _ => None,
    });

    Ok(PipelineRecord {
        dataset: dataset.name().to_string(),
        index,
        pipeline_seed,
        pipeline_id: spec.id.clone(),
        steps: spec.steps.iter().map(|s| s.component.clone()).collect(),
        surrogate: surrogate_verdict,
        tmethod: tmethod_verdict,
        divergent,
        excluded_timeout,
        surrogate_trace: divergent.then_some(trace),
        tmethod_error: if divergent { tmethod_error } else { None },
    })
}

fn aggregate(dataset: &Dataset, seed: u64, records: &[PipelineRecord]) -> DatasetReport {
    let mut tmethod = MethodStats::default();
    let mut surrogate = MethodStats::default();
    let mut agreements = 0usize;
    let mut disagreements = 0usize;
    let mut timeouts_excluded = 0usize;

    for record in records {
        tmethod.add(&record.tmethod);
        surrogate.add(&record.surrogate);
        if record.excluded_timeout {
            timeouts_excluded += 1;
        } else if record.divergent {
            disagreements += 1;
        } else {
            agreements += 1;
        }
    }

    let compared = agreements + disagreements;
    let accuracy_pct = if compared == 0 {
        100.0
    } else {
        agreements as f64 / compared as f64 * 100.0
    };
    let tmethod_total_micros = tmethod.total_micros();
    let tmethod_wasted_pct = if tmethod_total_micros == 0 {
        0.0
    } else {
        tmethod.invalid_micros as f64 / tmethod_total_micros as f64 * 100.0
    };

    DatasetReport {
        dataset: dataset.name().to_string(),
        seed,
        pipelines: records.len(),
        tmethod,
        surrogate,
        agreements,
        disagreements,
        timeouts_excluded,
        accuracy_pct,
        tmethod_wasted_pct,
    }
}

/// Runs the full comparison over every dataset.
pub fn run_comparison(
    datasets: &[Dataset],
    kb: &KnowledgeBase,
    config: &BenchConfig,
) -> Result<ComparisonOutcome, BenchError> {
    let mut rows = Vec::with_capacity(datasets.len());
    let mut records = Vec::new();

    for dataset in datasets {
        let features = extract_features(dataset);
        #[cfg(feature = "parallel")]
        let indices = (0..config.pipelines_per_dataset).into_par_iter();
        #[cfg(not(feature = "parallel"))]
        let indices = 0..config.pipelines_per_dataset;
        let dataset_records: Result<Vec<PipelineRecord>, MissingKnowledge> = indices
            .map(|i| judge(dataset, features, kb, config, i))
            .collect();
        let dataset_records = dataset_records?;
        rows.push(aggregate(dataset, config.seed, &dataset_records));
        records.extend(dataset_records);
    }

    Ok(ComparisonOutcome {
        report: ComparisonReport {
            config: config.clone(),
            rows,
        },
        records,
    })
}

/// Writes the per-pipeline audit log, one JSON object per line.
pub fn write_jsonl<W: Write>(records: &[PipelineRecord], mut out: W) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    MarkdownTable,
}

/// Renders a report. The markdown form puts datasets in columns and the
/// five comparison criteria in rows, with accuracy and wasted-time rows
/// underneath.
pub fn render_report(report: &ComparisonReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serialization is infallible")
        }
        ReportFormat::MarkdownTable => render_markdown(report),
    }
}

pub fn parse_report_json(text: &str) -> Result<ComparisonReport, serde_json::Error> {
    serde_json::from_str(text)
}

fn seconds(micros: u64) -> String {
    format!("{:.3}", micros as f64 / 1e6)
}

fn render_markdown(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let mut header = String::from("| Criteria |");
    let mut rule = String::from("|---|");
    for row in &report.rows {
        header.push_str(&format!(" {} |", row.dataset));
        rule.push_str("---|");
    }
    out.push_str(&header);
    out.push('\n');
    out.push_str(&rule);
    out.push('\n');

    let mut push_row = |label: &str, cell: &dyn Fn(&DatasetReport) -> String| {
        let mut line = format!("| {label} |");
        for row in &report.rows {
            line.push_str(&format!(" {} |", cell(row)));
        }
        out.push_str(&line);
        out.push('\n');
    };

    push_row("T-method invalid/valid pipelines", &|r| {
        format!("{}/{}", r.tmethod.invalid, r.tmethod.valid)
    });
    push_row("T-method evaluation time invalid/valid (s)", &|r| {
        format!("{}/{}", seconds(r.tmethod.invalid_micros), seconds(r.tmethod.valid_micros))
    });
    push_row("Surrogate invalid/valid pipelines", &|r| {
        format!("{}/{}", r.surrogate.invalid, r.surrogate.valid)
    });
    push_row("Surrogate evaluation time invalid/valid (s)", &|r| {
        format!("{}/{}", seconds(r.surrogate.invalid_micros), seconds(r.surrogate.valid_micros))
    });
    push_row("Different/similar verdicts", &|r| {
        format!("{}/{}", r.disagreements, r.agreements)
    });
    push_row("Surrogate accuracy (%)", &|r| format!("{:.2}", r.accuracy_pct));
    push_row("T-method wasted time (%)", &|r| {
        format!("{:.2}", r.tmethod_wasted_pct)
    });
    if report.rows.iter().any(|r| r.timeouts_excluded > 0) {
        push_row("Timeouts excluded", &|r| r.timeouts_excluded.to_string());
    }
    out
}

impl ComparisonReport {
    /// Copy with every timing-derived field zeroed; golden comparisons use
    /// this because wall-clock numbers are never reproducible.
    pub fn zeroed_timings(&self) -> ComparisonReport {
        let mut report = self.clone();
        for row in &mut report.rows {
            row.tmethod.invalid_micros = 0;
            row.tmethod.valid_micros = 0;
            row.surrogate.invalid_micros = 0;
            row.surrogate.valid_micros = 0;
            row.tmethod_wasted_pct = 0.0;
        }
        report
    }
}
