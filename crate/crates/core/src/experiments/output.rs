use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::report::AggregateReport;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;

/// Tabular projection of one cell. Parameters that do not apply to the cell
/// (`mu` for GSEMO, `delta`/`p`/`sigma` for other noise kinds) are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub algorithm: String,
    pub objective: String,
    pub n: usize,
    pub mu: Option<usize>,
    pub pc: f64,
    pub noise_kind: String,
    pub delta: Option<f64>,
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    pub runs: usize,
    pub success_rate: f64,
    pub mean_evals: f64,
    pub median_evals: f64,
    pub stddev_evals: f64,
    pub budget: u64,
    pub seed: u64,
}

impl CsvRow {
    pub fn from_report(report: &AggregateReport) -> Self {
        let cell = &report.cell;
        let (delta, p, sigma) = match cell.noise {
            NoiseModel::None => (None, None, None),
            NoiseModel::Bernoulli { delta, p } => (Some(delta), Some(p), None),
            NoiseModel::Gaussian { sigma } => (None, None, Some(sigma)),
        };
        Self {
            algorithm: cell.algorithm.kind().to_string(),
            objective: cell.objective.to_string(),
            n: cell.n,
            mu: cell.algorithm.mu(),
            pc: cell.algorithm.p_c(),
            noise_kind: cell.noise.kind().to_string(),
            delta,
            p,
            sigma,
            runs: report.runs.len(),
            success_rate: report.aggregate.success_rate,
            mean_evals: report.aggregate.mean_evals,
            median_evals: report.aggregate.median_evals,
            stddev_evals: report.aggregate.stddev_evals,
            budget: cell.budget,
            seed: cell.seed,
        }
    }
}

/// One row per cell, header first.
pub fn write_csv<W: Write>(writer: W, reports: &[AggregateReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in reports {
        w.serialize(CsvRow::from_report(r))?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn csv_string(reports: &[AggregateReport]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, reports)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// How `evaluations_used` is counted, stored alongside JSON results.
pub const EVALUATION_ACCOUNTING: &str = "one evaluation per fresh noisy draw; \
initial population counted; NSGA-II re-draws all parents every generation (2 mu per generation); \
GSEMO re-draws every archive member plus the offspring (1 + |P| per generation); \
runs stopped by the budget report the first count above it";

/// `{evaluation_accounting, config, reports: [{cell, cell_seed, aggregate, runs}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument<C> {
    #[serde(default)]
    pub evaluation_accounting: String,
    pub config: C,
    pub reports: Vec<AggregateReport>,
}

pub fn write_json<W: Write, C: Serialize>(
    writer: W,
    config: &C,
    reports: &[AggregateReport],
) -> Result<()> {
    #[derive(Serialize)]
    struct Doc<'a, C> {
        evaluation_accounting: &'a str,
        config: &'a C,
        reports: &'a [AggregateReport],
    }
    let mut w = writer;
    serde_json::to_writer_pretty(
        &mut w,
        &Doc {
            evaluation_accounting: EVALUATION_ACCOUNTING,
            config,
            reports,
        },
    )?;
    w.write_all(b"\n")
        .map_err(|e| Error::Json(serde_json::Error::io(e)))?;
    Ok(())
}

pub fn json_string<C: Serialize>(config: &C, reports: &[AggregateReport]) -> Result<String> {
    let mut buf = Vec::new();
    write_json(&mut buf, config, reports)?;
    Ok(String::from_utf8(buf).expect("json output is utf-8"))
}

/// One row of the long-format coverage trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub cell: usize,
    pub algorithm: String,
    pub objective: String,
    pub n: usize,
    pub noise_kind: String,
    pub delta: Option<f64>,
    pub p: Option<f64>,
    pub sigma: Option<f64>,
    pub run_index: usize,
    pub generation: u64,
    pub evaluations: u64,
    pub coverage_count: usize,
    pub population_size: usize,
}

/// Per-generation coverage of every traced run, one row per generation.
pub fn write_trace_csv<W: Write>(writer: W, reports: &[AggregateReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (cell, r) in reports.iter().enumerate() {
        let row = CsvRow::from_report(r);
        for run in &r.runs {
            for t in run.trace.iter().flatten() {
                w.serialize(TraceRow {
                    cell,
                    algorithm: row.algorithm.clone(),
                    objective: row.objective.clone(),
                    n: row.n,
                    noise_kind: row.noise_kind.clone(),
                    delta: row.delta,
                    p: row.p,
                    sigma: row.sigma,
                    run_index: run.run_index,
                    generation: t.generation,
                    evaluations: t.evaluations,
                    coverage_count: t.coverage_count,
                    population_size: t.population_size,
                })?;
            }
        }
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<TraceRow>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Write `contents` to `path`, creating missing parent directories.
pub fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
