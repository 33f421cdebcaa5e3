//! CSV and JSON-lines output.
//!
//! Run rows use the fixed column order in [`RUN_COLUMNS`]. When an
//! experiment was budgeted by iterations only, `time_to_last_best_s` is left
//! empty so the file depends only on the spec and seeds.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::error::HarnessError;
use crate::harness::experiment::{AggregateRow, ExperimentResult, RunRecord};
use crate::search::TracePoint;
use crate::strategy::{StrategyConfig, StrategyKind};

pub const RUN_COLUMNS: [&str; 11] = [
    "instance",
    "strategy",
    "L",
    "seed",
    "best_fitness",
    "deviation",
    "time_to_last_best_s",
    "hc_like_pct",
    "iterations",
    "accepted",
    "last_best_iteration",
];

pub const AGGREGATE_COLUMNS: [&str; 11] = [
    "instance",
    "strategy",
    "L",
    "runs",
    "mean_best_fitness",
    "mean_deviation",
    "mean_time_to_last_best_s",
    "mean_hc_like_pct",
    "mean_iterations",
    "significantly_better_than",
    "significantly_worse_than",
];

pub const TRACE_COLUMNS: [&str; 4] = ["iteration", "elapsed_s", "F", "F_best"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "jsonl" | "json-lines" | "jsonlines" => Ok(Self::JsonLines),
            other => Err(format!(
                "unknown output format `{other}` (expected csv or jsonl)"
            )),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn history_column(s: &StrategyConfig) -> String {
    if s.kind.uses_history() {
        s.history_length.to_string()
    } else {
        String::new()
    }
}

pub fn write_runs_csv<W: Write>(
    records: &[RunRecord],
    wall_clock: bool,
    sink: W,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(RUN_COLUMNS)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.strategy.kind.to_string(),
            history_column(&r.strategy),
            r.seed.to_string(),
            r.best_fitness.to_string(),
            opt(r.deviation),
            if wall_clock {
                r.time_to_last_best_s.to_string()
            } else {
                String::new()
            },
            r.hc_like_pct.to_string(),
            r.iterations.to_string(),
            r.accepted.to_string(),
            opt(r.last_best_iteration),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_aggregates_csv<W: Write>(
    rows: &[AggregateRow],
    wall_clock: bool,
    sink: W,
) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(AGGREGATE_COLUMNS)?;
    for a in rows {
        let labels = |pred: fn(&crate::harness::experiment::Comparison) -> bool| {
            a.comparisons
                .iter()
                .filter(|c| pred(c))
                .map(|c| c.other.label())
                .collect::<Vec<_>>()
                .join(";")
        };
        w.write_record([
            a.instance.clone(),
            a.strategy.kind.to_string(),
            history_column(&a.strategy),
            a.runs.to_string(),
            a.mean_best_fitness.to_string(),
            opt(a.mean_deviation),
            if wall_clock {
                a.mean_time_to_last_best_s.to_string()
            } else {
                String::new()
            },
            a.mean_hc_like_pct.to_string(),
            a.mean_iterations.to_string(),
            labels(|c| c.significantly_better()),
            labels(|c| c.significantly_worse()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line: runs tagged `"type": "run"`, then aggregates
/// tagged `"type": "aggregate"`.
pub fn write_json_lines<W: Write>(
    result: &ExperimentResult,
    mut sink: W,
) -> Result<(), HarnessError> {
    fn line<W: Write, T: Serialize>(
        sink: &mut W,
        kind: &str,
        value: &T,
    ) -> Result<(), HarnessError> {
        let mut obj = serde_json::to_value(value)?;
        if let Some(map) = obj.as_object_mut() {
            map.insert("type".into(), json!(kind));
        }
        serde_json::to_writer(&mut *sink, &obj)?;
        sink.write_all(b"\n")?;
        Ok(())
    }
    for r in &result.records {
        let mut v = serde_json::to_value(r)?;
        if !result.wall_clock {
            if let Some(map) = v.as_object_mut() {
                map.insert("time_to_last_best_s".into(), serde_json::Value::Null);
            }
        }
        line(&mut sink, "run", &v)?;
    }
    for a in &result.aggregates {
        line(&mut sink, "aggregate", a)?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_trace_csv<W: Write>(trace: &[TracePoint], sink: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(TRACE_COLUMNS)?;
    for p in trace {
        w.write_record([
            p.iteration.to_string(),
            p.elapsed_s.to_string(),
            p.current.to_string(),
            p.best.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failure never leaves a partial file behind.
pub fn write_atomically<F>(path: &Path, contents: F) -> Result<(), HarnessError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), HarnessError>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut buf = io::BufWriter::new(tmp.as_file_mut());
        contents(&mut buf)?;
        buf.flush()?;
    }
    tmp.persist(path).map_err(|e| HarnessError::Io(e.error))?;
    Ok(())
}

/// Path of the aggregate table that accompanies a run CSV:
/// `out.csv` becomes `out.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    out.with_file_name(format!("{stem}.summary.csv"))
}

/// Writes an experiment to `out`. CSV output produces the run table at
/// `out` and the aggregate table next to it (see [`summary_path`]);
/// JSON-lines output produces a single file. Returns the paths written.
pub fn export_results(
    result: &ExperimentResult,
    out: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, HarnessError> {
    match format {
        OutputFormat::Csv => {
            let summary = summary_path(out);
            write_atomically(out, |w| {
                write_runs_csv(&result.records, result.wall_clock, w)
            })?;
            write_atomically(&summary, |w| {
                write_aggregates_csv(&result.aggregates, result.wall_clock, w)
            })?;
            Ok(vec![out.to_path_buf(), summary])
        }
        OutputFormat::JsonLines => {
            write_atomically(out, |w| write_json_lines(result, w))?;
            Ok(vec![out.to_path_buf()])
        }
    }
}

/// File name of a run's trace: `<instance>_<strategy>_L<len>_run<index>.csv`.
pub fn trace_file_name(record: &RunRecord) -> String {
    format!(
        "{}_{}_L{}_run{}.csv",
        record.instance,
        record.strategy.kind.as_str().to_ascii_lowercase(),
        record.strategy.history_length,
        record.run_index
    )
}

/// Writes one trace CSV per run that carries a trace.
pub fn write_traces(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for r in &result.records {
        if let Some(trace) = &r.trace {
            let path = dir.join(trace_file_name(r));
            write_atomically(&path, |w| write_trace_csv(trace, w))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn field<T: FromStr>(rec: &csv::StringRecord, idx: usize) -> Result<Option<T>, HarnessError> {
    let raw = rec.get(idx).unwrap_or("");
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| {
        HarnessError::Spec(format!("column {}: cannot parse `{raw}`", RUN_COLUMNS[idx]))
    })
}

fn required<T: FromStr>(rec: &csv::StringRecord, idx: usize) -> Result<T, HarnessError> {
    field(rec, idx)?
        .ok_or_else(|| HarnessError::Spec(format!("column {}: missing value", RUN_COLUMNS[idx])))
}

/// Reads a run CSV back. Traces are not part of the table, run indices are
/// not stored and come back as zero, and an empty time column reads as 0.
pub fn read_runs_csv<R: Read>(source: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut reader = csv::Reader::from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(RUN_COLUMNS.iter().copied()) {
        return Err(HarnessError::Spec("unexpected run CSV header".into()));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let kind: StrategyKind = rec.get(1).unwrap_or("").parse()?;
        let history_length = field::<usize>(&rec, 2)?.unwrap_or(1);
        out.push(RunRecord {
            instance: rec.get(0).unwrap_or("").to_string(),
            strategy: StrategyConfig::new(kind, history_length)?,
            run_index: 0,
            seed: required(&rec, 3)?,
            best_fitness: required(&rec, 4)?,
            deviation: field(&rec, 5)?,
            time_to_last_best_s: field(&rec, 6)?.unwrap_or(0.0),
            hc_like_pct: required(&rec, 7)?,
            iterations: required(&rec, 8)?,
            accepted: required(&rec, 9)?,
            last_best_iteration: field(&rec, 10)?,
            trace: None,
        });
    }
    Ok(out)
}
