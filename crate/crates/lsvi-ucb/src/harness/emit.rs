//! Metrics emission: the CSV schema (one row per episode), its parser, and
//! the JSON mirror with the canonical config echo.
//!
//! Columns, exactly and in order: `run_id, seed, variant, episode, regret,
//! cum_regret, logical_space, process_time_s, learn_events, resets`. Header
//! row mandatory, UTF-8, numbers in shortest round-trip decimal form (so a
//! parse-back reproduces every float bit-for-bit).

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::agents::Variant;
use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::runner::RunResult;
use crate::harness::EpisodeRecord;

pub const CSV_HEADER: &str =
    "run_id,seed,variant,episode,regret,cum_regret,logical_space,process_time_s,learn_events,resets";

/// One CSV row. `variant` is a free string here (agent runs use the variant
/// label; diagnostic series use `"diagnostic"`).
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub run_id: String,
    pub seed: u64,
    pub variant: String,
    pub episode: u64,
    pub regret: f64,
    pub cum_regret: f64,
    pub logical_space: u64,
    pub process_time_s: f64,
    pub learn_events: u64,
    pub resets: u64,
}

fn check_field(name: &str, value: &str) -> Result<()> {
    if value.contains(',') || value.contains('\n') || value.contains('"') {
        return Err(Error::Format(format!(
            "{name} {value:?} contains a CSV delimiter; cannot emit"
        )));
    }
    Ok(())
}

/// Flattens run results into CSV rows, one per episode record.
pub fn result_rows(results: &[RunResult]) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for r in results {
        for rec in &r.records {
            rows.push(CsvRow {
                run_id: r.run_id.clone(),
                seed: r.seed,
                variant: rec.variant.label().to_string(),
                episode: rec.episode,
                regret: rec.regret,
                cum_regret: rec.cum_regret,
                logical_space: rec.logical_space,
                process_time_s: rec.process_time_s,
                learn_events: rec.learn_events,
                resets: rec.resets,
            });
        }
    }
    rows
}

/// Renders rows as a CSV document. Rejects empty input and ids that would
/// break the delimiter-free format.
pub fn csv_string_rows(rows: &[CsvRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Config("no records to emit".into()));
    }
    let mut out = String::with_capacity(rows.len() * 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        check_field("run_id", &row.run_id)?;
        check_field("variant", &row.variant)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.run_id,
            row.seed,
            row.variant,
            row.episode,
            row.regret,
            row.cum_regret,
            row.logical_space,
            row.process_time_s,
            row.learn_events,
            row.resets
        );
    }
    Ok(out)
}

/// Renders run results as a CSV document.
pub fn csv_string(results: &[RunResult]) -> Result<String> {
    csv_string_rows(&result_rows(results))
}

/// Writes the CSV document to `path`.
pub fn emit_csv(results: &[RunResult], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(results)?)?;
    Ok(())
}

fn parse_field<T: FromStr>(lineno: usize, name: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::Format(format!("CSV line {lineno}: bad {name} field {value:?}"))
    })
}

/// Parses a CSV document produced by [`csv_string_rows`]. Strict: the header
/// must match exactly and every row must have exactly ten fields.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV document".into()))?;
    if header != CSV_HEADER {
        return Err(Error::Format(format!(
            "CSV header mismatch: expected {CSV_HEADER:?}, got {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::Format(format!(
                "CSV line {lineno}: expected 10 fields, got {}",
                fields.len()
            )));
        }
        rows.push(CsvRow {
            run_id: fields[0].to_string(),
            seed: parse_field(lineno, "seed", fields[1])?,
            variant: fields[2].to_string(),
            episode: parse_field(lineno, "episode", fields[3])?,
            regret: parse_field(lineno, "regret", fields[4])?,
            cum_regret: parse_field(lineno, "cum_regret", fields[5])?,
            logical_space: parse_field(lineno, "logical_space", fields[6])?,
            process_time_s: parse_field(lineno, "process_time_s", fields[7])?,
            learn_events: parse_field(lineno, "learn_events", fields[8])?,
            resets: parse_field(lineno, "resets", fields[9])?,
        });
    }
    Ok(rows)
}

/// Regroups parsed rows into run results (consecutive rows sharing a
/// `run_id`). The variant string must be one of the agent labels.
pub fn rows_to_results(rows: &[CsvRow]) -> Result<Vec<RunResult>> {
    let mut results: Vec<RunResult> = Vec::new();
    for row in rows {
        let variant: Variant = row.variant.parse()?;
        let record = EpisodeRecord {
            episode: row.episode,
            variant,
            regret: row.regret,
            cum_regret: row.cum_regret,
            logical_space: row.logical_space,
            process_time_s: row.process_time_s,
            learn_events: row.learn_events,
            resets: row.resets,
        };
        match results.last_mut() {
            Some(last) if last.run_id == row.run_id => {
                if last.seed != row.seed {
                    return Err(Error::Format(format!(
                        "run {} has conflicting seeds {} and {}",
                        row.run_id, last.seed, row.seed
                    )));
                }
                last.records.push(record);
            }
            _ => results.push(RunResult {
                run_id: row.run_id.clone(),
                seed: row.seed,
                variant,
                records: vec![record],
                weight_trace: None,
            }),
        }
    }
    Ok(results)
}

fn record_value(rec: &EpisodeRecord) -> Value {
    json!({
        "episode": rec.episode,
        "variant": rec.variant.label(),
        "regret": rec.regret,
        "cum_regret": rec.cum_regret,
        "logical_space": rec.logical_space,
        "process_time_s": rec.process_time_s,
        "learn_events": rec.learn_events,
        "resets": rec.resets,
    })
}

/// The JSON mirror: the same per-episode fields as the CSV, as an array of
/// objects per run, plus the canonical config echo.
pub fn json_string(results: &[RunResult], cfg: &ExperimentConfig) -> Result<String> {
    if results.is_empty() {
        return Err(Error::Config("no records to emit".into()));
    }
    let mut echo = Map::new();
    for (k, v) in cfg.canonical_map() {
        echo.insert(k, Value::String(v));
    }
    let runs: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "run_id": r.run_id,
                "seed": r.seed,
                "variant": r.variant.label(),
                "records": r.records.iter().map(record_value).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({ "config": Value::Object(echo), "runs": runs });
    serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Format(format!("JSON encoding failed: {e}")))
}

/// Writes the JSON document to `path`.
pub fn emit_json(results: &[RunResult], cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    std::fs::write(path, json_string(results, cfg)?)?;
    Ok(())
}
