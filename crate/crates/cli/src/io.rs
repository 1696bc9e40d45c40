//! Matrix file parsing and record serialization.
//!
//! Input files hold one or more square matrices, either as JSON
//! (`{"n": 2, "rows": [[..], [..]]}` or an array of such objects) or as CSV
//! with one row per line and blank lines between matrices. The format is
//! detected from the first non-blank character.

use std::fs;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use strainlab::{Matrix, StrainKind};

use crate::CliError;

/// A parsed matrix with its `path#index` identifier.
#[derive(Debug, Clone)]
pub struct NamedMatrix {
    pub id: String,
    pub matrix: Matrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInput {
    One(JsonMatrix),
    Many(Vec<JsonMatrix>),
}

/// Reads a file, or standard input for `-`.
pub fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn source_label(path: &str) -> &str {
    if path == "-" {
        "stdin"
    } else {
        path
    }
}

/// Parses every matrix in `text`. Any structural problem or non-finite entry
/// rejects the whole file.
pub fn parse_matrices(path: &str, text: &str) -> Result<Vec<NamedMatrix>, CliError> {
    let label = source_label(path);
    let matrices = match text.trim_start().chars().next() {
        None => return Err(CliError::Input(format!("{label}: empty input"))),
        Some('{') | Some('[') => parse_json(label, text)?,
        Some(_) => parse_csv(label, text)?,
    };
    Ok(matrices
        .into_iter()
        .enumerate()
        .map(|(i, matrix)| NamedMatrix {
            id: format!("{label}#{i}"),
            matrix,
        })
        .collect())
}

fn parse_json(label: &str, text: &str) -> Result<Vec<Matrix>, CliError> {
    let parsed: JsonInput =
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("{label}: {e}")))?;
    let items = match parsed {
        JsonInput::One(m) => vec![m],
        JsonInput::Many(ms) => ms,
    };
    if items.is_empty() {
        return Err(CliError::Input(format!("{label}: no matrices")));
    }
    items
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            if m.n == 0 || m.rows.len() != m.n || m.rows.iter().any(|r| r.len() != m.n) {
                return Err(CliError::Input(format!(
                    "{label}#{i}: rows do not form a {0}x{0} matrix",
                    m.n
                )));
            }
            Matrix::from_row_major(m.n, m.rows.concat())
                .map_err(|e| CliError::Input(format!("{label}#{i}: {e}")))
        })
        .collect()
}

fn parse_csv(label: &str, text: &str) -> Result<Vec<Matrix>, CliError> {
    let mut blocks: Vec<Vec<&str>> = vec![Vec::new()];
    for line in text.lines() {
        if line.trim().is_empty() {
            if !blocks.last().unwrap().is_empty() {
                blocks.push(Vec::new());
            }
        } else {
            blocks.last_mut().unwrap().push(line);
        }
    }
    if blocks.last().is_some_and(|b| b.is_empty()) {
        blocks.pop();
    }

    blocks
        .iter()
        .enumerate()
        .map(|(i, block)| {
            let joined = block.join("\n");
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .trim(csv::Trim::All)
                .from_reader(joined.as_bytes());
            let mut data = Vec::new();
            let mut rows = 0;
            for record in reader.records() {
                let record = record.map_err(|e| CliError::Input(format!("{label}#{i}: {e}")))?;
                if record.len() != block.len() {
                    return Err(CliError::Input(format!(
                        "{label}#{i}: {} rows but {} columns",
                        block.len(),
                        record.len()
                    )));
                }
                for field in record.iter() {
                    let v: f64 = field
                        .parse()
                        .map_err(|_| CliError::Input(format!("{label}#{i}: bad number '{field}'")))?;
                    data.push(v);
                }
                rows += 1;
            }
            Matrix::from_row_major(rows, data).map_err(|e| CliError::Input(format!("{label}#{i}: {e}")))
        })
        .collect()
}

/// Fixed 17-significant-digit rendering; parses back to the same f64.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One output row of `compute`.
#[derive(Debug, Clone)]
pub struct StrainRecord {
    pub input_id: String,
    pub kind: StrainKind,
    pub params: Option<(f64, f64, f64)>,
    /// `Ok((value, minimizer))` or the error code.
    pub outcome: Result<(f64, Matrix), &'static str>,
}

impl StrainRecord {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }

    fn status(&self) -> String {
        match &self.outcome {
            Ok(_) => "ok".to_string(),
            Err(code) => format!("error:{code}"),
        }
    }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    input_id: &'a str,
    kind: &'static str,
    alpha: Option<Box<RawValue>>,
    beta: Option<Box<RawValue>>,
    gamma: Option<Box<RawValue>>,
    value: Option<Box<RawValue>>,
    minimizer: Vec<Box<RawValue>>,
    status: String,
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(fmt_num(x)).expect("finite numbers are valid JSON")
}

pub fn write_records<W: Write>(
    out: &mut W,
    records: &[StrainRecord],
    format: OutputFormat,
) -> Result<(), CliError> {
    match format {
        OutputFormat::Json => {
            let rows: Vec<JsonRecord> = records
                .iter()
                .map(|r| {
                    let (value, minimizer) = match &r.outcome {
                        Ok((v, m)) => (Some(raw(*v)), m.as_slice().iter().map(|&x| raw(x)).collect()),
                        Err(_) => (None, Vec::new()),
                    };
                    JsonRecord {
                        input_id: &r.input_id,
                        kind: r.kind.name(),
                        alpha: r.params.map(|p| raw(p.0)),
                        beta: r.params.map(|p| raw(p.1)),
                        gamma: r.params.map(|p| raw(p.2)),
                        value,
                        minimizer,
                        status: r.status(),
                    }
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows)
                .map_err(|e| CliError::Output(e.to_string()))?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["input_id", "kind", "alpha", "beta", "gamma", "value", "minimizer", "status"])
                .map_err(|e| CliError::Output(e.to_string()))?;
            for r in records {
                let param = |f: fn(&(f64, f64, f64)) -> f64| r.params.as_ref().map(f).map(fmt_num).unwrap_or_default();
                let (value, minimizer) = match &r.outcome {
                    Ok((v, m)) => (
                        fmt_num(*v),
                        m.as_slice().iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(" "),
                    ),
                    Err(_) => (String::new(), String::new()),
                };
                w.write_record([
                    r.input_id.as_str(),
                    r.kind.name(),
                    &param(|p| p.0),
                    &param(|p| p.1),
                    &param(|p| p.2),
                    &value,
                    &minimizer,
                    &r.status(),
                ])
                .map_err(|e| CliError::Output(e.to_string()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
