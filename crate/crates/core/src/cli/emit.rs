//! Figure-ready tables and their CSV / JSON encodings.
//!
//! CSV files open with `# key = value` metadata lines, then a header row and
//! one row per record. Reals are written with 17 significant digits so they
//! parse back to the same `f64`. JSON carries the same metadata and fields.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::crossover::{CrossoverResult, SweepRow};
use crate::error::{Error, Result};

use super::config::Format;

pub const CURVE_COLUMNS: [&str; 4] = ["mu", "I_product", "I_entangled", "delta"];
pub const CROSSOVER_COLUMNS: [&str; 9] = [
    "model", "d", "eta", "nu", "mu_c", "delta_at_0", "delta_at_1", "iterations", "bracket_width",
];
pub const SWEEP_COLUMNS: [&str; 7] = ["model", "d", "eta", "nu", "mu_c", "parity", "error"];
/// Written for `mu_c` when there is no crossing.
pub const NONE: &str = "none";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub mu: f64,
    #[serde(rename = "I_product")]
    pub i_product: f64,
    #[serde(rename = "I_entangled")]
    pub i_entangled: f64,
    #[serde(rename = "I_custom", skip_serializing_if = "Option::is_none", default)]
    pub i_custom: Option<f64>,
    pub delta: f64,
}

/// Mutual information of the product, maximally entangled and optional
/// custom input along a μ grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTable {
    pub metadata: Vec<(String, String)>,
    pub has_custom: bool,
    pub rows: Vec<CurveRow>,
}

impl CurveTable {
    pub fn columns(&self) -> Vec<&'static str> {
        let mut cols = CURVE_COLUMNS[..3].to_vec();
        if self.has_custom {
            cols.push("I_custom");
        }
        cols.push("delta");
        cols
    }

    /// Rows ascending in μ, no NaN, custom column present exactly when declared.
    pub fn check(&self) -> Result<()> {
        if self.rows.windows(2).any(|w| !(w[1].mu > w[0].mu)) {
            return Err(Error::InvalidGrid("curve rows must be strictly ascending in mu".into()));
        }
        for r in &self.rows {
            let nan = [r.mu, r.i_product, r.i_entangled, r.delta]
                .iter()
                .chain(r.i_custom.as_ref())
                .any(|x| x.is_nan());
            if nan {
                return Err(Error::InvalidGrid(format!("NaN in curve row at mu = {}", r.mu)));
            }
            if r.i_custom.is_some() != self.has_custom {
                return Err(Error::InvalidGrid(format!("I_custom column mismatch at mu = {}", r.mu)));
            }
        }
        Ok(())
    }
}

/// One crossover search with the channel it was run on.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverRecord {
    pub model: String,
    pub d: usize,
    pub eta: f64,
    pub nu: f64,
    pub result: CrossoverResult,
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_mu_c(mu_c: Option<f64>) -> String {
    mu_c.map(fmt_real).unwrap_or_else(|| NONE.to_string())
}

fn real_json(x: f64) -> Result<Value> {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .ok_or_else(|| Error::InvalidGrid(format!("cannot encode {x} in JSON")))
}

fn write_metadata(out: &mut Vec<u8>, metadata: &[(String, String)]) -> Result<()> {
    for (k, v) in metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    Ok(())
}

fn csv_body(out: &mut Vec<u8>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn json_document(metadata: &[(String, String)], columns: &[&str], rows: Vec<Value>) -> Result<Vec<u8>> {
    let meta: Map<String, Value> = metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let doc = json!({ "metadata": meta, "columns": columns, "rows": rows });
    let mut out = serde_json::to_vec_pretty(&doc)?;
    out.push(b'\n');
    Ok(out)
}

pub fn render_curve(table: &CurveTable, format: Format) -> Result<Vec<u8>> {
    table.check()?;
    let cols = table.columns();
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            write_metadata(&mut out, &table.metadata)?;
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    let mut v = vec![fmt_real(r.mu), fmt_real(r.i_product), fmt_real(r.i_entangled)];
                    v.extend(r.i_custom.map(fmt_real));
                    v.push(fmt_real(r.delta));
                    v
                })
                .collect();
            csv_body(&mut out, &cols, rows)?;
            Ok(out)
        }
        Format::Json => {
            let rows = table
                .rows
                .iter()
                .map(serde_json::to_value)
                .collect::<std::result::Result<_, _>>()?;
            json_document(&table.metadata, &cols, rows)
        }
    }
}

pub fn render_crossover(
    metadata: &[(String, String)],
    records: &[CrossoverRecord],
    format: Format,
) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            write_metadata(&mut out, metadata)?;
            let rows = records
                .iter()
                .map(|r| {
                    vec![
                        r.model.clone(),
                        r.d.to_string(),
                        fmt_real(r.eta),
                        fmt_real(r.nu),
                        fmt_mu_c(r.result.mu_c),
                        fmt_real(r.result.delta_at_0),
                        fmt_real(r.result.delta_at_1),
                        r.result.iterations.to_string(),
                        fmt_real(r.result.bracket_width),
                    ]
                })
                .collect();
            csv_body(&mut out, &CROSSOVER_COLUMNS, rows)?;
            Ok(out)
        }
        Format::Json => {
            let rows = records
                .iter()
                .map(|r| {
                    Ok(json!({
                        "model": r.model,
                        "d": r.d,
                        "eta": real_json(r.eta)?,
                        "nu": real_json(r.nu)?,
                        "mu_c": r.result.mu_c.map(real_json).transpose()?,
                        "delta_at_0": real_json(r.result.delta_at_0)?,
                        "delta_at_1": real_json(r.result.delta_at_1)?,
                        "iterations": r.result.iterations,
                        "bracket_width": real_json(r.result.bracket_width)?,
                    }))
                })
                .collect::<Result<_>>()?;
            json_document(metadata, &CROSSOVER_COLUMNS, rows)
        }
    }
}

pub fn render_sweep(metadata: &[(String, String)], rows: &[SweepRow], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut out = Vec::new();
            write_metadata(&mut out, metadata)?;
            let body = rows
                .iter()
                .map(|r| {
                    vec![
                        r.model.to_string(),
                        r.d.to_string(),
                        fmt_real(r.eta),
                        fmt_real(r.nu),
                        fmt_mu_c(r.mu_c),
                        r.parity.to_string(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            csv_body(&mut out, &SWEEP_COLUMNS, body)?;
            Ok(out)
        }
        Format::Json => {
            let body = rows
                .iter()
                .map(|r| {
                    Ok(json!({
                        "model": r.model,
                        "d": r.d,
                        "eta": real_json(r.eta)?,
                        "nu": real_json(r.nu)?,
                        "mu_c": r.mu_c.map(real_json).transpose()?,
                        "parity": r.parity,
                        "error": r.error,
                    }))
                })
                .collect::<Result<_>>()?;
            json_document(metadata, &SWEEP_COLUMNS, body)
        }
    }
}

/// Writes `bytes` to `path`, or to stdout when there is no path.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| Error::Output {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Reads a curve CSV back: metadata pairs and rows.
pub fn read_curve_csv(text: &str) -> Result<CurveTable> {
    let metadata = text
        .lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let has_custom = header.iter().any(|h| h == "I_custom");
    let rows = reader
        .deserialize::<CurveRow>()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(CurveTable {
        metadata,
        has_custom,
        rows,
    })
}

/// Reads a curve JSON document back.
pub fn read_curve_json(text: &str) -> Result<CurveTable> {
    let doc: Value = serde_json::from_str(text)?;
    let metadata = doc["metadata"]
        .as_object()
        .map(|m| {
            m.iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
                .collect()
        })
        .unwrap_or_default();
    let has_custom = doc["columns"]
        .as_array()
        .is_some_and(|c| c.iter().any(|v| v == "I_custom"));
    let rows: Vec<CurveRow> = serde_json::from_value(doc["rows"].clone())?;
    Ok(CurveTable {
        metadata,
        has_custom,
        rows,
    })
}
