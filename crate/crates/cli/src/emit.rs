//! CSV and JSON serialization of scan results.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use entloc::{CellFlag, Distribution2D, DistributionKind};
use serde_json::{json, Value};

use crate::CliError;

/// Twelve significant digits; `nan` for missing values.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if x == 0.0 {
        format!("{:.11e}", 0.0)
    } else {
        format!("{x:.11e}")
    }
}

pub fn distribution_csv(dist: &Distribution2D) -> String {
    let mut out = format!(
        "{},{},value,prob,flag\n",
        dist.axis_names[0], dist.axis_names[1]
    );
    let nb = dist.axis_b.len();
    for (k, ((v, p), f)) in dist
        .values
        .iter()
        .zip(&dist.prob)
        .zip(&dist.flags)
        .enumerate()
    {
        let value = if *f == CellFlag::Masked { f64::NAN } else { *v };
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_value(dist.axis_a[k / nb]),
            format_value(dist.axis_b[k % nb]),
            format_value(value),
            format_value(*p),
            f.as_str()
        );
    }
    out
}

fn parse_field(field: &str, line: usize) -> Result<f64, CliError> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("line {line}: '{field}' is not a number")))
}

/// Reads a surface written by [`distribution_csv`]. Rows must be row-major.
pub fn parse_distribution_csv(
    text: &str,
    kind: DistributionKind,
) -> Result<Distribution2D, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Input("empty CSV".into()))?;
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    if names.len() != 5 || names[2..] != ["value", "prob", "flag"] {
        return Err(CliError::Input(format!("unexpected CSV header '{header}'")));
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::Input(format!(
                "line {}: expected 5 fields",
                i + 1
            )));
        }
        let flag = CellFlag::parse(fields[4].trim()).ok_or_else(|| {
            CliError::Input(format!("line {}: unknown flag '{}'", i + 1, fields[4]))
        })?;
        rows.push((
            parse_field(fields[0], i + 1)?,
            parse_field(fields[1], i + 1)?,
            parse_field(fields[2], i + 1)?,
            parse_field(fields[3], i + 1)?,
            flag,
        ));
    }
    let first_a = rows
        .first()
        .ok_or_else(|| CliError::Input("CSV has no data rows".into()))?
        .0;
    let axis_b: Vec<f64> = rows
        .iter()
        .take_while(|r| r.0 == first_a)
        .map(|r| r.1)
        .collect();
    let nb = axis_b.len();
    if rows.len() % nb != 0 {
        return Err(CliError::Input("rows do not form a complete grid".into()));
    }
    let axis_a: Vec<f64> = rows.iter().step_by(nb).map(|r| r.0).collect();
    for (k, r) in rows.iter().enumerate() {
        if r.0 != axis_a[k / nb] || r.1 != axis_b[k % nb] {
            return Err(CliError::Input(format!(
                "row {} breaks the row-major grid order",
                k + 1
            )));
        }
    }
    Ok(Distribution2D {
        axis_names: [names[0].to_string(), names[1].to_string()],
        axis_a,
        axis_b,
        values: rows.iter().map(|r| r.2).collect(),
        prob: rows.iter().map(|r| r.3).collect(),
        flags: rows.iter().map(|r| r.4).collect(),
        kind,
    })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn distribution_json(dist: &Distribution2D) -> Value {
    json!({
        "kind": dist.kind,
        "axes": {
            dist.axis_names[0].clone(): dist.axis_a,
            dist.axis_names[1].clone(): dist.axis_b,
        },
        "axis_order": dist.axis_names,
        "values": dist.values.iter().map(|&v| finite_or_null(v)).collect::<Vec<_>>(),
        "prob": dist.prob.iter().map(|&v| finite_or_null(v)).collect::<Vec<_>>(),
        "flags": dist.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
    })
}

/// Rows of named columns, one value per column.
pub fn table_csv(columns: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or standard output when absent.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
