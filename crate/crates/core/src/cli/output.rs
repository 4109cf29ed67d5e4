//! CSV and JSON-lines writers for result tables.

use std::io::{self, Write};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::run::{ResultRow, ResultTable, COLUMNS, SCHEMA_VERSION};

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn record(row: &ResultRow) -> [String; 11] {
    [
        format_float(row.t),
        cell(row.radius),
        cell(row.raw_mass),
        cell(row.normalized_mass),
        cell(row.main_term),
        cell(row.deviation),
        cell(row.lower_bound),
        cell(row.h_value),
        cell(row.value),
        cell(row.wall_time_ms),
        row.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(COLUMNS)?;
    for row in &table.rows {
        w.write_record(record(row))?;
    }
    w.flush()
}

pub fn csv_string(table: &ResultTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn write_jsonl<W: Write>(table: &ResultTable, mut out: W) -> io::Result<()> {
    for row in &table.rows {
        serde_json::to_writer(&mut out, row)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Serialize)]
struct Metadata<'a> {
    schema_version: u32,
    columns: [&'static str; 11],
    kind: &'a str,
    name: Option<&'a str>,
    surface: String,
    seed: u64,
    rows: usize,
    failed_rows: usize,
    main_term: &'static str,
}

/// Run description written next to the table.
pub fn metadata_json(config: &ExperimentConfig, table: &ResultTable) -> String {
    let m = Metadata {
        schema_version: SCHEMA_VERSION,
        columns: COLUMNS,
        kind: config.kind.as_str(),
        name: config.name.as_deref(),
        surface: config.surface.to_string(),
        seed: config.seed,
        rows: table.rows.len(),
        failed_rows: table.failed_rows(),
        main_term: match config.surface {
            super::config::Surface::H2 => "1/vol = 3/pi; normalisation log(1/4 + t^2)",
            super::config::Surface::Bianchi(_) => {
                "corrected constant |O_K^*| sqrt|d_K| / (4 vol); normalisation log(1 + t^2)"
            }
        },
    };
    serde_json::to_string_pretty(&m).expect("metadata serialises")
}
