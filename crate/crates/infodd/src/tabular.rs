//! Integer CSV tables: header `x_1,...,x_n,f`, one row per line.

use std::sync::Arc;

use infodd_core::{ConsistencyPolicy, DecisionTable, Row, TableSchema};

use crate::error::{Error, Result};

/// Parses a CSV table against `schema`. Header columns may use either the
/// positional names `x_1..x_n` or the schema's variable names; the last
/// column must be `f`.
pub fn parse_table_csv(text: &str, schema: Arc<TableSchema>, policy: ConsistencyPolicy) -> Result<DecisionTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let n = schema.len();
    let header_ok = header.len() == n + 1
        && header
            .iter()
            .take(n)
            .enumerate()
            .all(|(i, h)| h == format!("x_{}", i + 1) || schema.variable(i).is_some_and(|v| v.name() == h))
        && header.get(n) == Some("f");
    if !header_ok {
        return Err(Error::Format {
            line: 1,
            reason: format!("expected header x_1..x_{n},f, got `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cells = record
            .iter()
            .map(|c| c.parse::<u32>().map_err(|_| Error::Format { line, reason: format!("`{c}` is not an integer") }))
            .collect::<Result<Vec<_>>>()?;
        let (output, values) = cells.split_last().expect("csv enforces the header width");
        rows.push(Row::new(values.to_vec(), *output));
    }
    Ok(DecisionTable::new(schema, rows, policy)?)
}

pub fn write_table_csv(table: &DecisionTable) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=table.schema().len()).map(|i| format!("x_{i}")).collect();
    header.push("f".into());
    writer.write_record(&header).expect("in-memory write");
    for row in table.rows() {
        let record = row.values.iter().chain(std::iter::once(&row.output)).map(u32::to_string);
        writer.write_record(record).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is ASCII")
}
