//! JSON export of entropy reports.

use std::collections::BTreeMap;

use infodd_core::{rank_variables, DecisionTable, EntropyReport};
use serde::Serialize;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyDoc {
    /// Output entropy in bits.
    pub h_f: f64,
    /// Conditional entropy per variable name.
    pub conditional: BTreeMap<String, f64>,
    /// Variable names, most informative first.
    pub ranking: Vec<String>,
    pub rows: usize,
}

/// Ranks every variable of the table.
pub fn analyze(table: &DecisionTable) -> Result<EntropyReport> {
    let all: Vec<usize> = (0..table.schema().len()).collect();
    Ok(rank_variables(&table.view(), &all)?)
}

pub fn entropy_doc(table: &DecisionTable, report: &EntropyReport) -> EntropyDoc {
    let name = |i: usize| table.schema().variable(i).map_or_else(|| format!("x_{}", i + 1), |v| v.name().to_owned());
    EntropyDoc {
        h_f: report.h_f,
        conditional: report.conditional.iter().map(|(&i, &h)| (name(i), h)).collect(),
        ranking: report.ranking.iter().map(|&i| name(i)).collect(),
        rows: table.len(),
    }
}

pub fn entropy_json(table: &DecisionTable, report: &EntropyReport) -> String {
    let mut text = serde_json::to_string_pretty(&entropy_doc(table, report)).expect("reports serialize");
    text.push('\n');
    text
}
