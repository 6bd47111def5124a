//! Benchmark runs over decision-table datasets: node counts, levels and
//! induction time for every (dataset, configuration) pair.
//!
//! Dataset directories may contain MONK's files (`monks-1.test`, ...),
//! CSV tables with a sibling schema (`name.csv` + `name.schema.json`) and
//! catalogs (`name.catalog.json`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use infodd_core::{induce, Algorithm, ConsistencyPolicy, CostCriterion, DecisionTable, DiagramKind, InductionConfig};
use serde::Serialize;

use crate::catalog::{parse_catalog, parse_schema};
use crate::config::{algorithm_name, structure_name};
use crate::error::{read_file, Error, Result};
use crate::monks::parse_monks;
use crate::tabular::parse_table_csv;

/// Listing order of the reference table; other datasets follow by name.
pub const REFERENCE_ORDER: [&str; 7] =
    ["shuttle", "monks1te", "monks1tr", "monks2te", "monks2tr", "monks3te", "monks3tr"];

/// Published figures: `(N, levels, seconds)` for greedy DT, greedy DD,
/// iter DT and iter DD, with `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub k: usize,
    pub cells: [(usize, usize, f64); 4],
}

pub fn reference(dataset: &str) -> Option<Reference> {
    let r = |k, cells| Some(Reference { k, cells });
    match dataset {
        "shuttle" => r(1695, [(740, 6, 8.31), (651, 6, 10.25), (740, 6, 8.31), (651, 6, 10.25)]),
        "monks1te" => r(432, [(10, 3, 0.26); 4]),
        "monks1tr" => r(124, [(17, 5, 0.05), (15, 5, 0.19), (13, 3, 0.24), (11, 3, 1.84)]),
        "monks2te" => r(432, [(10, 3, 0.26); 4]),
        "monks2tr" => r(169, [(85, 6, 0.02), (78, 6, 0.12), (79, 6, 0.55), (71, 6, 1.13)]),
        "monks3te" => r(432, [(73, 5, 0.56), (36, 4, 2.88), (5, 3, 1.68), (5, 3, 1.68)]),
        "monks3tr" => r(122, [(39, 5, 0.07), (32, 5, 0.75), (22, 5, 0.62), (19, 5, 2.39)]),
        _ => None,
    }
}

/// Column of the reference table a configuration corresponds to.
pub fn reference_column(config: &InductionConfig) -> usize {
    let a = match config.algorithm {
        Algorithm::Greedy => 0,
        Algorithm::Iter => 2,
    };
    a + match config.structure {
        DiagramKind::Tree => 0,
        DiagramKind::Reduced => 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetFormat {
    Monks,
    Csv { schema: PathBuf },
    Catalog,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub name: String,
    pub path: PathBuf,
    pub format: DatasetFormat,
}

/// A named table, or the reason it could not be loaded.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub table: Result<DecisionTable, String>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, table: DecisionTable) -> Self {
        Self { name: name.into(), table: Ok(table) }
    }
}

/// Maps `monks-2.train` to `monks2tr`, `shuttle.csv` to `shuttle` and so on.
pub fn dataset_name(file_name: &str) -> Option<(String, bool)> {
    if let Some(rest) = file_name.strip_prefix("monks-") {
        let (n, ext) = rest.split_once('.')?;
        let suffix = match ext {
            "test" => "te",
            "train" => "tr",
            _ => return None,
        };
        return Some((format!("monks{n}{suffix}"), true));
    }
    if let Some(stem) = file_name.strip_suffix(".catalog.json") {
        return Some((stem.to_owned(), false));
    }
    file_name.strip_suffix(".csv").map(|stem| (stem.to_owned(), false))
}

pub fn discover(dir: &Path) -> Result<Vec<DatasetSpec>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let mut specs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
        let path = entry.path();
        let Some(file_name) = path.file_name().and_then(|f| f.to_str()) else { continue };
        let Some((name, monks)) = dataset_name(file_name) else { continue };
        let format = if monks {
            DatasetFormat::Monks
        } else if file_name.ends_with(".catalog.json") {
            DatasetFormat::Catalog
        } else {
            DatasetFormat::Csv { schema: dir.join(format!("{name}.schema.json")) }
        };
        specs.push(DatasetSpec { name, path, format });
    }
    specs.sort_by(|a, b| order_key(&a.name).cmp(&order_key(&b.name)));
    Ok(specs)
}

fn order_key(name: &str) -> (usize, &str) {
    (REFERENCE_ORDER.iter().position(|&r| r == name).unwrap_or(REFERENCE_ORDER.len()), name)
}

pub fn load(spec: &DatasetSpec, policy: ConsistencyPolicy) -> Result<DecisionTable> {
    let text = read_file(&spec.path)?;
    match &spec.format {
        DatasetFormat::Monks => parse_monks(&text, policy),
        DatasetFormat::Catalog => Ok(parse_catalog(&text, policy)?.table),
        DatasetFormat::Csv { schema } => {
            let schema = Arc::new(parse_schema(&read_file(schema)?)?);
            parse_table_csv(&text, schema, policy)
        }
    }
}

/// Loads every discovered dataset; failures are kept as failed entries.
pub fn load_dir(dir: &Path, policy: ConsistencyPolicy, pad_arity: Option<usize>) -> Result<Vec<Dataset>> {
    Ok(discover(dir)?
        .iter()
        .map(|spec| {
            let table = load(spec, policy)
                .map(|t| match pad_arity {
                    Some(a) => t.pad_arity(a),
                    None => t,
                })
                .map_err(|e| format!("{}: {e}", spec.path.display()));
            Dataset { name: spec.name.clone(), table }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    pub k: usize,
    pub algorithm: &'static str,
    pub iterations: usize,
    pub structure: &'static str,
    pub nonterminals: usize,
    pub levels: usize,
    pub terminals: usize,
    pub seconds: f64,
    /// Why the row has no figures.
    pub error: Option<String>,
}

impl BenchRow {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Greedy and `Iter` builds, each as tree and as reduced diagram, in the
/// column order of the reference table.
pub fn standard_configs(iterations: usize, criterion: CostCriterion) -> Vec<InductionConfig> {
    let mut configs = Vec::with_capacity(4);
    for algo in [Algorithm::Greedy, Algorithm::Iter] {
        for structure in [DiagramKind::Tree, DiagramKind::Reduced] {
            let c = match algo {
                Algorithm::Greedy => InductionConfig::greedy(structure),
                Algorithm::Iter => InductionConfig::iter(iterations, structure),
            };
            configs.push(c.with_criterion(criterion));
        }
    }
    configs
}

/// One row per (dataset, config), datasets outermost. Only induction is
/// timed.
pub fn run_benchmark(datasets: &[Dataset], configs: &[InductionConfig]) -> Vec<BenchRow> {
    let mut rows = Vec::with_capacity(datasets.len() * configs.len());
    for ds in datasets {
        for config in configs {
            let mut row = BenchRow {
                dataset: ds.name.clone(),
                k: 0,
                algorithm: algorithm_name(config.algorithm),
                iterations: config.iterations,
                structure: structure_name(config.structure),
                nonterminals: 0,
                levels: 0,
                terminals: 0,
                seconds: 0.0,
                error: None,
            };
            match &ds.table {
                Err(e) => row.error = Some(e.clone()),
                Ok(table) => {
                    row.k = table.len();
                    let start = Instant::now();
                    let built = induce(table, config);
                    row.seconds = start.elapsed().as_secs_f64();
                    match built {
                        Ok(d) => {
                            let cost = d.cost();
                            row.nonterminals = cost.nonterminals;
                            row.levels = cost.levels;
                            row.terminals = cost.terminals;
                            log::debug!("{} {}/{}: {:?}", ds.name, row.algorithm, row.structure, cost);
                        }
                        Err(e) => row.error = Some(e.to_string()),
                    }
                }
            }
            rows.push(row);
        }
    }
    rows
}

pub fn report_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dataset",
        "k",
        "algorithm",
        "iterations",
        "structure",
        "nonterminals",
        "levels",
        "terminals",
        "seconds",
        "error",
    ])
    .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.dataset.clone(),
            r.k.to_string(),
            r.algorithm.to_owned(),
            r.iterations.to_string(),
            r.structure.to_owned(),
            r.nonterminals.to_string(),
            r.levels.to_string(),
            r.terminals.to_string(),
            format!("{:.6}", r.seconds),
            r.error.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is UTF-8")
}

fn column_title(config: &InductionConfig) -> String {
    let s = match config.structure {
        DiagramKind::Tree => "DT",
        DiagramKind::Reduced => "DD",
    };
    match config.algorithm {
        Algorithm::Greedy => format!("Greedy {s}"),
        Algorithm::Iter => format!("Iter({}) {s}", config.iterations),
    }
}

/// Text table with one line per dataset and one `N/level/t` cell per
/// configuration, a Total line, and a `paper` line under every dataset
/// with published figures.
pub fn report_text(rows: &[BenchRow], configs: &[InductionConfig]) -> String {
    const NAME: usize = 10;
    const CELL: usize = 18;
    let mut out = String::new();
    let _ = write!(out, "{:<NAME$}{:>6}", "dataset", "k");
    for c in configs {
        let _ = write!(out, "  {:>CELL$}", column_title(c));
    }
    out.push('\n');
    let mut totals = vec![(0usize, 0usize, 0f64); configs.len()];
    let mut paper_totals = vec![(0usize, 0usize, 0f64); configs.len()];
    let mut any_paper = false;
    for chunk in rows.chunks(configs.len().max(1)) {
        let Some(first) = chunk.first() else { continue };
        let _ = write!(out, "{:<NAME$}{:>6}", first.dataset, first.k);
        for (i, r) in chunk.iter().enumerate() {
            let cell = match &r.error {
                None => {
                    totals[i].0 += r.nonterminals;
                    totals[i].1 += r.levels;
                    totals[i].2 += r.seconds;
                    format!("{}/{}/{:.3}", r.nonterminals, r.levels, r.seconds)
                }
                Some(_) => "failed".to_owned(),
            };
            let _ = write!(out, "  {cell:>CELL$}");
        }
        out.push('\n');
        if let Some(reference) = reference(&first.dataset) {
            any_paper = true;
            let _ = write!(out, "{:<NAME$}{:>6}", "  paper", reference.k);
            for (i, c) in configs.iter().enumerate() {
                let (n, l, t) = reference.cells[reference_column(c)];
                paper_totals[i].0 += n;
                paper_totals[i].1 += l;
                paper_totals[i].2 += t;
                let _ = write!(out, "  {:>CELL$}", format!("{n}/{l}/{t:.2}"));
            }
            out.push('\n');
        }
        for r in chunk.iter().filter(|r| r.error.is_some()) {
            let _ = writeln!(out, "  ! {} {}: {}", r.algorithm, r.structure, r.error.as_deref().unwrap_or(""));
        }
    }
    let _ = write!(out, "{:<NAME$}{:>6}", "Total", "");
    for (n, l, t) in &totals {
        let _ = write!(out, "  {:>CELL$}", format!("{n}/{l}/{t:.3}"));
    }
    out.push('\n');
    if any_paper {
        let _ = write!(out, "{:<NAME$}{:>6}", "  paper", "");
        for (n, l, t) in &paper_totals {
            let _ = write!(out, "  {:>CELL$}", format!("{n}/{l}/{t:.2}"));
        }
        out.push('\n');
    }
    out
}
