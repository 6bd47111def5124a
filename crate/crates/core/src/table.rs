//! Decision tables: schema, rows, validation, catalog expansion and cofactors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("variable `{name}` needs at least two values, got {arity}")]
    ArityTooSmall { name: String, arity: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("schema needs at least one output label")]
    NoOutputs,
    #[error("a decision table needs at least one row")]
    EmptyTable,
    #[error("row {row}: expected {expected} values, got {got}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("row {row}: value {value} outside the domain of `{variable}` (arity {arity})")]
    ValueOutOfDomain { row: usize, variable: String, value: u32, arity: usize },
    #[error("row {row}: output {output} outside [0, {arity})")]
    OutputOutOfDomain { row: usize, output: u32, arity: usize },
    #[error("rows {first} and {second} share inputs but map to outputs {first_output} and {second_output}")]
    Contradiction { first: usize, second: usize, first_output: u32, second_output: u32 },
    #[error("variable index {index} out of range (n = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("value {value} outside the domain of variable {index} (arity {arity})")]
    RestrictValue { index: usize, value: u32, arity: usize },
    #[error("catalog entry {entry}: {reason}")]
    Catalog { entry: usize, reason: String },
}

/// One multi-valued input variable. Its arity is the number of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    name: String,
    value_labels: Vec<String>,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, value_labels: Vec<String>) -> Result<Self, TableError> {
        let name = name.into();
        if value_labels.len() < 2 {
            return Err(TableError::ArityTooSmall { name, arity: value_labels.len() });
        }
        Ok(Self { name, value_labels })
    }

    /// A variable whose labels are just `"0"`, `"1"`, ....
    pub fn numbered(name: impl Into<String>, arity: usize) -> Result<Self, TableError> {
        Self::new(name, (0..arity).map(|v| format!("{v}")).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.value_labels.len()
    }

    pub fn value_labels(&self) -> &[String] {
        &self.value_labels
    }

    pub fn label(&self, value: u32) -> Option<&str> {
        self.value_labels.get(value as usize).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    variables: Vec<VariableSpec>,
    output_labels: Vec<String>,
}

impl TableSchema {
    pub fn new(variables: Vec<VariableSpec>, output_labels: Vec<String>) -> Result<Self, TableError> {
        if output_labels.is_empty() {
            return Err(TableError::NoOutputs);
        }
        let mut seen = BTreeMap::new();
        for v in &variables {
            if seen.insert(v.name.as_str(), ()).is_some() {
                return Err(TableError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Self { variables, output_labels })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn variable(&self, index: usize) -> Option<&VariableSpec> {
        self.variables.get(index)
    }

    /// Number of input variables (`n`).
    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn arity(&self, index: usize) -> Option<usize> {
        self.variables.get(index).map(VariableSpec::arity)
    }

    /// Number of output values (`m`).
    pub fn output_arity(&self) -> usize {
        self.output_labels.len()
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    pub fn output_label(&self, output: u32) -> Option<&str> {
        self.output_labels.get(output as usize).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Widens every variable to at least `arity` values. Added values get
    /// the label `"-"` and never occur in rows.
    pub fn padded(&self, arity: usize) -> Self {
        let variables = self
            .variables
            .iter()
            .map(|v| {
                let mut labels = v.value_labels.clone();
                while labels.len() < arity {
                    labels.push(String::from("-"));
                }
                VariableSpec { name: v.name.clone(), value_labels: labels }
            })
            .collect();
        Self { variables, output_labels: self.output_labels.clone() }
    }

    fn check_row(&self, index: usize, row: &Row) -> Result<(), TableError> {
        if row.values.len() != self.len() {
            return Err(TableError::RowLength { row: index, expected: self.len(), got: row.values.len() });
        }
        for (var, &value) in self.variables.iter().zip(&row.values) {
            if value as usize >= var.arity() {
                return Err(TableError::ValueOutOfDomain {
                    row: index,
                    variable: var.name.clone(),
                    value,
                    arity: var.arity(),
                });
            }
        }
        if row.output as usize >= self.output_arity() {
            return Err(TableError::OutputOutOfDomain { row: index, output: row.output, arity: self.output_arity() });
        }
        Ok(())
    }
}

/// One pattern of the decision table: an assignment and its output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub values: Vec<u32>,
    pub output: u32,
}

impl Row {
    pub fn new(values: Vec<u32>, output: u32) -> Self {
        Self { values, output }
    }
}

/// What to do with rows that share inputs but disagree on the output.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ConsistencyPolicy {
    /// Reject the table.
    #[default]
    Strict,
    /// Relabel every conflicting row with the most frequent output of its
    /// group (lowest output wins ties).
    Majority,
}

/// A product description whose cells list every admissible value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub product_label: String,
    pub output: u32,
    pub cells: Vec<Vec<u32>>,
}

/// Result of [`DecisionTable::constant_value`] / [`TableView::constant_value`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constancy {
    Constant(u32),
    Mixed,
    Empty,
}

/// An immutable table of `k` rows over a shared schema.
///
/// Ingested tables always hold at least one row; only cofactors produced by
/// [`DecisionTable::restrict`] may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    schema: Arc<TableSchema>,
    rows: Vec<Row>,
}

impl DecisionTable {
    pub fn new(
        schema: impl Into<Arc<TableSchema>>,
        rows: Vec<Row>,
        policy: ConsistencyPolicy,
    ) -> Result<Self, TableError> {
        let schema = schema.into();
        if rows.is_empty() {
            return Err(TableError::EmptyTable);
        }
        for (i, row) in rows.iter().enumerate() {
            schema.check_row(i, row)?;
        }
        let rows = apply_policy(rows, policy)?;
        Ok(Self { schema, rows })
    }

    /// Expands every entry into the Cartesian product of its cells, one row
    /// per combination, in entry order and then odometer order (last
    /// variable fastest).
    pub fn from_catalog(
        schema: impl Into<Arc<TableSchema>>,
        entries: &[CatalogEntry],
        policy: ConsistencyPolicy,
    ) -> Result<Self, TableError> {
        let schema = schema.into();
        let mut rows = Vec::new();
        for (e, entry) in entries.iter().enumerate() {
            let bad = |reason: String| TableError::Catalog { entry: e, reason };
            if entry.cells.len() != schema.len() {
                return Err(bad(format!("expected {} cells, got {}", schema.len(), entry.cells.len())));
            }
            if entry.output as usize >= schema.output_arity() {
                return Err(bad(format!("unknown product {}", entry.output)));
            }
            for (i, cell) in entry.cells.iter().enumerate() {
                let var = &schema.variables[i];
                if cell.is_empty() {
                    return Err(bad(format!("cell for `{}` is empty", var.name)));
                }
                for (j, &v) in cell.iter().enumerate() {
                    if v as usize >= var.arity() {
                        return Err(bad(format!(
                            "value {v} outside the domain of `{}` (arity {})",
                            var.name,
                            var.arity()
                        )));
                    }
                    if cell[..j].contains(&v) {
                        return Err(bad(format!("value {v} listed twice for `{}`", var.name)));
                    }
                }
            }
            expand_entry(entry, &mut rows);
        }
        Self::new(schema, rows, policy)
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn shared_schema(&self) -> &Arc<TableSchema> {
        &self.schema
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Number of rows (`k`).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// A view over every row, the starting point for induction.
    pub fn view(&self) -> TableView<'_> {
        TableView { table: self, rows: (0..self.rows.len() as u32).collect() }
    }

    /// The cofactor `f|x_var = value`: exactly the rows with that value, in
    /// their original order. The result may be empty.
    pub fn restrict(&self, var: usize, value: u32) -> Result<DecisionTable, TableError> {
        check_restrict(&self.schema, var, value)?;
        let rows = self.rows.iter().filter(|r| r.values[var] == value).cloned().collect();
        Ok(Self { schema: self.schema.clone(), rows })
    }

    pub fn constant_value(&self) -> Constancy {
        constancy(self.rows.iter().map(|r| r.output))
    }

    /// Re-homes the rows on a schema whose variables all have at least
    /// `arity` values.
    pub fn pad_arity(&self, arity: usize) -> DecisionTable {
        Self { schema: Arc::new(self.schema.padded(arity)), rows: self.rows.clone() }
    }
}

/// A borrowed subset of a table's rows. Restricting a view never copies rows.
#[derive(Debug, Clone)]
pub struct TableView<'a> {
    table: &'a DecisionTable,
    rows: Vec<u32>,
}

impl<'a> TableView<'a> {
    pub fn table(&self) -> &'a DecisionTable {
        self.table
    }

    pub fn schema(&self) -> &'a TableSchema {
        &self.table.schema
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &'a Row> + '_ {
        let all = &self.table.rows;
        self.rows.iter().map(move |&i| &all[i as usize])
    }

    pub fn restrict(&self, var: usize, value: u32) -> Result<TableView<'a>, TableError> {
        check_restrict(&self.table.schema, var, value)?;
        let all = &self.table.rows;
        let rows = self.rows.iter().copied().filter(|&i| all[i as usize].values[var] == value).collect();
        Ok(TableView { table: self.table, rows })
    }

    /// All cofactors of `var` at once, indexed by value.
    pub fn partition(&self, var: usize) -> Result<Vec<TableView<'a>>, TableError> {
        let arity = self
            .table
            .schema
            .arity(var)
            .ok_or(TableError::VariableOutOfRange { index: var, n: self.table.schema.len() })?;
        let mut parts = vec![Vec::new(); arity];
        for &i in &self.rows {
            parts[self.table.rows[i as usize].values[var] as usize].push(i);
        }
        Ok(parts.into_iter().map(|rows| TableView { table: self.table, rows }).collect())
    }

    /// Number of distinct values `var` takes inside the view.
    pub fn distinct_values(&self, var: usize) -> usize {
        let Some(arity) = self.table.schema.arity(var) else { return 0 };
        let mut seen = vec![false; arity];
        for row in self.rows() {
            seen[row.values[var] as usize] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }

    pub fn constant_value(&self) -> Constancy {
        constancy(self.rows().map(|r| r.output))
    }

    /// Copies the view out into an owned (possibly empty) table.
    pub fn to_table(&self) -> DecisionTable {
        DecisionTable { schema: self.table.schema.clone(), rows: self.rows().cloned().collect() }
    }
}

fn check_restrict(schema: &TableSchema, var: usize, value: u32) -> Result<(), TableError> {
    let arity = schema.arity(var).ok_or(TableError::VariableOutOfRange { index: var, n: schema.len() })?;
    if value as usize >= arity {
        return Err(TableError::RestrictValue { index: var, value, arity });
    }
    Ok(())
}

fn constancy(mut outputs: impl Iterator<Item = u32>) -> Constancy {
    let Some(first) = outputs.next() else { return Constancy::Empty };
    if outputs.all(|o| o == first) {
        Constancy::Constant(first)
    } else {
        Constancy::Mixed
    }
}

fn expand_entry(entry: &CatalogEntry, rows: &mut Vec<Row>) {
    let mut cursor = vec![0usize; entry.cells.len()];
    loop {
        let values = entry.cells.iter().zip(&cursor).map(|(cell, &c)| cell[c]).collect();
        rows.push(Row::new(values, entry.output));
        // odometer, last position fastest
        let mut pos = cursor.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < entry.cells[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
    }
}

fn apply_policy(mut rows: Vec<Row>, policy: ConsistencyPolicy) -> Result<Vec<Row>, TableError> {
    // input pattern -> (first row index, output counts)
    let mut groups: BTreeMap<&[u32], (usize, BTreeMap<u32, usize>)> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let (first, counts) = groups.entry(row.values.as_slice()).or_insert_with(|| (i, BTreeMap::new()));
        if policy == ConsistencyPolicy::Strict && !counts.is_empty() && !counts.contains_key(&row.output) {
            return Err(TableError::Contradiction {
                first: *first,
                second: i,
                first_output: rows[*first].output,
                second_output: row.output,
            });
        }
        *counts.entry(row.output).or_default() += 1;
    }
    if policy == ConsistencyPolicy::Strict {
        return Ok(rows);
    }
    let winners: BTreeMap<Vec<u32>, u32> = groups
        .into_iter()
        .filter(|(_, (_, counts))| counts.len() > 1)
        .map(|(values, (_, counts))| {
            // max count, lowest output on ties
            let best = counts.iter().fold((0u32, 0usize), |best, (&o, &c)| if c > best.1 { (o, c) } else { best });
            (values.to_vec(), best.0)
        })
        .collect();
    for row in &mut rows {
        if let Some(&o) = winners.get(&row.values) {
            row.output = o;
        }
    }
    Ok(rows)
}
