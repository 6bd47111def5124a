#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use infodd_core::{ConsistencyPolicy, DecisionTable, Row, TableSchema, VariableSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The 19 car rows, typed in independently of the bundled catalog.
pub const CARS_ROWS: [([u32; 8], u32); 19] = [
    ([1, 0, 0, 1, 0, 2, 2, 0], 0),
    ([1, 1, 0, 1, 0, 2, 2, 0], 0),
    ([1, 2, 0, 1, 0, 2, 2, 0], 0),
    ([1, 3, 0, 1, 0, 2, 2, 0], 0),
    ([0, 1, 1, 1, 0, 0, 0, 2], 1),
    ([0, 1, 3, 1, 1, 1, 1, 2], 1),
    ([1, 3, 0, 0, 1, 2, 3, 0], 2),
    ([1, 3, 0, 1, 1, 2, 3, 0], 2),
    ([1, 3, 2, 1, 1, 2, 3, 0], 2),
    ([0, 3, 1, 1, 1, 1, 2, 2], 3),
    ([0, 3, 3, 0, 0, 3, 1, 1], 4),
    ([0, 3, 3, 0, 1, 3, 2, 1], 4),
    ([0, 2, 1, 0, 0, 1, 2, 0], 5),
    ([1, 2, 0, 0, 0, 2, 1, 1], 6),
    ([1, 2, 0, 1, 0, 2, 1, 1], 6),
    ([0, 0, 1, 1, 1, 0, 0, 2], 7),
    ([0, 1, 3, 1, 1, 1, 0, 2], 7),
    ([0, 2, 3, 1, 1, 1, 0, 2], 7),
    ([0, 3, 3, 1, 1, 1, 0, 2], 7),
];

/// Published values: H(f) then H(f|x_1..x_8).
pub const PAPER_H_F: f64 = 2.64;
pub const PAPER_CONDITIONAL: [f64; 8] = [1.43, 1.08, 1.00, 1.80, 1.53, 1.01, 0.84, 0.99];

pub const PRIMERA: u32 = 7;

/// Shannon entropy of a list of counts by direct summation.
pub fn oracle_entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.log2();
        }
    }
    h
}

fn counts_of(rows: &[(Vec<u32>, u32)]) -> Vec<usize> {
    let mut map: BTreeMap<u32, usize> = BTreeMap::new();
    for (_, out) in rows {
        *map.entry(*out).or_default() += 1;
    }
    map.into_values().collect()
}

pub fn oracle_h_f(rows: &[(Vec<u32>, u32)]) -> f64 {
    oracle_entropy(&counts_of(rows))
}

/// H(f|x) as the row-weighted entropy of each cofactor.
pub fn oracle_conditional(rows: &[(Vec<u32>, u32)], var: usize) -> f64 {
    let mut groups: BTreeMap<u32, Vec<(Vec<u32>, u32)>> = BTreeMap::new();
    for r in rows {
        groups.entry(r.0[var]).or_default().push(r.clone());
    }
    groups.values().map(|g| g.len() as f64 / rows.len() as f64 * oracle_h_f(g)).sum()
}

pub fn cars_rows() -> Vec<(Vec<u32>, u32)> {
    CARS_ROWS.iter().map(|(v, o)| (v.to_vec(), *o)).collect()
}

pub fn rows_of(table: &DecisionTable) -> Vec<(Vec<u32>, u32)> {
    table.rows().iter().map(|r| (r.values.clone(), r.output)).collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn schema(arities: &[usize], outputs: usize) -> Arc<TableSchema> {
    let vars = arities.iter().enumerate().map(|(i, &a)| VariableSpec::numbered(format!("v{i}"), a).unwrap()).collect();
    Arc::new(TableSchema::new(vars, (0..outputs).map(|o| format!("o{o}")).collect()).unwrap())
}

/// A consistent table over up to `max_vars` variables of arity 2..=`max_arity`.
pub fn random_table(rng: &mut StdRng, max_vars: usize, max_arity: usize) -> DecisionTable {
    let n = rng.random_range(1..=max_vars);
    let arities: Vec<usize> = (0..n).map(|_| rng.random_range(2..=max_arity)).collect();
    let outputs = rng.random_range(1..=4);
    let k = rng.random_range(1..=30);
    let rows = (0..k)
        .map(|_| {
            let values = arities.iter().map(|&a| rng.random_range(0..a as u32)).collect();
            Row::new(values, rng.random_range(0..outputs as u32))
        })
        .collect();
    DecisionTable::new(schema(&arities, outputs), rows, ConsistencyPolicy::Majority).unwrap()
}

/// Every assignment of the schema, last variable fastest.
pub fn all_assignments(schema: &TableSchema) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for v in schema.variables() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..v.arity() as u32).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// A random free decision tree over `schema`: small leaf alphabets and
/// frequent x-terminals so that reduction has work to do.
pub fn random_tree(rng: &mut StdRng, schema: Arc<TableSchema>) -> infodd_core::Diagram {
    use infodd_core::{DiagramBuilder, DiagramKind, Node, NodeRef};

    fn grow(rng: &mut StdRng, b: &mut DiagramBuilder, free: &mut Vec<usize>, outputs: u32) -> NodeRef {
        if free.is_empty() || rng.random_bool(0.25) {
            return if rng.random_bool(0.15) {
                b.x_terminal()
            } else {
                b.terminal(rng.random_range(0..outputs)).unwrap()
            };
        }
        let var = free.swap_remove(rng.random_range(0..free.len()));
        let arity = b.schema().arity(var).unwrap();
        let children = (0..arity).map(|_| grow(rng, b, free, outputs)).collect();
        free.push(var);
        b.intern(Node::Decision { var, children }).unwrap()
    }

    let outputs = schema.output_arity() as u32;
    let mut b = DiagramBuilder::new(schema.clone(), DiagramKind::Tree);
    let mut free: Vec<usize> = (0..schema.len()).collect();
    let root = grow(rng, &mut b, &mut free, outputs);
    b.finish(root).unwrap()
}
