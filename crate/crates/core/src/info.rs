//! Shannon entropy of the output and conditional entropy given one variable,
//! in bits.
//!
//! Conditional entropies are evaluated from counts as
//! `(Σ_c k_c·log k_c − Σ_{c,b} k_cb·log k_cb) / k`, with each sum taken over
//! its terms in sorted order. Variables whose cofactors have the same count
//! profile therefore get bit-identical scores, so the lowest-index tie-break
//! is never defeated by summation order.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::table::TableView;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InfoError {
    #[error("entropy of an empty table is undefined")]
    EmptyTable,
    #[error("variable index {index} out of range (n = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("no candidate variables to rank")]
    NoCandidates,
    #[error("not a probability distribution (sum {sum})")]
    InvalidDistribution { sum: f64 },
}

/// A finite probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Accepts non-negative, finite probabilities summing to 1 within 1e-9.
    pub fn new(probabilities: Vec<f64>) -> Result<Self, InfoError> {
        let sum: f64 = probabilities.iter().sum();
        if probabilities.is_empty()
            || probabilities.iter().any(|p| !p.is_finite() || *p < 0.0)
            || libm::fabs(sum - 1.0) > 1e-9
        {
            return Err(InfoError::InvalidDistribution { sum });
        }
        Ok(Self(probabilities))
    }

    pub fn from_counts(counts: &[usize]) -> Result<Self, InfoError> {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(InfoError::EmptyTable);
        }
        Ok(Self(counts.iter().map(|&c| c as f64 / total as f64).collect()))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }
}

/// `−Σ p·log₂ p`, with `0·log 0 = 0`.
pub fn entropy(dist: &Distribution) -> f64 {
    let h: f64 = dist.0.iter().filter(|&&p| p > 0.0).map(|&p| -p * libm::log2(p)).sum();
    // -0.0 for the degenerate case
    h.max(0.0)
}

/// Empirical distribution of the output over the rows of `view`,
/// duplicates included.
pub fn output_distribution(view: &TableView<'_>) -> Result<Distribution, InfoError> {
    Distribution::from_counts(&output_counts(view))
}

/// Expected entropy of the output after observing `var`; empty cofactors
/// contribute nothing.
pub fn conditional_entropy(view: &TableView<'_>, var: usize) -> Result<f64, InfoError> {
    let schema = view.schema();
    let arity = schema.arity(var).ok_or(InfoError::VariableOutOfRange { index: var, n: schema.len() })?;
    if view.is_empty() {
        return Err(InfoError::EmptyTable);
    }
    let m = schema.output_arity();
    let mut joint = vec![0usize; arity * m];
    for row in view.rows() {
        joint[row.values[var] as usize * m + row.output as usize] += 1;
    }
    let marginals = joint.chunks(m).map(|c| c.iter().sum());
    let positive = sorted_sum(marginals.map(xlog2x).collect());
    let negative = sorted_sum(joint.iter().map(|&c| xlog2x(c)).collect());
    Ok(((positive - negative) / view.len() as f64).max(0.0))
}

/// `H(f)` plus `H(f|x)` of every candidate and the candidates ordered by
/// increasing conditional entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub h_f: f64,
    pub conditional: BTreeMap<usize, f64>,
    pub ranking: Vec<usize>,
}

impl EntropyReport {
    /// The variable an entropy-minimizing choice picks, if any.
    pub fn best(&self) -> Option<usize> {
        self.ranking.first().copied()
    }
}

/// Ranks `candidates` by increasing `H(f|x)`; equal scores keep the lower
/// variable index first.
pub fn rank_variables(view: &TableView<'_>, candidates: &[usize]) -> Result<EntropyReport, InfoError> {
    if candidates.is_empty() {
        return Err(InfoError::NoCandidates);
    }
    let h_f = entropy(&output_distribution(view)?);
    let mut conditional = BTreeMap::new();
    for &var in candidates {
        conditional.insert(var, conditional_entropy(view, var)?);
    }
    let mut ranking: Vec<usize> = conditional.keys().copied().collect();
    ranking.sort_by(|a, b| match conditional[a].total_cmp(&conditional[b]) {
        Ordering::Equal => a.cmp(b),
        other => other,
    });
    Ok(EntropyReport { h_f, conditional, ranking })
}

pub(crate) fn output_counts(view: &TableView<'_>) -> Vec<usize> {
    let mut counts = vec![0usize; view.schema().output_arity()];
    for row in view.rows() {
        counts[row.output as usize] += 1;
    }
    counts
}

fn xlog2x(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        n as f64 * libm::log2(n as f64)
    }
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}
