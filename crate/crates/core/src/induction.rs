//! Entropy-driven induction of decision trees and diagrams.
//!
//! Greedy induction tests, at every node, the candidate variable with the
//! smallest conditional entropy of the output and recurses into each
//! cofactor. Candidates are the variables not yet tested on the current path
//! that still take at least two distinct values in the current sub-table.
//! Constant sub-tables become terminals and empty ones the shared x-terminal.
//!
//! Iterated induction runs `Iter` builds. Build `t` places the rank-`t`
//! variable of the root ranking at the root (clamped to the number of
//! candidates) and is greedy below it. The cheapest build under the
//! configured [`CostCriterion`] wins, earliest build on ties, so `Iter = 1`
//! is exactly the greedy build.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::diagram::{CostMetrics, Diagram, DiagramBuilder, DiagramError, DiagramKind, Node, NodeRef};
use crate::info::{rank_variables, InfoError};
use crate::table::{ConsistencyPolicy, Constancy, DecisionTable, TableView};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InductionError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("inconsistent data: rows agree on every remaining variable but map to different outputs")]
    Inconsistent,
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    #[default]
    Greedy,
    Iter,
}

/// Lexicographic order used to pick the best of several builds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum CostCriterion {
    #[default]
    LevelsThenNodes,
    NodesThenLevels,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    #[default]
    LowestIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InductionConfig {
    pub algorithm: Algorithm,
    pub iterations: usize,
    pub structure: DiagramKind,
    pub criterion: CostCriterion,
    pub tie_break: TieBreak,
    /// Applied when tables are ingested; carried here so one config file
    /// describes a whole run.
    pub inconsistency: ConsistencyPolicy,
}

impl Default for InductionConfig {
    fn default() -> Self {
        Self::greedy(DiagramKind::Reduced)
    }
}

impl InductionConfig {
    pub fn greedy(structure: DiagramKind) -> Self {
        Self {
            algorithm: Algorithm::Greedy,
            iterations: 1,
            structure,
            criterion: CostCriterion::default(),
            tie_break: TieBreak::default(),
            inconsistency: ConsistencyPolicy::default(),
        }
    }

    pub fn iter(iterations: usize, structure: DiagramKind) -> Self {
        Self { algorithm: Algorithm::Iter, iterations, ..Self::greedy(structure) }
    }

    pub fn with_criterion(mut self, criterion: CostCriterion) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn validate(&self) -> Result<(), InductionError> {
        if self.iterations == 0 {
            return Err(InductionError::InvalidConfig("iterations must be at least 1"));
        }
        if self.algorithm == Algorithm::Greedy && self.iterations != 1 {
            return Err(InductionError::InvalidConfig("greedy induction runs exactly one iteration"));
        }
        Ok(())
    }
}

/// Orders two costs by the criterion's primary component, then the other.
pub fn compare_cost(a: &CostMetrics, b: &CostMetrics, criterion: CostCriterion) -> Ordering {
    match criterion {
        CostCriterion::LevelsThenNodes => (a.levels, a.nonterminals).cmp(&(b.levels, b.nonterminals)),
        CostCriterion::NodesThenLevels => (a.nonterminals, a.levels).cmp(&(b.nonterminals, b.levels)),
    }
}

/// Runs the algorithm named in `config`.
pub fn induce(table: &DecisionTable, config: &InductionConfig) -> Result<Diagram, InductionError> {
    match config.algorithm {
        Algorithm::Greedy => info_greedy(table, config),
        Algorithm::Iter => info_iter(table, config),
    }
}

pub fn info_greedy(table: &DecisionTable, config: &InductionConfig) -> Result<Diagram, InductionError> {
    config.validate()?;
    if config.algorithm != Algorithm::Greedy {
        return Err(InductionError::InvalidConfig("info_greedy needs algorithm = greedy"));
    }
    build(table, config.structure, 1)
}

pub fn info_iter(table: &DecisionTable, config: &InductionConfig) -> Result<Diagram, InductionError> {
    config.validate()?;
    if config.algorithm != Algorithm::Iter {
        return Err(InductionError::InvalidConfig("info_iter needs algorithm = iter"));
    }
    let root_candidates = candidates(&table.view(), &vec![false; table.schema().len()]).len();
    let mut best = build(table, config.structure, 1)?;
    let mut best_cost = best.cost();
    // ranks past the candidate count clamp to the last one, which was
    // already built
    for rank in 2..=config.iterations.min(root_candidates) {
        let candidate = build(table, config.structure, rank)?;
        let cost = candidate.cost();
        if compare_cost(&cost, &best_cost, config.criterion) == Ordering::Less {
            best = candidate;
            best_cost = cost;
        }
    }
    Ok(best)
}

/// One build with the rank-`root_rank` variable (1-based) at the root.
fn build(table: &DecisionTable, structure: DiagramKind, root_rank: usize) -> Result<Diagram, InductionError> {
    let mut builder = DiagramBuilder::new(table.shared_schema().clone(), structure);
    let mut used = vec![false; table.schema().len()];
    let root = grow(&mut builder, table.view(), &mut used, root_rank)?;
    Ok(builder.finish(root)?)
}

fn grow(
    builder: &mut DiagramBuilder,
    view: TableView<'_>,
    used: &mut [bool],
    rank: usize,
) -> Result<NodeRef, InductionError> {
    match view.constant_value() {
        Constancy::Empty => return Ok(builder.x_terminal()),
        Constancy::Constant(c) => return Ok(builder.terminal(c)?),
        Constancy::Mixed => {}
    }
    let candidates = candidates(&view, used);
    if candidates.is_empty() {
        return Err(InductionError::Inconsistent);
    }
    let report = rank_variables(&view, &candidates)?;
    let var = report.ranking[rank.min(report.ranking.len()) - 1];
    used[var] = true;
    let mut children = Vec::with_capacity(view.schema().arity(var).unwrap_or(0));
    for part in view.partition(var).expect("candidates are schema variables") {
        children.push(grow(builder, part, used, 1)?);
    }
    used[var] = false;
    Ok(builder.intern(Node::Decision { var, children })?)
}

fn candidates(view: &TableView<'_>, used: &[bool]) -> Vec<usize> {
    (0..used.len()).filter(|&v| !used[v] && view.distinct_values(v) >= 2).collect()
}
