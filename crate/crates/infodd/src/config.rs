//! Induction settings as JSON, using the field names of
//! [`InductionConfig`]. Missing fields take their defaults.
//!
//! ```json
//! { "algorithm": "iter", "iterations": 10, "structure": "dd",
//!   "criterion": "nodes,levels", "tie_break": "lowest_index",
//!   "inconsistency": "majority" }
//! ```

use std::str::FromStr;

use infodd_core::{Algorithm, ConsistencyPolicy, CostCriterion, DiagramKind, InductionConfig, TieBreak};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconsistency: Option<String>,
}

impl ConfigDoc {
    /// Applies the fields that are present on top of `base`.
    pub fn apply(&self, base: InductionConfig) -> Result<InductionConfig> {
        let mut config = base;
        if let Some(a) = &self.algorithm {
            config.algorithm = parse_algorithm(a)?;
            if config.algorithm == Algorithm::Greedy && self.iterations.is_none() {
                config.iterations = 1;
            }
        }
        if let Some(n) = self.iterations {
            config.iterations = n;
        }
        if let Some(s) = &self.structure {
            config.structure = parse_structure(s)?;
        }
        if let Some(c) = &self.criterion {
            config.criterion = parse_criterion(c)?;
        }
        if let Some(t) = &self.tie_break {
            config.tie_break = parse_tie_break(t)?;
        }
        if let Some(p) = &self.inconsistency {
            config.inconsistency = parse_policy(p)?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_config(config: &InductionConfig) -> Self {
        Self {
            algorithm: Some(algorithm_name(config.algorithm).into()),
            iterations: Some(config.iterations),
            structure: Some(structure_name(config.structure).into()),
            criterion: Some(criterion_name(config.criterion).into()),
            tie_break: Some("lowest_index".into()),
            inconsistency: Some(policy_name(config.inconsistency).into()),
        }
    }
}

pub fn parse_config(text: &str) -> Result<InductionConfig> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    doc.apply(InductionConfig::default())
}

pub fn config_to_json(config: &InductionConfig) -> String {
    serde_json::to_string_pretty(&ConfigDoc::from_config(config)).expect("config serializes")
}

fn invalid(field: &str, value: &str, expected: &str) -> Error {
    Error::Invalid(format!("unknown {field} `{value}` (expected {expected})"))
}

pub fn parse_algorithm(s: &str) -> Result<Algorithm> {
    match s.to_ascii_lowercase().as_str() {
        "greedy" => Ok(Algorithm::Greedy),
        "iter" => Ok(Algorithm::Iter),
        _ => Err(invalid("algorithm", s, "greedy or iter")),
    }
}

pub fn parse_structure(s: &str) -> Result<DiagramKind> {
    match s.to_ascii_lowercase().as_str() {
        "tree" | "dt" => Ok(DiagramKind::Tree),
        "dd" | "reduced" => Ok(DiagramKind::Reduced),
        _ => Err(invalid("structure", s, "tree or dd")),
    }
}

pub fn parse_criterion(s: &str) -> Result<CostCriterion> {
    match s.to_ascii_lowercase().replace(' ', "").as_str() {
        "levels,nodes" | "levels_then_nodes" => Ok(CostCriterion::LevelsThenNodes),
        "nodes,levels" | "nodes_then_levels" => Ok(CostCriterion::NodesThenLevels),
        _ => Err(invalid("criterion", s, "levels,nodes or nodes,levels")),
    }
}

pub fn parse_tie_break(s: &str) -> Result<TieBreak> {
    match s.to_ascii_lowercase().as_str() {
        "lowest_index" => Ok(TieBreak::LowestIndex),
        _ => Err(invalid("tie_break", s, "lowest_index")),
    }
}

pub fn parse_policy(s: &str) -> Result<ConsistencyPolicy> {
    match s.to_ascii_lowercase().as_str() {
        "strict" => Ok(ConsistencyPolicy::Strict),
        "majority" => Ok(ConsistencyPolicy::Majority),
        _ => Err(invalid("inconsistency", s, "strict or majority")),
    }
}

pub fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Greedy => "greedy",
        Algorithm::Iter => "iter",
    }
}

pub fn structure_name(k: DiagramKind) -> &'static str {
    match k {
        DiagramKind::Tree => "tree",
        DiagramKind::Reduced => "dd",
    }
}

pub fn criterion_name(c: CostCriterion) -> &'static str {
    match c {
        CostCriterion::LevelsThenNodes => "levels,nodes",
        CostCriterion::NodesThenLevels => "nodes,levels",
    }
}

pub fn policy_name(p: ConsistencyPolicy) -> &'static str {
    match p {
        ConsistencyPolicy::Strict => "strict",
        ConsistencyPolicy::Majority => "majority",
    }
}

/// Wrapper for clap `value_parser`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion(pub CostCriterion);

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_criterion(s).map(Criterion)
    }
}
