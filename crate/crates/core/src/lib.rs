//! Entropy-guided construction of free decision trees and reduced
//! multi-valued decision diagrams from decision tables.
//!
//! A [`table::DecisionTable`] maps `n` multi-valued input variables to an
//! `m`-valued output (a product identifier, a class label). The
//! [`induction`] module grows a [`diagram::Diagram`] by repeatedly testing the
//! variable with the smallest conditional entropy of the output, either
//! greedily or as a best-of-`Iter` search over alternative root choices. The
//! resulting diagram can be walked one question at a time with a
//! [`navigator::Session`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the HTTP
//! service, and the command-line tool live in the `infodd` crate.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagram;
pub mod induction;
pub mod info;
pub mod navigator;
pub mod table;

pub use diagram::{CostMetrics, Diagram, DiagramBuilder, DiagramError, DiagramKind, Leaf, Node, NodeRef};
pub use induction::{
    compare_cost, induce, info_greedy, info_iter, Algorithm, CostCriterion, InductionConfig, InductionError, TieBreak,
};
pub use info::{
    conditional_entropy, entropy, output_distribution, rank_variables, Distribution, EntropyReport, InfoError,
};
pub use navigator::{Answer, NavigatorError, QuestionView, ResultView, Session, View};
pub use table::{
    CatalogEntry, ConsistencyPolicy, Constancy, DecisionTable, Row, TableError, TableSchema, TableView, VariableSpec,
};
