//! Question-at-a-time navigation through a finished diagram.
//!
//! A [`Session`] starts at the root and moves one edge per answer. The trail
//! of answers is the source of truth: replaying it from the root always
//! reaches the current position, and [`Session::undo`] recomputes the
//! position that way.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::diagram::{Diagram, Node, NodeRef};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NavigatorError {
    #[error("the dialogue is already resolved")]
    Resolved,
    #[error("answer {value} is not an option (expected 0..{arity})")]
    ValueOutOfRange { value: u32, arity: usize },
    #[error("nothing to undo")]
    EmptyTrail,
    #[error("trail replay does not reach the current position")]
    Desynchronized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Answer {
    pub var: usize,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionView {
    pub var: usize,
    pub variable: String,
    pub options: Vec<String>,
    /// Questions answered so far.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResultView {
    Product {
        id: u32,
        label: String,
    },
    /// The answers reached an x-terminal: nothing in the catalog matches.
    NoMatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum View {
    Question(QuestionView),
    Resolved(ResultView),
}

/// One dialogue over a shared, immutable diagram (`&Diagram`,
/// `Arc<Diagram>`, ...).
#[derive(Debug, Clone)]
pub struct Session<D> {
    diagram: D,
    position: NodeRef,
    trail: Vec<Answer>,
}

impl<D: Deref<Target = Diagram>> Session<D> {
    pub fn new(diagram: D) -> Self {
        let position = diagram.root();
        Self { diagram, position, trail: Vec::new() }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn position(&self) -> NodeRef {
        self.position
    }

    pub fn trail(&self) -> &[Answer] {
        &self.trail
    }

    pub fn is_resolved(&self) -> bool {
        self.diagram.node(self.position).is_terminal()
    }

    pub fn view(&self) -> View {
        let schema = self.diagram.schema();
        match self.diagram.node(self.position) {
            Node::Decision { var, .. } => {
                let spec = schema.variable(*var).expect("diagram variables belong to its schema");
                View::Question(QuestionView {
                    var: *var,
                    variable: spec.name().into(),
                    options: spec.value_labels().to_vec(),
                    depth: self.trail.len(),
                })
            }
            Node::Terminal(id) => View::Resolved(ResultView::Product {
                id: *id,
                label: schema.output_label(*id).unwrap_or_default().into(),
            }),
            Node::XTerminal => View::Resolved(ResultView::NoMatch),
        }
    }

    /// Takes the edge for `value`. On error the session is unchanged.
    pub fn answer(&mut self, value: u32) -> Result<View, NavigatorError> {
        let Node::Decision { var, children } = self.diagram.node(self.position) else {
            return Err(NavigatorError::Resolved);
        };
        let next =
            *children.get(value as usize).ok_or(NavigatorError::ValueOutOfRange { value, arity: children.len() })?;
        self.trail.push(Answer { var: *var, value });
        self.position = next;
        Ok(self.view())
    }

    /// Drops the last answer and returns to the question it answered.
    pub fn undo(&mut self) -> Result<QuestionView, NavigatorError> {
        self.trail.pop().ok_or(NavigatorError::EmptyTrail)?;
        self.position = self.replay()?;
        match self.view() {
            View::Question(q) => Ok(q),
            View::Resolved(_) => Err(NavigatorError::Desynchronized),
        }
    }

    pub fn restart(&mut self) -> View {
        self.trail.clear();
        self.position = self.diagram.root();
        self.view()
    }

    /// Verifies that replaying the trail reaches the current position.
    pub fn audit(&self) -> Result<(), NavigatorError> {
        if self.replay()? == self.position {
            Ok(())
        } else {
            Err(NavigatorError::Desynchronized)
        }
    }

    fn replay(&self) -> Result<NodeRef, NavigatorError> {
        let mut at = self.diagram.root();
        for answer in &self.trail {
            match self.diagram.node(at) {
                Node::Decision { var, children } if *var == answer.var => {
                    at = *children.get(answer.value as usize).ok_or(NavigatorError::Desynchronized)?;
                }
                _ => return Err(NavigatorError::Desynchronized),
            }
        }
        Ok(at)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{DiagramBuilder, DiagramKind};
    use crate::table::{TableSchema, VariableSpec};
    use alloc::sync::Arc;
    use alloc::vec;

    // size: small/large; color: red/green/blue
    // small -> product 0 (any color); large -> red 1, green 2, blue: none
    fn diagram() -> Diagram {
        let schema = TableSchema::new(
            vec![
                VariableSpec::new("size", vec!["small".into(), "large".into()]).unwrap(),
                VariableSpec::new("color", vec!["red".into(), "green".into(), "blue".into()]).unwrap(),
            ],
            vec!["mini".into(), "red giant".into(), "green giant".into()],
        )
        .unwrap();
        let mut b = DiagramBuilder::new(Arc::new(schema), DiagramKind::Reduced);
        let (p0, p1, p2, x) = (b.terminal(0).unwrap(), b.terminal(1).unwrap(), b.terminal(2).unwrap(), b.x_terminal());
        let color = b.intern(Node::Decision { var: 1, children: vec![p1, p2, x] }).unwrap();
        let root = b.intern(Node::Decision { var: 0, children: vec![p0, color] }).unwrap();
        b.finish(root).unwrap()
    }

    #[test]
    fn dialogue_to_a_product() {
        let d = diagram();
        let mut s = Session::new(&d);
        let View::Question(q) = s.view() else { panic!() };
        assert_eq!((q.variable.as_str(), q.depth), ("size", 0));
        assert_eq!(q.options, vec!["small", "large"]);
        let View::Question(q) = s.answer(1).unwrap() else { panic!() };
        assert_eq!((q.variable.as_str(), q.depth), ("color", 1));
        assert_eq!(s.answer(1).unwrap(), View::Resolved(ResultView::Product { id: 2, label: "green giant".into() }));
        assert!(s.is_resolved());
        assert_eq!(s.answer(0), Err(NavigatorError::Resolved));
        s.audit().unwrap();
    }

    #[test]
    fn no_match_and_undo() {
        let d = diagram();
        let mut s = Session::new(&d);
        s.answer(1).unwrap();
        assert_eq!(s.answer(2).unwrap(), View::Resolved(ResultView::NoMatch));
        let q = s.undo().unwrap();
        assert_eq!(q.variable, "color");
        assert!(!s.is_resolved());
        assert_eq!(s.trail(), &[Answer { var: 0, value: 1 }]);
    }

    #[test]
    fn invalid_answer_leaves_session_unchanged() {
        let d = diagram();
        let mut s = Session::new(&d);
        let before = (s.position(), s.trail().to_vec());
        assert_eq!(s.answer(2), Err(NavigatorError::ValueOutOfRange { value: 2, arity: 2 }));
        assert_eq!((s.position(), s.trail().to_vec()), before);
        assert_eq!(s.undo(), Err(NavigatorError::EmptyTrail));
    }

    #[test]
    fn answers_then_undos_return_to_root() {
        let d = diagram();
        let mut s = Session::new(&d);
        let start = s.view();
        s.answer(1).unwrap();
        let mid = (s.position(), s.view());
        s.answer(0).unwrap();
        s.undo().unwrap();
        assert_eq!((s.position(), s.view()), mid);
        s.undo().unwrap();
        assert_eq!(s.position(), d.root());
        assert_eq!(s.view(), start);
        s.answer(0).unwrap();
        assert_eq!(s.restart(), start);
    }

    #[test]
    fn sessions_are_independent() {
        let d = Arc::new(diagram());
        let mut a = Session::new(d.clone());
        let b = Session::new(d);
        a.answer(0).unwrap();
        assert!(a.is_resolved());
        assert!(b.trail().is_empty() && !b.is_resolved());
    }

    #[test]
    fn terminal_root_resolves_immediately() {
        let schema = TableSchema::new(vec![VariableSpec::numbered("a", 2).unwrap()], vec!["only".into()]).unwrap();
        let mut b = DiagramBuilder::new(Arc::new(schema), DiagramKind::Reduced);
        let t = b.terminal(0).unwrap();
        let d = b.finish(t).unwrap();
        let s = Session::new(&d);
        assert!(s.is_resolved());
        assert_eq!(s.view(), View::Resolved(ResultView::Product { id: 0, label: "only".into() }));
    }
}
