//! Decision trees and reduced decision diagrams as hash-consed DAGs.
//!
//! Nodes are created through a [`DiagramBuilder`]. In [`DiagramKind::Reduced`]
//! the builder applies both reduction rules while interning: a decision node
//! whose children are all the same node is replaced by that child, and a node
//! identical to an existing `(var, children)` tuple is shared. In
//! [`DiagramKind::Tree`] decision nodes are never shared; terminals are
//! interned in both kinds.
//!
//! [`DiagramBuilder::finish`] keeps only the nodes reachable from the root and
//! stores them in post-order (children before parents, children visited in
//! value order), so a finished diagram's node list is a deterministic
//! function of its structure.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::table::TableSchema;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("variable {var} has arity {expected} but the node has {got} children")]
    ChildCount { var: usize, expected: usize, got: usize },
    #[error("node reference {0} does not belong to this diagram")]
    ForeignRef(usize),
    #[error("variable index {index} out of range (n = {n})")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("terminal value {value} outside [0, {arity})")]
    OutputOutOfRange { value: u32, arity: usize },
    #[error("cycle through node {0}")]
    Cycle(usize),
    #[error("variable {0} is tested twice on one path")]
    RepeatedVariable(usize),
    #[error("reduced diagram is not canonical: {0}")]
    NotCanonical(&'static str),
    #[error("assignment has {got} values, schema has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment value {value} outside the domain of variable {var} (arity {arity})")]
    AssignmentValue { var: usize, value: u32, arity: usize },
}

/// Index of a node inside one diagram (or builder).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef(u32);

impl NodeRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self(index as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// Tests `var`; `children[v]` is followed when the variable equals `v`.
    Decision {
        var: usize,
        children: Vec<NodeRef>,
    },
    Terminal(u32),
    /// Reached only through empty cofactors: no row matches.
    XTerminal,
}

impl Node {
    pub fn children(&self) -> &[NodeRef] {
        match self {
            Node::Decision { children, .. } => children,
            _ => &[],
        }
    }

    pub fn is_terminal(&self) -> bool {
        !matches!(self, Node::Decision { .. })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum DiagramKind {
    /// Decision tree: no sharing of decision nodes.
    Tree,
    /// Reduced decision diagram.
    #[default]
    Reduced,
}

/// What a root-to-terminal walk ends in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Leaf {
    Value(u32),
    NoMatch,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostMetrics {
    pub nonterminals: usize,
    /// Maximum number of decision nodes on a root-to-terminal path.
    pub levels: usize,
    pub terminals: usize,
}

/// One root-to-terminal path: the answers taken and where they lead.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathDescriptor {
    pub constraints: Vec<(usize, u32)>,
    pub leaf: Leaf,
}

/// Incremental construction with a unique table.
#[derive(Debug, Clone)]
pub struct DiagramBuilder {
    schema: Arc<TableSchema>,
    kind: DiagramKind,
    nodes: Vec<Node>,
    unique: BTreeMap<Node, NodeRef>,
}

impl DiagramBuilder {
    pub fn new(schema: Arc<TableSchema>, kind: DiagramKind) -> Self {
        Self { schema, kind, nodes: Vec::new(), unique: BTreeMap::new() }
    }

    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn schema(&self) -> &Arc<TableSchema> {
        &self.schema
    }

    /// Nodes created so far, including ones no longer reachable.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, r: NodeRef) -> Option<&Node> {
        self.nodes.get(r.index())
    }

    pub fn terminal(&mut self, value: u32) -> Result<NodeRef, DiagramError> {
        self.intern(Node::Terminal(value))
    }

    pub fn x_terminal(&mut self) -> NodeRef {
        self.intern(Node::XTerminal).expect("x-terminal is always valid")
    }

    pub fn intern(&mut self, node: Node) -> Result<NodeRef, DiagramError> {
        match &node {
            Node::Decision { var, children } => {
                let arity = self
                    .schema
                    .arity(*var)
                    .ok_or(DiagramError::VariableOutOfRange { index: *var, n: self.schema.len() })?;
                if children.len() != arity {
                    return Err(DiagramError::ChildCount { var: *var, expected: arity, got: children.len() });
                }
                if let Some(bad) = children.iter().find(|c| c.index() >= self.nodes.len()) {
                    return Err(DiagramError::ForeignRef(bad.index()));
                }
                if self.kind == DiagramKind::Reduced {
                    if children.iter().all(|c| *c == children[0]) {
                        return Ok(children[0]);
                    }
                } else {
                    return Ok(self.push(node));
                }
            }
            Node::Terminal(value) => {
                if *value as usize >= self.schema.output_arity() {
                    return Err(DiagramError::OutputOutOfRange { value: *value, arity: self.schema.output_arity() });
                }
            }
            Node::XTerminal => {}
        }
        if let Some(&existing) = self.unique.get(&node) {
            return Ok(existing);
        }
        let r = self.push(node.clone());
        self.unique.insert(node, r);
        Ok(r)
    }

    fn push(&mut self, node: Node) -> NodeRef {
        self.nodes.push(node);
        NodeRef::from_index(self.nodes.len() - 1)
    }

    /// Freezes the diagram rooted at `root`, dropping unreachable nodes.
    pub fn finish(self, root: NodeRef) -> Result<Diagram, DiagramError> {
        if root.index() >= self.nodes.len() {
            return Err(DiagramError::ForeignRef(root.index()));
        }
        let order = post_order(&self.nodes, root)?;
        let mut remap = vec![u32::MAX; self.nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as u32;
        }
        let nodes: Vec<Node> = order
            .iter()
            .map(|&old| match &self.nodes[old] {
                Node::Decision { var, children } => {
                    Node::Decision { var: *var, children: children.iter().map(|c| NodeRef(remap[c.index()])).collect() }
                }
                other => other.clone(),
            })
            .collect();
        let root = NodeRef(remap[root.index()]);
        let diagram = Diagram { schema: self.schema, kind: self.kind, nodes, root };
        diagram.check_free()?;
        Ok(diagram)
    }
}

/// Nodes reachable from `root`, children before parents. Errors on cycles
/// and out-of-range references.
fn post_order(nodes: &[Node], root: NodeRef) -> Result<Vec<usize>, DiagramError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; nodes.len()];
    let mut order = Vec::new();
    // (node, next child to visit)
    let mut stack = vec![(root.index(), 0usize)];
    mark[root.index()] = Mark::Open;
    while let Some(top) = stack.last_mut() {
        let (node, next) = *top;
        let children = nodes[node].children();
        if next < children.len() {
            top.1 += 1;
            let child = children[next].index();
            if child >= nodes.len() {
                return Err(DiagramError::ForeignRef(child));
            }
            match mark[child] {
                Mark::New => {
                    mark[child] = Mark::Open;
                    stack.push((child, 0));
                }
                Mark::Open => return Err(DiagramError::Cycle(child)),
                Mark::Done => {}
            }
        } else {
            mark[node] = Mark::Done;
            order.push(node);
            stack.pop();
        }
    }
    Ok(order)
}

/// An immutable decision tree or reduced decision diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    schema: Arc<TableSchema>,
    kind: DiagramKind,
    nodes: Vec<Node>,
    root: NodeRef,
}

impl Diagram {
    /// Rebuilds a diagram from an explicit node list (any order, references
    /// by index). Rejects dangling references, cycles, arity mismatches,
    /// repeated variables on a path and, for reduced diagrams, any node the
    /// reduction rules would remove.
    pub fn from_parts(
        schema: Arc<TableSchema>,
        kind: DiagramKind,
        nodes: Vec<Node>,
        root: NodeRef,
    ) -> Result<Self, DiagramError> {
        if root.index() >= nodes.len() {
            return Err(DiagramError::ForeignRef(root.index()));
        }
        let order = post_order(&nodes, root)?;
        let mut builder = DiagramBuilder::new(schema, kind);
        let mut remap = vec![NodeRef(u32::MAX); nodes.len()];
        for &old in &order {
            let node = match &nodes[old] {
                Node::Decision { var, children } => {
                    Node::Decision { var: *var, children: children.iter().map(|c| remap[c.index()]).collect() }
                }
                other => other.clone(),
            };
            remap[old] = builder.intern(node)?;
        }
        let diagram = builder.finish(remap[root.index()])?;
        if kind == DiagramKind::Reduced && diagram.nodes.len() != order.len() {
            return Err(DiagramError::NotCanonical("redundant or duplicate nodes"));
        }
        Ok(diagram)
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn shared_schema(&self) -> &Arc<TableSchema> {
        &self.schema
    }

    pub fn kind(&self) -> DiagramKind {
        self.kind
    }

    pub fn root(&self) -> NodeRef {
        self.root
    }

    /// All nodes in post-order; the root is last.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, r: NodeRef) -> &Node {
        &self.nodes[r.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Follows the assignment from the root to a terminal.
    pub fn evaluate(&self, assignment: &[u32]) -> Result<Leaf, DiagramError> {
        if assignment.len() != self.schema.len() {
            return Err(DiagramError::AssignmentLength { expected: self.schema.len(), got: assignment.len() });
        }
        for (var, (&value, spec)) in assignment.iter().zip(self.schema.variables()).enumerate() {
            if value as usize >= spec.arity() {
                return Err(DiagramError::AssignmentValue { var, value, arity: spec.arity() });
            }
        }
        let mut at = self.root;
        loop {
            match self.node(at) {
                Node::Decision { var, children } => at = children[assignment[*var] as usize],
                Node::Terminal(v) => return Ok(Leaf::Value(*v)),
                Node::XTerminal => return Ok(Leaf::NoMatch),
            }
        }
    }

    pub fn cost(&self) -> CostMetrics {
        let depth = self.depths();
        let nonterminals = self.nodes.iter().filter(|n| !n.is_terminal()).count();
        CostMetrics { nonterminals, levels: depth[self.root.index()], terminals: self.nodes.len() - nonterminals }
    }

    // decision nodes on the longest path below each node (inclusive)
    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Decision { children, .. } = node {
                depth[i] = 1 + children.iter().map(|c| depth[c.index()]).max().unwrap_or(0);
            }
        }
        depth
    }

    /// Number of root-to-terminal paths, counted without enumerating them.
    pub fn count_paths(&self) -> u128 {
        let mut count = vec![0u128; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            count[i] = match node {
                Node::Decision { children, .. } => children.iter().map(|c| count[c.index()]).sum(),
                _ => 1,
            };
        }
        count[self.root.index()]
    }

    /// Every root-to-terminal path exactly once, in lexicographic order of
    /// the answers taken.
    pub fn enumerate_paths(&self) -> Vec<PathDescriptor> {
        let mut out = Vec::new();
        let mut constraints = Vec::new();
        self.walk_paths(self.root, &mut constraints, &mut out);
        out
    }

    fn walk_paths(&self, at: NodeRef, constraints: &mut Vec<(usize, u32)>, out: &mut Vec<PathDescriptor>) {
        match self.node(at) {
            Node::Decision { var, children } => {
                for (value, child) in children.iter().enumerate() {
                    constraints.push((*var, value as u32));
                    self.walk_paths(*child, constraints, out);
                    constraints.pop();
                }
            }
            Node::Terminal(v) => out.push(PathDescriptor { constraints: constraints.clone(), leaf: Leaf::Value(*v) }),
            Node::XTerminal => out.push(PathDescriptor { constraints: constraints.clone(), leaf: Leaf::NoMatch }),
        }
    }

    /// Applies both reduction rules bottom-up. Idempotent.
    pub fn reduce(&self) -> Diagram {
        let mut builder = DiagramBuilder::new(self.schema.clone(), DiagramKind::Reduced);
        let mut remap: Vec<NodeRef> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let node = match node {
                Node::Decision { var, children } => {
                    Node::Decision { var: *var, children: children.iter().map(|c| remap[c.index()]).collect() }
                }
                other => other.clone(),
            };
            remap.push(builder.intern(node).expect("nodes of a valid diagram stay valid"));
        }
        builder.finish(remap[self.root.index()]).expect("reduction preserves validity")
    }

    /// Checks the two reduction rules: no decision node with all-equal
    /// children, no two nodes with the same content.
    pub fn check_canonical(&self) -> Result<(), DiagramError> {
        let mut seen = BTreeMap::new();
        for node in &self.nodes {
            if let Node::Decision { children, .. } = node {
                if children.iter().all(|c| *c == children[0]) {
                    return Err(DiagramError::NotCanonical("node with identical children"));
                }
            }
            if seen.insert(node, ()).is_some() {
                return Err(DiagramError::NotCanonical("duplicate node"));
            }
        }
        Ok(())
    }

    /// No variable may be tested twice on one path: a node's variable must
    /// not occur anywhere below it.
    fn check_free(&self) -> Result<(), DiagramError> {
        let n = self.schema.len();
        let words = n.div_ceil(64).max(1);
        let mut below = vec![0u64; self.nodes.len() * words];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Decision { var, children } = node {
                let mut acc = vec![0u64; words];
                for c in children {
                    let c = c.index();
                    for (w, a) in acc.iter_mut().enumerate() {
                        *a |= below[c * words + w];
                    }
                    if let Node::Decision { var: cv, .. } = &self.nodes[c] {
                        acc[cv / 64] |= 1 << (cv % 64);
                    }
                }
                if acc[var / 64] & (1 << (var % 64)) != 0 {
                    return Err(DiagramError::RepeatedVariable(*var));
                }
                below[i * words..(i + 1) * words].copy_from_slice(&acc);
            }
        }
        Ok(())
    }
}
