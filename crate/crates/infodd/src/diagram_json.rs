//! Diagram documents and JSON-lines path listings.
//!
//! ```json
//! { "kind": "reduced", "schema_ref": "sha256:…", "root": 4,
//!   "nodes": [ {"id": 0, "value": 1}, {"id": 1, "x": true},
//!              {"id": 2, "var": 3, "children": [0, 1]} ] }
//! ```
//!
//! Nodes are listed children-first in the diagram's canonical order, so equal
//! diagrams serialize to identical bytes.

use std::collections::HashMap;
use std::sync::Arc;

use infodd_core::diagram::PathDescriptor;
use infodd_core::{Diagram, DiagramKind, Leaf, Node, NodeRef, TableSchema, VariableSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub kind: String,
    pub schema_ref: String,
    pub root: usize,
    pub nodes: Vec<NodeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<bool>,
}

/// Short content hash of a schema: names, labels and output labels.
pub fn schema_fingerprint(schema: &TableSchema) -> String {
    let mut hasher = Sha256::new();
    for v in schema.variables() {
        hasher.update(v.name().as_bytes());
        hasher.update([0]);
        for label in v.value_labels() {
            hasher.update(label.as_bytes());
            hasher.update([1]);
        }
        hasher.update([2]);
    }
    for label in schema.output_labels() {
        hasher.update(label.as_bytes());
        hasher.update([1]);
    }
    format!("sha256:{}", &hex::encode(hasher.finalize())[..16])
}

pub fn kind_name(kind: DiagramKind) -> &'static str {
    match kind {
        DiagramKind::Tree => "tree",
        DiagramKind::Reduced => "reduced",
    }
}

pub fn to_doc(diagram: &Diagram) -> DiagramDoc {
    let nodes = diagram
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| {
            let mut doc = NodeDoc { id, var: None, children: None, value: None, x: None };
            match node {
                Node::Decision { var, children } => {
                    doc.var = Some(*var);
                    doc.children = Some(children.iter().map(|c| c.index()).collect());
                }
                Node::Terminal(v) => doc.value = Some(*v),
                Node::XTerminal => doc.x = Some(true),
            }
            doc
        })
        .collect();
    DiagramDoc {
        kind: kind_name(diagram.kind()).into(),
        schema_ref: schema_fingerprint(diagram.schema()),
        root: diagram.root().index(),
        nodes,
    }
}

pub fn serialize(diagram: &Diagram) -> String {
    let mut text = serde_json::to_string_pretty(&to_doc(diagram)).expect("diagram documents serialize");
    text.push('\n');
    text
}

/// Parses a diagram document. With a schema, the document's `schema_ref`
/// must match it; without one, a positional schema is inferred from the
/// nodes (see [`infer_schema`]).
pub fn deserialize(text: &str, schema: Option<Arc<TableSchema>>) -> Result<Diagram> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    from_doc(&doc, schema)
}

pub fn from_doc(doc: &DiagramDoc, schema: Option<Arc<TableSchema>>) -> Result<Diagram> {
    let kind = match doc.kind.as_str() {
        "tree" => DiagramKind::Tree,
        "reduced" => DiagramKind::Reduced,
        other => return Err(Error::Invalid(format!("unknown diagram kind `{other}`"))),
    };
    let mut index = HashMap::with_capacity(doc.nodes.len());
    for (i, n) in doc.nodes.iter().enumerate() {
        if index.insert(n.id, i).is_some() {
            return Err(Error::Invalid(format!("duplicate node id {}", n.id)));
        }
    }
    let lookup = |id: usize| index.get(&id).copied().ok_or_else(|| Error::Invalid(format!("dangling node id {id}")));
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in &doc.nodes {
        let node = match (n.var, &n.children, n.value, n.x) {
            (Some(var), Some(children), None, None) => Node::Decision {
                var,
                children: children.iter().map(|&c| lookup(c).map(NodeRef::from_index)).collect::<Result<_>>()?,
            },
            (None, None, Some(value), None) => Node::Terminal(value),
            (None, None, None, Some(true)) => Node::XTerminal,
            _ => return Err(Error::Invalid(format!("node {} is neither decision, terminal nor x-terminal", n.id))),
        };
        nodes.push(node);
    }
    let root = NodeRef::from_index(lookup(doc.root)?);
    let schema = match schema {
        Some(schema) => {
            let expected = schema_fingerprint(&schema);
            if expected != doc.schema_ref {
                return Err(Error::Invalid(format!("diagram was built for schema {}, not {expected}", doc.schema_ref)));
            }
            schema
        }
        None => Arc::new(infer_schema(&nodes)?),
    };
    Ok(Diagram::from_parts(schema, kind, nodes, root)?)
}

/// A schema with variables `x_1..x_n` and numbered labels, sized from the
/// variables and terminal values the nodes use. Variables never tested get
/// arity 2.
pub fn infer_schema(nodes: &[Node]) -> Result<TableSchema> {
    let mut arities: Vec<usize> = Vec::new();
    let mut outputs = 1usize;
    for node in nodes {
        match node {
            Node::Decision { var, children } => {
                if arities.len() <= *var {
                    arities.resize(var + 1, 0);
                }
                if arities[*var] != 0 && arities[*var] != children.len() {
                    return Err(Error::Invalid(format!("variable {var} used with different arities")));
                }
                arities[*var] = children.len();
            }
            Node::Terminal(v) => outputs = outputs.max(*v as usize + 1),
            Node::XTerminal => {}
        }
    }
    let vars = arities
        .iter()
        .enumerate()
        .map(|(i, &a)| VariableSpec::numbered(format!("x_{}", i + 1), a.max(2)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TableSchema::new(vars, (0..outputs).map(|o| o.to_string()).collect())?)
}

#[derive(Debug, Serialize)]
struct PathLine<'a> {
    constraints: Vec<ConstraintDoc<'a>>,
    /// Output value, or `null` for a path ending in the x-terminal.
    leaf: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<&'a str>,
}

#[derive(Debug, Serialize)]
struct ConstraintDoc<'a> {
    var: usize,
    variable: &'a str,
    value: u32,
}

/// One JSON object per line for every path of the diagram.
pub fn paths_to_json_lines(diagram: &Diagram, paths: &[PathDescriptor]) -> String {
    let schema = diagram.schema();
    let mut out = String::new();
    for p in paths {
        let leaf = match p.leaf {
            Leaf::Value(v) => Some(v),
            Leaf::NoMatch => None,
        };
        let line = PathLine {
            constraints: p
                .constraints
                .iter()
                .map(|&(var, value)| ConstraintDoc {
                    var,
                    variable: schema.variable(var).map_or("", |v| v.name()),
                    value,
                })
                .collect(),
            leaf,
            product: leaf.and_then(|v| schema.output_label(v)),
        };
        out.push_str(&serde_json::to_string(&line).expect("path lines serialize"));
        out.push('\n');
    }
    out
}
