//! Product catalogs and standalone schema documents (JSON).
//!
//! ```json
//! {
//!   "variables": [{ "name": "gear", "labels": ["manual", "automatic"] }],
//!   "products":  [{ "id": 0, "label": "Ford Escort 1.8l" }],
//!   "entries":   [{ "product": 0, "cells": [[0, 1]] }]
//! }
//! ```
//!
//! Each cell lists the admissible 0-based values of one variable, in schema
//! order. Product ids must be `0..m`.

use std::sync::Arc;

use infodd_core::{CatalogEntry, ConsistencyPolicy, DecisionTable, TableSchema, VariableSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight-model car catalog used throughout the docs and tests.
pub const CARS_JSON: &str = include_str!("../data/cars.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariableDoc {
    pub name: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductDoc {
    pub id: u32,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryDoc {
    pub product: u32,
    pub cells: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variables: Vec<VariableDoc>,
    pub products: Vec<ProductDoc>,
    pub entries: Vec<EntryDoc>,
}

/// A schema on its own, for CSV tables. A catalog document also parses as a
/// schema: its products supply the output labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemaDoc {
    pub variables: Vec<VariableDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<ProductDoc>>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub name: String,
    pub schema: Arc<TableSchema>,
    pub entries: Vec<CatalogEntry>,
    pub table: DecisionTable,
}

pub fn parse_catalog(text: &str, policy: ConsistencyPolicy) -> Result<Catalog> {
    let doc: CatalogDoc = serde_json::from_str(text)?;
    let outputs = product_labels(&doc.products)?;
    let schema = Arc::new(build_schema(&doc.variables, outputs)?);
    let entries: Vec<CatalogEntry> = doc
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let label = schema
                .output_label(e.product)
                .ok_or_else(|| Error::Invalid(format!("entry {i}: unknown product {}", e.product)))?;
            Ok(CatalogEntry { product_label: label.to_owned(), output: e.product, cells: e.cells.clone() })
        })
        .collect::<Result<_>>()?;
    let table = DecisionTable::from_catalog(schema.clone(), &entries, policy)?;
    Ok(Catalog { name: doc.name.unwrap_or_else(|| "catalog".into()), schema, entries, table })
}

/// The bundled car catalog (19 rows).
pub fn cars() -> Catalog {
    parse_catalog(CARS_JSON, ConsistencyPolicy::Strict).expect("bundled catalog is valid")
}

pub fn parse_schema(text: &str) -> Result<TableSchema> {
    let doc: SchemaDoc = serde_json::from_str(text)?;
    let outputs = match (doc.output_labels, doc.products) {
        (Some(labels), _) => labels,
        (None, Some(products)) => product_labels(&products)?,
        (None, None) => return Err(Error::Invalid("schema needs `output_labels` or `products`".into())),
    };
    build_schema(&doc.variables, outputs)
}

pub fn schema_to_json(schema: &TableSchema) -> String {
    let doc = SchemaDoc {
        variables: schema
            .variables()
            .iter()
            .map(|v| VariableDoc { name: v.name().to_owned(), labels: v.value_labels().to_vec() })
            .collect(),
        output_labels: Some(schema.output_labels().to_vec()),
        products: None,
    };
    serde_json::to_string_pretty(&doc).expect("schema serializes")
}

fn build_schema(variables: &[VariableDoc], outputs: Vec<String>) -> Result<TableSchema> {
    let vars =
        variables.iter().map(|v| VariableSpec::new(v.name.clone(), v.labels.clone())).collect::<Result<Vec<_>, _>>()?;
    Ok(TableSchema::new(vars, outputs)?)
}

fn product_labels(products: &[ProductDoc]) -> Result<Vec<String>> {
    let mut labels = vec![None; products.len()];
    for p in products {
        let slot = labels
            .get_mut(p.id as usize)
            .ok_or_else(|| Error::Invalid(format!("product id {} outside 0..{}", p.id, products.len())))?;
        if slot.replace(p.label.clone()).is_some() {
            return Err(Error::Invalid(format!("duplicate product id {}", p.id)));
        }
    }
    Ok(labels.into_iter().map(|l| l.expect("ids are a permutation of 0..m")).collect())
}
