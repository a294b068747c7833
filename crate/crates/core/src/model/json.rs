//! The on-disk model format.
//!
//! A model file is a JSON document:
//!
//! ```json
//! {
//!   "name": "demo",
//!   "dims": [2, 2],
//!   "domain": [0, 1],
//!   "constraints": [
//!     {"type": "linear_eq", "coeffs": [1, 1], "vars": [0, 1], "bound": 1}
//!   ],
//!   "symmetry": ["all", "all"]
//! }
//! ```
//!
//! `domain` is either an integer array (uniform) or an object
//! `{"default": [...], "cells": {"<flat index>": [...]}}`. Each `symmetry`
//! entry is `"all"` (one block covering the dimension), `"none"` (all
//! singleton blocks), or an explicit array of index blocks. Constraint
//! `vars`/`left`/`right` entries are flat row-major cell indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    CellDomains, ConstraintSet, ConstraintTerm, Domain, MatrixModel, ModelError, SymmetrySpec,
};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("bad model file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad model file: {0}")]
    Invalid(#[from] ModelError),
    #[error("bad model file: cell key {0:?} is not an integer")]
    BadCellKey(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    name: String,
    dims: Vec<usize>,
    domain: DomainField,
    #[serde(default)]
    constraints: Vec<ConstraintTerm>,
    symmetry: Vec<SymmetryField>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum DomainField {
    Uniform(Vec<i64>),
    PerCell {
        default: Vec<i64>,
        #[serde(default)]
        cells: BTreeMap<String, Vec<i64>>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SymmetryField {
    Shorthand(String),
    Blocks(Vec<Vec<usize>>),
}

/// Parses and validates a model from its JSON text.
pub fn model_from_json(text: &str) -> Result<MatrixModel, ModelFileError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let domains = match file.domain {
        DomainField::Uniform(values) => CellDomains::Uniform(Domain::new(values)?),
        DomainField::PerCell { default, cells } => {
            let mut overrides = BTreeMap::new();
            for (key, values) in cells {
                let cell: usize = key
                    .parse()
                    .map_err(|_| ModelFileError::BadCellKey(key.clone()))?;
                overrides.insert(cell, Domain::new(values)?);
            }
            CellDomains::PerCell {
                default: Domain::new(default)?,
                overrides,
            }
        }
    };
    let mut partitions = Vec::with_capacity(file.symmetry.len());
    for (dim, field) in file.symmetry.iter().enumerate() {
        let extent = file.dims.get(dim).copied().unwrap_or(0);
        partitions.push(match field {
            SymmetryField::Shorthand(s) if s == "all" => vec![(0..extent).collect()],
            SymmetryField::Shorthand(s) if s == "none" => (0..extent).map(|i| vec![i]).collect(),
            SymmetryField::Shorthand(s) => {
                return Err(ModelError::MalformedPartition {
                    dim,
                    reason: format!("unknown shorthand {s:?}"),
                }
                .into())
            }
            SymmetryField::Blocks(blocks) => blocks.clone(),
        });
    }
    // SymmetrySpec::new re-validates against dims inside MatrixModel::new;
    // build a raw spec here so errors carry the right dimension.
    let symmetry = SymmetrySpec::new(partitions, &file.dims)?;
    Ok(MatrixModel::new(
        file.name,
        file.dims,
        domains,
        ConstraintSet(file.constraints),
        symmetry,
    )?)
}

/// Serialises a model to the JSON file format (pretty-printed).
pub fn model_to_json(model: &MatrixModel) -> String {
    let domain = match model.domains() {
        CellDomains::Uniform(d) => DomainField::Uniform(d.values().to_vec()),
        CellDomains::PerCell { default, overrides } => DomainField::PerCell {
            default: default.values().to_vec(),
            cells: overrides
                .iter()
                .map(|(&c, d)| (c.to_string(), d.values().to_vec()))
                .collect(),
        },
    };
    let symmetry = (0..model.dims().len())
        .map(|d| {
            let blocks = model.symmetry().blocks(d);
            if blocks.len() == 1 && blocks[0].len() == model.dims()[d] {
                SymmetryField::Shorthand("all".into())
            } else if blocks.iter().all(|b| b.len() == 1) {
                SymmetryField::Shorthand("none".into())
            } else {
                SymmetryField::Blocks(blocks.to_vec())
            }
        })
        .collect();
    let file = ModelFile {
        name: model.name().to_string(),
        dims: model.dims().to_vec(),
        domain,
        constraints: model.constraints().0.clone(),
        symmetry,
    };
    serde_json::to_string_pretty(&file).expect("model serialisation cannot fail")
}
