//! Matrix models: finite integer domains, constraint terms, symmetry
//! specifications and flattening orders.
//!
//! Cells of an n-dimensional model are addressed by a flat row-major index
//! (last dimension fastest). All constraint terms reference cells by that
//! flat index; the JSON model format uses the same convention.

mod compare;
mod flatten;
pub mod json;
pub mod perm;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use compare::{
    lex_compare, lex_compare_unchecked, multiset_compare, multiset_compare_unchecked,
};
pub use flatten::{flatten_dims, FlattenOrder, Flattening};

/// Value carried by a single cell.
pub type Value = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("empty domain")]
    EmptyDomain,
    #[error("cell index {index} out of range (model has {cells} cells)")]
    OutOfRangeIndex { index: usize, cells: usize },
    #[error("malformed partition for dimension {dim}: {reason}")]
    MalformedPartition { dim: usize, reason: String },
    #[error("operand length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("permutation of dimension {dim} moves index {index} across partition blocks")]
    BlockViolation { dim: usize, index: usize },
    #[error("dimension extents must be positive")]
    EmptyDimension,
    #[error("row/column permutations need a 2-dimensional model, got {got} dimensions")]
    NotTwoDimensional { got: usize },
    #[error("not a permutation of the dimension: length {got}, extent {want}")]
    BadPermutation { got: usize, want: usize },
    #[error("scalar product constraint requires 0/1 domains, cell {index} is not binary")]
    NonBinaryDomain { index: usize },
}

/// An explicit finite set of integer values, kept strictly increasing.
///
/// Domains are explicit sets rather than intervals so that propagation can
/// remove individual values and leave holes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Value>", try_from = "Vec<Value>")]
pub struct Domain {
    values: Vec<Value>,
}

impl Domain {
    pub fn new(values: impl IntoIterator<Item = Value>) -> Result<Self, ModelError> {
        let mut values: Vec<Value> = values.into_iter().collect();
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Domain { values })
    }

    /// Inclusive integer range `lo..=hi`.
    pub fn range(lo: Value, hi: Value) -> Result<Self, ModelError> {
        Domain::new(lo..=hi)
    }

    pub fn binary() -> Self {
        Domain { values: vec![0, 1] }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn contains(&self, v: Value) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn min(&self) -> Value {
        self.values[0]
    }

    pub fn max(&self) -> Value {
        *self.values.last().unwrap()
    }
}

impl From<Domain> for Vec<Value> {
    fn from(d: Domain) -> Self {
        d.values
    }
}

impl TryFrom<Vec<Value>> for Domain {
    type Error = ModelError;
    fn try_from(values: Vec<Value>) -> Result<Self, Self::Error> {
        Domain::new(values)
    }
}

/// Which index positions of each dimension are interchangeable, as a
/// partition of the index set per dimension. Singleton blocks mean no
/// symmetry on that index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrySpec {
    per_dimension: Vec<Vec<Vec<usize>>>,
}

impl SymmetrySpec {
    /// Validates that each dimension's blocks are disjoint and cover
    /// `0..extent`. Blocks and their contents are normalised to sorted order.
    pub fn new(per_dimension: Vec<Vec<Vec<usize>>>, dims: &[usize]) -> Result<Self, ModelError> {
        if per_dimension.len() != dims.len() {
            return Err(ModelError::MalformedPartition {
                dim: per_dimension.len(),
                reason: format!(
                    "{} partitions for {} dimensions",
                    per_dimension.len(),
                    dims.len()
                ),
            });
        }
        let mut normalised = Vec::with_capacity(per_dimension.len());
        for (dim, blocks) in per_dimension.into_iter().enumerate() {
            let extent = dims[dim];
            let mut seen = vec![false; extent];
            let mut blocks: Vec<Vec<usize>> = blocks;
            for block in &mut blocks {
                if block.is_empty() {
                    return Err(ModelError::MalformedPartition {
                        dim,
                        reason: "empty block".into(),
                    });
                }
                block.sort_unstable();
                for &i in block.iter() {
                    if i >= extent {
                        return Err(ModelError::MalformedPartition {
                            dim,
                            reason: format!("index {i} exceeds extent {extent}"),
                        });
                    }
                    if seen[i] {
                        return Err(ModelError::MalformedPartition {
                            dim,
                            reason: format!("index {i} appears in two blocks"),
                        });
                    }
                    seen[i] = true;
                }
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                return Err(ModelError::MalformedPartition {
                    dim,
                    reason: format!("index {missing} not covered"),
                });
            }
            blocks.sort_by_key(|b| b[0]);
            normalised.push(blocks);
        }
        Ok(SymmetrySpec {
            per_dimension: normalised,
        })
    }

    /// Full symmetry: one block covering each dimension.
    pub fn full(dims: &[usize]) -> Self {
        SymmetrySpec {
            per_dimension: dims.iter().map(|&n| vec![(0..n).collect()]).collect(),
        }
    }

    /// No symmetry: every index in its own block.
    pub fn none(dims: &[usize]) -> Self {
        SymmetrySpec {
            per_dimension: dims
                .iter()
                .map(|&n| (0..n).map(|i| vec![i]).collect())
                .collect(),
        }
    }

    pub fn num_dims(&self) -> usize {
        self.per_dimension.len()
    }

    /// Blocks of one dimension, sorted, each block sorted.
    pub fn blocks(&self, dim: usize) -> &[Vec<usize>] {
        &self.per_dimension[dim]
    }

    /// True when every block of every dimension is a singleton.
    pub fn is_trivial(&self) -> bool {
        self.per_dimension
            .iter()
            .all(|blocks| blocks.iter().all(|b| b.len() == 1))
    }

    /// True when the dimension has a single block covering all its indices.
    pub fn is_dim_full(&self, dim: usize) -> bool {
        self.per_dimension[dim].len() == 1
    }

    /// Exact order of the symmetry group: the product over dimensions and
    /// blocks of (block size)!.
    pub fn group_order(&self) -> BigUint {
        let mut order = BigUint::from(1u32);
        for blocks in &self.per_dimension {
            for block in blocks {
                for k in 2..=block.len() {
                    order *= BigUint::from(k);
                }
            }
        }
        order
    }
}

/// A single constraint over cell indices.
///
/// Serialises as a tagged JSON object, e.g.
/// `{"type": "lex_le", "left": [0,1], "right": [2,3]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConstraintTerm {
    /// left <=_lex right.
    LexLe { left: Vec<usize>, right: Vec<usize> },
    /// left <_lex right.
    LexLt { left: Vec<usize>, right: Vec<usize> },
    /// sum(coeffs[i] * vars[i]) == bound.
    LinearEq {
        coeffs: Vec<Value>,
        vars: Vec<usize>,
        bound: Value,
    },
    /// sum(coeffs[i] * vars[i]) <= bound.
    LinearLe {
        coeffs: Vec<Value>,
        vars: Vec<usize>,
        bound: Value,
    },
    /// sum(left[i] * right[i]) == target, over 0/1 cells.
    ScalarProductEq {
        left: Vec<usize>,
        right: Vec<usize>,
        target: Value,
    },
    /// multiset(left) <= multiset(right), decided by descending sort + lex.
    MultisetLe { left: Vec<usize>, right: Vec<usize> },
    /// left <=_lex every permutation of right; equivalently
    /// left <=_lex sort_ascending(right).
    AllPermLe { left: Vec<usize>, right: Vec<usize> },
}

impl ConstraintTerm {
    /// All cell indices the term mentions.
    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        use ConstraintTerm::*;
        let (a, b): (&[usize], &[usize]) = match self {
            LexLe { left, right }
            | LexLt { left, right }
            | MultisetLe { left, right }
            | AllPermLe { left, right }
            | ScalarProductEq { left, right, .. } => (left, right),
            LinearEq { vars, .. } | LinearLe { vars, .. } => (vars, &[]),
        };
        a.iter().chain(b.iter()).copied()
    }

    /// Arity and index-range validation against a model with `cells` cells.
    pub fn validate(&self, cells: usize) -> Result<(), ModelError> {
        use ConstraintTerm::*;
        match self {
            LexLe { left, right }
            | LexLt { left, right }
            | MultisetLe { left, right }
            | AllPermLe { left, right }
            | ScalarProductEq { left, right, .. } => {
                if left.len() != right.len() {
                    return Err(ModelError::LengthMismatch {
                        left: left.len(),
                        right: right.len(),
                    });
                }
            }
            LinearEq { coeffs, vars, .. } | LinearLe { coeffs, vars, .. } => {
                if coeffs.len() != vars.len() {
                    return Err(ModelError::LengthMismatch {
                        left: coeffs.len(),
                        right: vars.len(),
                    });
                }
            }
        }
        for index in self.vars() {
            if index >= cells {
                return Err(ModelError::OutOfRangeIndex { index, cells });
            }
        }
        Ok(())
    }

    /// Evaluates the term on a full assignment (row-major cell values).
    pub fn is_satisfied_by(&self, values: &[Value]) -> bool {
        use std::cmp::Ordering;
        use ConstraintTerm::*;
        let pick = |ids: &[usize]| -> Vec<Value> { ids.iter().map(|&i| values[i]).collect() };
        match self {
            LexLe { left, right } => {
                lex_compare_unchecked(&pick(left), &pick(right)) != Ordering::Greater
            }
            LexLt { left, right } => {
                lex_compare_unchecked(&pick(left), &pick(right)) == Ordering::Less
            }
            LinearEq {
                coeffs,
                vars,
                bound,
            } => {
                let sum: i128 = coeffs
                    .iter()
                    .zip(vars)
                    .map(|(&c, &v)| c as i128 * values[v] as i128)
                    .sum();
                sum == *bound as i128
            }
            LinearLe {
                coeffs,
                vars,
                bound,
            } => {
                let sum: i128 = coeffs
                    .iter()
                    .zip(vars)
                    .map(|(&c, &v)| c as i128 * values[v] as i128)
                    .sum();
                sum <= *bound as i128
            }
            ScalarProductEq {
                left,
                right,
                target,
            } => {
                let sum: i128 = left
                    .iter()
                    .zip(right)
                    .map(|(&a, &b)| values[a] as i128 * values[b] as i128)
                    .sum();
                sum == *target as i128
            }
            MultisetLe { left, right } => {
                multiset_compare_unchecked(&pick(left), &pick(right)) != Ordering::Greater
            }
            AllPermLe { left, right } => {
                let mut sorted = pick(right);
                sorted.sort_unstable();
                lex_compare_unchecked(&pick(left), &sorted) != Ordering::Greater
            }
        }
    }
}

/// An ordered list of constraint terms, as emitted by problem builders and
/// symmetry-breaking generators.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintSet(pub Vec<ConstraintTerm>);

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, term: ConstraintTerm) {
        self.0.push(term);
    }

    pub fn extend(&mut self, other: ConstraintSet) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ConstraintTerm> {
        self.0.iter()
    }

    pub fn is_satisfied_by(&self, values: &[Value]) -> bool {
        self.0.iter().all(|t| t.is_satisfied_by(values))
    }

    pub fn validate(&self, cells: usize) -> Result<(), ModelError> {
        self.0.iter().try_for_each(|t| t.validate(cells))
    }
}

impl FromIterator<ConstraintTerm> for ConstraintSet {
    fn from_iter<T: IntoIterator<Item = ConstraintTerm>>(iter: T) -> Self {
        ConstraintSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a ConstraintTerm;
    type IntoIter = std::slice::Iter<'a, ConstraintTerm>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Per-cell domains: uniform, or a default with overrides keyed by flat index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellDomains {
    Uniform(Domain),
    PerCell {
        default: Domain,
        overrides: BTreeMap<usize, Domain>,
    },
}

impl CellDomains {
    pub fn domain(&self, cell: usize) -> &Domain {
        match self {
            CellDomains::Uniform(d) => d,
            CellDomains::PerCell { default, overrides } => overrides.get(&cell).unwrap_or(default),
        }
    }
}

/// Decision variables arranged in an n-dimensional grid with finite integer
/// domains, problem constraints, and a symmetry specification.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixModel {
    name: String,
    dims: Vec<usize>,
    domains: CellDomains,
    constraints: ConstraintSet,
    symmetry: SymmetrySpec,
}

impl MatrixModel {
    pub fn new(
        name: impl Into<String>,
        dims: Vec<usize>,
        domains: CellDomains,
        constraints: ConstraintSet,
        symmetry: SymmetrySpec,
    ) -> Result<Self, ModelError> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(ModelError::EmptyDimension);
        }
        let cells: usize = dims.iter().product();
        if let CellDomains::PerCell { overrides, .. } = &domains {
            if let Some(&index) = overrides.keys().find(|&&c| c >= cells) {
                return Err(ModelError::OutOfRangeIndex { index, cells });
            }
        }
        constraints.validate(cells)?;
        // Scalar products are defined over 0/1 cells only.
        for term in &constraints {
            if let ConstraintTerm::ScalarProductEq { left, right, .. } = term {
                for &cell in left.iter().chain(right) {
                    let d = domains.domain(cell);
                    if d.values().iter().any(|&v| v != 0 && v != 1) {
                        return Err(ModelError::NonBinaryDomain { index: cell });
                    }
                }
            }
        }
        let symmetry = SymmetrySpec::new(symmetry.per_dimension, &dims)?;
        Ok(MatrixModel {
            name: name.into(),
            dims,
            domains,
            constraints,
            symmetry,
        })
    }

    /// Convenience constructor: uniform domain, full validation.
    pub fn with_uniform_domain(
        name: impl Into<String>,
        dims: Vec<usize>,
        domain: Domain,
        constraints: ConstraintSet,
        symmetry: SymmetrySpec,
    ) -> Result<Self, ModelError> {
        MatrixModel::new(
            name,
            dims,
            CellDomains::Uniform(domain),
            constraints,
            symmetry,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_cells(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn domains(&self) -> &CellDomains {
        &self.domains
    }

    pub fn domain(&self, cell: usize) -> &Domain {
        self.domains.domain(cell)
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn symmetry(&self) -> &SymmetrySpec {
        &self.symmetry
    }

    /// Flat row-major index of a multi-index.
    pub fn cell_id(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        let mut id = 0;
        for (i, &m) in multi.iter().enumerate() {
            debug_assert!(m < self.dims[i]);
            id = id * self.dims[i] + m;
        }
        id
    }

    /// Flat index of cell (row, col) of a 2-D model.
    pub fn var_at(&self, row: usize, col: usize) -> usize {
        debug_assert_eq!(self.dims.len(), 2);
        row * self.dims[1] + col
    }

    /// The total order that `order` induces on the model's cells.
    pub fn flatten(&self, order: FlattenOrder) -> Flattening {
        flatten_dims(&self.dims, order)
    }

    /// Rearranges a 2-D assignment: the value of cell (r, c) moves to cell
    /// (row_perm[r], col_perm[c]). Fails with `BlockViolation` if either
    /// permutation moves an index across the symmetry partition blocks.
    pub fn apply_permutation(
        &self,
        values: &[Value],
        row_perm: &[usize],
        col_perm: &[usize],
    ) -> Result<Vec<Value>, ModelError> {
        perm::apply_checked_2d(self, values, row_perm, col_perm)
    }
}

#[cfg(test)]
mod tests;
