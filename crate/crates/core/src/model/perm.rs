//! Block-respecting permutations of grid indices and enumeration of the
//! symmetry group they generate.
//!
//! A group element is one permutation per dimension, each permuting indices
//! only within the blocks of that dimension's partition. Elements are
//! represented as forward maps: `perm[i]` is the index that `i` moves to.
//! Applied to an assignment, the value of cell `(i0, i1, ...)` moves to cell
//! `(p0[i0], p1[i1], ...)`.

use itertools::Itertools;

use super::{MatrixModel, ModelError, SymmetrySpec, Value};

/// Composes per-dimension forward maps into a flat-cell forward map:
/// `table[flat(c)] = flat(image of c)`.
pub fn cell_table(dims: &[usize], dim_perms: &[Vec<usize>]) -> Vec<usize> {
    debug_assert_eq!(dims.len(), dim_perms.len());
    let cells: usize = dims.iter().product();
    let mut table = vec![0usize; cells];
    let mut multi = vec![0usize; dims.len()];
    for slot in table.iter_mut() {
        let mut image = 0usize;
        for (d, &m) in multi.iter().enumerate() {
            image = image * dims[d] + dim_perms[d][m];
        }
        *slot = image;
        // row-major odometer
        for d in (0..dims.len()).rev() {
            multi[d] += 1;
            if multi[d] < dims[d] {
                break;
            }
            multi[d] = 0;
        }
    }
    table
}

/// Moves values along a flat-cell forward map: `out[table[c]] = values[c]`.
pub fn apply_cell_table(table: &[usize], values: &[Value]) -> Vec<Value> {
    let mut out = vec![0; values.len()];
    for (c, &v) in values.iter().enumerate() {
        out[table[c]] = v;
    }
    out
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&i| {
        if i >= perm.len() || seen[i] {
            return false;
        }
        seen[i] = true;
        true
    })
}

/// First index that `perm` moves out of its block, if any.
pub fn find_block_violation(perm: &[usize], blocks: &[Vec<usize>]) -> Option<usize> {
    for block in blocks {
        for &i in block {
            if !block.contains(&perm[i]) {
                return Some(i);
            }
        }
    }
    None
}

/// Checked 2-D rearrangement used by [`MatrixModel::apply_permutation`].
pub(super) fn apply_checked_2d(
    model: &MatrixModel,
    values: &[Value],
    row_perm: &[usize],
    col_perm: &[usize],
) -> Result<Vec<Value>, ModelError> {
    let dims = model.dims();
    if dims.len() != 2 {
        return Err(ModelError::NotTwoDimensional { got: dims.len() });
    }
    for (dim, perm) in [row_perm, col_perm].into_iter().enumerate() {
        if perm.len() != dims[dim] || !is_permutation(perm) {
            return Err(ModelError::BadPermutation {
                got: perm.len(),
                want: dims[dim],
            });
        }
        if let Some(index) = find_block_violation(perm, model.symmetry().blocks(dim)) {
            return Err(ModelError::BlockViolation { dim, index });
        }
    }
    let table = cell_table(dims, &[row_perm.to_vec(), col_perm.to_vec()]);
    Ok(apply_cell_table(&table, values))
}

/// All block-respecting permutations of one dimension, in a deterministic
/// order with the identity first.
pub fn dim_permutations(extent: usize, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    // Per block, every arrangement of its indices (lexicographic order, so
    // the identity arrangement comes first). The dimension's permutations
    // are the cartesian product across blocks.
    let per_block: Vec<Vec<Vec<usize>>> = blocks
        .iter()
        .map(|block| {
            block
                .iter()
                .copied()
                .permutations(block.len())
                .collect::<Vec<_>>()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_block.len()];
    loop {
        let mut perm: Vec<usize> = (0..extent).collect();
        for (b, block) in blocks.iter().enumerate() {
            let arrangement = &per_block[b][choice[b]];
            for (slot, &image) in block.iter().zip(arrangement) {
                perm[*slot] = image;
            }
        }
        out.push(perm);
        // odometer over blocks, last block fastest
        let mut b = per_block.len();
        loop {
            if b == 0 {
                return out;
            }
            b -= 1;
            choice[b] += 1;
            if choice[b] < per_block[b].len() {
                break;
            }
            choice[b] = 0;
        }
    }
}

/// Lazy enumeration of the full symmetry group as flat-cell forward maps.
///
/// Elements come in a deterministic order with the identity first. The caller
/// is responsible for checking the group order against its budget before
/// iterating.
pub struct GroupElements {
    dims: Vec<usize>,
    per_dim: Vec<Vec<Vec<usize>>>,
    choice: Vec<usize>,
    done: bool,
}

impl GroupElements {
    pub fn new(dims: &[usize], symmetry: &SymmetrySpec) -> Self {
        let per_dim: Vec<Vec<Vec<usize>>> = (0..dims.len())
            .map(|d| dim_permutations(dims[d], symmetry.blocks(d)))
            .collect();
        GroupElements {
            dims: dims.to_vec(),
            choice: vec![0; per_dim.len()],
            per_dim,
            done: false,
        }
    }

    /// The per-dimension permutations of the current element.
    fn current_dims(&self) -> Vec<Vec<usize>> {
        self.choice
            .iter()
            .enumerate()
            .map(|(d, &c)| self.per_dim[d][c].clone())
            .collect()
    }
}

impl Iterator for GroupElements {
    /// (per-dimension permutations, flat-cell forward map)
    type Item = (Vec<Vec<usize>>, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let dim_perms = self.current_dims();
        let table = cell_table(&self.dims, &dim_perms);
        // odometer over dimensions, last dimension fastest
        let mut d = self.per_dim.len();
        loop {
            if d == 0 {
                self.done = true;
                break;
            }
            d -= 1;
            self.choice[d] += 1;
            if self.choice[d] < self.per_dim[d].len() {
                break;
            }
            self.choice[d] = 0;
        }
        Some((dim_perms, table))
    }
}
