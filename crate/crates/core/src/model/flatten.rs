//! Total orders on the cells of an n-dimensional grid.

use serde::{Deserialize, Serialize};

/// How to linearise the cells of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlattenOrder {
    /// Row-major: last dimension fastest. For 2-D, row 0 left-to-right,
    /// then row 1, and so on.
    RowWise,
    /// Column-major: first dimension fastest.
    ColWise,
    /// Row-major boustrophedon: the last dimension's sweep direction
    /// reverses whenever the sum of the other indices is odd.
    Snake,
}

impl FlattenOrder {
    pub const ALL: [FlattenOrder; 3] = [
        FlattenOrder::RowWise,
        FlattenOrder::ColWise,
        FlattenOrder::Snake,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FlattenOrder::RowWise => "rowwise",
            FlattenOrder::ColWise => "colwise",
            FlattenOrder::Snake => "snake",
        }
    }
}

/// The total order a [`FlattenOrder`] induces on cell indices: a permutation
/// of all flat row-major cell ids, in visit order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flattening {
    pub order: FlattenOrder,
    pub index_sequence: Vec<usize>,
}

/// Builds the induced cell order for a grid with the given extents.
pub fn flatten_dims(dims: &[usize], order: FlattenOrder) -> Flattening {
    let cells: usize = dims.iter().product();
    let index_sequence = match order {
        FlattenOrder::RowWise => (0..cells).collect(),
        FlattenOrder::ColWise => col_wise_sequence(dims, cells),
        FlattenOrder::Snake => snake_sequence(dims, cells),
    };
    Flattening {
        order,
        index_sequence,
    }
}

fn col_wise_sequence(dims: &[usize], cells: usize) -> Vec<usize> {
    let mut seq = Vec::with_capacity(cells);
    let mut multi = vec![0usize; dims.len()];
    'outer: loop {
        seq.push(flat_id(dims, &multi));
        // odometer with the first dimension fastest
        let mut d = 0;
        loop {
            multi[d] += 1;
            if multi[d] < dims[d] {
                break;
            }
            multi[d] = 0;
            d += 1;
            if d == dims.len() {
                break 'outer;
            }
        }
    }
    seq
}

/// Boustrophedon order: row-major, but the last dimension is swept in
/// reverse whenever the sum of the leading indices is odd.
fn snake_sequence(dims: &[usize], cells: usize) -> Vec<usize> {
    let last = dims.len() - 1;
    let last_extent = dims[last];
    let mut seq = Vec::with_capacity(cells);
    let mut lead = vec![0usize; last];
    'outer: loop {
        let base = flat_id_prefix(dims, &lead);
        if lead.iter().sum::<usize>() % 2 == 0 {
            seq.extend(base..base + last_extent);
        } else {
            seq.extend((base..base + last_extent).rev());
        }
        if last == 0 {
            break;
        }
        // row-major odometer over the leading indices
        let mut d = last;
        loop {
            d -= 1;
            lead[d] += 1;
            if lead[d] < dims[d] {
                break;
            }
            lead[d] = 0;
            if d == 0 {
                break 'outer;
            }
        }
    }
    seq
}

fn flat_id(dims: &[usize], multi: &[usize]) -> usize {
    let mut id = 0;
    for (i, &m) in multi.iter().enumerate() {
        id = id * dims[i] + m;
    }
    id
}

/// Flat id of the first cell whose leading indices are `lead` and remaining
/// indices zero.
fn flat_id_prefix(dims: &[usize], lead: &[usize]) -> usize {
    let mut id = 0;
    for (i, &d) in dims.iter().enumerate() {
        id = id * d + lead.get(i).copied().unwrap_or(0);
    }
    id
}
