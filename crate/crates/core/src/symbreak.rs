//! Static symmetry-breaking constraint generators.
//!
//! Every generator takes an immutable model and emits a [`ConstraintSet`]
//! over the model's cells. Generators are pure functions and safe to call
//! concurrently.
//!
//! Scheme names, as accepted on the command line and in reports:
//! `doublelex`, `slicelex`, `lexleader`, `allperm`, `snakelex`,
//! `multiset-rows`, `first-pos`, `row-sum`. Schemes compose by `+`
//! (e.g. `doublelex+allperm`); `none` denotes the empty scheme list.

use num_bigint::BigUint;
use thiserror::Error;

use crate::model::perm::GroupElements;
use crate::model::{ConstraintSet, ConstraintTerm, FlattenOrder, MatrixModel};

/// Default cap on the symmetry-group size for the full lex-leader scheme.
pub const DEFAULT_LEXLEADER_GUARD: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("model has no symmetry the {scheme} scheme can break")]
    NoSymmetry { scheme: &'static str },
    #[error("symmetry group too large for full lex-leader: order {order} exceeds guard {limit}")]
    GroupTooLarge { order: BigUint, limit: u64 },
    #[error("{scheme} requires a {expected} model, got {got} dimensions")]
    WrongDimensions {
        scheme: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("allperm requires full column symmetry")]
    PartialColumnSymmetry,
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
}

/// Which generator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    DoubleLex,
    SliceLexNd,
    LexLeaderFull,
    AllPerm,
    SnakeLex,
    MultisetRows,
    FirstPositionRows,
    RowSumRows,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::DoubleLex => "doublelex",
            SchemeKind::SliceLexNd => "slicelex",
            SchemeKind::LexLeaderFull => "lexleader",
            SchemeKind::AllPerm => "allperm",
            SchemeKind::SnakeLex => "snakelex",
            SchemeKind::MultisetRows => "multiset-rows",
            SchemeKind::FirstPositionRows => "first-pos",
            SchemeKind::RowSumRows => "row-sum",
        }
    }
}

/// A scheme choice plus its options.
///
/// `strict` swaps non-strict lex for strict lex in the lex-based schemes
/// (double-lex, slice-lex, snake-lex, lex-leader); models with repeated rows
/// may lose all representatives of an orbit under the strict variants.
/// `flattening` and `guard` only affect the full lex-leader scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub strict: bool,
    pub flattening: FlattenOrder,
    pub guard: u64,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind) -> Self {
        SchemeSpec {
            kind,
            strict: false,
            flattening: FlattenOrder::RowWise,
            guard: DEFAULT_LEXLEADER_GUARD,
        }
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn flattening(mut self, order: FlattenOrder) -> Self {
        self.flattening = order;
        self
    }

    pub fn guard(mut self, guard: u64) -> Self {
        self.guard = guard;
        self
    }
}

/// Parses a single scheme name.
pub fn parse_scheme(name: &str) -> Result<SchemeKind, GenError> {
    Ok(match name {
        "doublelex" => SchemeKind::DoubleLex,
        "slicelex" => SchemeKind::SliceLexNd,
        "lexleader" => SchemeKind::LexLeaderFull,
        "allperm" => SchemeKind::AllPerm,
        "snakelex" => SchemeKind::SnakeLex,
        "multiset-rows" => SchemeKind::MultisetRows,
        "first-pos" => SchemeKind::FirstPositionRows,
        "row-sum" => SchemeKind::RowSumRows,
        other => return Err(GenError::UnknownScheme(other.to_string())),
    })
}

/// Parses a composite scheme list such as `doublelex+allperm`. `none` (or an
/// empty string) is the empty list.
pub fn parse_scheme_list(text: &str) -> Result<Vec<SchemeSpec>, GenError> {
    if text.is_empty() || text == "none" {
        return Ok(Vec::new());
    }
    text.split('+')
        .map(|part| parse_scheme(part.trim()).map(SchemeSpec::new))
        .collect()
}

/// Canonical label of a scheme list, `none` when empty.
pub fn scheme_list_label(schemes: &[SchemeSpec]) -> String {
    if schemes.is_empty() {
        return "none".to_string();
    }
    schemes
        .iter()
        .map(|s| s.kind.label())
        .collect::<Vec<_>>()
        .join("+")
}

/// Runs one scheme's generator.
pub fn generate(model: &MatrixModel, spec: &SchemeSpec) -> Result<ConstraintSet, GenError> {
    match spec.kind {
        SchemeKind::DoubleLex => gen_double_lex(model, spec.strict),
        SchemeKind::SliceLexNd => gen_slice_lex_nd(model, spec.strict),
        SchemeKind::LexLeaderFull => {
            gen_lex_leader_full(model, spec.flattening, spec.strict, spec.guard)
        }
        SchemeKind::AllPerm => gen_all_perm(model),
        SchemeKind::SnakeLex => gen_snake_lex(model, spec.strict),
        SchemeKind::MultisetRows => gen_multiset_rows(model),
        SchemeKind::FirstPositionRows => gen_first_position_rows(model),
        SchemeKind::RowSumRows => gen_row_sum_rows(model),
    }
}

/// Concatenation of the constraint sets of every scheme in the list.
pub fn generate_list(
    model: &MatrixModel,
    schemes: &[SchemeSpec],
) -> Result<ConstraintSet, GenError> {
    let mut out = ConstraintSet::new();
    for spec in schemes {
        out.extend(generate(model, spec)?);
    }
    Ok(out)
}

fn lex_term(left: Vec<usize>, right: Vec<usize>, strict: bool) -> ConstraintTerm {
    if strict {
        ConstraintTerm::LexLt { left, right }
    } else {
        ConstraintTerm::LexLe { left, right }
    }
}

fn require_2d(model: &MatrixModel, scheme: &'static str) -> Result<(), GenError> {
    if model.dims().len() != 2 {
        return Err(GenError::WrongDimensions {
            scheme,
            expected: "2-dimensional",
            got: model.dims().len(),
        });
    }
    Ok(())
}

/// Cells of the slice of dimension `dim` fixed at `index`, flattened
/// row-major over the remaining dimensions.
fn slice_cells(dims: &[usize], dim: usize, index: usize) -> Vec<usize> {
    let mut cells = Vec::new();
    let mut multi = vec![0usize; dims.len()];
    multi[dim] = index;
    'outer: loop {
        let mut flat = 0;
        for (d, &m) in multi.iter().enumerate() {
            flat = flat * dims[d] + m;
        }
        cells.push(flat);
        // row-major odometer over every dimension except `dim`
        for d in (0..dims.len()).rev() {
            if d == dim {
                continue;
            }
            multi[d] += 1;
            if multi[d] < dims[d] {
                continue 'outer;
            }
            multi[d] = 0;
        }
        break;
    }
    cells
}

/// Lexicographic ordering between each adjacent pair of interchangeable
/// slices, for every dimension of an n-dimensional model.
///
/// On a 2-D model this emits exactly the double-lex set: slices of dimension
/// 0 are the rows and slices of dimension 1 are the columns.
pub fn gen_slice_lex_nd(model: &MatrixModel, strict: bool) -> Result<ConstraintSet, GenError> {
    if model.dims().len() < 2 {
        return Err(GenError::WrongDimensions {
            scheme: "slicelex",
            expected: "at least 2-dimensional",
            got: model.dims().len(),
        });
    }
    if model.symmetry().is_trivial() {
        return Err(GenError::NoSymmetry { scheme: "slicelex" });
    }
    let dims = model.dims();
    let mut out = ConstraintSet::new();
    for dim in 0..dims.len() {
        for block in model.symmetry().blocks(dim) {
            for pair in block.windows(2) {
                out.push(lex_term(
                    slice_cells(dims, dim, pair[0]),
                    slice_cells(dims, dim, pair[1]),
                    strict,
                ));
            }
        }
    }
    Ok(out)
}

/// Lexicographic ordering between adjacent rows and adjacent columns within
/// each symmetry block of a 2-D model: (r-1)+(c-1) constraints under full
/// symmetry.
pub fn gen_double_lex(model: &MatrixModel, strict: bool) -> Result<ConstraintSet, GenError> {
    require_2d(model, "doublelex")?;
    if model.symmetry().is_trivial() {
        return Err(GenError::NoSymmetry {
            scheme: "doublelex",
        });
    }
    gen_slice_lex_nd(model, strict)
}

/// One lex constraint per non-identity group element: the chosen flattening
/// of the matrix against the same flattening of its image. Exactly the
/// flattening-minimal member of each orbit satisfies the whole set.
pub fn gen_lex_leader_full(
    model: &MatrixModel,
    flattening: FlattenOrder,
    strict: bool,
    guard: u64,
) -> Result<ConstraintSet, GenError> {
    let order = model.symmetry().group_order();
    if order > BigUint::from(guard) {
        return Err(GenError::GroupTooLarge {
            order,
            limit: guard,
        });
    }
    if model.symmetry().is_trivial() {
        return Err(GenError::NoSymmetry {
            scheme: "lexleader",
        });
    }
    let flat = model.flatten(flattening).index_sequence;
    let mut out = ConstraintSet::new();
    for (_, table) in GroupElements::new(model.dims(), model.symmetry()) {
        if table.iter().enumerate().all(|(i, &j)| i == j) {
            continue; // identity
        }
        let right: Vec<usize> = flat.iter().map(|&c| table[c]).collect();
        out.push(lex_term(flat.clone(), right, strict));
    }
    Ok(out)
}

/// For each other row in the first row's block: the first row is
/// lexicographically at most every permutation of that row, posted as the
/// equivalent single term `first <=lex sort_ascending(other)`.
///
/// Requires full column symmetry: the permutations of the other row arise
/// from column permutations, so with a partial column partition the
/// constraint would cut solutions no symmetry maps back in.
pub fn gen_all_perm(model: &MatrixModel) -> Result<ConstraintSet, GenError> {
    require_2d(model, "allperm")?;
    if !model.symmetry().is_dim_full(1) {
        return Err(GenError::PartialColumnSymmetry);
    }
    let first_block = model
        .symmetry()
        .blocks(0)
        .iter()
        .find(|b| b.contains(&0))
        .expect("partition covers row 0");
    if first_block.len() < 2 {
        return Err(GenError::NoSymmetry { scheme: "allperm" });
    }
    let cols = model.dims()[1];
    let row_cells = |r: usize| (0..cols).map(|c| r * cols + c).collect::<Vec<_>>();
    let mut out = ConstraintSet::new();
    for &other in first_block.iter().filter(|&&r| r != 0) {
        out.push(ConstraintTerm::AllPermLe {
            left: row_cells(0),
            right: row_cells(other),
        });
    }
    Ok(out)
}

/// Lex constraints between the snake flattening of the matrix and the snake
/// flattening of its image under each adjacent row or column transposition
/// within a block. A subset of the full lex-leader set under the snake
/// flattening, hence sound.
pub fn gen_snake_lex(model: &MatrixModel, strict: bool) -> Result<ConstraintSet, GenError> {
    require_2d(model, "snakelex")?;
    if model.symmetry().is_trivial() {
        return Err(GenError::NoSymmetry { scheme: "snakelex" });
    }
    let dims = model.dims();
    let snake = model.flatten(FlattenOrder::Snake).index_sequence;
    let mut out = ConstraintSet::new();
    for dim in 0..2 {
        for block in model.symmetry().blocks(dim) {
            for pair in block.windows(2) {
                let mut perm: Vec<usize> = (0..dims[dim]).collect();
                perm.swap(pair[0], pair[1]);
                let table = if dim == 0 {
                    crate::model::perm::cell_table(dims, &[perm, (0..dims[1]).collect()])
                } else {
                    crate::model::perm::cell_table(dims, &[(0..dims[0]).collect(), perm])
                };
                let right: Vec<usize> = snake.iter().map(|&c| table[c]).collect();
                out.push(lex_term(snake.clone(), right, strict));
            }
        }
    }
    Ok(out)
}

/// Multiset ordering between each adjacent pair of rows within each row
/// block. Permutation-equivalent rows tie, so this scheme alone is never
/// complete.
pub fn gen_multiset_rows(model: &MatrixModel) -> Result<ConstraintSet, GenError> {
    require_2d(model, "multiset-rows")?;
    row_adjacent_terms(model, "multiset-rows", |left, right| {
        ConstraintTerm::MultisetLe { left, right }
    })
}

/// Orders the first-column entries of interchangeable rows.
pub fn gen_first_position_rows(model: &MatrixModel) -> Result<ConstraintSet, GenError> {
    require_2d(model, "first-pos")?;
    row_adjacent_terms(model, "first-pos", |left, right| ConstraintTerm::LinearLe {
        coeffs: vec![1, -1],
        vars: vec![left[0], right[0]],
        bound: 0,
    })
}

/// Orders the sums of interchangeable rows.
pub fn gen_row_sum_rows(model: &MatrixModel) -> Result<ConstraintSet, GenError> {
    require_2d(model, "row-sum")?;
    row_adjacent_terms(model, "row-sum", |left, right| {
        let mut coeffs = vec![1; left.len()];
        coeffs.extend(std::iter::repeat_n(-1, right.len()));
        let mut vars = left;
        vars.extend(right);
        ConstraintTerm::LinearLe {
            coeffs,
            vars,
            bound: 0,
        }
    })
}

fn row_adjacent_terms(
    model: &MatrixModel,
    scheme: &'static str,
    mk: impl Fn(Vec<usize>, Vec<usize>) -> ConstraintTerm,
) -> Result<ConstraintSet, GenError> {
    let cols = model.dims()[1];
    let row_cells = |r: usize| (0..cols).map(|c| r * cols + c).collect::<Vec<_>>();
    let mut out = ConstraintSet::new();
    for block in model.symmetry().blocks(0) {
        for pair in block.windows(2) {
            out.push(mk(row_cells(pair[0]), row_cells(pair[1])));
        }
    }
    if out.is_empty() {
        return Err(GenError::NoSymmetry { scheme });
    }
    Ok(out)
}
