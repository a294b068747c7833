use std::collections::BTreeMap;

use proptest::prelude::*;

use super::perm::GroupElements;
use super::*;

fn unconstrained(dims: Vec<usize>, symmetry: SymmetrySpec) -> Result<MatrixModel, ModelError> {
    MatrixModel::with_uniform_domain("t", dims, Domain::binary(), ConstraintSet::new(), symmetry)
}

#[test]
fn build_full_symmetry_group_orders() {
    let m = unconstrained(vec![2, 2], SymmetrySpec::full(&[2, 2])).unwrap();
    assert_eq!(m.num_cells(), 4);
    assert_eq!(m.symmetry().group_order(), 4u32.into());

    let m = unconstrained(vec![3, 2], SymmetrySpec::full(&[3, 2])).unwrap();
    assert_eq!(m.symmetry().group_order(), 12u32.into());
}

#[test]
fn out_of_range_constraint() {
    let mut cs = ConstraintSet::new();
    // cell (3,1) does not exist in a 2x2 model; nearest flat index 7
    cs.push(ConstraintTerm::LinearEq {
        coeffs: vec![1],
        vars: vec![7],
        bound: 0,
    });
    let err = MatrixModel::with_uniform_domain(
        "t",
        vec![2, 2],
        Domain::binary(),
        cs,
        SymmetrySpec::full(&[2, 2]),
    )
    .unwrap_err();
    assert_eq!(err, ModelError::OutOfRangeIndex { index: 7, cells: 4 });
}

#[test]
fn empty_domain_rejected() {
    assert_eq!(Domain::new([]), Err(ModelError::EmptyDomain));
}

#[test]
fn domain_is_sorted_and_deduped() {
    let d = Domain::new([3, 1, 1, 2]).unwrap();
    assert_eq!(d.values(), &[1, 2, 3]);
}

#[test]
fn malformed_partitions_rejected() {
    for blocks in [
        vec![vec![0usize, 1]],        // does not cover index 2
        vec![vec![0, 1], vec![1, 2]], // overlap
        vec![vec![0, 1, 2], vec![]],  // empty block
        vec![vec![0, 1, 3]],          // out of range
    ] {
        let err = SymmetrySpec::new(vec![blocks, vec![vec![0]]], &[3, 1]).unwrap_err();
        assert!(matches!(err, ModelError::MalformedPartition { dim: 0, .. }));
    }
}

#[test]
fn group_order_matches_enumeration_on_partial_blocks() {
    // rows partitioned {0,1},{2,3}, cols full: 2! * 2! * 3! = 24
    let dims = [4, 3];
    let sym = SymmetrySpec::new(
        vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 1, 2]]],
        &dims,
    )
    .unwrap();
    assert_eq!(sym.group_order(), 24u32.into());
    assert_eq!(GroupElements::new(&dims, &sym).count(), 24);
}

#[test]
fn lex_lengths_validated_at_build() {
    let mut cs = ConstraintSet::new();
    cs.push(ConstraintTerm::LexLe {
        left: vec![0, 1],
        right: vec![2],
    });
    let err = MatrixModel::with_uniform_domain(
        "t",
        vec![2, 2],
        Domain::binary(),
        cs,
        SymmetrySpec::none(&[2, 2]),
    )
    .unwrap_err();
    assert_eq!(err, ModelError::LengthMismatch { left: 2, right: 1 });
}

#[test]
fn scalar_product_requires_binary_cells() {
    let mut overrides = BTreeMap::new();
    overrides.insert(1usize, Domain::new([0, 1, 2]).unwrap());
    let mut cs = ConstraintSet::new();
    cs.push(ConstraintTerm::ScalarProductEq {
        left: vec![0, 1],
        right: vec![2, 3],
        target: 1,
    });
    let err = MatrixModel::new(
        "t",
        vec![2, 2],
        CellDomains::PerCell {
            default: Domain::binary(),
            overrides,
        },
        cs,
        SymmetrySpec::none(&[2, 2]),
    )
    .unwrap_err();
    assert_eq!(err, ModelError::NonBinaryDomain { index: 1 });
}

fn row_sums(dims: &[usize], values: &[Value]) -> Vec<Value> {
    values.chunks(dims[1]).map(|r| r.iter().sum()).collect()
}

fn col_sums(dims: &[usize], values: &[Value]) -> Vec<Value> {
    (0..dims[1])
        .map(|c| (0..dims[0]).map(|r| values[r * dims[1] + c]).sum())
        .collect()
}

proptest! {
    #[test]
    fn apply_permutation_preserves_sum_multisets(
        values in proptest::collection::vec(0i64..3, 6),
        row_seed in 0usize..6,
        col_seed in 0usize..2,
    ) {
        let dims = [3, 2];
        let m = unconstrained(dims.to_vec(), SymmetrySpec::full(&dims)).unwrap();
        let row_perms = super::perm::dim_permutations(3, &[vec![0, 1, 2]]);
        let col_perms = super::perm::dim_permutations(2, &[vec![0, 1]]);
        let out = m
            .apply_permutation(&values, &row_perms[row_seed], &col_perms[col_seed])
            .unwrap();

        let mut before = row_sums(&dims, &values);
        let mut after = row_sums(&dims, &out);
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);

        let mut before = col_sums(&dims, &values);
        let mut after = col_sums(&dims, &out);
        before.sort_unstable();
        after.sort_unstable();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn involutions_apply_twice_to_identity(
        values in proptest::collection::vec(0i64..3, 6),
    ) {
        let dims = [3, 2];
        let m = unconstrained(dims.to_vec(), SymmetrySpec::full(&dims)).unwrap();
        // swap rows 0/2 and the two columns: both involutions
        let once = m.apply_permutation(&values, &[2, 1, 0], &[1, 0]).unwrap();
        let twice = m.apply_permutation(&once, &[2, 1, 0], &[1, 0]).unwrap();
        prop_assert_eq!(twice, values);
    }
}
