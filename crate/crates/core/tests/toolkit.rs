//! Cross-module checks: the solver against the oracle, and scheme strength
//! relations measured per instance.

use std::cmp::Ordering;

use matsym::model::perm::{apply_cell_table, GroupElements};
use matsym::model::{lex_compare_unchecked, FlattenOrder};
use matsym::oracle::{self, Budgets};
use matsym::problems::random_model;
use matsym::solver::{self, SearchConfig};
use matsym::symbreak::{self, SchemeKind, SchemeSpec};
use matsym::{ConstraintSet, Domain, MatrixModel, SymmetrySpec, Value};

fn specs(kinds: &[SchemeKind]) -> Vec<SchemeSpec> {
    kinds.iter().map(|&k| SchemeSpec::new(k)).collect()
}

#[test]
fn solver_and_oracle_enumerate_identical_solution_sets() {
    let budgets = Budgets::default();
    for seed in 0..30u64 {
        for dims in [[2usize, 3], [3, 3]] {
            let model = random_model(&dims, 2, 0.5, seed);
            let expected = oracle::enumerate_all_assignments(&model, &budgets).unwrap();
            let (stats, mut got) =
                solver::solve_all(&model, &ConstraintSet::new(), &SearchConfig::default()).unwrap();
            got.sort();
            assert_eq!(got, expected, "{}", model.name());
            assert_eq!(stats.solutions as usize, expected.len());
        }
    }
}

#[test]
fn solver_agrees_with_oracle_under_every_scheme() {
    let budgets = Budgets::default();
    let scheme_lists = [
        specs(&[SchemeKind::DoubleLex]),
        specs(&[SchemeKind::SnakeLex]),
        specs(&[SchemeKind::MultisetRows]),
        specs(&[SchemeKind::DoubleLex, SchemeKind::AllPerm]),
        specs(&[SchemeKind::LexLeaderFull]),
    ];
    for seed in [3u64, 17, 29] {
        let model = random_model(&[3, 3], 2, 0.4, seed);
        let all = oracle::enumerate_all_assignments(&model, &budgets).unwrap();
        for schemes in &scheme_lists {
            let cs = symbreak::generate_list(&model, schemes).unwrap();
            let expected: Vec<Vec<Value>> = all
                .iter()
                .filter(|s| cs.is_satisfied_by(s))
                .cloned()
                .collect();
            let (_, mut got) = solver::solve_all(&model, &cs, &SearchConfig::default()).unwrap();
            got.sort();
            assert_eq!(
                got,
                expected,
                "seed {seed} scheme {}",
                symbreak::scheme_list_label(schemes)
            );
        }
    }
}

#[test]
fn scheme_strength_chain_holds_where_inclusion_forces_it() {
    // survivors(lexleader) <= survivors(doublelex+allperm) <= survivors(doublelex)
    // is forced by entailment/inclusion. The row-sum link is not forced;
    // violations there are reported, not asserted.
    let budgets = Budgets::default();
    let chain = [
        specs(&[SchemeKind::LexLeaderFull]),
        specs(&[SchemeKind::DoubleLex, SchemeKind::AllPerm]),
        specs(&[SchemeKind::DoubleLex]),
        specs(&[SchemeKind::RowSumRows]),
    ];
    let mut row_sum_reversals = 0u32;
    for seed in 0..20u64 {
        let model = random_model(&[3, 2], 2, 0.4, seed);
        let reports = oracle::survivor_counts(&model, &chain, &budgets).unwrap();
        let counts: Vec<usize> = reports.iter().map(|r| r.survivor_count).collect();
        assert!(counts[0] <= counts[1], "{}: {counts:?}", model.name());
        assert!(counts[1] <= counts[2], "{}: {counts:?}", model.name());
        if counts[2] > counts[3] {
            row_sum_reversals += 1;
        }
    }
    println!("row-sum link reversed on {row_sum_reversals}/20 instances (allowed)");
}

#[test]
fn lexleader_is_complete_under_snake_and_colwise_flattenings() {
    let budgets = Budgets::default();
    let model = MatrixModel::with_uniform_domain(
        "2x3",
        vec![2, 3],
        Domain::binary(),
        ConstraintSet::new(),
        SymmetrySpec::full(&[2, 3]),
    )
    .unwrap();
    let all = oracle::enumerate_all_assignments(&model, &budgets).unwrap();
    let partition =
        oracle::partition_into_orbits(model.dims(), model.symmetry(), &all, &budgets).unwrap();
    for flattening in [FlattenOrder::Snake, FlattenOrder::ColWise] {
        let spec = SchemeSpec::new(SchemeKind::LexLeaderFull).flattening(flattening);
        let cs = symbreak::generate(&model, &spec).unwrap();
        let flat = model.flatten(flattening).index_sequence;
        for orbit in &partition.orbits {
            let survivors: Vec<&Vec<Value>> = orbit
                .members
                .iter()
                .filter(|m| cs.is_satisfied_by(m))
                .collect();
            assert_eq!(survivors.len(), 1, "{flattening:?}");
            // the survivor is the orbit member whose chosen flattening is
            // lex-minimal
            let key = |v: &[Value]| -> Vec<Value> { flat.iter().map(|&c| v[c]).collect() };
            let min = orbit
                .members
                .iter()
                .min_by(|a, b| lex_compare_unchecked(&key(a), &key(b)))
                .unwrap();
            assert_eq!(survivors[0], min, "{flattening:?}");
        }
    }
}

#[test]
fn snakelex_constraints_are_a_subset_of_the_snake_lexleader_set() {
    let model = MatrixModel::with_uniform_domain(
        "3x2",
        vec![3, 2],
        Domain::binary(),
        ConstraintSet::new(),
        SymmetrySpec::full(&[3, 2]),
    )
    .unwrap();
    let snake = symbreak::gen_snake_lex(&model, false).unwrap();
    let full = symbreak::gen_lex_leader_full(&model, FlattenOrder::Snake, false, 10_000).unwrap();
    for term in &snake {
        assert!(
            full.iter().any(|t| t == term),
            "snake-lex term missing from the full set: {term:?}"
        );
    }
    assert!(snake.len() < full.len());
}

#[test]
fn canonical_orbit_members_satisfy_the_lexleader_set() {
    let budgets = Budgets::default();
    for seed in [5u64, 13] {
        let model = random_model(&[3, 2], 2, 0.4, seed);
        let cs = symbreak::generate_list(&model, &specs(&[SchemeKind::LexLeaderFull])).unwrap();
        let all = oracle::enumerate_all_assignments(&model, &budgets).unwrap();
        let partition =
            oracle::partition_into_orbits(model.dims(), model.symmetry(), &all, &budgets).unwrap();
        for orbit in &partition.orbits {
            assert!(cs.is_satisfied_by(&orbit.canonical));
        }
    }
}

#[test]
fn group_images_of_solutions_are_solutions() {
    // the builder closes constraints under the group; the solver must agree
    let model = random_model(&[2, 3], 3, 0.5, 11);
    let (_, sols) =
        solver::solve_all(&model, &ConstraintSet::new(), &SearchConfig::default()).unwrap();
    let set: std::collections::BTreeSet<Vec<Value>> = sols.iter().cloned().collect();
    for (_, table) in GroupElements::new(model.dims(), model.symmetry()) {
        for s in &sols {
            assert!(set.contains(&apply_cell_table(&table, s)));
        }
    }
}

#[test]
fn multiset_chain_orders_rows_up_to_permutation_classes() {
    // a sorted-by-multiset row arrangement always survives, and survivors
    // of one orbit differ only by reordering permutation-equivalent rows
    let budgets = Budgets::default();
    let model = MatrixModel::with_uniform_domain(
        "3x2",
        vec![3, 2],
        Domain::binary(),
        ConstraintSet::new(),
        SymmetrySpec::full(&[3, 2]),
    )
    .unwrap();
    let cs = symbreak::generate_list(&model, &specs(&[SchemeKind::MultisetRows])).unwrap();
    let all = oracle::enumerate_all_assignments(&model, &budgets).unwrap();
    let partition =
        oracle::partition_into_orbits(model.dims(), model.symmetry(), &all, &budgets).unwrap();
    for orbit in &partition.orbits {
        let survivors: Vec<&Vec<Value>> = orbit
            .members
            .iter()
            .filter(|m| cs.is_satisfied_by(m))
            .collect();
        assert!(!survivors.is_empty());
        for s in survivors {
            let rows: Vec<&[Value]> = s.chunks(2).collect();
            for pair in rows.windows(2) {
                assert_ne!(
                    matsym::model::multiset_compare(pair[0], pair[1]).unwrap(),
                    Ordering::Greater
                );
            }
        }
    }
}
