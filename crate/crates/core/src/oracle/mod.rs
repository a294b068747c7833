//! Brute-force ground truth: exhaustive enumeration, orbit partitioning
//! under the symmetry group, and checkers for soundness, completeness,
//! entailment and incompleteness of symmetry-breaking constraint sets.
//!
//! Everything here is exact. Work beyond the configured budgets is rejected,
//! never approximated.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::model::perm::{apply_cell_table, GroupElements};
use crate::model::{ConstraintSet, Domain, MatrixModel, SymmetrySpec, Value};
use crate::symbreak::{self, GenError, SchemeSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} {required} exceeds oracle budget {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: BigUint,
        budget: u64,
    },
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// Work caps for exhaustive computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of full assignments an enumeration may visit.
    pub enumeration: u64,
    /// Maximum symmetry-group order (or factorial side, for the canonical
    /// 2-D shortcut) an orbit computation may enumerate.
    pub group: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: 10_000_000,
            group: 1_000_000,
        }
    }
}

/// Exact set of assignments satisfying the model's problem constraints,
/// in ascending row-major order. Symmetry-breaking constraints are not
/// consulted.
pub fn enumerate_all_assignments(
    model: &MatrixModel,
    budgets: &Budgets,
) -> Result<Vec<Vec<Value>>, OracleError> {
    let cells = model.num_cells();
    let mut space = BigUint::from(1u32);
    for c in 0..cells {
        space *= BigUint::from(model.domain(c).len());
    }
    if space > BigUint::from(budgets.enumeration) {
        return Err(OracleError::BudgetExceeded {
            what: "assignment space",
            required: space,
            budget: budgets.enumeration,
        });
    }
    let domains: Vec<&[Value]> = (0..cells).map(|c| model.domain(c).values()).collect();
    let constraints = model.constraints();
    let mut out = Vec::new();
    let mut idx = vec![0usize; cells];
    let mut assignment: Vec<Value> = domains.iter().map(|d| d[0]).collect();
    'outer: loop {
        if constraints.is_satisfied_by(&assignment) {
            out.push(assignment.clone());
        }
        for c in (0..cells).rev() {
            idx[c] += 1;
            if idx[c] < domains[c].len() {
                assignment[c] = domains[c][idx[c]];
                continue 'outer;
            }
            idx[c] = 0;
            assignment[c] = domains[c][0];
            if c == 0 {
                break 'outer;
            }
        }
    }
    Ok(out)
}

/// One equivalence class of solutions under the symmetry group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Members in ascending row-major order.
    pub members: Vec<Vec<Value>>,
    /// The row-wise-flattening lex-minimal member.
    pub canonical: Vec<Value>,
}

/// All solutions of a model grouped into orbits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbits: Vec<Orbit>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn total_solutions(&self) -> usize {
        self.orbits.iter().map(|o| o.members.len()).sum()
    }

    /// The orbit containing `values`, if any.
    pub fn orbit_of(&self, values: &[Value]) -> Option<&Orbit> {
        self.orbits
            .iter()
            .find(|o| o.members.iter().any(|m| m == values))
    }
}

/// The lex-minimal row-major image of `values` under the whole symmetry
/// group.
///
/// Enumerates the group when its order is within budget. Otherwise, for 2-D
/// models with both dimensions fully interchangeable, minimises over the
/// smaller factorial side: permute that dimension explicitly and sort the
/// other, which reaches the same minimum because sorting equal-length
/// blocks minimises their concatenation.
pub fn canonical_form(
    dims: &[usize],
    symmetry: &SymmetrySpec,
    values: &[Value],
    budgets: &Budgets,
) -> Result<Vec<Value>, OracleError> {
    let order = symmetry.group_order();
    if order <= BigUint::from(budgets.group) {
        let mut best: Option<Vec<Value>> = None;
        for (_, table) in GroupElements::new(dims, symmetry) {
            let candidate = apply_cell_table(&table, values);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        return Ok(best.expect("group contains the identity"));
    }
    if dims.len() == 2 && symmetry.is_dim_full(0) && symmetry.is_dim_full(1) {
        let (rows, cols) = (dims[0], dims[1]);
        let small_side = if rows <= cols { 0 } else { 1 };
        let side_order = factorial(dims[small_side]);
        if side_order <= BigUint::from(budgets.group) {
            return Ok(if small_side == 1 {
                canonical_min_over_cols(rows, cols, values)
            } else {
                canonical_min_over_rows(rows, cols, values)
            });
        }
        return Err(OracleError::BudgetExceeded {
            what: "factorial side",
            required: side_order,
            budget: budgets.group,
        });
    }
    Err(OracleError::BudgetExceeded {
        what: "group order",
        required: order,
        budget: budgets.group,
    })
}

fn factorial(n: usize) -> BigUint {
    let mut f = BigUint::from(1u32);
    for k in 2..=n {
        f *= BigUint::from(k);
    }
    f
}

/// Min over column permutations of the row-sorted matrix.
fn canonical_min_over_cols(rows: usize, cols: usize, values: &[Value]) -> Vec<Value> {
    use itertools::Itertools;
    let mut best: Option<Vec<Value>> = None;
    for perm in (0..cols).permutations(cols) {
        // column j of the candidate is column perm[j] of the input
        let mut candidate: Vec<Vec<Value>> = (0..rows)
            .map(|r| (0..cols).map(|j| values[r * cols + perm[j]]).collect())
            .collect();
        candidate.sort_unstable();
        let flat: Vec<Value> = candidate.concat();
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    }
    best.expect("at least the identity permutation")
}

/// Min over row permutations with columns sorted by their top-down vectors.
fn canonical_min_over_rows(rows: usize, cols: usize, values: &[Value]) -> Vec<Value> {
    use itertools::Itertools;
    let mut best: Option<Vec<Value>> = None;
    for perm in (0..rows).permutations(rows) {
        let mut columns: Vec<Vec<Value>> = (0..cols)
            .map(|c| (0..rows).map(|j| values[perm[j] * cols + c]).collect())
            .collect();
        columns.sort_unstable();
        let mut flat = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in &columns {
                flat.push(col[r]);
            }
        }
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    }
    best.expect("at least the identity permutation")
}

/// Groups solutions into orbits by canonical form. Orbits come sorted by
/// canonical form irrespective of the input order, members ascending.
pub fn partition_into_orbits(
    dims: &[usize],
    symmetry: &SymmetrySpec,
    solutions: &[Vec<Value>],
    budgets: &Budgets,
) -> Result<OrbitPartition, OracleError> {
    let mut groups: BTreeMap<Vec<Value>, Vec<Vec<Value>>> = BTreeMap::new();
    for s in solutions {
        let key = canonical_form(dims, symmetry, s, budgets)?;
        groups.entry(key).or_default().push(s.clone());
    }
    let orbits = groups
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            members.dedup();
            let canonical = members[0].clone();
            Orbit { members, canonical }
        })
        .collect();
    Ok(OrbitPartition { orbits })
}

/// Verdict on one scheme list against one model, computed exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub scheme: String,
    pub total_solutions: usize,
    pub orbit_count: usize,
    pub survivor_count: usize,
    pub orbits_with_zero_survivors: usize,
    pub orbits_with_multiple_survivors: usize,
    /// Sound iff no orbit lost all its solutions.
    pub sound: bool,
    /// Complete iff exactly one survivor per orbit.
    pub complete: bool,
    /// Up to the requested number of symmetric survivor pairs, as row-major
    /// arrays.
    pub witness_pairs: Vec<(Vec<Value>, Vec<Value>)>,
}

/// Evaluates the scheme list's constraints on every orbit of the model's
/// solution set.
pub fn check_soundness(
    model: &MatrixModel,
    schemes: &[SchemeSpec],
    budgets: &Budgets,
    witness_limit: usize,
) -> Result<SchemeReport, OracleError> {
    // generation first: a too-large group should be reported as such even
    // when the enumeration budget would also trip
    let constraint_set = symbreak::generate_list(model, schemes)?;
    let solutions = enumerate_all_assignments(model, budgets)?;
    let partition = partition_into_orbits(model.dims(), model.symmetry(), &solutions, budgets)?;
    Ok(report_for(
        &scheme_label(schemes),
        &partition,
        &constraint_set,
        witness_limit,
    ))
}

fn scheme_label(schemes: &[SchemeSpec]) -> String {
    symbreak::scheme_list_label(schemes)
}

/// Builds a [`SchemeReport`] from a ready-made orbit partition.
pub fn report_for(
    label: &str,
    partition: &OrbitPartition,
    constraint_set: &ConstraintSet,
    witness_limit: usize,
) -> SchemeReport {
    let mut survivor_count = 0;
    let mut zero = 0;
    let mut multiple = 0;
    let mut witness_pairs = Vec::new();
    for orbit in &partition.orbits {
        let survivors: Vec<&Vec<Value>> = orbit
            .members
            .iter()
            .filter(|m| constraint_set.is_satisfied_by(m))
            .collect();
        survivor_count += survivors.len();
        match survivors.len() {
            0 => zero += 1,
            1 => {}
            _ => {
                multiple += 1;
                if witness_pairs.len() < witness_limit {
                    witness_pairs.push((survivors[0].clone(), survivors[1].clone()));
                }
            }
        }
    }
    SchemeReport {
        scheme: label.to_string(),
        total_solutions: partition.total_solutions(),
        orbit_count: partition.orbit_count(),
        survivor_count,
        orbits_with_zero_survivors: zero,
        orbits_with_multiple_survivors: multiple,
        sound: zero == 0,
        complete: survivor_count == partition.orbit_count(),
        witness_pairs,
    }
}

/// Outcome of an entailment check between two constraint sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntailmentReport {
    pub holds: bool,
    pub assignments_checked: u64,
    /// Assignments satisfying the antecedent but not the consequent
    /// (capped).
    pub counterexamples: Vec<Vec<Value>>,
}

/// Checks whether every full assignment of the model's cells satisfying the
/// antecedent scheme's constraints also satisfies the consequent's. Problem
/// constraints are ignored: entailment is a property of the constraint sets
/// themselves.
pub fn check_entailment(
    model: &MatrixModel,
    antecedent: &[SchemeSpec],
    consequent: &[SchemeSpec],
    budgets: &Budgets,
) -> Result<EntailmentReport, OracleError> {
    let ante = symbreak::generate_list(model, antecedent)?;
    let cons = symbreak::generate_list(model, consequent)?;

    let cells = model.num_cells();
    let mut space = BigUint::from(1u32);
    for c in 0..cells {
        space *= BigUint::from(model.domain(c).len());
    }
    if space > BigUint::from(budgets.enumeration) {
        return Err(OracleError::BudgetExceeded {
            what: "assignment space",
            required: space,
            budget: budgets.enumeration,
        });
    }

    let domains: Vec<&[Value]> = (0..cells).map(|c| model.domain(c).values()).collect();
    let mut counterexamples = Vec::new();
    let mut checked = 0u64;
    let mut idx = vec![0usize; cells];
    let mut assignment: Vec<Value> = domains.iter().map(|d| d[0]).collect();
    'outer: loop {
        checked += 1;
        if ante.is_satisfied_by(&assignment)
            && !cons.is_satisfied_by(&assignment)
            && counterexamples.len() < 5
        {
            counterexamples.push(assignment.clone());
        }
        for c in (0..cells).rev() {
            idx[c] += 1;
            if idx[c] < domains[c].len() {
                assignment[c] = domains[c][idx[c]];
                continue 'outer;
            }
            idx[c] = 0;
            assignment[c] = domains[c][0];
            if c == 0 {
                break 'outer;
            }
        }
    }
    Ok(EntailmentReport {
        holds: counterexamples.is_empty(),
        assignments_checked: checked,
        counterexamples,
    })
}

/// A pair of distinct scheme survivors lying in one orbit, with the group
/// element mapping the first onto the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncompletenessWitness {
    pub dims: Vec<usize>,
    pub first: Vec<Value>,
    pub second: Vec<Value>,
    /// Forward permutation per dimension carrying `first` to `second`.
    pub dim_perms: Vec<Vec<usize>>,
}

/// The group element (as per-dimension forward permutations) with
/// `apply(a) == b`, if one exists.
pub fn mapping_between(
    dims: &[usize],
    symmetry: &SymmetrySpec,
    a: &[Value],
    b: &[Value],
    budgets: &Budgets,
) -> Result<Option<Vec<Vec<usize>>>, OracleError> {
    let order = symmetry.group_order();
    if order > BigUint::from(budgets.group) {
        return Err(OracleError::BudgetExceeded {
            what: "group order",
            required: order,
            budget: budgets.group,
        });
    }
    for (dim_perms, table) in GroupElements::new(dims, symmetry) {
        if apply_cell_table(&table, a) == b {
            return Ok(Some(dim_perms));
        }
    }
    Ok(None)
}

/// Scans 2-D shapes in increasing cell count (ties by rows, then columns)
/// over unconstrained fully-symmetric models, returning the first shape on
/// which the scheme list leaves two orbit-equivalent survivors. Shapes the
/// schemes do not apply to are skipped.
pub fn find_smallest_incompleteness_witness(
    schemes: &[SchemeSpec],
    domain: &Domain,
    max_cells: usize,
    budgets: &Budgets,
) -> Result<Option<IncompletenessWitness>, OracleError> {
    for cells in 1..=max_cells {
        for rows in 1..=cells {
            if cells % rows != 0 {
                continue;
            }
            let cols = cells / rows;
            let dims = vec![rows, cols];
            let model = MatrixModel::with_uniform_domain(
                format!("sweep-{rows}x{cols}"),
                dims.clone(),
                domain.clone(),
                ConstraintSet::new(),
                SymmetrySpec::full(&dims),
            )
            .expect("sweep model is valid");
            let constraint_set = match symbreak::generate_list(&model, schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSymmetry { .. })
                | Err(GenError::WrongDimensions { .. })
                | Err(GenError::PartialColumnSymmetry) => continue,
                Err(e) => return Err(e.into()),
            };
            let solutions = enumerate_all_assignments(&model, budgets)?;
            let partition =
                partition_into_orbits(model.dims(), model.symmetry(), &solutions, budgets)?;
            for orbit in &partition.orbits {
                let survivors: Vec<&Vec<Value>> = orbit
                    .members
                    .iter()
                    .filter(|m| constraint_set.is_satisfied_by(m))
                    .collect();
                if survivors.len() >= 2 {
                    let (first, second) = (survivors[0].clone(), survivors[1].clone());
                    let dim_perms =
                        mapping_between(model.dims(), model.symmetry(), &first, &second, budgets)?
                            .expect("orbit members are related by a group element");
                    return Ok(Some(IncompletenessWitness {
                        dims,
                        first,
                        second,
                        dim_perms,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Survivor counts for a chain of scheme lists on one model, in input order.
/// Callers compare adjacent counts; links that are not inclusion-forced may
/// legitimately come out reversed and are reported, not asserted.
pub fn survivor_counts(
    model: &MatrixModel,
    scheme_lists: &[Vec<SchemeSpec>],
    budgets: &Budgets,
) -> Result<Vec<SchemeReport>, OracleError> {
    let solutions = enumerate_all_assignments(model, budgets)?;
    let partition = partition_into_orbits(model.dims(), model.symmetry(), &solutions, budgets)?;
    scheme_lists
        .iter()
        .map(|schemes| {
            let cs = symbreak::generate_list(model, schemes)?;
            Ok(report_for(&scheme_label(schemes), &partition, &cs, 3))
        })
        .collect()
}
