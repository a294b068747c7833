//! Per-constraint propagation rules.
//!
//! Every rule works the same way: read the current domains, compute the set
//! of value removals justified against the current state, and hand them back
//! to the engine. A rule must fail exactly when the constraint has no
//! solution in the current domains once all variables are fixed; stronger
//! pruning earlier is allowed only if it never removes a supported value.
//!
//! The lexicographic rules establish generalised arc consistency (for
//! distinct variables) in a single pass. The support argument: `X <=lex Y`
//! is monotone — lowering any entry of `X` or raising any entry of `Y`
//! preserves it — so a value `v` of `X[i]` has a support iff the extreme
//! assignment (`X` at its pointwise minimum except `v` at `i`, `Y` at its
//! pointwise maximum) satisfies the ordering, and symmetrically for `Y`.
//! Domain minima of `X` and maxima of `Y` always survive, so one pass
//! reaches the fixpoint. The multiset and sorted-row orderings are monotone
//! in the same sense and use the same extreme-assignment filter.

use std::cmp::Ordering;

use crate::model::{ConstraintTerm, Value};

use super::engine::{DomainStore, Inconsistent};

/// First vector position not yet known to be a fixed-equal pair, maintained
/// per lex constraint. Valid within one search node; reset when the node
/// serial moves on.
#[derive(Debug, Clone, Default)]
pub(super) struct LexFrontier {
    node: u64,
    start: usize,
}

#[derive(Debug, Default)]
pub(super) struct Scratch {
    pub removals: Vec<(u32, u32)>,
    min_l: Vec<Value>,
    max_r: Vec<Value>,
    suffix: Vec<Ordering>,
    buf: Vec<Value>,
}

pub(super) fn gather(
    store: &DomainStore,
    term: &ConstraintTerm,
    frontier: &mut LexFrontier,
    node_serial: u64,
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    scratch.removals.clear();
    match term {
        ConstraintTerm::LexLe { left, right } => {
            gather_lex(store, left, right, false, frontier, node_serial, scratch)
        }
        ConstraintTerm::LexLt { left, right } => {
            gather_lex(store, left, right, true, frontier, node_serial, scratch)
        }
        ConstraintTerm::LinearEq {
            coeffs,
            vars,
            bound,
        } => gather_linear(store, coeffs, vars, *bound, true, scratch),
        ConstraintTerm::LinearLe {
            coeffs,
            vars,
            bound,
        } => gather_linear(store, coeffs, vars, *bound, false, scratch),
        ConstraintTerm::ScalarProductEq {
            left,
            right,
            target,
        } => gather_scalar_product(store, left, right, *target, scratch),
        ConstraintTerm::MultisetLe { left, right } => gather_multiset(store, left, right, scratch),
        ConstraintTerm::AllPermLe { left, right } => gather_all_perm(store, left, right, scratch),
    }
}

fn gather_lex(
    store: &DomainStore,
    left: &[usize],
    right: &[usize],
    strict: bool,
    frontier: &mut LexFrontier,
    node_serial: u64,
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    let n = left.len();
    if frontier.node != node_serial {
        frontier.node = node_serial;
        frontier.start = 0;
    }
    // skip the prefix of fixed-equal pairs; it never un-fixes within a node
    let mut f = frontier.start;
    while f < n {
        let (x, y) = (left[f], right[f]);
        if store.is_fixed(x) && store.is_fixed(y) && store.fixed_value(x) == store.fixed_value(y) {
            f += 1;
        } else {
            break;
        }
    }
    frontier.start = f;
    if f == n {
        // both sides forced equal
        return if strict { Err(Inconsistent) } else { Ok(()) };
    }

    let m = n - f;
    scratch.min_l.clear();
    scratch.max_r.clear();
    for k in 0..m {
        scratch.min_l.push(store.min(left[f + k]));
        scratch.max_r.push(store.max(right[f + k]));
    }
    // suffix[k]: lex comparison of min_l[k..] against max_r[k..]
    scratch.suffix.clear();
    scratch.suffix.resize(m + 1, Ordering::Equal);
    for k in (0..m).rev() {
        scratch.suffix[k] = match scratch.min_l[k].cmp(&scratch.max_r[k]) {
            Ordering::Equal => scratch.suffix[k + 1],
            neq => neq,
        };
    }
    let ok = |o: Ordering| {
        if strict {
            o == Ordering::Less
        } else {
            o != Ordering::Greater
        }
    };
    if !ok(scratch.suffix[0]) {
        return Err(Inconsistent);
    }
    // positions past the first min/max difference are already decided
    let p = (0..m)
        .position(|k| scratch.min_l[k] != scratch.max_r[k])
        .unwrap_or(m);
    for k in 0..=p.min(m - 1) {
        let tail = ok(scratch.suffix[k + 1]);
        let hi = scratch.max_r[k];
        for (idx, v) in store.alive_indexed(left[f + k]) {
            let keep = v < hi || (v == hi && tail);
            if !keep {
                scratch.removals.push((left[f + k] as u32, idx as u32));
            }
        }
        let lo = scratch.min_l[k];
        for (idx, w) in store.alive_indexed(right[f + k]) {
            let keep = w > lo || (w == lo && tail);
            if !keep {
                scratch.removals.push((right[f + k] as u32, idx as u32));
            }
        }
    }
    Ok(())
}

fn gather_linear(
    store: &DomainStore,
    coeffs: &[Value],
    vars: &[usize],
    bound: Value,
    is_eq: bool,
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    let bound = bound as i128;
    let mut sum_min: i128 = 0;
    let mut sum_max: i128 = 0;
    for (&c, &x) in coeffs.iter().zip(vars) {
        let (lo, hi) = term_range(store, c, x);
        sum_min += lo;
        sum_max += hi;
    }
    if sum_min > bound || (is_eq && sum_max < bound) {
        return Err(Inconsistent);
    }
    for (&c, &x) in coeffs.iter().zip(vars) {
        let (lo, hi) = term_range(store, c, x);
        // bounds on this term once every other term is pushed to its extreme
        let term_hi = bound - (sum_min - lo);
        let term_lo = if is_eq {
            bound - (sum_max - hi)
        } else {
            i128::MIN
        };
        for (idx, v) in store.alive_indexed(x) {
            let t = c as i128 * v as i128;
            if t > term_hi || t < term_lo {
                scratch.removals.push((x as u32, idx as u32));
            }
        }
    }
    Ok(())
}

fn term_range(store: &DomainStore, c: Value, x: usize) -> (i128, i128) {
    let (min, max) = (store.min(x) as i128, store.max(x) as i128);
    let c = c as i128;
    if c >= 0 {
        (c * min, c * max)
    } else {
        (c * max, c * min)
    }
}

fn gather_scalar_product(
    store: &DomainStore,
    left: &[usize],
    right: &[usize],
    target: Value,
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    // 0/1 variables: position product ranges over [min_a*min_b, max_a*max_b]
    let mut forced: i64 = 0; // products already 1
    let mut possible: i64 = 0; // products that can still be 1
    for (&a, &b) in left.iter().zip(right) {
        let lo = store.min(a) * store.min(b);
        let hi = store.max(a) * store.max(b);
        forced += lo;
        possible += hi;
    }
    if forced > target || possible < target {
        return Err(Inconsistent);
    }
    let prune_to = |scratch: &mut Scratch, var: usize, keep: Value| {
        for (idx, v) in store.alive_indexed(var) {
            if v != keep {
                scratch.removals.push((var as u32, idx as u32));
            }
        }
    };
    if forced == target {
        // every undecided product must be 0
        for (&a, &b) in left.iter().zip(right) {
            let lo = store.min(a) * store.min(b);
            let hi = store.max(a) * store.max(b);
            if lo == 0 && hi == 1 {
                if store.min(a) == 1 {
                    prune_to(scratch, b, 0);
                } else if store.min(b) == 1 {
                    prune_to(scratch, a, 0);
                }
            }
        }
    }
    if possible == target {
        // every possible product must be 1
        for (&a, &b) in left.iter().zip(right) {
            let lo = store.min(a) * store.min(b);
            let hi = store.max(a) * store.max(b);
            if lo == 0 && hi == 1 {
                prune_to(scratch, a, 1);
                prune_to(scratch, b, 1);
            }
        }
    }
    Ok(())
}

/// Multiset comparison by occurrence counts: tally how often each value
/// occurs and compare the tallies from the largest value downwards,
/// lexicographically. Agrees with the sort-descending rule used by the
/// checker; the two routes cross-check each other in the tests.
pub(super) fn multiset_cmp(u: &[Value], v: &[Value]) -> Ordering {
    if u.is_empty() {
        return Ordering::Equal;
    }
    let lo = u.iter().chain(v).copied().min().unwrap();
    let hi = u.iter().chain(v).copied().max().unwrap();
    let span = (hi - lo) as usize + 1;
    let mut occ_u = vec![0i64; span];
    let mut occ_v = vec![0i64; span];
    for &x in u {
        occ_u[(x - lo) as usize] += 1;
    }
    for &y in v {
        occ_v[(y - lo) as usize] += 1;
    }
    for i in (0..span).rev() {
        match occ_u[i].cmp(&occ_v[i]) {
            Ordering::Equal => continue,
            neq => return neq,
        }
    }
    Ordering::Equal
}

fn gather_multiset(
    store: &DomainStore,
    left: &[usize],
    right: &[usize],
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    let n = left.len();
    scratch.min_l.clear();
    scratch.max_r.clear();
    for k in 0..n {
        scratch.min_l.push(store.min(left[k]));
        scratch.max_r.push(store.max(right[k]));
    }
    if multiset_cmp(&scratch.min_l, &scratch.max_r) == Ordering::Greater {
        return Err(Inconsistent);
    }
    for k in 0..n {
        for (idx, v) in store.alive_indexed(left[k]) {
            scratch.buf.clear();
            scratch.buf.extend_from_slice(&scratch.min_l);
            scratch.buf[k] = v;
            if multiset_cmp(&scratch.buf, &scratch.max_r) == Ordering::Greater {
                scratch.removals.push((left[k] as u32, idx as u32));
            }
        }
        for (idx, w) in store.alive_indexed(right[k]) {
            scratch.buf.clear();
            scratch.buf.extend_from_slice(&scratch.max_r);
            scratch.buf[k] = w;
            if multiset_cmp(&scratch.min_l, &scratch.buf) == Ordering::Greater {
                scratch.removals.push((right[k] as u32, idx as u32));
            }
        }
    }
    Ok(())
}

fn gather_all_perm(
    store: &DomainStore,
    left: &[usize],
    right: &[usize],
    scratch: &mut Scratch,
) -> Result<(), Inconsistent> {
    let n = left.len();
    scratch.min_l.clear();
    scratch.max_r.clear();
    for k in 0..n {
        scratch.min_l.push(store.min(left[k]));
        scratch.max_r.push(store.max(right[k]));
    }
    let mut sorted = scratch.max_r.clone();
    sorted.sort_unstable();
    if lex_cmp(&scratch.min_l, &sorted) == Ordering::Greater {
        return Err(Inconsistent);
    }
    for k in 0..n {
        for (idx, v) in store.alive_indexed(left[k]) {
            scratch.buf.clear();
            scratch.buf.extend_from_slice(&scratch.min_l);
            scratch.buf[k] = v;
            if lex_cmp(&scratch.buf, &sorted) == Ordering::Greater {
                scratch.removals.push((left[k] as u32, idx as u32));
            }
        }
        for (idx, w) in store.alive_indexed(right[k]) {
            scratch.buf.clear();
            scratch.buf.extend_from_slice(&scratch.max_r);
            scratch.buf[k] = w;
            scratch.buf.sort_unstable();
            if lex_cmp(&scratch.min_l, &scratch.buf) == Ordering::Greater {
                scratch.removals.push((right[k] as u32, idx as u32));
            }
        }
    }
    Ok(())
}

fn lex_cmp(u: &[Value], v: &[Value]) -> Ordering {
    crate::model::lex_compare_unchecked(u, v)
}

/// Runs one constraint to its own fixpoint on a bare domain store.
fn run_single(store: &mut DomainStore, term: &ConstraintTerm) -> Result<(), Inconsistent> {
    let mut scratch = Scratch::default();
    let mut frontier = LexFrontier::default();
    loop {
        gather(store, term, &mut frontier, 1, &mut scratch)?;
        if scratch.removals.is_empty() {
            return Ok(());
        }
        let removals = std::mem::take(&mut scratch.removals);
        for &(var, idx) in &removals {
            if store.is_alive(var as usize, idx as usize)
                && store.remove_index(var as usize, idx as usize) == 0
            {
                return Err(Inconsistent);
            }
        }
    }
}

/// GAC propagation of `left <=lex right` on a bare domain store: a value
/// survives iff some full assignment of the two vectors with that value
/// satisfies the ordering. Fails iff no satisfying assignment exists.
pub fn propagate_lex_le(
    store: &mut DomainStore,
    left: &[usize],
    right: &[usize],
) -> Result<(), Inconsistent> {
    run_single(
        store,
        &ConstraintTerm::LexLe {
            left: left.to_vec(),
            right: right.to_vec(),
        },
    )
}

/// GAC propagation of `left <lex right`.
pub fn propagate_lex_lt(
    store: &mut DomainStore,
    left: &[usize],
    right: &[usize],
) -> Result<(), Inconsistent> {
    run_single(
        store,
        &ConstraintTerm::LexLt {
            left: left.to_vec(),
            right: right.to_vec(),
        },
    )
}

/// Bounds-style propagation of a linear term on a bare domain store.
pub fn propagate_linear(
    store: &mut DomainStore,
    term: &ConstraintTerm,
) -> Result<(), Inconsistent> {
    debug_assert!(matches!(
        term,
        ConstraintTerm::LinearEq { .. } | ConstraintTerm::LinearLe { .. }
    ));
    run_single(store, term)
}

/// Scalar-product propagation on a bare domain store (0/1 variables).
pub fn propagate_scalar_product_eq(
    store: &mut DomainStore,
    left: &[usize],
    right: &[usize],
    target: Value,
) -> Result<(), Inconsistent> {
    run_single(
        store,
        &ConstraintTerm::ScalarProductEq {
            left: left.to_vec(),
            right: right.to_vec(),
            target,
        },
    )
}
