//! Decomposition of lexicographic ordering into linear constraints over
//! auxiliary 0/1 tie variables.
//!
//! For vectors of length n >= 2 the decomposition introduces one 0/1
//! variable per position with the chain semantics "b_i = 1 iff the prefix of
//! length i is still tied". Big-M implications link ties and decisions:
//!
//! - b_i <= b_{i-1}
//! - b_i = 1          =>  x_i = y_i
//! - b_{i-1} = 1, b_i = 0  =>  x_i < y_i
//!
//! On any satisfying assignment the b chain is forced to the exact prefix-tie
//! indicator, so the solution set projected onto (X, Y) is exactly
//! `X <=lex Y` (with `b_n = 0` added: exactly `X <lex Y`). A length-1 vector
//! needs no auxiliaries: the order is a single inequality.

use crate::model::{ConstraintSet, ConstraintTerm, Value};

/// A lex ordering rewritten over `X`, `Y` and fresh tie variables.
#[derive(Debug, Clone)]
pub struct LexDecomposition {
    pub constraints: ConstraintSet,
    /// Number of auxiliary 0/1 variables, allocated as
    /// `aux_base .. aux_base + aux_count`.
    pub aux_count: usize,
}

/// Decomposes `xs <=lex ys`. `bounds` must cover every value either vector
/// can take; it sizes the big-M constant.
pub fn decompose_lex_le(
    xs: &[usize],
    ys: &[usize],
    aux_base: usize,
    bounds: (Value, Value),
) -> LexDecomposition {
    decompose(xs, ys, aux_base, bounds, false)
}

/// Decomposes `xs <lex ys`.
pub fn decompose_lex_lt(
    xs: &[usize],
    ys: &[usize],
    aux_base: usize,
    bounds: (Value, Value),
) -> LexDecomposition {
    decompose(xs, ys, aux_base, bounds, true)
}

fn decompose(
    xs: &[usize],
    ys: &[usize],
    aux_base: usize,
    (lo, hi): (Value, Value),
    strict: bool,
) -> LexDecomposition {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut cs = ConstraintSet::new();
    if n == 0 {
        if strict {
            // <lex over empty vectors is false
            cs.push(ConstraintTerm::LinearLe {
                coeffs: vec![],
                vars: vec![],
                bound: -1,
            });
        }
        return LexDecomposition {
            constraints: cs,
            aux_count: 0,
        };
    }
    if n == 1 {
        cs.push(ConstraintTerm::LinearLe {
            coeffs: vec![1, -1],
            vars: vec![xs[0], ys[0]],
            bound: if strict { -1 } else { 0 },
        });
        return LexDecomposition {
            constraints: cs,
            aux_count: 0,
        };
    }

    let m = (hi - lo) + 1; // strictly dominates any |x - y|
    let b = |i: usize| aux_base + i; // b(0) is the tie bit after position 0
    for i in 0..n {
        if i > 0 {
            // chain: b_i <= b_{i-1}
            cs.push(ConstraintTerm::LinearLe {
                coeffs: vec![1, -1],
                vars: vec![b(i), b(i - 1)],
                bound: 0,
            });
        }
        // tie: b_i = 1 => x_i = y_i
        cs.push(ConstraintTerm::LinearLe {
            coeffs: vec![1, -1, m],
            vars: vec![xs[i], ys[i], b(i)],
            bound: m,
        });
        cs.push(ConstraintTerm::LinearLe {
            coeffs: vec![-1, 1, m],
            vars: vec![xs[i], ys[i], b(i)],
            bound: m,
        });
        // decide: prefix tied and b_i = 0 => x_i < y_i
        if i == 0 {
            cs.push(ConstraintTerm::LinearLe {
                coeffs: vec![1, -1, -m],
                vars: vec![xs[i], ys[i], b(i)],
                bound: -1,
            });
        } else {
            cs.push(ConstraintTerm::LinearLe {
                coeffs: vec![1, -1, m, -m],
                vars: vec![xs[i], ys[i], b(i - 1), b(i)],
                bound: m - 1,
            });
        }
    }
    if strict {
        // a full tie is no longer allowed
        cs.push(ConstraintTerm::LinearEq {
            coeffs: vec![1],
            vars: vec![b(n - 1)],
            bound: 0,
        });
    }
    LexDecomposition {
        constraints: cs,
        aux_count: n,
    }
}
