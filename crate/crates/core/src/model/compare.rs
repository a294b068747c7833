//! Total orders on value sequences: lexicographic and multiset.

use std::cmp::Ordering;

use super::{ModelError, Value};

/// Dictionary comparison of two equal-length sequences.
pub fn lex_compare(u: &[Value], v: &[Value]) -> Result<Ordering, ModelError> {
    if u.len() != v.len() {
        return Err(ModelError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(lex_compare_unchecked(u, v))
}

/// As [`lex_compare`] without the length check. With equal lengths this is
/// exactly slice `Ord`.
pub fn lex_compare_unchecked(u: &[Value], v: &[Value]) -> Ordering {
    debug_assert_eq!(u.len(), v.len());
    for (a, b) in u.iter().zip(v) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            neq => return neq,
        }
    }
    Ordering::Equal
}

/// Compares the multisets of values of two equal-length sequences: sort both
/// descending, then compare lexicographically. Two sequences are `Equal` iff
/// one is a permutation of the other.
pub fn multiset_compare(u: &[Value], v: &[Value]) -> Result<Ordering, ModelError> {
    if u.len() != v.len() {
        return Err(ModelError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(multiset_compare_unchecked(u, v))
}

/// As [`multiset_compare`] without the length check.
pub fn multiset_compare_unchecked(u: &[Value], v: &[Value]) -> Ordering {
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort_unstable_by(|a, b| b.cmp(a));
    sv.sort_unstable_by(|a, b| b.cmp(a));
    lex_compare_unchecked(&su, &sv)
}
