//! Constraint toolkit for matrix models with interchangeable rows and columns.
//!
//! The crate is organised around five pieces:
//!
//! - [`model`]: matrix models over finite integer domains, constraint terms,
//!   symmetry specifications and flattening orders, plus the JSON model format.
//! - [`symbreak`]: generators that turn a model's symmetry specification into
//!   static symmetry-breaking constraint sets (double-lex, slice-lex,
//!   lex-leader, all-perm, snake-lex, multiset/first-position/row-sum row
//!   orderings).
//! - [`solver`]: a finite-domain backtracking solver with propagation to
//!   fixpoint, including a GAC propagator for lexicographic ordering
//!   constraints and a big-M decomposition of lex into linear terms.
//! - [`oracle`]: brute-force ground truth — exhaustive enumeration, orbit
//!   partitioning under the symmetry group, and checkers for soundness,
//!   completeness, entailment and incompleteness of the generated sets.
//! - [`problems`]: builders for BIBD, rack configuration and seeded random
//!   instances.

pub mod model;
pub mod oracle;
pub mod problems;
pub mod solver;
pub mod symbreak;

pub use model::{
    ConstraintSet, ConstraintTerm, Domain, FlattenOrder, Flattening, MatrixModel, ModelError,
    SymmetrySpec, Value,
};
pub use solver::{SearchConfig, SearchMode, SearchStats, ValOrder, VarOrder};
pub use symbreak::{SchemeKind, SchemeSpec};
