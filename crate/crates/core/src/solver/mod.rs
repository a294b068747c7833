//! Finite-domain backtracking search with constraint propagation.
//!
//! Each search node establishes a propagation fixpoint: constraints are
//! scheduled in a FIFO queue keyed by variable-domain events and re-run
//! until no domain changes. The lexicographic propagators establish
//! generalised arc consistency; linear sums get bounds-style pruning;
//! scalar products and multiset orderings prune as described on their
//! propagators.
//!
//! One search runs single-threaded over a trailed domain store. Models are
//! immutable, so independent solves may run in parallel.

mod decompose;
mod engine;
mod propagate;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{flatten_dims, ConstraintSet, FlattenOrder, MatrixModel, ModelError, Value};

pub use decompose::{decompose_lex_le, decompose_lex_lt, LexDecomposition};
pub use engine::{DomainStore, Inconsistent, PropEngine};
pub use propagate::{
    propagate_lex_le, propagate_lex_lt, propagate_linear, propagate_scalar_product_eq,
};

/// Variable selection order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarOrder {
    #[default]
    RowWise,
    ColWise,
    Snake,
    SmallestDomainFirst,
}

impl VarOrder {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "rowwise" => VarOrder::RowWise,
            "colwise" => VarOrder::ColWise,
            "snake" => VarOrder::Snake,
            "smallest-domain" => VarOrder::SmallestDomainFirst,
            _ => return None,
        })
    }
}

/// Value selection order within a variable's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValOrder {
    /// Ascending matches lex-minimal canonical representatives.
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    FirstSolution,
    #[default]
    EnumerateAll,
    CountOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchConfig {
    pub var_order: VarOrder,
    pub val_order: ValOrder,
    pub mode: SearchMode,
    /// Maximum number of search nodes, when set (must be positive).
    pub node_limit: Option<u64>,
    /// Wall-clock limit, when set (must be positive).
    pub time_limit: Option<Duration>,
}

/// Counters for one solver run. `failures <= nodes` and
/// `solutions <= nodes + 1` always hold: the root fixpoint counts as a node
/// and every branch attempt counts as a node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub failures: u64,
    pub propagations: u64,
    pub solutions: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("model error: {0}")]
    Model(#[from] ModelError),
    #[error("search limit exceeded after {} nodes", stats.nodes)]
    LimitExceeded { stats: SearchStats },
}

/// Depth-first search with propagation to fixpoint at each node.
///
/// `extra` is appended to the model's own constraints (symmetry-breaking
/// sets go here). In `EnumerateAll` mode the sink sees every solution
/// exactly once, as row-major cell values; `FirstSolution` stops after one;
/// `CountOnly` never calls the sink. Runs are deterministic for a fixed
/// config, up to the `elapsed` field.
pub fn solve(
    model: &MatrixModel,
    extra: &ConstraintSet,
    config: &SearchConfig,
    mut on_solution: impl FnMut(&[Value]),
) -> Result<SearchStats, SolveError> {
    extra.validate(model.num_cells())?;

    let cells = model.num_cells();
    let domains = (0..cells).map(|c| model.domain(c).clone());
    let mut terms = model.constraints().clone();
    terms.extend(extra.clone());
    let engine = PropEngine::new(domains, terms.0);

    let static_order = match config.var_order {
        VarOrder::RowWise | VarOrder::SmallestDomainFirst => {
            flatten_dims(model.dims(), FlattenOrder::RowWise).index_sequence
        }
        VarOrder::ColWise => flatten_dims(model.dims(), FlattenOrder::ColWise).index_sequence,
        VarOrder::Snake => flatten_dims(model.dims(), FlattenOrder::Snake).index_sequence,
    };

    let mut search = Search {
        engine,
        config,
        static_order,
        stats: SearchStats::default(),
        started: Instant::now(),
        solution_buf: vec![0; cells],
        sink: &mut on_solution,
    };
    search.run()?;
    let mut stats = search.stats;
    stats.propagations = search.engine.propagations;
    stats.elapsed = search.started.elapsed();
    Ok(stats)
}

/// Convenience wrapper collecting every solution.
pub fn solve_all(
    model: &MatrixModel,
    extra: &ConstraintSet,
    config: &SearchConfig,
) -> Result<(SearchStats, Vec<Vec<Value>>), SolveError> {
    let mut config = config.clone();
    config.mode = SearchMode::EnumerateAll;
    let mut out = Vec::new();
    let stats = solve(model, extra, &config, |s| out.push(s.to_vec()))?;
    Ok((stats, out))
}

/// Convenience wrapper counting solutions without materialising them.
pub fn count_solutions(
    model: &MatrixModel,
    extra: &ConstraintSet,
    config: &SearchConfig,
) -> Result<SearchStats, SolveError> {
    let mut config = config.clone();
    config.mode = SearchMode::CountOnly;
    solve(model, extra, &config, |_| {})
}

struct Search<'a> {
    engine: PropEngine,
    config: &'a SearchConfig,
    static_order: Vec<usize>,
    stats: SearchStats,
    started: Instant,
    solution_buf: Vec<Value>,
    sink: &'a mut dyn FnMut(&[Value]),
}

enum Flow {
    Continue,
    Stop,
}

impl Search<'_> {
    fn run(&mut self) -> Result<(), SolveError> {
        // The root fixpoint is the first node.
        self.stats.nodes += 1;
        self.engine.begin_node();
        match self.engine.propagate_initial() {
            Ok(()) => {
                self.dfs()?;
            }
            Err(Inconsistent) => {
                self.stats.failures += 1;
            }
        }
        Ok(())
    }

    fn dfs(&mut self) -> Result<Flow, SolveError> {
        let Some(var) = self.select_var() else {
            self.stats.solutions += 1;
            match self.config.mode {
                SearchMode::CountOnly => {}
                SearchMode::EnumerateAll | SearchMode::FirstSolution => {
                    for (v, slot) in self.solution_buf.iter_mut().enumerate() {
                        *slot = self.engine.store.fixed_value(v);
                    }
                    (self.sink)(&self.solution_buf);
                }
            }
            return Ok(match self.config.mode {
                SearchMode::FirstSolution => Flow::Stop,
                _ => Flow::Continue,
            });
        };

        let mut values = self.engine.store.alive_values(var);
        if self.config.val_order == ValOrder::Descending {
            values.reverse();
        }
        for v in values {
            self.check_limits()?;
            let mark = self.engine.trail_len();
            self.stats.nodes += 1;
            self.engine.begin_node();
            match self.engine.assign_and_propagate(var, v) {
                Ok(()) => {
                    let flow = self.dfs()?;
                    if matches!(flow, Flow::Stop) {
                        self.engine.undo_to(mark);
                        return Ok(Flow::Stop);
                    }
                }
                Err(Inconsistent) => {
                    self.stats.failures += 1;
                }
            }
            self.engine.undo_to(mark);
        }
        Ok(Flow::Continue)
    }

    fn select_var(&self) -> Option<usize> {
        let store = &self.engine.store;
        match self.config.var_order {
            VarOrder::SmallestDomainFirst => {
                let mut best: Option<(usize, usize)> = None;
                for &v in &self.static_order {
                    let size = store.size(v);
                    if size < 2 {
                        continue;
                    }
                    if best.is_none_or(|(bs, _)| size < bs) {
                        best = Some((size, v));
                    }
                }
                best.map(|(_, v)| v)
            }
            _ => self
                .static_order
                .iter()
                .copied()
                .find(|&v| store.size(v) > 1),
        }
    }

    fn check_limits(&self) -> Result<(), SolveError> {
        if let Some(limit) = self.config.node_limit {
            if self.stats.nodes >= limit {
                return Err(self.limit_error());
            }
        }
        if let Some(limit) = self.config.time_limit {
            if self.started.elapsed() >= limit {
                return Err(self.limit_error());
            }
        }
        Ok(())
    }

    fn limit_error(&self) -> SolveError {
        let mut stats = self.stats.clone();
        stats.propagations = self.engine.propagations;
        stats.elapsed = self.started.elapsed();
        SolveError::LimitExceeded { stats }
    }
}
