//! Trailed domain store and the propagation engine.

use std::collections::VecDeque;

use crate::model::{ConstraintTerm, Domain, Value};

use super::propagate::{self, LexFrontier, Scratch};

/// Domain wipe-out: the constraint store has no solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

/// Current domains of a set of variables, with a trail of removals so any
/// earlier state can be restored.
#[derive(Debug, Clone)]
pub struct DomainStore {
    values: Vec<Vec<Value>>,
    alive: Vec<Vec<bool>>,
    size: Vec<usize>,
    trail: Vec<(u32, u32)>,
}

impl DomainStore {
    pub fn new(domains: impl IntoIterator<Item = Domain>) -> Self {
        let values: Vec<Vec<Value>> = domains.into_iter().map(|d| d.values().to_vec()).collect();
        let alive = values.iter().map(|v| vec![true; v.len()]).collect();
        let size = values.iter().map(|v| v.len()).collect();
        DomainStore {
            values,
            alive,
            size,
            trail: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn size(&self, var: usize) -> usize {
        self.size[var]
    }

    pub fn is_fixed(&self, var: usize) -> bool {
        self.size[var] == 1
    }

    /// Smallest value still in the domain.
    pub fn min(&self, var: usize) -> Value {
        let alive = &self.alive[var];
        let idx = alive.iter().position(|&a| a).expect("non-empty domain");
        self.values[var][idx]
    }

    /// Largest value still in the domain.
    pub fn max(&self, var: usize) -> Value {
        let alive = &self.alive[var];
        let idx = alive.iter().rposition(|&a| a).expect("non-empty domain");
        self.values[var][idx]
    }

    /// The single remaining value of a fixed variable.
    pub fn fixed_value(&self, var: usize) -> Value {
        debug_assert!(self.is_fixed(var));
        self.min(var)
    }

    pub fn contains(&self, var: usize, v: Value) -> bool {
        self.index_of(var, v).is_some()
    }

    fn index_of(&self, var: usize, v: Value) -> Option<usize> {
        match self.values[var].binary_search(&v) {
            Ok(i) if self.alive[var][i] => Some(i),
            _ => None,
        }
    }

    /// Remaining values, ascending.
    pub fn alive_values(&self, var: usize) -> Vec<Value> {
        self.values[var]
            .iter()
            .zip(&self.alive[var])
            .filter_map(|(&v, &a)| a.then_some(v))
            .collect()
    }

    /// (index, value) pairs of the remaining values, ascending.
    pub(super) fn alive_indexed(&self, var: usize) -> impl Iterator<Item = (usize, Value)> + '_ {
        self.values[var]
            .iter()
            .zip(&self.alive[var])
            .enumerate()
            .filter_map(|(i, (&v, &a))| a.then_some((i, v)))
    }

    pub(super) fn is_alive(&self, var: usize, idx: usize) -> bool {
        self.alive[var][idx]
    }

    /// Removes one value slot. Returns the remaining domain size.
    pub(super) fn remove_index(&mut self, var: usize, idx: usize) -> usize {
        debug_assert!(self.alive[var][idx]);
        self.alive[var][idx] = false;
        self.size[var] -= 1;
        self.trail.push((var as u32, idx as u32));
        self.size[var]
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Restores every removal made since `mark`.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, idx) = self.trail.pop().unwrap();
            self.alive[var as usize][idx as usize] = true;
            self.size[var as usize] += 1;
        }
    }
}

/// A constraint store over a [`DomainStore`]: propagators, their wake-up
/// lists, and a FIFO queue of constraints scheduled by domain events.
pub struct PropEngine {
    pub store: DomainStore,
    terms: Vec<ConstraintTerm>,
    watchers: Vec<Vec<u32>>,
    queue: VecDeque<u32>,
    queued: Vec<bool>,
    frontiers: Vec<LexFrontier>,
    scratch: Scratch,
    node_serial: u64,
    pub propagations: u64,
}

impl PropEngine {
    pub fn new(domains: impl IntoIterator<Item = Domain>, terms: Vec<ConstraintTerm>) -> Self {
        let store = DomainStore::new(domains);
        let mut watchers = vec![Vec::new(); store.num_vars()];
        for (p, term) in terms.iter().enumerate() {
            // dedupe repeated mentions of one variable
            let mut seen: Vec<usize> = term.vars().collect();
            seen.sort_unstable();
            seen.dedup();
            for var in seen {
                watchers[var].push(p as u32);
            }
        }
        let frontiers = vec![LexFrontier::default(); terms.len()];
        PropEngine {
            queued: vec![false; terms.len()],
            queue: VecDeque::new(),
            store,
            terms,
            watchers,
            frontiers,
            scratch: Scratch::default(),
            node_serial: 0,
            propagations: 0,
        }
    }

    /// Marks the start of a search node; lex frontiers reset lazily.
    pub fn begin_node(&mut self) {
        self.node_serial += 1;
    }

    /// Schedules every constraint and runs to fixpoint.
    pub fn propagate_initial(&mut self) -> Result<(), Inconsistent> {
        for p in 0..self.terms.len() {
            self.enqueue(p as u32);
        }
        self.propagate()
    }

    /// Fixes `var` to `v` and runs to fixpoint.
    pub fn assign_and_propagate(&mut self, var: usize, v: Value) -> Result<(), Inconsistent> {
        let Some(keep) = self.store.index_of(var, v) else {
            return Err(Inconsistent);
        };
        let slots = self.store.values[var].len();
        for idx in 0..slots {
            if idx != keep && self.store.alive[var][idx] {
                self.remove(var, idx)?;
            }
        }
        self.propagate()
    }

    /// Runs the queue to fixpoint. On failure the queue is left clean.
    pub fn propagate(&mut self) -> Result<(), Inconsistent> {
        while let Some(p) = self.queue.pop_front() {
            self.queued[p as usize] = false;
            self.propagations += 1;
            if let Err(e) = self.run_one(p as usize) {
                self.clear_queue();
                return Err(e);
            }
        }
        Ok(())
    }

    fn run_one(&mut self, p: usize) -> Result<(), Inconsistent> {
        propagate::gather(
            &self.store,
            &self.terms[p],
            &mut self.frontiers[p],
            self.node_serial,
            &mut self.scratch,
        )?;
        let removals = std::mem::take(&mut self.scratch.removals);
        let mut outcome = Ok(());
        for &(var, idx) in &removals {
            // a batched removal may already be gone
            if !self.store.alive[var as usize][idx as usize] {
                continue;
            }
            if let Err(e) = self.remove(var as usize, idx as usize) {
                outcome = Err(e);
                break;
            }
        }
        // hand the buffer back for reuse
        self.scratch.removals = removals;
        self.scratch.removals.clear();
        outcome
    }

    fn remove(&mut self, var: usize, idx: usize) -> Result<(), Inconsistent> {
        if self.store.remove_index(var, idx) == 0 {
            return Err(Inconsistent);
        }
        for i in 0..self.watchers[var].len() {
            let p = self.watchers[var][i];
            self.enqueue(p);
        }
        Ok(())
    }

    fn enqueue(&mut self, p: u32) {
        if !self.queued[p as usize] {
            self.queued[p as usize] = true;
            self.queue.push_back(p);
        }
    }

    fn clear_queue(&mut self) {
        while let Some(p) = self.queue.pop_front() {
            self.queued[p as usize] = false;
        }
    }

    pub fn trail_len(&self) -> usize {
        self.store.trail_len()
    }

    /// Backtracks the domain store and forgets pending work.
    pub fn undo_to(&mut self, mark: usize) {
        self.clear_queue();
        self.store.undo_to(mark);
    }
}
