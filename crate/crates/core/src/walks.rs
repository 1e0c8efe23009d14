//! Explicit walk enumeration.
//!
//! Exponential in the walk length; used as an independent reference for the
//! product-graph computations and for the exact walk labelings on small
//! graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{LabelId, LabeledGraph};

/// Default cap on the number of enumerated walks.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// Counts enumerated items against a fixed cap.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn charge(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_ENUMERATION_BUDGET)
    }
}

/// Calls `visit` with the node sequence of every walk of exactly `len` edges
/// starting at `start`.
pub fn for_each_walk<F>(
    g: &LabeledGraph,
    start: usize,
    len: usize,
    budget: &mut Budget,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize]),
{
    fn rec<F: FnMut(&[usize])>(
        g: &LabeledGraph,
        walk: &mut Vec<usize>,
        remaining: usize,
        budget: &mut Budget,
        visit: &mut F,
    ) -> Result<()> {
        if remaining == 0 {
            budget.charge(1)?;
            visit(walk);
            return Ok(());
        }
        let last = *walk.last().expect("walk is never empty");
        for &next in g.neighbors(last) {
            walk.push(next);
            rec(g, walk, remaining - 1, budget, visit)?;
            walk.pop();
        }
        Ok(())
    }
    let mut walk = Vec::with_capacity(len + 1);
    walk.push(start);
    rec(g, &mut walk, len, budget, &mut visit)
}

/// All walks of length `len` from `start`, as node sequences.
pub fn walks_from(
    g: &LabeledGraph,
    start: usize,
    len: usize,
    budget: &mut Budget,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_walk(g, start, len, budget, |w| out.push(w.to_vec()))?;
    Ok(out)
}

/// Histogram of label sequences over the walks of length `len` from `start`.
pub fn label_sequence_counts(
    g: &LabeledGraph,
    start: usize,
    len: usize,
    budget: &mut Budget,
) -> Result<HashMap<Vec<LabelId>, u64>> {
    let mut counts = HashMap::new();
    for_each_walk(g, start, len, budget, |w| {
        let seq: Vec<LabelId> = w.iter().map(|&v| g.label(v)).collect();
        *counts.entry(seq).or_insert(0) += 1;
    })?;
    Ok(counts)
}

/// Sorted multiset of label sequences of the walks of length `len` from `start`.
pub fn label_sequences(
    g: &LabeledGraph,
    start: usize,
    len: usize,
    budget: &mut Budget,
) -> Result<Vec<Vec<LabelId>>> {
    let mut out = Vec::new();
    for_each_walk(g, start, len, budget, |w| {
        out.push(w.iter().map(|&v| g.label(v)).collect());
    })?;
    out.sort_unstable();
    Ok(out)
}

/// Number of pairs `(w, w')` of length-`len` walks in `g` and `h` with equal
/// label sequences, by enumerating both walk sets.
pub fn common_walk_pairs(
    g: &LabeledGraph,
    h: &LabeledGraph,
    len: usize,
    budget: &mut Budget,
) -> Result<u64> {
    let mut in_g: HashMap<Vec<LabelId>, u64> = HashMap::new();
    for v in 0..g.node_count() {
        for (seq, c) in label_sequence_counts(g, v, len, budget)? {
            *in_g.entry(seq).or_insert(0) += c;
        }
    }
    let mut total = 0;
    for v in 0..h.node_count() {
        for (seq, c) in label_sequence_counts(h, v, len, budget)? {
            total += c * in_g.get(&seq).copied().unwrap_or(0);
        }
    }
    Ok(total)
}
