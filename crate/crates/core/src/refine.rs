//! Node refinement: Weisfeiler-Leman color refinement, Morgan's extended
//! connectivity, walk partitions, exact walk labelings and unfolding trees.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::graph::{LabelId, LabeledGraph};
use crate::walks::{self, Budget};

/// A node partition, stored as class ids numbered by first appearance.
///
/// Two labelings are equal iff they induce the same partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling(Vec<u32>);

impl Labeling {
    /// Partition induced by arbitrary per-node values.
    pub fn from_values<T, I>(values: I) -> Self
    where
        T: Hash + Eq,
        I: IntoIterator<Item = T>,
    {
        let mut ids: HashMap<T, u32> = HashMap::new();
        let labels = values
            .into_iter()
            .map(|v| {
                let next = ids.len() as u32;
                *ids.entry(v).or_insert(next)
            })
            .collect();
        Labeling(labels)
    }

    pub fn of_graph(g: &LabeledGraph) -> Self {
        Self::from_values(g.labels().iter().copied())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.0.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Node sets of the classes, ordered by class id.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (v, &c) in self.0.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    /// `self ⊑ other`: nodes equal under `self` are equal under `other`.
    pub fn refines(&self, other: &Labeling) -> Result<bool> {
        refines(self, other)
    }
}

/// True iff for all `u, v`: `a(u) = a(v)` implies `b(u) = b(v)`.
pub fn refines(a: &Labeling, b: &Labeling) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::contract(format!(
            "labelings over {} and {} nodes",
            a.len(),
            b.len()
        )));
    }
    let mut image: Vec<Option<u32>> = vec![None; a.num_classes()];
    for (&ca, &cb) in a.0.iter().zip(&b.0) {
        match image[ca as usize] {
            None => image[ca as usize] = Some(cb),
            Some(prev) if prev != cb => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct RefinementSequence {
    pub steps: Vec<Labeling>,
    pub converged: bool,
}

impl RefinementSequence {
    pub fn last(&self) -> &Labeling {
        self.steps.last().expect("a refinement sequence has its initial step")
    }
}

/// Interns `(color, sorted neighbor colors)` signatures into fresh ids.
fn wl_step(
    g: &LabeledGraph,
    colors: &[u32],
    dict: &mut HashMap<(u32, Vec<u32>), u32>,
) -> Vec<u32> {
    (0..g.node_count())
        .map(|v| {
            let mut nbrs: Vec<u32> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
            nbrs.sort_unstable();
            let next = dict.len() as u32;
            *dict.entry((colors[v], nbrs)).or_insert(next)
        })
        .collect()
}

/// Weisfeiler-Leman color refinement starting from the node labels.
///
/// Runs until `max_iter` iterations have been done (`None` means no limit) or
/// until an iteration leaves the partition unchanged. In the latter case the
/// unchanged step is included and `converged` is set.
pub fn wl_refine(g: &LabeledGraph, max_iter: Option<usize>) -> RefinementSequence {
    let mut colors: Vec<u32> = g.labels().iter().map(|l| l.0).collect();
    let mut steps = vec![Labeling::from_values(colors.iter().copied())];
    let mut converged = false;
    let mut iter = 0;
    while max_iter.is_none_or(|m| iter < m) {
        let mut dict = HashMap::new();
        colors = wl_step(g, &colors, &mut dict);
        let next = Labeling::from_values(colors.iter().copied());
        // the new partition refines the old one, so equal class counts
        // mean equal partitions
        let stable = next.num_classes() == steps.last().unwrap().num_classes();
        steps.push(next);
        iter += 1;
        if stable {
            converged = true;
            break;
        }
    }
    RefinementSequence { steps, converged }
}

/// WL colors for a whole collection with one shared dictionary per iteration,
/// so colors are comparable across graphs. Indexed `[iteration][graph][node]`,
/// with iteration 0 holding the input labels.
pub fn wl_shared_colors(graphs: &[LabeledGraph], iterations: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::with_capacity(iterations + 1);
    out.push(
        graphs
            .iter()
            .map(|g| g.labels().iter().map(|l| l.0).collect::<Vec<u32>>())
            .collect::<Vec<_>>(),
    );
    for i in 0..iterations {
        let mut dict = HashMap::new();
        let next = graphs
            .iter()
            .zip(&out[i])
            .map(|(g, colors)| wl_step(g, colors, &mut dict))
            .collect();
        out.push(next);
    }
    out
}

/// Shared-dictionary WL colors run until the joint partition is stable.
/// Returns the final colors per graph and the number of iterations done.
pub fn wl_shared_stable_colors(graphs: &[LabeledGraph]) -> (Vec<Vec<u32>>, usize) {
    let mut colors: Vec<Vec<u32>> = graphs
        .iter()
        .map(|g| g.labels().iter().map(|l| l.0).collect())
        .collect();
    let count = |c: &[Vec<u32>]| {
        let mut all: Vec<u32> = c.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut classes = count(&colors);
    let mut iterations = 0;
    loop {
        let mut dict = HashMap::new();
        let next: Vec<Vec<u32>> = graphs
            .iter()
            .zip(&colors)
            .map(|(g, c)| wl_step(g, c, &mut dict))
            .collect();
        iterations += 1;
        let next_classes = count(&next);
        colors = next;
        if next_classes == classes {
            return (colors, iterations);
        }
        classes = next_classes;
    }
}

/// Result of Morgan's extended-connectivity iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedConnectivity {
    /// The extended connectivity kept as final.
    pub final_ec: Vec<u64>,
    /// `ec^(1), ec^(2), ...`, including the step at which the class count
    /// stopped increasing.
    pub history: Vec<Vec<u64>>,
}

fn distinct_count(values: &[u64]) -> usize {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Morgan's extended connectivity: `ec^(1) = deg`, then repeated neighbor
/// sums while the number of distinct values strictly increases.
pub fn morgan_ec(g: &LabeledGraph) -> Result<ExtendedConnectivity> {
    let mut current: Vec<u64> = (0..g.node_count()).map(|v| g.degree(v) as u64).collect();
    let mut history = vec![current.clone()];
    loop {
        let next = checked_matvec(g, &current).ok_or(Error::Overflow("extended connectivity"))?;
        let grows = distinct_count(&next) > distinct_count(&current);
        history.push(next.clone());
        if !grows {
            return Ok(ExtendedConnectivity {
                final_ec: current,
                history,
            });
        }
        current = next;
    }
}

fn checked_matvec(g: &LabeledGraph, x: &[u64]) -> Option<Vec<u64>> {
    (0..g.node_count())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .try_fold(0u64, |acc, &v| acc.checked_add(x[v]))
        })
        .collect()
}

/// Rows of `[1, A1, ..., A^len 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkPartitionMatrix {
    pub rows: Vec<Vec<u64>>,
}

impl WalkPartitionMatrix {
    /// Column `k`, i.e. `A^k 1`.
    pub fn column(&self, k: usize) -> Vec<u64> {
        self.rows.iter().map(|r| r[k]).collect()
    }

    /// Partition by full rows.
    pub fn labeling(&self) -> Labeling {
        Labeling::from_values(self.rows.iter().cloned())
    }

    /// Partition by the first `cols` columns.
    pub fn truncated_labeling(&self, cols: usize) -> Labeling {
        Labeling::from_values(self.rows.iter().map(|r| r[..cols].to_vec()))
    }
}

pub fn walk_partition(g: &LabeledGraph, len: usize) -> Result<WalkPartitionMatrix> {
    let n = g.node_count();
    let mut rows: Vec<Vec<u64>> = vec![vec![1]; n];
    let mut col = vec![1u64; n];
    for _ in 0..len {
        col = checked_matvec(g, &col).ok_or(Error::Overflow("walk partition"))?;
        for (row, &c) in rows.iter_mut().zip(&col) {
            row.push(c);
        }
    }
    Ok(WalkPartitionMatrix { rows })
}

/// Exact walk labeling by enumeration: nodes are equal iff their multisets of
/// walk label sequences (of length `len`, or of every length up to `len` when
/// `cumulative`) coincide.
pub fn walk_labels_oracle(
    g: &LabeledGraph,
    len: usize,
    cumulative: bool,
    budget: &mut Budget,
) -> Result<Labeling> {
    let lengths = if cumulative { 0..=len } else { len..=len };
    let mut signatures = Vec::with_capacity(g.node_count());
    for v in 0..g.node_count() {
        let mut sig: Vec<Vec<LabelId>> = Vec::new();
        for l in lengths.clone() {
            sig.extend(walks::label_sequences(g, v, l, budget)?);
        }
        sig.sort_unstable();
        signatures.push(sig);
    }
    Ok(Labeling::from_values(signatures))
}

/// Depth-limited unfolding of the neighborhood of a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnfoldingTree {
    pub node: usize,
    pub label: LabelId,
    pub children: Vec<UnfoldingTree>,
}

impl UnfoldingTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(UnfoldingTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(UnfoldingTree::leaf_count).sum()
        }
    }
}

pub fn unfolding_tree(
    g: &LabeledGraph,
    root: usize,
    depth: usize,
    budget: &mut Budget,
) -> Result<UnfoldingTree> {
    budget.charge(1)?;
    let children = if depth == 0 {
        Vec::new()
    } else {
        g.neighbors(root)
            .iter()
            .map(|&w| unfolding_tree(g, w, depth - 1, budget))
            .collect::<Result<_>>()?
    };
    Ok(UnfoldingTree {
        node: root,
        label: g.label(root),
        children,
    })
}

/// Sorted multiset of label sequences along all root-to-leaf paths.
pub fn tree_root_to_leaf_sequences(t: &UnfoldingTree) -> Vec<Vec<LabelId>> {
    fn rec(t: &UnfoldingTree, prefix: &mut Vec<LabelId>, out: &mut Vec<Vec<LabelId>>) {
        prefix.push(t.label);
        if t.children.is_empty() {
            out.push(prefix.clone());
        }
        for c in &t.children {
            rec(c, prefix, out);
        }
        prefix.pop();
    }
    let mut out = Vec::new();
    rec(t, &mut Vec::new(), &mut out);
    out.sort_unstable();
    out
}
