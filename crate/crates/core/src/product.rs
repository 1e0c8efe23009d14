//! Direct product graphs and walk counting on them.
//!
//! The product `G × H` has a node `(u, v)` for every label-matched node pair
//! and an edge between `(u, u')` and `(v, v')` whenever `uv` is an edge of `G`
//! and `u'v'` an edge of `H`. Walks in the product correspond one-to-one to
//! pairs of equally labeled walks in the factors, so iterated products with
//! its adjacency matrix count common walks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{LabelId, LabeledGraph};

const ABSENT: u32 = u32::MAX;

/// Largest walk count that is still exactly representable with margin.
pub(crate) const EXACT_LIMIT: f64 = 4_503_599_627_370_496.0; // 2^52

/// Linear operator that drives walk iterations: `w <- A w`, starting from
/// `initial()`.
///
/// The Dirac-labeled [`ProductGraph`] is the standard instance. Other node
/// or edge similarities plug in through [`WeightedProduct`].
pub trait WalkOperator: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64], out: &mut [f64]);

    fn initial(&self) -> Vec<f64> {
        vec![1.0; self.dim()]
    }

    /// Whether all values produced from `initial()` stay integral.
    fn is_integral(&self) -> bool {
        true
    }
}

/// Compressed sparse rows; `targets[offsets[p]..offsets[p + 1]]` are the
/// neighbors of `p`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Csr {
    pub offsets: Vec<usize>,
    pub targets: Vec<u32>,
}

impl Csr {
    fn row(&self, p: usize) -> &[u32] {
        &self.targets[self.offsets[p]..self.offsets[p + 1]]
    }

    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (p, o) in out.iter_mut().enumerate() {
            *o = self.row(p).iter().map(|&q| x[q as usize]).sum();
        }
    }
}

/// H's adjacency lists re-sorted by neighbor label, for label-bucketed
/// lookups.
fn neighbors_by_label(h: &LabeledGraph) -> Vec<Vec<(LabelId, usize)>> {
    (0..h.node_count())
        .map(|v| {
            let mut nbrs: Vec<(LabelId, usize)> =
                h.neighbors(v).iter().map(|&b| (h.label(b), b)).collect();
            nbrs.sort_unstable();
            nbrs
        })
        .collect()
}

fn label_range(sorted: &[(LabelId, usize)], label: LabelId) -> &[(LabelId, usize)] {
    let lo = sorted.partition_point(|&(l, _)| l < label);
    let hi = sorted.partition_point(|&(l, _)| l <= label);
    &sorted[lo..hi]
}

/// Number of label-matched node pairs, i.e. the node count of `g × h`,
/// without building the product.
pub fn product_node_count(g: &LabeledGraph, h: &LabeledGraph) -> usize {
    let mut hist: BTreeMap<LabelId, usize> = BTreeMap::new();
    for &l in h.labels() {
        *hist.entry(l).or_insert(0) += 1;
    }
    g.labels()
        .iter()
        .map(|l| hist.get(l).copied().unwrap_or(0))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGraph {
    pairs: Vec<(u32, u32)>,
    index: Vec<u32>,
    right_count: usize,
    adjacency: Csr,
}

impl ProductGraph {
    pub fn node_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of undirected edges (self-loops counted once).
    pub fn edge_count(&self) -> usize {
        let loops = (0..self.node_count())
            .filter(|&p| self.neighbors(p).contains(&(p as u32)))
            .count();
        (self.adjacency.targets.len() + loops) / 2
    }

    /// The factor nodes `(u, v)` of product node `p`.
    pub fn pair(&self, p: usize) -> (usize, usize) {
        let (u, v) = self.pairs[p];
        (u as usize, v as usize)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn pair_index(&self, u: usize, v: usize) -> Option<usize> {
        if self.right_count == 0 {
            return None;
        }
        let left_count = self.index.len() / self.right_count;
        if u >= left_count || v >= self.right_count {
            return None;
        }
        match self.index[u * self.right_count + v] {
            ABSENT => None,
            p => Some(p as usize),
        }
    }

    pub fn neighbors(&self, p: usize) -> &[u32] {
        self.adjacency.row(p)
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.neighbors(p).binary_search(&(q as u32)).is_ok()
    }

    pub(crate) fn raw_pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

impl WalkOperator for ProductGraph {
    fn dim(&self) -> usize {
        self.node_count()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.adjacency.matvec(x, out)
    }
}

/// Builds `g × h`. Product nodes are ordered lexicographically by `(u, v)`.
pub fn direct_product(g: &LabeledGraph, h: &LabeledGraph) -> ProductGraph {
    let (ng, nh) = (g.node_count(), h.node_count());
    let mut buckets: BTreeMap<LabelId, Vec<usize>> = BTreeMap::new();
    for v in 0..nh {
        buckets.entry(h.label(v)).or_default().push(v);
    }

    let mut index = vec![ABSENT; ng * nh];
    let mut pairs = Vec::new();
    for u in 0..ng {
        if let Some(vs) = buckets.get(&g.label(u)) {
            for &v in vs {
                index[u * nh + v] = pairs.len() as u32;
                pairs.push((u as u32, v as u32));
            }
        }
    }

    let h_nbrs = neighbors_by_label(h);
    let mut offsets = Vec::with_capacity(pairs.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for &(u, v) in &pairs {
        for &a in g.neighbors(u as usize) {
            for &(_, b) in label_range(&h_nbrs[v as usize], g.label(a)) {
                targets.push(index[a * nh + b]);
            }
        }
        offsets.push(targets.len());
    }

    ProductGraph {
        pairs,
        index,
        right_count: nh,
        adjacency: Csr { offsets, targets },
    }
}

/// `G × G` restricted to unordered pairs `u <= v`.
///
/// Walk vectors on `G × G` are symmetric (`w(u,v) = w(v,u)`), so it suffices
/// to store one entry per unordered pair and look up `(a, b)` and `(b, a)` at
/// the same slot.
#[derive(Clone, Debug)]
pub(crate) struct SelfProduct {
    pub pairs: Vec<(u32, u32)>,
    pub index: Vec<u32>,
    pub node_count: usize,
    adjacency: Csr,
}

impl SelfProduct {
    pub fn new(g: &LabeledGraph) -> Self {
        let n = g.node_count();
        let mut index = vec![ABSENT; n * n];
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u..n {
                if g.label(u) == g.label(v) {
                    let p = pairs.len() as u32;
                    index[u * n + v] = p;
                    index[v * n + u] = p;
                    pairs.push((u as u32, v as u32));
                }
            }
        }
        let nbrs = neighbors_by_label(g);
        let mut offsets = Vec::with_capacity(pairs.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &(u, v) in &pairs {
            for &a in g.neighbors(u as usize) {
                for &(_, b) in label_range(&nbrs[v as usize], g.label(a)) {
                    targets.push(index[a * n + b]);
                }
            }
            offsets.push(targets.len());
        }
        SelfProduct {
            pairs,
            index,
            node_count: n,
            adjacency: Csr { offsets, targets },
        }
    }

    pub fn slot(&self, u: usize, v: usize) -> Option<usize> {
        match self.index[u * self.node_count + v] {
            ABSENT => None,
            p => Some(p as usize),
        }
    }

    /// Number of ordered pairs an unordered slot stands for.
    pub fn multiplicity(&self, p: usize) -> f64 {
        let (u, v) = self.pairs[p];
        if u == v {
            1.0
        } else {
            2.0
        }
    }
}

impl WalkOperator for SelfProduct {
    fn dim(&self) -> usize {
        self.pairs.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.adjacency.matvec(x, out)
    }
}

/// A product graph with user-supplied node and edge weights.
///
/// `initial[p]` plays the role of a node kernel on the pair `p` and
/// `edge_weights` (aligned with the product's adjacency lists) the role of an
/// edge kernel. With all weights 1 this is the plain Dirac product.
#[derive(Clone, Debug)]
pub struct WeightedProduct {
    adjacency: Csr,
    weights: Vec<f64>,
    initial: Vec<f64>,
}

impl WeightedProduct {
    pub fn new(p: &ProductGraph, initial: Vec<f64>, edge_weights: Vec<f64>) -> Result<Self> {
        if initial.len() != p.node_count() || edge_weights.len() != p.adjacency.targets.len() {
            return Err(Error::contract(format!(
                "weights ({} node, {} edge) do not match the product ({} nodes, {} adjacency entries)",
                initial.len(),
                edge_weights.len(),
                p.node_count(),
                p.adjacency.targets.len()
            )));
        }
        Ok(WeightedProduct {
            adjacency: p.adjacency.clone(),
            weights: edge_weights,
            initial,
        })
    }

    /// All-ones weights; equivalent to the product itself.
    pub fn dirac(p: &ProductGraph) -> Self {
        WeightedProduct {
            adjacency: p.adjacency.clone(),
            weights: vec![1.0; p.adjacency.targets.len()],
            initial: vec![1.0; p.node_count()],
        }
    }
}

impl WalkOperator for WeightedProduct {
    fn dim(&self) -> usize {
        self.initial.len()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (p, o) in out.iter_mut().enumerate() {
            let range = self.adjacency.offsets[p]..self.adjacency.offsets[p + 1];
            *o = self.adjacency.targets[range.clone()]
                .iter()
                .zip(&self.weights[range])
                .map(|(&q, &w)| w * x[q as usize])
                .sum();
        }
    }

    fn initial(&self) -> Vec<f64> {
        self.initial.clone()
    }

    fn is_integral(&self) -> bool {
        self.initial
            .iter()
            .chain(&self.weights)
            .all(|x| x.fract() == 0.0)
    }
}

/// Walk counts per start node and length.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkCounts {
    /// `levels[k][p]`: number of length-`k` walks starting at `p`.
    pub levels: Vec<Vec<f64>>,
    /// `sums[k] = Σ_p levels[k][p]`.
    pub sums: Vec<f64>,
}

pub fn count_walks<O: WalkOperator + ?Sized>(op: &O, len: usize) -> WalkCounts {
    let mut levels = Vec::with_capacity(len + 1);
    levels.push(op.initial());
    for k in 1..=len {
        let mut next = vec![0.0; op.dim()];
        op.apply(&levels[k - 1], &mut next);
        levels.push(next);
    }
    let sums: Vec<f64> = levels.iter().map(|l| l.iter().sum()).collect();
    if sums.iter().any(|&s| s > EXACT_LIMIT) {
        log::warn!("walk counts exceed 2^52; values are no longer exact integers");
    }
    WalkCounts { levels, sums }
}

/// The three distinct blocks of `(G ∪ H) × (G ∪ H)`; the `H × G` block
/// mirrors `G × H`.
#[derive(Clone, Debug)]
pub struct UnionProductParts {
    pub gg: ProductGraph,
    pub gh: ProductGraph,
    pub hh: ProductGraph,
}

pub fn union_product_parts(g: &LabeledGraph, h: &LabeledGraph) -> UnionProductParts {
    UnionProductParts {
        gg: direct_product(g, g),
        gh: direct_product(g, h),
        hh: direct_product(h, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, path};
    use crate::graph::disjoint_union;

    #[test]
    fn product_of_edges() {
        let p = direct_product(&path(2), &path(2));
        assert_eq!(p.node_count(), 4);
        assert_eq!(p.edge_count(), 2);
        let i = |u, v| p.pair_index(u, v).unwrap();
        assert!(p.has_edge(i(0, 0), i(1, 1)));
        assert!(p.has_edge(i(0, 1), i(1, 0)));
        assert!(!p.has_edge(i(0, 0), i(0, 1)));
    }

    #[test]
    fn label_mismatch_gives_empty_product() {
        let g = path(3);
        let h = path(3).with_labels(vec![LabelId(1); 3]).unwrap();
        let p = direct_product(&g, &h);
        assert!(p.is_empty());
        assert_eq!(count_walks(&p, 3).sums, vec![0.0; 4]);
    }

    #[test]
    fn triangle_squared_is_four_regular() {
        let p = direct_product(&complete(3), &complete(3));
        assert_eq!(p.node_count(), 9);
        assert!((0..9).all(|q| p.neighbors(q).len() == 4));
        assert_eq!(count_walks(&p, 1).sums, vec![9.0, 36.0]);
    }

    #[test]
    fn edge_product_walk_sums() {
        let p = direct_product(&path(2), &path(2));
        assert_eq!(count_walks(&p, 1).sums, vec![4.0, 4.0]);
    }

    #[test]
    fn union_parts_cover_union_product() {
        let (g, h) = (path(2), path(3));
        let parts = union_product_parts(&g, &h);
        assert_eq!(parts.gh.node_count(), 6);
        let (u, _) = disjoint_union(&g, &h);
        let full = direct_product(&u, &u);
        assert_eq!(
            parts.gg.node_count() + 2 * parts.gh.node_count() + parts.hh.node_count(),
            full.node_count()
        );
        assert_eq!(product_node_count(&u, &u), full.node_count());
    }

    #[test]
    fn dirac_weighted_product_matches() {
        let p = direct_product(&complete(4), &path(4));
        let w = WeightedProduct::dirac(&p);
        assert_eq!(count_walks(&p, 4), count_walks(&w, 4));
        assert!(w.is_integral());
    }

    #[test]
    fn weighted_product_rejects_bad_lengths() {
        let p = direct_product(&path(2), &path(2));
        assert!(WeightedProduct::new(&p, vec![1.0; 3], vec![]).is_err());
    }

    #[test]
    fn self_product_matches_full_product() {
        let g = path(4)
            .with_labels(vec![LabelId(0), LabelId(1), LabelId(0), LabelId(0)])
            .unwrap();
        let full = direct_product(&g, &g);
        let sym = SelfProduct::new(&g);
        let fc = count_walks(&full, 5);
        let sc = count_walks(&sym, 5);
        for k in 0..=5 {
            for (p, (u, v)) in full.pairs().enumerate() {
                assert_eq!(fc.levels[k][p], sc.levels[k][sym.slot(u, v).unwrap()]);
            }
            let weighted: f64 = (0..sym.dim())
                .map(|p| sym.multiplicity(p) * sc.levels[k][p])
                .sum();
            assert_eq!(weighted, fc.sums[k]);
        }
    }
}
