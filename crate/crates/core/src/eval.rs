//! Expressiveness evaluation: isomorphism deduplication, completeness ratio
//! and Gram-matrix normalization.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{GraphCollection, LabeledGraph};
use crate::graph_kernel::GramMatrix;
use crate::refine::wl_shared_stable_colors;

/// Default number of backtracking steps per isomorphism test.
pub const DEFAULT_ISOMORPHISM_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsomorphismOutcome {
    /// `mapping[u]` is the image of node `u`.
    Isomorphic(Vec<usize>),
    NotIsomorphic,
    /// The search ran out of budget.
    Undecided,
}

/// Checks that `mapping` is a label- and adjacency-preserving bijection.
pub fn is_isomorphism(g: &LabeledGraph, h: &LabeledGraph, mapping: &[usize]) -> bool {
    let n = g.node_count();
    if h.node_count() != n || mapping.len() != n || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut used = vec![false; n];
    for &v in mapping {
        if v >= n || std::mem::replace(&mut used[v], true) {
            return false;
        }
    }
    (0..n).all(|u| g.label(u) == h.label(mapping[u]))
        && g.edges()
            .iter()
            .all(|&(u, v)| h.has_edge(mapping[u], mapping[v]))
}

/// Exact isomorphism test by backtracking over nodes with equal stable WL
/// colors (computed jointly on both graphs).
pub fn find_isomorphism(g: &LabeledGraph, h: &LabeledGraph, budget: u64) -> IsomorphismOutcome {
    let n = g.node_count();
    if n != h.node_count() || g.edge_count() != h.edge_count() {
        return IsomorphismOutcome::NotIsomorphic;
    }
    let (colors, _) = wl_shared_stable_colors(&[g.clone(), h.clone()]);
    let (cg, ch) = (&colors[0], &colors[1]);
    let mut hist_g = cg.clone();
    let mut hist_h = ch.clone();
    hist_g.sort_unstable();
    hist_h.sort_unstable();
    if hist_g != hist_h {
        return IsomorphismOutcome::NotIsomorphic;
    }

    let mut candidates: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (v, &c) in ch.iter().enumerate() {
        candidates.entry(c).or_default().push(v);
    }

    // order: smallest color class first, then grow along edges so that
    // adjacency constraints prune early
    let class_size = |u: usize| candidates[&cg[u]].len();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| {
                let linked = g.neighbors(u).iter().filter(|&&x| placed[x]).count();
                (usize::from(linked == 0 && !order.is_empty()), class_size(u), usize::MAX - linked, u)
            })
            .expect("an unplaced node remains");
        placed[next] = true;
        order.push(next);
    }

    struct Search<'a> {
        g: &'a LabeledGraph,
        h: &'a LabeledGraph,
        colors: &'a [u32],
        candidates: &'a BTreeMap<u32, Vec<usize>>,
        order: &'a [usize],
        mapping: Vec<usize>,
        used: Vec<bool>,
        steps: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn extend(&mut self, depth: usize) -> Option<bool> {
            if depth == self.order.len() {
                return Some(true);
            }
            let u = self.order[depth];
            for &v in &self.candidates[&self.colors[u]] {
                if self.used[v] {
                    continue;
                }
                self.steps += 1;
                if self.steps > self.budget {
                    return None;
                }
                let consistent = self.g.has_edge(u, u) == self.h.has_edge(v, v)
                    && self.order[..depth].iter().all(|&x| {
                        self.g.has_edge(u, x) == self.h.has_edge(v, self.mapping[x])
                    });
                if !consistent {
                    continue;
                }
                self.mapping[u] = v;
                self.used[v] = true;
                match self.extend(depth + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
                self.used[v] = false;
            }
            Some(false)
        }
    }

    let mut search = Search {
        g,
        h,
        colors: cg,
        candidates: &candidates,
        order: &order,
        mapping: vec![usize::MAX; n],
        used: vec![false; n],
        steps: 0,
        budget,
    };
    match search.extend(0) {
        Some(true) => IsomorphismOutcome::Isomorphic(search.mapping),
        Some(false) => IsomorphismOutcome::NotIsomorphic,
        None => IsomorphismOutcome::Undecided,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismCertificate {
    /// `(representative, duplicate)` indices in the input collection.
    pub pair: (usize, usize),
    pub mapping: Option<Vec<usize>>,
}

impl IsomorphismCertificate {
    pub fn validate(&self, c: &GraphCollection) -> bool {
        match &self.mapping {
            Some(m) => is_isomorphism(&c.graphs[self.pair.0], &c.graphs[self.pair.1], m),
            None => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DedupResult {
    pub collection: GraphCollection,
    /// Input indices of the kept graphs, ascending.
    pub kept: Vec<usize>,
    /// One certificate per dropped graph.
    pub certificates: Vec<IsomorphismCertificate>,
    /// Pairs the search could not decide; both graphs were kept.
    pub undecided: Vec<(usize, usize)>,
}

type BucketKey = (usize, usize, Vec<usize>, Vec<u32>);
/// Kept indices, certificates and undecided pairs of one bucket.
type BucketOutcome = (Vec<usize>, Vec<IsomorphismCertificate>, Vec<(usize, usize)>);

/// Keeps the first graph of every isomorphism class, in input order.
///
/// Graphs are bucketed by node and edge count, degree sequence and stable
/// WL color histogram; only graphs within a bucket are compared exactly.
pub fn dedup_isomorphic(c: &GraphCollection, budget: u64) -> DedupResult {
    let (colors, _) = wl_shared_stable_colors(&c.graphs);
    let mut buckets: BTreeMap<BucketKey, Vec<usize>> = BTreeMap::new();
    for (i, g) in c.graphs.iter().enumerate() {
        let mut degrees: Vec<usize> = (0..g.node_count()).map(|u| g.degree(u)).collect();
        degrees.sort_unstable();
        let mut hist = colors[i].clone();
        hist.sort_unstable();
        buckets
            .entry((g.node_count(), g.edge_count(), degrees, hist))
            .or_default()
            .push(i);
    }

    let per_bucket: Vec<BucketOutcome> = buckets
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|members| {
            let mut reps: Vec<usize> = Vec::new();
            let mut certs = Vec::new();
            let mut undecided = Vec::new();
            for i in members {
                let mut duplicate = false;
                for &r in &reps {
                    match find_isomorphism(&c.graphs[r], &c.graphs[i], budget) {
                        IsomorphismOutcome::Isomorphic(m) => {
                            certs.push(IsomorphismCertificate {
                                pair: (r, i),
                                mapping: Some(m),
                            });
                            duplicate = true;
                            break;
                        }
                        IsomorphismOutcome::Undecided => {
                            log::warn!("isomorphism of graphs {r} and {i} undecided; keeping both");
                            undecided.push((r, i));
                        }
                        IsomorphismOutcome::NotIsomorphic => {}
                    }
                }
                if !duplicate {
                    reps.push(i);
                }
            }
            (reps, certs, undecided)
        })
        .collect();

    let mut kept = Vec::new();
    let mut certificates = Vec::new();
    let mut undecided = Vec::new();
    for (r, cs, u) in per_bucket {
        kept.extend(r);
        certificates.extend(cs);
        undecided.extend(u);
    }
    kept.sort_unstable();
    certificates.sort_by_key(|cert| cert.pair.1);
    undecided.sort_unstable();
    DedupResult {
        collection: c.select(&kept),
        kept,
        certificates,
        undecided,
    }
}

/// Fraction of graphs whose kernel distance to every other graph exceeds the
/// tolerance.
///
/// The default tolerance for a pair is `1e-9 · max(K_ii + K_jj, 1)`.
pub fn completeness_ratio(gm: &GramMatrix, tol: Option<f64>) -> f64 {
    let n = gm.len();
    if n == 0 {
        return 0.0;
    }
    let distinguished = (0..n)
        .filter(|&i| {
            (0..n).filter(|&j| j != i).all(|j| {
                let (kii, kjj) = (gm.get(i, i), gm.get(j, j));
                let d2 = kii + kjj - 2.0 * gm.get(i, j);
                d2 > tol.unwrap_or(1e-9 * (kii + kjj).max(1.0))
            })
        })
        .count();
    distinguished as f64 / n as f64
}

/// Cosine normalization `K_ij / sqrt(K_ii K_jj)`.
pub fn normalize_gram(gm: &GramMatrix) -> Result<GramMatrix> {
    let n = gm.len();
    let diag: Vec<f64> = (0..n).map(|i| gm.get(i, i)).collect();
    if let Some(i) = diag.iter().position(|&d| d <= 0.0) {
        return Err(Error::contract(format!(
            "graph {i} has self-similarity {}; cannot normalize",
            diag[i]
        )));
    }
    let mut values = gm.values.clone();
    for ((i, j), x) in values.indexed_iter_mut() {
        *x = if i == j {
            1.0
        } else {
            *x / (diag[i] * diag[j]).sqrt()
        };
    }
    GramMatrix::new(values, gm.spec.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path};
    use crate::graph::{disjoint_union, LabelId};
    use crate::graph_kernel::GraphKernelSpec;
    use ndarray::{array, Array2};

    fn gram(values: Array2<f64>) -> GramMatrix {
        GramMatrix::new(values, GraphKernelSpec::vl()).unwrap()
    }

    #[test]
    fn relabeled_path_is_a_duplicate() {
        let p = path(3);
        let q = LabeledGraph::unlabeled(3, [(1, 0), (0, 2)]).unwrap();
        let c = GraphCollection::new(vec![p, q, complete(3)]);
        let d = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET);
        assert_eq!(d.kept, vec![0, 2]);
        assert_eq!(d.certificates.len(), 1);
        assert!(d.certificates[0].validate(&c));
    }

    #[test]
    fn different_degree_sequences_survive() {
        let c = GraphCollection::new(vec![path(4), crate::generators::star(3)]);
        assert_eq!(dedup_isomorphic(&c, 0).kept, vec![0, 1]);
    }

    #[test]
    fn hexagon_and_two_triangles_survive() {
        let (two, _) = disjoint_union(&complete(3), &complete(3));
        assert_eq!(
            find_isomorphism(&cycle(6), &two, DEFAULT_ISOMORPHISM_BUDGET),
            IsomorphismOutcome::NotIsomorphic
        );
        let c = GraphCollection::new(vec![cycle(6), two]);
        let d = dedup_isomorphic(&c, DEFAULT_ISOMORPHISM_BUDGET);
        assert_eq!(d.kept, vec![0, 1]);
        assert!(d.undecided.is_empty());
    }

    #[test]
    fn labels_block_isomorphism() {
        let g = path(3);
        let h = path(3)
            .with_labels(vec![LabelId(0), LabelId(1), LabelId(0)])
            .unwrap();
        assert_eq!(find_isomorphism(&g, &h, 1000), IsomorphismOutcome::NotIsomorphic);
    }

    #[test]
    fn exhausted_budget_keeps_both() {
        let c = GraphCollection::new(vec![cycle(8), cycle(8)]);
        let d = dedup_isomorphic(&c, 1);
        assert_eq!(d.kept, vec![0, 1]);
        assert_eq!(d.undecided, vec![(0, 1)]);
    }

    #[test]
    fn ratio_extremes() {
        assert_eq!(completeness_ratio(&gram(Array2::eye(4)), None), 1.0);
        assert_eq!(completeness_ratio(&gram(Array2::from_elem((3, 3), 2.0)), None), 0.0);
        let mixed = array![[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((completeness_ratio(&gram(mixed), None) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn normalization() {
        let n = normalize_gram(&gram(array![[4.0, 2.0], [2.0, 1.0]])).unwrap();
        assert_eq!(n.values, array![[1.0, 1.0], [1.0, 1.0]]);
        let again = normalize_gram(&n).unwrap();
        assert_eq!(again.values, n.values);
        assert!(normalize_gram(&gram(array![[0.0, 0.0], [0.0, 1.0]])).is_err());
    }
}
