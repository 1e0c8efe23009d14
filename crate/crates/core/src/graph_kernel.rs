//! Graph kernels and Gram matrices.
//!
//! * `NCW` / `NCWWL`: the node-centric ℓ-walk kernel
//!   `Σ_{i=0}^{ℓ} Σ_{u ∈ G} Σ_{v ∈ H} k̂⁺_i(u, v; α) · k_i(u, v)^β`,
//!   without or with WL re-encoding of the node kernel.
//! * `RW`: the ℓ-step random walk kernel `Σ_i λ_i · #common walks of length i`.
//! * `WL`: the Weisfeiler-Leman subtree kernel.
//! * `VL` / `EL`: dot products of node-label and edge-label histograms.
//!
//! Node pairs with different labels are not nodes of the product graph and
//! contribute nothing, for any `β` (including `β = 0`). For label-matched
//! pairs with zero walks at some level, `0^0 = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, GraphCollection, LabelId, LabeledGraph};
use crate::node_kernel::{run_walk_kernel, Alpha, Diagonals, NodeKernelParams};
use crate::product::{count_walks, direct_product, product_node_count, SelfProduct};
use crate::refine::wl_shared_colors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Ncw,
    NcwWl,
    Rw,
    Wl,
    Vl,
    El,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Ncw => "ncw",
            KernelKind::NcwWl => "ncwwl",
            KernelKind::Rw => "rw",
            KernelKind::Wl => "wl",
            KernelKind::Vl => "vl",
            KernelKind::El => "el",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ncw" => KernelKind::Ncw,
            "ncwwl" => KernelKind::NcwWl,
            "rw" => KernelKind::Rw,
            "wl" => KernelKind::Wl,
            "vl" => KernelKind::Vl,
            "el" => KernelKind::El,
            other => return Err(Error::contract(format!("unknown kernel {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphKernelSpec {
    pub kind: KernelKind,
    /// Walk length or number of WL iterations.
    pub len: usize,
    pub alpha: Alpha,
    pub beta: f64,
    /// Per-length weights for `RW`; length `len + 1`.
    pub lambda: Vec<f64>,
}

impl GraphKernelSpec {
    pub fn ncw(len: usize, alpha: Alpha, beta: f64) -> Self {
        GraphKernelSpec {
            kind: KernelKind::Ncw,
            len,
            alpha,
            beta,
            lambda: Vec::new(),
        }
    }

    pub fn ncw_wl(len: usize, alpha: Alpha, beta: f64) -> Self {
        GraphKernelSpec {
            kind: KernelKind::NcwWl,
            ..Self::ncw(len, alpha, beta)
        }
    }

    /// ℓ-step random walk kernel with unit weights.
    pub fn rw(len: usize) -> Self {
        Self::rw_weighted(vec![1.0; len + 1])
    }

    /// ℓ-step random walk kernel with `ℓ = lambda.len() - 1`.
    pub fn rw_weighted(lambda: Vec<f64>) -> Self {
        GraphKernelSpec {
            kind: KernelKind::Rw,
            len: lambda.len().saturating_sub(1),
            alpha: Alpha::Finite(0.0),
            beta: 1.0,
            lambda,
        }
    }

    pub fn wl(len: usize) -> Self {
        GraphKernelSpec {
            kind: KernelKind::Wl,
            ..Self::ncw(len, Alpha::Finite(0.0), 0.0)
        }
    }

    pub fn vl() -> Self {
        GraphKernelSpec {
            kind: KernelKind::Vl,
            ..Self::ncw(0, Alpha::Finite(0.0), 0.0)
        }
    }

    pub fn el() -> Self {
        GraphKernelSpec {
            kind: KernelKind::El,
            ..Self::vl()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            KernelKind::Ncw | KernelKind::NcwWl => {
                self.node_params().validate()?;
                if !(self.beta >= 0.0 && self.beta.is_finite()) {
                    return Err(Error::contract(format!(
                        "beta must be a nonnegative number, got {}",
                        self.beta
                    )));
                }
            }
            KernelKind::Rw => {
                if self.lambda.len() != self.len + 1 {
                    return Err(Error::contract(format!(
                        "{} weights given for walk length {}",
                        self.lambda.len(),
                        self.len
                    )));
                }
                if self.lambda.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
                    return Err(Error::contract("random walk weights must be nonnegative"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn node_params(&self) -> NodeKernelParams {
        NodeKernelParams {
            len: self.len,
            alpha: self.alpha,
            wl_mode: self.kind == KernelKind::NcwWl,
        }
    }
}

/// `k^β` with `0^0 = 1`.
#[inline]
fn walk_power(k: f64, beta: f64) -> f64 {
    if beta == 0.0 {
        1.0
    } else if beta == 1.0 {
        k
    } else {
        k.powf(beta)
    }
}

/// Per-graph self-similarities reused by every pair involving the graph.
#[derive(Clone, Debug)]
pub(crate) struct SelfSimilarity {
    /// `k⁺_i(u, u)` per iteration and node.
    diag: Vec<Vec<f64>>,
    /// The kernel value of the graph with itself.
    value: f64,
}

pub(crate) fn self_similarity(g: &LabeledGraph, spec: &GraphKernelSpec) -> SelfSimilarity {
    let product = SelfProduct::new(g);
    let slots: Vec<usize> = (0..g.node_count())
        .map(|u| product.slot(u, u).expect("diagonal pairs are label-matched"))
        .collect();
    let mut value = 0.0;
    let diag = run_walk_kernel(
        &product,
        &product.pairs,
        &spec.node_params(),
        Diagonals::Own(&slots),
        |_, k, k_hat| {
            value += k
                .iter()
                .zip(k_hat)
                .enumerate()
                .map(|(p, (&k, &kh))| product.multiplicity(p) * kh * walk_power(k, spec.beta))
                .sum::<f64>();
        },
    );
    SelfSimilarity { diag, value }
}

fn ncw_cross(
    g: &LabeledGraph,
    h: &LabeledGraph,
    sg: &SelfSimilarity,
    sh: &SelfSimilarity,
    spec: &GraphKernelSpec,
) -> f64 {
    let product = direct_product(g, h);
    let mut total = 0.0;
    run_walk_kernel(
        &product,
        product.raw_pairs(),
        &spec.node_params(),
        Diagonals::Cached {
            left: &sg.diag,
            right: &sh.diag,
        },
        |_, k, k_hat| {
            total += k
                .iter()
                .zip(k_hat)
                .map(|(&k, &kh)| kh * walk_power(k, spec.beta))
                .sum::<f64>();
        },
    );
    total
}

fn require_kind(spec: &GraphKernelSpec, kinds: &[KernelKind]) -> Result<()> {
    spec.validate()?;
    if kinds.contains(&spec.kind) {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "kernel {} used where {:?} is required",
            spec.kind, kinds
        )))
    }
}

/// Node-centric ℓ-walk graph kernel (`NCW`, or `NCWWL` with re-encoding).
///
/// Runs the node-pair iteration on `G × H` and takes the self-similarities
/// from separate runs on `G × G` and `H × H`.
pub fn ncw_kernel(g: &LabeledGraph, h: &LabeledGraph, spec: &GraphKernelSpec) -> Result<f64> {
    require_kind(spec, &[KernelKind::Ncw, KernelKind::NcwWl])?;
    let sg = self_similarity(g, spec);
    let sh = self_similarity(h, spec);
    Ok(ncw_cross(g, h, &sg, &sh, spec))
}

/// ℓ-step random walk kernel `Σ_k λ_k Σ_p (A_×^k 1)_p`.
pub fn rw_kernel(g: &LabeledGraph, h: &LabeledGraph, spec: &GraphKernelSpec) -> Result<f64> {
    require_kind(spec, &[KernelKind::Rw])?;
    Ok(rw_value(g, h, &spec.lambda))
}

fn rw_value(g: &LabeledGraph, h: &LabeledGraph, lambda: &[f64]) -> f64 {
    let product = direct_product(g, h);
    let counts = count_walks(&product, lambda.len().saturating_sub(1));
    counts.sums.iter().zip(lambda).map(|(s, l)| s * l).sum()
}

fn histogram<T: Ord + Copy>(items: impl IntoIterator<Item = T>) -> BTreeMap<T, f64> {
    let mut h = BTreeMap::new();
    for x in items {
        *h.entry(x).or_insert(0.0) += 1.0;
    }
    h
}

fn dot<T: Ord>(a: &BTreeMap<T, f64>, b: &BTreeMap<T, f64>) -> f64 {
    a.iter()
        .filter_map(|(k, x)| b.get(k).map(|y| x * y))
        .sum()
}

/// Weisfeiler-Leman subtree kernel over iterations `0..=len`.
///
/// Refinement runs on the disjoint union so both graphs share one color
/// dictionary.
pub fn wl_subtree_kernel(g: &LabeledGraph, h: &LabeledGraph, len: usize) -> f64 {
    let (union, offset) = disjoint_union(g, h);
    let colors = wl_shared_colors(std::slice::from_ref(&union), len);
    colors
        .iter()
        .map(|per_graph| {
            let (cg, ch) = per_graph[0].split_at(offset);
            dot(&histogram(cg.iter().copied()), &histogram(ch.iter().copied()))
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HistogramMode {
    Node,
    Edge,
}

fn edge_label_pairs(g: &LabeledGraph) -> impl Iterator<Item = (LabelId, LabelId)> + '_ {
    g.edges().iter().map(|&(u, v)| {
        let (a, b) = (g.label(u), g.label(v));
        (a.min(b), a.max(b))
    })
}

/// Dot product of node-label (`VL`) or edge-label (`EL`) histograms.
pub fn label_histogram_kernel(g: &LabeledGraph, h: &LabeledGraph, mode: HistogramMode) -> f64 {
    match mode {
        HistogramMode::Node => dot(
            &histogram(g.labels().iter().copied()),
            &histogram(h.labels().iter().copied()),
        ),
        HistogramMode::Edge => dot(&histogram(edge_label_pairs(g)), &histogram(edge_label_pairs(h))),
    }
}

/// Walk-count profile of a uniformly labeled graph: distinct rows of
/// `[1, A1, ..., A^ℓ 1]` with their multiplicities.
#[derive(Clone, Debug)]
pub(crate) struct UnlabeledProfile {
    label: Option<LabelId>,
    rows: Vec<(Vec<f64>, f64)>,
}

impl UnlabeledProfile {
    pub fn new(g: &LabeledGraph, len: usize) -> Result<Self> {
        if !g.is_uniformly_labeled() {
            return Err(Error::contract(
                "the unlabeled fast path needs uniformly labeled graphs",
            ));
        }
        let counts = g.walk_counts::<f64>(len);
        let mut grouped: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
        for u in 0..g.node_count() {
            let row: Vec<u64> = counts.iter().map(|c| c[u].to_bits()).collect();
            *grouped.entry(row).or_insert(0.0) += 1.0;
        }
        let rows = grouped
            .into_iter()
            .map(|(bits, m)| (bits.into_iter().map(f64::from_bits).collect(), m))
            .collect();
        Ok(UnlabeledProfile {
            label: g.labels().first().copied(),
            rows,
        })
    }

    /// Kernel value against another profile. For unlabeled graphs
    /// `k_i(u, v) = c_i(u) c_i(v)` and the `k⁺_i` distance is
    /// `Σ_{j <= i} (c_j(u) - c_j(v))²`.
    pub fn kernel(&self, other: &UnlabeledProfile, spec: &GraphKernelSpec) -> f64 {
        if self.label.is_none() || self.label != other.label {
            return 0.0;
        }
        let mut total = 0.0;
        for (r, mr) in &self.rows {
            for (s, ms) in &other.rows {
                let mut distance = 0.0;
                let mut pair = 0.0;
                for i in 0..=spec.len {
                    let d = r[i] - s[i];
                    distance += d * d;
                    pair += spec.alpha.gaussian(distance, 0.0) * walk_power(r[i] * s[i], spec.beta);
                }
                total += mr * ms * pair;
            }
        }
        total
    }
}

/// `NCW` for uniformly labeled graphs, computed from per-graph walk counts
/// without building a product graph.
pub fn ncw_unlabeled_fast(g: &LabeledGraph, h: &LabeledGraph, spec: &GraphKernelSpec) -> Result<f64> {
    require_kind(spec, &[KernelKind::Ncw])?;
    let pg = UnlabeledProfile::new(g, spec.len)?;
    let ph = UnlabeledProfile::new(h, spec.len)?;
    Ok(pg.kernel(&ph, spec))
}

/// Evaluates any kernel kind on one pair of graphs.
pub fn graph_kernel(g: &LabeledGraph, h: &LabeledGraph, spec: &GraphKernelSpec) -> Result<f64> {
    spec.validate()?;
    Ok(match spec.kind {
        KernelKind::Ncw | KernelKind::NcwWl => ncw_kernel(g, h, spec)?,
        KernelKind::Rw => rw_value(g, h, &spec.lambda),
        KernelKind::Wl => wl_subtree_kernel(g, h, spec.len),
        KernelKind::Vl => label_histogram_kernel(g, h, HistogramMode::Node),
        KernelKind::El => label_histogram_kernel(g, h, HistogramMode::Edge),
    })
}

/// Symmetric matrix of kernel values over a collection.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub values: Array2<f64>,
    pub spec: GraphKernelSpec,
}

impl GramMatrix {
    pub fn new(values: Array2<f64>, spec: GraphKernelSpec) -> Result<Self> {
        if values.nrows() != values.ncols() {
            return Err(Error::contract("a Gram matrix must be square"));
        }
        Ok(GramMatrix { values, spec })
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// Symmetric, nonnegative diagonal, and no 2×2 principal minor below
    /// `-1e-9` (relative to the diagonal scale).
    pub fn passes_sanity_probe(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            let kii = self.get(i, i);
            if kii < 0.0 {
                return false;
            }
            for j in 0..i {
                let kij = self.get(i, j);
                if kij != self.get(j, i) {
                    return false;
                }
                let kjj = self.get(j, j);
                let minor = kii * kjj - kij * kij;
                if minor < -1e-9 * (kii * kjj).max(1.0) {
                    return false;
                }
            }
        }
        true
    }

    /// Dense CSV: a header row of graph indices, then one row per graph.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.len();
        let header: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in self.values.rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Precomputed-kernel text: `<class> 0:<row> 1:<K_i1> 2:<K_i2> ...` with
    /// 1-based row numbers. Missing class labels are written as 0.
    pub fn write_precomputed<W: Write>(&self, mut out: W, classes: Option<&[i64]>) -> io::Result<()> {
        for (i, row) in self.values.rows().into_iter().enumerate() {
            let class = classes.map_or(0, |c| c[i]);
            write!(out, "{class} 0:{}", i + 1)?;
            for (j, x) in row.iter().enumerate() {
                write!(out, " {}:{}", j + 1, x)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GramOptions {
    /// Largest product graph (in nodes) that may be built for one pair.
    pub max_product_nodes: usize,
    /// Use the walk-count shortcut for `NCW` when the whole collection is
    /// uniformly labeled.
    pub unlabeled_fast_path: bool,
}

impl Default for GramOptions {
    fn default() -> Self {
        GramOptions {
            max_product_nodes: 4_000_000,
            unlabeled_fast_path: true,
        }
    }
}

fn check_product_budget(c: &GraphCollection, opts: &GramOptions) -> Result<()> {
    for (i, g) in c.graphs.iter().enumerate() {
        for (j, h) in c.graphs.iter().enumerate().skip(i) {
            let nodes = product_node_count(g, h);
            if nodes > opts.max_product_nodes {
                return Err(Error::ProductTooLarge {
                    left: i,
                    right: j,
                    nodes,
                    budget: opts.max_product_nodes,
                });
            }
        }
    }
    Ok(())
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn fill_symmetric(n: usize, pairs: &[(usize, usize)], values: &[f64]) -> Array2<f64> {
    let mut m = Array2::zeros((n, n));
    for (&(i, j), &v) in pairs.iter().zip(values) {
        m[[i, j]] = v;
        m[[j, i]] = v;
    }
    m
}

fn histogram_gram<T: Ord + Sync + Send>(hists: &[BTreeMap<T, f64>]) -> Array2<f64> {
    let n = hists.len();
    let pairs = upper_pairs(n);
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| dot(&hists[i], &hists[j]))
        .collect();
    fill_symmetric(n, &pairs, &values)
}

/// Gram matrix of `spec` over `c`, evaluated in parallel over graph pairs.
///
/// For `NCW`/`NCWWL` the per-graph self-similarities are computed once up
/// front and shared by all pairs.
pub fn gram_matrix(c: &GraphCollection, spec: &GraphKernelSpec, opts: &GramOptions) -> Result<GramMatrix> {
    spec.validate()?;
    let n = c.len();
    let graphs = &c.graphs;
    let values = match spec.kind {
        KernelKind::Vl => {
            let hists: Vec<_> = graphs
                .iter()
                .map(|g| histogram(g.labels().iter().copied()))
                .collect();
            histogram_gram(&hists)
        }
        KernelKind::El => {
            let hists: Vec<_> = graphs.iter().map(|g| histogram(edge_label_pairs(g))).collect();
            histogram_gram(&hists)
        }
        KernelKind::Wl => {
            let colors = wl_shared_colors(graphs, spec.len);
            let mut total = Array2::zeros((n, n));
            for level in &colors {
                let hists: Vec<_> = level.iter().map(|c| histogram(c.iter().copied())).collect();
                total += &histogram_gram(&hists);
            }
            total
        }
        KernelKind::Rw => {
            check_product_budget(c, opts)?;
            let pairs = upper_pairs(n);
            let values: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| rw_value(&graphs[i], &graphs[j], &spec.lambda))
                .collect();
            fill_symmetric(n, &pairs, &values)
        }
        KernelKind::Ncw if opts.unlabeled_fast_path && c.is_uniformly_labeled() => {
            let profiles = graphs
                .iter()
                .map(|g| UnlabeledProfile::new(g, spec.len))
                .collect::<Result<Vec<_>>>()?;
            let pairs = upper_pairs(n);
            let values: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| profiles[i].kernel(&profiles[j], spec))
                .collect();
            fill_symmetric(n, &pairs, &values)
        }
        KernelKind::Ncw | KernelKind::NcwWl => {
            check_product_budget(c, opts)?;
            let selfs: Vec<SelfSimilarity> =
                graphs.par_iter().map(|g| self_similarity(g, spec)).collect();
            let pairs: Vec<(usize, usize)> = upper_pairs(n);
            let values: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| {
                    if i == j {
                        selfs[i].value
                    } else {
                        ncw_cross(&graphs[i], &graphs[j], &selfs[i], &selfs[j], spec)
                    }
                })
                .collect();
            fill_symmetric(n, &pairs, &values)
        }
    };
    GramMatrix::new(values, spec.clone())
}
