//! Walk kernels on node pairs.
//!
//! For nodes `u`, `v` the walk kernel `k_i(u, v)` counts pairs of equally
//! labeled length-`i` walks starting at `u` and `v`; `k⁺_i` sums `k_0..k_i`.
//! Both are read off walk counts in the direct product graph. The generalized
//! node kernel is a Gaussian of the `k⁺_i` kernel distance:
//!
//! ```text
//! k̂⁺_i(u, v) = exp(-α (k⁺_i(u,u) + k⁺_i(v,v) - 2 k⁺_i(u,v)))
//! ```
//!
//! With WL re-encoding enabled, each iteration replaces the walk vector by
//! the node kernel values, which for `α = ∞` turns the computation into
//! Weisfeiler-Leman color refinement.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::product::{SelfProduct, WalkOperator, EXACT_LIMIT};
use crate::refine::Labeling;
use crate::walks::{self, Budget};

/// Bandwidth of the Gaussian node kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    Finite(f64),
    /// The `α → ∞` limit: the exact indicator of zero kernel distance.
    Infinite,
}

impl Alpha {
    fn validate(self) -> Result<()> {
        match self {
            Alpha::Finite(a) if !(a >= 0.0 && a.is_finite()) => {
                Err(Error::contract(format!("alpha must be a nonnegative number, got {a}")))
            }
            _ => Ok(()),
        }
    }

    /// `exp(-α d)`, or `[d <= tol]` for the infinite bandwidth.
    #[inline]
    pub fn gaussian(self, distance: f64, tol: f64) -> f64 {
        match self {
            Alpha::Finite(a) => {
                if a == 0.0 {
                    1.0
                } else {
                    (-a * distance.max(0.0)).exp()
                }
            }
            Alpha::Infinite => {
                if distance.abs() <= tol {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Finite(a) => write!(f, "{a}"),
            Alpha::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Alpha::Infinite);
        }
        let a: f64 = s
            .parse()
            .map_err(|_| Error::contract(format!("invalid alpha {s:?}")))?;
        let alpha = Alpha::Finite(a);
        alpha.validate()?;
        Ok(alpha)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeKernelParams {
    /// Maximum walk length ℓ.
    pub len: usize,
    pub alpha: Alpha,
    /// Replace walk counts by node kernel values after every iteration.
    pub wl_mode: bool,
}

impl NodeKernelParams {
    pub fn new(len: usize, alpha: Alpha) -> Self {
        NodeKernelParams {
            len,
            alpha,
            wl_mode: false,
        }
    }

    pub fn with_wl(mut self) -> Self {
        self.wl_mode = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.alpha.validate()?;
        if self.wl_mode && self.len == 0 {
            return Err(Error::contract("WL re-encoding needs a walk length of at least 1"));
        }
        Ok(())
    }
}

/// Where the self-similarities `k⁺_i(u,u)` and `k⁺_i(v,v)` come from.
pub(crate) enum Diagonals<'a> {
    /// The run is on `G × G`; slot `own[u]` holds the pair `(u, u)`.
    Own(&'a [usize]),
    /// Cached per-iteration self-similarities, `[i][node]`, of the left and
    /// right factor.
    Cached {
        left: &'a [Vec<f64>],
        right: &'a [Vec<f64>],
    },
}

/// Iterates the node-pair walk kernels over a product operator.
///
/// `ends[p]` are the factor nodes of product node `p`. `visit(i, k, k_hat)`
/// sees the raw walk values `K^(i)` and the node kernel `K̂^(i)` for
/// `i = 0..=len`. Returns the per-iteration diagonal `w⁺` when the run owns
/// its diagonal (empty otherwise).
pub(crate) fn run_walk_kernel<O, F>(
    op: &O,
    ends: &[(u32, u32)],
    params: &NodeKernelParams,
    diagonals: Diagonals<'_>,
    mut visit: F,
) -> Vec<Vec<f64>>
where
    O: WalkOperator + ?Sized,
    F: FnMut(usize, &[f64], &[f64]),
{
    let dim = op.dim();
    let exact = op.is_integral() && !(params.wl_mode && matches!(params.alpha, Alpha::Finite(_)));
    let mut w = op.initial();
    let mut w_plus = w.clone();
    let mut next = vec![0.0; dim];
    let mut k_hat = vec![0.0; dim];
    let mut own_diag = Vec::new();

    for i in 0..=params.len {
        if i > 0 {
            op.apply(&w, &mut next);
            std::mem::swap(&mut w, &mut next);
            for (wp, &x) in w_plus.iter_mut().zip(&w) {
                *wp += x;
            }
        }
        let (left, right): (&[f64], &[f64]) = match &diagonals {
            Diagonals::Own(slots) => {
                own_diag.push(slots.iter().map(|&p| w_plus[p]).collect::<Vec<f64>>());
                let d = own_diag.last().unwrap();
                (d, d)
            }
            Diagonals::Cached { left, right } => (&left[i], &right[i]),
        };
        for (p, &(u, v)) in ends.iter().enumerate() {
            let (du, dv) = (left[u as usize], right[v as usize]);
            let distance = du + dv - 2.0 * w_plus[p];
            let tol = if exact { 0.0 } else { 1e-9 * (du + dv) };
            k_hat[p] = params.alpha.gaussian(distance, tol);
        }
        if exact && i > 0 && w_plus.iter().any(|&x| x > EXACT_LIMIT) {
            log::warn!("walk counts exceed 2^52 at iteration {i}; distances may be inexact");
        }
        visit(i, &w, &k_hat);
        if params.wl_mode && i > 0 {
            w.copy_from_slice(&k_hat);
        }
    }
    own_diag
}

/// Node-pair kernels `K^(i)` and `K̂^(i)` of one graph, `i = 0..=len`.
///
/// Stored over unordered label-matched pairs; lookups are symmetric. Pairs
/// with different labels are outside the product graph and read as 0.
#[derive(Clone, Debug)]
pub struct NodePairKernels {
    product: SelfProduct,
    k: Vec<Vec<f64>>,
    k_hat: Vec<Vec<f64>>,
    params: NodeKernelParams,
}

impl NodePairKernels {
    pub fn node_count(&self) -> usize {
        self.product.node_count
    }

    /// Number of recorded iterations (`len + 1`).
    pub fn iterations(&self) -> usize {
        self.k.len()
    }

    pub fn params(&self) -> &NodeKernelParams {
        &self.params
    }

    /// `K^(i)_uv`, the walk value before any re-encoding.
    pub fn k(&self, i: usize, u: usize, v: usize) -> f64 {
        self.product.slot(u, v).map_or(0.0, |p| self.k[i][p])
    }

    /// `K̂^(i)_uv`.
    pub fn k_hat(&self, i: usize, u: usize, v: usize) -> f64 {
        self.product.slot(u, v).map_or(0.0, |p| self.k_hat[i][p])
    }

    /// Whether `(u, v)` is a node of the product graph.
    pub fn is_pair(&self, u: usize, v: usize) -> bool {
        self.product.slot(u, v).is_some()
    }

    /// `(u, v, K^(i)_uv, K̂^(i)_uv)` for all stored pairs with `u <= v`.
    pub fn upper_entries(&self, i: usize) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        self.product
            .pairs
            .iter()
            .enumerate()
            .map(move |(p, &(u, v))| (u as usize, v as usize, self.k[i][p], self.k_hat[i][p]))
    }
}

/// Runs the walk-kernel iteration on `g × g` and records all iterations.
pub fn walk_node_kernels(g: &LabeledGraph, params: &NodeKernelParams) -> Result<NodePairKernels> {
    params.validate()?;
    let product = SelfProduct::new(g);
    let slots: Vec<usize> = (0..g.node_count())
        .map(|u| product.slot(u, u).expect("diagonal pairs are always label-matched"))
        .collect();
    let mut k = Vec::with_capacity(params.len + 1);
    let mut k_hat = Vec::with_capacity(params.len + 1);
    run_walk_kernel(
        &product,
        &product.pairs,
        params,
        Diagonals::Own(&slots),
        |_, w, kh| {
            k.push(w.to_vec());
            k_hat.push(kh.to_vec());
        },
    );
    Ok(NodePairKernels {
        product,
        k,
        k_hat,
        params: *params,
    })
}

/// Groups nodes by `K̂^(i)_uv = 1`.
///
/// Fails when that relation is not transitive, which can only happen with a
/// finite bandwidth.
pub fn node_partition_from_kernels(k: &NodePairKernels, i: usize) -> Result<Labeling> {
    if i >= k.iterations() {
        return Err(Error::contract(format!(
            "iteration {i} requested, {} recorded",
            k.iterations()
        )));
    }
    let n = k.node_count();
    let mut class: Vec<Option<usize>> = vec![None; n];
    let mut reps: Vec<usize> = Vec::new();
    for u in 0..n {
        if class[u].is_some() {
            continue;
        }
        let c = reps.len();
        reps.push(u);
        class[u] = Some(c);
        for v in u + 1..n {
            if k.k_hat(i, u, v) == 1.0 {
                if class[v].is_some() {
                    return Err(non_transitive(i));
                }
                class[v] = Some(c);
            }
        }
    }
    // every class must be a clique of the relation
    for u in 0..n {
        for v in u + 1..n {
            if (class[u] == class[v]) != (k.k_hat(i, u, v) == 1.0) {
                return Err(non_transitive(i));
            }
        }
    }
    Ok(Labeling::from_values(class.into_iter().map(Option::unwrap)))
}

fn non_transitive(i: usize) -> Error {
    Error::contract(format!(
        "K̂^({i}) = 1 is not an equivalence relation; use alpha = inf for exact partitions"
    ))
}

/// `(k_len(u, v), k⁺_len(u, v))` by explicit enumeration of the walks from
/// `u` in `g` and from `v` in `h`, with the Dirac kernel on labels.
pub fn node_kernel_oracle_between(
    g: &LabeledGraph,
    u: usize,
    h: &LabeledGraph,
    v: usize,
    len: usize,
    budget: &mut Budget,
) -> Result<(f64, f64)> {
    let mut cumulative = 0.0;
    let mut last = 0.0;
    for i in 0..=len {
        let from_u = walks::label_sequence_counts(g, u, i, budget)?;
        let from_v: HashMap<_, u64> = walks::label_sequence_counts(h, v, i, budget)?;
        last = from_u
            .iter()
            .map(|(seq, &c)| (c * from_v.get(seq).copied().unwrap_or(0)) as f64)
            .sum();
        cumulative += last;
    }
    Ok((last, cumulative))
}

/// [`node_kernel_oracle_between`] for two nodes of the same graph.
pub fn node_kernel_oracle(
    g: &LabeledGraph,
    u: usize,
    v: usize,
    len: usize,
    budget: &mut Budget,
) -> Result<(f64, f64)> {
    node_kernel_oracle_between(g, u, g, v, len, budget)
}
