//! Undirected node-labeled graphs and collections of them.
//!
//! Graphs are stored as sorted adjacency lists over dense `0..n` node
//! indices. Labels are dense [`LabelId`]s; a [`LabelDictionary`] maps raw
//! dataset labels onto them so that equal raw labels in different graphs of a
//! collection compare equal.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Interned node label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl From<u32> for LabelId {
    fn from(v: u32) -> Self {
        LabelId(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    adjacency: Vec<Vec<usize>>,
    labels: Vec<LabelId>,
    edges: Vec<(usize, usize)>,
}

impl LabeledGraph {
    /// Builds a graph from node labels and an edge list.
    ///
    /// Edges are unordered: `(u, v)` and `(v, u)` denote the same edge and
    /// duplicates are dropped. Self-loops are kept (once).
    pub fn new<I>(labels: Vec<LabelId>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Structure(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            if u != v {
                adjacency[v].push(u);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(LabeledGraph {
            adjacency,
            labels,
            edges,
        })
    }

    /// Graph with every node carrying `LabelId(0)`.
    pub fn unlabeled<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(vec![LabelId(0); node_count], edges)
    }

    pub fn empty() -> Self {
        LabeledGraph {
            adjacency: Vec::new(),
            labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Unordered edges `(u, v)` with `u <= v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn label(&self, u: usize) -> LabelId {
        self.labels[u]
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.labels
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Set of labels occurring in the graph.
    pub fn alphabet(&self) -> BTreeSet<LabelId> {
        self.labels.iter().copied().collect()
    }

    /// True when all nodes share one label (vacuously for the empty graph).
    pub fn is_uniformly_labeled(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] == w[1])
    }

    /// Same structure, new labels.
    pub fn with_labels(&self, labels: Vec<LabelId>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::contract(format!(
                "{} labels given for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        Ok(LabeledGraph {
            adjacency: self.adjacency.clone(),
            labels,
            edges: self.edges.clone(),
        })
    }

    /// Computes `A x` by walking the adjacency lists.
    pub fn adjacency_matvec<T>(&self, x: &[T]) -> Result<Vec<T>>
    where
        T: Copy + Default + AddAssign,
    {
        if x.len() != self.node_count() {
            return Err(Error::contract(format!(
                "vector of length {} for a graph with {} nodes",
                x.len(),
                self.node_count()
            )));
        }
        Ok(self
            .adjacency
            .iter()
            .map(|nbrs| {
                let mut acc = T::default();
                for &v in nbrs {
                    acc += x[v];
                }
                acc
            })
            .collect())
    }

    /// Rows of `[1, A1, ..., A^len 1]`, i.e. walk counts per node and length.
    pub fn walk_counts<T>(&self, len: usize) -> Vec<Vec<T>>
    where
        T: Copy + Default + AddAssign + Add<Output = T> + From<u8>,
    {
        let mut out = Vec::with_capacity(len + 1);
        out.push(vec![T::from(1u8); self.node_count()]);
        for k in 1..=len {
            let next = self
                .adjacency_matvec(&out[k - 1])
                .expect("dimension is node_count by construction");
            out.push(next);
        }
        out
    }
}

/// Disjoint union; returns the union and the index offset of `h`'s nodes.
pub fn disjoint_union(g: &LabeledGraph, h: &LabeledGraph) -> (LabeledGraph, usize) {
    let offset = g.node_count();
    let mut labels = g.labels.clone();
    labels.extend_from_slice(&h.labels);
    let edges = g
        .edges
        .iter()
        .copied()
        .chain(h.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
    let union = LabeledGraph::new(labels, edges).expect("edges of both parts are in range");
    (union, offset)
}

/// Maps raw dataset labels to dense [`LabelId`]s.
#[derive(Clone, Debug, Default)]
pub struct LabelDictionary {
    ids: HashMap<i64, LabelId>,
    raw: Vec<i64>,
}

impl LabelDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, raw: i64) -> LabelId {
        if let Some(&id) = self.ids.get(&raw) {
            return id;
        }
        let id = LabelId(self.raw.len() as u32);
        self.ids.insert(raw, id);
        self.raw.push(raw);
        id
    }

    pub fn get(&self, raw: i64) -> Option<LabelId> {
        self.ids.get(&raw).copied()
    }

    pub fn raw(&self, id: LabelId) -> Option<i64> {
        self.raw.get(id.0 as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// Ordered list of graphs sharing one label dictionary.
#[derive(Clone, Debug, Default)]
pub struct GraphCollection {
    pub graphs: Vec<LabeledGraph>,
    pub class_labels: Option<Vec<i64>>,
    pub names: Option<Vec<String>>,
    pub dictionary: LabelDictionary,
}

impl GraphCollection {
    pub fn new(graphs: Vec<LabeledGraph>) -> Self {
        GraphCollection {
            graphs,
            ..Default::default()
        }
    }

    pub fn with_class_labels(mut self, class_labels: Vec<i64>) -> Result<Self> {
        if class_labels.len() != self.graphs.len() {
            return Err(Error::Structure(format!(
                "{} class labels for {} graphs",
                class_labels.len(),
                self.graphs.len()
            )));
        }
        self.class_labels = Some(class_labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Sub-collection with the graphs at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> GraphCollection {
        GraphCollection {
            graphs: indices.iter().map(|&i| self.graphs[i].clone()).collect(),
            class_labels: self
                .class_labels
                .as_ref()
                .map(|c| indices.iter().map(|&i| c[i]).collect()),
            names: self
                .names
                .as_ref()
                .map(|n| indices.iter().map(|&i| n[i].clone()).collect()),
            dictionary: self.dictionary.clone(),
        }
    }

    /// True when every node of every graph carries the same label.
    pub fn is_uniformly_labeled(&self) -> bool {
        let mut seen = None;
        for g in &self.graphs {
            for &l in g.labels() {
                match seen {
                    None => seen = Some(l),
                    Some(s) if s != l => return false,
                    _ => {}
                }
            }
        }
        true
    }
}
