//! De Bruijn digraphs `B(n,k)` and their simplified undirected graphs `S(n,k)`.
//!
//! Vertices are the length-`n` words over `{0, .., k-1}`, written as digit
//! strings, and indexed by their base-`k` value (so index order is
//! lexicographic order). Every `(n+1)`-word `x_1..x_{n+1}` yields the arc
//! `x_1..x_n -> x_2..x_{n+1}` and labels the corresponding simplified edge.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::graph::{dot_id, LabeledGraph, VertexId};

/// Default cap on `k^n`.
pub const DEFAULT_VERTEX_LIMIT: usize = 4096;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DebruijnError {
    #[error("word length must be at least 1")]
    ZeroLength,
    #[error("alphabet size must be between 2 and 10, got {0}")]
    AlphabetSize(usize),
    #[error("{k}^{n} vertices exceeds the limit of {limit}")]
    SizeLimit { n: usize, k: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeBruijnDigraph {
    n: usize,
    k: usize,
    labels: Vec<String>,
    /// One arc per `(n+1)`-word, in increasing word order; loops included.
    arcs: Vec<(VertexId, VertexId)>,
}

impl DeBruijnDigraph {
    pub fn new(n: usize, k: usize) -> Result<Self, DebruijnError> {
        Self::with_limit(n, k, DEFAULT_VERTEX_LIMIT)
    }

    pub fn with_limit(n: usize, k: usize, limit: usize) -> Result<Self, DebruijnError> {
        if n == 0 {
            return Err(DebruijnError::ZeroLength);
        }
        if !(2..=10).contains(&k) {
            return Err(DebruijnError::AlphabetSize(k));
        }
        let size = k
            .checked_pow(n as u32)
            .filter(|&s| s <= limit)
            .ok_or(DebruijnError::SizeLimit { n, k, limit })?;
        let labels = (0..size).map(|x| word(x, n, k)).collect();
        let arcs = (0..size * k)
            .map(|w| (VertexId::new(w / k), VertexId::new(w % size)))
            .collect();
        Ok(DeBruijnDigraph { n, k, labels, arcs })
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    /// The `(n+1)`-word carried by arc number `i`.
    pub fn arc_label(&self, i: usize) -> String {
        word(i, self.n + 1, self.k)
    }

    pub fn loop_count(&self) -> usize {
        self.arcs.iter().filter(|(u, v)| u == v).count()
    }

    /// DOT `digraph` with each arc labeled by its `(n+1)`-word.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph B {\n");
        for l in &self.labels {
            let _ = writeln!(out, "  {} [label={}];", dot_id(l), dot_id(l));
        }
        for (i, &(u, v)) in self.arcs.iter().enumerate() {
            let (a, b) = (&self.labels[u.index()], &self.labels[v.index()]);
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                dot_id(a),
                dot_id(b),
                dot_id(&self.arc_label(i))
            );
        }
        out.push_str("}\n");
        out
    }

    /// Drops loops and orientations and merges parallel edges.
    pub fn simplify(&self) -> SimplifiedDeBruijnGraph {
        let mut merged: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
        for (i, &(u, v)) in self.arcs.iter().enumerate() {
            if u == v {
                continue;
            }
            let key = (u.index().min(v.index()), u.index().max(v.index()));
            merged.entry(key).or_default().push(self.arc_label(i));
        }
        let pairs: Vec<_> = merged.keys().copied().collect();
        let graph = LabeledGraph::from_indices(self.labels.clone(), &pairs)
            .expect("de Bruijn labels are distinct and loops were removed");
        // BTreeMap order equals the graph's (min, max) edge order.
        let edge_labels = merged
            .into_values()
            .map(|mut ls| {
                ls.sort();
                ls
            })
            .collect();
        SimplifiedDeBruijnGraph {
            n: self.n,
            k: self.k,
            graph,
            edge_labels,
        }
    }
}

/// `S(n,k)`: the underlying simple graph plus the words labeling each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedDeBruijnGraph {
    n: usize,
    k: usize,
    graph: LabeledGraph,
    edge_labels: Vec<Vec<String>>,
}

impl SimplifiedDeBruijnGraph {
    pub fn new(n: usize, k: usize) -> Result<Self, DebruijnError> {
        Ok(DeBruijnDigraph::new(n, k)?.simplify())
    }

    pub fn with_limit(n: usize, k: usize, limit: usize) -> Result<Self, DebruijnError> {
        Ok(DeBruijnDigraph::with_limit(n, k, limit)?.simplify())
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn into_graph(self) -> LabeledGraph {
        self.graph
    }

    /// Sorted labels of edge `i` (one or two words).
    pub fn edge_labels(&self, i: usize) -> &[String] {
        &self.edge_labels[i]
    }

    /// Lexicographically smallest label of edge `i`.
    pub fn canonical_edge_label(&self, i: usize) -> &str {
        &self.edge_labels[i][0]
    }

    pub fn to_dot(&self) -> String {
        self.graph
            .to_dot_with(|i| Some(self.canonical_edge_label(i).to_owned()))
    }
}

fn word(mut value: usize, len: usize, k: usize) -> String {
    let mut digits = vec![b'0'; len];
    for d in digits.iter_mut().rev() {
        *d = b'0' + (value % k) as u8;
        value /= k;
    }
    String::from_utf8(digits).expect("ascii digits")
}
