//! Simple undirected graphs with string labels over dense vertex indices.
//!
//! Every algorithm in the crate works on [`VertexId`] indices; labels only
//! matter for input and output. Ties are always broken by the smallest index.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index, valid in `[0, n)` for the owning graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    pub fn new(index: usize) -> Self {
        VertexId(u32::try_from(index).expect("vertex index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId::new(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("edge endpoint `{0}` is not a vertex label")]
    UnknownEndpoint(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("vertex index {0} is out of range")]
    UnknownVertex(usize),
    #[error("graph has no vertices")]
    Empty,
    #[error("a wheel needs at least 3 rim vertices, got {0}")]
    WheelTooSmall(usize),
    #[error("coloring has {got} entries but the graph has {expected} vertices")]
    ColoringSize { expected: usize, got: usize },
    #[error("invalid graph JSON: {0}")]
    Json(String),
}

/// Undirected simple graph. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    /// Sorted by `(min, max)`; the position in this list is the edge index.
    edges: Vec<(VertexId, VertexId)>,
    neighbors: Vec<Vec<VertexId>>,
    adjacency: Vec<FixedBitSet>,
}

impl LabeledGraph {
    /// Builds a graph from labels and label pairs. Duplicate edges (in either
    /// orientation) are merged.
    pub fn build<S, E>(labels: &[S], edges: &[(E, E)]) -> Result<Self, GraphError>
    where
        S: AsRef<str>,
        E: AsRef<str>,
    {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), VertexId::new(i)).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *index
                .get(a)
                .ok_or_else(|| GraphError::UnknownEndpoint(a.to_owned()))?;
            let v = *index
                .get(b)
                .ok_or_else(|| GraphError::UnknownEndpoint(b.to_owned()))?;
            pairs.push((u, v));
        }
        Self::from_parts(labels, index, pairs)
    }

    /// Builds a graph from labels and index pairs.
    pub fn from_indices(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), VertexId::new(i)).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::UnknownVertex(w));
                }
            }
            pairs.push((VertexId::new(u), VertexId::new(v)));
        }
        Self::from_parts(labels, index, pairs)
    }

    /// Graph on vertices labeled `"0"`, `"1"`, ... with the given index edges.
    pub fn numbered(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::from_indices((0..n).map(|i| i.to_string()).collect(), edges)
    }

    fn from_parts(
        labels: Vec<String>,
        index: HashMap<String, VertexId>,
        pairs: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut set = BTreeSet::new();
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(labels[u.index()].clone()));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); n];
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in &edges {
            neighbors[u.index()].push(v);
            neighbors[v.index()].push(u);
            adjacency[u.index()].insert(v.index());
            adjacency[v.index()].insert(u.index());
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Ok(LabeledGraph {
            labels,
            index,
            edges,
            neighbors,
            adjacency,
        })
    }

    /// Wheel on `rim` cycle vertices `c0..c{rim-1}` plus a hub `h` adjacent to all of them.
    pub fn wheel(rim: usize) -> Result<Self, GraphError> {
        if rim < 3 {
            return Err(GraphError::WheelTooSmall(rim));
        }
        let mut labels: Vec<String> = (0..rim).map(|i| format!("c{i}")).collect();
        labels.push("h".to_owned());
        let mut edges: Vec<(usize, usize)> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
        edges.extend((0..rim).map(|i| (i, rim)));
        Self::from_indices(labels, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::numbered(n, &edges).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::numbered(n, &edges).expect("cycle graph is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::numbered(n, &edges).expect("path graph is valid")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId::new)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    /// Edges as `(min, max)` pairs; the slice position is the edge index.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (VertexId, VertexId) {
        self.edges[index]
    }

    /// Index of the edge `{u, v}` in [`Self::edges`], if present.
    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.neighbors[v.index()]
    }

    pub fn neighbor_set(&self, v: VertexId) -> &FixedBitSet {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors[v.index()].len()
    }

    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u.index()].contains(v.index())
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count()
    }

    /// True iff every pair of distinct vertices in `set` is adjacent.
    pub fn is_clique(&self, set: &[VertexId]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && self.adjacent(u, v)))
    }

    /// Subgraph induced by `keep`. Vertices keep their labels and are
    /// reindexed in increasing order of their original index.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<LabeledGraph, GraphError> {
        let mut kept: Vec<VertexId> = keep.to_vec();
        if let Some(bad) = kept.iter().find(|v| !self.contains_vertex(**v)) {
            return Err(GraphError::UnknownVertex(bad.index()));
        }
        kept.sort_unstable();
        kept.dedup();
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        for (i, v) in kept.iter().enumerate() {
            new_index[v.index()] = i;
        }
        let labels = kept.iter().map(|&v| self.label(v).to_owned()).collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|(u, v)| {
                new_index[u.index()] != usize::MAX && new_index[v.index()] != usize::MAX
            })
            .map(|(u, v)| (new_index[u.index()], new_index[v.index()]))
            .collect();
        LabeledGraph::from_indices(labels, &edges)
    }

    /// Vertex of maximum degree, smallest index on ties.
    pub fn max_degree_vertex(&self) -> Result<VertexId, GraphError> {
        self.max_degree_vertex_in(self.vertices())
    }

    pub(crate) fn max_degree_vertex_in(
        &self,
        candidates: impl IntoIterator<Item = VertexId>,
    ) -> Result<VertexId, GraphError> {
        let mut best: Option<VertexId> = None;
        for v in candidates {
            match best {
                Some(b) if self.degree(v) <= self.degree(b) => {}
                _ => best = Some(v),
            }
        }
        best.ok_or(GraphError::Empty)
    }

    pub fn is_proper_coloring(&self, coloring: &ColorAssignment) -> Result<bool, GraphError> {
        if coloring.len() != self.vertex_count() {
            return Err(GraphError::ColoringSize {
                expected: self.vertex_count(),
                got: coloring.len(),
            });
        }
        Ok(self
            .edges
            .iter()
            .all(|&(u, v)| coloring.color(u) != coloring.color(v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![VertexId::new(start)];
            let mut stack = vec![VertexId::new(start)];
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Same graph with vertices permuted: old vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<LabeledGraph, GraphError> {
        let n = self.vertex_count();
        if perm.len() != n {
            return Err(GraphError::UnknownVertex(perm.len()));
        }
        let mut labels = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            if new >= n {
                return Err(GraphError::UnknownVertex(new));
            }
            labels[new] = self.labels[old].clone();
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|(u, v)| (perm[u.index()], perm[v.index()]))
            .collect();
        LabeledGraph::from_indices(labels, &edges)
    }

    pub fn to_json(&self) -> GraphJson {
        let mut labels = self.labels.clone();
        labels.sort();
        let mut edges: Vec<[String; 2]> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.label(u), self.label(v));
                if a <= b {
                    [a.to_owned(), b.to_owned()]
                } else {
                    [b.to_owned(), a.to_owned()]
                }
            })
            .collect();
        edges.sort();
        GraphJson { labels, edges }
    }

    /// Canonical JSON text: labels and edges sorted lexicographically.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("graph JSON serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let parsed: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        parsed.into_graph()
    }

    pub fn to_dot(&self) -> String {
        self.to_dot_with(|_| None)
    }

    /// DOT `graph`, with an optional label per edge index.
    pub fn to_dot_with(&self, edge_label: impl Fn(usize) -> Option<String>) -> String {
        let mut out = String::from("graph G {\n");
        for l in &self.labels {
            let _ = writeln!(out, "  {} [label={}];", dot_id(l), dot_id(l));
        }
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            let _ = write!(
                out,
                "  {} -- {}",
                dot_id(self.label(u)),
                dot_id(self.label(v))
            );
            if let Some(l) = edge_label(i) {
                let _ = write!(out, " [label={}]", dot_id(&l));
            }
            out.push_str(";\n");
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// On-disk graph format: `{"labels": [...], "edges": [[a, b], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub labels: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<LabeledGraph, GraphError> {
        let edges: Vec<(String, String)> = self.edges.into_iter().map(|[a, b]| (a, b)).collect();
        LabeledGraph::build(&self.labels, &edges)
    }
}

/// A color per vertex. 0, 1, 2 are read as Red, Blue, Green where that matters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment(Vec<usize>);

impl ColorAssignment {
    pub fn new(colors: Vec<usize>) -> Self {
        ColorAssignment(colors)
    }

    pub fn color(&self, v: VertexId) -> usize {
        self.0[v.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn color_count(&self) -> usize {
        self.0.iter().copied().collect::<BTreeSet<_>>().len()
    }
}
