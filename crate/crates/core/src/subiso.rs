//! Induced subgraph isomorphism by backtracking, with optional label anchors.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{LabeledGraph, VertexId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SubisoError {
    #[error("anchor `{0}` is not a pattern vertex")]
    UnknownPatternLabel(String),
    #[error("anchor image `{0}` is not a host vertex")]
    UnknownHostLabel(String),
    #[error("host vertex `{0}` is the image of two anchors")]
    DuplicateAnchorImage(String),
    #[error("pattern vertex `{0}` is anchored twice")]
    DuplicateAnchor(String),
}

/// Pattern vertex index to host vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding(Vec<VertexId>);

impl Embedding {
    pub fn image(&self, v: VertexId) -> VertexId {
        self.0[v.index()]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    /// Host vertices in pattern index order.
    pub fn image_vertices(&self) -> Vec<VertexId> {
        self.0.clone()
    }

    pub fn label_map(
        &self,
        pattern: &LabeledGraph,
        host: &LabeledGraph,
    ) -> BTreeMap<String, String> {
        pattern
            .vertices()
            .map(|v| {
                (
                    pattern.label(v).to_owned(),
                    host.label(self.image(v)).to_owned(),
                )
            })
            .collect()
    }

    /// The subgraph of `host` induced on the image, carrying the pattern's labels.
    pub fn image_graph(&self, pattern: &LabeledGraph, host: &LabeledGraph) -> LabeledGraph {
        let n = pattern.vertex_count();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| host.adjacent(self.0[u], self.0[v]))
            .collect();
        LabeledGraph::from_indices(pattern.labels().to_vec(), &edges)
            .expect("pattern labels are distinct")
    }

    /// Injective, and adjacency is preserved in both directions.
    pub fn is_induced(&self, pattern: &LabeledGraph, host: &LabeledGraph) -> bool {
        let n = pattern.vertex_count();
        if self.0.len() != n || self.0.iter().any(|h| !host.contains_vertex(*h)) {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(host.vertex_count());
        if self.0.iter().any(|h| seen.put(h.index())) {
            return false;
        }
        pattern.vertices().all(|u| {
            pattern
                .vertices()
                .filter(|&v| v > u)
                .all(|v| pattern.adjacent(u, v) == host.adjacent(self.image(u), self.image(v)))
        })
    }
}

/// The first induced embedding of `pattern` into `host` extending `anchors`
/// (pattern label to host label). Pattern vertices are tried anchors first,
/// then by decreasing degree; host candidates by index.
pub fn find_induced_embedding(
    pattern: &LabeledGraph,
    host: &LabeledGraph,
    anchors: &[(String, String)],
) -> Result<Option<Embedding>, SubisoError> {
    let n = pattern.vertex_count();
    let mut assign: Vec<Option<VertexId>> = vec![None; n];
    let mut used = FixedBitSet::with_capacity(host.vertex_count());
    let mut order = Vec::with_capacity(n);
    for (p, h) in anchors {
        let pv = pattern
            .vertex(p)
            .ok_or_else(|| SubisoError::UnknownPatternLabel(p.clone()))?;
        let hv = host
            .vertex(h)
            .ok_or_else(|| SubisoError::UnknownHostLabel(h.clone()))?;
        if assign[pv.index()].is_some() {
            return Err(SubisoError::DuplicateAnchor(p.clone()));
        }
        if used.put(hv.index()) {
            return Err(SubisoError::DuplicateAnchorImage(h.clone()));
        }
        assign[pv.index()] = Some(hv);
        order.push(pv);
    }
    if n > host.vertex_count() {
        return Ok(None);
    }
    for (i, &p) in order.iter().enumerate() {
        let h = assign[p.index()].unwrap();
        let consistent = pattern.degree(p) <= host.degree(h)
            && order[..i]
                .iter()
                .all(|&q| pattern.adjacent(p, q) == host.adjacent(h, assign[q.index()].unwrap()));
        if !consistent {
            return Ok(None);
        }
    }
    let anchored = order.len();
    let mut rest: Vec<VertexId> = pattern
        .vertices()
        .filter(|v| assign[v.index()].is_none())
        .collect();
    rest.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));
    order.extend(rest);
    let mut search = Search {
        pattern,
        host,
        order: &order,
        assign,
        used,
    };
    if search.extend(anchored) {
        let map = search.assign.into_iter().map(|h| h.unwrap()).collect();
        Ok(Some(Embedding(map)))
    } else {
        Ok(None)
    }
}

pub fn contains_induced(pattern: &LabeledGraph, host: &LabeledGraph) -> bool {
    matches!(find_induced_embedding(pattern, host, &[]), Ok(Some(_)))
}

struct Search<'a> {
    pattern: &'a LabeledGraph,
    host: &'a LabeledGraph,
    order: &'a [VertexId],
    assign: Vec<Option<VertexId>>,
    used: FixedBitSet,
}

impl Search<'_> {
    fn extend(&mut self, pos: usize) -> bool {
        let Some(&p) = self.order.get(pos) else {
            return true;
        };
        let placed = &self.order[..pos];
        for h in self.host.vertices() {
            if self.used.contains(h.index()) || self.host.degree(h) < self.pattern.degree(p) {
                continue;
            }
            let fits = placed.iter().all(|&q| {
                self.pattern.adjacent(p, q)
                    == self.host.adjacent(h, self.assign[q.index()].unwrap())
            });
            if !fits {
                continue;
            }
            self.assign[p.index()] = Some(h);
            self.used.insert(h.index());
            if self.extend(pos + 1) {
                return true;
            }
            self.used.set(h.index(), false);
            self.assign[p.index()] = None;
        }
        false
    }
}
