//! Orientations, the semi-transitivity condition, and the exhaustive oracle.
//!
//! An orientation is semi-transitive when it is acyclic and, for every arc
//! `v0 -> vk` and every directed path `v0 -> v1 -> .. -> vk`, all arcs
//! `vi -> vj` with `i < j` are present. A path violating this is a shortcut.

use std::collections::VecDeque;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{dot_id, LabeledGraph, VertexId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OrientationError {
    #[error("{0} and {1} are not adjacent")]
    NotAnEdge(VertexId, VertexId),
    #[error("edge {0}-{1} is already oriented the other way")]
    Conflict(VertexId, VertexId),
    #[error("orientation has a directed cycle")]
    CyclicInput,
    #[error("{edges} edges give 2^{edges} orientations, over the budget of {budget}")]
    BudgetExceeded { edges: usize, budget: u64 },
    #[error("orientation lists {got} arcs but the graph has {expected} edges")]
    Incomplete { expected: usize, got: usize },
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        Arc { tail, head }
    }

    pub fn reversed(self) -> Self {
        Arc::new(self.head, self.tail)
    }

    pub fn display(self, g: &LabeledGraph) -> String {
        format!("{}->{}", g.label(self.tail), g.label(self.head))
    }
}

/// Orientation state of one edge relative to its stored `(min, max)` pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EdgeState {
    #[default]
    Unset,
    /// min -> max
    AsStored,
    /// max -> min
    Reversed,
}

fn state_for(g: &LabeledGraph, arc: Arc) -> EdgeState {
    let (u, _) = g.edge(g.edge_index(arc.tail, arc.head).expect("arc is an edge"));
    if arc.tail == u {
        EdgeState::AsStored
    } else {
        EdgeState::Reversed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOrientation<'g> {
    graph: &'g LabeledGraph,
    states: Vec<EdgeState>,
}

impl<'g> PartialOrientation<'g> {
    pub fn new(graph: &'g LabeledGraph) -> Self {
        PartialOrientation {
            graph,
            states: vec![EdgeState::Unset; graph.edge_count()],
        }
    }

    pub fn graph(&self) -> &'g LabeledGraph {
        self.graph
    }

    pub fn states(&self) -> &[EdgeState] {
        &self.states
    }

    pub fn state(&self, edge: usize) -> EdgeState {
        self.states[edge]
    }

    pub(crate) fn set_state(&mut self, edge: usize, state: EdgeState) {
        self.states[edge] = state;
    }

    /// The arc of edge `edge`, if oriented.
    pub fn arc_of(&self, edge: usize) -> Option<Arc> {
        let (u, v) = self.graph.edge(edge);
        match self.states[edge] {
            EdgeState::Unset => None,
            EdgeState::AsStored => Some(Arc::new(u, v)),
            EdgeState::Reversed => Some(Arc::new(v, u)),
        }
    }

    /// `Some(true)` if `u -> v`, `Some(false)` if `v -> u`, `None` if unset or not an edge.
    pub fn direction(&self, u: VertexId, v: VertexId) -> Option<bool> {
        let e = self.graph.edge_index(u, v)?;
        self.arc_of(e).map(|a| a.tail == u)
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.direction(u, v) == Some(true)
    }

    /// Orients `arc`. Returns whether anything changed.
    pub fn set(&mut self, arc: Arc) -> Result<bool, OrientationError> {
        let e = self
            .graph
            .edge_index(arc.tail, arc.head)
            .ok_or(OrientationError::NotAnEdge(arc.tail, arc.head))?;
        let want = state_for(self.graph, arc);
        match self.states[e] {
            EdgeState::Unset => {
                self.states[e] = want;
                Ok(true)
            }
            s if s == want => Ok(false),
            _ => Err(OrientationError::Conflict(arc.tail, arc.head)),
        }
    }

    pub fn unset_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == EdgeState::Unset)
            .map(|(i, _)| i)
    }

    pub fn is_complete(&self) -> bool {
        self.states.iter().all(|s| *s != EdgeState::Unset)
    }

    pub fn arcs(&self) -> Vec<Arc> {
        (0..self.states.len())
            .filter_map(|e| self.arc_of(e))
            .collect()
    }

    pub fn to_orientation(&self) -> Option<Orientation<'g>> {
        self.is_complete().then(|| Orientation {
            graph: self.graph,
            forward: self
                .states
                .iter()
                .map(|s| *s == EdgeState::AsStored)
                .collect(),
        })
    }
}

/// Every edge oriented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation<'g> {
    graph: &'g LabeledGraph,
    /// `forward[e]`: edge `e` points from its smaller to its larger endpoint.
    forward: Vec<bool>,
}

impl<'g> Orientation<'g> {
    pub fn from_fn(graph: &'g LabeledGraph, forward: impl Fn(usize) -> bool) -> Self {
        Orientation {
            graph,
            forward: (0..graph.edge_count()).map(forward).collect(),
        }
    }

    pub fn from_arcs(graph: &'g LabeledGraph, arcs: &[Arc]) -> Result<Self, OrientationError> {
        let mut po = PartialOrientation::new(graph);
        for &a in arcs {
            po.set(a)?;
        }
        let got = po.arcs().len();
        po.to_orientation().ok_or(OrientationError::Incomplete {
            expected: graph.edge_count(),
            got,
        })
    }

    /// Orientation given as `[tail, head]` label pairs.
    pub fn from_label_pairs(
        graph: &'g LabeledGraph,
        pairs: &[[String; 2]],
    ) -> Result<Self, OrientationError> {
        let lookup = |l: &String| {
            graph
                .vertex(l)
                .ok_or_else(|| OrientationError::UnknownLabel(l.clone()))
        };
        let arcs = pairs
            .iter()
            .map(|[t, h]| Ok(Arc::new(lookup(t)?, lookup(h)?)))
            .collect::<Result<Vec<_>, OrientationError>>()?;
        Self::from_arcs(graph, &arcs)
    }

    pub fn graph(&self) -> &'g LabeledGraph {
        self.graph
    }

    pub fn arc_of(&self, edge: usize) -> Arc {
        let (u, v) = self.graph.edge(edge);
        if self.forward[edge] {
            Arc::new(u, v)
        } else {
            Arc::new(v, u)
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.forward.len()).map(|e| self.arc_of(e))
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.graph
            .edge_index(u, v)
            .is_some_and(|e| self.arc_of(e).tail == u)
    }

    pub fn reversed(&self) -> Orientation<'g> {
        Orientation {
            graph: self.graph,
            forward: self.forward.iter().map(|f| !f).collect(),
        }
    }

    pub fn to_partial(&self) -> PartialOrientation<'g> {
        PartialOrientation {
            graph: self.graph,
            states: self
                .forward
                .iter()
                .map(|&f| {
                    if f {
                        EdgeState::AsStored
                    } else {
                        EdgeState::Reversed
                    }
                })
                .collect(),
        }
    }

    /// `[tail, head]` label pairs in edge order.
    pub fn to_label_pairs(&self) -> Vec<[String; 2]> {
        self.arcs()
            .map(|a| {
                [
                    self.graph.label(a.tail).to_owned(),
                    self.graph.label(a.head).to_owned(),
                ]
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for l in self.graph.labels() {
            let _ = writeln!(out, "  {} [label={}];", dot_id(l), dot_id(l));
        }
        for a in self.arcs() {
            let _ = writeln!(
                out,
                "  {} -> {};",
                dot_id(self.graph.label(a.tail)),
                dot_id(self.graph.label(a.head))
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `path[i]` and `path[j]` are not adjacent.
    NonAdjacent { i: usize, j: usize },
    /// The arc between `path[i]` and `path[j]` points backwards.
    Backward { i: usize, j: usize },
}

impl Violation {
    pub fn pair(self) -> (usize, usize) {
        match self {
            Violation::NonAdjacent { i, j } | Violation::Backward { i, j } => (i, j),
        }
    }
}

/// A directed path `v0 -> .. -> vk` with arc `v0 -> vk` and a missing chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortcutWitness {
    pub path: Vec<VertexId>,
    pub violation: Violation,
}

impl ShortcutWitness {
    pub fn closing_arc(&self) -> Arc {
        Arc::new(self.path[0], *self.path.last().expect("non-empty path"))
    }

    /// Re-checks the witness against `o`.
    pub fn holds_in(&self, o: &Orientation<'_>) -> bool {
        let g = o.graph();
        let k = self.path.len().saturating_sub(1);
        if k < 2 || !self.path.windows(2).all(|w| o.has_arc(w[0], w[1])) {
            return false;
        }
        if !o.has_arc(self.path[0], self.path[k]) {
            return false;
        }
        let (i, j) = self.violation.pair();
        if !(i < j && j <= k && (i, j) != (0, k)) {
            return false;
        }
        let (a, b) = (self.path[i], self.path[j]);
        match self.violation {
            Violation::NonAdjacent { .. } => !g.adjacent(a, b),
            Violation::Backward { .. } => o.has_arc(b, a),
        }
    }
}

/// Out-neighbour lists of a complete orientation.
fn out_lists(o: &Orientation<'_>) -> Vec<Vec<VertexId>> {
    let mut out = vec![Vec::new(); o.graph().vertex_count()];
    for a in o.arcs() {
        out[a.tail.index()].push(a.head);
    }
    for l in &mut out {
        l.sort_unstable();
    }
    out
}

pub fn topological_order(o: &Orientation<'_>) -> Option<Vec<VertexId>> {
    let n = o.graph().vertex_count();
    let out = out_lists(o);
    let mut indeg = vec![0usize; n];
    for l in &out {
        for h in l {
            indeg[h.index()] += 1;
        }
    }
    let mut queue: VecDeque<_> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(VertexId::new(v));
        for h in &out[v] {
            indeg[h.index()] -= 1;
            if indeg[h.index()] == 0 {
                queue.push_back(h.index());
            }
        }
    }
    (order.len() == n).then_some(order)
}

pub fn is_acyclic(o: &Orientation<'_>) -> bool {
    topological_order(o).is_some()
}

/// Some directed cycle `c0 -> c1 -> .. -> c0`, listed without repeating `c0`.
pub fn find_directed_cycle(o: &Orientation<'_>) -> Option<Vec<VertexId>> {
    let n = o.graph().vertex_count();
    let out = out_lists(o);
    // 0 = new, 1 = on stack, 2 = done
    let mut color = vec![0u8; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        color[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = out[v].get(*next) {
                *next += 1;
                match color[w.index()] {
                    0 => {
                        color[w.index()] = 1;
                        stack.push((w.index(), 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(x, _)| x == w.index()).unwrap();
                        return Some(
                            stack[start..]
                                .iter()
                                .map(|&(x, _)| VertexId::new(x))
                                .collect(),
                        );
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Searches every arc `u -> v` for a shortcut by depth-first enumeration of
/// directed `u -> v` paths, stopping at the first missing chord.
pub fn find_shortcut(o: &Orientation<'_>) -> Result<Option<ShortcutWitness>, OrientationError> {
    let order = topological_order(o).ok_or(OrientationError::CyclicInput)?;
    let g = o.graph();
    let n = g.vertex_count();
    let out = out_lists(o);
    // reach[v]: vertices reachable from v by a non-empty directed path
    let mut reach = vec![FixedBitSet::with_capacity(n); n];
    for &v in order.iter().rev() {
        let mut r = FixedBitSet::with_capacity(n);
        for &h in &out[v.index()] {
            r.insert(h.index());
            r.union_with(&reach[h.index()]);
        }
        reach[v.index()] = r;
    }
    for arc in o.arcs() {
        let (u, v) = (arc.tail, arc.head);
        let mut path = vec![u];
        if let Some(w) = shortcut_dfs(o, &out, &reach, v, &mut path) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn shortcut_dfs(
    o: &Orientation<'_>,
    out: &[Vec<VertexId>],
    reach: &[FixedBitSet],
    target: VertexId,
    path: &mut Vec<VertexId>,
) -> Option<ShortcutWitness> {
    let g = o.graph();
    let tip = *path.last().unwrap();
    for &w in &out[tip.index()] {
        if w != target && !reach[w.index()].contains(target.index()) {
            continue;
        }
        if w == target && path.len() == 1 {
            continue;
        }
        let j = path.len();
        for (i, &p) in path.iter().enumerate() {
            if o.has_arc(p, w) {
                continue;
            }
            let violation = if g.adjacent(p, w) {
                Violation::Backward { i, j }
            } else {
                Violation::NonAdjacent { i, j }
            };
            let mut full = path.clone();
            full.push(w);
            complete_path(out, reach, target, &mut full);
            return Some(ShortcutWitness {
                path: full,
                violation,
            });
        }
        if w != target {
            path.push(w);
            if let Some(found) = shortcut_dfs(o, out, reach, target, path) {
                return Some(found);
            }
            path.pop();
        }
    }
    None
}

/// Extends `path` from its last vertex to `target` along arcs.
fn complete_path(
    out: &[Vec<VertexId>],
    reach: &[FixedBitSet],
    target: VertexId,
    path: &mut Vec<VertexId>,
) {
    while *path.last().unwrap() != target {
        let tip = *path.last().unwrap();
        let next = out[tip.index()]
            .iter()
            .copied()
            .find(|&w| w == target || reach[w.index()].contains(target.index()))
            .expect("target is reachable");
        path.push(next);
    }
}

pub fn is_semitransitive(o: &Orientation<'_>) -> bool {
    matches!(find_shortcut(o), Ok(None))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict<'g> {
    Exists(Orientation<'g>),
    NotExists,
}

pub const DEFAULT_ORACLE_BUDGET: u64 = 20_000_000;

fn orientation_count(g: &LabeledGraph, budget: u64) -> Result<u64, OrientationError> {
    let edges = g.edge_count();
    let too_many = OrientationError::BudgetExceeded { edges, budget };
    if edges >= 64 {
        return Err(too_many);
    }
    let total = 1u64 << edges;
    if total > budget {
        return Err(too_many);
    }
    Ok(total)
}

/// Bit `i` of the counter set means edge `i` runs from its larger to its smaller endpoint.
fn counter_orientation(g: &LabeledGraph, counter: u64) -> Orientation<'_> {
    Orientation::from_fn(g, |e| counter >> e & 1 == 0)
}

/// Tries all `2^|E|` orientations in counter order and returns the first
/// semi-transitive one.
pub fn brute_force_semitransitive(
    g: &LabeledGraph,
    budget: u64,
) -> Result<OracleVerdict<'_>, OrientationError> {
    let total = orientation_count(g, budget)?;
    Ok((0..total)
        .map(|c| counter_orientation(g, c))
        .find(is_semitransitive)
        .map_or(OracleVerdict::NotExists, OracleVerdict::Exists))
}

/// Same verdict and certificate as [`brute_force_semitransitive`], with the
/// counter range split across the current rayon pool.
pub fn brute_force_semitransitive_parallel(
    g: &LabeledGraph,
    budget: u64,
) -> Result<OracleVerdict<'_>, OrientationError> {
    let total = orientation_count(g, budget)?;
    Ok((0..total)
        .into_par_iter()
        .find_first(|&c| is_semitransitive(&counter_orientation(g, c)))
        .map_or(OracleVerdict::NotExists, |c| {
            OracleVerdict::Exists(counter_orientation(g, c))
        }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orient<'g>(g: &'g LabeledGraph, arcs: &[(&str, &str)]) -> Orientation<'g> {
        let arcs: Vec<_> = arcs
            .iter()
            .map(|(a, b)| Arc::new(g.vertex(a).unwrap(), g.vertex(b).unwrap()))
            .collect();
        Orientation::from_arcs(g, &arcs).unwrap()
    }

    /// Semi-transitivity straight from the definition: every directed path of
    /// every length, by exhaustive enumeration of vertex sequences.
    fn semitransitive_by_definition(o: &Orientation<'_>) -> bool {
        let n = o.graph().vertex_count();
        if !is_acyclic(o) {
            return false;
        }
        fn rec(o: &Orientation<'_>, path: &mut Vec<VertexId>, n: usize) -> bool {
            let k = path.len() - 1;
            if k >= 2 && o.has_arc(path[0], path[k]) {
                for i in 0..=k {
                    for j in i + 1..=k {
                        if !o.has_arc(path[i], path[j]) {
                            return false;
                        }
                    }
                }
            }
            let tip = *path.last().unwrap();
            for w in (0..n).map(VertexId::new) {
                if o.has_arc(tip, w) && !path.contains(&w) {
                    path.push(w);
                    if !rec(o, path, n) {
                        return false;
                    }
                    path.pop();
                }
            }
            true
        }
        (0..n).all(|s| rec(o, &mut vec![VertexId::new(s)], n))
    }

    #[test]
    fn acyclicity() {
        let k3 =
            LabeledGraph::build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let cyc = orient(&k3, &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert!(!is_acyclic(&cyc));
        assert_eq!(find_shortcut(&cyc), Err(OrientationError::CyclicInput));
        assert!(!is_semitransitive(&cyc));
        assert_eq!(find_directed_cycle(&cyc).unwrap().len(), 3);

        let k4 = LabeledGraph::complete(4);
        let tt = Orientation::from_fn(&k4, |_| true);
        assert!(is_acyclic(&tt));
        assert_eq!(find_shortcut(&tt), Ok(None));
        assert!(find_directed_cycle(&tt).is_none());

        let tree = LabeledGraph::numbered(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        for c in 0..16u64 {
            assert!(is_acyclic(&counter_orientation(&tree, c)));
        }
    }

    #[test]
    fn smallest_shortcut() {
        let g = LabeledGraph::build(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")],
        )
        .unwrap();
        let o = orient(&g, &[("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")]);
        let w = find_shortcut(&o).unwrap().unwrap();
        let labels: Vec<_> = w.path.iter().map(|&v| g.label(v)).collect();
        assert_eq!(labels, ["a", "b", "c", "d"]);
        assert!(w.holds_in(&o));
        let (i, j) = w.violation.pair();
        assert!(!g.adjacent(w.path[i], w.path[j]));
        assert!(!is_semitransitive(&o));
    }

    #[test]
    fn directed_path_is_semitransitive() {
        let p = LabeledGraph::path(5);
        assert!(is_semitransitive(&Orientation::from_fn(&p, |_| true)));
        // triangle-free, no arc closes a longer path
        let c6 = LabeledGraph::cycle(6);
        let zigzag = Orientation::from_fn(&c6, |e| e % 2 == 0);
        assert!(is_semitransitive(&zigzag));
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
        let pairs: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        (0u32..(1 << pairs.len())).map(move |mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            LabeledGraph::numbered(n, &edges).unwrap()
        })
    }

    #[test]
    fn dfs_check_matches_definition_and_reversal_symmetry() {
        for n in 1..=5 {
            for g in all_graphs(n) {
                for c in 0..(1u64 << g.edge_count()) {
                    let o = counter_orientation(&g, c);
                    let st = is_semitransitive(&o);
                    assert_eq!(st, semitransitive_by_definition(&o));
                    assert_eq!(st, is_semitransitive(&o.reversed()));
                    if let Ok(Some(w)) = find_shortcut(&o) {
                        assert!(w.holds_in(&o));
                    }
                }
            }
        }
    }

    #[test]
    fn transitive_closures_have_no_shortcut() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(2..=7);
            // random DAG over index order, then its transitive closure
            let mut reach = vec![vec![false; n]; n];
            for (u, row) in reach.iter_mut().enumerate() {
                for cell in &mut row[u + 1..] {
                    *cell = rng.gen_bool(0.3);
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if reach[i][k] && reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| reach[u][v])
                .collect();
            let g = LabeledGraph::numbered(n, &edges).unwrap();
            let o = Orientation::from_fn(&g, |_| true);
            assert_eq!(find_shortcut(&o), Ok(None));
        }
    }

    #[test]
    fn oracle_examples() {
        let e = LabeledGraph::path(2);
        assert!(matches!(
            brute_force_semitransitive(&e, 10),
            Ok(OracleVerdict::Exists(_))
        ));
        let w5 = LabeledGraph::wheel(5).unwrap();
        assert_eq!(
            brute_force_semitransitive(&w5, 1024),
            Ok(OracleVerdict::NotExists)
        );
        assert_eq!(
            brute_force_semitransitive(&w5, 1023),
            Err(OrientationError::BudgetExceeded {
                edges: 10,
                budget: 1023
            })
        );
        assert_eq!(
            brute_force_semitransitive_parallel(&w5, 1024),
            Ok(OracleVerdict::NotExists)
        );
    }

    #[test]
    fn oracle_first_certificate_is_deterministic() {
        let c5 = LabeledGraph::cycle(5);
        let a = brute_force_semitransitive(&c5, 1 << 10).unwrap();
        let b = brute_force_semitransitive_parallel(&c5, 1 << 10).unwrap();
        assert_eq!(a, b);
        match a {
            OracleVerdict::Exists(o) => assert!(is_semitransitive(&o)),
            OracleVerdict::NotExists => panic!("C5 is semi-transitive"),
        }
    }

    #[test]
    fn hereditary_non_semitransitivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut transfers = 0;
        for _ in 0..150 {
            let n = 6;
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.7))
                .collect();
            let g = LabeledGraph::numbered(n, &edges).unwrap();
            let keep: Vec<_> = (0..n)
                .filter(|_| rng.gen_bool(0.8))
                .map(VertexId::new)
                .collect();
            let h = g.induced_subgraph(&keep).unwrap();
            if brute_force_semitransitive(&h, 1 << 20).unwrap() == OracleVerdict::NotExists {
                transfers += 1;
                assert_eq!(
                    brute_force_semitransitive(&g, 1 << 20).unwrap(),
                    OracleVerdict::NotExists
                );
            }
        }
        let w5 = LabeledGraph::wheel(5).unwrap();
        let mut bigger = w5
            .edges()
            .iter()
            .map(|(u, v)| (u.index(), v.index()))
            .collect::<Vec<_>>();
        bigger.push((0, 6));
        let g = LabeledGraph::numbered(7, &bigger).unwrap();
        assert_eq!(
            brute_force_semitransitive(&g, 1 << 20).unwrap(),
            OracleVerdict::NotExists
        );
        let _ = transfers;
    }

    #[test]
    fn partial_orientation_set_and_conflict() {
        let g = LabeledGraph::path(3);
        let mut po = PartialOrientation::new(&g);
        let (a, b) = (VertexId::new(0), VertexId::new(1));
        assert_eq!(po.set(Arc::new(b, a)), Ok(true));
        assert_eq!(po.set(Arc::new(b, a)), Ok(false));
        assert_eq!(
            po.set(Arc::new(a, b)),
            Err(OrientationError::Conflict(a, b))
        );
        assert_eq!(
            po.set(Arc::new(a, VertexId::new(2))),
            Err(OrientationError::NotAnEdge(a, VertexId::new(2)))
        );
        assert_eq!(po.direction(a, b), Some(false));
        assert!(po.to_orientation().is_none());
        po.set(Arc::new(VertexId::new(1), VertexId::new(2)))
            .unwrap();
        let o = po.to_orientation().unwrap();
        assert_eq!(
            o.to_label_pairs(),
            [["1".to_string(), "0".to_string()], ["1".into(), "2".into()]]
        );
        let back = Orientation::from_label_pairs(&g, &o.to_label_pairs()).unwrap();
        assert_eq!(back, o);
        assert!(o.to_dot().contains("\"1\" -> \"0\";"));
    }
}
