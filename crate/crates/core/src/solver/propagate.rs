//! Forcing rules over short cycles, and defect detection on partial orientations.
//!
//! Every constraint is a simple cycle `c0 c1 .. c(m-1)` of the graph: all
//! triangles, plus the cycles of length `4..=L` whose vertex set is not a
//! clique. Relative to one traversal direction an edge is *along*
//! (`ci -> ci+1`), *against*, or unset. With `a` along and `u` unset:
//!
//! * `a = m`: directed cycle.
//! * `a = m-1`, last edge against (`m >= 4`): the along path plus the
//!   against edge is a shortcut, since the cycle is not a clique.
//! * `a = m-1`, last edge unset: orient it against, otherwise a directed
//!   cycle appears. For triangles this is the triangle rule.
//! * `a = m-2` (`m >= 4`), the other two not along and at least one unset:
//!   both must be against. One unset edge is the single forced case, two
//!   unset edges the double one.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::graph::{LabeledGraph, VertexId};
use crate::orientation::{Arc, EdgeState, PartialOrientation};

pub const DEFAULT_MAX_CYCLE_LEN: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Two arcs of a triangle form a path; the third edge closes it transitively.
    TriangleRule,
    /// Two edges of a non-clique cycle of length at least 4 go against the rest.
    CycleRule,
    /// All but one edge of a longer cycle form a directed path; the last must
    /// not close it into a directed cycle.
    PathClosure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Justification {
    pub kind: RuleKind,
    /// Triangles are listed as `[tail, head, third]` of the forced arc.
    pub cycle: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forced {
    /// One arc, or two for the double cycle-rule case.
    pub arcs: Vec<Arc>,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    /// `c0 -> c1 -> .. -> c0`, without repeating `c0`.
    DirectedCycle(Vec<VertexId>),
    /// Directed path `v0 -> .. -> vk` with arc `v0 -> vk` and a non-adjacent pair.
    Shortcut(Vec<VertexId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint,
    Forced(Vec<Forced>),
    Contradiction { forced: Vec<Forced>, defect: Defect },
}

impl Propagation {
    pub fn forced(&self) -> &[Forced] {
        match self {
            Propagation::Fixpoint => &[],
            Propagation::Forced(f) | Propagation::Contradiction { forced: f, .. } => f,
        }
    }
}

struct Constraint {
    cycle: Vec<VertexId>,
    edges: Vec<usize>,
    /// `stored_along[i]`: the traversal arc `ci -> ci+1` is the edge's stored direction.
    stored_along: Vec<bool>,
}

enum Action {
    Force(Vec<Arc>, RuleKind, Option<Vec<VertexId>>),
    Defect(Defect),
}

impl Constraint {
    fn len(&self) -> usize {
        self.cycle.len()
    }

    fn arc(&self, i: usize, along: bool) -> Arc {
        let (a, b) = (self.cycle[i], self.cycle[(i + 1) % self.len()]);
        if along {
            Arc::new(a, b)
        } else {
            Arc::new(b, a)
        }
    }

    fn evaluate(&self, po: &PartialOrientation<'_>) -> Option<Action> {
        let m = self.len();
        // per position: Some(true) along, Some(false) against, None unset
        let mut dirs = [None; 16];
        let (mut along, mut unset) = (0, 0);
        for (i, &e) in self.edges.iter().enumerate() {
            dirs[i] = match po.state(e) {
                EdgeState::Unset => None,
                EdgeState::AsStored => Some(self.stored_along[i]),
                EdgeState::Reversed => Some(!self.stored_along[i]),
            };
            match dirs[i] {
                Some(true) => along += 1,
                None => unset += 1,
                Some(false) => {}
            }
        }
        let against = m - along - unset;
        let dirs = &dirs[..m];
        self.evaluate_direction(dirs, along, against, unset, true)
            .or_else(|| self.evaluate_direction(dirs, against, along, unset, false))
    }

    /// `forward`: traversal in stored cycle order; otherwise the reverse, with
    /// `a` and `b` already swapped by the caller.
    fn evaluate_direction(
        &self,
        dirs: &[Option<bool>],
        a: usize,
        b: usize,
        u: usize,
        forward: bool,
    ) -> Option<Action> {
        let m = self.len();
        let is_against = |d: Option<bool>| d == Some(!forward);
        if a == m {
            let mut cyc = self.cycle.clone();
            if !forward {
                cyc.reverse();
            }
            return Some(Action::Defect(Defect::DirectedCycle(cyc)));
        }
        if a == m - 1 && b == 1 && m >= 4 {
            let i = dirs.iter().position(|&d| is_against(d)).unwrap();
            // the against arc runs from its second endpoint to its first (in
            // traversal terms), and the along path joins them the long way
            let path: Vec<VertexId> = if forward {
                (1..=m).map(|s| self.cycle[(i + s) % m]).collect()
            } else {
                (0..m).map(|s| self.cycle[(i + m - s) % m]).collect()
            };
            return Some(Action::Defect(Defect::Shortcut(path)));
        }
        if a == m - 1 && u == 1 {
            let i = dirs.iter().position(|d| d.is_none()).unwrap();
            let arc = self.arc(i, !forward);
            if m == 3 {
                let third = *self
                    .cycle
                    .iter()
                    .find(|&&v| v != arc.tail && v != arc.head)
                    .unwrap();
                return Some(Action::Force(
                    vec![arc],
                    RuleKind::TriangleRule,
                    Some(vec![arc.tail, arc.head, third]),
                ));
            }
            return Some(Action::Force(vec![arc], RuleKind::PathClosure, None));
        }
        if m >= 4 && a == m - 2 && u >= 1 {
            let arcs = dirs
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_none())
                .map(|(i, _)| self.arc(i, !forward))
                .collect();
            return Some(Action::Force(arcs, RuleKind::CycleRule, None));
        }
        None
    }
}

/// Simple cycles of length `3..=max_len`, each once, starting at its smallest
/// vertex and with `c1 < c(m-1)`. Longer cycles whose vertex set is a clique
/// are skipped.
pub fn constraint_cycles(g: &LabeledGraph, max_len: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let max_len = max_len.min(16);
    for s in g.vertices() {
        let mut path = vec![s];
        let mut on_path = FixedBitSet::with_capacity(g.vertex_count());
        on_path.insert(s.index());
        extend_cycles(g, s, max_len, &mut path, &mut on_path, &mut out);
    }
    out
}

fn extend_cycles(
    g: &LabeledGraph,
    s: VertexId,
    max_len: usize,
    path: &mut Vec<VertexId>,
    on_path: &mut FixedBitSet,
    out: &mut Vec<Vec<VertexId>>,
) {
    let tip = *path.last().unwrap();
    for &w in g.neighbors(tip) {
        if w <= s || on_path.contains(w.index()) {
            continue;
        }
        path.push(w);
        if path.len() >= 3
            && path[1] < w
            && g.adjacent(w, s)
            && (path.len() == 3 || !g.is_clique(path))
        {
            out.push(path.clone());
        }
        if path.len() < max_len {
            on_path.insert(w.index());
            extend_cycles(g, s, max_len, path, on_path, out);
            on_path.set(w.index(), false);
        }
        path.pop();
    }
}

/// The constraint set of one graph, with per-edge watch lists.
pub struct Propagator<'g> {
    graph: &'g LabeledGraph,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<u32>>,
}

impl<'g> Propagator<'g> {
    pub fn new(graph: &'g LabeledGraph, max_cycle_len: usize) -> Self {
        let mut watch = vec![Vec::new(); graph.edge_count()];
        let constraints: Vec<_> = constraint_cycles(graph, max_cycle_len)
            .into_iter()
            .enumerate()
            .map(|(ci, cycle)| {
                let m = cycle.len();
                let mut edges = Vec::with_capacity(m);
                let mut stored_along = Vec::with_capacity(m);
                for i in 0..m {
                    let (a, b) = (cycle[i], cycle[(i + 1) % m]);
                    let e = graph.edge_index(a, b).expect("cycle edge");
                    watch[e].push(ci as u32);
                    edges.push(e);
                    stored_along.push(a < b);
                }
                Constraint {
                    cycle,
                    edges,
                    stored_along,
                }
            })
            .collect();
        Propagator {
            graph,
            constraints,
            watch,
        }
    }

    pub fn graph(&self) -> &'g LabeledGraph {
        self.graph
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// Applies the rules from scratch until nothing changes.
    pub fn propagate(&self, po: &mut PartialOrientation<'_>) -> Propagation {
        let all: Vec<usize> = (0..self.graph.edge_count()).collect();
        self.propagate_from(po, &all)
    }

    /// As [`Propagator::propagate`], assuming only `dirty` edges changed since
    /// the last fixpoint.
    pub fn propagate_from(&self, po: &mut PartialOrientation<'_>, dirty: &[usize]) -> Propagation {
        let mut queue = VecDeque::new();
        let mut queued = FixedBitSet::with_capacity(self.constraints.len());
        let enqueue = |e: usize, queue: &mut VecDeque<u32>, queued: &mut FixedBitSet| {
            for &c in &self.watch[e] {
                if !queued.put(c as usize) {
                    queue.push_back(c);
                }
            }
        };
        for &e in dirty {
            enqueue(e, &mut queue, &mut queued);
        }
        let mut forced = Vec::new();
        while let Some(c) = queue.pop_front() {
            queued.set(c as usize, false);
            let constraint = &self.constraints[c as usize];
            match constraint.evaluate(po) {
                None => {}
                Some(Action::Defect(defect)) => {
                    return Propagation::Contradiction { forced, defect }
                }
                Some(Action::Force(arcs, kind, cycle)) => {
                    for &a in &arcs {
                        po.set(a).expect("forced edges are unset");
                        let e = self.graph.edge_index(a.tail, a.head).unwrap();
                        enqueue(e, &mut queue, &mut queued);
                    }
                    let cycle = cycle.unwrap_or_else(|| constraint.cycle.clone());
                    forced.push(Forced {
                        arcs,
                        justification: Justification { kind, cycle },
                    });
                }
            }
        }
        match find_defect(po) {
            Some(defect) => Propagation::Contradiction { forced, defect },
            None if forced.is_empty() => Propagation::Fixpoint,
            None => Propagation::Forced(forced),
        }
    }

    /// Unset edge lying on the most constraints that are one orientation away
    /// from firing; smallest edge index on ties.
    pub fn branch_edge(&self, po: &PartialOrientation<'_>) -> Option<usize> {
        let mut score = vec![0u32; self.graph.edge_count()];
        for c in &self.constraints {
            let unset = c
                .edges
                .iter()
                .filter(|&&e| po.state(e) == EdgeState::Unset)
                .count();
            let hot = if c.len() == 3 { unset == 2 } else { unset == 3 };
            if hot {
                for &e in &c.edges {
                    if po.state(e) == EdgeState::Unset {
                        score[e] += 1;
                    }
                }
            }
        }
        po.unset_edges()
            .min_by_key(|&e| (std::cmp::Reverse(score[e]), e))
    }
}

/// Default-length rules applied to `po` until fixpoint.
pub fn propagate(po: &mut PartialOrientation<'_>) -> Propagation {
    Propagator::new(po.graph(), DEFAULT_MAX_CYCLE_LEN).propagate(po)
}

/// A directed cycle among the oriented edges, or else a shortcut whose path
/// and closing arc are oriented and whose missing chord is a non-edge.
pub fn find_defect(po: &PartialOrientation<'_>) -> Option<Defect> {
    let g = po.graph();
    let n = g.vertex_count();
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    let mut indeg = vec![0usize; n];
    let arcs = po.arcs();
    for a in &arcs {
        out[a.tail.index()].insert(a.head.index());
        indeg[a.head.index()] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = stack.pop() {
        order.push(v);
        for h in out[v].ones() {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                stack.push(h);
            }
        }
    }
    if order.len() < n {
        return Some(Defect::DirectedCycle(directed_cycle(&out, &indeg)));
    }
    let mut desc = vec![FixedBitSet::with_capacity(n); n];
    for &v in order.iter().rev() {
        let mut d = out[v].clone();
        for h in out[v].ones() {
            d.union_with(&desc[h]);
        }
        desc[v] = d;
    }
    let mut anc = vec![FixedBitSet::with_capacity(n); n];
    for &v in &order {
        for h in out[v].ones() {
            let mut a = anc[v].clone();
            a.insert(v);
            anc[h].union_with(&a);
        }
    }
    for a in &arcs {
        let (s, t) = (a.tail.index(), a.head.index());
        let mut span = desc[s].clone();
        span.intersect_with(&anc[t]);
        span.insert(s);
        span.insert(t);
        for x in span.ones() {
            let mut bad = desc[x].clone();
            bad.intersect_with(&span);
            bad.difference_with(g.neighbor_set(VertexId::new(x)));
            if let Some(y) = bad.ones().next() {
                let mut path = vec![VertexId::new(s)];
                walk(&out, &desc, s, x, &mut path);
                walk(&out, &desc, x, y, &mut path);
                walk(&out, &desc, y, t, &mut path);
                return Some(Defect::Shortcut(path));
            }
        }
    }
    None
}

/// Appends a directed path from `from` (already in `path`) to `to`.
fn walk(
    out: &[FixedBitSet],
    desc: &[FixedBitSet],
    from: usize,
    to: usize,
    path: &mut Vec<VertexId>,
) {
    let mut v = from;
    while v != to {
        v = out[v]
            .ones()
            .find(|&w| w == to || desc[w].contains(to))
            .expect("target reachable");
        path.push(VertexId::new(v));
    }
}

/// A cycle among the vertices Kahn's algorithm could not remove: drop
/// leftovers without a leftover successor, then follow successors.
fn directed_cycle(out: &[FixedBitSet], indeg: &[usize]) -> Vec<VertexId> {
    let n = out.len();
    let mut alive = FixedBitSet::with_capacity(n);
    for (v, &d) in indeg.iter().enumerate() {
        if d > 0 {
            alive.insert(v);
        }
    }
    loop {
        let dead: Vec<usize> = alive
            .ones()
            .filter(|&v| out[v].intersection(&alive).next().is_none())
            .collect();
        if dead.is_empty() {
            break;
        }
        for v in dead {
            alive.set(v, false);
        }
    }
    let mut v = alive.ones().next().expect("a cycle remains");
    let mut seen = vec![usize::MAX; n];
    let mut walk = Vec::new();
    while seen[v] == usize::MAX {
        seen[v] = walk.len();
        walk.push(VertexId::new(v));
        v = out[v].intersection(&alive).next().unwrap();
    }
    walk.split_off(seen[v])
}
