//! Replays a trace against a concrete graph.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Opener, ProofTrace, Terminal, TraceArc, TraceLine, TraceStep};
use crate::graph::{LabeledGraph, VertexId};
use crate::orientation::{Arc, EdgeState, OrientationError, PartialOrientation};

/// Where in a line verification stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRef {
    /// Building the line's starting state (preamble or resumed copy).
    Entry,
    Step(usize),
    Terminal,
}

impl fmt::Display for StepRef {
    /// Steps are counted from 1 here, unlike the `Step` index.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepRef::Entry => f.write_str("entry"),
            StepRef::Step(i) => write!(f, "step {}", i + 1),
            StepRef::Terminal => f.write_str("terminal"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Rejection {
    #[error("`{0}` is not a vertex of the graph")]
    UnknownLabel(String),
    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(String, String),
    #[error("{0} contradicts the current orientation")]
    Conflict(TraceArc),
    #[error("line 1 must start from the preamble and later lines from a copy")]
    MisplacedOpener,
    #[error("copy {0} was never created")]
    UnknownCopy(u32),
    #[error("copy {0} was already resumed")]
    CopyConsumed(u32),
    #[error("copy {copy} saved {saved}, but the line resumes with {stated}")]
    ResumedArcMismatch {
        copy: u32,
        saved: TraceArc,
        stated: TraceArc,
    },
    #[error("copy {got} created out of sequence, expected {expected}")]
    CopyOutOfSequence { expected: u32, got: u32 },
    #[error("branch on {0}, which is already oriented")]
    BranchOnOrientedEdge(TraceArc),
    #[error("cycle annotation is not a simple cycle of the graph")]
    NotACycle,
    #[error("{0} is not an edge of the annotated cycle")]
    ArcOffCycle(TraceArc),
    #[error("the annotated cycle does not force {0}")]
    Unjustified(String),
    #[error("terminal path is not directed under the current orientation")]
    NotDirectedPath,
    #[error("arc from the first to the last vertex of the terminal path is missing")]
    ClosingArcMissing,
    #[error("every pair on the terminal path is a forward arc")]
    NoDefect,
    #[error("terminal cycle is not directed under the current orientation")]
    NotDirectedCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReport {
    pub number: usize,
    pub outcome: Result<(), (StepRef, Rejection)>,
}

impl LineReport {
    pub fn accepted(&self) -> bool {
        self.outcome.is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyRecord {
    pub id: u32,
    pub created_at: usize,
    pub consumed_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub lines: Vec<LineReport>,
    /// Ordered by copy id.
    pub ledger: Vec<CopyRecord>,
    /// All lines accepted, at least one line, and every copy resumed.
    pub verdict: bool,
}

impl VerificationReport {
    pub fn accepted_lines(&self) -> usize {
        self.lines.iter().filter(|l| l.accepted()).count()
    }

    pub fn ledger_balanced(&self) -> bool {
        self.ledger.iter().all(|c| c.consumed_at.is_some())
    }

    pub fn first_failure(&self) -> Option<&LineReport> {
        self.lines.iter().find(|l| !l.accepted())
    }
}

struct SavedCopy {
    states: Vec<EdgeState>,
    arc: TraceArc,
    created_at: usize,
    consumed_at: Option<usize>,
}

struct Replay<'g> {
    g: &'g LabeledGraph,
    copies: BTreeMap<u32, SavedCopy>,
    next_copy: u32,
}

type Step<T> = Result<T, Rejection>;

impl<'g> Replay<'g> {
    fn vertex(&self, label: &str) -> Step<VertexId> {
        self.g
            .vertex(label)
            .ok_or_else(|| Rejection::UnknownLabel(label.to_owned()))
    }

    fn arc(&self, a: &TraceArc) -> Step<Arc> {
        let arc = Arc::new(self.vertex(&a.tail)?, self.vertex(&a.head)?);
        if !self.g.adjacent(arc.tail, arc.head) {
            return Err(Rejection::NotAnEdge(a.tail.clone(), a.head.clone()));
        }
        Ok(arc)
    }

    fn apply(&self, po: &mut PartialOrientation<'g>, a: &TraceArc) -> Step<()> {
        let arc = self.arc(a)?;
        match po.set(arc) {
            Ok(_) => Ok(()),
            Err(OrientationError::Conflict(..)) => Err(Rejection::Conflict(a.clone())),
            Err(_) => Err(Rejection::NotAnEdge(a.tail.clone(), a.head.clone())),
        }
    }

    fn entry(
        &mut self,
        trace: &ProofTrace,
        index: usize,
        line: &TraceLine,
    ) -> Step<PartialOrientation<'g>> {
        let mut po = PartialOrientation::new(self.g);
        match (&line.opener, index) {
            (Opener::Root, 0) => {
                if let Some(s) = &trace.preamble.source {
                    let s = self.vertex(s)?;
                    for &w in self.g.neighbors(s) {
                        po.set(Arc::new(s, w)).expect("fresh orientation");
                    }
                }
                if let Some(w) = &trace.preamble.wlog {
                    self.apply(&mut po, w)?;
                }
                Ok(po)
            }
            (Opener::MoveCopy { copy, arc }, i) if i > 0 => {
                let saved = self
                    .copies
                    .get_mut(copy)
                    .ok_or(Rejection::UnknownCopy(*copy))?;
                if saved.consumed_at.is_some() {
                    return Err(Rejection::CopyConsumed(*copy));
                }
                if saved.arc != *arc {
                    return Err(Rejection::ResumedArcMismatch {
                        copy: *copy,
                        saved: saved.arc.clone(),
                        stated: arc.clone(),
                    });
                }
                saved.consumed_at = Some(line.number);
                for (e, &s) in saved.states.iter().enumerate() {
                    po.set_state(e, s);
                }
                self.apply(&mut po, arc)?;
                Ok(po)
            }
            _ => Err(Rejection::MisplacedOpener),
        }
    }

    fn step(&mut self, po: &mut PartialOrientation<'g>, line: usize, step: &TraceStep) -> Step<()> {
        match step {
            TraceStep::Branch { arc, copy } => {
                let a = self.arc(arc)?;
                if po.direction(a.tail, a.head).is_some() {
                    return Err(Rejection::BranchOnOrientedEdge(arc.clone()));
                }
                if *copy != self.next_copy {
                    return Err(Rejection::CopyOutOfSequence {
                        expected: self.next_copy,
                        got: *copy,
                    });
                }
                self.next_copy += 1;
                self.copies.insert(
                    *copy,
                    SavedCopy {
                        states: po.states().to_vec(),
                        arc: arc.reversed(),
                        created_at: line,
                        consumed_at: None,
                    },
                );
                self.apply(po, arc)
            }
            TraceStep::Orient { arcs, cycle } => {
                let cyc = self.cycle(cycle)?;
                let mut stated = Vec::with_capacity(arcs.len());
                for a in arcs {
                    let arc = self.arc(a)?;
                    if po.direction(arc.tail, arc.head) == Some(false) {
                        return Err(Rejection::Conflict(a.clone()));
                    }
                    stated.push(arc);
                }
                justify(self.g, po, &cyc, &stated).map_err(|off| match off {
                    Some(i) => Rejection::ArcOffCycle(arcs[i].clone()),
                    None => {
                        let names: Vec<_> = arcs.iter().map(ToString::to_string).collect();
                        Rejection::Unjustified(names.join(", "))
                    }
                })?;
                for a in arcs {
                    self.apply(po, a)?;
                }
                Ok(())
            }
        }
    }

    /// A simple cycle of the graph, at least three vertices.
    fn cycle(&self, labels: &[String]) -> Step<Vec<VertexId>> {
        let vs = labels
            .iter()
            .map(|l| self.vertex(l))
            .collect::<Step<Vec<_>>>()?;
        let m = vs.len();
        let mut sorted = vs.clone();
        sorted.sort();
        sorted.dedup();
        if m < 3 || sorted.len() != m || (0..m).any(|i| !self.g.adjacent(vs[i], vs[(i + 1) % m])) {
            return Err(Rejection::NotACycle);
        }
        Ok(vs)
    }

    fn terminal(&self, po: &PartialOrientation<'g>, t: &Terminal) -> Step<()> {
        match t {
            Terminal::Shortcut(labels) => {
                let p = labels
                    .iter()
                    .map(|l| self.vertex(l))
                    .collect::<Step<Vec<_>>>()?;
                let k = p.len() - 1;
                let mut sorted = p.clone();
                sorted.sort();
                sorted.dedup();
                if k < 2 || sorted.len() != p.len() || !p.windows(2).all(|w| po.has_arc(w[0], w[1]))
                {
                    return Err(Rejection::NotDirectedPath);
                }
                if !po.has_arc(p[0], p[k]) {
                    return Err(Rejection::ClosingArcMissing);
                }
                let defect = (0..=k).any(|i| {
                    (i + 1..=k).any(|j| {
                        (i, j) != (0, k) && (!self.g.adjacent(p[i], p[j]) || po.has_arc(p[j], p[i]))
                    })
                });
                if defect {
                    Ok(())
                } else {
                    Err(Rejection::NoDefect)
                }
            }
            Terminal::DirectedCycle(labels) => {
                let c = labels
                    .iter()
                    .map(|l| self.vertex(l))
                    .collect::<Step<Vec<_>>>()?;
                let m = c.len();
                if m < 3 || !(0..m).all(|i| po.has_arc(c[i], c[(i + 1) % m])) {
                    return Err(Rejection::NotDirectedCycle);
                }
                Ok(())
            }
        }
    }

    fn line(
        &mut self,
        trace: &ProofTrace,
        index: usize,
        line: &TraceLine,
    ) -> Result<(), (StepRef, Rejection)> {
        let mut po = self
            .entry(trace, index, line)
            .map_err(|r| (StepRef::Entry, r))?;
        for (i, step) in line.steps.iter().enumerate() {
            self.step(&mut po, line.number, step)
                .map_err(|r| (StepRef::Step(i), r))?;
        }
        self.terminal(&po, &line.terminal)
            .map_err(|r| (StepRef::Terminal, r))
    }
}

/// Checks that the arcs `stated` are forced by `cycle`. The error holds the
/// index of the first stated arc that is not on the cycle, if any.
fn justify(
    g: &LabeledGraph,
    po: &PartialOrientation<'_>,
    cycle: &[VertexId],
    stated: &[Arc],
) -> Result<(), Option<usize>> {
    let m = cycle.len();
    let mut positions = Vec::with_capacity(stated.len());
    for (k, a) in stated.iter().enumerate() {
        let pos = (0..m).find(|&i| {
            let (x, y) = (cycle[i], cycle[(i + 1) % m]);
            (x, y) == (a.tail, a.head) || (y, x) == (a.tail, a.head)
        });
        positions.push(pos.ok_or(Some(k))?);
    }
    if stated.len() == 1 {
        // the rest of the cycle is a directed path from tail to head
        let a = stated[0];
        let p = positions[0];
        // cycle[p+1] around to cycle[p]
        let rest: Vec<VertexId> = (1..=m).map(|s| cycle[(p + s) % m]).collect();
        let path: Vec<VertexId> = if rest[0] == a.head {
            rest.into_iter().rev().collect()
        } else {
            rest
        };
        if path.windows(2).all(|w| po.has_arc(w[0], w[1])) {
            return Ok(());
        }
    }
    if m >= 4 && !g.is_clique(cycle) {
        for forward in [true, false] {
            let along = |i: usize| {
                let (x, y) = (cycle[i], cycle[(i + 1) % m]);
                if forward {
                    po.has_arc(x, y)
                } else {
                    po.has_arc(y, x)
                }
            };
            let against_arc = |i: usize| {
                let (x, y) = (cycle[i], cycle[(i + 1) % m]);
                if forward {
                    Arc::new(y, x)
                } else {
                    Arc::new(x, y)
                }
            };
            let rest: Vec<usize> = (0..m).filter(|&i| !along(i)).collect();
            if rest.len() != 2 {
                continue;
            }
            let ok = stated
                .iter()
                .zip(&positions)
                .all(|(a, p)| rest.contains(p) && *a == against_arc(*p))
                && rest.iter().all(|&i| {
                    positions.contains(&i) || {
                        let b = against_arc(i);
                        po.has_arc(b.tail, b.head)
                    }
                });
            if ok {
                return Ok(());
            }
        }
    }
    Err(None)
}

/// Replays `trace` against `g`. Non-adjacency is taken from `g`, so the
/// verdict is about `g` itself.
pub fn verify_trace(g: &LabeledGraph, trace: &ProofTrace) -> VerificationReport {
    let mut replay = Replay {
        g,
        copies: BTreeMap::new(),
        next_copy: 2,
    };
    let lines: Vec<LineReport> = trace
        .lines
        .iter()
        .enumerate()
        .map(|(i, line)| LineReport {
            number: line.number,
            outcome: replay.line(trace, i, line),
        })
        .collect();
    let ledger: Vec<CopyRecord> = replay
        .copies
        .iter()
        .map(|(&id, c)| CopyRecord {
            id,
            created_at: c.created_at,
            consumed_at: c.consumed_at,
        })
        .collect();
    let verdict = !lines.is_empty()
        && lines.iter().all(LineReport::accepted)
        && ledger.iter().all(|c| c.consumed_at.is_some());
    VerificationReport {
        lines,
        ledger,
        verdict,
    }
}
