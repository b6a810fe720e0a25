//! Branch-and-propagate search for a semi-transitive orientation.
//!
//! The search keeps one current partial orientation. At a fixpoint of the
//! forcing rules it orients an unset edge and saves the opposite choice as a
//! numbered copy. When a contradiction is reached, the current line of the
//! proof trace ends and a saved copy is resumed. If every copy ends in a
//! contradiction, the trace is a refutation that [`crate::trace::verify_trace`]
//! can check.
//!
//! Two symmetries shrink the search: some vertex of each component can be
//! assumed to be a source, and, since flipping every arc of a semi-transitive
//! orientation (then turning the resulting sink back into a source) keeps it
//! semi-transitive, one further edge away from the source can be oriented
//! freely.

mod propagate;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{LabeledGraph, VertexId};
use crate::orientation::{
    brute_force_semitransitive, is_semitransitive, Arc, EdgeState, OracleVerdict, Orientation,
    OrientationError, PartialOrientation,
};
use crate::trace::{Opener, Preamble, ProofTrace, Terminal, TraceArc, TraceLine, TraceStep};
use crate::words::{find_uniform_representant, WordError};

pub use propagate::{
    constraint_cycles, find_defect, propagate, Defect, Forced, Justification, Propagation,
    Propagator, RuleKind, DEFAULT_MAX_CYCLE_LEN,
};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceRule {
    /// Maximum degree vertex of each component, smallest index on ties.
    MaxDegree,
    /// This vertex in its component, maximum degree elsewhere.
    Vertex(String),
    /// No source assumption.
    None,
}

/// Which saved copy to resume after a contradiction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ResumeOrder {
    /// Most recently created; depth first, few copies alive at once.
    #[default]
    Newest,
    /// Lowest numbered.
    Oldest,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub source: SourceRule,
    /// Orient the first branch edge one way only.
    pub wlog: bool,
    /// Maximum number of propagation rounds.
    pub budget: u64,
    pub trace: bool,
    pub max_cycle_len: usize,
    pub resume: ResumeOrder,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            source: SourceRule::MaxDegree,
            wlog: true,
            budget: DEFAULT_BUDGET,
            trace: true,
            max_cycle_len: DEFAULT_MAX_CYCLE_LEN,
            resume: ResumeOrder::Newest,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<'g> {
    SemiTransitive(Orientation<'g>),
    /// The trace is present when trace emission was on.
    NonSemiTransitive(Option<ProofTrace>),
    BudgetExceeded {
        nodes: u64,
    },
}

impl Verdict<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::SemiTransitive(_) => "SemiTransitive",
            Verdict::NonSemiTransitive(_) => "NonSemiTransitive",
            Verdict::BudgetExceeded { .. } => "BudgetExceeded",
        }
    }

    pub fn is_semitransitive(&self) -> Option<bool> {
        match self {
            Verdict::SemiTransitive(_) => Some(true),
            Verdict::NonSemiTransitive(_) => Some(false),
            Verdict::BudgetExceeded { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("source `{0}` is not a vertex")]
    UnknownSource(String),
    #[error("edge {0}-{1} is already oriented towards the source")]
    SourceConflict(String, String),
    #[error("search budget exhausted after {0} propagation rounds")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Oracle(#[from] OrientationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Orients every edge at `v` away from `v`.
pub fn fix_source(po: &mut PartialOrientation<'_>, v: VertexId) -> Result<(), SolverError> {
    let g = po.graph();
    for &w in g.neighbors(v) {
        po.set(Arc::new(v, w)).map_err(|_| {
            SolverError::SourceConflict(g.label(v).to_owned(), g.label(w).to_owned())
        })?;
    }
    Ok(())
}

/// Decides whether `g` has a semi-transitive orientation, one component at
/// a time. A refutation trace covers the first component without one.
pub fn solve<'g>(g: &'g LabeledGraph, cfg: &SolverConfig) -> Result<Verdict<'g>, SolverError> {
    let source = match &cfg.source {
        SourceRule::Vertex(l) => Some(
            g.vertex(l)
                .ok_or_else(|| SolverError::UnknownSource(l.clone()))?,
        ),
        _ => None,
    };
    let components: Vec<_> = g.components().into_iter().filter(|c| c.len() > 1).collect();
    let mut nodes = 0u64;
    let mut forward = vec![true; g.edge_count()];
    let mut exhausted = false;
    for comp in &components {
        let src = match cfg.source {
            SourceRule::None => None,
            _ => Some(match source {
                Some(s) if comp.contains(&s) => s,
                _ => g
                    .max_degree_vertex_in(comp.iter().copied())
                    .expect("non-empty"),
            }),
        };
        let sub;
        let (h, src) = if components.len() == 1 && comp.len() == g.vertex_count() {
            (g, src)
        } else {
            sub = g.induced_subgraph(comp).expect("component vertices");
            (&sub, src.map(|s| sub.vertex(g.label(s)).unwrap()))
        };
        match Search::new(h, cfg, src)?.run(cfg.budget.saturating_sub(nodes)) {
            Outcome::Found(states, n) => {
                nodes += n;
                for (e, s) in states.into_iter().enumerate() {
                    let (u, v) = h.edge(e);
                    let (gu, gv) = (g.vertex(h.label(u)).unwrap(), g.vertex(h.label(v)).unwrap());
                    // h keeps g's relative vertex order, so stored directions agree
                    debug_assert!(gu < gv);
                    forward[g.edge_index(gu, gv).unwrap()] = s == EdgeState::AsStored;
                }
            }
            Outcome::Refuted(trace) => return Ok(Verdict::NonSemiTransitive(trace)),
            Outcome::OutOfBudget(n) => {
                nodes += n;
                exhausted = true;
            }
        }
    }
    if exhausted {
        return Ok(Verdict::BudgetExceeded { nodes });
    }
    let o = Orientation::from_fn(g, |e| forward[e]);
    assert!(
        is_semitransitive(&o),
        "solver produced a defective orientation"
    );
    Ok(Verdict::SemiTransitive(o))
}

enum Outcome {
    Found(Vec<EdgeState>, u64),
    Refuted(Option<ProofTrace>),
    OutOfBudget(u64),
}

struct SavedCopy {
    states: Vec<EdgeState>,
    arc: Arc,
}

struct Search<'h> {
    g: &'h LabeledGraph,
    prop: Propagator<'h>,
    po: PartialOrientation<'h>,
    preamble: Preamble,
    trace: bool,
    resume: ResumeOrder,
    lines: Vec<TraceLine>,
    steps: Vec<TraceStep>,
    opener: Opener,
    copies: BTreeMap<u32, SavedCopy>,
    next_copy: u32,
}

impl<'h> Search<'h> {
    fn new(
        g: &'h LabeledGraph,
        cfg: &SolverConfig,
        source: Option<VertexId>,
    ) -> Result<Self, SolverError> {
        let prop = Propagator::new(g, cfg.max_cycle_len);
        let mut po = PartialOrientation::new(g);
        let mut preamble = Preamble::default();
        if let Some(s) = source {
            fix_source(&mut po, s)?;
            preamble.source = Some(g.label(s).to_owned());
        }
        if cfg.wlog {
            if let Some(e) = prop.branch_edge(&po) {
                let (u, v) = g.edge(e);
                po.set(Arc::new(u, v)).expect("unset edge");
                preamble.wlog = Some(TraceArc::new(g.label(u), g.label(v)));
            }
        }
        Ok(Search {
            g,
            prop,
            po,
            preamble,
            trace: cfg.trace,
            resume: cfg.resume,
            lines: Vec::new(),
            steps: Vec::new(),
            opener: Opener::Root,
            copies: BTreeMap::new(),
            next_copy: 2,
        })
    }

    fn label(&self, v: VertexId) -> String {
        self.g.label(v).to_owned()
    }

    fn trace_arc(&self, a: Arc) -> TraceArc {
        TraceArc::new(self.label(a.tail), self.label(a.head))
    }

    fn labels(&self, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| self.label(v)).collect()
    }

    fn record_forced(&mut self, forced: &[Forced]) {
        if !self.trace {
            return;
        }
        for f in forced {
            let step = TraceStep::Orient {
                arcs: f.arcs.iter().map(|&a| self.trace_arc(a)).collect(),
                cycle: self.labels(&f.justification.cycle),
            };
            self.steps.push(step);
        }
    }

    fn end_line(&mut self, defect: &Defect) {
        if !self.trace {
            return;
        }
        let terminal = match defect {
            Defect::DirectedCycle(c) => Terminal::DirectedCycle(self.labels(c)),
            Defect::Shortcut(p) => Terminal::Shortcut(self.labels(p)),
        };
        let opener = std::mem::replace(&mut self.opener, Opener::Root);
        self.lines.push(TraceLine {
            number: self.lines.len() + 1,
            opener,
            steps: std::mem::take(&mut self.steps),
            terminal,
        });
    }

    fn run(mut self, budget: u64) -> Outcome {
        let mut dirty: Vec<usize> = (0..self.g.edge_count()).collect();
        let mut nodes = 0u64;
        loop {
            if nodes >= budget {
                return Outcome::OutOfBudget(nodes);
            }
            nodes += 1;
            match self.prop.propagate_from(&mut self.po, &dirty) {
                Propagation::Contradiction { forced, defect } => {
                    self.record_forced(&forced);
                    self.end_line(&defect);
                    let next = match self.resume {
                        ResumeOrder::Newest => self.copies.keys().next_back().copied(),
                        ResumeOrder::Oldest => self.copies.keys().next().copied(),
                    };
                    let Some(id) = next else {
                        let trace = self.trace.then(|| ProofTrace {
                            preamble: self.preamble.clone(),
                            lines: std::mem::take(&mut self.lines),
                        });
                        return Outcome::Refuted(trace);
                    };
                    let saved = self.copies.remove(&id).unwrap();
                    for (e, &s) in saved.states.iter().enumerate() {
                        self.po.set_state(e, s);
                    }
                    self.po.set(saved.arc).expect("saved edge is unset");
                    if self.trace {
                        self.opener = Opener::MoveCopy {
                            copy: id,
                            arc: self.trace_arc(saved.arc),
                        };
                    }
                    dirty = vec![self.g.edge_index(saved.arc.tail, saved.arc.head).unwrap()];
                }
                other => {
                    self.record_forced(other.forced());
                    let Some(e) = self.prop.branch_edge(&self.po) else {
                        return Outcome::Found(self.po.states().to_vec(), nodes);
                    };
                    let (u, v) = self.g.edge(e);
                    let arc = Arc::new(u, v);
                    let id = self.next_copy;
                    self.next_copy += 1;
                    self.copies.insert(
                        id,
                        SavedCopy {
                            states: self.po.states().to_vec(),
                            arc: arc.reversed(),
                        },
                    );
                    if self.trace {
                        self.steps.push(TraceStep::Branch {
                            arc: self.trace_arc(arc),
                            copy: id,
                        });
                    }
                    self.po.set(arc).expect("branch edge is unset");
                    dirty = vec![e];
                }
            }
        }
    }
}

/// Solver and brute force agree on `g`, and a found uniform word (at most 2
/// occurrences per letter) implies a semi-transitive verdict.
pub fn check_oracle_consistency(
    g: &LabeledGraph,
    oracle_budget: u64,
) -> Result<bool, SolverError> {
    let cfg = SolverConfig {
        trace: false,
        ..SolverConfig::default()
    };
    let verdict = solve(g, &cfg)?;
    let solver = match verdict {
        Verdict::BudgetExceeded { nodes } => return Err(SolverError::BudgetExceeded(nodes)),
        v => v.is_semitransitive().unwrap(),
    };
    let oracle = matches!(
        brute_force_semitransitive(g, oracle_budget)?,
        OracleVerdict::Exists(_)
    );
    let word = find_uniform_representant(g, 2, crate::words::DEFAULT_WORD_BUDGET)?;
    Ok(solver == oracle && (word.is_none() || solver))
}
