//! Proof traces: a case analysis over partial orientations written one branch
//! per line.
//!
//! ```text
//! % source 13
//! % wlog 15->17
//! 1. B14->16 (Copy 2) O14->12 (C12-14-16-13) ... S:13-3-1-16
//! 2. MC2 16->14 O11->12 O5->11 (C4-12-11-5) ... DC:3-5-7
//! ```
//!
//! `B a->b (Copy k)` orients `a->b` and saves the current state with the
//! opposite arc as copy `k`. `O a->b (C ..)` orients an edge forced by the
//! listed cycle; two `O`s before one cycle are forced together. `MCk a->b`
//! resumes copy `k` with its saved arc. Each line ends in a contradiction:
//! `S:` a shortcut path, or `DC:` a directed cycle.

mod parse;
mod verify;

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::graph::LabeledGraph;

pub use parse::{parse_trace, strip_latex, ParseError};
pub use verify::{verify_trace, CopyRecord, LineReport, Rejection, StepRef, VerificationReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TraceArc {
    pub tail: String,
    pub head: String,
}

impl TraceArc {
    pub fn new(tail: impl Into<String>, head: impl Into<String>) -> Self {
        TraceArc {
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn reversed(&self) -> Self {
        TraceArc::new(self.head.clone(), self.tail.clone())
    }

    /// Parses `a->b` or `a→b`.
    pub fn parse(text: &str) -> Option<Self> {
        let (t, h) = text.split_once("->").or_else(|| text.split_once('→'))?;
        let (t, h) = (t.trim(), h.trim());
        (!t.is_empty() && !h.is_empty()).then(|| TraceArc::new(t, h))
    }
}

impl fmt::Display for TraceArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail, self.head)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStep {
    Branch {
        arc: TraceArc,
        copy: u32,
    },
    /// One arc, or two forced together by the same cycle.
    Orient {
        arcs: Vec<TraceArc>,
        cycle: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Opener {
    /// First line: starts from the preamble.
    Root,
    MoveCopy {
        copy: u32,
        arc: TraceArc,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminal {
    Shortcut(Vec<String>),
    DirectedCycle(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub number: usize,
    pub opener: Opener,
    pub steps: Vec<TraceStep>,
    pub terminal: Terminal,
}

/// Orientations assumed before line 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preamble {
    pub source: Option<String>,
    pub wlog: Option<TraceArc>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub preamble: Preamble,
    pub lines: Vec<TraceLine>,
}

impl ProofTrace {
    /// Copy ids in order of creation.
    pub fn copies_created(&self) -> Vec<u32> {
        self.lines
            .iter()
            .flat_map(|l| &l.steps)
            .filter_map(|s| match s {
                TraceStep::Branch { copy, .. } => Some(*copy),
                TraceStep::Orient { .. } => None,
            })
            .collect()
    }

    /// Copy ids in order of resumption.
    pub fn copies_consumed(&self) -> Vec<u32> {
        self.lines
            .iter()
            .filter_map(|l| match &l.opener {
                Opener::MoveCopy { copy, .. } => Some(*copy),
                Opener::Root => None,
            })
            .collect()
    }

    /// Every vertex label mentioned, including the preamble.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (a, b) in self.adjacencies() {
            out.insert(a);
            out.insert(b);
        }
        out.extend(self.preamble.source.iter().cloned());
        out
    }

    /// Label pairs the trace implicitly claims are edges.
    fn adjacencies(&self) -> Vec<(String, String)> {
        let mut pairs = Vec::new();
        let mut arc = |a: &TraceArc| pairs.push((a.tail.clone(), a.head.clone()));
        if let Some(w) = &self.preamble.wlog {
            arc(w);
        }
        for line in &self.lines {
            if let Opener::MoveCopy { arc: a, .. } = &line.opener {
                arc(a);
            }
            for step in &line.steps {
                match step {
                    TraceStep::Branch { arc: a, .. } => arc(a),
                    TraceStep::Orient { arcs, .. } => arcs.iter().for_each(&mut arc),
                }
            }
        }
        let mut chain = |vs: &[String], closed: bool| {
            for w in vs.windows(2) {
                pairs.push((w[0].clone(), w[1].clone()));
            }
            if closed && vs.len() > 1 {
                pairs.push((vs[vs.len() - 1].clone(), vs[0].clone()));
            }
        };
        for line in &self.lines {
            for step in &line.steps {
                if let TraceStep::Orient { cycle, .. } = step {
                    chain(cycle, true);
                }
            }
            match &line.terminal {
                // the closing pair of a shortcut is its first and last vertex
                Terminal::Shortcut(p) | Terminal::DirectedCycle(p) => chain(p, true),
            }
        }
        pairs
    }
}

/// Natural order: numeric labels by value, before all others.
fn natural_key(label: &str) -> (u8, u128, String) {
    match label.parse::<u128>() {
        Ok(v) => (0, v, label.to_owned()),
        Err(_) => (1, 0, label.to_owned()),
    }
}

/// The graph made of every adjacency the trace mentions. Vertices are in
/// natural label order.
pub fn extract_graph(trace: &ProofTrace) -> LabeledGraph {
    let mut labels: Vec<String> = trace.labels().into_iter().collect();
    labels.sort_by_key(|l| natural_key(l));
    let pairs: Vec<_> = trace
        .adjacencies()
        .into_iter()
        .filter(|(a, b)| a != b)
        .collect();
    LabeledGraph::build(&labels, &pairs).expect("labels are collected from the pairs")
}

fn join(vs: &[String]) -> String {
    vs.join("-")
}

/// Renders `trace` in the text format read by [`parse_trace`].
pub fn emit_trace(trace: &ProofTrace) -> String {
    let mut out = String::new();
    if let Some(s) = &trace.preamble.source {
        let _ = writeln!(out, "% source {s}");
    }
    if let Some(w) = &trace.preamble.wlog {
        let _ = writeln!(out, "% wlog {w}");
    }
    for line in &trace.lines {
        let mut parts = vec![format!("{}.", line.number)];
        if let Opener::MoveCopy { copy, arc } = &line.opener {
            parts.push(format!("MC{copy} {arc}"));
        }
        for step in &line.steps {
            parts.push(match step {
                TraceStep::Branch { arc, copy } => format!("B{arc} (Copy {copy})"),
                TraceStep::Orient { arcs, cycle } => {
                    let os: Vec<_> = arcs.iter().map(|a| format!("O{a}")).collect();
                    format!("{} (C{})", os.join(" "), join(cycle))
                }
            });
        }
        parts.push(match &line.terminal {
            Terminal::Shortcut(p) => format!("S:{}", join(p)),
            Terminal::DirectedCycle(c) => format!("DC:{}", join(c)),
        });
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// The 100-line case analysis showing that a 17-vertex induced subgraph of
/// `S(3,3)` has no semi-transitive orientation, as LaTeX source.
pub const WITNESS_TRACE_TEX: &str = include_str!("../../data/witness_trace.tex");

/// Preamble of [`WITNESS_TRACE_TEX`]: vertex 13 is a source and `15->17`.
pub fn witness_preamble() -> Preamble {
    Preamble {
        source: Some("13".into()),
        wlog: Some(TraceArc::new("15", "17")),
    }
}

/// [`WITNESS_TRACE_TEX`] parsed, with [`witness_preamble`].
pub fn witness_trace() -> ProofTrace {
    let mut t = parse_trace(WITNESS_TRACE_TEX).expect("bundled trace parses");
    t.preamble = witness_preamble();
    t
}
