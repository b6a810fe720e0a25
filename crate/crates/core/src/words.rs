//! Words over a graph's vertex set and the alternation relation.

use thiserror::Error;

use crate::graph::{LabeledGraph, VertexId};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alternation needs two distinct letters")]
    SameLetter,
    #[error("letter {0} does not occur in the word")]
    MissingLetter(VertexId),
    #[error("letter {letter} is outside the alphabet of {size} vertices")]
    LetterOutOfRange { letter: VertexId, size: usize },
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("uniformity bound must be at least 1")]
    ZeroUniformity,
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<VertexId>);

impl Word {
    pub fn new(letters: Vec<VertexId>) -> Self {
        Word(letters)
    }

    pub fn from_indices(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&i| VertexId::new(i)).collect())
    }

    /// Whitespace-separated vertex labels of `g`.
    pub fn parse_labels(g: &LabeledGraph, text: &str) -> Result<Self, WordError> {
        text.split_whitespace()
            .map(|t| {
                g.vertex(t)
                    .ok_or_else(|| WordError::UnknownLabel(t.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn occurrences(&self, x: VertexId) -> usize {
        self.0.iter().filter(|&&l| l == x).count()
    }

    /// Copy of the word with every occurrence of `z` removed.
    pub fn without(&self, z: VertexId) -> Word {
        Word(self.0.iter().copied().filter(|&l| l != z).collect())
    }

    pub fn to_labels(&self, g: &LabeledGraph) -> String {
        self.0
            .iter()
            .map(|&v| g.label(v))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Whether `x` and `y` alternate in `w`.
pub fn alternate(w: &Word, x: VertexId, y: VertexId) -> Result<bool, WordError> {
    if x == y {
        return Err(WordError::SameLetter);
    }
    let mut last = None;
    for &l in w.letters() {
        if l == x || l == y {
            if last == Some(l) {
                return Ok(false);
            }
            last = Some(l);
        }
    }
    Ok(true)
}

/// The graph on `n` vertices (labeled `0..n`) whose edges are the alternating pairs.
pub fn graph_of_word(w: &Word, n: usize) -> Result<LabeledGraph, WordError> {
    let edges = alternating_pairs(w, n)?;
    Ok(LabeledGraph::numbered(n, &edges).expect("alternating pairs are valid edges"))
}

fn alternating_pairs(w: &Word, n: usize) -> Result<Vec<(usize, usize)>, WordError> {
    let mut seen = vec![false; n];
    for &l in w.letters() {
        if l.index() >= n {
            return Err(WordError::LetterOutOfRange { letter: l, size: n });
        }
        seen[l.index()] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(WordError::MissingLetter(VertexId::new(missing)));
    }
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if alternate(w, VertexId::new(x), VertexId::new(y))? {
                edges.push((x, y));
            }
        }
    }
    Ok(edges)
}

/// Whether `w` represents `g` (compared by vertex index).
pub fn represents(w: &Word, g: &LabeledGraph) -> Result<bool, WordError> {
    let edges = alternating_pairs(w, g.vertex_count())?;
    Ok(edges.len() == g.edge_count()
        && edges
            .iter()
            .all(|&(u, v)| g.adjacent(VertexId::new(u), VertexId::new(v))))
}

pub const DEFAULT_MAX_UNIFORMITY: usize = 2;
pub const DEFAULT_WORD_BUDGET: u64 = 50_000_000;

/// Searches for a `k`-uniform word representing `g`, trying `k = 1..=k_max`.
///
/// Only words starting with vertex 0 are generated: any cyclic shift of a
/// uniform representant is again a representant, so this loses nothing.
/// `Ok(None)` means no representant of uniformity at most `k_max` exists; it
/// does not show that `g` is non-representable.
pub fn find_uniform_representant(
    g: &LabeledGraph,
    k_max: usize,
    budget: u64,
) -> Result<Option<Word>, WordError> {
    if k_max == 0 {
        return Err(WordError::ZeroUniformity);
    }
    let mut nodes = 0u64;
    for k in 1..=k_max {
        let mut search = UniformSearch::new(g, k);
        if search.run(&mut nodes, budget)? {
            return Ok(Some(Word::from_indices(&search.word)));
        }
    }
    Ok(None)
}

struct UniformSearch<'g> {
    g: &'g LabeledGraph,
    n: usize,
    k: usize,
    word: Vec<usize>,
    count: Vec<usize>,
    last_pos: Vec<usize>,
    /// `broken[x * n + y]`: the restriction to `{x, y}` already fails to alternate.
    broken: Vec<bool>,
    undo: Vec<usize>,
}

impl<'g> UniformSearch<'g> {
    fn new(g: &'g LabeledGraph, k: usize) -> Self {
        let n = g.vertex_count();
        UniformSearch {
            g,
            n,
            k,
            word: Vec::with_capacity(n * k),
            count: vec![0; n],
            last_pos: vec![0; n],
            broken: vec![false; n * n],
            undo: Vec::new(),
        }
    }

    fn run(&mut self, nodes: &mut u64, budget: u64) -> Result<bool, WordError> {
        if self.n == 0 {
            return Ok(true);
        }
        self.place(0).map_or(Ok(false), |mark| {
            let found = self.extend(nodes, budget)?;
            if !found {
                self.unplace(0, mark);
            }
            Ok(found)
        })
    }

    fn extend(&mut self, nodes: &mut u64, budget: u64) -> Result<bool, WordError> {
        if self.word.len() == self.n * self.k {
            return Ok(true);
        }
        for x in 0..self.n {
            if self.count[x] == self.k {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(WordError::BudgetExceeded(budget));
            }
            if let Some(mark) = self.place(x) {
                if self.extend(nodes, budget)? {
                    return Ok(true);
                }
                self.unplace(x, mark);
            }
        }
        Ok(false)
    }

    /// Appends `x`; returns `None` (leaving state unchanged) if the prefix can
    /// no longer be completed to a representant.
    fn place(&mut self, x: usize) -> Option<(usize, usize)> {
        let mark = self.undo.len();
        let prev_last = self.last_pos[x];
        let n = self.n;
        let mut dead = false;
        if self.count[x] > 0 {
            for y in 0..n {
                if y == x || self.broken[x * n + y] {
                    continue;
                }
                if self.count[y] == 0 || self.last_pos[y] < self.last_pos[x] {
                    self.broken[x * n + y] = true;
                    self.broken[y * n + x] = true;
                    self.undo.push(x * n + y);
                    if self.g.adjacent(VertexId::new(x), VertexId::new(y)) {
                        dead = true;
                    }
                }
            }
        }
        let pos = self.word.len();
        self.word.push(x);
        self.count[x] += 1;
        self.last_pos[x] = pos;
        if !dead && self.count[x] == self.k {
            // x is finished: a non-edge partner must still be able to break alternation
            for y in 0..n {
                if y != x
                    && !self.broken[x * n + y]
                    && !self.g.adjacent(VertexId::new(x), VertexId::new(y))
                    && self.k - self.count[y] <= 1
                {
                    dead = true;
                    break;
                }
            }
        }
        if dead {
            self.unplace(x, (mark, prev_last));
            None
        } else {
            Some((mark, prev_last))
        }
    }

    fn unplace(&mut self, x: usize, (mark, prev_last): (usize, usize)) {
        let n = self.n;
        for idx in self.undo.drain(mark..) {
            let (a, b) = (idx / n, idx % n);
            self.broken[a * n + b] = false;
            self.broken[b * n + a] = false;
        }
        self.word.pop();
        self.count[x] -= 1;
        self.last_pos[x] = prev_last;
    }
}
