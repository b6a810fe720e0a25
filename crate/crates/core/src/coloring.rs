//! The trailing-run three-coloring of `S(n,2)` and an exact chromatic number search.

use thiserror::Error;

use crate::debruijn::{DebruijnError, SimplifiedDeBruijnGraph};
use crate::graph::{ColorAssignment, LabeledGraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Red = 0,
    Blue = 1,
    Green = 2,
}

impl Color {
    pub fn code(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
            Color::Green => "green",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex label is empty")]
    EmptyLabel,
    #[error("vertex label `{0}` is not a binary word")]
    NonBinary(String),
    #[error(transparent)]
    DeBruijn(#[from] DebruijnError),
    #[error("edge {0}-{1} is monochromatic under the trailing-run coloring")]
    InternalPropernessViolation(String, String),
    #[error("graph has {got} vertices, over the limit of {limit}")]
    SizeLimit { got: usize, limit: usize },
}

/// Red when the final run of equal letters has even length; otherwise Blue
/// for a run of 0s and Green for a run of 1s.
pub fn classify_binary_vertex(label: &str) -> Result<Color, ColoringError> {
    let bytes = label.as_bytes();
    let &last = bytes.last().ok_or(ColoringError::EmptyLabel)?;
    if bytes.iter().any(|b| !matches!(b, b'0' | b'1')) {
        return Err(ColoringError::NonBinary(label.to_owned()));
    }
    let run = bytes.iter().rev().take_while(|&&b| b == last).count();
    Ok(match (run % 2, last) {
        (0, _) => Color::Red,
        (_, b'0') => Color::Blue,
        _ => Color::Green,
    })
}

/// Builds `S(n,2)`, colors it by [`classify_binary_vertex`], and checks the
/// coloring is proper.
pub fn color_s_n_2(n: usize) -> Result<(SimplifiedDeBruijnGraph, ColorAssignment), ColoringError> {
    let s = SimplifiedDeBruijnGraph::new(n, 2)?;
    let g = s.graph();
    let colors = g
        .labels()
        .iter()
        .map(|l| classify_binary_vertex(l).map(Color::code))
        .collect::<Result<Vec<_>, _>>()?;
    let coloring = ColorAssignment::new(colors);
    if let Some(&(u, v)) = g
        .edges()
        .iter()
        .find(|&&(u, v)| coloring.color(u) == coloring.color(v))
    {
        return Err(ColoringError::InternalPropernessViolation(
            g.label(u).to_owned(),
            g.label(v).to_owned(),
        ));
    }
    Ok((s, coloring))
}

pub const DEFAULT_CHROMATIC_LIMIT: usize = 64;

/// Smallest `c <= max_colors` admitting a proper coloring, or `None`.
pub fn exact_chromatic_number(
    g: &LabeledGraph,
    max_colors: usize,
) -> Result<Option<usize>, ColoringError> {
    exact_chromatic_number_with_limit(g, max_colors, DEFAULT_CHROMATIC_LIMIT)
}

pub fn exact_chromatic_number_with_limit(
    g: &LabeledGraph,
    max_colors: usize,
    limit: usize,
) -> Result<Option<usize>, ColoringError> {
    Ok(find_min_coloring(g, max_colors, limit)?.map(|c| c.color_count()))
}

/// A proper coloring with the fewest colors, if that number is at most `max_colors`.
pub fn find_min_coloring(
    g: &LabeledGraph,
    max_colors: usize,
    limit: usize,
) -> Result<Option<ColorAssignment>, ColoringError> {
    let n = g.vertex_count();
    if n > limit {
        return Err(ColoringError::SizeLimit { got: n, limit });
    }
    if n == 0 {
        return Ok(Some(ColorAssignment::new(Vec::new())));
    }
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for c in 1..=max_colors.min(n) {
        let mut colors = vec![usize::MAX; n];
        if color_rec(g, &order, 0, c, 0, &mut colors) {
            return Ok(Some(ColorAssignment::new(colors)));
        }
    }
    Ok(None)
}

/// `used` colors appear so far; a new color is only ever the next unused one.
fn color_rec(
    g: &LabeledGraph,
    order: &[VertexId],
    pos: usize,
    c: usize,
    used: usize,
    colors: &mut [usize],
) -> bool {
    let Some(&v) = order.get(pos) else {
        return true;
    };
    for col in 0..c.min(used + 1) {
        if g.neighbors(v).iter().any(|w| colors[w.index()] == col) {
            continue;
        }
        colors[v.index()] = col;
        if color_rec(g, order, pos + 1, c, used.max(col + 1), colors) {
            return true;
        }
    }
    colors[v.index()] = usize::MAX;
    false
}
