//! Vertex colorings and single-vertex recoloring walks.
//!
//! A [`Trace`] is a start coloring plus an ordered list of [`Move`]s. It is a
//! walk in the solution-space graph exactly when every prefix ends in a
//! proper coloring and every move genuinely changes its vertex's color.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Total map from vertices to color ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Self {
        Coloring { colors }
    }

    pub fn uniform(n: usize, color: u32) -> Self {
        Coloring {
            colors: vec![color; n],
        }
    }

    /// Vertex `v` gets color `v`.
    pub fn identity(n: usize) -> Self {
        Coloring {
            colors: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn get(&self, v: u32) -> u32 {
        self.colors[v as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.colors
    }

    /// One more than the largest color id present (0 for an empty coloring).
    pub fn palette_hint(&self) -> u32 {
        self.colors.iter().max().map_or(0, |&c| c + 1)
    }

    /// Sets `v` to `color` and returns the previous color.
    #[inline]
    pub fn set(&mut self, v: u32, color: u32) -> u32 {
        std::mem::replace(&mut self.colors[v as usize], color)
    }

    /// Vertices grouped by color, ascending color then ascending vertex.
    pub fn color_classes(&self) -> Vec<(u32, Vec<u32>)> {
        let mut by_color: Vec<(u32, u32)> = self
            .colors
            .iter()
            .enumerate()
            .map(|(v, &c)| (c, v as u32))
            .collect();
        by_color.sort_unstable();
        let mut classes: Vec<(u32, Vec<u32>)> = Vec::new();
        for (c, v) in by_color {
            match classes.last_mut() {
                Some((last, members)) if *last == c => members.push(v),
                _ => classes.push((c, vec![v])),
            }
        }
        classes
    }

    pub fn distinct_colors(&self) -> HashSet<u32> {
        self.colors.iter().copied().collect()
    }
}

impl From<Vec<u32>> for Coloring {
    fn from(colors: Vec<u32>) -> Self {
        Coloring::new(colors)
    }
}

/// Recolor `vertex` to `new_color`. The previous color is recovered on replay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub vertex: u32,
    pub new_color: u32,
}

impl Move {
    pub fn new(vertex: u32, new_color: u32) -> Self {
        Move { vertex, new_color }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Coloring,
    pub moves: Vec<Move>,
}

impl Trace {
    pub fn new(start: Coloring, moves: Vec<Move>) -> Self {
        Trace { start, moves }
    }

    pub fn empty(start: Coloring) -> Self {
        Trace {
            start,
            moves: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every coloring along the walk, start included. Allocates `len + 1`
    /// colorings; meant for small traces and tests.
    pub fn colorings(&self) -> Vec<Coloring> {
        let mut current = self.start.clone();
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(current.clone());
        for mv in &self.moves {
            current.set(mv.vertex, mv.new_color);
            out.push(current.clone());
        }
        out
    }
}

/// First problem found while replaying a trace.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceFault {
    #[error("start coloring has {found} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("start coloring is improper at edge {{{u}, {v}}}")]
    ImproperStart { u: u32, v: u32 },
    #[error("step {step}: vertex {vertex} does not exist")]
    VertexOutOfRange { step: usize, vertex: u32 },
    #[error("step {step}: vertex {vertex} already has color {color}")]
    NoOp { step: usize, vertex: u32, color: u32 },
    #[error("step {step}: vertex {vertex} and neighbor {neighbor} both have color {color}")]
    Monochromatic {
        step: usize,
        vertex: u32,
        neighbor: u32,
        color: u32,
    },
}

impl TraceFault {
    pub fn step(&self) -> Option<usize> {
        match *self {
            TraceFault::LengthMismatch { .. } | TraceFault::ImproperStart { .. } => None,
            TraceFault::VertexOutOfRange { step, .. }
            | TraceFault::NoOp { step, .. }
            | TraceFault::Monochromatic { step, .. } => Some(step),
        }
    }
}

/// A monochromatic edge, if any.
pub fn find_conflict(g: &Graph, c: &Coloring) -> Result<Option<(u32, u32)>> {
    if c.len() != g.n() {
        return Err(Error::LengthMismatch {
            left: g.n(),
            right: c.len(),
        });
    }
    Ok(g.edges().find(|&(u, v)| c.get(u) == c.get(v)))
}

pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    find_conflict(g, c).map(|e| e.is_none())
}

pub fn hamming(a: &Coloring, b: &Coloring) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .filter(|(x, y)| x != y)
        .count())
}

pub fn colors_used(c: &Coloring) -> usize {
    c.distinct_colors().len()
}

/// Applies `mv` to `current` after checking only the moved vertex's
/// neighborhood. On failure `current` is left unchanged.
#[inline]
pub(crate) fn step(
    g: &Graph,
    current: &mut Coloring,
    step: usize,
    mv: Move,
) -> std::result::Result<u32, TraceFault> {
    if mv.vertex as usize >= g.n() {
        return Err(TraceFault::VertexOutOfRange {
            step,
            vertex: mv.vertex,
        });
    }
    let old = current.get(mv.vertex);
    if old == mv.new_color {
        return Err(TraceFault::NoOp {
            step,
            vertex: mv.vertex,
            color: old,
        });
    }
    if let Some(&w) = g
        .neighbors(mv.vertex)
        .iter()
        .find(|&&w| current.get(w) == mv.new_color)
    {
        return Err(TraceFault::Monochromatic {
            step,
            vertex: mv.vertex,
            neighbor: w,
            color: mv.new_color,
        });
    }
    current.set(mv.vertex, mv.new_color);
    Ok(old)
}

fn check_start(g: &Graph, start: &Coloring) -> std::result::Result<(), TraceFault> {
    if start.len() != g.n() {
        return Err(TraceFault::LengthMismatch {
            expected: g.n(),
            found: start.len(),
        });
    }
    match g.edges().find(|&(u, v)| start.get(u) == start.get(v)) {
        Some((u, v)) => Err(TraceFault::ImproperStart { u, v }),
        None => Ok(()),
    }
}

/// Streams through the moves keeping one current coloring; each move costs
/// the degree of the moved vertex.
pub fn verify_trace(g: &Graph, t: &Trace) -> std::result::Result<(), TraceFault> {
    replay(g, t).map(|_| ())
}

fn replay(g: &Graph, t: &Trace) -> std::result::Result<Coloring, TraceFault> {
    check_start(g, &t.start)?;
    let mut current = t.start.clone();
    for (i, &mv) in t.moves.iter().enumerate() {
        step(g, &mut current, i, mv)?;
    }
    Ok(current)
}

/// End coloring of the trace. Without `strict` the moves are applied blindly.
pub fn apply_trace(g: &Graph, t: &Trace, strict: bool) -> std::result::Result<Coloring, TraceFault> {
    if strict {
        return replay(g, t);
    }
    if t.start.len() != g.n() {
        return Err(TraceFault::LengthMismatch {
            expected: g.n(),
            found: t.start.len(),
        });
    }
    let mut current = t.start.clone();
    for (i, mv) in t.moves.iter().enumerate() {
        if mv.vertex as usize >= g.n() {
            return Err(TraceFault::VertexOutOfRange {
                step: i,
                vertex: mv.vertex,
            });
        }
        current.set(mv.vertex, mv.new_color);
    }
    Ok(current)
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.vertex, self.new_color)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::path;
    use proptest::prelude::*;

    fn k3_trace() -> Trace {
        Trace::new(
            Coloring::new(vec![0, 1, 2]),
            vec![Move::new(0, 3), Move::new(1, 0), Move::new(0, 1)],
        )
    }

    #[test]
    fn properness() {
        let k3 = Graph::complete(3);
        assert!(is_proper(&k3, &Coloring::new(vec![0, 1, 2])).unwrap());
        assert!(!is_proper(&path(2), &Coloring::new(vec![0, 0])).unwrap());
        assert!(is_proper(&Graph::empty(4), &Coloring::uniform(4, 7)).unwrap());
        assert!(is_proper(&k3, &Coloring::uniform(2, 0)).is_err());
    }

    #[test]
    fn hamming_examples() {
        let c = Coloring::new(vec![3, 1, 4, 1]);
        assert_eq!(hamming(&c, &c).unwrap(), 0);
        assert_eq!(hamming(&Coloring::uniform(5, 0), &Coloring::uniform(5, 1)).unwrap(), 5);
        assert_eq!(
            hamming(&Coloring::new(vec![0, 0, 0]), &Coloring::new(vec![0, 1, 0])).unwrap(),
            1
        );
        assert!(hamming(&c, &Coloring::uniform(3, 0)).is_err());
    }

    #[test]
    fn colors_used_examples() {
        assert_eq!(colors_used(&Coloring::uniform(4, 0)), 1);
        assert_eq!(colors_used(&Coloring::identity(6)), 6);
        assert_eq!(colors_used(&Coloring::new(vec![0, 2, 2, 5])), 3);
        assert_eq!(Coloring::new(vec![0, 2, 2, 5]).palette_hint(), 6);
    }

    #[test]
    fn verify_examples() {
        let edge = path(2);
        let start = Coloring::new(vec![0, 1]);
        assert_eq!(verify_trace(&edge, &Trace::empty(start.clone())), Ok(()));
        let bad = Trace::new(start, vec![Move::new(0, 1)]);
        let fault = verify_trace(&edge, &bad).unwrap_err();
        assert_eq!(fault.step(), Some(0));
        assert!(matches!(fault, TraceFault::Monochromatic { .. }));

        let k3 = Graph::complete(3);
        assert_eq!(verify_trace(&k3, &k3_trace()), Ok(()));
        assert_eq!(
            apply_trace(&k3, &k3_trace(), true).unwrap(),
            Coloring::new(vec![1, 0, 2])
        );
    }

    #[test]
    fn no_op_moves_are_rejected() {
        let t = Trace::new(Coloring::new(vec![0, 1]), vec![Move::new(1, 1)]);
        assert!(matches!(
            verify_trace(&path(2), &t),
            Err(TraceFault::NoOp { step: 0, .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let g = path(3);
        let start = Coloring::new(vec![0, 1, 0]);
        assert_eq!(apply_trace(&g, &Trace::empty(start.clone()), false).unwrap(), start);
        let one = Trace::new(start, vec![Move::new(2, 2)]);
        assert_eq!(
            apply_trace(&g, &one, false).unwrap(),
            Coloring::new(vec![0, 1, 2])
        );
        // Non-strict application ignores properness.
        let bad = Trace::new(Coloring::new(vec![0, 1, 0]), vec![Move::new(1, 0)]);
        assert!(apply_trace(&g, &bad, false).is_ok());
        assert!(apply_trace(&g, &bad, true).is_err());
    }

    /// Recomputes properness of every prefix from scratch.
    fn naive_verify(g: &Graph, t: &Trace) -> bool {
        let cs = t.colorings();
        cs.iter().all(|c| is_proper(g, c).unwrap())
            && cs.windows(2).all(|w| hamming(&w[0], &w[1]).unwrap() == 1)
    }

    fn small_case() -> impl Strategy<Value = (Graph, Trace)> {
        (2usize..7).prop_flat_map(|n| {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
                .collect();
            let npairs = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), npairs),
                proptest::collection::vec(0u32..4, n),
                proptest::collection::vec((0..n as u32, 0u32..4), 0..12),
            )
                .prop_map(move |(keep, start, moves)| {
                    let edges = pairs
                        .iter()
                        .zip(&keep)
                        .filter(|(_, &k)| k)
                        .map(|(&e, _)| e);
                    let g = Graph::from_edges(n, edges).unwrap();
                    let moves = moves.into_iter().map(|(v, c)| Move::new(v, c)).collect();
                    (g, Trace::new(Coloring::new(start), moves))
                })
        })
    }

    proptest! {
        #[test]
        fn streaming_matches_naive((g, t) in small_case()) {
            prop_assert_eq!(verify_trace(&g, &t).is_ok(), naive_verify(&g, &t));
        }

        #[test]
        fn hamming_is_a_metric(
            a in proptest::collection::vec(0u32..3, 6),
            b in proptest::collection::vec(0u32..3, 6),
            c in proptest::collection::vec(0u32..3, 6),
        ) {
            let (a, b, c) = (Coloring::new(a), Coloring::new(b), Coloring::new(c));
            let ab = hamming(&a, &b).unwrap();
            prop_assert_eq!(ab, hamming(&b, &a).unwrap());
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(hamming(&a, &c).unwrap() <= ab + hamming(&b, &c).unwrap());
        }
    }
}
