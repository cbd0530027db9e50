//! Recoloring of the leftover set `U` with fresh colors.
//!
//! Two constructions are provided. [`degeneracy_recolor_greedy`] walks a
//! degeneracy order of `G[U]` once and needs `degeneracy + 1` fresh colors
//! that nobody holds. [`inductive_replay_recolor`] builds the walk vertex by
//! vertex, replaying the walk for the prefix and inserting a detour for the
//! new vertex whenever it blocks a replayed move; it tolerates fresh colors
//! already held inside `U` but its length can double per vertex, so it is
//! capped to tiny sets.

use std::collections::HashSet;

use crate::coloring::{Coloring, Move};
use crate::error::{Error, Result};
use crate::graph::{degeneracy_order, InducedSubgraph};

pub const DEFAULT_INDUCTIVE_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct ResidualOutcome {
    pub moves: Vec<Move>,
    pub degeneracy: usize,
    /// Distinct fresh colors the moves actually use.
    pub colors_used: usize,
}

fn check_distinct(colors: &[u32]) -> Result<HashSet<u32>> {
    let mut set = HashSet::with_capacity(colors.len());
    for &c in colors {
        if !set.insert(c) {
            return Err(Error::DuplicatePaletteColor(c));
        }
    }
    Ok(set)
}

/// Recolors every vertex of `sub` to a fresh color: vertices are taken in
/// degeneracy order and each gets the lowest fresh color not already given
/// to one of its earlier neighbors.
pub fn degeneracy_recolor_greedy(
    sub: &InducedSubgraph,
    current: &Coloring,
    fresh: &[u32],
) -> Result<ResidualOutcome> {
    let fresh_set = check_distinct(fresh)?;
    if let Some((v, &c)) = current
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, c)| fresh_set.contains(c))
    {
        return Err(Error::FreshColorInUse {
            color: c,
            vertex: v as u32,
        });
    }
    let g = &sub.graph;
    let degen = degeneracy_order(g);
    if fresh.len() < degen.degeneracy + 1 {
        return Err(Error::InsufficientFreshColors {
            needed: degen.degeneracy + 1,
            available: fresh.len(),
        });
    }

    // Index into `fresh` assigned to each local vertex, once processed.
    let mut assigned: Vec<Option<usize>> = vec![None; g.n()];
    let mut taken = vec![false; fresh.len()];
    let mut used = vec![false; fresh.len()];
    let mut moves = Vec::with_capacity(g.n());
    for &v in &degen.order {
        for &w in g.neighbors(v) {
            if let Some(i) = assigned[w as usize] {
                taken[i] = true;
            }
        }
        let slot = taken.iter().position(|&t| !t).ok_or_else(|| {
            Error::Internal(format!("degeneracy bound exceeded at local vertex {v}"))
        })?;
        for &w in g.neighbors(v) {
            if let Some(i) = assigned[w as usize] {
                taken[i] = false;
            }
        }
        assigned[v as usize] = Some(slot);
        used[slot] = true;
        moves.push(Move::new(sub.original(v), fresh[slot]));
    }
    Ok(ResidualOutcome {
        moves,
        degeneracy: degen.degeneracy,
        colors_used: used.iter().filter(|&&u| u).count(),
    })
}

/// Inductive construction over the degeneracy order `v_1, .., v_s` of `sub`.
///
/// `base` must recolor, with fresh colors, some prefix `v_1..v_j` of that
/// order while staying proper on `G[v_1..v_j]` (it may be empty). The walk
/// is then extended one vertex at a time: each replayed move `(w, c)` that
/// `v_i` blocks is preceded by moving `v_i` to another valid fresh color, and
/// `v_i` finally takes a fresh color if it does not already hold one. Each
/// extension at most doubles the walk plus one move. The returned walk is
/// proper on the whole graph.
pub fn inductive_replay_recolor(
    sub: &InducedSubgraph,
    current: &Coloring,
    fresh: &[u32],
    base: &[Move],
    cap: usize,
) -> Result<ResidualOutcome> {
    let g = &sub.graph;
    let s = g.n();
    if s > cap {
        return Err(Error::ResidualCapExceeded { size: s, cap });
    }
    let fresh_set = check_distinct(fresh)?;
    let mut local_of = vec![u32::MAX; current.len()];
    for (i, &v) in sub.labels.iter().enumerate() {
        if v as usize >= current.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: current.len(),
            });
        }
        local_of[v as usize] = i as u32;
    }
    for (v, &c) in current.as_slice().iter().enumerate() {
        if local_of[v] == u32::MAX && fresh_set.contains(&c) {
            return Err(Error::FreshColorInUse {
                color: c,
                vertex: v as u32,
            });
        }
    }

    let degen = degeneracy_order(g);
    let order = degen.order;
    let mut pos = vec![0usize; s];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let start: Vec<u32> = sub.labels.iter().map(|&v| current.get(v)).collect();

    // Local form of the base path and the prefix it covers.
    let mut path: Vec<(u32, u32)> = Vec::with_capacity(base.len());
    for mv in base {
        let local = local_of
            .get(mv.vertex as usize)
            .copied()
            .filter(|&l| l != u32::MAX)
            .ok_or_else(|| Error::InvalidBasePath(format!("vertex {} is not in U", mv.vertex)))?;
        if !fresh_set.contains(&mv.new_color) {
            return Err(Error::InvalidBasePath(format!(
                "color {} is not fresh",
                mv.new_color
            )));
        }
        path.push((local, mv.new_color));
    }
    let prefix = path
        .iter()
        .map(|&(w, _)| pos[w as usize] + 1)
        .max()
        .unwrap_or(0);
    let mut state = start.clone();
    for (step, &(w, c)) in path.iter().enumerate() {
        if state[w as usize] == c
            || g.neighbors(w)
                .iter()
                .any(|&x| pos[x as usize] < prefix && state[x as usize] == c)
        {
            return Err(Error::InvalidBasePath(format!(
                "move {step} is not a proper recoloring of the prefix"
            )));
        }
        state[w as usize] = c;
    }
    if let Some(&v) = order[..prefix]
        .iter()
        .find(|&&v| !fresh_set.contains(&state[v as usize]))
    {
        return Err(Error::InvalidBasePath(format!(
            "vertex {} ends without a fresh color",
            sub.original(v)
        )));
    }

    // Lowest fresh color avoiding `avoid` and the colors of earlier neighbors.
    let pick = |state: &[u32], vi: u32, i: usize, avoid: Option<u32>| -> Result<u32> {
        fresh
            .iter()
            .copied()
            .find(|&f| {
                Some(f) != avoid
                    && f != state[vi as usize]
                    && !g
                        .neighbors(vi)
                        .iter()
                        .any(|&x| pos[x as usize] < i && state[x as usize] == f)
            })
            .ok_or(Error::NoValidFreshColor(sub.original(vi)))
    };

    for (i, &vi) in order.iter().enumerate().take(s).skip(prefix) {
        let mut state = start.clone();
        let mut extended = Vec::with_capacity(2 * path.len() + 1);
        for &(w, c) in &path {
            let mut blockers = g
                .neighbors(w)
                .iter()
                .filter(|&&x| pos[x as usize] <= i && state[x as usize] == c);
            if let Some(&b) = blockers.next() {
                if b != vi || blockers.next().is_some() {
                    return Err(Error::Internal(format!(
                        "replayed move of {} blocked by a vertex other than {}",
                        sub.original(w),
                        sub.original(vi)
                    )));
                }
                let detour = pick(&state, vi, i, Some(c))?;
                extended.push((vi, detour));
                state[vi as usize] = detour;
            }
            extended.push((w, c));
            state[w as usize] = c;
        }
        if !fresh_set.contains(&state[vi as usize]) {
            let last = pick(&state, vi, i, None)?;
            extended.push((vi, last));
        }
        debug_assert!(extended.len() <= 2 * path.len() + 1);
        path = extended;
    }

    let mut final_colors = start;
    for &(w, c) in &path {
        final_colors[w as usize] = c;
    }
    let colors_used = final_colors
        .iter()
        .filter(|c| fresh_set.contains(c))
        .collect::<HashSet<_>>()
        .len();
    Ok(ResidualOutcome {
        moves: path
            .into_iter()
            .map(|(w, c)| Move::new(sub.original(w), c))
            .collect(),
        degeneracy: degen.degeneracy,
        colors_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{apply_trace, verify_trace, Trace};
    use crate::graph::tests::path;
    use crate::graph::{induced_subgraph, Graph};

    fn whole(g: &Graph) -> InducedSubgraph {
        let all: Vec<u32> = (0..g.n() as u32).collect();
        induced_subgraph(g, &all).unwrap()
    }

    #[test]
    fn star_uses_two_fresh_colors() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let start = Coloring::new(vec![0, 1, 1, 1]);
        let out = degeneracy_recolor_greedy(&whole(&star), &start, &[8, 9]).unwrap();
        assert_eq!(out.degeneracy, 1);
        assert_eq!(out.moves.len(), 4);
        let t = Trace::new(start, out.moves);
        assert_eq!(verify_trace(&star, &t), Ok(()));
        let end = apply_trace(&star, &t, true).unwrap();
        assert!(end.as_slice().iter().all(|c| [8, 9].contains(c)));
        assert_ne!(end.get(0), end.get(1));
    }

    #[test]
    fn edgeless_needs_one_color() {
        let g = Graph::empty(5);
        let out = degeneracy_recolor_greedy(&whole(&g), &Coloring::uniform(5, 0), &[7]).unwrap();
        assert_eq!(out.moves.len(), 5);
        assert!(out.moves.iter().all(|m| m.new_color == 7));
    }

    #[test]
    fn triangle_needs_three() {
        let k3 = Graph::complete(3);
        let err = degeneracy_recolor_greedy(&whole(&k3), &Coloring::identity(3), &[5, 6]);
        assert!(matches!(
            err,
            Err(Error::InsufficientFreshColors {
                needed: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn fresh_colors_must_be_unused() {
        let g = path(3);
        let err = degeneracy_recolor_greedy(&whole(&g), &Coloring::new(vec![0, 1, 0]), &[1, 2]);
        assert!(matches!(err, Err(Error::FreshColorInUse { color: 1, .. })));
    }

    #[test]
    fn inductive_single_vertex() {
        let g = Graph::empty(1);
        let out = inductive_replay_recolor(&whole(&g), &Coloring::uniform(1, 0), &[3], &[], 20).unwrap();
        assert!(out.moves.len() <= 1);
    }

    #[test]
    fn inductive_isolated_pair_keeps_base() {
        let g = Graph::empty(2);
        let sub = whole(&g);
        // Degeneracy order of two isolated vertices is [1, 0].
        let base = [Move::new(1, 5)];
        let out = inductive_replay_recolor(&sub, &Coloring::uniform(2, 0), &[5, 6], &base, 20).unwrap();
        assert_eq!(&out.moves[..1], &base);
        assert_eq!(out.moves.len(), 2);
    }

    #[test]
    fn inductive_path_inserts_one_detour() {
        // P3 0-1-2; degeneracy order is [2, 1, 0]. Vertex 0 starts on fresh
        // color 6, which the base path later assigns to its neighbor 1.
        let g = path(3);
        let sub = whole(&g);
        let start = Coloring::new(vec![6, 0, 1]);
        let base = [Move::new(2, 5), Move::new(1, 6)];
        let out = inductive_replay_recolor(&sub, &start, &[5, 6, 7], &base, 20).unwrap();
        assert_eq!(out.moves.len(), base.len() + 1);
        assert_eq!(out.moves[1], Move::new(0, 5));
        let t = Trace::new(start, out.moves);
        assert_eq!(verify_trace(&g, &t), Ok(()));
        assert_eq!(apply_trace(&g, &t, true).unwrap(), Coloring::new(vec![5, 6, 5]));
    }

    #[test]
    fn inductive_from_scratch_is_proper() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        // Fresh colors 3 and 4 are already held inside U.
        let start = Coloring::new(vec![0, 3, 1, 4, 2]);
        let out = inductive_replay_recolor(&whole(&g), &start, &[3, 4, 5, 6], &[], 20).unwrap();
        let t = Trace::new(start, out.moves);
        assert_eq!(verify_trace(&g, &t), Ok(()));
        let end = apply_trace(&g, &t, true).unwrap();
        assert!(end.as_slice().iter().all(|c| (3..7).contains(c)));
    }

    #[test]
    fn inductive_rejects_bad_base_and_cap() {
        let g = path(3);
        let sub = whole(&g);
        let start = Coloring::new(vec![0, 1, 0]);
        // Vertex 0 is last in the order; recoloring it alone is not a prefix
        // path that leaves 2 and 1 fresh.
        assert!(matches!(
            inductive_replay_recolor(&sub, &start, &[5, 6, 7], &[Move::new(0, 5)], 20),
            Err(Error::InvalidBasePath(_))
        ));
        assert!(matches!(
            inductive_replay_recolor(&sub, &start, &[5, 6, 7], &[], 2),
            Err(Error::ResidualCapExceeded { size: 3, cap: 2 })
        ));
    }
}
