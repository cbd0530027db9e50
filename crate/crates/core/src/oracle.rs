//! Exhaustive ground truth for tiny graphs: every proper `q`-coloring, the
//! Hamming-1 graph on them and its connected components.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use crate::coloring::{Coloring, Trace};
use crate::error::{Error, Result};
use crate::generate::rng_from_seed;
use crate::graph::Graph;

pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// Proper `q`-colorings in lexicographic order, by backtracking that only
/// extends partial colorings proper on the vertices assigned so far.
pub fn enumerate_colorings(g: &Graph, q: u32, cap: u128) -> Result<Vec<Coloring>> {
    let n = g.n();
    let assignments = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if assignments > cap {
        return Err(Error::EnumerationCap(format!("{q}^{n}")));
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Coloring::new(Vec::new()));
        return Ok(out);
    }
    if q == 0 {
        return Ok(out);
    }
    let mut colors = vec![0u32; n];
    let mut v = 0usize;
    // `colors[v]` is the next color to try at depth `v`.
    loop {
        let mut placed = false;
        while colors[v] < q {
            let c = colors[v];
            if g
                .neighbors(v as u32)
                .iter()
                .all(|&w| (w as usize) > v || colors[w as usize] != c)
            {
                placed = true;
                break;
            }
            colors[v] += 1;
        }
        if placed {
            if v + 1 == n {
                out.push(Coloring::new(colors.clone()));
                colors[v] += 1;
            } else {
                v += 1;
                colors[v] = 0;
            }
        } else {
            if v == 0 {
                break;
            }
            v -= 1;
            colors[v] += 1;
        }
    }
    Ok(out)
}

/// The solution-space graph on all proper `q`-colorings.
#[derive(Clone, Debug)]
pub struct HqGraph {
    pub q: u32,
    pub colorings: Vec<Coloring>,
    pub adjacency: Vec<Vec<u32>>,
    pub component: Vec<u32>,
    pub component_sizes: Vec<usize>,
    index: HashMap<Vec<u32>, u32>,
}

impl HqGraph {
    pub fn z(&self) -> usize {
        self.colorings.len()
    }

    pub fn components(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn index_of(&self, c: &Coloring) -> Option<u32> {
        self.index.get(c.as_slice()).copied()
    }

    pub fn is_edge(&self, a: u32, b: u32) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    pub fn same_component(&self, a: &Coloring, b: &Coloring) -> Option<bool> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Some(self.component[i as usize] == self.component[j as usize])
    }

    /// `component_id,size` rows.
    pub fn components_csv(&self) -> String {
        let mut out = String::from("component_id,size\n");
        for (i, s) in self.component_sizes.iter().enumerate() {
            out.push_str(&format!("{i},{s}\n"));
        }
        out
    }
}

/// Builds the Hamming-1 adjacency by mutating one vertex at a time and
/// looking the result up, then labels components by breadth-first search.
pub fn build_hq(colorings: Vec<Coloring>, q: u32) -> HqGraph {
    let index: HashMap<Vec<u32>, u32> = colorings
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice().to_vec(), i as u32))
        .collect();
    let mut adjacency = Vec::with_capacity(colorings.len());
    let mut scratch = Vec::new();
    for c in &colorings {
        scratch.clear();
        scratch.extend_from_slice(c.as_slice());
        let mut nbrs = Vec::new();
        for v in 0..scratch.len() {
            let orig = scratch[v];
            for alt in (0..q).filter(|&a| a != orig) {
                scratch[v] = alt;
                if let Some(&j) = index.get(&scratch) {
                    nbrs.push(j);
                }
            }
            scratch[v] = orig;
        }
        nbrs.sort_unstable();
        adjacency.push(nbrs);
    }

    let mut component = vec![u32::MAX; colorings.len()];
    let mut component_sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..colorings.len() {
        if component[s] != u32::MAX {
            continue;
        }
        let id = component_sizes.len() as u32;
        component[s] = id;
        queue.push_back(s as u32);
        let mut size = 0;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for &y in &adjacency[x as usize] {
                if component[y as usize] == u32::MAX {
                    component[y as usize] = id;
                    queue.push_back(y);
                }
            }
        }
        component_sizes.push(size);
    }
    HqGraph {
        q,
        colorings,
        adjacency,
        component,
        component_sizes,
        index,
    }
}

pub fn hq_of(g: &Graph, q: u32) -> Result<HqGraph> {
    Ok(build_hq(enumerate_colorings(g, q, DEFAULT_ENUMERATION_CAP)?, q))
}

/// Share of all proper colorings in the largest component.
pub fn giant_fraction(h: &HqGraph) -> Result<f64> {
    let largest = h
        .component_sizes
        .iter()
        .max()
        .ok_or(Error::NoColorings(h.q))?;
    Ok(*largest as f64 / h.z() as f64)
}

pub fn sample_uniform_coloring(g: &Graph, q: u32, seed: u64) -> Result<Coloring> {
    let all = enumerate_colorings(g, q, DEFAULT_ENUMERATION_CAP)?;
    pick_uniform(&all, q, seed)
}

/// Uniform draw from an already enumerated list.
pub fn pick_uniform(all: &[Coloring], q: u32, seed: u64) -> Result<Coloring> {
    if all.is_empty() {
        return Err(Error::NoColorings(q));
    }
    let i = rng_from_seed(seed).random_range(0..all.len());
    Ok(all[i].clone())
}

/// Every coloring along `t` is a vertex of `h` and consecutive ones are
/// `h`-adjacent.
pub fn certify_trace(h: &HqGraph, t: &Trace) -> Result<bool> {
    let mut current = t.start.clone();
    let check_range = |c: u32| {
        if c >= h.q {
            Err(Error::ColorOutOfRange { color: c, q: h.q })
        } else {
            Ok(())
        }
    };
    for &c in current.as_slice() {
        check_range(c)?;
    }
    let Some(mut at) = h.index_of(&current) else {
        return Ok(false);
    };
    for mv in &t.moves {
        check_range(mv.new_color)?;
        if mv.vertex as usize >= current.len() {
            return Ok(false);
        }
        current.set(mv.vertex, mv.new_color);
        let Some(next) = h.index_of(&current) else {
            return Ok(false);
        };
        if !h.is_edge(at, next) {
            return Ok(false);
        }
        at = next;
    }
    Ok(true)
}

/// Lexicographically first coloring with the fewest colors, trying
/// `1..=max_q` colors.
pub fn min_coloring(g: &Graph, max_q: u32) -> Result<Coloring> {
    for q in 1..=max_q {
        let all = enumerate_colorings(g, q, DEFAULT_ENUMERATION_CAP)?;
        if let Some(first) = all.into_iter().next() {
            return Ok(first);
        }
    }
    Err(Error::NoColorings(max_q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{hamming, is_proper, Move};
    use crate::graph::tests::path;

    /// Independent check: every one of the q^n assignments, filtered.
    fn all_assignments(g: &Graph, q: u32) -> Vec<Coloring> {
        let n = g.n();
        let total = (q as usize).pow(n as u32);
        (0..total)
            .map(|mut x| {
                let mut colors = vec![0u32; n];
                for slot in colors.iter_mut().rev() {
                    *slot = (x % q as usize) as u32;
                    x /= q as usize;
                }
                Coloring::new(colors)
            })
            .filter(|c| is_proper(g, c).unwrap())
            .collect()
    }

    #[test]
    fn fixtures() {
        let k3 = Graph::complete(3);
        assert_eq!(enumerate_colorings(&k3, 3, DEFAULT_ENUMERATION_CAP).unwrap().len(), 6);
        assert_eq!(enumerate_colorings(&Graph::empty(1), 3, DEFAULT_ENUMERATION_CAP).unwrap().len(), 3);
        assert!(enumerate_colorings(&path(2), 1, DEFAULT_ENUMERATION_CAP).unwrap().is_empty());

        let h = hq_of(&k3, 3).unwrap();
        assert_eq!((h.z(), h.components()), (6, 6));
        assert!((giant_fraction(&h).unwrap() - 1.0 / 6.0).abs() < 1e-12);

        let h = hq_of(&k3, 4).unwrap();
        assert_eq!(h.components(), 1);
        assert_eq!(giant_fraction(&h).unwrap(), 1.0);

        let h = hq_of(&path(3), 2).unwrap();
        assert_eq!((h.z(), h.components()), (2, 2));

        let h = hq_of(&Graph::empty(1), 3).unwrap();
        assert_eq!(h.components(), 1);
        assert!(h.adjacency.iter().all(|a| a.len() == 2));

        let h = hq_of(&Graph::empty(3), 2).unwrap();
        assert_eq!(giant_fraction(&h).unwrap(), 1.0);

        assert!(giant_fraction(&hq_of(&path(2), 1).unwrap()).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let graphs = [
            Graph::complete(4),
            path(5),
            Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap(),
            Graph::empty(4),
        ];
        for g in &graphs {
            for q in 1..=4 {
                let fast = enumerate_colorings(g, q, DEFAULT_ENUMERATION_CAP).unwrap();
                assert_eq!(fast, all_assignments(g, q));
            }
        }
    }

    #[test]
    fn adjacency_is_hamming_one() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let h = hq_of(&g, 3).unwrap();
        assert!(h.z() <= 2000);
        for i in 0..h.z() {
            for j in 0..h.z() {
                let d = hamming(&h.colorings[i], &h.colorings[j]).unwrap();
                assert_eq!(h.is_edge(i as u32, j as u32), d == 1);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_colorings(&Graph::empty(30), 5, DEFAULT_ENUMERATION_CAP),
            Err(Error::EnumerationCap(_))
        ));
    }

    #[test]
    fn uniform_samples() {
        let single = Graph::empty(1);
        let seen: std::collections::HashSet<u32> = (0..40)
            .map(|s| sample_uniform_coloring(&single, 2, s).unwrap().get(0))
            .collect();
        assert_eq!(seen.len(), 2);
        assert!(matches!(
            sample_uniform_coloring(&path(2), 1, 0),
            Err(Error::NoColorings(1))
        ));
    }

    #[test]
    fn uniform_frequencies_on_k3() {
        // Multinomial(6000, 1/6): each count has mean 1000 and sd ~ 28.9.
        let k3 = Graph::complete(3);
        let all = enumerate_colorings(&k3, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        let mut counts: HashMap<Coloring, usize> = HashMap::new();
        for s in 0..6000 {
            *counts.entry(pick_uniform(&all, 3, s).unwrap()).or_default() += 1;
        }
        let sd = (6000.0f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        assert_eq!(counts.len(), 6);
        for c in counts.values() {
            assert!((*c as f64 - 1000.0).abs() <= 5.0 * sd, "{c}");
        }
    }

    #[test]
    fn certify_examples() {
        let p3 = path(3);
        let h = hq_of(&p3, 3).unwrap();
        let start = Coloring::new(vec![0, 1, 0]);
        assert!(certify_trace(&h, &Trace::empty(start.clone())).unwrap());
        assert!(certify_trace(&h, &Trace::new(start.clone(), vec![Move::new(2, 2)])).unwrap());
        assert!(!certify_trace(&h, &Trace::new(start.clone(), vec![Move::new(1, 0)])).unwrap());
        assert!(certify_trace(&h, &Trace::new(start, vec![Move::new(1, 3)])).is_err());
    }

    #[test]
    fn minimum_colorings() {
        assert_eq!(min_coloring(&path(4), 4).unwrap(), Coloring::new(vec![0, 1, 0, 1]));
        assert_eq!(min_coloring(&Graph::complete(3), 4).unwrap(), Coloring::identity(3));
        assert!(min_coloring(&Graph::complete(3), 2).is_err());
    }
}
