//! Immutable simple undirected graphs and the structural routines the
//! recoloring algorithms lean on: induced subgraphs, peeling / degeneracy
//! orderings and greedy maximal independent sets.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` in compressed sparse row form.
///
/// Every row of the neighbor array is sorted, so membership queries are a
/// binary search over the shorter endpoint's row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let n32 = n as u32;
        let edges = (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph edges are valid")
    }

    /// Builds a graph from unordered pairs. Rejects loops, out-of-range
    /// endpoints and repeated pairs (in either orientation).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let edges: Vec<(u32, u32)> = edges.into_iter().collect();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        for &(u, v) in &edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        drop(edges);
        for v in 0..n {
            let row = &mut neighbors[offsets[v]..offsets[v + 1]];
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v as u32, w[0]);
                return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
            }
        }
        Ok(Graph { offsets, neighbors })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as u32).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u as usize >= self.n() || v as usize >= self.n() {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            let row = self.neighbors(u);
            let start = row.partition_point(|&w| w <= u);
            row[start..].iter().map(move |&w| (u, w))
        })
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }
}

/// Subgraph induced by `subset`, relabeled to `0..|subset|` in ascending
/// order of the original ids. `labels[i]` is the original id of local vertex `i`.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub labels: Vec<u32>,
}

impl InducedSubgraph {
    pub fn original(&self, local: u32) -> u32 {
        self.labels[local as usize]
    }
}

pub fn induced_subgraph(g: &Graph, subset: &[u32]) -> Result<InducedSubgraph> {
    let mut labels = subset.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let mut local = vec![u32::MAX; g.n()];
    for (i, &v) in labels.iter().enumerate() {
        g.check_vertex(v)?;
        local[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for (i, &v) in labels.iter().enumerate() {
        for &w in g.neighbors(v) {
            let j = local[w as usize];
            if j != u32::MAX && (i as u32) < j {
                edges.push((i as u32, j));
            }
        }
    }
    let graph = Graph::from_edges(labels.len(), edges)?;
    Ok(InducedSubgraph { graph, labels })
}

/// Number of edges with both endpoints in `subset` (duplicates ignored).
pub fn count_edges_within(g: &Graph, subset: &[u32]) -> Result<usize> {
    let mut marked = vec![false; g.n()];
    let mut members = Vec::with_capacity(subset.len());
    for &v in subset {
        g.check_vertex(v)?;
        if !marked[v as usize] {
            marked[v as usize] = true;
            members.push(v);
        }
    }
    Ok(members
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&w| w > v && marked[w as usize])
                .count()
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    /// Largest degree seen at removal time while peeling.
    pub degeneracy: usize,
    /// Vertex ordering in which each vertex has at most `degeneracy`
    /// neighbors earlier in the list (the peel order, reversed).
    pub order: Vec<u32>,
}

/// Repeatedly removes a minimum-degree vertex (lowest id on ties).
pub fn degeneracy_order(g: &Graph) -> Degeneracy {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..n as u32).map(|v| Reverse((degree[v as usize], v))).collect();
    let mut peeled = Vec::with_capacity(n);
    let mut degeneracy = 0;
    while let Some(Reverse((d, v))) = heap.pop() {
        if removed[v as usize] || d != degree[v as usize] {
            continue;
        }
        removed[v as usize] = true;
        degeneracy = degeneracy.max(d);
        peeled.push(v);
        for &w in g.neighbors(v) {
            if !removed[w as usize] {
                degree[w as usize] -= 1;
                heap.push(Reverse((degree[w as usize], w)));
            }
        }
    }
    peeled.reverse();
    Degeneracy {
        degeneracy,
        order: peeled,
    }
}

/// Scans `order` and keeps every vertex with no neighbor kept before it.
pub fn greedy_mis(g: &Graph, order: &[u32]) -> Result<Vec<u32>> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return Err(Error::NotAPermutation(n));
        }
    }
    let mut blocked = vec![false; n];
    let mut set = Vec::new();
    for &v in order {
        if !blocked[v as usize] {
            set.push(v);
            for &w in g.neighbors(v) {
                blocked[w as usize] = true;
            }
        }
    }
    Ok(set)
}
