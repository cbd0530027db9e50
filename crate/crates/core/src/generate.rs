//! Seeded random graph generators: `G(n, m)`, `G(n, p)`, random partitions
//! and the two planted variants (exactly `m` cross-class edges, or every
//! cross-class pair independently with probability `p_hat`).

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child seed for stream `index` of `base` (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

fn pair_key(u: u32, v: u32) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Uniform simple graph with exactly `m` edges.
pub fn gen_gnm(n: usize, m: u64, seed: u64) -> Result<Graph> {
    let max = pair_count(n);
    if m > max {
        return Err(Error::TooManyEdges { m, max });
    }
    let mut rng = rng_from_seed(seed);
    // Dense requests sample the complement instead, keeping rejection cheap.
    let dense = m > max / 2;
    let target = if dense { max - m } else { m };
    let mut chosen = HashSet::with_capacity(target as usize);
    let mut edges = Vec::with_capacity(target as usize);
    while (edges.len() as u64) < target {
        let u = rng.random_range(0..n as u32);
        let v = rng.random_range(0..n as u32);
        if u != v && chosen.insert(pair_key(u, v)) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    if dense {
        let n32 = n as u32;
        let all = (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v)));
        Graph::from_edges(n, all.filter(|&(u, v)| !chosen.contains(&pair_key(u, v))))
    } else {
        Graph::from_edges(n, edges)
    }
}

/// Walks the pairs `(w, v)`, `w < v`, in column order with geometric skips
/// and reports each pair that is hit.
fn skip_sample_pairs<R: Rng>(
    n: usize,
    p: f64,
    rng: &mut R,
    mut keep: impl FnMut(u32, u32),
) -> Result<()> {
    check_probability(p)?;
    if p == 0.0 || n < 2 {
        return Ok(());
    }
    let geometric = Geometric::new(p).map_err(|_| Error::InvalidProbability(p))?;
    let (mut v, mut w): (u64, i64) = (1, -1);
    let n = n as u64;
    loop {
        let skip = geometric.sample(rng);
        w = w.saturating_add(1).saturating_add(skip.min(i64::MAX as u64) as i64);
        while w >= v as i64 {
            w -= v as i64;
            v += 1;
            if v >= n {
                return Ok(());
            }
        }
        keep(w as u32, v as u32);
    }
}

/// Each of the `n(n-1)/2` pairs independently with probability `p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    skip_sample_pairs(n, p, &mut rng, |u, v| edges.push((u, v)))?;
    Graph::from_edges(n, edges)
}

/// Vertex partition `V_0..V_{q-1}` of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl Partition {
    pub fn from_class_of(class_of: Vec<u32>, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::NoClasses);
        }
        let mut classes = vec![Vec::new(); q];
        for (v, &c) in class_of.iter().enumerate() {
            let slot = classes.get_mut(c as usize).ok_or(Error::VertexOutOfRange {
                vertex: c,
                n: q,
            })?;
            slot.push(v as u32);
        }
        Ok(Partition { class_of, classes })
    }

    /// Contiguous blocks of near-equal size (vertex `v` in class `v*q/n`).
    pub fn blocks(n: usize, q: usize) -> Result<Self> {
        let class_of = (0..n).map(|v| (v * q / n.max(1)) as u32).collect();
        Partition::from_class_of(class_of, q)
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn q(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: u32) -> u32 {
        self.class_of[v as usize]
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Empty classes only arise for tiny `n` relative to `q`.
    pub fn empty_classes(&self) -> usize {
        self.classes.iter().filter(|c| c.is_empty()).count()
    }

    /// `sum_i C(|V_i|, 2)`: pairs that may not carry an edge.
    pub fn internal_pairs(&self) -> u64 {
        self.classes.iter().map(|c| pair_count(c.len())).sum()
    }

    /// Pairs with endpoints in different classes.
    pub fn cross_pairs(&self) -> u64 {
        pair_count(self.n()) - self.internal_pairs()
    }

    /// The planted coloring: each vertex colored by its class index.
    pub fn to_coloring(&self) -> Coloring {
        Coloring::new(self.class_of.clone())
    }
}

fn balanced_internal_pairs(n: usize, q: usize) -> u64 {
    let (base, extra) = (n / q, n % q);
    extra as u64 * pair_count(base + 1) + (q - extra) as u64 * pair_count(base)
}

const PARTITION_RETRIES: usize = 1000;

/// Uniform class per vertex, resampled until the classes leave at least `m`
/// cross pairs.
pub fn random_partition(n: usize, q: usize, m: u64, seed: u64) -> Result<Partition> {
    if q == 0 {
        return Err(Error::NoClasses);
    }
    let budget = pair_count(n)
        .checked_sub(m)
        .ok_or(Error::InfeasiblePartition { n, q, m })?;
    if balanced_internal_pairs(n, q) > budget {
        return Err(Error::InfeasiblePartition { n, q, m });
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..PARTITION_RETRIES {
        let class_of = (0..n).map(|_| rng.random_range(0..q as u32)).collect();
        let partition = Partition::from_class_of(class_of, q)?;
        if partition.internal_pairs() <= budget {
            return Ok(partition);
        }
    }
    Err(Error::PartitionRetriesExhausted(PARTITION_RETRIES))
}

/// Random partition with class sizes differing by at most one.
pub fn balanced_partition(n: usize, q: usize, seed: u64) -> Result<Partition> {
    if q == 0 {
        return Err(Error::NoClasses);
    }
    let mut vertices: Vec<u32> = (0..n as u32).collect();
    vertices.shuffle(&mut rng_from_seed(seed));
    let mut class_of = vec![0u32; n];
    for (i, &v) in vertices.iter().enumerate() {
        class_of[v as usize] = (i % q) as u32;
    }
    Partition::from_class_of(class_of, q)
}

/// How a planted instance's edges were drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeModel {
    /// Exactly `m` distinct cross-class edges.
    Exact { m: u64 },
    /// Each cross-class pair independently with probability `p_hat`.
    Independent { p_hat: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedParams {
    pub n: usize,
    pub q: usize,
    pub model: EdgeModel,
    pub seed: u64,
}

/// Graph plus the partition it was planted on; `sigma` colors each vertex
/// by its class and is proper by construction.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub partition: Partition,
    pub sigma: Coloring,
    pub params: PlantedParams,
}

impl PlantedInstance {
    /// Count of edges inside a class; zero for every generated instance.
    pub fn internal_edges(&self) -> usize {
        self.graph
            .edges()
            .filter(|&(u, v)| self.partition.class_of(u) == self.partition.class_of(v))
            .count()
    }
}

pub fn gen_planted_m(partition: &Partition, m: u64, seed: u64) -> Result<PlantedInstance> {
    let n = partition.n();
    let cross = partition.cross_pairs();
    if m > cross {
        return Err(Error::TooManyEdges { m, max: cross });
    }
    let mut rng = rng_from_seed(seed);
    let edges: Vec<(u32, u32)> = if m.saturating_mul(2) > cross {
        let n32 = n as u32;
        let mut all: Vec<(u32, u32)> = (0..n32)
            .flat_map(|u| (u + 1..n32).map(move |v| (u, v)))
            .filter(|&(u, v)| partition.class_of(u) != partition.class_of(v))
            .collect();
        let (chosen, _) = all.partial_shuffle(&mut rng, m as usize);
        let mut chosen = chosen.to_vec();
        chosen.sort_unstable();
        chosen
    } else {
        let mut seen = HashSet::with_capacity(m as usize);
        let mut edges = Vec::with_capacity(m as usize);
        while (edges.len() as u64) < m {
            let u = rng.random_range(0..n as u32);
            let v = rng.random_range(0..n as u32);
            if partition.class_of(u) != partition.class_of(v) && seen.insert(pair_key(u, v)) {
                edges.push((u.min(v), u.max(v)));
            }
        }
        edges
    };
    Ok(PlantedInstance {
        graph: Graph::from_edges(n, edges)?,
        partition: partition.clone(),
        sigma: partition.to_coloring(),
        params: PlantedParams {
            n,
            q: partition.q(),
            model: EdgeModel::Exact { m },
            seed,
        },
    })
}

pub fn gen_planted_p(partition: &Partition, p_hat: f64, seed: u64) -> Result<PlantedInstance> {
    let n = partition.n();
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    skip_sample_pairs(n, p_hat, &mut rng, |u, v| {
        if partition.class_of(u) != partition.class_of(v) {
            edges.push((u, v));
        }
    })?;
    Ok(PlantedInstance {
        graph: Graph::from_edges(n, edges)?,
        partition: partition.clone(),
        sigma: partition.to_coloring(),
        params: PlantedParams {
            n,
            q: partition.q(),
            model: EdgeModel::Independent { p_hat },
            seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_boundaries() {
        assert_eq!(gen_gnm(5, 0, 1).unwrap().m(), 0);
        assert_eq!(gen_gnm(5, 10, 1).unwrap(), Graph::complete(5));
        assert!(matches!(gen_gnm(5, 11, 1), Err(Error::TooManyEdges { .. })));
        let g = gen_gnm(100, 250, 7).unwrap();
        assert_eq!(g.m(), 250);
        assert_eq!(g, gen_gnm(100, 250, 7).unwrap());
        assert_ne!(g, gen_gnm(100, 250, 8).unwrap());
    }

    #[test]
    fn gnp_boundaries() {
        assert_eq!(gen_gnp(10, 0.0, 3).unwrap().m(), 0);
        assert_eq!(gen_gnp(10, 1.0, 3).unwrap(), Graph::complete(10));
        assert!(gen_gnp(10, 1.5, 3).is_err());
        assert!(gen_gnp(10, -0.1, 3).is_err());
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        // Binomial(C(n,2), p): mean 99990, sd ~ 316.2.
        let n = 10_000;
        let p = 20.0 / n as f64;
        let pairs = pair_count(n) as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        let m = gen_gnp(n, p, 11).unwrap().m() as f64;
        assert!((m - mean).abs() <= 5.0 * sd, "m={m} mean={mean} sd={sd}");
    }

    #[test]
    fn partition_constraint() {
        let p = random_partition(6, 6, 14, 1).unwrap();
        assert_eq!(p.sizes().iter().sum::<usize>(), 6);
        assert!(p.internal_pairs() <= 1);

        // Feasible, but a uniform draw is injective with probability 3.6e-4.
        assert!(matches!(
            random_partition(10, 10, 45, 1),
            Err(Error::PartitionRetriesExhausted(1000))
        ));

        let one = random_partition(6, 1, 0, 1).unwrap();
        assert_eq!(one.sizes(), vec![6]);
        assert_eq!(pair_count(6) - one.internal_pairs(), 0);

        assert!(matches!(
            random_partition(6, 1, 1, 1),
            Err(Error::InfeasiblePartition { .. })
        ));
        assert!(matches!(random_partition(6, 0, 0, 1), Err(Error::NoClasses)));
    }

    #[test]
    fn balanced_sizes() {
        let p = balanced_partition(103, 10, 5).unwrap();
        let sizes = p.sizes();
        assert!(sizes.iter().all(|&s| s == 10 || s == 11));
        assert_eq!(p.empty_classes(), 0);
        assert_eq!(balanced_partition(3, 5, 1).unwrap().empty_classes(), 2);
    }

    #[test]
    fn planted_exact_k22() {
        let partition = Partition::from_class_of(vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(partition.cross_pairs(), 4);
        let inst = gen_planted_m(&partition, 4, 9).unwrap();
        assert_eq!(
            inst.graph.edges().collect::<Vec<_>>(),
            vec![(0, 2), (0, 3), (1, 2), (1, 3)]
        );
        assert!(gen_planted_m(&partition, 5, 9).is_err());
        assert_eq!(gen_planted_m(&partition, 0, 9).unwrap().graph.m(), 0);
    }

    #[test]
    fn planted_independent_extremes() {
        let p = balanced_partition(20, 4, 2).unwrap();
        assert_eq!(gen_planted_p(&p, 0.0, 1).unwrap().graph.m(), 0);
        let two = Partition::from_class_of(vec![0, 1], 2).unwrap();
        let inst = gen_planted_p(&two, 1.0, 1).unwrap();
        assert_eq!(inst.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let full = gen_planted_p(&p, 1.0, 1).unwrap();
        assert_eq!(full.graph.m() as u64, p.cross_pairs());
    }

    #[test]
    fn planted_is_proper() {
        let p = balanced_partition(1000, 10, 3).unwrap();
        let inst = gen_planted_m(&p, 2500, 3).unwrap();
        assert_eq!(inst.graph.m(), 2500);
        assert_eq!(inst.internal_edges(), 0);
        assert!(crate::coloring::is_proper(&inst.graph, &inst.sigma).unwrap());
    }

    #[test]
    fn planted_average_degree_concentrates() {
        // Cross-pair count is exact from the class sizes; the edge count is
        // Binomial(cross, p_hat) with mean cross*p_hat.
        let (n, q, d) = (100_000usize, 30usize, 50.0f64);
        let p = balanced_partition(n, q, 17).unwrap();
        let cross = p.cross_pairs() as f64;
        let m = d * n as f64 / 2.0;
        let d_hat = m * n as f64 / cross;
        let p_hat = d_hat / n as f64;
        let inst = gen_planted_p(&p, p_hat, 17).unwrap();
        let mean = cross * p_hat;
        let sd = (cross * p_hat * (1.0 - p_hat)).sqrt();
        let got = inst.graph.m() as f64;
        assert!((got - mean).abs() <= 5.0 * sd, "m={got} mean={mean} sd={sd}");
        // Average degree 2m/n sits at d within the same band.
        assert!((2.0 * got / n as f64 - d).abs() <= 10.0 * sd / n as f64);
        assert_eq!(inst.internal_edges(), 0);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
    }
}
