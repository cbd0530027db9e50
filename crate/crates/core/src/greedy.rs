//! Greedy re-coloring along a walk of proper colorings.
//!
//! The start coloring's color classes play the role of the independent sets
//! `V_1, V_2, ...`. Round `r` takes the first class `k` that still has
//! untouched vertices, gives all of them palette color `r` (line A), then
//! keeps adding any untouched vertex with no neighbor of color `r` until none
//! is left (loops B/C). Rounds stop once at most `threshold` untouched
//! vertices remain; those are handed to the residual pass with colors from
//! the palette that nobody holds any more.
//!
//! Classes are ordered so that the class whose start color is `palette[i]`
//! sits at position `i`; classes with colors outside the palette come after,
//! ascending. With the identity palette this is the plain class order, and in
//! general it guarantees that when color `palette[r]` is handed out, the only
//! untouched vertices that could hold it belong to the class processed in
//! that same round.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand_distr::{Binomial, Distribution};

use crate::coloring::{Coloring, Move, Trace};
use crate::error::{Error, Result};
use crate::generate::{rng_from_seed, PlantedInstance};
use crate::graph::{induced_subgraph, Graph};
use crate::params::derive_params;
use crate::residual::degeneracy_recolor_greedy;

/// Policy for "choose any remaining candidate" in loop B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Selector {
    #[default]
    LowestId,
    HighestDegree,
    /// A fresh uniform permutation of the vertices every round.
    Random { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct GreedyOptions {
    /// Colors handed out in round order; leftover unused ones feed the residual pass.
    pub palette: Vec<u32>,
    /// Rounds stop once `|U| <= threshold`.
    pub threshold: usize,
    pub selector: Selector,
}

/// Enough colors for any run: greedy rounds and the residual pass each need
/// at most `max_degree + 1`.
pub fn default_palette(q: usize, max_degree: usize) -> Vec<u32> {
    (0..(q + 2 * max_degree + 2) as u32).collect()
}

#[derive(Clone, Debug)]
pub struct GreedyReport {
    pub trace: Trace,
    pub end: Coloring,
    pub threshold: usize,
    pub rounds: usize,
    /// Class position consumed at line A of each round.
    pub round_classes: Vec<usize>,
    /// Vertices finalized in each round.
    pub round_sizes: Vec<usize>,
    /// Moves emitted before the residual pass.
    pub phase1_moves: usize,
    pub phase1_colors: usize,
    pub residual_colors: usize,
    pub total_colors: usize,
    /// `|U|` when the rounds stop.
    pub residual_size: usize,
    /// Degeneracy of `G[U]` (0 when `U` is empty).
    pub residual_degeneracy: usize,
    /// Fresh colors offered to the residual pass.
    pub residual_fresh: Vec<u32>,
    /// Per round: candidate-set sizes `u_0, u_1, ..` after each finalized vertex.
    pub trajectory: Vec<Vec<usize>>,
    /// `total_colors / q0` when `q0` is defined.
    pub q0_comparison: Option<f64>,
}

impl GreedyReport {
    pub fn max_color(&self) -> u32 {
        self.end.palette_hint().saturating_sub(1)
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("rounds", self.rounds.to_string());
        push("threshold", self.threshold.to_string());
        push("phase1_moves", self.phase1_moves.to_string());
        push("trace_length", self.trace.len().to_string());
        push("phase1_colors", self.phase1_colors.to_string());
        push("residual_colors", self.residual_colors.to_string());
        push("total_colors", self.total_colors.to_string());
        push("residual_size", self.residual_size.to_string());
        push("residual_degeneracy", self.residual_degeneracy.to_string());
        push("max_color", self.max_color().to_string());
        push(
            "round_sizes",
            self.round_sizes
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
        push(
            "q0_comparison",
            self.q0_comparison
                .map_or_else(|| "undefined".to_string(), |r| format!("{r:.6}")),
        );
        out
    }

    /// `round,t,u_t` rows.
    pub fn trajectory_csv(&self) -> String {
        let mut out = String::from("round,t,u_t\n");
        for (r, seq) in self.trajectory.iter().enumerate() {
            for (t, u) in seq.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", r + 1, t, u));
            }
        }
        out
    }
}

/// Start-coloring classes placed by palette position; see the module docs.
fn ordered_classes(sigma: &Coloring, palette: &[u32]) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut slot: HashMap<u32, usize> =
        palette.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut extra: Vec<u32> = sigma
        .distinct_colors()
        .into_iter()
        .filter(|c| !slot.contains_key(c))
        .collect();
    extra.sort_unstable();
    for (i, c) in extra.into_iter().enumerate() {
        slot.insert(c, palette.len() + i);
    }
    let mut classes = vec![Vec::new(); slot.len()];
    let mut position = vec![0usize; sigma.len()];
    for v in 0..sigma.len() as u32 {
        let p = slot[&sigma.get(v)];
        classes[p].push(v);
        position[v as usize] = p;
    }
    (classes, position)
}

fn priority(g: &Graph, selector: Selector, round: usize) -> Option<Vec<u32>> {
    match selector {
        Selector::LowestId => None,
        Selector::HighestDegree => {
            let mut order: Vec<u32> = (0..g.n() as u32).collect();
            order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            Some(order)
        }
        Selector::Random { seed } => {
            let mut order: Vec<u32> = (0..g.n() as u32).collect();
            let mut rng = rng_from_seed(crate::generate::derive_seed(seed, round as u64));
            order.shuffle(&mut rng);
            Some(order)
        }
    }
}

/// Runs the greedy rounds and the residual pass on `g` from the proper
/// coloring `sigma`, whose color classes serve as the independent sets.
pub fn greedy_recolor(g: &Graph, sigma: &Coloring, opts: &GreedyOptions) -> Result<GreedyReport> {
    let n = g.n();
    if sigma.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: sigma.len(),
        });
    }
    if let Some((u, v)) = crate::coloring::find_conflict(g, sigma)? {
        return Err(Error::ImproperColoring(u, v));
    }
    let mut seen = HashSet::with_capacity(opts.palette.len());
    for &c in &opts.palette {
        if !seen.insert(c) {
            return Err(Error::DuplicatePaletteColor(c));
        }
    }

    let (classes, position) = ordered_classes(sigma, &opts.palette);
    let mut remaining: Vec<usize> = classes.iter().map(Vec::len).collect();
    let mut in_u = vec![true; n];
    let mut u_size = n;
    let mut current = sigma.clone();
    let mut moves = Vec::new();
    let mut candidate = vec![false; n];
    let mut k = 0usize;

    let mut round_classes = Vec::new();
    let mut round_sizes = Vec::new();
    let mut trajectory = Vec::new();

    let fixed_order = match opts.selector {
        Selector::HighestDegree => priority(g, opts.selector, 0),
        _ => None,
    };

    while u_size > opts.threshold {
        let r = round_classes.len();
        let Some(&color) = opts.palette.get(r) else {
            return Err(Error::PaletteExhausted {
                rounds_completed: r,
                remaining: u_size,
            });
        };
        while remaining[k] == 0 {
            k += 1;
        }
        debug_assert!(r <= k);

        candidate.copy_from_slice(&in_u);
        let mut candidates = u_size;
        let mut traj = vec![candidates];
        let mut finalized = 0usize;

        let mut finalize = |v: u32,
                            in_u: &mut [bool],
                            candidate: &mut [bool],
                            current: &mut Coloring,
                            candidates: &mut usize| {
            in_u[v as usize] = false;
            candidate[v as usize] = false;
            *candidates -= 1;
            remaining[position[v as usize]] -= 1;
            for &w in g.neighbors(v) {
                if std::mem::replace(&mut candidate[w as usize], false) {
                    *candidates -= 1;
                }
            }
            if current.get(v) != color {
                debug_assert!(g.neighbors(v).iter().all(|&w| current.get(w) != color));
                moves.push(Move::new(v, color));
                current.set(v, color);
            }
        };

        // Line A: the whole untouched part of class k.
        for &v in &classes[k] {
            if in_u[v as usize] {
                finalize(v, &mut in_u, &mut candidate, &mut current, &mut candidates);
                finalized += 1;
                traj.push(candidates);
            }
        }
        // Loops B/C: drain the candidate set.
        let round_order = match opts.selector {
            Selector::Random { .. } => priority(g, opts.selector, r),
            _ => None,
        };
        let order = round_order.as_deref().or(fixed_order.as_deref());
        let mut cursor = 0usize;
        while candidates > 0 {
            let v = match order {
                Some(order) => {
                    while !candidate[order[cursor] as usize] {
                        cursor += 1;
                    }
                    order[cursor]
                }
                None => {
                    while !candidate[cursor] {
                        cursor += 1;
                    }
                    cursor as u32
                }
            };
            finalize(v, &mut in_u, &mut candidate, &mut current, &mut candidates);
            finalized += 1;
            traj.push(candidates);
        }
        u_size -= finalized;
        round_classes.push(k);
        round_sizes.push(finalized);
        trajectory.push(traj);
    }

    let rounds = round_classes.len();
    let phase1_moves = moves.len();
    let residual: Vec<u32> = (0..n as u32).filter(|&v| in_u[v as usize]).collect();
    let (residual_colors, residual_degeneracy, residual_fresh) = if residual.is_empty() {
        (0, 0, Vec::new())
    } else {
        let present = current.distinct_colors();
        let fresh: Vec<u32> = opts
            .palette
            .iter()
            .copied()
            .filter(|c| !present.contains(c))
            .collect();
        let sub = induced_subgraph(g, &residual)?;
        let outcome = degeneracy_recolor_greedy(&sub, &current, &fresh)?;
        for mv in &outcome.moves {
            current.set(mv.vertex, mv.new_color);
        }
        moves.extend(outcome.moves);
        (outcome.colors_used, outcome.degeneracy, fresh)
    };

    Ok(GreedyReport {
        trace: Trace::new(sigma.clone(), moves),
        end: current,
        threshold: opts.threshold,
        rounds,
        round_classes,
        round_sizes,
        phase1_moves,
        phase1_colors: rounds,
        residual_colors,
        total_colors: rounds + residual_colors,
        residual_size: residual.len(),
        residual_degeneracy,
        residual_fresh,
        trajectory,
        q0_comparison: None,
    })
}

/// Greedy re-coloring of a planted instance from its planted coloring.
pub fn run_greedy_recolor(inst: &PlantedInstance, opts: &GreedyOptions) -> Result<GreedyReport> {
    let mut report = greedy_recolor(&inst.graph, &inst.sigma, opts)?;
    if let Ok(params) = derive_params(inst.graph.n(), inst.graph.m() as u64, &inst.partition) {
        report.q0_comparison = params.q0.map(|q0| report.total_colors as f64 / q0);
    }
    Ok(report)
}

/// Planted-instance options with the derived threshold and an ample palette.
pub fn planted_options(inst: &PlantedInstance, selector: Selector) -> Result<GreedyOptions> {
    let params = derive_params(inst.graph.n(), inst.graph.m() as u64, &inst.partition)?;
    Ok(GreedyOptions {
        palette: default_palette(inst.partition.q(), inst.graph.max_degree()),
        threshold: params.default_threshold(),
        selector,
    })
}

/// `u_{t+1} = u_t - Bin(u_t, p_hat) - 1`, clamped at zero; the sequence ends
/// with its first zero.
pub fn simulate_recurrence(u0: u64, p_hat: f64, seed: u64) -> Result<Vec<u64>> {
    if !(0.0..=1.0).contains(&p_hat) {
        return Err(Error::InvalidProbability(p_hat));
    }
    let mut rng = rng_from_seed(seed);
    let mut seq = vec![u0];
    let mut u = u0;
    while u > 0 {
        let removed = Binomial::new(u, p_hat)
            .map_err(|_| Error::InvalidProbability(p_hat))?
            .sample(&mut rng);
        u = u.saturating_sub(removed + 1);
        seq.push(u);
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_trace;
    use crate::generate::{balanced_partition, gen_planted_m, gen_planted_p, Partition};

    fn identity_opts(n: usize, threshold: usize) -> GreedyOptions {
        GreedyOptions {
            palette: (0..n as u32 + 4).collect(),
            threshold,
            selector: Selector::LowestId,
        }
    }

    #[test]
    fn edgeless_single_round() {
        let partition = Partition::from_class_of(vec![2, 0, 1, 2, 1, 0], 3).unwrap();
        let inst = gen_planted_m(&partition, 0, 1).unwrap();
        let rep = run_greedy_recolor(&inst, &identity_opts(6, 0)).unwrap();
        assert_eq!(rep.rounds, 1);
        assert_eq!(rep.phase1_colors, 1);
        // Everything ends on color 0; class 0 already had it.
        assert_eq!(rep.trace.len(), 4);
        assert_eq!(rep.end, Coloring::uniform(6, 0));
    }

    #[test]
    fn k22_needs_no_moves() {
        let partition = Partition::from_class_of(vec![0, 0, 1, 1], 2).unwrap();
        let inst = gen_planted_m(&partition, 4, 1).unwrap();
        let rep = run_greedy_recolor(&inst, &identity_opts(4, 0)).unwrap();
        assert_eq!(rep.rounds, 2);
        assert_eq!(rep.round_classes, vec![0, 1]);
        assert_eq!(rep.round_sizes, vec![2, 2]);
        assert_eq!(rep.phase1_colors, 2);
        assert!(rep.trace.is_empty());
        // Finalizing 0 also knocks out its neighbors 2 and 3.
        assert_eq!(rep.trajectory[0], vec![4, 1, 0]);
    }

    #[test]
    fn palette_exhaustion_is_reported() {
        let partition = Partition::from_class_of(vec![0, 0, 1, 1], 2).unwrap();
        let inst = gen_planted_m(&partition, 4, 1).unwrap();
        let opts = GreedyOptions {
            palette: vec![0],
            threshold: 0,
            selector: Selector::LowestId,
        };
        assert!(matches!(
            run_greedy_recolor(&inst, &opts),
            Err(Error::PaletteExhausted {
                rounds_completed: 1,
                remaining: 2
            })
        ));
    }

    #[test]
    fn non_identity_palette_stays_proper() {
        let partition = balanced_partition(400, 8, 4).unwrap();
        let inst = gen_planted_p(&partition, 0.03, 4).unwrap();
        // Palette reuses planted colors in scrambled order plus new ones.
        let palette: Vec<u32> = [5, 2, 7, 100, 0, 101, 3, 102, 1, 4, 6]
            .into_iter()
            .chain(200..260)
            .collect();
        for threshold in [0, 50, 400] {
            let opts = GreedyOptions {
                palette: palette.clone(),
                threshold,
                selector: Selector::Random { seed: 9 },
            };
            let rep = run_greedy_recolor(&inst, &opts).unwrap();
            assert_eq!(verify_trace(&inst.graph, &rep.trace), Ok(()));
            assert!(rep.residual_size <= threshold);
            let palette_set: HashSet<u32> = palette.iter().copied().collect();
            assert!(rep.end.as_slice().iter().all(|c| palette_set.contains(c)));
        }
    }

    #[test]
    fn invariants_on_planted_run() {
        let partition = balanced_partition(3000, 12, 8).unwrap();
        let inst = gen_planted_p(&partition, 12.0 / 3000.0, 8).unwrap();
        for selector in [
            Selector::LowestId,
            Selector::HighestDegree,
            Selector::Random { seed: 3 },
        ] {
            let opts = planted_options(&inst, selector).unwrap();
            let rep = run_greedy_recolor(&inst, &opts).unwrap();
            assert_eq!(verify_trace(&inst.graph, &rep.trace), Ok(()));
            assert!(rep.residual_size <= opts.threshold);
            assert_eq!(rep.total_colors, rep.phase1_colors + rep.residual_colors);
            assert!(rep.round_classes.windows(2).all(|w| w[0] < w[1]));
            assert!(rep.round_classes.iter().enumerate().all(|(r, &k)| r <= k));
            for seq in &rep.trajectory {
                assert!(seq.windows(2).all(|w| w[1] < w[0]));
            }
        }
    }

    #[test]
    fn trajectory_drop_bounded_by_degree() {
        let partition = balanced_partition(2000, 10, 2).unwrap();
        let inst = gen_planted_p(&partition, 0.01, 2).unwrap();
        let opts = GreedyOptions {
            palette: default_palette(10, inst.graph.max_degree()),
            threshold: 0,
            selector: Selector::LowestId,
        };
        let rep = run_greedy_recolor(&inst, &opts).unwrap();
        let max_deg = inst.graph.max_degree();
        for seq in &rep.trajectory {
            assert!(seq.windows(2).all(|w| w[1] + 1 + max_deg >= w[0]));
        }
    }

    #[test]
    fn recurrence_extremes() {
        assert_eq!(
            simulate_recurrence(10, 0.0, 1).unwrap(),
            (0..=10).rev().collect::<Vec<u64>>()
        );
        assert_eq!(simulate_recurrence(10, 1.0, 1).unwrap(), vec![10, 0]);
        assert_eq!(simulate_recurrence(0, 0.5, 1).unwrap(), vec![0]);
        assert!(simulate_recurrence(10, 1.5, 1).is_err());
    }

    /// Second implementation: Bernoulli trials instead of a binomial sampler.
    fn recurrence_by_coins(u0: u64, p: f64, seed: u64) -> usize {
        use rand::Rng;
        let mut rng = rng_from_seed(seed ^ 0xDEAD_BEEF);
        let mut u = u0;
        let mut len = 1;
        while u > 0 {
            let removed = (0..u).filter(|_| rng.random::<f64>() < p).count() as u64;
            u = u.saturating_sub(removed + 1);
            len += 1;
        }
        len
    }

    #[test]
    fn recurrence_length_matches_independent_simulation() {
        let (u0, p) = (100_000u64, 5e-4);
        let lens: Vec<f64> = (0..30)
            .map(|s| recurrence_by_coins(u0, p, s) as f64)
            .collect();
        let mean = lens.iter().sum::<f64>() / lens.len() as f64;
        let var = lens.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (lens.len() - 1) as f64;
        let sd = var.sqrt().max(1.0);
        let got = simulate_recurrence(u0, p, 1).unwrap().len() as f64;
        assert!((got - mean).abs() <= 5.0 * sd, "got={got} mean={mean} sd={sd}");
    }
}
