//! Coloring-to-coloring walks: squeeze the start coloring onto a work
//! palette disjoint from the target's colors, then move every vertex to its
//! target color class by class.

use std::collections::HashSet;

use crate::coloring::{colors_used, find_conflict, step, Coloring, Move, Trace};
use crate::error::{Error, Result};
use crate::generate::Partition;
use crate::graph::Graph;
use crate::greedy::{greedy_recolor, GreedyOptions, Selector};
use crate::params::derive_params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Threshold {
    /// `ceil(n / ln^2 d_hat)` computed from the start coloring's classes.
    #[default]
    Derived,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TransformOptions {
    pub threshold: Threshold,
    pub selector: Selector,
}

#[derive(Clone, Debug)]
pub struct TransformReport {
    pub trace: Trace,
    /// Moves onto the work palette (greedy rounds plus residual pass).
    pub phase1_moves: usize,
    /// Moves onto target colors.
    pub phase2_moves: usize,
    pub rounds: usize,
    pub residual_size: usize,
    pub work_colors_used: usize,
    pub work_palette_size: usize,
    pub target_colors: usize,
}

impl TransformReport {
    /// Whether work palette plus target colors fit within `q` colors.
    pub fn fits_within(&self, q: usize) -> bool {
        self.work_palette_size + self.target_colors <= q
    }

    pub fn to_records(&self) -> String {
        format!(
            "trace_length={}\nphase1_moves={}\nphase2_moves={}\nrounds={}\nresidual_size={}\n\
             work_colors_used={}\nwork_palette_size={}\ntarget_colors={}\n",
            self.trace.len(),
            self.phase1_moves,
            self.phase2_moves,
            self.rounds,
            self.residual_size,
            self.work_colors_used,
            self.work_palette_size,
            self.target_colors,
        )
    }
}

/// Color classes of `c` as a partition, classes numbered by ascending color.
pub fn partition_of(c: &Coloring) -> Result<Partition> {
    let classes = c.color_classes();
    let mut class_of = vec![0u32; c.len()];
    for (i, (_, members)) in classes.iter().enumerate() {
        for &v in members {
            class_of[v as usize] = i as u32;
        }
    }
    Partition::from_class_of(class_of, classes.len().max(1))
}

/// Concrete residual threshold for a start coloring.
pub fn resolve_threshold(g: &Graph, sigma: &Coloring, threshold: Threshold) -> Result<usize> {
    Ok(match threshold {
        Threshold::Fixed(l) => l,
        Threshold::Derived => match derive_params(g.n(), g.m() as u64, &partition_of(sigma)?) {
            Ok(p) => p.default_threshold(),
            Err(Error::NoCrossPairs) => g.n(),
            Err(e) => return Err(e),
        },
    })
}

fn check_proper(g: &Graph, c: &Coloring) -> Result<()> {
    match find_conflict(g, c)? {
        Some((u, v)) => Err(Error::ImproperColoring(u, v)),
        None => Ok(()),
    }
}

pub fn transform_to_target(
    g: &Graph,
    sigma: &Coloring,
    tau: &Coloring,
    work_palette: &[u32],
    opts: &TransformOptions,
) -> Result<TransformReport> {
    check_proper(g, sigma)?;
    check_proper(g, tau)?;
    let target_colors = tau.distinct_colors();
    if let Some(&c) = work_palette.iter().find(|c| target_colors.contains(c)) {
        return Err(Error::PaletteOverlap(c));
    }
    let mut report = TransformReport {
        trace: Trace::empty(sigma.clone()),
        phase1_moves: 0,
        phase2_moves: 0,
        rounds: 0,
        residual_size: 0,
        work_colors_used: 0,
        work_palette_size: work_palette.len(),
        target_colors: target_colors.len(),
    };
    if sigma == tau {
        return Ok(report);
    }

    let greedy = greedy_recolor(
        g,
        sigma,
        &GreedyOptions {
            palette: work_palette.to_vec(),
            threshold: resolve_threshold(g, sigma, opts.threshold)?,
            selector: opts.selector,
        },
    )?;
    let mut moves = greedy.trace.moves;
    let mut current = greedy.end;
    report.phase1_moves = moves.len();
    report.rounds = greedy.rounds;
    report.residual_size = greedy.residual_size;
    report.work_colors_used = colors_used(&current);

    let work: HashSet<u32> = work_palette.iter().copied().collect();
    for (color, members) in tau.color_classes() {
        for v in members {
            if current.get(v) == color {
                continue;
            }
            // Neighbors hold work colors or their own, different, target color.
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| {
                let cw = current.get(w);
                cw == color || !(work.contains(&cw) || cw == tau.get(w))
            }) {
                return Err(Error::Internal(format!(
                    "target move of {v} to {color} conflicts with neighbor {w}"
                )));
            }
            current.set(v, color);
            moves.push(Move::new(v, color));
        }
    }
    report.phase2_moves = moves.len() - report.phase1_moves;
    debug_assert_eq!(&current, tau);
    report.trace = Trace::new(sigma.clone(), moves);
    Ok(report)
}

/// Walk from `t`'s end back to its start.
pub fn reverse_trace(g: &Graph, t: &Trace) -> Result<Trace> {
    crate::coloring::verify_trace(g, t)?;
    let mut current = t.start.clone();
    let mut undo = Vec::with_capacity(t.moves.len());
    for (i, &mv) in t.moves.iter().enumerate() {
        let old = step(g, &mut current, i, mv)?;
        undo.push(Move::new(mv.vertex, old));
    }
    undo.reverse();
    Ok(Trace::new(current, undo))
}

#[derive(Clone, Debug)]
pub struct ConnectReport {
    pub trace: Trace,
    pub first_leg: usize,
    pub second_leg: usize,
}

/// `sigma -> tau` followed by the reversal of `sigma_prime -> tau`.
pub fn connect_pair(
    g: &Graph,
    sigma: &Coloring,
    sigma_prime: &Coloring,
    tau: &Coloring,
    work_palette: &[u32],
    opts: &TransformOptions,
) -> Result<ConnectReport> {
    let first = transform_to_target(g, sigma, tau, work_palette, opts)?.trace;
    let second = transform_to_target(g, sigma_prime, tau, work_palette, opts)?.trace;
    let back = reverse_trace(g, &second)?;
    let (first_leg, second_leg) = (first.len(), back.len());
    let mut moves = first.moves;
    moves.extend(back.moves);
    Ok(ConnectReport {
        trace: Trace::new(sigma.clone(), moves),
        first_leg,
        second_leg,
    })
}

/// A target built by a second greedy run from `sigma` on its own palette.
pub fn greedy_target(g: &Graph, sigma: &Coloring, palette: &[u32]) -> Result<Coloring> {
    let opts = GreedyOptions {
        palette: palette.to_vec(),
        threshold: resolve_threshold(g, sigma, Threshold::Derived)?,
        selector: Selector::LowestId,
    };
    Ok(greedy_recolor(g, sigma, &opts)?.end)
}

/// Work palette of `size` colors starting just above the target's largest color.
pub fn work_palette_above(tau: &Coloring, size: usize) -> Vec<u32> {
    let base = tau.palette_hint();
    (base..base + size as u32).collect()
}
