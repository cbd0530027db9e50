//! Local sparsity of `G(n, m)` and the size and degeneracy of the residual
//! set left by greedy re-coloring of a planted instance.
//!
//! Sparsity check: every `S` with `|S| <= n / ln^2 Δ` should span at most
//! `|S| Δ / ln^2 Δ` edges. Residual check: the leftover set `U` should have
//! `|U| <= L` and no `K`-core, i.e. degeneracy `+ 1 <= K = 2 d_hat / ln^2 d_hat + 1`.

use rand::seq::index::sample;
use rand::Rng;

use super::{
    fmt_bound, fmt_f, fmt_flag, fraction, median, planted_with_degree, run_trials, ExperimentConfig,
    Table,
};
use crate::error::{Error, Result};
use crate::generate::{derive_seed, gen_gnm, rng_from_seed};
use crate::graph::{count_edges_within, Graph};
use crate::greedy::{planted_options, run_greedy_recolor, Selector};
use crate::params::derive_params;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityCheck {
    pub checked: usize,
    pub violations: usize,
    /// Largest `edges / bound` seen (0 when nothing was checked).
    pub worst_ratio: f64,
}

/// Checks `edges(S) <= |S| Δ / ln^2 Δ` on each subset.
pub fn check_density<I, S>(g: &Graph, subsets: I, delta: f64) -> Result<DensityCheck>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u32]>,
{
    if !(delta > 1.0) {
        return Err(Error::InvalidConfig(format!("density bound needs degree > 1, got {delta}")));
    }
    let per_vertex = delta / delta.ln().powi(2);
    let mut check = DensityCheck {
        checked: 0,
        violations: 0,
        worst_ratio: 0.0,
    };
    for s in subsets {
        let s = s.as_ref();
        let edges = count_edges_within(g, s)? as f64;
        let bound = s.len() as f64 * per_vertex;
        check.checked += 1;
        if edges > bound {
            check.violations += 1;
        }
        if bound > 0.0 {
            check.worst_ratio = check.worst_ratio.max(edges / bound);
        }
    }
    Ok(check)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTrial {
    pub seed: u64,
    pub subsets: DensityCheck,
    pub residual_size: usize,
    pub threshold: usize,
    pub residual_degeneracy: usize,
    pub k_core: Option<f64>,
    /// `degeneracy + 1 <= K`.
    pub no_k_core: Option<bool>,
    /// `degeneracy + 1 <= d_hat / ln^2 d_hat + 2`, the budget quoted for the residual step.
    pub within_quoted_budget: Option<bool>,
    pub residual_colors: usize,
    pub fresh_offered: usize,
}

impl DensityTrial {
    pub fn residual_within_threshold(&self) -> bool {
        self.residual_size <= self.threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub n: usize,
    pub d: f64,
    pub q: usize,
    pub max_subset: usize,
    pub trials: Vec<DensityTrial>,
}

impl DensityReport {
    pub fn subset_violations(&self) -> usize {
        self.trials.iter().map(|t| t.subsets.violations).sum()
    }

    pub fn fraction_within_threshold(&self) -> f64 {
        let hits = self.trials.iter().filter(|t| t.residual_within_threshold()).count();
        fraction(hits, self.trials.len())
    }

    pub fn fraction_no_k_core(&self) -> Option<f64> {
        self.trials.iter().all(|t| t.no_k_core.is_some()).then(|| {
            let hits = self.trials.iter().filter(|t| t.no_k_core == Some(true)).count();
            fraction(hits, self.trials.len())
        })
    }

    /// Trials where both residual properties hold.
    pub fn fraction_residual_ok(&self) -> f64 {
        let hits = self
            .trials
            .iter()
            .filter(|t| t.residual_within_threshold() && t.no_k_core == Some(true))
            .count();
        fraction(hits, self.trials.len())
    }

    pub fn table(&self) -> Table {
        let rows = self
            .trials
            .iter()
            .enumerate()
            .map(|(i, t)| {
                vec![
                    i.to_string(),
                    t.seed.to_string(),
                    t.subsets.checked.to_string(),
                    t.subsets.violations.to_string(),
                    fmt_f(t.subsets.worst_ratio),
                    t.residual_size.to_string(),
                    t.threshold.to_string(),
                    t.residual_degeneracy.to_string(),
                    fmt_bound(t.k_core),
                    fmt_flag(t.no_k_core),
                    fmt_flag(t.within_quoted_budget),
                    t.residual_colors.to_string(),
                ]
            })
            .collect();
        let col = |f: &dyn Fn(&DensityTrial) -> f64| -> Vec<f64> { self.trials.iter().map(f).collect() };
        let summary = vec![vec![
            "summary".into(),
            String::new(),
            self.trials.iter().map(|t| t.subsets.checked).sum::<usize>().to_string(),
            self.subset_violations().to_string(),
            fmt_f(col(&|t| t.subsets.worst_ratio).into_iter().fold(0.0, f64::max)),
            fmt_f(median(&col(&|t| t.residual_size as f64))),
            fmt_f(median(&col(&|t| t.threshold as f64))),
            fmt_f(median(&col(&|t| t.residual_degeneracy as f64))),
            fmt_f(median(&col(&|t| t.k_core.unwrap_or(f64::NAN)))),
            fmt_bound(self.fraction_no_k_core()),
            fmt_f(fraction(
                self.trials.iter().filter(|t| t.within_quoted_budget == Some(true)).count(),
                self.trials.len(),
            )),
            fmt_f(median(&col(&|t| t.residual_colors as f64))),
        ]];
        Table {
            columns: vec![
                "trial",
                "seed",
                "subsets",
                "violations",
                "worst_ratio",
                "residual_size",
                "threshold",
                "degeneracy",
                "k_core",
                "no_k_core",
                "within_quoted_budget",
                "residual_colors",
            ],
            rows,
            summary,
            notes: vec![
                ("n".into(), self.n.to_string()),
                ("d".into(), fmt_f(self.d)),
                ("q".into(), self.q.to_string()),
                ("max_subset".into(), self.max_subset.to_string()),
                ("fraction_within_threshold".into(), fmt_f(self.fraction_within_threshold())),
                ("fraction_residual_ok".into(), fmt_f(self.fraction_residual_ok())),
                ("trials".into(), self.trials.len().to_string()),
            ],
        }
    }
}

/// Largest subset size covered by the sparsity bound.
fn max_subset(n: usize, delta: f64) -> usize {
    if delta > 1.0 {
        (n as f64 / delta.ln().powi(2)).floor().min(n as f64) as usize
    } else {
        0
    }
}

pub fn run_density_experiment(cfg: &ExperimentConfig) -> Result<DensityReport> {
    cfg.validate()?;
    let (n, d) = (cfg.n, cfg.d);
    let q = cfg.classes()?;
    let s_max = max_subset(n, d);
    let subsets = if s_max == 0 { 0 } else { cfg.subsets };
    let trials = run_trials(cfg.trials, cfg.jobs, |i| {
        let seed = cfg.trial_seed(i);

        let check = if subsets > 0 {
            let g = gen_gnm(n, cfg.edges(), derive_seed(seed, 0))?;
            let mut rng = rng_from_seed(derive_seed(seed, 1));
            let sets = (0..subsets).map(|_| {
                let s = rng.random_range(1..=s_max);
                sample(&mut rng, n, s).into_iter().map(|v| v as u32).collect::<Vec<_>>()
            });
            check_density(&g, sets, d)?
        } else {
            DensityCheck {
                checked: 0,
                violations: 0,
                worst_ratio: 0.0,
            }
        };

        let inst = planted_with_degree(n, d, q, false, derive_seed(seed, 2))?;
        let params = derive_params(n, inst.graph.m() as u64, &inst.partition)?;
        let report = run_greedy_recolor(&inst, &planted_options(&inst, Selector::LowestId)?)?;
        let needed = report.residual_degeneracy + 1;
        if report.residual_size > 0
            && (report.residual_colors > needed || needed > report.residual_fresh.len())
        {
            return Err(Error::Internal(format!(
                "residual pass used {} colors with degeneracy {} and {} fresh colors",
                report.residual_colors,
                report.residual_degeneracy,
                report.residual_fresh.len()
            )));
        }
        Ok(DensityTrial {
            seed,
            subsets: check,
            residual_size: report.residual_size,
            threshold: report.threshold,
            residual_degeneracy: report.residual_degeneracy,
            k_core: params.k_core,
            no_k_core: params.k_core.map(|k| needed as f64 <= k),
            within_quoted_budget: params.residual_budget.map(|b| needed as f64 <= b),
            residual_colors: report.residual_colors,
            fresh_offered: report.residual_fresh.len(),
        })
    })?;
    Ok(DensityReport {
        n,
        d,
        q,
        max_subset: s_max,
        trials,
    })
}
