//! First-round candidate counts of greedy re-coloring against the
//! recurrence `u_{t+1} = u_t - Bin(u_t, p_hat) - 1`.
//!
//! A chosen vertex removes itself and its remaining neighbors from the
//! candidates. Its own class contributes no neighbors, so the true count
//! should dominate the recurrence started at the same `(u_0, p_hat)`.

use super::{fmt_f, fraction, median, planted_with_degree, run_trials, ExperimentConfig, Table};
use crate::error::{Error, Result};
use crate::generate::derive_seed;
use crate::greedy::{planted_options, run_greedy_recolor, simulate_recurrence, Selector};
use crate::params::derive_params;

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTrial {
    pub seed: u64,
    pub p_hat: f64,
    /// `u_0, u_1, ..` of the first round, ending at 0.
    pub greedy: Vec<u64>,
    pub recurrence: Vec<u64>,
}

impl CouplingTrial {
    /// Fraction of steps where this trial's own `u_t >= ũ_t`.
    pub fn step_dominance(&self) -> f64 {
        let len = self.greedy.len().max(self.recurrence.len());
        let hits = (0..len).filter(|&t| at(&self.greedy, t) >= at(&self.recurrence, t)).count();
        fraction(hits, len)
    }
}

fn at(seq: &[u64], t: usize) -> u64 {
    seq.get(t).copied().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingReport {
    pub n: usize,
    pub d: f64,
    pub q: usize,
    pub trials: Vec<CouplingTrial>,
    /// Pointwise medians over trials, sequences padded with zeros.
    pub median_greedy: Vec<f64>,
    pub median_recurrence: Vec<f64>,
}

impl CouplingReport {
    /// Fraction of steps where `median u_t >= median ũ_t`.
    pub fn dominance_fraction(&self) -> f64 {
        let hits = self
            .median_greedy
            .iter()
            .zip(&self.median_recurrence)
            .filter(|(a, b)| a >= b)
            .count();
        fraction(hits, self.median_greedy.len())
    }

    /// `t,median_u,median_recurrence` rows.
    pub fn medians_csv(&self) -> String {
        let mut out = String::from("t,median_u,median_recurrence\n");
        for (t, (a, b)) in self.median_greedy.iter().zip(&self.median_recurrence).enumerate() {
            out.push_str(&format!("{t},{},{}\n", fmt_f(*a), fmt_f(*b)));
        }
        out
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
                    fmt_f(t.p_hat),
                    at(&t.greedy, 0).to_string(),
                    (t.greedy.len() - 1).to_string(),
                    (t.recurrence.len() - 1).to_string(),
                    fmt_f(t.step_dominance()),
                ]
            })
            .collect();
        let steps = |f: &dyn Fn(&CouplingTrial) -> usize| -> Vec<f64> {
            self.trials.iter().map(|t| f(t) as f64).collect()
        };
        let summary = vec![vec![
            "summary".into(),
            String::new(),
            fmt_f(median(&self.trials.iter().map(|t| t.p_hat).collect::<Vec<_>>())),
            fmt_f(median(&steps(&|t| at(&t.greedy, 0) as usize))),
            fmt_f(median(&steps(&|t| t.greedy.len() - 1))),
            fmt_f(median(&steps(&|t| t.recurrence.len() - 1))),
            fmt_f(self.dominance_fraction()),
        ]];
        Table {
            columns: vec![
                "trial",
                "seed",
                "p_hat",
                "u0",
                "greedy_steps",
                "recurrence_steps",
                "step_dominance",
            ],
            rows,
            summary,
            notes: vec![
                ("n".into(), self.n.to_string()),
                ("d".into(), fmt_f(self.d)),
                ("q".into(), self.q.to_string()),
                ("median_steps".into(), self.median_greedy.len().to_string()),
                ("dominance_fraction".into(), fmt_f(self.dominance_fraction())),
                ("trials".into(), self.trials.len().to_string()),
            ],
        }
    }
}

fn pointwise_medians(seqs: &[&[u64]]) -> Vec<f64> {
    let len = seqs.iter().map(|s| s.len()).max().unwrap_or(0);
    (0..len)
        .map(|t| median(&seqs.iter().map(|s| at(s, t) as f64).collect::<Vec<_>>()))
        .collect()
}

pub fn run_coupling_experiment(cfg: &ExperimentConfig) -> Result<CouplingReport> {
    cfg.validate()?;
    let (n, d) = (cfg.n, cfg.d);
    let q = cfg.classes()?;
    let trials = run_trials(cfg.trials, cfg.jobs, |i| {
        let seed = cfg.trial_seed(i);
        let inst = planted_with_degree(n, d, q, false, derive_seed(seed, 0))?;
        let params = derive_params(n, inst.graph.m() as u64, &inst.partition)?;
        let report = run_greedy_recolor(&inst, &planted_options(&inst, Selector::LowestId)?)?;
        let greedy: Vec<u64> = match report.trajectory.first() {
            Some(round) => round.iter().map(|&u| u as u64).collect(),
            // No round ran (threshold >= n): nothing to compare.
            None => return Err(Error::InvalidConfig("no greedy round ran at this size".into())),
        };
        let recurrence = simulate_recurrence(greedy[0], params.p_hat, derive_seed(seed, 1))?;
        Ok(CouplingTrial {
            seed,
            p_hat: params.p_hat,
            greedy,
            recurrence,
        })
    })?;
    let greedy: Vec<&[u64]> = trials.iter().map(|t| t.greedy.as_slice()).collect();
    let recurrence: Vec<&[u64]> = trials.iter().map(|t| t.recurrence.as_slice()).collect();
    let (mut median_greedy, mut median_recurrence) =
        (pointwise_medians(&greedy), pointwise_medians(&recurrence));
    let len = median_greedy.len().max(median_recurrence.len());
    median_greedy.resize(len, 0.0);
    median_recurrence.resize(len, 0.0);
    Ok(CouplingReport {
        n,
        d,
        q,
        trials,
        median_greedy,
        median_recurrence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_probability_matches_pointwise() {
        // With p_hat = 0 the recurrence just counts down; so does an edgeless round.
        let seq = simulate_recurrence(6, 0.0, 1).unwrap();
        let t = CouplingTrial {
            seed: 0,
            p_hat: 0.0,
            greedy: vec![6, 5, 4, 3, 2, 1, 0],
            recurrence: seq,
        };
        assert_eq!(t.greedy, t.recurrence);
        assert_eq!(t.step_dominance(), 1.0);
    }

    #[test]
    fn medians_pad_with_zero() {
        let a: &[u64] = &[5, 3, 1, 0];
        let b: &[u64] = &[5, 2, 0];
        let c: &[u64] = &[5, 4, 2, 1, 0];
        assert_eq!(pointwise_medians(&[a, b, c]), vec![5.0, 3.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn small_run_dominates_and_repeats() {
        let mut cfg = ExperimentConfig::new(4000, 12.0, 3, 8);
        cfg.q = Some(8);
        let a = run_coupling_experiment(&cfg).unwrap();
        assert_eq!(a, run_coupling_experiment(&cfg).unwrap());
        assert!(a.trials.iter().all(|t| t.greedy[0] == 4000));
        assert_eq!(a.median_greedy.len(), a.median_recurrence.len());
        assert!(a.dominance_fraction() > 0.9, "{}", a.dominance_fraction());
    }
}
