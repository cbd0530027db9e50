//! Greedy maximal independent sets of `G(n, m)` against the lower bound
//! `(ln Δ - 3 ln ln Δ) / p` with `p = Δ / n`.
//!
//! The bound holds for the smallest maximal independent set, hence for every
//! one, so each random-order greedy set is a valid sample.

use rand::seq::SliceRandom;

use super::{
    fmt_bound, fmt_f, fmt_flag, fraction, median, run_trials, ExperimentConfig, Table, MIS_BAND,
};
use crate::error::{Error, Result};
use crate::generate::{derive_seed, gen_gnm, rng_from_seed};
use crate::graph::greedy_mis;

/// `(ln Δ - 3 ln ln Δ) n / Δ`; `None` for the edgeless case `Δ = 0`.
/// Below `Δ = e` the correction term changes sign, so those degrees are
/// rejected along with the ones where the bound is non-positive.
pub fn mis_bound(n: usize, delta: f64) -> Result<Option<f64>> {
    if delta == 0.0 {
        return Ok(None);
    }
    let numerator = if delta > std::f64::consts::E {
        delta.ln() - 3.0 * delta.ln().ln()
    } else {
        f64::NAN
    };
    if !(numerator > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "independent-set bound is non-positive at degree {delta}: 3 ln ln d >= ln d"
        )));
    }
    Ok(Some(numerator * n as f64 / delta))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MisTrial {
    pub seed: u64,
    pub edges: usize,
    pub size: usize,
    pub meets_bound: Option<bool>,
    /// `size / (n ln Δ / Δ)`; NaN when `Δ <= 1`.
    pub ratio: f64,
    pub in_band: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MisReport {
    pub n: usize,
    pub delta: f64,
    pub m: u64,
    pub bound: Option<f64>,
    /// `n ln Δ / Δ`, the scale of the calibration band.
    pub reference: Option<f64>,
    pub band: (f64, f64),
    pub trials: Vec<MisTrial>,
}

impl MisReport {
    pub fn fraction_meeting_bound(&self) -> Option<f64> {
        self.bound?;
        let hits = self.trials.iter().filter(|t| t.meets_bound == Some(true)).count();
        Some(fraction(hits, self.trials.len()))
    }

    pub fn fraction_in_band(&self) -> Option<f64> {
        self.reference?;
        let hits = self.trials.iter().filter(|t| t.in_band == Some(true)).count();
        Some(fraction(hits, self.trials.len()))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.trials.iter().map(|t| t.size).collect()
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
                    t.edges.to_string(),
                    t.size.to_string(),
                    fmt_bound(self.bound),
                    fmt_flag(t.meets_bound),
                    fmt_f(t.ratio),
                    fmt_flag(t.in_band),
                ]
            })
            .collect();
        let sizes: Vec<f64> = self.trials.iter().map(|t| t.size as f64).collect();
        let ratios: Vec<f64> = self.trials.iter().map(|t| t.ratio).collect();
        let summary = vec![vec![
            "summary".into(),
            String::new(),
            self.m.to_string(),
            fmt_f(median(&sizes)),
            fmt_bound(self.bound),
            fmt_bound(self.fraction_meeting_bound()),
            fmt_f(median(&ratios)),
            fmt_bound(self.fraction_in_band()),
        ]];
        let (min, max) = sizes
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        Table {
            columns: vec![
                "trial", "seed", "edges", "mis_size", "bound", "meets_bound", "size_ratio",
                "in_band",
            ],
            rows,
            summary,
            notes: vec![
                ("n".into(), self.n.to_string()),
                ("delta".into(), fmt_f(self.delta)),
                ("p".into(), fmt_f(self.delta / self.n as f64)),
                ("reference".into(), fmt_bound(self.reference)),
                ("band".into(), format!("{}..{}", fmt_f(self.band.0), fmt_f(self.band.1))),
                ("min_size".into(), fmt_f(min)),
                ("max_size".into(), fmt_f(max)),
                ("trials".into(), self.trials.len().to_string()),
            ],
        }
    }
}

pub fn run_mis_experiment(cfg: &ExperimentConfig) -> Result<MisReport> {
    cfg.validate()?;
    let (n, delta) = (cfg.n, cfg.d);
    let bound = mis_bound(n, delta)?;
    let m = cfg.edges();
    let band = cfg.band.unwrap_or(MIS_BAND);
    let reference = (delta > 1.0).then(|| n as f64 * delta.ln() / delta);
    let trials = run_trials(cfg.trials, cfg.jobs, |i| {
        let seed = cfg.trial_seed(i);
        let g = gen_gnm(n, m, derive_seed(seed, 0))?;
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.shuffle(&mut rng_from_seed(derive_seed(seed, 1)));
        let size = greedy_mis(&g, &order)?.len();
        let ratio = reference.map_or(f64::NAN, |r| size as f64 / r);
        Ok(MisTrial {
            seed,
            edges: g.m(),
            size,
            meets_bound: bound.map(|b| size as f64 >= b),
            ratio,
            in_band: reference.map(|_| band.0 <= ratio && ratio <= band.1),
        })
    })?;
    Ok(MisReport {
        n,
        delta,
        m,
        bound,
        reference,
        band,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        // (4.605170 - 3 * 1.527180) * 1e5 / 100 = 0.023631 * 1e3
        let b = mis_bound(100_000, 100.0).unwrap().unwrap();
        assert!((b - 23.6313).abs() < 1e-3, "{b}");
        // 3 ln ln 20 = 3.2916 > ln 20 = 2.9957
        assert!(matches!(mis_bound(1000, 20.0), Err(Error::InvalidConfig(_))));
        assert!(mis_bound(1000, 1.0).is_err());
        assert!(mis_bound(1000, 2.0).is_err());
        assert_eq!(mis_bound(1000, 0.0).unwrap(), None);
    }

    #[test]
    fn edgeless_gives_everything() {
        let rep = run_mis_experiment(&ExperimentConfig::new(50, 0.0, 3, 9)).unwrap();
        assert!(rep.trials.iter().all(|t| t.size == 50 && t.edges == 0));
        assert_eq!(rep.fraction_meeting_bound(), None);
        assert!(rep.table().to_csv().contains(",inactive,"));
    }

    #[test]
    fn deterministic_and_job_independent() {
        let mut cfg = ExperimentConfig::new(2000, 100.0, 4, 21);
        let a = run_mis_experiment(&cfg).unwrap();
        cfg.jobs = 3;
        let b = run_mis_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.table().to_csv(), b.table().to_csv());
        assert!(a.trials.iter().all(|t| t.edges == 100_000));
    }
}
