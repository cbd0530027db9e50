//! Colors used by greedy re-coloring across a sweep of average degrees,
//! normalized as `total_colors * ln d / d`.

use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{
    fmt_bound, fmt_f, mean, planted_with_degree, run_trials, standard_error, ExperimentConfig,
    Table, SCALING_BAND,
};
use crate::error::{Error, Result};
use crate::generate::derive_seed;
use crate::greedy::{planted_options, run_greedy_recolor, Selector};

/// Class count `ceil(2d / ln d)` used for each degree in the sweep.
pub fn scaling_q(d: f64) -> Result<usize> {
    if !(d > 1.0) {
        return Err(Error::InvalidConfig(format!("degree {d} too small for a class count")));
    }
    Ok((2.0 * d / d.ln()).ceil().max(1.0) as usize)
}

/// Per-round recoloring bound `((q-1)/q) (ln Δ' - 6 ln ln Δ') n / d` with
/// `Δ' = d u / n` for a round that starts with `u` candidates; at `u = n`
/// this is `((q-1)/q) (ln d - 6 ln ln d) n / d`. `None` when not positive,
/// or when `Δ' <= e` and the correction term would add instead of subtract.
pub fn round_bound(n: usize, d: f64, q: usize, u: usize) -> Option<f64> {
    let delta = d * u as f64 / n as f64;
    if !(delta > std::f64::consts::E) || q == 0 {
        return None;
    }
    let numerator = delta.ln() - 6.0 * delta.ln().ln();
    (numerator > 0.0).then(|| (q - 1) as f64 / q as f64 * numerator * n as f64 / d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingTrial {
    pub d: f64,
    pub seed: u64,
    pub q: usize,
    pub edges: usize,
    pub rounds: usize,
    pub phase1_colors: usize,
    pub residual_colors: usize,
    pub total_colors: usize,
    pub ratio: f64,
    /// Rounds whose bound is positive, and how many of those met it.
    pub active_rounds: usize,
    pub rounds_meeting_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub d: f64,
    pub q: usize,
    pub mean_ratio: f64,
    pub se_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_total_colors: f64,
    pub active_rounds: usize,
    pub rounds_meeting_bound: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub n: usize,
    pub band: (f64, f64),
    pub trials: Vec<ScalingTrial>,
    pub rows: Vec<ScalingRow>,
}

/// Slack allowed when comparing consecutive means: three combined standard
/// errors, but never less than this.
pub const TREND_FLOOR: f64 = 0.05;

impl ScalingReport {
    /// Every trial's ratio lies in the band.
    pub fn all_in_band(&self) -> bool {
        self.trials
            .iter()
            .all(|t| self.band.0 <= t.ratio && t.ratio <= self.band.1)
    }

    /// Consecutive means never rise by more than `max(3 se, TREND_FLOOR)`.
    pub fn non_increasing_within_noise(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let se = (w[0].se_ratio.powi(2) + w[1].se_ratio.powi(2)).sqrt();
            w[1].mean_ratio <= w[0].mean_ratio + (3.0 * se).max(TREND_FLOOR)
        })
    }

    /// Spearman correlation of `(d, ratio)` over all trials and its
    /// two-sided p-value from the t approximation.
    pub fn spearman(&self) -> (f64, f64) {
        let ds: Vec<f64> = self.trials.iter().map(|t| t.d).collect();
        let rs: Vec<f64> = self.trials.iter().map(|t| t.ratio).collect();
        spearman(&ds, &rs)
    }

    pub fn table(&self) -> Table {
        let rows = self
            .trials
            .iter()
            .map(|t| {
                vec![
                    fmt_f(t.d),
                    t.seed.to_string(),
                    t.q.to_string(),
                    t.edges.to_string(),
                    t.rounds.to_string(),
                    t.phase1_colors.to_string(),
                    t.residual_colors.to_string(),
                    t.total_colors.to_string(),
                    fmt_f(t.ratio),
                    round_status(t.active_rounds, t.rounds_meeting_bound),
                ]
            })
            .collect();
        let summary = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_f(r.d),
                    "summary".into(),
                    r.q.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    fmt_f(r.mean_total_colors),
                    fmt_f(r.mean_ratio),
                    round_status(r.active_rounds, r.rounds_meeting_bound),
                ]
            })
            .collect();
        let (rho, p) = self.spearman();
        let mut notes = vec![("n".into(), self.n.to_string())];
        for r in &self.rows {
            notes.push((
                format!("ratio_d{}", r.d),
                format!(
                    "mean={} se={} min={} max={}",
                    fmt_f(r.mean_ratio),
                    fmt_f(r.se_ratio),
                    fmt_f(r.min_ratio),
                    fmt_f(r.max_ratio)
                ),
            ));
        }
        notes.extend([
            ("band".into(), format!("{}..{}", fmt_f(self.band.0), fmt_f(self.band.1))),
            ("all_in_band".into(), self.all_in_band().to_string()),
            (
                "non_increasing_within_noise".into(),
                self.non_increasing_within_noise().to_string(),
            ),
            ("spearman_rho".into(), fmt_f(rho)),
            ("spearman_p".into(), fmt_f(p)),
        ]);
        Table {
            columns: vec![
                "d",
                "seed",
                "q",
                "edges",
                "rounds",
                "phase1_colors",
                "residual_colors",
                "total_colors",
                "ratio",
                "round_bound",
            ],
            rows,
            summary,
            notes,
        }
    }
}

fn round_status(active: usize, met: usize) -> String {
    if active == 0 {
        fmt_bound(None)
    } else {
        format!("{met}/{active}")
    }
}

/// Average ranks (ties share the mean of their positions), 1-based.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman's rho and its two-sided p-value; NaN when undefined.
pub(crate) fn spearman(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len();
    if k < 3 || ys.len() != k {
        return (f64::NAN, f64::NAN);
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let (mx, my) = (mean(&rx), mean(&ry));
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let rho = cov / (vx * vy).sqrt();
    if rho.abs() >= 1.0 {
        return (rho.clamp(-1.0, 1.0), 0.0);
    }
    let dof = (k - 2) as f64;
    let t = rho * (dof / (1.0 - rho * rho)).sqrt();
    let p = match StudentsT::new(0.0, 1.0, dof) {
        Ok(dist) => 2.0 * dist.sf(t.abs()),
        Err(_) => f64::NAN,
    };
    (rho, p)
}

pub fn run_scaling_experiment(cfg: &ExperimentConfig) -> Result<ScalingReport> {
    cfg.validate()?;
    if cfg.d_sweep.is_empty() {
        return Err(Error::InvalidConfig("empty degree sweep".into()));
    }
    let n = cfg.n;
    let per_d = cfg.trials;
    let total = per_d * cfg.d_sweep.len();
    let trials = run_trials(total, cfg.jobs, |i| {
        let (di, trial) = (i / per_d, i % per_d);
        let d = cfg.d_sweep[di];
        let q = scaling_q(d)?;
        let seed = derive_seed(cfg.trial_seed(trial), di as u64);
        let inst = planted_with_degree(n, d, q, true, seed)?;
        let report = run_greedy_recolor(&inst, &planted_options(&inst, Selector::LowestId)?)?;
        let mut active = 0;
        let mut met = 0;
        for (r, &size) in report.round_sizes.iter().enumerate() {
            let u = report.trajectory[r][0];
            if let Some(b) = round_bound(n, d, q, u) {
                active += 1;
                met += usize::from(size as f64 >= b);
            }
        }
        Ok(ScalingTrial {
            d,
            seed,
            q,
            edges: inst.graph.m(),
            rounds: report.rounds,
            phase1_colors: report.phase1_colors,
            residual_colors: report.residual_colors,
            total_colors: report.total_colors,
            ratio: report.total_colors as f64 * d.ln() / d,
            active_rounds: active,
            rounds_meeting_bound: met,
        })
    })?;
    let rows = trials
        .chunks(per_d)
        .map(|chunk| {
            let ratios: Vec<f64> = chunk.iter().map(|t| t.ratio).collect();
            let colors: Vec<f64> = chunk.iter().map(|t| t.total_colors as f64).collect();
            ScalingRow {
                d: chunk[0].d,
                q: chunk[0].q,
                mean_ratio: mean(&ratios),
                se_ratio: standard_error(&ratios),
                min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mean_total_colors: mean(&colors),
                active_rounds: chunk.iter().map(|t| t.active_rounds).sum(),
                rounds_meeting_bound: chunk.iter().map(|t| t.rounds_meeting_bound).sum(),
            }
        })
        .collect();
    Ok(ScalingReport {
        n,
        band: cfg.band.unwrap_or(SCALING_BAND),
        trials,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // 2 * 16 / ln 16 = 11.54, 2 * 128 / ln 128 = 52.76
        assert_eq!(scaling_q(16.0).unwrap(), 12);
        assert_eq!(scaling_q(32.0).unwrap(), 19);
        assert_eq!(scaling_q(64.0).unwrap(), 31);
        assert_eq!(scaling_q(128.0).unwrap(), 53);
        assert!(scaling_q(1.0).is_err());
    }

    #[test]
    fn round_bound_is_inactive_at_desk_scale() {
        // ln 128 = 4.852 < 6 ln 4.852 = 9.48
        assert_eq!(round_bound(200_000, 128.0, 53, 200_000), None);
        // A late round with Δ' = 2 would have a positive numerator only
        // because ln ln 2 < 0.
        assert_eq!(round_bound(1000, 16.0, 12, 125), None);
        // ln x > 6 ln ln x needs x beyond e^22 or so.
        let huge = 1e12;
        let b = round_bound(1_000_000, huge, 10, 1_000_000).unwrap();
        let expect = 0.9 * (huge.ln() - 6.0 * huge.ln().ln()) * 1e6 / huge;
        assert!((b - expect).abs() < 1e-12 * expect.abs().max(1.0));
    }

    #[test]
    fn spearman_reference_values() {
        let (rho, p) = spearman(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]);
        assert_eq!((rho, p), (-1.0, 0.0));
        // Ranks (1,2,3,4,5) vs (2,1,4,3,5): sum d^2 = 4, rho = 1 - 6*4/120 = 0.8.
        let (rho, p) = spearman(&[1.0, 2.0, 3.0, 4.0, 5.0], &[20.0, 10.0, 40.0, 30.0, 50.0]);
        assert!((rho - 0.8).abs() < 1e-12);
        // t = 0.8 sqrt(3 / 0.36) = 2.3094 on 3 dof: two-sided p = 0.1041.
        assert!((p - 0.1041).abs() < 1e-3, "{p}");
        assert_eq!(ranks(&[5.0, 1.0, 5.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        assert!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).0.is_nan());
    }

    #[test]
    fn small_sweep_repeats() {
        let mut cfg = ExperimentConfig::new(3000, 0.0, 2, 5);
        cfg.d_sweep = vec![8.0, 16.0];
        let a = run_scaling_experiment(&cfg).unwrap();
        assert_eq!(a.trials.len(), 4);
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.table().to_csv(), run_scaling_experiment(&cfg).unwrap().table().to_csv());
        for t in &a.trials {
            assert_eq!(t.total_colors, t.phase1_colors + t.residual_colors);
        }
    }
}
