//! Seeded statistical campaigns on random and planted graphs.
//!
//! Every experiment is a pure function of its [`ExperimentConfig`]: trial `i`
//! draws all of its randomness from `derive_seed(seed, i)`, so reports are
//! byte-identical across reruns and independent of `jobs`.
//!
//! Per-round bounds whose asymptotic correction terms make them non-positive
//! at the configured size are reported as `inactive` instead of counting as
//! passes. The independent-set bound is the experiment's subject, so a degree
//! where it is non-positive is rejected as a configuration error.

mod coupling;
mod density;
mod mis;
mod scaling;

use std::sync::atomic::{AtomicUsize, Ordering};

pub use coupling::{run_coupling_experiment, CouplingReport, CouplingTrial};
pub use density::{check_density, run_density_experiment, DensityCheck, DensityReport, DensityTrial};
pub use mis::{mis_bound, run_mis_experiment, MisReport, MisTrial};
pub use scaling::{
    round_bound, run_scaling_experiment, scaling_q, ScalingReport, ScalingRow, ScalingTrial, TREND_FLOOR,
};

use crate::error::{Error, Result};
use crate::generate::{balanced_partition, gen_planted_p, random_partition, PlantedInstance};

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Target average degree (the `Δ` of the independent-set and density bounds).
    pub d: f64,
    /// Class count of planted instances; `None` means `ceil(2d / ln d)`.
    pub q: Option<usize>,
    /// Constant in `q >= c d / ln d`; only echoed as a diagnostic.
    pub c: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
    /// Random subsets per trial in the density experiment.
    pub subsets: usize,
    /// Degrees swept by the scaling experiment.
    pub d_sweep: Vec<f64>,
    /// Calibration band; each experiment has its own default.
    pub band: Option<(f64, f64)>,
}

/// Greedy independent-set sizes as multiples of `n ln d / d`.
pub const MIS_BAND: (f64, f64) = (0.5, 2.0);
/// `total_colors * ln d / d` in the scaling sweep.
pub const SCALING_BAND: (f64, f64) = (0.5, 3.0);

impl ExperimentConfig {
    pub fn new(n: usize, d: f64, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            n,
            d,
            q: None,
            c: None,
            trials,
            seed,
            jobs: 1,
            subsets: 10_000,
            d_sweep: vec![16.0, 32.0, 64.0, 128.0],
            band: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.d.is_finite() && self.d >= 0.0) {
            return Err(Error::InvalidConfig(format!("invalid degree {}", self.d)));
        }
        if self.band.is_some_and(|(lo, hi)| !(lo <= hi)) {
            return Err(Error::InvalidConfig("band lower end exceeds upper end".into()));
        }
        Ok(())
    }

    /// Edge count `round(n d / 2)`.
    pub fn edges(&self) -> u64 {
        edges_for(self.n, self.d)
    }

    pub fn classes(&self) -> Result<usize> {
        match self.q {
            Some(0) => Err(Error::NoClasses),
            Some(q) => Ok(q),
            None => scaling_q(self.d),
        }
    }

    /// `c d / ln d`, when `c` is set and `d > 1`.
    pub fn gate_q(&self) -> Option<f64> {
        self.c.filter(|_| self.d > 1.0).map(|c| c * self.d / self.d.ln())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        crate::generate::derive_seed(self.seed, trial as u64)
    }
}

pub(crate) fn edges_for(n: usize, d: f64) -> u64 {
    (n as f64 * d / 2.0).round() as u64
}

/// Planted instance with `round(n d / 2)` expected edges: each cross-class
/// pair is kept independently with probability `m / cross_pairs`.
pub(crate) fn planted_with_degree(
    n: usize,
    d: f64,
    q: usize,
    balanced: bool,
    seed: u64,
) -> Result<PlantedInstance> {
    use crate::generate::derive_seed;
    let m = edges_for(n, d);
    let partition = if balanced {
        balanced_partition(n, q, derive_seed(seed, 0))?
    } else {
        random_partition(n, q, m, derive_seed(seed, 0))?
    };
    let cross = partition.cross_pairs();
    if cross == 0 {
        return Err(Error::NoCrossPairs);
    }
    gen_planted_p(&partition, m as f64 / cross as f64, derive_seed(seed, 1))
}

/// Runs `f(0..trials)` on up to `jobs` threads; results keep trial order.
pub(crate) fn run_trials<T, F>(trials: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let jobs = jobs.clamp(1, trials.max(1));
    if jobs == 1 {
        return (0..trials).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<T>>> = (0..trials).map(|_| None).collect();
    std::thread::scope(|s| {
        let workers: Vec<_> = (0..jobs)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= trials {
                            return done;
                        }
                        done.push((i, f(i)));
                    }
                })
            })
            .collect();
        for w in workers {
            match w.join() {
                Ok(done) => {
                    for (i, r) in done {
                        slots[i] = Some(r);
                    }
                }
                Err(panic) => std::panic::resume_unwind(panic),
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every trial ran")).collect()
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard error of the mean (0 for fewer than two values).
pub fn standard_error(values: &[f64]) -> f64 {
    let k = values.len();
    if k < 2 {
        return 0.0;
    }
    let mu = mean(values);
    let var = values.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (k - 1) as f64;
    (var / k as f64).sqrt()
}

pub(crate) fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        f64::NAN
    } else {
        hits as f64 / total as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Records,
}

/// Rows per trial, summary rows in the same columns, and extra summary
/// values that only the records format carries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<Vec<String>>,
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Records => self.to_records(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in self.rows.iter().chain(&self.summary) {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// One `key=value ...` line per row, then one `key=value` line per note.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for row in self.rows.iter().chain(&self.summary) {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&fields.join(" "));
            out.push('\n');
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }
}

pub(crate) fn fmt_f(x: f64) -> String {
    if x.is_nan() {
        "undefined".to_string()
    } else {
        format!("{x:.6}")
    }
}

pub(crate) fn fmt_bound(x: Option<f64>) -> String {
    x.map_or_else(|| "inactive".to_string(), fmt_f)
}

pub(crate) fn fmt_flag(x: Option<bool>) -> String {
    match x {
        Some(true) => "1".into(),
        Some(false) => "0".into(),
        None => "inactive".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trials_keep_order_across_jobs() {
        let one = run_trials(17, 1, |i| Ok(i * i)).unwrap();
        let many = run_trials(17, 4, |i| Ok(i * i)).unwrap();
        assert_eq!(one, many);
        let err = run_trials(5, 3, |i| if i == 3 { Err(Error::NoClasses) } else { Ok(i) });
        assert!(matches!(err, Err(Error::NoClasses)));
    }

    #[test]
    fn summary_statistics() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
        assert_eq!(standard_error(&[5.0]), 0.0);
        // Sample sd of 1..=4 is sqrt(5/3).
        let se = standard_error(&[1.0, 2.0, 3.0, 4.0]);
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn table_formats() {
        let t = Table {
            columns: vec!["trial", "x"],
            rows: vec![vec!["0".into(), "1.5".into()]],
            summary: vec![vec!["summary".into(), "1.5".into()]],
            notes: vec![("bound".into(), "inactive".into())],
        };
        assert_eq!(t.to_csv(), "trial,x\n0,1.5\nsummary,1.5\n");
        assert_eq!(
            t.to_records(),
            "trial=0 x=1.5\ntrial=summary x=1.5\nbound=inactive\n"
        );
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(10, 3.0, 1, 0).validate().is_ok());
        assert!(ExperimentConfig::new(10, 3.0, 0, 0).validate().is_err());
        assert!(ExperimentConfig::new(10, f64::NAN, 1, 0).validate().is_err());
        let mut c = ExperimentConfig::new(100, 50.0, 1, 0);
        c.c = Some(2.0);
        assert!((c.gate_q().unwrap() - 100.0 / 50f64.ln()).abs() < 1e-12);
        assert_eq!(c.edges(), 2500);
    }
}
