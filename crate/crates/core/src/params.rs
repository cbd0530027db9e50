//! Quantities derived from `(n, m, q)` and the actual class sizes.
//! Logarithms are natural throughout.

use std::fmt;

use crate::error::{Error, Result};
use crate::generate::Partition;

#[derive(Clone, Debug, PartialEq)]
pub struct DerivedParams {
    pub n: usize,
    pub m: u64,
    pub q: usize,
    /// Average degree `2m/n`.
    pub d: f64,
    /// Exact number of pairs with endpoints in different classes.
    pub cross_pairs: u64,
    /// `m n / cross_pairs`.
    pub d_hat: f64,
    /// `d_hat / n`.
    pub p_hat: f64,
    /// Residual threshold `n / ln^2(d_hat)`; `None` when `d_hat <= e`.
    pub threshold_formula: Option<f64>,
    /// Core size bound `2 d_hat / ln^2(d_hat) + 1`; `None` when `d_hat <= 1`.
    pub k_core: Option<f64>,
    /// `q/(q-1) * d / (ln d - 7 ln ln d)`, defined only when the denominator
    /// is positive and `q > 1`.
    pub q0: Option<f64>,
    /// Fresh-color budget quoted at the residual step: `d_hat/ln^2 d_hat + 2`.
    pub residual_budget: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl DerivedParams {
    /// Default residual threshold: `ceil(n / ln^2 d_hat)`, or `n` when
    /// `d_hat <= e` (only the residual phase then runs).
    pub fn default_threshold(&self) -> usize {
        match self.threshold_formula {
            Some(l) => (l.ceil() as usize).min(self.n),
            None => self.n,
        }
    }

    /// Whether `d <= 2 (q-1) ln(q-1)`, the regime where planted and uniformly
    /// sampled colorings share their high-probability properties.
    pub fn contiguity_regime(&self) -> bool {
        self.q > 2 && {
            let q1 = (self.q - 1) as f64;
            self.d <= 2.0 * q1 * q1.ln()
        }
    }

    /// `key=value` lines.
    pub fn to_records(&self) -> String {
        let opt = |x: Option<f64>| x.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"));
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        push("n", self.n.to_string());
        push("m", self.m.to_string());
        push("q", self.q.to_string());
        push("d", format!("{:.6}", self.d));
        push("cross_pairs", self.cross_pairs.to_string());
        push("d_hat", format!("{:.6}", self.d_hat));
        push("p_hat", format!("{:.9}", self.p_hat));
        push("threshold_formula", opt(self.threshold_formula));
        push("threshold", self.default_threshold().to_string());
        push("k_core", opt(self.k_core));
        push("residual_budget", opt(self.residual_budget));
        push("q0", opt(self.q0));
        push("contiguity_regime", self.contiguity_regime().to_string());
        for (i, diag) in self.diagnostics.iter().enumerate() {
            push(&format!("diagnostic.{i}"), diag.clone());
        }
        out
    }
}

impl fmt::Display for DerivedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_records())
    }
}

/// `ln d - 7 ln ln d`, or `None` where `ln ln d` is undefined.
pub fn q0_denominator(d: f64) -> Option<f64> {
    (d > 1.0).then(|| d.ln() - 7.0 * d.ln().ln())
}

pub fn q0(d: f64, q: usize) -> Option<f64> {
    let denom = q0_denominator(d)?;
    (denom > 0.0 && q > 1).then(|| q as f64 / (q as f64 - 1.0) * d / denom)
}

pub fn derive_params(n: usize, m: u64, partition: &Partition) -> Result<DerivedParams> {
    if partition.n() != n {
        return Err(Error::PartitionMismatch {
            expected: n,
            found: partition.n(),
        });
    }
    let q = partition.q();
    let cross_pairs = partition.cross_pairs();
    if cross_pairs == 0 {
        return Err(Error::NoCrossPairs);
    }
    let nf = n as f64;
    let d = 2.0 * m as f64 / nf;
    let d_hat = m as f64 * nf / cross_pairs as f64;
    let p_hat = d_hat / nf;
    let ln2 = d_hat.ln().powi(2);
    let threshold_formula = (d_hat > std::f64::consts::E).then(|| nf / ln2);
    let k_core = (d_hat > 1.0).then(|| 2.0 * d_hat / ln2 + 1.0);
    let residual_budget = (d_hat > 1.0).then(|| d_hat / ln2 + 2.0);

    let mut diagnostics = Vec::new();
    let q0 = q0(d, q);
    if q0.is_none() {
        match q0_denominator(d) {
            Some(den) if den <= 0.0 => diagnostics.push(format!(
                "q0 undefined: denominator ln d - 7 ln ln d = {den:.4} <= 0"
            )),
            None => diagnostics.push("q0 undefined: d <= 1".to_string()),
            Some(_) => diagnostics.push("q0 undefined: q <= 1".to_string()),
        }
    }
    if threshold_formula.is_none() {
        diagnostics.push("d_hat <= e: residual threshold capped at n".to_string());
    }
    if partition.empty_classes() > 0 {
        diagnostics.push(format!("{} empty classes", partition.empty_classes()));
    }
    if p_hat > 1.0 {
        return Err(Error::InvalidProbability(p_hat));
    }

    Ok(DerivedParams {
        n,
        m,
        q,
        d,
        cross_pairs,
        d_hat,
        p_hat,
        threshold_formula,
        k_core,
        q0,
        residual_budget,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_needs_astronomical_d() {
        // ln 100 = 4.6052, 7 ln ln 100 = 10.6903.
        let den = q0_denominator(100.0).unwrap();
        assert!((den - (4.605170 - 10.690257)).abs() < 1e-5);
        assert!(q0(100.0, 30).is_none());

        let d = 30f64.exp();
        let den = q0_denominator(d).unwrap();
        assert!((den - 6.191).abs() < 1e-3, "{den}");
        assert!(q0(d, 1_000_000).is_some());
    }

    #[test]
    fn diagnostic_for_negative_denominator() {
        let n = 1000;
        let partition = Partition::blocks(n, 30).unwrap();
        let p = derive_params(n, 50_000, &partition).unwrap();
        assert!((p.d - 100.0).abs() < 1e-12);
        assert!(p.q0.is_none());
        assert!(p.diagnostics.iter().any(|d| d.contains("<= 0")));
    }

    #[test]
    fn small_hand_count() {
        let partition = Partition::blocks(4, 2).unwrap();
        let p = derive_params(4, 4, &partition).unwrap();
        assert_eq!(p.cross_pairs, 4);
        assert_eq!(p.d_hat, 4.0);
        assert_eq!(p.p_hat, 1.0);
        assert!(p.d_hat >= p.d);
    }

    #[test]
    fn threshold_and_core_bound() {
        let n = 100_000;
        let partition = Partition::blocks(n, 30).unwrap();
        let p = derive_params(n, 2_500_000, &partition).unwrap();
        let l = n as f64 / p.d_hat.ln().powi(2);
        assert_eq!(p.default_threshold(), l.ceil() as usize);
        assert!((p.k_core.unwrap() - (2.0 * p.d_hat / p.d_hat.ln().powi(2) + 1.0)).abs() < 1e-12);
        assert!(p.d_hat > p.d);
    }

    #[test]
    fn low_degree_caps_threshold() {
        let partition = Partition::blocks(10, 2).unwrap();
        let p = derive_params(10, 5, &partition).unwrap();
        assert!(p.d_hat < std::f64::consts::E);
        assert_eq!(p.default_threshold(), 10);
    }

    #[test]
    fn single_class_has_no_cross_pairs() {
        let partition = Partition::blocks(5, 1).unwrap();
        assert!(matches!(
            derive_params(5, 0, &partition),
            Err(Error::NoCrossPairs)
        ));
    }
}
