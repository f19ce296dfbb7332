//! Budget sets from experimental designs.
//!
//! * Fixed (Choi-style): intercepts drawn uniformly on `[a, b]`, discarding
//!   budgets whose intercepts sit in the lower half-range `[a, b/2]`.
//! * Adaptive (SMP path): each new budget is scaled to pass exactly through
//!   the previously chosen bundle, and the bundle on it is drawn uniformly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{domain, Error, Result};
use crate::sampling::{sample_prices_into, sample_simplex_into, PriceDistribution};

/// Total draws the Choi rejection sampler may spend per design.
pub const CHOI_ATTEMPT_CAP: usize = 1_000_000;

/// When a candidate budget counts as lying in the lower half-range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChoiRule {
    /// Reject only if every intercept is at most `b/2`.
    #[default]
    All,
    /// Reject if any intercept is at most `b/2`.
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChoiConfig {
    pub k: usize,
    pub t: usize,
    pub a: f64,
    pub b: f64,
    pub rule: ChoiRule,
}

impl ChoiConfig {
    pub fn new(k: usize, t: usize, a: f64, b: f64, rule: ChoiRule) -> Result<Self> {
        if !(a > 0.0 && a < b && b.is_finite()) {
            return Err(domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
        }
        if k < 1 || t < 1 {
            return Err(domain("need K >= 1 and T >= 1"));
        }
        Ok(ChoiConfig { k, t, a, b, rule })
    }

    /// Default intercept range `[1, 100]` with the all-intercepts rule.
    pub fn standard(k: usize, t: usize) -> Self {
        ChoiConfig::new(k, t, 1.0, 100.0, ChoiRule::All).expect("valid defaults")
    }

    fn rejects(&self, intercepts: &[f64]) -> bool {
        let low = |v: &f64| *v <= self.b / 2.0;
        match self.rule {
            ChoiRule::All => intercepts.iter().all(low),
            ChoiRule::Any => intercepts.iter().any(low),
        }
    }

    /// Closed-form acceptance probability of one candidate budget.
    pub fn acceptance_probability(&self) -> f64 {
        let low = ((self.b / 2.0 - self.a) / (self.b - self.a)).clamp(0.0, 1.0);
        match self.rule {
            ChoiRule::All => 1.0 - low.powi(self.k as i32),
            ChoiRule::Any => (1.0 - low).powi(self.k as i32),
        }
    }
}

/// `T` accepted normalised price vectors (`r = 1 / intercept`).
pub fn choi_design<R: Rng + ?Sized>(cfg: &ChoiConfig, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(cfg.t);
    let mut intercepts = vec![0.0; cfg.k];
    let mut attempts = 0;
    while out.len() < cfg.t {
        if attempts == CHOI_ATTEMPT_CAP {
            return Err(Error::RejectionCap(attempts));
        }
        attempts += 1;
        intercepts
            .iter_mut()
            .for_each(|v| *v = rng.random_range(cfg.a..=cfg.b));
        if !cfg.rejects(&intercepts) {
            out.push(intercepts.iter().map(|v| 1.0 / v).collect());
        }
    }
    Ok(out)
}

/// What the Area of an SMP design measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SmpEvaluation {
    /// Fix the budgets of one generated path and draw fresh uniform shares on them.
    #[default]
    FreshShares,
    /// Judge each generated path, bundles included, as one dataset.
    DesignPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmpConfig {
    pub k: usize,
    pub t: usize,
    pub dist: PriceDistribution,
    pub evaluation: SmpEvaluation,
}

impl SmpConfig {
    pub fn new(k: usize, t: usize, dist: PriceDistribution) -> Result<Self> {
        if k < 2 || t < 2 {
            return Err(domain("SMP design needs K >= 2 and T >= 2"));
        }
        Ok(SmpConfig {
            k,
            t,
            dist,
            evaluation: SmpEvaluation::default(),
        })
    }

    pub fn with_evaluation(mut self, evaluation: SmpEvaluation) -> Self {
        self.evaluation = evaluation;
        self
    }
}

/// One SMP path: prices and uniformly chosen shares, chained so that every
/// budget passes through the previous bundle (`r_t · x_{t−1} = 1`).
pub fn smp_design<R: Rng + ?Sized>(cfg: &SmpConfig, rng: &mut R) -> Result<Dataset> {
    let (t, k) = (cfg.t, cfg.k);
    let mut r = vec![0.0; t * k];
    let mut w = vec![0.0; t * k];
    let mut prev_x = vec![0.0; k];
    for step in 0..t {
        let row = &mut r[step * k..(step + 1) * k];
        sample_prices_into(row, &cfg.dist, rng);
        if step > 0 {
            let through: f64 = row.iter().zip(&prev_x).map(|(a, b)| a * b).sum();
            row.iter_mut().for_each(|v| *v /= through);
        }
        let shares = &mut w[step * k..(step + 1) * k];
        sample_simplex_into(shares, rng);
        for ((x, s), p) in prev_x.iter_mut().zip(shares.iter()).zip(row.iter()) {
            *x = s / p;
        }
    }
    Dataset::new(t, k, r, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::expenditure_matrix;
    use crate::sampling::RngStream;

    #[test]
    fn choi_accepted_budgets_reach_outer_half() {
        let cfg = ChoiConfig::new(2, 100_000, 1.0, 100.0, ChoiRule::All).unwrap();
        let prices = choi_design(&cfg, &mut RngStream::new(1, 0).rng()).unwrap();
        assert_eq!(prices.len(), 100_000);
        for r in &prices {
            let max_intercept = r.iter().map(|v| 1.0 / v).fold(0.0, f64::max);
            assert!(max_intercept > 50.0);
            assert!(r.iter().all(|v| (1.0 / 100.0 - 1e-15..=1.0 + 1e-15).contains(v)));
        }
    }

    #[test]
    fn choi_acceptance_rate_matches_closed_form() {
        // brute-force rejection count against 1 - ((b/2 - a) / (b - a))^2
        let cfg = ChoiConfig::new(2, 1, 1e-9, 1.0, ChoiRule::All).unwrap();
        assert!((cfg.acceptance_probability() - 0.75).abs() < 1e-8);
        let mut rng = RngStream::new(2, 0).rng();
        let trials = 100_000;
        let mut accepted = 0;
        let mut buf = [0.0; 2];
        for _ in 0..trials {
            buf.iter_mut().for_each(|v| *v = rng.random_range(cfg.a..=cfg.b));
            if !cfg.rejects(&buf) {
                accepted += 1;
            }
        }
        let rate = accepted as f64 / trials as f64;
        assert!((rate - 0.75).abs() <= 0.01, "{rate}");
        let std = ChoiConfig::standard(2, 1);
        assert!((std.acceptance_probability() - (1.0 - (49.0f64 / 99.0).powi(2))).abs() < 1e-12);
    }

    #[test]
    fn choi_rejects_bad_range() {
        assert!(ChoiConfig::new(2, 2, 0.0, 1.0, ChoiRule::All).is_err());
        assert!(ChoiConfig::new(2, 2, 2.0, 1.0, ChoiRule::All).is_err());
    }

    #[test]
    fn choi_any_rule_is_stricter() {
        let cfg = ChoiConfig::new(3, 500, 1.0, 100.0, ChoiRule::Any).unwrap();
        for r in choi_design(&cfg, &mut RngStream::new(4, 0).rng()).unwrap() {
            assert!(r.iter().all(|v| 1.0 / v > 50.0));
        }
    }

    #[test]
    fn smp_paths_are_chained_and_exhaustive() {
        let cfg = SmpConfig::new(6, 12, PriceDistribution::benchmark()).unwrap();
        let mut rng = RngStream::new(9, 0).rng();
        for _ in 0..50 {
            let ds = smp_design(&cfg, &mut rng).unwrap();
            let e = expenditure_matrix(&ds);
            for step in 1..ds.t() {
                let through: f64 = ds
                    .prices(step)
                    .iter()
                    .zip(ds.quantities(step - 1))
                    .map(|(a, b)| a * b)
                    .sum();
                assert!((through - 1.0).abs() <= 1e-12, "{through}");
                assert!((e.get(step, step - 1) - 1.0).abs() <= 1e-12);
            }
            for i in 0..ds.t() {
                let own: f64 = ds
                    .prices(i)
                    .iter()
                    .zip(ds.quantities(i))
                    .map(|(a, b)| a * b)
                    .sum();
                assert!((own - 1.0).abs() <= 1e-12);
            }
        }
    }
}
