//! Random budget shares and prices with reproducible stream derivation.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{domain, Result};

/// Name of the generator, recorded in run manifests.
pub const PRNG_IDENTITY: &str =
    "rand_chacha::ChaCha8Rng; seed_from_u64(seed), set_stream(splitmix64(grid_point << 32 | replication))";

/// Default two-sided tail mass clipped from the log-price normal.
pub const DEFAULT_TAIL_Q: f64 = 1e-6;

/// One reproducible random stream: a global seed plus a stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Stream for a (grid point, replication) work unit.
    pub fn for_unit(seed: u64, grid_point: u64, replication: u64) -> Self {
        RngStream::new(seed, derive_stream_id(grid_point, replication))
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// SplitMix64 finaliser of `grid_point << 32 | replication`.
pub fn derive_stream_id(grid_point: u64, replication: u64) -> u64 {
    let mut z = (grid_point << 32 | (replication & 0xffff_ffff)).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Inverse normalised prices `1/r ~ LogN(μ, σ)`, optionally with the
/// standard-normal draw clipped to its `[q, 1−q]` quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceDistribution {
    pub mu: f64,
    pub sigma: f64,
    pub tail_q: Option<f64>,
    #[serde(skip)]
    z_clip: f64,
}

impl PriceDistribution {
    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Self::with_tail(mu, sigma, Some(DEFAULT_TAIL_Q))
    }

    pub fn with_tail(mu: f64, sigma: f64, tail_q: Option<f64>) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("σ must be positive, got {sigma}")));
        }
        if !mu.is_finite() {
            return Err(domain("μ must be finite"));
        }
        let z_clip = match tail_q {
            None => f64::INFINITY,
            Some(q) if q > 0.0 && q < 0.5 => -Normal::standard().inverse_cdf(q),
            Some(q) => return Err(domain(format!("tail mass must lie in (0, 0.5), got {q}"))),
        };
        Ok(PriceDistribution {
            mu,
            sigma,
            tail_q,
            z_clip,
        })
    }

    /// `LogN(0, 1)`.
    pub fn benchmark() -> Self {
        Self::lognormal(0.0, 1.0).expect("valid parameters")
    }

    /// Fitted scanner-data calibration `LogN(5.69, 1.19)`.
    pub fn scanner_fit() -> Self {
        Self::lognormal(5.69, 1.19).expect("valid parameters")
    }

    /// Largest |z| a draw can take.
    pub fn z_clip(&self) -> f64 {
        self.z_clip
    }

    #[inline]
    fn draw_price<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        let z = z.clamp(-self.z_clip, self.z_clip);
        (-(self.mu + self.sigma * z)).exp()
    }
}

/// Uniform draw from the simplex: normalised unit exponentials.
pub fn sample_simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut w = vec![0.0; k];
    sample_simplex_into(&mut w, rng);
    w
}

#[inline]
pub fn sample_simplex_into<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    let mut sum = 0.0;
    for v in out.iter_mut() {
        let y: f64 = rng.sample(Exp1);
        *v = y;
        sum += y;
    }
    let inv = 1.0 / sum;
    out.iter_mut().for_each(|v| *v *= inv);
}

/// Normalised prices `r[k] = 1 / exp(μ + σ z_k)`.
pub fn sample_prices<R: Rng + ?Sized>(k: usize, dist: &PriceDistribution, rng: &mut R) -> Vec<f64> {
    let mut r = vec![0.0; k];
    sample_prices_into(&mut r, dist, rng);
    r
}

#[inline]
pub fn sample_prices_into<R: Rng + ?Sized>(out: &mut [f64], dist: &PriceDistribution, rng: &mut R) {
    out.iter_mut().for_each(|v| *v = dist.draw_price(rng));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_draws_sum_to_one() {
        let mut rng = RngStream::new(1, 2).rng();
        for k in [2, 3, 10, 100] {
            let w = sample_simplex(k, &mut rng);
            assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            assert!(w.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn simplex_moments() {
        let mut rng = RngStream::new(7, 0).rng();
        let n = 1_000_000;
        let mean2: f64 = (0..n).map(|_| sample_simplex(2, &mut rng)[0]).sum::<f64>() / n as f64;
        assert!((mean2 - 0.5).abs() <= 0.002, "{mean2}");

        let draws: Vec<f64> = (0..n).map(|_| sample_simplex(5, &mut rng)[0]).collect();
        let m = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        let expected = 4.0 / 150.0;
        assert!((var - expected).abs() <= 0.05 * expected, "{var}");
    }

    #[test]
    fn degenerate_prices_are_one() {
        let dist = PriceDistribution::lognormal(0.0, 1e-9).unwrap();
        let r = sample_prices(50, &dist, &mut RngStream::new(0, 0).rng());
        assert!(r.iter().all(|&v| (v - 1.0).abs() < 1e-7));
    }

    #[test]
    fn lognormal_median_and_scanner_moments() {
        let n = 1_000_000;
        let mut rng = RngStream::new(11, 0).rng();
        let mut inv = sample_prices(n, &PriceDistribution::benchmark(), &mut rng)
            .into_iter()
            .map(|r| 1.0 / r)
            .collect::<Vec<_>>();
        inv.sort_by(f64::total_cmp);
        let median = inv[n / 2];
        assert!((median - 1.0).abs() <= 0.01, "{median}");

        let logs: Vec<f64> = sample_prices(n, &PriceDistribution::scanner_fit(), &mut rng)
            .into_iter()
            .map(|r| (1.0 / r).ln())
            .collect();
        let m = logs.iter().sum::<f64>() / n as f64;
        let sd = (logs.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((m - 5.69).abs() <= 0.01 && (sd - 1.19).abs() <= 0.01, "{m} {sd}");
    }

    #[test]
    fn truncation_clips_tails() {
        let dist = PriceDistribution::benchmark();
        assert!((dist.z_clip() - 4.753424).abs() < 1e-5);
        assert!(PriceDistribution::lognormal(0.0, 0.0).is_err());
        assert!(PriceDistribution::with_tail(0.0, 1.0, Some(0.7)).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = sample_simplex(8, &mut RngStream::for_unit(5, 3, 9).rng());
        let b: Vec<f64> = sample_simplex(8, &mut RngStream::for_unit(5, 3, 9).rng());
        let c: Vec<f64> = sample_simplex(8, &mut RngStream::for_unit(5, 3, 10).rng());
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(derive_stream_id(0, 1), derive_stream_id(1, 0));
    }

    #[test]
    fn orderings_are_equally_likely() {
        let mut rng = RngStream::new(21, 0).rng();
        let n = 1_000_000;
        let mut counts = [0usize; 6];
        for _ in 0..n {
            let w = sample_simplex(3, &mut rng);
            let idx = match (w[0] < w[1], w[1] < w[2], w[0] < w[2]) {
                (true, true, _) => 0,
                (true, false, true) => 1,
                (true, false, false) => 2,
                (false, true, true) => 3,
                (false, true, false) => 4,
                (false, false, _) => 5,
            };
            counts[idx] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 6.0).abs() <= 0.002, "{counts:?}");
        }
    }
}
