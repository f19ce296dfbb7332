//! Closed-form area and probability bounds, and empirical checks of the
//! assumptions behind them on concrete prices.
//!
//! * (A1) every off-diagonal ratio lies in `[a, b]`;
//! * (A2) every directed cycle has an edge with Carli index at least `1 + ε`;
//! * (A2′) every directed cycle has `Σ (ρ̄ − 1) ≥ η`.

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::dataset::{carli_index, PriceRatioTensor, SquareMatrix};
use crate::error::{domain, Error, Result};
use crate::graph::enumerate_cycles;

/// Default largest `T` for exhaustive cycle enumeration.
pub const DEFAULT_T_CAP: usize = 8;
/// Cycles drawn in sampled mode.
pub const SAMPLED_CYCLES: usize = 10_000;

/// A bound clamped to `[0, 1]`, with the raw formula value kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub raw: f64,
}

impl Bound {
    fn clamped(raw: f64) -> Self {
        let value = if raw.is_nan() { 0.0 } else { raw.clamp(0.0, 1.0) };
        Bound { value, raw }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub k: usize,
    pub t: usize,
    pub a: f64,
    pub b: f64,
    pub eps: Option<f64>,
    pub eta: Option<f64>,
}

impl BoundParams {
    pub fn new(k: usize, t: usize, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a <= b && b.is_finite()) {
            return Err(domain(format!("need 0 < a <= b, got a = {a}, b = {b}")));
        }
        Ok(BoundParams {
            k,
            t,
            a,
            b,
            eps: None,
            eta: None,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(domain(format!("ε must be positive, got {eps}")));
        }
        if !(self.a < 1.0 && 1.0 < self.b) {
            // A1 and A2 together force a < 1 < b
            return Err(domain(format!(
                "A2 with a = {}, b = {} is inconsistent: need a < 1 < b",
                self.a, self.b
            )));
        }
        self.eps = Some(eps);
        Ok(self)
    }

    pub fn with_eta(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(domain(format!("η must be positive, got {eta}")));
        }
        self.eta = Some(eta);
        Ok(self)
    }

    /// `c₁ = ε² / (4 (b − a)²)`.
    pub fn c1(&self) -> Result<f64> {
        let eps = self.eps.ok_or_else(|| domain("ε not set"))?;
        Ok(eps * eps / (4.0 * (self.b - self.a).powi(2)))
    }

    /// `η₀ = η / (2T)`.
    pub fn eta0(&self) -> Result<f64> {
        let eta = self.eta.ok_or_else(|| domain("η not set"))?;
        Ok(eta / (2.0 * self.t as f64))
    }

    /// `c₂ = η₀² / (4 (b − a + η₀)²)`.
    pub fn c2(&self) -> Result<f64> {
        let eta0 = self.eta0()?;
        Ok(eta0 * eta0 / (4.0 * (self.b - self.a + eta0).powi(2)))
    }

    fn require_spread(&self) -> Result<()> {
        if self.t < 2 {
            return Err(domain(format!("need T >= 2, got {}", self.t)));
        }
        if !(self.a < self.b) {
            return Err(domain("need a < b"));
        }
        Ok(())
    }
}

/// Product and maximum of the Carli means along a cycle of ratio vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarliCycle {
    pub product: f64,
    pub max_mean: f64,
}

/// Carli means along a telescoping cycle; their product is at least one.
pub fn carli_cycle_check(edges: &[Vec<f64>]) -> Result<CarliCycle> {
    let k = edges.first().map_or(0, Vec::len);
    if edges.len() < 2 || k == 0 || edges.iter().any(|e| e.len() != k) {
        return Err(domain(
            "a cycle needs at least two edges of equal, non-zero length",
        ));
    }
    for good in 0..k {
        let prod: f64 = edges.iter().map(|e| e[good]).product();
        if (prod - 1.0).abs() > 1e-9 {
            return Err(domain(format!(
                "ratios of good {good} do not telescope (product {prod})"
            )));
        }
    }
    let means = edges.iter().map(|e| carli_index(e)).collect::<Result<Vec<_>>>()?;
    let product: f64 = means.iter().product();
    assert!(product >= 1.0 - 1e-9, "Carli product {product} below one");
    Ok(CarliCycle {
        product,
        max_mean: means.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

/// `P(ρ·w ≤ 1) ≤ exp(−K (ρ̄ − 1)² / (4 (b − a)²))` for uniform `w`.
pub fn edge_probability_bound(carli: f64, a: f64, b: f64, k: usize) -> Result<Bound> {
    if !(carli > 1.0) {
        return Err(domain(format!("bound is vacuous for Carli index {carli} <= 1")));
    }
    if !(a < b) {
        return Err(domain("need a < b"));
    }
    let exponent = -(k as f64) * (carli - 1.0).powi(2) / (4.0 * (b - a).powi(2));
    Ok(Bound::clamped(exponent.exp()))
}

/// `P(e_ij < ρ̄_ij − δ) ≤ exp(−K δ² / (4 (b − a + δ)²))`.
pub fn concentration_bound(delta: f64, a: f64, b: f64, k: usize) -> Result<Bound> {
    if !(delta > 0.0) {
        return Err(domain(format!("δ must be positive, got {delta}")));
    }
    if !(a < b) {
        return Err(domain("need a < b"));
    }
    let exponent = -(k as f64) * delta * delta / (4.0 * (b - a + delta).powi(2));
    Ok(Bound::clamped(exponent.exp()))
}

/// `A_K ≥ 1 − C_T exp(−c₁ K)`.
pub fn theorem1_area_bound(params: &BoundParams) -> Result<Bound> {
    params.require_spread()?;
    let c1 = params.c1()?;
    let cycles = cycle_count_f64(params.t)?;
    Ok(Bound::clamped(1.0 - cycles * (-c1 * params.k as f64).exp()))
}

/// `A_K ≥ 1 − T (T − 1) exp(−c₂ K)`.
pub fn theorem2_area_bound(params: &BoundParams) -> Result<Bound> {
    params.require_spread()?;
    let c2 = params.c2()?;
    let pairs = (params.t * (params.t - 1)) as f64;
    Ok(Bound::clamped(1.0 - pairs * (-c2 * params.k as f64).exp()))
}

/// `C_T` as a float (infinite beyond `f64` range).
pub fn cycle_count_f64(t: usize) -> Result<f64> {
    Ok(enumerate_cycles(t)?
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY))
}

/// Empirical `(a, b)`: extreme off-diagonal ratios.
pub fn check_a1(tensor: &PriceRatioTensor) -> (f64, f64) {
    let t = tensor.t();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..t {
        for j in 0..t {
            if i != j {
                for &v in tensor.edge(i, j) {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
    }
    assert!(lo > 0.0, "ratios of positive prices are positive");
    (lo, hi)
}

/// How a cycle minimum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum CycleMode {
    /// Every directed cycle visited; the minimum is exact.
    Exhaustive,
    /// A random sample of cycles; the minimum is an upper estimate.
    Sampled { cycles: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleCertificate {
    pub value: f64,
    pub mode: CycleMode,
}

/// Calls `visit` once per directed cycle on distinct vertices of `[T]`,
/// as the open vertex list `(i₁, …, i_L)` starting at its smallest vertex.
pub fn for_each_cycle(t: usize, mut visit: impl FnMut(&[usize])) {
    fn extend(t: usize, path: &mut Vec<usize>, used: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        let start = path[0];
        if path.len() >= 2 {
            visit(path);
        }
        for v in start + 1..t {
            if !used[v] {
                used[v] = true;
                path.push(v);
                extend(t, path, used, visit);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; t];
    for start in 0..t {
        used[start] = true;
        let mut path = vec![start];
        extend(t, &mut path, &mut used, &mut visit);
        used[start] = false;
    }
}

fn cycle_edges(cycle: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..cycle.len()).map(move |l| (cycle[l], cycle[(l + 1) % cycle.len()]))
}

fn random_cycle<R: Rng + ?Sized>(t: usize, rng: &mut R) -> Vec<usize> {
    let len = rng.random_range(2..=t);
    sample(rng, t, len).into_vec()
}

fn cycle_minimum<R: Rng + ?Sized>(
    t: usize,
    t_cap: usize,
    sampler: Option<(&mut R, usize)>,
    score: impl Fn(&[usize]) -> f64,
) -> Result<CycleCertificate> {
    if t < 2 {
        return Err(domain("need T >= 2 for cycles"));
    }
    match sampler {
        None if t > t_cap => Err(Error::CycleCapExceeded { t, cap: t_cap }),
        None => {
            let mut best = f64::INFINITY;
            for_each_cycle(t, |c| best = best.min(score(c)));
            Ok(CycleCertificate {
                value: best,
                mode: CycleMode::Exhaustive,
            })
        }
        Some((rng, n)) => {
            let best = (0..n)
                .map(|_| score(&random_cycle(t, rng)))
                .fold(f64::INFINITY, f64::min);
            Ok(CycleCertificate {
                value: best,
                mode: CycleMode::Sampled { cycles: n },
            })
        }
    }
}

/// `ε̂ = min over cycles of (max edge Carli − 1)`, exhaustively for `T ≤ t_cap`.
pub fn check_a2(tensor: &PriceRatioTensor, t_cap: usize) -> Result<CycleCertificate> {
    cycle_minimum::<rand::rngs::ThreadRng>(tensor.t(), t_cap, None, |c| a2_score(tensor, c))
}

/// [`check_a2`] over `n` random cycles, for large `T`.
pub fn check_a2_sampled<R: Rng + ?Sized>(
    tensor: &PriceRatioTensor,
    n: usize,
    rng: &mut R,
) -> Result<CycleCertificate> {
    cycle_minimum(tensor.t(), usize::MAX, Some((rng, n)), |c| a2_score(tensor, c))
}

fn a2_score(tensor: &PriceRatioTensor, cycle: &[usize]) -> f64 {
    cycle_edges(cycle)
        .map(|(i, j)| tensor.carli(i, j))
        .fold(f64::NEG_INFINITY, f64::max)
        - 1.0
}

/// `η̂ = min over cycles of Σ (ρ̄ − 1)`, exhaustively for `T ≤ t_cap`.
pub fn check_a2_prime(carli: &SquareMatrix, t_cap: usize) -> Result<CycleCertificate> {
    cycle_minimum::<rand::rngs::ThreadRng>(carli.n(), t_cap, None, |c| a2_prime_score(carli, c))
}

pub fn check_a2_prime_sampled<R: Rng + ?Sized>(
    carli: &SquareMatrix,
    n: usize,
    rng: &mut R,
) -> Result<CycleCertificate> {
    cycle_minimum(carli.n(), usize::MAX, Some((rng, n)), |c| {
        a2_prime_score(carli, c)
    })
}

fn a2_prime_score(carli: &SquareMatrix, cycle: &[usize]) -> f64 {
    cycle_edges(cycle).map(|(i, j)| carli.get(i, j) - 1.0).sum()
}

/// Assumption constants certified on one set of prices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub a_hat: f64,
    pub b_hat: f64,
    pub eps_hat: CycleCertificate,
    pub eta_hat: CycleCertificate,
}

impl Certificate {
    /// Certifies A1/A2/A2′ exhaustively up to `t_cap`, by sampling beyond.
    pub fn for_prices<R: Rng + ?Sized>(prices: &[Vec<f64>], t_cap: usize, rng: &mut R) -> Result<Self> {
        let tensor = PriceRatioTensor::from_prices(prices)?;
        let (a_hat, b_hat) = check_a1(&tensor);
        let carli = tensor.carli_matrix();
        let (eps_hat, eta_hat) = if tensor.t() <= t_cap {
            (check_a2(&tensor, t_cap)?, check_a2_prime(&carli, t_cap)?)
        } else {
            (
                check_a2_sampled(&tensor, SAMPLED_CYCLES, rng)?,
                check_a2_prime_sampled(&carli, SAMPLED_CYCLES, rng)?,
            )
        };
        Ok(Certificate {
            a_hat,
            b_hat,
            eps_hat,
            eta_hat,
        })
    }

    /// Parameters for the theorem bounds at `K` goods, when A2/A2′ hold.
    pub fn params(&self, k: usize, t: usize) -> Result<BoundParams> {
        let mut p = BoundParams::new(k, t, self.a_hat, self.b_hat)?;
        if self.eps_hat.value > 0.0 && self.a_hat < 1.0 && self.b_hat > 1.0 {
            p = p.with_eps(self.eps_hat.value)?;
        }
        if self.eta_hat.value > 0.0 {
            p = p.with_eta(self.eta_hat.value)?;
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mirrored_budgets() -> PriceRatioTensor {
        PriceRatioTensor::from_prices(&[vec![0.25, 1.0 / 3.0], vec![1.0 / 3.0, 0.25]]).unwrap()
    }

    #[test]
    fn carli_cycles() {
        let c = carli_cycle_check(&[vec![1.7; 4], vec![1.0 / 1.7; 4]]).unwrap();
        assert_abs_diff_eq!(c.product, 1.0, epsilon = 1e-12);
        let c = carli_cycle_check(&[vec![0.75, 4.0 / 3.0], vec![4.0 / 3.0, 0.75]]).unwrap();
        assert_abs_diff_eq!(c.product, (25.0f64 / 24.0).powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(c.max_mean, 25.0 / 24.0, epsilon = 1e-12);
        assert!(carli_cycle_check(&[vec![2.0, 1.0], vec![0.4, 1.0]]).is_err());
    }

    #[test]
    fn edge_bound_values() {
        let b = edge_probability_bound(1.2, 0.5, 2.0, 100).unwrap();
        assert_abs_diff_eq!(b.value, (-4.0f64 / 9.0).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.value, 0.6412, epsilon = 1e-4);
        let near = edge_probability_bound(1.0 + 1e-9, 0.5, 2.0, 100).unwrap();
        assert!(near.value > 1.0 - 1e-12);
        let doubled = edge_probability_bound(1.2, 0.5, 2.0, 200).unwrap();
        assert_abs_diff_eq!(doubled.value, b.value * b.value, epsilon = 1e-12);
        assert!(edge_probability_bound(1.0, 0.5, 2.0, 10).is_err());
    }

    #[test]
    fn concentration_values() {
        let b = concentration_bound(0.3, 0.5, 2.0, 100).unwrap();
        assert_abs_diff_eq!(b.value, (-9.0f64 / 12.96).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.value, 0.4993, epsilon = 1e-4);
        assert!(concentration_bound(1e-12, 0.5, 2.0, 100).unwrap().value > 1.0 - 1e-12);
        assert!(concentration_bound(0.0, 0.5, 2.0, 100).is_err());
        // with δ = ρ̄ − 1 and b − a widened by δ the exponent matches the edge bound
        let delta = 0.2;
        let lhs = concentration_bound(delta, 0.5, 2.0 - delta, 50).unwrap();
        let rhs = edge_probability_bound(1.0 + delta, 0.5, 2.0, 50).unwrap();
        assert_abs_diff_eq!(lhs.value, rhs.value, epsilon = 1e-12);
    }

    #[test]
    fn first_area_bound_values() {
        let p = BoundParams::new(200, 2, 0.5, 2.0).unwrap().with_eps(0.5).unwrap();
        let b = theorem1_area_bound(&p).unwrap();
        assert_abs_diff_eq!(b.value, 1.0 - (-50.0f64 / 9.0).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.value, 0.99614, epsilon = 1e-5);
        let small = BoundParams::new(1, 6, 0.5, 2.0).unwrap().with_eps(0.5).unwrap();
        let s = theorem1_area_bound(&small).unwrap();
        assert_eq!(s.value, 0.0);
        assert!(s.raw < 0.0);
        let big = BoundParams::new(100_000, 5, 0.5, 2.0)
            .unwrap()
            .with_eps(0.5)
            .unwrap();
        assert!(theorem1_area_bound(&big).unwrap().value > 1.0 - 1e-12);
        assert!(BoundParams::new(10, 2, 1.0, 2.0).unwrap().with_eps(0.5).is_err());
    }

    #[test]
    fn second_area_bound_values() {
        let p = BoundParams::new(1000, 2, 0.5, 2.0)
            .unwrap()
            .with_eta(0.4)
            .unwrap();
        assert_abs_diff_eq!(p.eta0().unwrap(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(p.c2().unwrap(), 0.01 / (4.0 * 1.6 * 1.6), epsilon = 1e-15);
        let b = theorem2_area_bound(&p).unwrap();
        assert_abs_diff_eq!(b.value, 0.2468, epsilon = 1e-4);
        // prefactors at T = 10
        assert_eq!(10 * 9, 90);
        assert!(cycle_count_f64(10).unwrap() > 1.1e6);
        let huge = BoundParams::new(10_000_000, 3, 0.5, 2.0)
            .unwrap()
            .with_eta(0.4)
            .unwrap();
        assert!(theorem2_area_bound(&huge).unwrap().value > 1.0 - 1e-9);
    }

    #[test]
    fn assumption_checks_on_mirrored_budgets() {
        let tensor = mirrored_budgets();
        let (a, b) = check_a1(&tensor);
        assert_abs_diff_eq!(a, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 4.0 / 3.0, epsilon = 1e-15);
        let eps = check_a2(&tensor, DEFAULT_T_CAP).unwrap();
        assert_abs_diff_eq!(eps.value, 1.0 / 24.0, epsilon = 1e-12);
        assert_eq!(eps.mode, CycleMode::Exhaustive);
        let eta = check_a2_prime(&tensor.carli_matrix(), DEFAULT_T_CAP).unwrap();
        assert_abs_diff_eq!(eta.value, 1.0 / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_ratios_fail_a2() {
        let flat = PriceRatioTensor::from_prices(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(check_a1(&flat), (1.0, 1.0));
        assert_eq!(check_a2(&flat, 8).unwrap().value, 0.0);
        assert_eq!(check_a2_prime(&flat.carli_matrix(), 8).unwrap().value, 0.0);
        // proportional prices: each edge is constant, but the 2-cycle still has a mean above one
        let scaled = PriceRatioTensor::from_prices(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_abs_diff_eq!(check_a2(&scaled, 8).unwrap().value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cap_directs_to_sampling() {
        let prices: Vec<Vec<f64>> = (0..9).map(|i| vec![1.0 + i as f64, 2.0]).collect();
        let tensor = PriceRatioTensor::from_prices(&prices).unwrap();
        assert!(matches!(
            check_a2(&tensor, 8),
            Err(Error::CycleCapExceeded { t: 9, cap: 8 })
        ));
        let mut rng = crate::sampling::RngStream::new(0, 0).rng();
        let sampled = check_a2_sampled(&tensor, 500, &mut rng).unwrap();
        assert_eq!(sampled.mode, CycleMode::Sampled { cycles: 500 });
    }

    #[test]
    fn cycle_visitor_counts_match_formula() {
        for t in 2..=7 {
            let mut n = 0u64;
            for_each_cycle(t, |_| n += 1);
            assert_eq!(n.to_string(), enumerate_cycles(t).unwrap().to_string());
        }
    }
}
