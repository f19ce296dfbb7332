//! Monte Carlo estimation of the Area: the probability that uniformly random
//! budget shares pass a revealed-preference test on given (or drawn) prices.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::SquareMatrix;
use crate::designs::{choi_design, smp_design, ChoiConfig, SmpConfig, SmpEvaluation};
use crate::error::{domain, Result};
use crate::graph::{
    adjacency_has_cycle, build_graph, check_garp, garp_on_graph, TOL_EDGE_FILE, TOL_EDGE_SAMPLED,
};
use crate::lp::{solve_afriat, AfriatSystem, DEFAULT_TOL_LP};
use crate::sampling::{
    derive_stream_id, sample_prices_into, sample_simplex_into, PriceDistribution, RngStream,
};
use crate::separability::{additive_separability_cuts, GroupExpenditures, PartitionSpec};

/// Draws between two checks of the stopping rule.
const CHECK_EVERY: usize = 100;

/// Indicator an estimate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Garp,
    Lp,
    SeparabilityWeak,
    SeparabilityAdditive,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Garp => "garp",
            Mode::Lp => "lp",
            Mode::SeparabilityWeak => "separability-weak",
            Mode::SeparabilityAdditive => "separability-additive",
        }
    }
}

/// How a share draw is judged in the unrestricted estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Garp,
    Lp,
}

impl From<Method> for Mode {
    fn from(m: Method) -> Mode {
        match m {
            Method::Garp => Mode::Garp,
            Method::Lp => Mode::Lp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorConfig {
    /// Share draws per replication.
    pub max_draws: usize,
    /// Independent price draws.
    pub replications: usize,
    pub ci_level: f64,
    /// Stop a replication once its Wilson half-width is at most this.
    pub target_halfwidth: Option<f64>,
    pub seed: u64,
    /// Offset mixed into every stream id, so grid points draw independently.
    pub grid_point: u64,
    pub method: Method,
    /// Worker threads; `None` uses the ambient pool. Never changes results.
    pub threads: Option<usize>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            max_draws: 10_000,
            replications: 20,
            ci_level: 0.95,
            target_halfwidth: Some(0.005),
            seed: 0,
            grid_point: 0,
            method: Method::Garp,
            threads: None,
        }
    }
}

impl EstimatorConfig {
    /// Scale used for design runs: 100 replications of up to 50,000 draws.
    pub fn design_default() -> Self {
        EstimatorConfig {
            max_draws: 50_000,
            replications: 100,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_draws < 100 {
            return Err(domain(format!(
                "max_draws must be >= 100, got {}",
                self.max_draws
            )));
        }
        if self.replications < 1 {
            return Err(domain("replications must be >= 1"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(domain(format!(
                "ci_level must lie in (0, 1), got {}",
                self.ci_level
            )));
        }
        if let Some(h) = self.target_halfwidth {
            if !(h > 0.0 && h < 1.0) {
                return Err(domain(format!("target_halfwidth must lie in (0, 1), got {h}")));
            }
        }
        if self.threads == Some(0) {
            return Err(domain("threads must be positive"));
        }
        Ok(())
    }

    fn z(&self) -> f64 {
        Normal::standard().inverse_cdf(0.5 + self.ci_level / 2.0)
    }

    fn stream(&self, unit: u64) -> RngStream {
        RngStream::for_unit(self.seed, self.grid_point, unit)
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(job()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| domain(format!("thread pool: {e}")))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// Outcome of one replication (price draw, or price draw and partition).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Replication {
    pub estimate: f64,
    pub draws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub mode: Mode,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub std_error: f64,
    pub per_replication: Vec<Replication>,
}

impl AreaEstimate {
    /// Normal interval across replication means; Wilson for a single one.
    fn aggregate(mode: Mode, per_replication: Vec<Replication>, z: f64) -> Self {
        let n = per_replication.len();
        let mean = per_replication.iter().map(|r| r.estimate).sum::<f64>() / n as f64;
        let (ci_lo, ci_hi, std_error) = if n == 1 {
            let draws = per_replication[0].draws;
            let (lo, hi) = wilson_interval(mean, draws, z);
            (lo, hi, (mean * (1.0 - mean) / draws as f64).sqrt())
        } else {
            let var = per_replication
                .iter()
                .map(|r| (r.estimate - mean).powi(2))
                .sum::<f64>()
                / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            ((mean - z * se).max(0.0), (mean + z * se).min(1.0), se)
        };
        AreaEstimate {
            mode,
            mean,
            ci_lo: ci_lo.min(mean),
            ci_hi: ci_hi.max(mean),
            std_error,
            per_replication,
        }
    }

    pub fn draws(&self) -> usize {
        self.per_replication.iter().map(|r| r.draws).sum()
    }

    pub fn replications(&self) -> usize {
        self.per_replication.len()
    }
}

/// Wilson score interval for `p_hat` observed over `n` trials.
pub fn wilson_interval(p_hat: f64, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p_hat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn wilson_halfwidth(successes: usize, n: usize, z: f64) -> f64 {
    let (lo, hi) = wilson_interval(successes as f64 / n as f64, n, z);
    (hi - lo) / 2.0
}

/// Runs up to `max_draws` draws, each setting one flag per tracked
/// indicator, and stops early once every indicator's Wilson half-width is
/// within target.
fn replicate(
    cfg: &EstimatorConfig,
    z: f64,
    outputs: usize,
    mut draw: impl FnMut(&mut [bool]) -> Result<()>,
) -> Result<Vec<Replication>> {
    let mut hits = vec![0usize; outputs];
    let mut flags = vec![false; outputs];
    let mut n = 0;
    while n < cfg.max_draws {
        draw(&mut flags)?;
        n += 1;
        hits.iter_mut().zip(&flags).for_each(|(h, &f)| *h += f as usize);
        if let Some(target) = cfg.target_halfwidth {
            if n % CHECK_EVERY == 0 && hits.iter().all(|&h| wilson_halfwidth(h, n, z) <= target) {
                break;
            }
        }
    }
    Ok(hits
        .into_iter()
        .map(|h| Replication {
            estimate: h as f64 / n as f64,
            draws: n,
        })
        .collect())
}

/// Fixed prices and a scratch share draw, holding the excess matrix
/// `d_ij = e_ij − 1 = Σ_k (ρ_ij^k − 1) w_jk`.
///
/// Writing `e − 1` this way keeps parallel or identical budgets exactly on
/// the boundary instead of a rounding error away from it.
struct ShareSampler {
    t: usize,
    k: usize,
    prices: Vec<f64>,
    rho_m1: Vec<f64>,
    w: Vec<f64>,
    d: Vec<f64>,
}

impl ShareSampler {
    fn new(t: usize, k: usize, prices: Vec<f64>) -> Self {
        let mut rho_m1 = vec![0.0; t * t * k];
        for i in 0..t {
            for j in 0..t {
                for g in 0..k {
                    rho_m1[(i * t + j) * k + g] = prices[i * k + g] / prices[j * k + g] - 1.0;
                }
            }
        }
        ShareSampler {
            t,
            k,
            prices,
            rho_m1,
            w: vec![0.0; t * k],
            d: vec![0.0; t * t],
        }
    }

    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let (t, k) = (self.t, self.k);
        for row in self.w.chunks_mut(k) {
            sample_simplex_into(row, rng);
        }
        for i in 0..t {
            for j in 0..t {
                self.d[i * t + j] = if i == j {
                    0.0
                } else {
                    let rho = &self.rho_m1[(i * t + j) * k..(i * t + j + 1) * k];
                    let w = &self.w[j * k..(j + 1) * k];
                    rho.iter().zip(w).map(|(a, b)| a * b).sum()
                };
            }
        }
    }

    fn expenditure(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.t, |i, j| 1.0 + self.d[i * self.t + j])
    }

    fn garp(&self) -> bool {
        let (t, d) = (self.t, &self.d);
        if !adjacency_has_cycle(t, |i, j| d[i * t + j] <= TOL_EDGE_SAMPLED) {
            return true;
        }
        garp_on_graph(&build_graph(&self.expenditure(), TOL_EDGE_SAMPLED)).satisfied
    }

    fn afriat(&self) -> Result<bool> {
        if self.t < 2 {
            return Ok(true);
        }
        let system = AfriatSystem::new(self.expenditure())?.without_marginal_check();
        Ok(solve_afriat(&system)?.feasible)
    }

    fn indicator(&self, method: Method) -> Result<bool> {
        match method {
            Method::Garp => Ok(self.garp()),
            Method::Lp => self.afriat(),
        }
    }

    fn quantities(&self) -> Vec<f64> {
        self.w.iter().zip(&self.prices).map(|(w, r)| w / r).collect()
    }
}

fn check_prices(prices: &[Vec<f64>]) -> Result<(usize, usize)> {
    let t = prices.len();
    let k = prices.first().map_or(0, Vec::len);
    if t == 0 || k == 0 || prices.iter().any(|r| r.len() != k) {
        return Err(domain("need T >= 1 price vectors of equal, non-zero length"));
    }
    if prices.iter().flatten().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(domain("prices must be positive and finite"));
    }
    Ok((t, k))
}

/// Area on given normalised prices; one stream per replication.
pub fn estimate_area_fixed_prices(prices: &[Vec<f64>], cfg: &EstimatorConfig) -> Result<AreaEstimate> {
    cfg.validate()?;
    let (t, k) = check_prices(prices)?;
    let flat: Vec<f64> = prices.concat();
    let z = cfg.z();
    let reps = cfg.run(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = cfg.stream(rep as u64).rng();
                let mut s = ShareSampler::new(t, k, flat.clone());
                replicate(cfg, z, 1, |out| {
                    s.draw(&mut rng);
                    out[0] = s.indicator(cfg.method)?;
                    Ok(())
                })
                .map(|mut v| v.remove(0))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(AreaEstimate::aggregate(cfg.method.into(), reps, z))
}

fn draw_price_matrix(t: usize, k: usize, dist: &PriceDistribution, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut prices = vec![0.0; t * k];
    for row in prices.chunks_mut(k) {
        sample_prices_into(row, dist, rng);
    }
    prices
}

/// Area averaged over `cfg.replications` independent price draws.
pub fn estimate_area(
    k: usize,
    t: usize,
    dist: &PriceDistribution,
    cfg: &EstimatorConfig,
) -> Result<AreaEstimate> {
    cfg.validate()?;
    if k < 1 || t < 1 {
        return Err(domain("need K >= 1 and T >= 1"));
    }
    let z = cfg.z();
    let reps = cfg.run(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = cfg.stream(rep as u64).rng();
                let prices = draw_price_matrix(t, k, dist, &mut rng);
                let mut s = ShareSampler::new(t, k, prices);
                replicate(cfg, z, 1, |out| {
                    s.draw(&mut rng);
                    out[0] = s.indicator(cfg.method)?;
                    Ok(())
                })
                .map(|mut v| v.remove(0))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(AreaEstimate::aggregate(cfg.method.into(), reps, z))
}

/// One row of an Area-by-K table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub sigma: f64,
    pub mode: &'static str,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub draws: usize,
    pub replications: usize,
    pub seed: u64,
}

impl CurveRow {
    pub fn new(k: usize, t: usize, sigma: f64, seed: u64, est: &AreaEstimate) -> Self {
        CurveRow {
            k,
            t,
            sigma,
            mode: est.mode.as_str(),
            mean: est.mean,
            ci_lo: est.ci_lo,
            ci_hi: est.ci_hi,
            draws: est.draws(),
            replications: est.replications(),
            seed,
        }
    }
}

/// Stream offset of the grid point `(T, K)`; independent of the rest of the grid.
pub fn grid_point(t: usize, k: usize) -> u64 {
    ((t as u64) << 16) | k as u64
}

/// One estimate per `K`, each on its own streams.
pub fn area_curve(
    k_grid: &[usize],
    t: usize,
    dist: &PriceDistribution,
    cfg: &EstimatorConfig,
) -> Result<Vec<(usize, AreaEstimate)>> {
    if k_grid.is_empty() {
        return Err(domain("empty K grid"));
    }
    k_grid
        .iter()
        .map(|&k| {
            let point = EstimatorConfig {
                grid_point: cfg.grid_point ^ grid_point(t, k),
                ..cfg.clone()
            };
            estimate_area(k, t, dist, &point).map(|e| (k, e))
        })
        .collect()
}

/// Smallest `K` in a curve whose mean reaches `level`.
pub fn threshold_k(curve: &[(usize, AreaEstimate)], level: f64) -> Option<usize> {
    curve.iter().find(|(_, e)| e.mean >= level).map(|(k, _)| *k)
}

/// Where the partitions of a separability run come from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PartitionScheme {
    /// The same partition for every replication.
    Fixed(PartitionSpec),
    /// Fresh random equal partitions for each price replication.
    RandomEqual { size: usize, per_replication: usize },
}

impl PartitionScheme {
    fn per_replication(&self) -> usize {
        match self {
            PartitionScheme::Fixed(_) => 1,
            PartitionScheme::RandomEqual { per_replication, .. } => *per_replication,
        }
    }

    fn draw(&self, k: usize, rng: &mut ChaCha8Rng) -> Result<PartitionSpec> {
        match self {
            PartitionScheme::Fixed(p) if p.k() == k => Ok(p.clone()),
            PartitionScheme::Fixed(p) => Err(domain(format!("partition covers {} goods, not {k}", p.k()))),
            PartitionScheme::RandomEqual { size, .. } => PartitionSpec::random_equal(k, *size, rng),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SeparabilityKind {
    WeakNecessary,
    Additive,
}

/// Unrestricted, weak and (optionally) additive Area on the same share draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityEstimate {
    pub unrestricted: AreaEstimate,
    pub weak: AreaEstimate,
    pub additive: Option<AreaEstimate>,
}

/// Joint separability run. Each (price replication, partition) pair is one
/// unit with its own stream; the same draws feed every indicator, and the
/// additive test runs only on draws that pass the weak conditions, which it
/// implies.
pub fn estimate_separability_joint(
    k: usize,
    t: usize,
    dist: &PriceDistribution,
    scheme: &PartitionScheme,
    with_additive: bool,
    cfg: &EstimatorConfig,
) -> Result<SeparabilityEstimate> {
    cfg.validate()?;
    if k < 2 || t < 2 {
        return Err(domain("separability needs K >= 2 and T >= 2"));
    }
    let per_rep = scheme.per_replication();
    if per_rep == 0 {
        return Err(domain("need at least one partition per replication"));
    }
    if let PartitionScheme::Fixed(p) = scheme {
        if p.k() != k {
            return Err(domain(format!("partition covers {} goods, not {k}", p.k())));
        }
    }
    let outputs = if with_additive { 3 } else { 2 };
    let z = cfg.z();
    let units: Vec<(usize, usize)> = (0..cfg.replications)
        .flat_map(|rep| (0..per_rep).map(move |p| (rep, p)))
        .collect();
    let per_unit = cfg.run(|| {
        units
            .par_iter()
            .map(|&(rep, p)| {
                let prices = draw_price_matrix(t, k, dist, &mut cfg.stream(rep as u64).rng());
                let mut rng = RngStream::new(
                    cfg.seed,
                    derive_stream_id(derive_stream_id(cfg.grid_point, rep as u64), p as u64 + 1),
                )
                .rng();
                let partition = scheme.draw(k, &mut rng)?;
                let mut s = ShareSampler::new(t, k, prices);
                replicate(cfg, z, outputs, |out| {
                    s.draw(&mut rng);
                    let garp = s.garp();
                    let coeffs = GroupExpenditures::from_parts(t, k, &s.prices, &s.quantities(), &partition);
                    let weak = garp && weak_within_groups(&coeffs);
                    out[0] = garp;
                    out[1] = weak;
                    if with_additive {
                        out[2] = weak && additive_separability_cuts(&coeffs, DEFAULT_TOL_LP)?.feasible;
                    }
                    Ok(())
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let column =
        |idx: usize, mode: Mode| AreaEstimate::aggregate(mode, per_unit.iter().map(|u| u[idx]).collect(), z);
    Ok(SeparabilityEstimate {
        unrestricted: column(0, Mode::Garp),
        weak: column(1, Mode::SeparabilityWeak),
        additive: with_additive.then(|| column(2, Mode::SeparabilityAdditive)),
    })
}

fn weak_within_groups(coeffs: &GroupExpenditures) -> bool {
    (0..coeffs.num_groups()).all(|g| {
        let e = coeffs.normalised(g);
        let t = e.n();
        !adjacency_has_cycle(t, |i, j| e.get(i, j) <= 1.0 + TOL_EDGE_SAMPLED)
            || garp_on_graph(&build_graph(&e, TOL_EDGE_SAMPLED)).satisfied
    })
}

/// Area under one separability restriction.
pub fn estimate_separability_area(
    k: usize,
    t: usize,
    dist: &PriceDistribution,
    scheme: &PartitionScheme,
    kind: SeparabilityKind,
    cfg: &EstimatorConfig,
) -> Result<AreaEstimate> {
    let joint = estimate_separability_joint(k, t, dist, scheme, kind == SeparabilityKind::Additive, cfg)?;
    Ok(match kind {
        SeparabilityKind::WeakNecessary => joint.weak,
        SeparabilityKind::Additive => joint.additive.expect("requested"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Design {
    Choi(ChoiConfig),
    Smp(SmpConfig),
}

/// Area of an experimental design.
///
/// Each replication draws one set of budgets from the design and then uniform
/// shares on them. For SMP the budgets are those of one generated path. With
/// [`SmpEvaluation::DesignPath`] each draw is instead a whole new path, bundles
/// included, judged by GARP at the file tolerance because consecutive budgets
/// meet exactly.
pub fn estimate_design_area(design: &Design, cfg: &EstimatorConfig) -> Result<AreaEstimate> {
    cfg.validate()?;
    let z = cfg.z();
    let reps = cfg.run(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = cfg.stream(rep as u64).rng();
                let v = match design {
                    Design::Choi(c) => {
                        let prices = choi_design(c, &mut rng)?.concat();
                        let mut s = ShareSampler::new(c.t, c.k, prices);
                        replicate(cfg, z, 1, |out| {
                            s.draw(&mut rng);
                            out[0] = s.garp();
                            Ok(())
                        })?
                    }
                    Design::Smp(c) if c.evaluation == SmpEvaluation::FreshShares => {
                        let path = smp_design(c, &mut rng)?;
                        let prices = (0..c.t).flat_map(|i| path.prices(i).to_vec()).collect();
                        let mut s = ShareSampler::new(c.t, c.k, prices);
                        replicate(cfg, z, 1, |out| {
                            s.draw(&mut rng);
                            out[0] = s.garp();
                            Ok(())
                        })?
                    }
                    Design::Smp(c) => replicate(cfg, z, 1, |out| {
                        out[0] = check_garp(&smp_design(c, &mut rng)?, TOL_EDGE_FILE).satisfied;
                        Ok(())
                    })?,
                };
                Ok(v[0])
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(AreaEstimate::aggregate(Mode::Garp, reps, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(draws: usize) -> EstimatorConfig {
        EstimatorConfig {
            max_draws: draws,
            replications: 1,
            target_halfwidth: None,
            seed: 3,
            ..EstimatorConfig::default()
        }
    }

    #[test]
    fn mirrored_two_good_budgets_area() {
        let prices = vec![vec![0.25, 1.0 / 3.0], vec![1.0 / 3.0, 0.25]];
        let est = estimate_area_fixed_prices(&prices, &fixed(100_000)).unwrap();
        let p = 40.0 / 49.0;
        assert!(
            (est.mean - p).abs() <= 3.0 * (p * (1.0 - p) / 1e5).sqrt(),
            "{}",
            est.mean
        );
        assert!(est.ci_lo <= est.mean && est.mean <= est.ci_hi);
    }

    #[test]
    fn nested_and_identical_budgets_never_violate() {
        let parallel = vec![vec![0.2, 0.3, 0.5], vec![0.4, 0.6, 1.0]];
        assert_eq!(
            estimate_area_fixed_prices(&parallel, &fixed(5_000)).unwrap().mean,
            1.0
        );
        let same = vec![vec![0.2, 0.3, 0.5], vec![0.2, 0.3, 0.5]];
        assert_eq!(
            estimate_area_fixed_prices(&same, &fixed(5_000)).unwrap().mean,
            1.0
        );
    }

    #[test]
    fn single_observation_has_full_area() {
        let est = estimate_area(4, 1, &PriceDistribution::benchmark(), &EstimatorConfig::default()).unwrap();
        assert_eq!(est.mean, 1.0);
    }

    #[test]
    fn lp_and_garp_agree_on_common_draws() {
        let base = EstimatorConfig {
            max_draws: 300,
            replications: 4,
            target_halfwidth: None,
            seed: 8,
            ..EstimatorConfig::default()
        };
        let dist = PriceDistribution::benchmark();
        let g = estimate_area(3, 4, &dist, &base).unwrap();
        let l = estimate_area(
            3,
            4,
            &dist,
            &EstimatorConfig {
                method: Method::Lp,
                ..base
            },
        )
        .unwrap();
        assert_eq!(g.mean, l.mean);
        assert_eq!(l.mode, Mode::Lp);
    }

    #[test]
    fn adaptive_stop_and_validation() {
        let cfg = EstimatorConfig {
            replications: 2,
            ..EstimatorConfig::default()
        };
        let parallel = vec![vec![0.2, 0.3], vec![0.4, 0.6]];
        let est = estimate_area_fixed_prices(&parallel, &cfg).unwrap();
        assert!(est.per_replication.iter().all(|r| r.draws < cfg.max_draws));
        assert!(EstimatorConfig {
            max_draws: 10,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(EstimatorConfig {
            ci_level: 1.0,
            ..cfg.clone()
        }
        .validate()
        .is_err());
        assert!(EstimatorConfig {
            replications: 0,
            ..cfg
        }
        .validate()
        .is_err());
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson_interval(1.0, 400, 1.96);
        assert!(lo < 1.0 && hi == 1.0);
        let (lo, hi) = wilson_interval(0.5, 100, 1.96);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn separability_nesting_holds_per_unit() {
        let cfg = EstimatorConfig {
            max_draws: 200,
            replications: 2,
            target_halfwidth: None,
            seed: 1,
            ..EstimatorConfig::default()
        };
        let scheme = PartitionScheme::RandomEqual {
            size: 2,
            per_replication: 3,
        };
        let est =
            estimate_separability_joint(6, 5, &PriceDistribution::benchmark(), &scheme, true, &cfg).unwrap();
        let add = est.additive.unwrap();
        for ((u, w), a) in est
            .unrestricted
            .per_replication
            .iter()
            .zip(&est.weak.per_replication)
            .zip(&add.per_replication)
        {
            assert!(a.estimate <= w.estimate && w.estimate <= u.estimate);
        }
        assert_eq!(add.per_replication.len(), 6);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let base = EstimatorConfig {
            max_draws: 500,
            replications: 6,
            seed: 42,
            ..EstimatorConfig::default()
        };
        let dist = PriceDistribution::benchmark();
        let one = estimate_area(
            5,
            6,
            &dist,
            &EstimatorConfig {
                threads: Some(1),
                ..base.clone()
            },
        )
        .unwrap();
        let four = estimate_area(
            5,
            6,
            &dist,
            &EstimatorConfig {
                threads: Some(4),
                ..base
            },
        )
        .unwrap();
        assert_eq!(one, four);
    }
}
