//! Budget datasets in income-normalised form.
//!
//! A dataset stores, for each observation `i` and good `k`, the normalised
//! price `r[i][k] = p[i][k] / m[i]` and the budget share `w[i][k] = r[i][k] x[i][k]`.
//! Shares are the canonical representation; quantities are derived on demand.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Row sums of shares within this distance of one are accepted as they are.
pub const SHARE_SUM_TOL: f64 = 1e-12;
/// Row sums within this distance are renormalised (with a warning); beyond it rejected.
pub const SHARE_RENORM_TOL: f64 = 1e-9;

/// `T` observations of `K` goods: normalised prices and budget shares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DatasetRepr", into = "DatasetRepr")]
pub struct Dataset {
    t: usize,
    k: usize,
    r: Vec<f64>,
    w: Vec<f64>,
}

/// Wire form used by the JSON format: `{"T":…, "K":…, "r":[[…]], "w":[[…]]}`.
#[derive(Serialize, Deserialize)]
struct DatasetRepr {
    #[serde(rename = "T")]
    t: usize,
    #[serde(rename = "K")]
    k: usize,
    r: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
}

impl TryFrom<DatasetRepr> for Dataset {
    type Error = Error;

    fn try_from(repr: DatasetRepr) -> Result<Self> {
        if repr.r.len() != repr.t || repr.w.len() != repr.t {
            return Err(Error::InvalidDataset(format!(
                "declared T = {} but r has {} rows and w has {}",
                repr.t,
                repr.r.len(),
                repr.w.len()
            )));
        }
        let ds = Dataset::from_rows(&repr.r, &repr.w)?;
        if ds.k != repr.k {
            return Err(Error::InvalidDataset(format!(
                "declared K = {} but rows have {} entries",
                repr.k, ds.k
            )));
        }
        Ok(ds)
    }
}

impl From<Dataset> for DatasetRepr {
    fn from(ds: Dataset) -> Self {
        DatasetRepr {
            t: ds.t,
            k: ds.k,
            r: ds.r.chunks(ds.k).map(<[f64]>::to_vec).collect(),
            w: ds.w.chunks(ds.k).map(<[f64]>::to_vec).collect(),
        }
    }
}

impl Dataset {
    /// Builds a dataset from row-major `T×K` price and share buffers.
    ///
    /// Share rows off by at most [`SHARE_RENORM_TOL`] are renormalised with a
    /// warning; larger deviations are rejected.
    pub fn new(t: usize, k: usize, r: Vec<f64>, mut w: Vec<f64>) -> Result<Self> {
        if t < 2 || k < 2 {
            return Err(Error::InvalidDataset(format!(
                "need T >= 2 and K >= 2, got T = {t}, K = {k}"
            )));
        }
        if r.len() != t * k || w.len() != t * k {
            return Err(Error::InvalidDataset(format!(
                "expected {} entries, got {} prices and {} shares",
                t * k,
                r.len(),
                w.len()
            )));
        }
        for (idx, &v) in r.iter().enumerate() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "price r[{}][{}] = {v} is not strictly positive",
                    idx / k,
                    idx % k
                )));
            }
        }
        for (i, row) in w.chunks_mut(k).enumerate() {
            normalize_share_row(row).map_err(|msg| Error::InvalidDataset(format!("share row {i}: {msg}")))?;
        }
        Ok(Dataset { t, k, r, w })
    }

    pub fn from_rows(r: &[Vec<f64>], w: &[Vec<f64>]) -> Result<Self> {
        let t = r.len();
        let k = r.first().map_or(0, Vec::len);
        if w.len() != t {
            return Err(Error::InvalidDataset(format!(
                "{t} price rows but {} share rows",
                w.len()
            )));
        }
        if r.iter().chain(w).any(|row| row.len() != k) {
            return Err(Error::InvalidDataset("ragged rows".into()));
        }
        Dataset::new(t, k, r.concat(), w.concat())
    }

    /// Builds a dataset from normalised prices and chosen bundles; the shares
    /// `r ∘ x` must exhaust each budget.
    pub fn from_quantities(r: &[Vec<f64>], x: &[Vec<f64>]) -> Result<Self> {
        if r.len() != x.len() {
            return Err(Error::InvalidDataset("row count mismatch".into()));
        }
        let w: Vec<Vec<f64>> = r
            .iter()
            .zip(x)
            .map(|(ri, xi)| ri.iter().zip(xi).map(|(a, b)| a * b).collect())
            .collect();
        Dataset::from_rows(r, &w)
    }

    /// Number of observations.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of goods.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn prices(&self, i: usize) -> &[f64] {
        &self.r[i * self.k..(i + 1) * self.k]
    }

    pub fn shares(&self, i: usize) -> &[f64] {
        &self.w[i * self.k..(i + 1) * self.k]
    }

    pub fn quantities(&self, i: usize) -> Vec<f64> {
        self.shares(i)
            .iter()
            .zip(self.prices(i))
            .map(|(w, r)| w / r)
            .collect()
    }
}

fn normalize_share_row(row: &mut [f64]) -> std::result::Result<(), String> {
    if let Some(v) = row.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(format!("share {v} is negative or not finite"));
    }
    let sum: f64 = row.iter().sum();
    let gap = (sum - 1.0).abs();
    if gap <= SHARE_SUM_TOL {
        return Ok(());
    }
    if gap <= SHARE_RENORM_TOL {
        log::warn!("renormalising share row with sum {sum}");
        row.iter_mut().for_each(|v| *v /= sum);
        return Ok(());
    }
    Err(format!("shares sum to {sum}, not 1"))
}

/// Income-normalised prices `p / m`.
pub fn normalize_prices(p: &[f64], m: f64) -> Result<Vec<f64>> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(domain(format!("income must be positive, got {m}")));
    }
    if let Some(v) = p.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(domain(format!("price must be positive, got {v}")));
    }
    Ok(p.iter().map(|v| v / m).collect())
}

/// Arithmetic mean of an edge's price ratios.
pub fn carli_index(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return Err(domain("Carli index of an empty vector"));
    }
    if let Some(v) = ratios.iter().find(|v| !(**v > 0.0)) {
        return Err(domain(format!("price ratio must be positive, got {v}")));
    }
    Ok(ratios.iter().sum::<f64>() / ratios.len() as f64)
}

/// Quantities `x[k] = w[k] / r[k]`; the result lies on the budget `r·x = 1`.
pub fn shares_to_quantities(w: &[f64], r: &[f64]) -> Result<Vec<f64>> {
    if w.len() != r.len() {
        return Err(domain("share and price vectors differ in length"));
    }
    if let Some(v) = r.iter().find(|v| !(**v > 0.0)) {
        return Err(domain(format!("price must be positive, got {v}")));
    }
    Ok(w.iter().zip(r).map(|(w, r)| w / r).collect())
}

/// All pairwise price ratios `ρ[i][j][k] = r[i][k] / r[j][k]` and their Carli means.
#[derive(Debug, Clone)]
pub struct PriceRatioTensor {
    t: usize,
    k: usize,
    rho: Vec<f64>,
    carli: Vec<f64>,
}

impl PriceRatioTensor {
    /// Builds the tensor from `T` normalised price vectors of common length.
    pub fn from_prices(prices: &[Vec<f64>]) -> Result<Self> {
        let t = prices.len();
        let k = prices.first().map_or(0, Vec::len);
        if t == 0 || k == 0 || prices.iter().any(|p| p.len() != k) {
            return Err(domain("price vectors must be non-empty and of equal length"));
        }
        if prices.iter().flatten().any(|v| !(*v > 0.0)) {
            return Err(domain("prices must be strictly positive"));
        }
        let mut rho = vec![0.0; t * t * k];
        let mut carli = vec![0.0; t * t];
        for i in 0..t {
            for j in 0..t {
                let base = (i * t + j) * k;
                let mut sum = 0.0;
                for kk in 0..k {
                    let v = if i == j {
                        1.0
                    } else {
                        prices[i][kk] / prices[j][kk]
                    };
                    rho[base + kk] = v;
                    sum += v;
                }
                carli[i * t + j] = sum / k as f64;
            }
        }
        Ok(PriceRatioTensor { t, k, rho, carli })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The ratio vector on edge `i → j`.
    pub fn edge(&self, i: usize, j: usize) -> &[f64] {
        let base = (i * self.t + j) * self.k;
        &self.rho[base..base + self.k]
    }

    /// Carli index of edge `i → j`.
    pub fn carli(&self, i: usize, j: usize) -> f64 {
        self.carli[i * self.t + j]
    }

    pub fn carli_matrix(&self) -> SquareMatrix {
        SquareMatrix {
            n: self.t,
            data: self.carli.clone(),
        }
    }
}

/// Price-ratio tensor of a dataset.
pub fn price_ratios(dataset: &Dataset) -> PriceRatioTensor {
    let prices: Vec<Vec<f64>> = (0..dataset.t()).map(|i| dataset.prices(i).to_vec()).collect();
    PriceRatioTensor::from_prices(&prices).expect("dataset invariants guarantee positive prices")
}

/// Dense `n×n` matrix of reals, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(domain("matrix must be square"));
        }
        Ok(SquareMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

/// Cross-expenditures `e[i][j] = r_i · x_j = ρ_ij · w_j`; the diagonal is one.
pub fn expenditure_matrix(dataset: &Dataset) -> SquareMatrix {
    let t = dataset.t();
    SquareMatrix::from_fn(t, |i, j| {
        if i == j {
            return 1.0;
        }
        let (ri, rj, wj) = (dataset.prices(i), dataset.prices(j), dataset.shares(j));
        ri.iter().zip(rj).zip(wj).map(|((a, b), w)| a / b * w).sum()
    })
}
