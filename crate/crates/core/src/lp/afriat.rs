//! The Afriat inequalities in normalised form.
//!
//! With `e[i][j] = r_i · x_j`, a dataset is rationalisable iff there are
//! utility numbers `U` and multipliers `λ > 0` with
//! `U_j − U_i ≤ λ_i (e[i][j] − 1)` for all `i ≠ j`. The system is
//! homogeneous, so `λ ≥ 1` loses nothing.

use serde::Serialize;

use super::potentials::{bellman_ford, cycle_weight};
use super::simplex::{FeasibilityProblem, Phase1Outcome, SimplexOptions, VarBound};
use crate::dataset::{expenditure_matrix, Dataset, SquareMatrix};
use crate::error::{domain, Error, Result};

pub const DEFAULT_TOL_LP: f64 = 1e-8;
/// A verdict that flips between the default tolerance and this one is marginal.
pub const MARGINAL_TOL_LP: f64 = 1e-6;

/// Which cross-expenditure a pair's constraint uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Orientation {
    /// `U_j − U_i ≤ λ_i (e[i][j] − 1)`: the evaluating observation's multiplier
    /// scales its own budget slack.
    #[default]
    Evaluator,
    /// `U_j − U_i ≤ λ_i (e[j][i] − 1)`: the transpose.
    Transposed,
}

#[derive(Debug, Clone)]
pub struct AfriatSystem {
    e: SquareMatrix,
    lambda_floor: f64,
    tol_lp: f64,
    orientation: Orientation,
    flag_marginal: bool,
}

impl AfriatSystem {
    pub fn new(e: SquareMatrix) -> Result<Self> {
        for i in 0..e.n() {
            if (e.get(i, i) - 1.0).abs() > 1e-12 {
                return Err(domain(format!("e[{i}][{i}] = {} is not 1", e.get(i, i))));
            }
        }
        Ok(AfriatSystem {
            e,
            lambda_floor: 1.0,
            tol_lp: DEFAULT_TOL_LP,
            orientation: Orientation::default(),
            flag_marginal: true,
        })
    }

    pub fn from_dataset(dataset: &Dataset) -> Self {
        AfriatSystem::new(expenditure_matrix(dataset)).expect("unit diagonal by construction")
    }

    pub fn with_lambda_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0) {
            return Err(domain(format!("λ floor must be positive, got {floor}")));
        }
        self.lambda_floor = floor;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tol_lp: f64) -> Self {
        self.tol_lp = tol_lp;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Skip the second solve at [`MARGINAL_TOL_LP`].
    pub fn without_marginal_check(mut self) -> Self {
        self.flag_marginal = false;
        self
    }

    pub fn t(&self) -> usize {
        self.e.n()
    }

    pub fn coefficients(&self) -> &SquareMatrix {
        &self.e
    }

    /// Budget slack used by the constraint for pair `(i, j)`.
    fn slack(&self, i: usize, j: usize) -> f64 {
        match self.orientation {
            Orientation::Evaluator => self.e.get(i, j) - 1.0,
            Orientation::Transposed => self.e.get(j, i) - 1.0,
        }
    }

    fn problem(&self, tol: f64) -> FeasibilityProblem {
        let t = self.t();
        let mut lp = FeasibilityProblem::new();
        let u: Vec<usize> = (0..t).map(|_| lp.add_var(VarBound::Free)).collect();
        let lam: Vec<usize> = (0..t)
            .map(|_| lp.add_var(VarBound::AtLeast(self.lambda_floor)))
            .collect();
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    lp.add_le(vec![(u[j], 1.0), (u[i], -1.0), (lam[i], -self.slack(i, j))], tol);
                }
            }
        }
        lp
    }

    /// Smallest constraint slack `λ_i (e_ij − 1) − (U_j − U_i)` of a candidate.
    pub fn min_slack(&self, u: &[f64], lambda: &[f64]) -> f64 {
        let t = self.t();
        let mut worst = f64::INFINITY;
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    worst = worst.min(lambda[i] * self.slack(i, j) - (u[j] - u[i]));
                }
            }
        }
        worst
    }
}

/// Feasibility verdict and, when feasible, a witness `(U, λ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpWitness {
    pub feasible: bool,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    #[serde(rename = "lambda")]
    pub lambda: Vec<f64>,
    /// Verdict differs between the default and the loose tolerance.
    pub marginal: bool,
}

impl LpWitness {
    pub(crate) fn infeasible() -> Self {
        LpWitness {
            feasible: false,
            u: Vec::new(),
            lambda: Vec::new(),
            marginal: false,
        }
    }
}

fn decide(problem: &FeasibilityProblem, t: usize) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
    match problem.solve(&SimplexOptions::default())? {
        Phase1Outcome::Feasible(x) => Ok(Some((x[..t].to_vec(), x[t..].to_vec()))),
        Phase1Outcome::Infeasible => Ok(None),
    }
}

/// Decides the Afriat system with a phase-1 simplex over `(U, λ)`.
pub fn solve_afriat(system: &AfriatSystem) -> Result<LpWitness> {
    let t = system.t();
    let verdict = decide(&system.problem(system.tol_lp), t)?;
    let marginal = if system.flag_marginal {
        let loose = decide(&system.problem(MARGINAL_TOL_LP), t)?;
        loose.is_some() != verdict.is_some()
    } else {
        false
    };
    Ok(match verdict {
        Some((u, lambda)) => LpWitness {
            feasible: true,
            u,
            lambda,
            marginal,
        },
        None => LpWitness {
            marginal,
            ..LpWitness::infeasible()
        },
    })
}

/// Potentials with uniform slack `η₀ = η / (2T)` against the Carli matrix:
/// `U*_1 = 0` and `U*_m` is the cheapest distinct-vertex path from the first
/// observation to `m` under `d_ij = ρ̄_ij − 1 − η₀`. They satisfy
/// `U*_j ≤ U*_i + d_ij` for all `i ≠ j`.
pub fn lemma5_potentials(carli: &SquareMatrix, eta: f64) -> Result<Vec<f64>> {
    let t = carli.n();
    if t < 2 {
        return Err(domain("need at least two observations"));
    }
    if !(eta > 0.0) {
        return Err(domain(format!("η must be positive, got {eta}")));
    }
    let eta0 = eta / (2.0 * t as f64);
    let d = |i: usize, j: usize| carli.get(i, j) - 1.0 - eta0;
    bellman_ford(t, Some(0), d).map_err(|cycle| {
        let weight = cycle_weight(&cycle, d);
        Error::NegativeCycle { cycle, weight }
    })
}
