//! Phase-1 simplex for small dense systems of linear inequalities.
//!
//! Finds a point of `{ x : A x ≤ b, x_j ≥ l_j for bounded j }` or proves the
//! set empty. Lower-bounded variables are shifted to zero, free variables are
//! split into positive and negative parts, and rows with negative right-hand
//! side start with an artificial variable in the basis. The sum of artificials
//! is driven to zero with Bland's rule, so the method cannot cycle.

use crate::error::{Error, Result};

/// Domain of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarBound {
    Free,
    AtLeast(f64),
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    rhs: f64,
}

/// A system of `≤` rows over bounded or free variables.
#[derive(Debug, Clone, Default)]
pub struct FeasibilityProblem {
    bounds: Vec<VarBound>,
    rows: Vec<Row>,
}

/// Solver knobs. `max_iterations = None` means 50 pivots per row.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub pivot_tol: f64,
    pub feasibility_tol: f64,
    pub max_iterations: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-10,
            feasibility_tol: 1e-9,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Phase1Outcome {
    Feasible(Vec<f64>),
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basic {
    Column(usize),
    Artificial(usize),
}

/// Tie-breaking order for Bland's rule: structural columns, slacks, then artificials.
fn bland_index(b: Basic, ncols: usize) -> usize {
    match b {
        Basic::Column(c) => c,
        Basic::Artificial(r) => ncols + r,
    }
}

impl FeasibilityProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, bound: VarBound) -> usize {
        self.bounds.push(bound);
        self.bounds.len() - 1
    }

    /// Adds `Σ coeff · x_var ≤ rhs`.
    pub fn add_le(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(v, _)| v < self.bounds.len()));
        self.rows.push(Row { coeffs, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Largest violation `max(0, a·x − b)` over all rows and bounds.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|row| {
            let lhs: f64 = row.coeffs.iter().map(|&(v, a)| a * x[v]).sum();
            lhs - row.rhs
        });
        let bounds = self.bounds.iter().zip(x).map(|(b, &v)| match b {
            VarBound::Free => 0.0,
            VarBound::AtLeast(l) => l - v,
        });
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn solve(&self, opts: &SimplexOptions) -> Result<Phase1Outcome> {
        // column layout
        let mut col_of = Vec::with_capacity(self.bounds.len());
        let mut nstruct = 0;
        for b in &self.bounds {
            col_of.push(nstruct);
            nstruct += match b {
                VarBound::Free => 2,
                VarBound::AtLeast(_) => 1,
            };
        }
        let m = self.rows.len();
        let ncols = nstruct + m;
        let width = ncols + 1;
        let mut tab = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);

        for (r, row) in self.rows.iter().enumerate() {
            let line = &mut tab[r * width..(r + 1) * width];
            let mut rhs = row.rhs;
            for &(v, a) in &row.coeffs {
                let c = col_of[v];
                match self.bounds[v] {
                    VarBound::Free => {
                        line[c] += a;
                        line[c + 1] -= a;
                    }
                    VarBound::AtLeast(l) => {
                        line[c] += a;
                        rhs -= a * l;
                    }
                }
            }
            line[nstruct + r] = 1.0;
            line[ncols] = rhs;
            if rhs < 0.0 {
                line.iter_mut().for_each(|v| *v = -*v);
                basis.push(Basic::Artificial(r));
            } else {
                basis.push(Basic::Column(nstruct + r));
            }
        }

        // phase-1 objective: reduced costs of the artificial sum
        let mut obj = vec![0.0; width];
        for (r, b) in basis.iter().enumerate() {
            if matches!(b, Basic::Artificial(_)) {
                for (o, v) in obj.iter_mut().zip(&tab[r * width..(r + 1) * width]) {
                    *o += v;
                }
            }
        }

        let cap = opts.max_iterations.unwrap_or(50 * m.max(1));
        let mut iterations = 0;
        loop {
            if obj[ncols] <= opts.feasibility_tol {
                break;
            }
            let Some(enter) = (0..ncols).find(|&c| obj[c] > opts.pivot_tol) else {
                break;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = tab[r * width + enter];
                if a <= opts.pivot_tol {
                    continue;
                }
                let ratio = tab[r * width + ncols] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * (1.0 + best_ratio.abs());
                        if ratio < best_ratio && !tie
                            || tie && bland_index(basis[r], ncols) < bland_index(basis[best], ncols)
                        {
                            Some((r, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            // Phase-1 objective is bounded below by zero, so a ratio always exists.
            let Some((p, _)) = leave else {
                break;
            };
            if iterations >= cap {
                return Err(Error::SolverStall { iterations });
            }
            iterations += 1;
            pivot(&mut tab, &mut obj, width, m, p, enter);
            basis[p] = Basic::Column(enter);
        }

        if obj[ncols] > opts.feasibility_tol {
            return Ok(Phase1Outcome::Infeasible);
        }
        let mut y = vec![0.0; nstruct];
        for (r, b) in basis.iter().enumerate() {
            if let Basic::Column(c) = *b {
                if c < nstruct {
                    y[c] = tab[r * width + ncols];
                }
            }
        }
        let x = self
            .bounds
            .iter()
            .zip(&col_of)
            .map(|(b, &c)| match b {
                VarBound::Free => y[c] - y[c + 1],
                VarBound::AtLeast(l) => l + y[c],
            })
            .collect();
        Ok(Phase1Outcome::Feasible(x))
    }
}

fn pivot(tab: &mut [f64], obj: &mut [f64], width: usize, m: usize, p: usize, e: usize) {
    let inv = 1.0 / tab[p * width + e];
    for v in &mut tab[p * width..(p + 1) * width] {
        *v *= inv;
    }
    tab[p * width + e] = 1.0;
    let (before, rest) = tab.split_at_mut(p * width);
    let (prow, after) = rest.split_at_mut(width);
    let eliminate = |line: &mut [f64]| {
        let f = line[e];
        if f != 0.0 {
            for (v, pv) in line.iter_mut().zip(prow.iter()) {
                *v -= f * pv;
            }
            line[e] = 0.0;
        }
    };
    before.chunks_mut(width).for_each(eliminate);
    after.chunks_mut(width).for_each(eliminate);
    eliminate(obj);
    debug_assert_eq!(before.len() / width + 1 + after.len() / width, m);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(p: &FeasibilityProblem) -> Phase1Outcome {
        p.solve(&SimplexOptions::default()).unwrap()
    }

    #[test]
    fn box_with_free_variable() {
        let mut p = FeasibilityProblem::new();
        let x = p.add_var(VarBound::Free);
        let y = p.add_var(VarBound::AtLeast(1.0));
        p.add_le(vec![(x, 1.0), (y, 1.0)], 3.0);
        p.add_le(vec![(x, -1.0)], -2.5); // x >= 2.5 forces y <= 0.5: infeasible
        assert_eq!(solve(&p), Phase1Outcome::Infeasible);

        let mut q = FeasibilityProblem::new();
        let x = q.add_var(VarBound::Free);
        let y = q.add_var(VarBound::AtLeast(1.0));
        q.add_le(vec![(x, 1.0), (y, 1.0)], 3.0);
        q.add_le(vec![(x, 1.0)], -4.0); // x <= -4
        q.add_le(vec![(y, -1.0)], -2.0); // y >= 2
        match solve(&q) {
            Phase1Outcome::Feasible(v) => assert!(q.max_violation(&v) <= 1e-9, "{v:?}"),
            Phase1Outcome::Infeasible => panic!("feasible system reported infeasible"),
        }
    }

    #[test]
    fn equality_via_two_rows() {
        let mut p = FeasibilityProblem::new();
        let a = p.add_var(VarBound::Free);
        let b = p.add_var(VarBound::Free);
        p.add_le(vec![(a, 1.0), (b, -1.0)], -1.0);
        p.add_le(vec![(a, -1.0), (b, 1.0)], 1.0);
        p.add_le(vec![(a, 1.0)], -7.0);
        let Phase1Outcome::Feasible(v) = solve(&p) else {
            panic!()
        };
        assert!((v[1] - v[0] - 1.0).abs() < 1e-9 && v[0] <= -7.0 + 1e-9);
    }

    #[test]
    fn iteration_cap_reports_stall() {
        let mut p = FeasibilityProblem::new();
        let x = p.add_var(VarBound::AtLeast(0.0));
        let y = p.add_var(VarBound::AtLeast(0.0));
        p.add_le(vec![(x, -1.0), (y, -1.0)], -1.0);
        p.add_le(vec![(x, -1.0), (y, 2.0)], -0.5);
        let opts = SimplexOptions {
            max_iterations: Some(0),
            ..SimplexOptions::default()
        };
        assert!(matches!(p.solve(&opts), Err(Error::SolverStall { .. })));
    }
}
