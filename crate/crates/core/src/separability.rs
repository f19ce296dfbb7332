//! Separable preferences over a partition of the goods.
//!
//! Weak separability is checked through its necessary conditions only: GARP on
//! the full data and GARP on every within-group sub-dataset. Additive
//! separability is decided exactly by the grouped Afriat system
//! `u_j^g − u_i^g ≤ λ_i (r_i^g·x_j^g − r_i^g·x_i^g)` with one multiplier per
//! observation shared by all groups.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::dataset::{expenditure_matrix, Dataset, SquareMatrix};
use crate::error::{domain, Error, Result};
use crate::graph::{check_garp_matrix, GarpVerdict};
use crate::lp::potentials::{bellman_ford, cycle_weight};
use crate::lp::simplex::{FeasibilityProblem, Phase1Outcome, SimplexOptions, VarBound};
use crate::lp::DEFAULT_TOL_LP;

/// Disjoint groups of goods covering `0..K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSpec {
    k: usize,
    groups: Vec<Vec<usize>>,
}

impl PartitionSpec {
    pub fn new(k: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k];
        for g in &groups {
            if g.is_empty() {
                return Err(domain("partition has an empty group"));
            }
            for &good in g {
                if good >= k {
                    return Err(domain(format!("good {good} out of range for K = {k}")));
                }
                if std::mem::replace(&mut seen[good], true) {
                    return Err(domain(format!("good {good} appears in two groups")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(domain(format!("good {missing} is not in any group")));
        }
        Ok(PartitionSpec { k, groups })
    }

    /// One group holding every good.
    pub fn single(k: usize) -> Self {
        PartitionSpec {
            k,
            groups: vec![(0..k).collect()],
        }
    }

    /// Contiguous groups of `size` goods.
    pub fn contiguous(k: usize, size: usize) -> Result<Self> {
        check_divides(k, size)?;
        Self::new(
            k,
            (0..k)
                .collect::<Vec<_>>()
                .chunks(size)
                .map(<[usize]>::to_vec)
                .collect(),
        )
    }

    /// A uniformly random partition into `k / size` groups of `size` goods.
    pub fn random_equal<R: Rng + ?Sized>(k: usize, size: usize, rng: &mut R) -> Result<Self> {
        check_divides(k, size)?;
        let mut goods: Vec<usize> = (0..k).collect();
        goods.shuffle(rng);
        let groups = goods
            .chunks(size)
            .map(|c| {
                let mut g = c.to_vec();
                g.sort_unstable();
                g
            })
            .collect();
        Ok(PartitionSpec { k, groups })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

fn check_divides(k: usize, size: usize) -> Result<()> {
    if size == 0 || !k.is_multiple_of(size) {
        return Err(domain(format!("group size {size} does not divide K = {k}")));
    }
    Ok(())
}

/// Within-group spending: `own[g][i] = r_i^g·x_i^g` and `cross[g][i][j] = r_i^g·x_j^g`.
#[derive(Debug, Clone)]
pub struct GroupExpenditures {
    t: usize,
    own: Vec<Vec<f64>>,
    cross: Vec<SquareMatrix>,
}

impl GroupExpenditures {
    pub fn new(dataset: &Dataset, partition: &PartitionSpec) -> Result<Self> {
        if partition.k() != dataset.k() {
            return Err(domain(format!(
                "partition covers {} goods, dataset has {}",
                partition.k(),
                dataset.k()
            )));
        }
        let t = dataset.t();
        let prices: Vec<f64> = (0..t).flat_map(|i| dataset.prices(i).to_vec()).collect();
        let quantities: Vec<f64> = (0..t).flat_map(|i| dataset.quantities(i)).collect();
        Ok(Self::from_parts(t, dataset.k(), &prices, &quantities, partition))
    }

    /// From row-major price and quantity buffers.
    pub(crate) fn from_parts(
        t: usize,
        k: usize,
        prices: &[f64],
        quantities: &[f64],
        partition: &PartitionSpec,
    ) -> Self {
        let mut own = Vec::with_capacity(partition.groups().len());
        let mut cross = Vec::with_capacity(partition.groups().len());
        for goods in partition.groups() {
            let m = SquareMatrix::from_fn(t, |i, j| {
                goods
                    .iter()
                    .map(|&g| prices[i * k + g] * quantities[j * k + g])
                    .sum()
            });
            own.push((0..t).map(|i| m.get(i, i)).collect());
            cross.push(m);
        }
        GroupExpenditures { t, own, cross }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn num_groups(&self) -> usize {
        self.cross.len()
    }

    /// Slack `r_i^g·x_j^g − r_i^g·x_i^g` in group `g`.
    #[inline]
    pub fn slack(&self, g: usize, i: usize, j: usize) -> f64 {
        self.cross[g].get(i, j) - self.own[g][i]
    }

    /// Group `g` as a normalised cross-expenditure matrix, `e_ij = r_i^g·x_j^g / r_i^g·x_i^g`.
    pub fn normalised(&self, g: usize) -> SquareMatrix {
        let (cross, own) = (&self.cross[g], &self.own[g]);
        SquareMatrix::from_fn(self.t, |i, j| {
            if i == j {
                1.0
            } else if own[i] > 0.0 {
                cross.get(i, j) / own[i]
            } else if cross.get(i, j) == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        })
    }
}

/// GARP overall and within every group.
#[derive(Debug, Clone, Serialize)]
pub struct WeakSeparabilityVerdict {
    pub satisfied: bool,
    pub overall: GarpVerdict,
    pub groups: Vec<GarpVerdict>,
}

/// Necessary conditions for weak separability; passing them bounds the true
/// verdict from above.
pub fn weak_separability_necessary(
    dataset: &Dataset,
    partition: &PartitionSpec,
    tol_edge: f64,
) -> Result<WeakSeparabilityVerdict> {
    let coeffs = GroupExpenditures::new(dataset, partition)?;
    let overall = check_garp_matrix(&expenditure_matrix(dataset), tol_edge);
    let groups: Vec<GarpVerdict> = (0..coeffs.num_groups())
        .map(|g| check_garp_matrix(&coeffs.normalised(g), tol_edge))
        .collect();
    Ok(WeakSeparabilityVerdict {
        satisfied: overall.satisfied && groups.iter().all(|v| v.satisfied),
        overall,
        groups,
    })
}

/// Witness for the grouped system: `u[g][i]` and the shared `λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditiveWitness {
    pub feasible: bool,
    pub u: Vec<Vec<f64>>,
    pub lambda: Vec<f64>,
}

impl AdditiveWitness {
    fn infeasible() -> Self {
        AdditiveWitness {
            feasible: false,
            u: Vec::new(),
            lambda: Vec::new(),
        }
    }

    /// Smallest slack over all grouped constraints.
    pub fn min_slack(&self, coeffs: &GroupExpenditures) -> f64 {
        let t = coeffs.t();
        let mut worst = f64::INFINITY;
        for (g, u) in self.u.iter().enumerate() {
            for i in 0..t {
                for j in 0..t {
                    if i != j {
                        let s = self.lambda[i] * coeffs.slack(g, i, j) - (u[j] - u[i]);
                        worst = worst.min(s);
                    }
                }
            }
        }
        worst
    }
}

/// Decides additive separability with one phase-1 solve over all
/// `T·G + T` unknowns.
pub fn additive_separability_feasible(
    dataset: &Dataset,
    partition: &PartitionSpec,
) -> Result<AdditiveWitness> {
    additive_full_lp(&GroupExpenditures::new(dataset, partition)?, DEFAULT_TOL_LP)
}

pub fn additive_full_lp(coeffs: &GroupExpenditures, tol_lp: f64) -> Result<AdditiveWitness> {
    let (t, ng) = (coeffs.t(), coeffs.num_groups());
    let mut lp = FeasibilityProblem::new();
    let u: Vec<Vec<usize>> = (0..ng)
        .map(|_| (0..t).map(|_| lp.add_var(VarBound::Free)).collect())
        .collect();
    let lam: Vec<usize> = (0..t).map(|_| lp.add_var(VarBound::AtLeast(1.0))).collect();
    for (g, ug) in u.iter().enumerate() {
        for i in 0..t {
            for j in 0..t {
                if i != j {
                    lp.add_le(
                        vec![(ug[j], 1.0), (ug[i], -1.0), (lam[i], -coeffs.slack(g, i, j))],
                        tol_lp,
                    );
                }
            }
        }
    }
    Ok(match lp.solve(&SimplexOptions::default())? {
        Phase1Outcome::Feasible(x) => AdditiveWitness {
            feasible: true,
            u: u.iter().map(|ug| ug.iter().map(|&v| x[v]).collect()).collect(),
            lambda: lam.iter().map(|&v| x[v]).collect(),
        },
        Phase1Outcome::Infeasible => AdditiveWitness::infeasible(),
    })
}

/// Same verdict as [`additive_separability_feasible`], found by cutting planes.
///
/// For fixed `λ` each group is a difference-constraint system, feasible iff
/// no cycle has negative weight under `λ_i · slack(g, i, j)`. The search keeps
/// a small phase-1 master problem over `λ ≥ 1` and adds the cut
/// `Σ_cycle λ_i · slack ≥ 0` for every negative cycle found; there are finitely
/// many cycles, so it terminates. Starting from `λ = 1` means most feasible
/// draws are settled without any master solve.
pub fn additive_separability_cuts(coeffs: &GroupExpenditures, tol_lp: f64) -> Result<AdditiveWitness> {
    const MAX_ROUNDS: usize = 2_000;
    let (t, ng) = (coeffs.t(), coeffs.num_groups());
    let mut master = FeasibilityProblem::new();
    let lam_vars: Vec<usize> = (0..t).map(|_| master.add_var(VarBound::AtLeast(1.0))).collect();
    let mut lambda = vec![1.0; t];
    for _ in 0..MAX_ROUNDS {
        let mut potentials = Vec::with_capacity(ng);
        let mut new_cuts = 0;
        for g in 0..ng {
            let weight = |i: usize, j: usize| lambda[i] * coeffs.slack(g, i, j) + tol_lp;
            match bellman_ford(t, None, weight) {
                Ok(u) => potentials.push(u),
                Err(cycle) => {
                    if cycle_weight(&cycle, weight) >= 0.0 {
                        continue;
                    }
                    let mut row = vec![0.0; t];
                    for w in cycle.windows(2) {
                        row[w[0]] -= coeffs.slack(g, w[0], w[1]);
                    }
                    master.add_le(
                        row.iter()
                            .enumerate()
                            .filter(|(_, a)| **a != 0.0)
                            .map(|(i, a)| (lam_vars[i], *a))
                            .collect(),
                        0.0,
                    );
                    new_cuts += 1;
                }
            }
        }
        if new_cuts == 0 && potentials.len() == ng {
            return Ok(AdditiveWitness {
                feasible: true,
                u: potentials,
                lambda,
            });
        }
        match master.solve(&SimplexOptions::default())? {
            Phase1Outcome::Feasible(x) => lambda = x,
            Phase1Outcome::Infeasible => return Ok(AdditiveWitness::infeasible()),
        }
    }
    Err(Error::SolverStall {
        iterations: MAX_ROUNDS,
    })
}
