//! Revealed-preference graphs and GARP.
//!
//! Observation `i` is directly revealed preferred to `j` when `e[i][j] ≤ 1`
//! (it could afford `j`'s bundle), strictly so when `e[i][j] < 1`. GARP fails
//! exactly when some `i` reaches `j` through weak edges while `j` is strictly
//! preferred to `i`.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::Serialize;

use crate::dataset::{expenditure_matrix, Dataset, SquareMatrix};
use crate::error::{domain, Result};

/// Edge tolerance for sampled shares; ties have probability zero.
pub const TOL_EDGE_SAMPLED: f64 = 0.0;
/// Edge tolerance for data read from files.
pub const TOL_EDGE_FILE: f64 = 1e-9;

/// Weak and strict direct revealed preference plus the transitive closure of
/// the weak relation.
#[derive(Debug, Clone)]
pub struct RpGraph {
    t: usize,
    weak: Vec<bool>,
    strict: Vec<bool>,
    closure: Vec<bool>,
}

impl RpGraph {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn weak(&self, i: usize, j: usize) -> bool {
        self.weak[i * self.t + j]
    }

    pub fn strict(&self, i: usize, j: usize) -> bool {
        self.strict[i * self.t + j]
    }

    /// `i R j`: reachability over weak edges (reflexive).
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.closure[i * self.t + j]
    }

    /// Shortest weak path from `from` to `to`, inclusive of both ends.
    fn weak_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let t = self.t;
        let mut pred = vec![usize::MAX; t];
        let mut seen = vec![false; t];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = pred[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for v in 0..t {
                if v != u && !seen[v] && self.weak(u, v) {
                    seen[v] = true;
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

/// Builds the relation from a cross-expenditure matrix.
///
/// Weak edge `i → j` iff `e[i][j] ≤ 1 + tol_edge`; strict iff `e[i][j] < 1 - tol_edge`.
pub fn build_graph(e: &SquareMatrix, tol_edge: f64) -> RpGraph {
    let t = e.n();
    let mut weak = vec![false; t * t];
    let mut strict = vec![false; t * t];
    for i in 0..t {
        for j in 0..t {
            if i == j {
                weak[i * t + j] = true;
                continue;
            }
            let v = e.get(i, j);
            weak[i * t + j] = v <= 1.0 + tol_edge;
            strict[i * t + j] = v < 1.0 - tol_edge;
        }
    }
    let closure = transitive_closure(t, &weak);
    RpGraph {
        t,
        weak,
        strict,
        closure,
    }
}

/// Reflexive-transitive closure by dynamic programming over intermediate vertices.
fn transitive_closure(t: usize, adj: &[bool]) -> Vec<bool> {
    let mut c = adj.to_vec();
    for i in 0..t {
        c[i * t + i] = true;
    }
    for m in 0..t {
        for i in 0..t {
            if !c[i * t + m] {
                continue;
            }
            for j in 0..t {
                if c[m * t + j] {
                    c[i * t + j] = true;
                }
            }
        }
    }
    c
}

/// Outcome of a GARP test.
///
/// A failing verdict carries a cycle `(i₁, …, i_L, i₁)` (0-based) whose edges
/// are all weak and whose closing edge `i_L → i₁` is strict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GarpVerdict {
    pub satisfied: bool,
    pub witness: Option<Vec<usize>>,
}

pub fn check_garp(dataset: &Dataset, tol_edge: f64) -> GarpVerdict {
    check_garp_matrix(&expenditure_matrix(dataset), tol_edge)
}

/// GARP on a cross-expenditure matrix. The witness is the first violating pair
/// in row-major order, not necessarily the shortest cycle.
pub fn check_garp_matrix(e: &SquareMatrix, tol_edge: f64) -> GarpVerdict {
    let graph = build_graph(e, tol_edge);
    garp_on_graph(&graph)
}

pub fn garp_on_graph(graph: &RpGraph) -> GarpVerdict {
    let t = graph.t();
    for i in 0..t {
        for j in 0..t {
            if i != j && graph.reaches(i, j) && graph.strict(j, i) {
                let mut cycle = graph.weak_path(i, j).expect("closure implies a weak path");
                cycle.push(i);
                return GarpVerdict {
                    satisfied: false,
                    witness: Some(cycle),
                };
            }
        }
    }
    GarpVerdict {
        satisfied: true,
        witness: None,
    }
}

/// Re-checks a witness cycle against the raw cross-expenditures.
pub fn witness_is_valid(e: &SquareMatrix, cycle: &[usize], tol_edge: f64) -> bool {
    if cycle.len() < 3 || cycle.first() != cycle.last() {
        return false;
    }
    let edges = || cycle.windows(2).map(|w| e.get(w[0], w[1]));
    edges().all(|v| v <= 1.0 + tol_edge) && edges().any(|v| v < 1.0 - tol_edge)
}

/// True iff the weak relation (ignoring self-loops) contains a directed cycle.
pub fn has_directed_cycle(graph: &RpGraph) -> bool {
    adjacency_has_cycle(graph.t(), |i, j| graph.weak(i, j))
}

/// Cycle detection by repeatedly peeling vertices without incoming edges.
pub fn adjacency_has_cycle(t: usize, edge: impl Fn(usize, usize) -> bool) -> bool {
    let mut indeg = vec![0usize; t];
    for i in 0..t {
        for (j, d) in indeg.iter_mut().enumerate() {
            if i != j && edge(i, j) {
                *d += 1;
            }
        }
    }
    let mut stack: Vec<usize> = (0..t).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = stack.pop() {
        removed += 1;
        for (v, d) in indeg.iter_mut().enumerate() {
            if v != u && edge(u, v) {
                *d -= 1;
                if *d == 0 {
                    stack.push(v);
                }
            }
        }
    }
    removed < t
}

/// Number of directed cycles on distinct vertices of a `T`-vertex complete
/// digraph: `Σ_{L=2}^{T} C(T, L) (L−1)!`.
pub fn enumerate_cycles(t: usize) -> Result<BigUint> {
    if t < 2 {
        return Err(domain(format!("cycle count needs T >= 2, got {t}")));
    }
    let mut total = BigUint::from(0u32);
    for len in 2..=t {
        // C(T, L) (L-1)! = T! / ((T-L)! L)
        let mut falling = BigUint::from(1u32);
        for f in (t - len + 1)..=t {
            falling *= f;
        }
        total += falling / len;
    }
    Ok(total)
}
