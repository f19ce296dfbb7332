//! Linear feasibility: the phase-1 solver, the Afriat system and
//! difference-constraint potentials.

mod afriat;
pub(crate) mod potentials;
pub mod simplex;

pub use afriat::{
    lemma5_potentials, solve_afriat, AfriatSystem, LpWitness, Orientation, DEFAULT_TOL_LP, MARGINAL_TOL_LP,
};
