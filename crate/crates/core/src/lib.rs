//! Revealed-preference tests for many-good budget data, and Monte Carlo
//! estimates of how often random behaviour passes them.
//!
//! Budgets are stored in income-normalised form: prices `r = p / m` and
//! shares `w = r ∘ x`. On top of that the crate offers
//!
//! * GARP via the revealed-preference graph ([`graph`]);
//! * the Afriat inequalities as a linear feasibility problem ([`lp`]);
//! * Area estimation over uniform shares ([`area`]);
//! * closed-form lower bounds on the Area and checks of their assumptions ([`bounds`]);
//! * separability restrictions ([`separability`]) and experimental designs ([`designs`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod area;
pub mod bounds;
pub mod cli;
pub mod dataset;
pub mod designs;
pub mod error;
pub mod graph;
pub mod io;
pub mod lp;
pub mod sampling;
pub mod separability;

pub use area::{
    area_curve, estimate_area, estimate_area_fixed_prices, estimate_design_area, estimate_separability_area,
    estimate_separability_joint, AreaEstimate, Design, EstimatorConfig, Method, Mode, PartitionScheme,
    SeparabilityKind,
};
pub use dataset::{expenditure_matrix, normalize_prices, Dataset, PriceRatioTensor, SquareMatrix};
pub use error::{Error, Result};
pub use graph::{check_garp, GarpVerdict};
pub use lp::{solve_afriat, AfriatSystem, LpWitness};
pub use sampling::{PriceDistribution, RngStream};
