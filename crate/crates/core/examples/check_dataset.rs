// GARP on a two-observation dataset, with the violating cycle and the
// Afriat multipliers for a consistent one.
//
// ```bash
// cargo run --example check_dataset
// ```

use rpdim::graph::{check_garp, witness_is_valid, TOL_EDGE_FILE};
use rpdim::lp::{solve_afriat, AfriatSystem};
use rpdim::{expenditure_matrix, normalize_prices, Dataset};

pub fn run_example() -> rpdim::Result<()> {
    // budgets with intercepts (4, 3) and (3, 4)
    let r1 = normalize_prices(&[3.0, 4.0], 12.0)?;
    let r2 = normalize_prices(&[4.0, 3.0], 12.0)?;

    // each bundle sits where the other budget is cheaper: a WARP violation
    let crossing = Dataset::from_quantities(&[r1.clone(), r2.clone()], &[vec![0.0, 3.0], vec![3.0, 0.0]])?;
    let verdict = check_garp(&crossing, TOL_EDGE_FILE);
    let e = expenditure_matrix(&crossing);
    println!("crossing choices: satisfied = {}", verdict.satisfied);
    if let Some(cycle) = &verdict.witness {
        let one_based: Vec<usize> = cycle.iter().map(|i| i + 1).collect();
        println!(
            "  witness {one_based:?}, valid = {}",
            witness_is_valid(&e, cycle, TOL_EDGE_FILE)
        );
    }
    assert!(!verdict.satisfied);

    let nested = Dataset::from_quantities(&[r1, r2], &[vec![4.0, 0.0], vec![0.0, 4.0]])?;
    let lp = solve_afriat(&AfriatSystem::from_dataset(&nested))?;
    println!(
        "corner choices: satisfied = {}",
        check_garp(&nested, TOL_EDGE_FILE).satisfied
    );
    println!("  U = {:?}, lambda = {:?}", lp.u, lp.lambda);
    assert!(lp.feasible);
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
