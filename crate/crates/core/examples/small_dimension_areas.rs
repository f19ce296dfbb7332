// Exact-area examples in two and three goods: the Area grows when a good
// is added to the same pair of crossing budgets.
//
// ```bash
// cargo run --release --example small_dimension_areas
// ```

use rpdim::{estimate_area_fixed_prices, EstimatorConfig};

fn from_intercepts(intercepts: &[&[f64]]) -> Vec<Vec<f64>> {
    intercepts
        .iter()
        .map(|b| b.iter().map(|v| 1.0 / v).collect())
        .collect()
}

pub fn run_example() -> rpdim::Result<()> {
    let cfg = EstimatorConfig {
        max_draws: 100_000,
        replications: 1,
        target_halfwidth: None,
        seed: 2024,
        ..EstimatorConfig::default()
    };
    let two = estimate_area_fixed_prices(&from_intercepts(&[&[4.0, 3.0], &[3.0, 4.0]]), &cfg)?;
    println!(
        "K = 2: {:.4}  [{:.4}, {:.4}]  (exact 40/49 = {:.4})",
        two.mean,
        two.ci_lo,
        two.ci_hi,
        40.0 / 49.0
    );
    let three = estimate_area_fixed_prices(&from_intercepts(&[&[4.0, 3.0, 5.0], &[3.0, 4.0, 2.0]]), &cfg)?;
    println!(
        "K = 3: {:.4}  [{:.4}, {:.4}]",
        three.mean, three.ci_lo, three.ci_hi
    );
    assert!(three.mean > two.mean);
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
