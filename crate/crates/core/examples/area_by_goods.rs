// Area against the number of goods for lognormal prices, and the first K
// at which it reaches 0.9.
//
// ```bash
// cargo run --release --example area_by_goods
// ```

use rpdim::area::threshold_k;
use rpdim::{area_curve, EstimatorConfig, PriceDistribution};

pub fn run_example() -> rpdim::Result<()> {
    let cfg = EstimatorConfig {
        max_draws: 1_000,
        replications: 8,
        seed: 7,
        ..EstimatorConfig::default()
    };
    let t = 10;
    let curve = area_curve(&[2, 4, 6, 8, 10, 12], t, &PriceDistribution::benchmark(), &cfg)?;
    println!("   K    Area      95% CI");
    for (k, est) in &curve {
        println!("{k:>4}  {:.4}  [{:.4}, {:.4}]", est.mean, est.ci_lo, est.ci_hi);
    }
    match threshold_k(&curve, 0.9) {
        Some(k) => println!("T = {t}: Area first reaches 0.9 at K = {k}"),
        None => println!("T = {t}: Area stays below 0.9 on this grid"),
    }
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
