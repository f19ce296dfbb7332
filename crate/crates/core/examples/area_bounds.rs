// Lower bounds on the Area from the price dispersion alone, next to a
// Monte Carlo estimate on the same prices.
//
// ```bash
// cargo run --release --example area_bounds
// ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpdim::bounds::{theorem1_area_bound, theorem2_area_bound, Certificate, DEFAULT_T_CAP};
use rpdim::{estimate_area_fixed_prices, EstimatorConfig};

pub fn run_example() -> rpdim::Result<()> {
    // two budgets whose prices alternate between 1 and 2
    let k = 800;
    let prices: Vec<Vec<f64>> = vec![
        (0..k).map(|g| if g % 2 == 0 { 1.0 } else { 2.0 }).collect(),
        (0..k).map(|g| if g % 2 == 0 { 2.0 } else { 1.0 }).collect(),
    ];
    let cert = Certificate::for_prices(&prices, DEFAULT_T_CAP, &mut ChaCha8Rng::seed_from_u64(0))?;
    println!(
        "a = {}, b = {}, eps = {:.4}, eta = {:.4}",
        cert.a_hat, cert.b_hat, cert.eps_hat.value, cert.eta_hat.value
    );
    let params = cert.params(k, prices.len())?;
    let t1 = theorem1_area_bound(&params)?;
    let t2 = theorem2_area_bound(&params)?;
    println!(
        "cycle bound {:.4} (raw {:.4}), potential bound {:.4} (raw {:.4})",
        t1.value, t1.raw, t2.value, t2.raw
    );

    let cfg = EstimatorConfig {
        max_draws: 2_000,
        replications: 1,
        target_halfwidth: None,
        ..EstimatorConfig::default()
    };
    let est = estimate_area_fixed_prices(&prices, &cfg)?;
    println!("estimated Area {:.4} +- {:.4}", est.mean, est.std_error);
    assert!(t1.value <= est.mean + 3.0 * est.std_error + 1e-12);
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
