// Utility potentials that satisfy the Afriat inequalities with room to
// spare, built from the Carli matrix of dispersed prices.
//
// ```bash
// cargo run --example strict_potentials
// ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpdim::bounds::{check_a2_prime, DEFAULT_T_CAP};
use rpdim::lp::lemma5_potentials;
use rpdim::sampling::{sample_prices, PriceDistribution};
use rpdim::PriceRatioTensor;

pub fn run_example() -> rpdim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let prices: Vec<Vec<f64>> = (0..5)
        .map(|_| sample_prices(40, &PriceDistribution::benchmark(), &mut rng))
        .collect();
    let carli = PriceRatioTensor::from_prices(&prices)?.carli_matrix();
    let eta = check_a2_prime(&carli, DEFAULT_T_CAP)?.value;
    let u = lemma5_potentials(&carli, eta)?;
    let eta0 = eta / (2.0 * prices.len() as f64);
    println!("eta = {eta:.4}, eta0 = {eta0:.4}");
    println!("U* = {u:?}");
    let mut worst = f64::INFINITY;
    for i in 0..u.len() {
        for j in 0..u.len() {
            if i != j {
                worst = worst.min(carli.get(i, j) - 1.0 - eta0 - (u[j] - u[i]));
            }
        }
    }
    println!("smallest slack {worst:.2e}");
    assert!(worst >= -1e-12);
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
