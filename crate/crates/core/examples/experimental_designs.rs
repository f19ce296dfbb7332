// Area of a fixed (Choi-style) and an adaptive (SMP) budget design against
// the lognormal benchmark.
//
// ```bash
// cargo run --release --example experimental_designs
// ```

use rpdim::designs::{ChoiConfig, SmpConfig};
use rpdim::{estimate_area, estimate_design_area, Design, EstimatorConfig, PriceDistribution};

pub fn run_example() -> rpdim::Result<()> {
    let cfg = EstimatorConfig {
        max_draws: 500,
        replications: 6,
        seed: 5,
        ..EstimatorConfig::default()
    };
    let (k, t) = (6, 10);
    let benchmark = estimate_area(k, t, &PriceDistribution::benchmark(), &cfg)?;
    let choi = estimate_design_area(&Design::Choi(ChoiConfig::standard(k, t)), &cfg)?;
    let smp = estimate_design_area(
        &Design::Smp(SmpConfig::new(k, t, PriceDistribution::benchmark())?),
        &cfg,
    )?;
    println!("K = {k}, T = {t}");
    println!("  LogN(0,1) benchmark {:.3}", benchmark.mean);
    println!("  fixed design        {:.3}", choi.mean);
    println!("  adaptive design     {:.3}", smp.mean);
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
