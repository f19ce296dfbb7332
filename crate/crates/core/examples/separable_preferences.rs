// How much content separability adds back: Area with and without the
// weak and additive restrictions, on the same share draws.
//
// ```bash
// cargo run --release --example separable_preferences
// ```

use rpdim::{estimate_separability_joint, EstimatorConfig, PartitionScheme, PriceDistribution};

pub fn run_example() -> rpdim::Result<()> {
    let cfg = EstimatorConfig {
        max_draws: 200,
        replications: 2,
        seed: 11,
        ..EstimatorConfig::default()
    };
    let (k, t) = (12, 6);
    for size in [3, 6] {
        let scheme = PartitionScheme::RandomEqual {
            size,
            per_replication: 4,
        };
        let est = estimate_separability_joint(k, t, &PriceDistribution::benchmark(), &scheme, true, &cfg)?;
        let additive = est.additive.expect("requested");
        println!(
            "G = {size}: unrestricted {:.3}, weak {:.3}, additive {:.3}",
            est.unrestricted.mean, est.weak.mean, additive.mean
        );
        assert!(additive.mean <= est.weak.mean && est.weak.mean <= est.unrestricted.mean);
    }
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
