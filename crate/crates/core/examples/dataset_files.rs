// Writing a dataset as long-form CSV and reading it back.
//
// ```bash
// cargo run --example dataset_files
// ```

use rpdim::io::{read_dataset_csv, write_dataset_csv};
use rpdim::sampling::{sample_prices, sample_simplex, PriceDistribution, RngStream};
use rpdim::Dataset;

pub fn run_example() -> rpdim::Result<()> {
    let mut rng = RngStream::new(1, 0).rng();
    let dist = PriceDistribution::benchmark();
    let r: Vec<Vec<f64>> = (0..3).map(|_| sample_prices(4, &dist, &mut rng)).collect();
    let w: Vec<Vec<f64>> = (0..3).map(|_| sample_simplex(4, &mut rng)).collect();
    let ds = Dataset::from_rows(&r, &w)?;

    let mut csv = Vec::new();
    write_dataset_csv(&ds, &mut csv)?;
    let text = String::from_utf8(csv).expect("csv is utf-8");
    print!("{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    let back = read_dataset_csv(text.as_bytes())?;
    assert_eq!(back, ds);
    println!("round trip ok: T = {}, K = {}", back.t(), back.k());
    Ok(())
}

fn main() -> rpdim::Result<()> {
    run_example()
}
