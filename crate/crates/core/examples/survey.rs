//! Prints the worst residual per invariant class over a sampled population.
//!
//! `cargo run --release -p sphtet --example survey -- [seed] [count]`

use sphtet::tolerances::DEFAULT_FD_STEP;
use sphtet::verify::verify_batch;
use sphtet::SampleConfig;

fn main() -> Result<(), sphtet::GeometryError> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(42, |s| s.parse().expect("seed"));
    let count = args.next().map_or(1000, |s| s.parse().expect("count"));
    let summary = verify_batch(&SampleConfig::new(seed, count), 1e-5, DEFAULT_FD_STEP)?;
    println!(
        "seed {seed}, {count} samples: {} passed at 1e-5, {} failed, {} skipped, {} retried",
        summary.passed, summary.failed, summary.skipped, summary.retried
    );
    for (name, value) in summary.max.entries() {
        println!("{name:>28}  {value:.3e}");
    }
    Ok(())
}
