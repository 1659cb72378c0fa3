//! Edge-density separation test for two large populations, streamed so that
//! only one graph is held in memory at a time.
//!
//! cargo run --release --example soundness_large_n -- [n] [seed]

use graphon_separation::bounds::motif_report;
use graphon_separation::density::sampled_density_measure;
use graphon_separation::{DecoratedGraphon, Motif, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(100_000, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let k = 100;
    let edge = Motif::edge();
    let low = DecoratedGraphon::new(StepGraphon::constant(0.1)?, NoiseFamily::Bernoulli)?;
    let high = DecoratedGraphon::new(StepGraphon::constant(0.9)?, NoiseFamily::Bernoulli)?;

    let t = std::time::Instant::now();
    let a = sampled_density_measure(&low, &edge, k, n, 2 * seed)?;
    let b = sampled_density_measure(&high, &edge, k, n, 2 * seed + 1)?;
    let report = motif_report(&a, &b, &edge, k, 1.0, 0.0)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    println!("cut distance of the expectations: 0.8, elapsed {:.1}s", t.elapsed().as_secs_f64());
    Ok(())
}
