//! Monte Carlo checks of motif-density concentration and of the rate at which
//! empirical measures approach the uniform law.
//!
//! cargo run --release --example concentration -- [seed]

use graphon_separation::experiments::{concentration_experiment, mean_wasserstein_experiment};
use graphon_separation::{DecoratedGraphon, Motif, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let seed: u64 = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let w = StepGraphon::from_rows(&[vec![0.7, 0.3], vec![0.3, 0.5]])?;
    let d = DecoratedGraphon::new(w, NoiseFamily::Beta { kappa: 10.0 })?;

    println!("motif  k      eps   rate    bound     evaluation");
    for (f, k) in [(Motif::edge(), 100), (Motif::cycle(3)?, 100), (Motif::edge(), 5000)] {
        for eps in [0.02, 0.05] {
            let out = concentration_experiment(&d, &f, k, eps, 100, seed)?;
            println!(
                "{:<6} {k:<6} {eps:<5} {:<7.3} {:<9.3e} {:?}",
                f.to_string(),
                out.exceedance_rate,
                out.bound,
                out.evaluation
            );
        }
    }

    println!("\nn      mean W1   bound");
    for n in [10, 100, 1000] {
        let out = mean_wasserstein_experiment(n, 500, seed)?;
        println!("{n:<6} {:.5}   {:.4}", out.mean, out.bound);
    }
    Ok(())
}
