//! Motif and spectral equality tests between two groups of sampled graphs.
//!
//! cargo run --release --example separation_test -- [n] [k]

use graphon_separation::bounds::{equality_test_motif, equality_test_spectral, SpectralTest};
use graphon_separation::{DecoratedGraphon, Motif, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(200, |s| s.parse().expect("n"));
    let k: usize = args.next().map_or(50, |s| s.parse().expect("k"));

    let a = DecoratedGraphon::new(StepGraphon::constant(0.2)?, NoiseFamily::Bernoulli)?;
    let b = DecoratedGraphon::new(
        StepGraphon::from_rows(&[vec![0.5, 0.1], vec![0.1, 0.3]])?,
        NoiseFamily::Bernoulli,
    )?;
    let ga = a.sample_graphs(k, n, 1)?;
    let gb = b.sample_graphs(k, n, 2)?;
    let ga2 = a.sample_graphs(k, n / 2, 3)?;

    for f in [Motif::edge(), Motif::cycle(3)?] {
        let r = equality_test_motif(&ga, &gb, &f, 1.0, 0.9)?;
        println!(
            "{f}: W1 {:.5}  bound {:+.4}  confidence {:.3}  {:?}",
            r.distance, r.bound, r.confidence, r.verdict
        );
    }
    // unequal group sizes
    let r = equality_test_motif(&ga, &ga2, &Motif::edge(), 1.0, 0.9)?;
    println!("same graphon, n = {n} vs {}: bound {:+.4}  {:?}", n / 2, r.bound, r.verdict);

    let r = equality_test_spectral(&ga, &gb, &SpectralTest::default())?;
    println!("\nspectral: nested W1 {:.5}, best v {:?}", r.distance, r.best_v);
    for e in &r.scan {
        println!("  v = {}  bound {:+.3e}  confidence {:.3}", e.v, e.bound, e.confidence);
    }
    Ok(())
}
