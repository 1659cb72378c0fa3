//! Coarsens a dataset's graphs with a node partition and extracts
//! standardized spectral features from the result.
//!
//! cargo run --release --example coarsen_partition

use graphon_separation::classify::{extract_features, loocv, FeatureConfig};
use graphon_separation::dataset::{coarsen, synthetic_two_class, Partition};
use graphon_separation::spectral::Channel;
use graphon_separation::{DecoratedGraphon, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let beta = NoiseFamily::Beta { kappa: 20.0 };
    let d0 = DecoratedGraphon::new(StepGraphon::from_rows(&[vec![0.8, 0.2], vec![0.2, 0.8]])?, beta)?;
    let d1 = DecoratedGraphon::new(StepGraphon::constant(0.5)?, beta)?;
    let ds = synthetic_two_class(&d0, &d1, 48, 10, "fine", 5)?;

    // 48 nodes into 12 groups of 4 consecutive nodes
    let p = Partition::new((0..48).map(|i| i / 4).collect())?;
    let coarse = ds.map_graphs(|_, g| coarsen(g, &p))?;
    println!("nodes: {} -> {}", ds.channel("fine")?[0].nodes(), coarse.channel("fine")?[0].nodes());

    let cfg = FeatureConfig::new(&["fine"], &[Channel::Adjacency], 3);
    let (x, names) = extract_features(&coarse, &cfg)?;
    println!("{}", names.join(","));
    for row in x.iter().take(3) {
        println!("{}", row.iter().map(|v| format!("{v:+.3}")).collect::<Vec<_>>().join(","));
    }
    let res = loocv(&coarse, &cfg, 0.05)?;
    println!("leave-one-out accuracy on coarse graphs: {:.3}", res.accuracy);
    Ok(())
}
