//! Normalized spectra of a sampled graph and the truncated feature vectors
//! built from them.
//!
//! cargo run --release --example spectral_features

use graphon_separation::spectral::{
    channel_measure, feature_names, standardize, truncate_features, Channel, TruncationOrder,
};
use graphon_separation::{DecoratedGraphon, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let w = StepGraphon::from_rows(&[vec![0.8, 0.2], vec![0.2, 0.8]])?;
    let d = DecoratedGraphon::new(w, NoiseFamily::Beta { kappa: 20.0 })?;
    let graphs = d.sample_graphs(40, 4, 3)?;

    for channel in [Channel::Adjacency, Channel::Laplacian, Channel::Degree] {
        let mu = channel_measure(&graphs[0], channel);
        let (lo, hi) = mu
            .values()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        println!(
            "{:<9} atoms {:>3}  range [{lo:.4}, {hi:.4}]  mean {:.4}",
            channel.tag(),
            mu.len(),
            mu.mean()
        );
    }

    // two extreme eigenvalues at each end
    let r = 2;
    let names = feature_names("", Channel::Adjacency, r);
    println!("\n{}", names.join(","));
    let rows: Vec<Vec<f64>> = graphs
        .iter()
        .map(|g| truncate_features(&channel_measure(g, Channel::Adjacency), r, TruncationOrder::Signed))
        .collect::<graphon_separation::Result<_>>()?;
    for row in &rows {
        println!("{}", row.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(","));
    }
    println!("\nstandardized:");
    for row in standardize(&rows)? {
        println!("{}", row.iter().map(|v| format!("{v:+.3}")).collect::<Vec<_>>().join(","));
    }

    let abs = truncate_features(&channel_measure(&graphs[0], Channel::Adjacency), r, TruncationOrder::Absolute)?;
    println!("\nabsolute ordering, graph 0: {abs:.4?}");
    Ok(())
}
