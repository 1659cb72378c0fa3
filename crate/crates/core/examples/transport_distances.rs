//! One-dimensional and nested Wasserstein distances, with the transport plan
//! and the member matching.
//!
//! cargo run --release --example transport_distances

use graphon_separation::assignment::assignment_solve;
use graphon_separation::spectral::{ensemble, Channel};
use graphon_separation::transport::{
    nested_wasserstein_detailed, wasserstein_1d, wasserstein_1d_plan, wasserstein_1d_vs_uniform,
};
use graphon_separation::{Atom, DecoratedGraphon, NoiseFamily, PointMeasure, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let mu = PointMeasure::new(vec![
        Atom { value: -0.5, mass: 0.25 },
        Atom { value: 0.0, mass: 0.5 },
        Atom { value: 0.5, mass: 0.25 },
    ])?;
    let nu = PointMeasure::uniform(&[0.1, 0.3, 0.9])?;
    let plan = wasserstein_1d_plan(&mu, &nu)?;
    println!("W1 = {:.6}", wasserstein_1d(&mu, &nu)?);
    for (i, j, m) in &plan.pairs {
        println!("  move {m:.4} from atom {i} to atom {j}");
    }
    println!("W1 to Unif[0,1] of {{0.1, 0.3, 0.9}}: {:.6}", wasserstein_1d_vs_uniform(&nu)?);

    let cost = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
    let a = assignment_solve(3, &cost)?;
    println!("\nassignment {:?}, cost {}", a.rows_to_cols, a.objective);

    // spectral ensembles of 6 and 4 graphs; replicated to 12 members each
    let sparse = DecoratedGraphon::new(StepGraphon::constant(0.3)?, NoiseFamily::Bernoulli)?;
    let dense = DecoratedGraphon::new(StepGraphon::constant(0.6)?, NoiseFamily::Bernoulli)?;
    let e1 = ensemble(&sparse.sample_graphs(30, 6, 1)?, Channel::Adjacency)?;
    let e2 = ensemble(&dense.sample_graphs(30, 4, 2)?, Channel::Adjacency)?;
    let nested = nested_wasserstein_detailed(&e1, &e2)?;
    println!(
        "\nnested W1 = {:.6} over {} replicated members, matching {:?}",
        nested.distance, nested.replicated_size, nested.matching
    );
    Ok(())
}
