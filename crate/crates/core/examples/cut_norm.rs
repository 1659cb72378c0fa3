//! Cut norms of step functions and block-permutation cut distances.
//!
//! cargo run --release --example cut_norm

use graphon_separation::cut::{cut_distance_upper, cut_norm, cut_norm_under, SignedStep};
use graphon_separation::StepGraphon;

fn main() -> graphon_separation::Result<()> {
    let assortative = StepGraphon::from_rows(&[vec![0.9, 0.1], vec![0.1, 0.9]])?;
    let flat = StepGraphon::constant(0.5)?.refine(2)?;
    let diff = SignedStep::difference(&assortative, &flat)?;
    println!("cut norm of W - 1/2: {:.4}", cut_norm(&diff)?);

    let a = StepGraphon::from_rows(&[
        vec![0.8, 0.3, 0.1],
        vec![0.3, 0.6, 0.2],
        vec![0.1, 0.2, 0.4],
    ])?;
    // the same graphon with blocks listed in another order
    let b = a.permuted(&[2, 0, 1])?;
    println!("identity labeling: {:.4}", cut_norm_under(&a, &b, &[0, 1, 2])?);
    let (d, perm) = cut_distance_upper(&a, &b)?;
    println!("best block permutation {perm:?}: {d:.4}");

    let shifted = StepGraphon::from_rows(&[
        vec![0.7, 0.3, 0.1],
        vec![0.3, 0.6, 0.2],
        vec![0.1, 0.2, 0.5],
    ])?;
    let (d, perm) = cut_distance_upper(&a, &shifted)?;
    println!("perturbed diagonal {perm:?}: {d:.4}");
    Ok(())
}
