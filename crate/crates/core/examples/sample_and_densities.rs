//! Samples weighted graphs from a two-block decorated graphon and compares
//! their motif densities with the graphon's.
//!
//! cargo run --release --example sample_and_densities -- [k] [seed]

use graphon_separation::density::{
    cycle_density_via_spectrum, hom_density, hom_density_graphon, injective_hom_density,
};
use graphon_separation::spectral::adjacency_spectrum;
use graphon_separation::{DecoratedGraphon, Motif, NoiseFamily, StepGraphon};

fn main() -> graphon_separation::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(60, |s| s.parse().expect("k"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let w = StepGraphon::from_rows(&[vec![0.7, 0.3], vec![0.3, 0.5]])?;
    let motifs = [
        Motif::edge(),
        Motif::cycle(3)?,
        Motif::cycle(4)?,
        Motif::star(3)?,
        Motif::path(4)?,
    ];
    for noise in [NoiseFamily::Bernoulli, NoiseFamily::Beta { kappa: 10.0 }, NoiseFamily::None] {
        let d = DecoratedGraphon::new(w.clone(), noise)?;
        let g = d.sample_graph(k, seed)?;
        println!("{noise:?}, k = {k}");
        println!("  {:<6} {:>10} {:>10} {:>10}", "motif", "t(F,W)", "t(F,G)", "t_inj(F,G)");
        for f in &motifs {
            println!(
                "  {:<6} {:>10.5} {:>10.5} {:>10.5}",
                f.to_string(),
                hom_density_graphon(f, &w)?,
                hom_density(f, &g)?,
                injective_hom_density(f, &g)?
            );
        }
    }

    // power sums of the normalized spectrum are cycle densities
    let g = DecoratedGraphon::new(w, NoiseFamily::Bernoulli)?.sample_graph(60, seed)?;
    let spec = adjacency_spectrum(&g);
    for m in 3..=5 {
        let via_spec = cycle_density_via_spectrum(m, &spec, g.nodes())?;
        println!("C{m}: spectrum {via_spec:.12}  direct {:.12}", hom_density(&Motif::cycle(m)?, &g)?);
    }
    Ok(())
}
