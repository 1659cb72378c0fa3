//! Motif homomorphism densities, graph spectra and cut-metric lower bounds
//! for populations of weighted graphs sampled from decorated graphons.

pub mod assignment;
pub mod bounds;
pub mod classify;
pub mod cli;
pub mod cut;
pub mod dataset;
pub mod density;
pub mod error;
pub mod experiments;
pub mod graphon;
pub mod io;
pub mod measure;
pub mod motif;
pub mod rng;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
pub use graphon::{graphon_of_graph, DecoratedGraphon, NoiseFamily, StepGraphon, WeightedGraph};
pub use measure::{Atom, MeasureEnsemble, PointMeasure};
pub use motif::{Motif, MotifFamily};
