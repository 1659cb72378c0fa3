//! Monte Carlo checks of the concentration statements behind the bounds.
//!
//! Trials run in parallel, trial `t` drawing from sub-stream `(seed, t)`, so
//! results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::density::{hom_density, hom_density_graphon};
use crate::error::{Error, Result};
use crate::graphon::{DecoratedGraphon, NoiseSampler, WeightedGraph};
use crate::io::{csv_string, fmt_num};
use crate::measure::PointMeasure;
use crate::motif::Motif;
use crate::rng::{self, Stream};
use crate::transport::wasserstein_1d_vs_uniform;

/// Largest graph materialized by [`concentration_experiment`].
pub const EXACT_GRAPH_LIMIT: usize = 2048;
/// Uniform vertex maps per graph when densities are estimated.
pub const DEFAULT_MC_SAMPLES: usize = 200_000;
/// The constant in the expected-rate bound `E W¹(μ, μ_n) ≤ 3.6462 n^{-1/3}`.
pub const UNIFORM_RATE_CONSTANT: f64 = 3.6462;

/// How `t(F, G)` was evaluated in a trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Exact,
    /// Average of the edge-weight product over `samples` uniform maps.
    MonteCarlo { samples: usize },
}

/// One CSV row: `trial,statistic,bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub trial: usize,
    pub statistic: f64,
    pub bound: f64,
}

pub fn rows_csv(rows: &[ExperimentRow]) -> Result<String> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.trial.to_string(), fmt_num(r.statistic), fmt_num(r.bound)])
        .collect();
    csv_string(&["trial", "statistic", "bound"], &body)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationOutcome {
    /// `t(F, W)` of the expectation graphon.
    pub reference: f64,
    /// `t(F, G_t)` per trial.
    pub densities: Vec<f64>,
    pub eps: f64,
    /// Fraction of trials with `|t(F, G) - t(F, W)| ≥ eps`.
    pub exceedance_rate: f64,
    /// `2 exp(-k eps² / (2 v²))`.
    pub bound: f64,
    pub evaluation: Evaluation,
}

impl ConcentrationOutcome {
    /// Per-trial exceedance indicators, so the column mean is the rate.
    pub fn rows(&self) -> Vec<ExperimentRow> {
        self.densities
            .iter()
            .enumerate()
            .map(|(trial, &t)| ExperimentRow {
                trial,
                statistic: if (t - self.reference).abs() >= self.eps { 1.0 } else { 0.0 },
                bound: self.bound,
            })
            .collect()
    }
}

/// `2 exp(-k eps² / (2 v²))`.
pub fn concentration_bound(k: usize, eps: f64, v: usize) -> f64 {
    let v = v as f64;
    2.0 * (-(k as f64) * eps * eps / (2.0 * v * v)).exp()
}

/// Samples `trials` graphs of `k` nodes and records how often `t(F, G)`
/// strays from `t(F, W)` by at least `eps`.
///
/// Graphs with more than [`EXACT_GRAPH_LIMIT`] nodes are never stored: edge
/// weights are regenerated on demand from per-edge seeds and the density is
/// estimated from [`DEFAULT_MC_SAMPLES`] uniform vertex maps.
pub fn concentration_experiment(
    d: &DecoratedGraphon,
    f: &Motif,
    k: usize,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<ConcentrationOutcome> {
    let evaluation = if k <= EXACT_GRAPH_LIMIT {
        Evaluation::Exact
    } else {
        Evaluation::MonteCarlo {
            samples: DEFAULT_MC_SAMPLES,
        }
    };
    concentration_experiment_with(d, f, k, eps, trials, seed, evaluation)
}

/// [`concentration_experiment`] with the evaluation method chosen by the caller.
pub fn concentration_experiment_with(
    d: &DecoratedGraphon,
    f: &Motif,
    k: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    evaluation: Evaluation,
) -> Result<ConcentrationOutcome> {
    if trials == 0 || k == 0 {
        return Err(Error::Domain("need trials >= 1 and k >= 1".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let reference = hom_density_graphon(f, d.expectation())?;
    let samplers = d.block_samplers();
    let densities = (0..trials)
        .into_par_iter()
        .map(|t| {
            let graph_seed = rng::derive_seed(seed, t as u64);
            match evaluation {
                Evaluation::Exact => {
                    let mut g = WeightedGraph::empty(k);
                    d.sample_with(&samplers, k, &mut rng::stream(graph_seed), &mut g);
                    hom_density(f, &g)
                }
                Evaluation::MonteCarlo { samples } => {
                    let g = LazyGraph::new(d, &samplers, k, graph_seed);
                    Ok(g.estimate_density(f, samples))
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let hits = densities
        .iter()
        .filter(|&&t| (t - reference).abs() >= eps)
        .count();
    Ok(ConcentrationOutcome {
        reference,
        exceedance_rate: hits as f64 / trials as f64,
        densities,
        eps,
        bound: concentration_bound(k, eps, f.nodes()),
        evaluation,
    })
}

/// A sampled graph whose edge weights are recomputed from per-edge seeds.
struct LazyGraph<'a> {
    k: usize,
    m: usize,
    blocks: Vec<usize>,
    samplers: &'a [NoiseSampler],
    seed: u64,
}

impl<'a> LazyGraph<'a> {
    fn new(d: &DecoratedGraphon, samplers: &'a [NoiseSampler], k: usize, seed: u64) -> Self {
        let blocks = d.draw_blocks(k, &mut rng::substream(seed, 0));
        LazyGraph {
            k,
            m: d.expectation().blocks(),
            blocks,
            samplers,
            seed,
        }
    }

    fn weight(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let pair = (a * self.k + b) as u64;
        let mut edge_rng = Stream::seed_from_u64(rng::derive_seed(self.seed, 2 + pair));
        self.samplers[self.blocks[a] * self.m + self.blocks[b]].sample(&mut edge_rng)
    }

    fn estimate_density(&self, f: &Motif, samples: usize) -> f64 {
        let mut maps = rng::substream(self.seed, 1);
        let mut phi = vec![0usize; f.nodes()];
        let mut total = 0.0;
        for _ in 0..samples {
            phi.iter_mut().for_each(|x| *x = maps.random_range(0..self.k));
            let mut prod = 1.0;
            for &(a, b) in f.edges() {
                prod *= self.weight(phi[a], phi[b]);
                if prod == 0.0 {
                    break;
                }
            }
            total += prod;
        }
        total / samples as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanWassersteinOutcome {
    /// `W¹(μ, μ_n)` per trial, `μ` uniform on [0, 1].
    pub distances: Vec<f64>,
    pub mean: f64,
    /// `3.6462 n^{-1/3}`.
    pub bound: f64,
}

impl MeanWassersteinOutcome {
    pub fn rows(&self) -> Vec<ExperimentRow> {
        self.distances
            .iter()
            .enumerate()
            .map(|(trial, &w)| ExperimentRow {
                trial,
                statistic: w,
                bound: self.bound,
            })
            .collect()
    }
}

pub fn uniform_rate_bound(n: usize) -> f64 {
    UNIFORM_RATE_CONSTANT * (n as f64).powf(-1.0 / 3.0)
}

/// Averages `W¹(μ, μ_n)` over `trials` empirical measures of `n` uniform draws.
pub fn mean_wasserstein_experiment(n: usize, trials: usize, seed: u64) -> Result<MeanWassersteinOutcome> {
    if n == 0 || trials == 0 {
        return Err(Error::Domain("need n >= 1 and trials >= 1".into()));
    }
    let distances = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::substream(seed, t as u64);
            let xs: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
            wasserstein_1d_vs_uniform(&PointMeasure::uniform(&xs)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mean = distances.iter().sum::<f64>() / trials as f64;
    Ok(MeanWassersteinOutcome {
        distances,
        mean,
        bound: uniform_rate_bound(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::{NoiseFamily, StepGraphon};

    fn constant(p: f64, noise: NoiseFamily) -> DecoratedGraphon {
        DecoratedGraphon::new(StepGraphon::constant(p).unwrap(), noise).unwrap()
    }

    #[test]
    fn bound_formula() {
        // an edge has v = 2, so the exponent is 10⁴ · 0.01 / 8
        assert!((concentration_bound(10_000, 0.1, 2) - 2.0 * (-12.5_f64).exp()).abs() < 1e-18);
        assert!((concentration_bound(10_000, 0.1, 1) - 2.0 * (-50.0_f64).exp()).abs() < 1e-30);
        assert!((uniform_rate_bound(1000) - 0.36462).abs() < 1e-12);
        assert!((uniform_rate_bound(100) - 0.78555).abs() < 1e-4);
    }

    #[test]
    fn edge_concentration_on_a_large_graph() {
        let d = constant(0.5, NoiseFamily::Bernoulli);
        let out = concentration_experiment_with(
            &d,
            &Motif::edge(),
            10_000,
            0.1,
            4,
            3,
            Evaluation::MonteCarlo { samples: 20_000 },
        )
        .unwrap();
        assert_eq!(out.exceedance_rate, 0.0);
        assert!(out.bound < 1e-5);
        for t in &out.densities {
            assert!((t - 0.5).abs() < 0.03, "{t}");
        }
    }

    #[test]
    fn lazy_graph_is_symmetric_and_matches_its_law() {
        let d = constant(0.3, NoiseFamily::Beta { kappa: 10.0 });
        let samplers = d.block_samplers();
        let g = LazyGraph::new(&d, &samplers, 50, 9);
        let mut sum = 0.0;
        for i in 0..50 {
            assert_eq!(g.weight(i, i), 0.0);
            for j in 0..50 {
                assert_eq!(g.weight(i, j), g.weight(j, i));
                sum += g.weight(i, j);
            }
        }
        let mean = sum / (50.0 * 49.0);
        assert!((mean - 0.3).abs() < 0.02, "{mean}");
    }

    #[test]
    fn no_noise_and_wide_eps() {
        let w = StepGraphon::from_rows(&[vec![0.9, 0.1], vec![0.1, 0.6]]).unwrap();
        let d = DecoratedGraphon::new(w, NoiseFamily::None).unwrap();
        let out = concentration_experiment(&d, &Motif::cycle(3).unwrap(), 200, 0.1, 40, 5).unwrap();
        assert_eq!(out.evaluation, Evaluation::Exact);
        assert!(out.exceedance_rate <= out.bound);
        let wide = concentration_experiment(&d, &Motif::edge(), 30, 2.0, 20, 5).unwrap();
        assert_eq!(wide.exceedance_rate, 0.0);
        let rows = wide.rows();
        assert_eq!(rows.len(), 20);
        assert!(rows_csv(&rows).unwrap().starts_with("trial,statistic,bound\n0,0,"));
    }

    #[test]
    fn experiments_are_deterministic() {
        let d = constant(0.4, NoiseFamily::Bernoulli);
        let a = concentration_experiment(&d, &Motif::edge(), 40, 0.05, 10, 8).unwrap();
        let b = concentration_experiment(&d, &Motif::edge(), 40, 0.05, 10, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            mean_wasserstein_experiment(20, 5, 1).unwrap(),
            mean_wasserstein_experiment(20, 5, 1).unwrap()
        );
    }

    #[test]
    fn uniform_rate_examples() {
        let out = mean_wasserstein_experiment(100, 500, 11).unwrap();
        assert!(out.mean <= out.bound);
        assert!((out.mean - 0.031).abs() < 0.2 * 0.031, "{}", out.mean);
        // a single draw u sits at distance u² / 2 + (1 - u)² / 2, mean 1/3
        let one = mean_wasserstein_experiment(1, 2000, 12).unwrap();
        assert!((one.mean - 1.0 / 3.0).abs() < 0.02, "{}", one.mean);
        assert!(one.mean <= 3.6462);
    }
}
