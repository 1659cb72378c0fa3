//! Spectral features and an ℓ1-penalized linear classifier evaluated by
//! leave-one-out cross-validation and a label-permutation test.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::spectral::{self, Channel, Standardizer, TruncationOrder};

/// Iterations of the subgradient schedule.
pub const TRAIN_ITERATIONS: usize = 10_000;

/// A dataset channel read through one spectral kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSource {
    pub channel: String,
    pub kind: Channel,
}

impl FromStr for FeatureSource {
    type Err = Error;

    /// `"name"` (Laplacian) or `"name:kind"`.
    fn from_str(s: &str) -> Result<Self> {
        let (channel, kind) = match s.split_once(':') {
            Some((c, k)) => (c, k.parse()?),
            None => (s, Channel::Laplacian),
        };
        if channel.is_empty() {
            return Err(Error::Parse {
                context: "feature source".into(),
                detail: format!("empty channel name in {s:?}"),
            });
        }
        Ok(FeatureSource {
            channel: channel.to_string(),
            kind,
        })
    }
}

impl fmt::Display for FeatureSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.channel, self.kind)
    }
}

/// Which spectra to truncate and how many extremes to keep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureConfig {
    pub sources: Vec<FeatureSource>,
    pub r: usize,
    pub order: TruncationOrder,
}

impl FeatureConfig {
    /// Every named channel through every listed kind.
    pub fn new(channels: &[&str], kinds: &[Channel], r: usize) -> Self {
        let sources = channels
            .iter()
            .flat_map(|c| {
                kinds.iter().map(move |&kind| FeatureSource {
                    channel: c.to_string(),
                    kind,
                })
            })
            .collect();
        FeatureConfig {
            sources,
            r,
            order: TruncationOrder::Signed,
        }
    }

    pub fn column_names(&self) -> Vec<String> {
        self.sources
            .iter()
            .flat_map(|s| spectral::feature_names(&format!("{}_", s.channel), s.kind, self.r))
            .collect()
    }
}

/// Unstandardized features, one row per item: `2r` truncated spectral values
/// per source, sources in configuration order.
pub fn raw_features(ds: &Dataset, cfg: &FeatureConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.sources.is_empty() {
        return Err(Error::Domain("no feature sources selected".into()));
    }
    let per_source = cfg
        .sources
        .iter()
        .map(|src| {
            let graphs = ds.channel(&src.channel)?;
            graphs
                .par_iter()
                .map(|g| {
                    spectral::truncate_features(&spectral::channel_measure(g, src.kind), cfg.r, cfg.order)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..ds.len())
        .map(|i| per_source.iter().flat_map(|cols| cols[i].iter().copied()).collect())
        .collect())
}

/// Standardized feature matrix and its column names.
pub fn extract_features(ds: &Dataset, cfg: &FeatureConfig) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    let raw = raw_features(ds, cfg)?;
    Ok((spectral::standardize(&raw)?, cfg.column_names()))
}

/// `x ↦ 1` when `w·x + b > 0`, `0` when negative; a zero score goes to `tie`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub tie: u8,
}

impl LinearModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> u8 {
        let s = self.score(x);
        if s > 0.0 {
            1
        } else if s < 0.0 {
            0
        } else {
            self.tie
        }
    }

    pub fn nonzero(&self) -> usize {
        self.weights.iter().filter(|w| **w != 0.0).count()
    }
}

/// Mean hinge loss plus `lambda ‖w‖₁`, labels mapped to ±1.
pub fn objective(model: &LinearModel, x: &[Vec<f64>], y: &[u8], lambda: f64) -> f64 {
    let hinge = x
        .iter()
        .zip(y)
        .map(|(row, &label)| (1.0 - sign(label) * model.score(row)).max(0.0))
        .sum::<f64>()
        / x.len() as f64;
    hinge + lambda * model.weights.iter().map(|w| w.abs()).sum::<f64>()
}

fn sign(label: u8) -> f64 {
    if label == 1 {
        1.0
    } else {
        -1.0
    }
}

fn check_xy(x: &[Vec<f64>], y: &[u8]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!("{} rows but {} labels", x.len(), y.len())));
    }
    let p = x.first().map_or(0, Vec::len);
    if x.iter().any(|r| r.len() != p) {
        return Err(Error::Shape("feature rows differ in length".into()));
    }
    if let Some(v) = x.iter().flatten().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("feature value {v} is not finite")));
    }
    if let Some(l) = y.iter().find(|&&l| l > 1) {
        return Err(Error::Domain(format!("label {l} is not 0 or 1")));
    }
    Ok(p)
}

/// Minimizes mean hinge loss plus `lambda ‖w‖₁`.
///
/// Proximal subgradient steps with step size `1/√t` for
/// `t = 1..=TRAIN_ITERATIONS`, starting from zero: a subgradient step on the
/// hinge term, then soft-thresholding of `w`. The returned model is the
/// average of all iterates. The intercept is not penalized.
pub fn train_l1_linear(x: &[Vec<f64>], y: &[u8], lambda: f64) -> Result<LinearModel> {
    train_l1_linear_with(x, y, lambda, TRAIN_ITERATIONS)
}

pub fn train_l1_linear_with(
    x: &[Vec<f64>],
    y: &[u8],
    lambda: f64,
    iterations: usize,
) -> Result<LinearModel> {
    let p = check_xy(x, y)?;
    if x.len() < 2 {
        return Err(Error::Degenerate(format!("need at least 2 samples, got {}", x.len())));
    }
    let ones = y.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == y.len() {
        return Err(Error::Degenerate("training labels contain a single class".into()));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if iterations == 0 {
        return Err(Error::Domain("iterations must be positive".into()));
    }
    let n = x.len();
    // rows and columns of diag(s) X, labels mapped to s = ±1
    let s: Vec<f64> = y.iter().map(|&l| sign(l)).collect();
    let rows: Vec<f64> = x
        .iter()
        .zip(&s)
        .flat_map(|(r, &si)| r.iter().map(move |v| si * v))
        .collect();
    let cols: Vec<f64> = (0..p).flat_map(|j| (0..n).map(|i| rows[i * p + j]).collect::<Vec<_>>()).collect();

    let mut w = vec![0.0; p];
    let mut b = 0.0;
    let mut w_sum = vec![0.0; p];
    let mut b_sum = 0.0;
    let mut margin = vec![0.0; n];
    let mut g = vec![0.0; p];
    let inv_n = 1.0 / n as f64;
    for t in 1..=iterations {
        let eta = 1.0 / (t as f64).sqrt();
        margin.iter_mut().zip(&s).for_each(|(m, si)| *m = si * b);
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0.0 {
                let col = &cols[j * n..(j + 1) * n];
                margin.iter_mut().zip(col).for_each(|(m, c)| *m += wj * c);
            }
        }
        g.iter_mut().for_each(|v| *v = 0.0);
        let mut gb = 0.0;
        for (i, &m) in margin.iter().enumerate() {
            if m < 1.0 {
                g.iter_mut()
                    .zip(&rows[i * p..(i + 1) * p])
                    .for_each(|(gj, v)| *gj -= v);
                gb -= s[i];
            }
        }
        let step = eta * inv_n;
        let shrink = eta * lambda;
        for ((wj, gj), ws) in w.iter_mut().zip(&g).zip(w_sum.iter_mut()) {
            let u = *wj - step * gj;
            *wj = u.signum() * (u.abs() - shrink).max(0.0);
            *ws += *wj;
        }
        b -= step * gb;
        b_sum += b;
    }
    let scale = 1.0 / iterations as f64;
    Ok(LinearModel {
        weights: w_sum.into_iter().map(|v| v * scale).collect(),
        intercept: b_sum * scale,
        tie: majority(y),
    })
}

fn majority(y: &[u8]) -> u8 {
    let ones = y.iter().filter(|&&l| l == 1).count();
    u8::from(2 * ones >= y.len())
}

/// Outcome for one held-out item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fold {
    pub index: usize,
    pub label: u8,
    pub predicted: u8,
    pub score: f64,
    pub nonzero_weights: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoocvResult {
    pub accuracy: f64,
    pub folds: Vec<Fold>,
}

/// Leave-one-out folds with standardization fitted on the training part only.
struct FoldData {
    train: Vec<Vec<f64>>,
    held_out: Vec<f64>,
}

fn fold_data(raw: &[Vec<f64>]) -> Result<Vec<FoldData>> {
    (0..raw.len())
        .map(|i| {
            let rest: Vec<Vec<f64>> = raw
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let st = Standardizer::fit(&rest)?;
            Ok(FoldData {
                train: rest.iter().map(|r| st.apply(r)).collect(),
                held_out: st.apply(&raw[i]),
            })
        })
        .collect()
}

fn run_folds(folds: &[FoldData], y: &[u8], lambda: f64, iterations: usize) -> Result<LoocvResult> {
    let results = folds
        .par_iter()
        .enumerate()
        .map(|(i, fd)| {
            let ty: Vec<u8> = y
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, &l)| l)
                .collect();
            let ones = ty.iter().filter(|&&l| l == 1).count();
            // a single-class training set can only predict that class
            let (predicted, score, nonzero) = if ones == 0 || ones == ty.len() {
                (ty[0], 0.0, 0)
            } else {
                let m = train_l1_linear_with(&fd.train, &ty, lambda, iterations)?;
                (m.predict(&fd.held_out), m.score(&fd.held_out), m.nonzero())
            };
            Ok(Fold {
                index: i,
                label: y[i],
                predicted,
                score,
                nonzero_weights: nonzero,
            })
        })
        .collect::<Result<Vec<Fold>>>()?;
    let correct = results.iter().filter(|f| f.label == f.predicted).count();
    Ok(LoocvResult {
        accuracy: correct as f64 / results.len() as f64,
        folds: results,
    })
}

/// Leave-one-out accuracy on a precomputed unstandardized feature matrix.
pub fn loocv_features(raw: &[Vec<f64>], y: &[u8], lambda: f64) -> Result<LoocvResult> {
    check_xy(raw, y)?;
    if raw.len() < 3 {
        return Err(Error::Domain(format!("leave-one-out needs n >= 3, got {}", raw.len())));
    }
    run_folds(&fold_data(raw)?, y, lambda, TRAIN_ITERATIONS)
}

/// Leave-one-out accuracy of the classifier on the dataset's spectral features.
pub fn loocv(ds: &Dataset, cfg: &FeatureConfig, lambda: f64) -> Result<LoocvResult> {
    loocv_features(&raw_features(ds, cfg)?, &ds.labels(), lambda)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationResult {
    pub observed: LoocvResult,
    /// Leave-one-out accuracy under each label permutation.
    pub permuted: Vec<f64>,
    /// `(1 + #{permuted ≥ observed}) / (1 + n_perm)`.
    pub p_value: f64,
}

/// Minimum number of permutations accepted by the permutation test.
pub const MIN_PERMUTATIONS: usize = 19;

/// Permutation test on a precomputed unstandardized feature matrix.
///
/// Permutation `i` shuffles the labels with sub-stream `(seed, i)`.
pub fn permutation_test_features(
    raw: &[Vec<f64>],
    y: &[u8],
    lambda: f64,
    n_perm: usize,
    seed: u64,
) -> Result<PermutationResult> {
    check_xy(raw, y)?;
    if n_perm < MIN_PERMUTATIONS {
        return Err(Error::Domain(format!(
            "need at least {MIN_PERMUTATIONS} permutations, got {n_perm}"
        )));
    }
    if raw.len() < 3 {
        return Err(Error::Domain(format!("leave-one-out needs n >= 3, got {}", raw.len())));
    }
    let folds = fold_data(raw)?;
    let observed = run_folds(&folds, y, lambda, TRAIN_ITERATIONS)?;
    let permuted = (0..n_perm)
        .into_par_iter()
        .map(|i| {
            let mut order: Vec<usize> = (0..y.len()).collect();
            order.shuffle(&mut rng::substream(seed, i as u64));
            let shuffled: Vec<u8> = order.iter().map(|&j| y[j]).collect();
            Ok(run_folds(&folds, &shuffled, lambda, TRAIN_ITERATIONS)?.accuracy)
        })
        .collect::<Result<Vec<f64>>>()?;
    let hits = permuted.iter().filter(|&&a| a >= observed.accuracy).count();
    Ok(PermutationResult {
        p_value: (1 + hits) as f64 / (1 + n_perm) as f64,
        observed,
        permuted,
    })
}

pub fn permutation_test(
    ds: &Dataset,
    cfg: &FeatureConfig,
    lambda: f64,
    n_perm: usize,
    seed: u64,
) -> Result<PermutationResult> {
    permutation_test_features(&raw_features(ds, cfg)?, &ds.labels(), lambda, n_perm, seed)
}
