//! Normalized adjacency spectra, Laplacian spectra and degree measures.
//!
//! All three channels produce probability measures with one atom of mass
//! `1/k` per node:
//!
//! * adjacency: eigenvalues of `A/k`, inside `[-1, 1]`;
//! * Laplacian: eigenvalues of `(D - A)/k`, inside `[0, 2]`, stored shifted
//!   by `-1` so that they fit on `[-1, 1]`;
//! * degree: `d_i = (1/k) Σ_j w_ij`, inside `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::WeightedGraph;
use crate::measure::{MeasureEnsemble, PointMeasure};

/// Offset applied to stored Laplacian atoms.
pub const LAPLACIAN_SHIFT: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Adjacency,
    Laplacian,
    Degree,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Adjacency, Channel::Laplacian, Channel::Degree];

    /// Short tag used in feature column names.
    pub fn tag(self) -> &'static str {
        match self {
            Channel::Adjacency => "adj",
            Channel::Laplacian => "lap",
            Channel::Degree => "deg",
        }
    }
}

impl FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "adjacency" | "adj" => Ok(Channel::Adjacency),
            "laplacian" | "lap" => Ok(Channel::Laplacian),
            "degree" | "deg" => Ok(Channel::Degree),
            other => Err(Error::Parse {
                context: "channel".into(),
                detail: format!("unknown spectral channel {other:?}"),
            }),
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Adjacency => "adjacency",
            Channel::Laplacian => "laplacian",
            Channel::Degree => "degree",
        })
    }
}

fn scaled_matrix(g: &WeightedGraph, laplacian: bool) -> DMatrix<f64> {
    let k = g.nodes();
    let scale = 1.0 / k as f64;
    let mut m = DMatrix::from_row_slice(k, k, g.weights()) * scale;
    if laplacian {
        m.neg_mut();
        for i in 0..k {
            m[(i, i)] = g.row(i).iter().sum::<f64>() * scale;
        }
    }
    m
}

/// Eigenvalues and eigenvectors (as columns) of the scaled adjacency or
/// Laplacian matrix.
pub fn eigen_decomposition(g: &WeightedGraph, channel: Channel) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let laplacian = match channel {
        Channel::Adjacency => false,
        Channel::Laplacian => true,
        Channel::Degree => {
            return Err(Error::Domain("the degree channel has no eigen decomposition".into()))
        }
    };
    let eig = SymmetricEigen::new(scaled_matrix(g, laplacian));
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

fn eigenvalues(g: &WeightedGraph, laplacian: bool) -> Vec<f64> {
    SymmetricEigen::new(scaled_matrix(g, laplacian))
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// Atoms at the eigenvalues of `A/k`, each of mass `1/k`.
pub fn adjacency_spectrum(g: &WeightedGraph) -> PointMeasure {
    let values: Vec<f64> = eigenvalues(g, false)
        .into_iter()
        .map(|x| x.clamp(-1.0, 1.0))
        .collect();
    PointMeasure::uniform(&values).expect("a graph has at least one node")
}

/// Atoms at the eigenvalues of `(D - A)/k` shifted by [`LAPLACIAN_SHIFT`].
pub fn laplacian_spectrum(g: &WeightedGraph) -> PointMeasure {
    let values: Vec<f64> = eigenvalues(g, true)
        .into_iter()
        .map(|x| (x + LAPLACIAN_SHIFT).clamp(-1.0, 1.0))
        .collect();
    PointMeasure::uniform(&values).expect("a graph has at least one node")
}

/// Atoms at the normalized degrees `(1/k) Σ_j w_ij`.
pub fn degree_measure(g: &WeightedGraph) -> PointMeasure {
    let k = g.nodes() as f64;
    let values: Vec<f64> = (0..g.nodes())
        .map(|i| (g.row(i).iter().sum::<f64>() / k).clamp(0.0, 1.0))
        .collect();
    PointMeasure::uniform(&values).expect("a graph has at least one node")
}

pub fn channel_measure(g: &WeightedGraph, channel: Channel) -> PointMeasure {
    match channel {
        Channel::Adjacency => adjacency_spectrum(g),
        Channel::Laplacian => laplacian_spectrum(g),
        Channel::Degree => degree_measure(g),
    }
}

/// One member per graph through the chosen channel.
pub fn ensemble(graphs: &[WeightedGraph], channel: Channel) -> Result<MeasureEnsemble> {
    MeasureEnsemble::new(graphs.iter().map(|g| channel_measure(g, channel)).collect())
}

/// How [`truncate_features`] ranks atoms before keeping the two extremes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationOrder {
    /// Ascending signed value.
    #[default]
    Signed,
    /// Ascending absolute value.
    Absolute,
}

/// The `r` lowest-ranked followed by the `r` highest-ranked atom values.
///
/// Ties keep the original atom order (stable sort).
pub fn truncate_features(spec: &PointMeasure, r: usize, order: TruncationOrder) -> Result<Vec<f64>> {
    if r == 0 {
        return Err(Error::Domain("truncation rank r must be positive".into()));
    }
    if spec.len() < 2 * r {
        return Err(Error::Domain(format!(
            "cannot keep 2r = {} extremes of {} atoms",
            2 * r,
            spec.len()
        )));
    }
    let mut values: Vec<f64> = spec.values().collect();
    match order {
        TruncationOrder::Signed => values.sort_by(f64::total_cmp),
        TruncationOrder::Absolute => values.sort_by(|a, b| a.abs().total_cmp(&b.abs())),
    }
    let n = values.len();
    let mut out = values[..r].to_vec();
    out.extend_from_slice(&values[n - r..]);
    Ok(out)
}

/// Column names `"{prefix}{tag}_low_{i}"` and `"{prefix}{tag}_high_{i}"`, `i = 1..=r`.
pub fn feature_names(prefix: &str, channel: Channel, r: usize) -> Vec<String> {
    let tag = channel.tag();
    (1..=r)
        .map(|i| format!("{prefix}{tag}_low_{i}"))
        .chain((1..=r).map(|i| format!("{prefix}{tag}_high_{i}")))
        .collect()
}

/// Per-column location and scale learned by [`Standardizer::fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    scales: Vec<f64>,
}

impl Standardizer {
    /// Column means and population standard deviations. Columns whose spread
    /// is negligible get scale 0 and map to zero.
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::Domain(format!("standardizing needs n >= 2 rows, got {n}")));
        }
        let p = rows[0].len();
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::Shape("feature rows differ in length".into()));
        }
        let mut means = vec![0.0; p];
        let mut scales = vec![0.0; p];
        for j in 0..p {
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
            let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n as f64;
            let sd = var.sqrt();
            means[j] = mean;
            scales[j] = if sd > 1e-12 * (1.0 + mean.abs()) { sd } else { 0.0 };
        }
        Ok(Standardizer { means, scales })
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.scales))
            .map(|(x, (m, s))| if *s > 0.0 { (x - m) / s } else { 0.0 })
            .collect()
    }
}

/// Zero mean and unit population standard deviation per column; constant
/// columns become zeros.
pub fn standardize(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let s = Standardizer::fit(rows)?;
    Ok(rows.iter().map(|r| s.apply(r)).collect())
}
