//! Cut-distance lower bounds from motif densities and spectra, with the
//! probabilities at which they hold.
//!
//! The bounds are one-sided: a positive value certifies (at the stated
//! confidence) that the expectation graphons of two populations differ in
//! cut distance by at least that much. A non-positive value says nothing.
//!
//! Confidence expressions use the decaying form `exp(-k n^{-2/3} / (2 e(F)²))`;
//! the probabilities are clamped to `[0, 1]`, bounds are not.
//! `c` is the unspecified absolute constant of the Wasserstein concentration
//! step and is always an explicit argument.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::density::empirical_density_measure;
use crate::error::{Error, Result};
use crate::graphon::WeightedGraph;
use crate::measure::{MeasureEnsemble, PointMeasure};
use crate::motif::Motif;
use crate::spectral::{self, Channel};
use crate::transport::{nested_wasserstein, wasserstein_1d};

/// Default absolute constant `c`.
pub const DEFAULT_C: f64 = 1.0;
/// Default largest cycle length scanned by [`equality_test_spectral`].
pub const DEFAULT_V_MAX: usize = 8;

fn cbrt_inv(n: f64) -> f64 {
    n.powf(-1.0 / 3.0)
}

/// `e(F)^{-1} (dist - 9 n^{-1/3})`.
pub fn thm1_bound(dist: f64, edges: usize, n: f64) -> f64 {
    (dist - 9.0 * cbrt_inv(n)) / edges as f64
}

/// `1 - 2 exp(-k n^{-2/3} / (2 e(F)²)) - 2 exp(-0.09 c n^{2/3})`, clamped.
pub fn thm1_confidence(k: f64, n: f64, edges: usize, c: f64) -> f64 {
    let e = edges as f64;
    let p = 1.0 - 2.0 * (-k * n.powf(-2.0 / 3.0) / (2.0 * e * e)).exp()
        - 2.0 * (-0.09 * c * n.powf(2.0 / 3.0)).exp();
    p.clamp(0.0, 1.0)
}

/// `v^{-2} 2^{-1} (4e)^{-v} (nested - 3/(πv) - 18 v (4e)^v n^{-1/3})`.
///
/// The `(4e)^v` factors cancel in the sampling term, so the expression is
/// evaluated as `(nested - 3/(πv)) (4e)^{-v} / (2v²) - 9 n^{-1/3} / v`.
pub fn thm2_bound(nested_dist: f64, v: usize, n: f64) -> f64 {
    thm2_core(nested_dist, v) - 9.0 * cbrt_inv(n) / v as f64
}

fn thm2_core(nested_dist: f64, v: usize) -> f64 {
    let vf = v as f64;
    let decay = (-vf * (4.0 * E).ln()).exp();
    (nested_dist - 3.0 / (PI * vf)) * decay / (2.0 * vf * vf)
}

/// `1 - 2v exp(-k n^{-2/3} / (2v²)) - 2v exp(-0.09 c n^{2/3})`, clamped.
pub fn thm2_confidence(k: f64, n: f64, v: usize, c: f64) -> f64 {
    let vf = v as f64;
    let p = 1.0 - 2.0 * vf * (-k * n.powf(-2.0 / 3.0) / (2.0 * vf * vf)).exp()
        - 2.0 * vf * (-0.09 * c * n.powf(2.0 / 3.0)).exp();
    p.clamp(0.0, 1.0)
}

/// Unequal group sizes: `e(F)^{-1} (dist - 5 n₁^{-1/3} - 5 n₂^{-1/3})`.
pub fn hetero_thm1_bound(dist: f64, edges: usize, n1: f64, n2: f64) -> f64 {
    (dist - 5.0 * cbrt_inv(n1) - 5.0 * cbrt_inv(n2)) / edges as f64
}

fn one_sided_terms(k: f64, n: f64, scale: f64, c: f64) -> f64 {
    (-k * n.powf(-2.0 / 3.0) / (2.0 * scale * scale)).exp() + (-0.09 * c * n.powf(2.0 / 3.0)).exp()
}

/// Confidence of [`hetero_thm1_bound`], clamped.
pub fn hetero_thm1_confidence(k: f64, n1: f64, n2: f64, edges: usize, c: f64) -> f64 {
    let e = edges as f64;
    (1.0 - one_sided_terms(k, n1, e, c) - one_sided_terms(k, n2, e, c)).clamp(0.0, 1.0)
}

/// Unequal group sizes: the spectral bound with sampling term
/// `18 v (4e)^v (n₁^{-1/3} + n₂^{-1/3})`.
pub fn hetero_thm2_bound(nested_dist: f64, v: usize, n1: f64, n2: f64) -> f64 {
    thm2_core(nested_dist, v) - 9.0 * (cbrt_inv(n1) + cbrt_inv(n2)) / v as f64
}

/// Confidence of [`hetero_thm2_bound`], clamped.
pub fn hetero_thm2_confidence(k: f64, n1: f64, n2: f64, v: usize, c: f64) -> f64 {
    let vf = v as f64;
    (1.0 - vf * one_sided_terms(k, n1, vf, c) - vf * one_sided_terms(k, n2, vf, c)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Distinct,
    Inconclusive,
}

/// Parameters echoed into a [`SeparationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub n1: usize,
    pub n2: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub motif: Option<String>,
    /// `e(F)` for motif tests.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    /// Cycle length for spectral tests.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<Channel>,
    pub c: f64,
    pub threshold: f64,
}

/// One row of the cycle-length scan in a spectral report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEntry {
    pub v: usize,
    pub bound: f64,
    pub confidence: f64,
}

/// Outcome of a two-population separation test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    /// `W¹` of the density measures, or nested `W¹` of the spectra.
    pub distance: f64,
    /// Lower bound on the cut distance; non-positive means uninformative.
    pub bound: f64,
    pub confidence: f64,
    pub params: ReportParams,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scan: Vec<ScanEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_v: Option<usize>,
}

fn verdict(bound: f64, confidence: f64, threshold: f64) -> Verdict {
    if bound > 0.0 && confidence >= threshold {
        Verdict::Distinct
    } else {
        Verdict::Inconclusive
    }
}

fn common_size(graphs1: &[WeightedGraph], graphs2: &[WeightedGraph]) -> Result<usize> {
    let k = graphs1
        .first()
        .or(graphs2.first())
        .ok_or_else(|| Error::Domain("both groups are empty".into()))?
        .nodes();
    if graphs1.is_empty() || graphs2.is_empty() {
        return Err(Error::Domain("each group needs at least one graph".into()));
    }
    if let Some(g) = graphs1.iter().chain(graphs2).find(|g| g.nodes() != k) {
        return Err(Error::Shape(format!(
            "all graphs must have k = {k} nodes, found one with {}",
            g.nodes()
        )));
    }
    Ok(k)
}

/// Motif test from precomputed density measures `t̄`, `t̄'` of `n1`, `n2`
/// graphs with `k` nodes each.
pub fn motif_report(
    t1: &PointMeasure,
    t2: &PointMeasure,
    f: &Motif,
    k: usize,
    c: f64,
    threshold: f64,
) -> Result<SeparationReport> {
    let (n1, n2) = (t1.len(), t2.len());
    let dist = wasserstein_1d(t1, t2)?;
    let edges = f.edge_count();
    if edges == 0 {
        return Err(Error::Domain("motif must have at least one edge".into()));
    }
    let kf = k as f64;
    let (bound, confidence) = if n1 == n2 {
        let n = n1 as f64;
        (thm1_bound(dist, edges, n), thm1_confidence(kf, n, edges, c))
    } else {
        let (a, b) = (n1 as f64, n2 as f64);
        (
            hetero_thm1_bound(dist, edges, a, b),
            hetero_thm1_confidence(kf, a, b, edges, c),
        )
    };
    Ok(SeparationReport {
        distance: dist,
        bound,
        confidence,
        params: ReportParams {
            n1,
            n2,
            k,
            motif: Some(f.to_string()),
            edges: Some(edges),
            v: None,
            channel: None,
            c,
            threshold,
        },
        verdict: verdict(bound, confidence, threshold),
        scan: Vec::new(),
        best_v: None,
    })
}

/// Compares the empirical `F`-density measures of two groups.
pub fn equality_test_motif(
    graphs1: &[WeightedGraph],
    graphs2: &[WeightedGraph],
    f: &Motif,
    c: f64,
    threshold: f64,
) -> Result<SeparationReport> {
    let k = common_size(graphs1, graphs2)?;
    let t1 = empirical_density_measure(f, graphs1)?;
    let t2 = empirical_density_measure(f, graphs2)?;
    motif_report(&t1, &t2, f, k, c, threshold)
}

/// Settings for [`equality_test_spectral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTest {
    /// Cycle length at which the headline bound is reported.
    pub v: usize,
    /// The scan covers `1..=v_max`.
    pub v_max: usize,
    pub channel: Channel,
    pub c: f64,
    pub threshold: f64,
}

impl Default for SpectralTest {
    fn default() -> Self {
        SpectralTest {
            v: 1,
            v_max: DEFAULT_V_MAX,
            channel: Channel::Adjacency,
            c: DEFAULT_C,
            threshold: 0.9,
        }
    }
}

/// Spectral test from precomputed ensembles of `k`-node graphs.
pub fn spectral_report(
    a: &MeasureEnsemble,
    b: &MeasureEnsemble,
    k: usize,
    cfg: &SpectralTest,
) -> Result<SeparationReport> {
    if cfg.v == 0 || cfg.v_max == 0 {
        return Err(Error::Domain("cycle length v must be positive".into()));
    }
    let (n1, n2) = (a.len(), b.len());
    let dist = nested_wasserstein(a, b)?;
    let kf = k as f64;
    let at = |v: usize| -> ScanEntry {
        let (bound, confidence) = if n1 == n2 {
            let n = n1 as f64;
            (thm2_bound(dist, v, n), thm2_confidence(kf, n, v, cfg.c))
        } else {
            let (x, y) = (n1 as f64, n2 as f64);
            (
                hetero_thm2_bound(dist, v, x, y),
                hetero_thm2_confidence(kf, x, y, v, cfg.c),
            )
        };
        ScanEntry {
            v,
            bound,
            confidence,
        }
    };
    let head = at(cfg.v);
    let scan: Vec<ScanEntry> = (1..=cfg.v_max).map(at).collect();
    let best_v = scan
        .iter()
        .fold(None::<ScanEntry>, |best, e| match best {
            Some(b) if b.bound >= e.bound => Some(b),
            _ => Some(*e),
        })
        .map(|e| e.v);
    Ok(SeparationReport {
        distance: dist,
        bound: head.bound,
        confidence: head.confidence,
        params: ReportParams {
            n1,
            n2,
            k,
            motif: None,
            edges: None,
            v: Some(cfg.v),
            channel: Some(cfg.channel),
            c: cfg.c,
            threshold: cfg.threshold,
        },
        verdict: verdict(head.bound, head.confidence, cfg.threshold),
        scan,
        best_v,
    })
}

/// Compares the spectral ensembles of two groups by nested Wasserstein distance.
pub fn equality_test_spectral(
    graphs1: &[WeightedGraph],
    graphs2: &[WeightedGraph],
    cfg: &SpectralTest,
) -> Result<SeparationReport> {
    let k = common_size(graphs1, graphs2)?;
    let a = spectral::ensemble(graphs1, cfg.channel)?;
    let b = spectral::ensemble(graphs2, cfg.channel)?;
    spectral_report(&a, &b, k, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::{DecoratedGraphon, NoiseFamily, StepGraphon};

    #[test]
    fn thm1_examples() {
        assert!((thm1_bound(0.6, 1, 1e6) - 0.51).abs() < 1e-12);
        assert!((thm1_bound(0.6, 1, 1000.0) + 0.3).abs() < 1e-12);
        for e in 1..5 {
            assert!(thm1_bound(0.0, e, 1e9) < 0.0);
        }
    }

    #[test]
    fn thm1_confidence_examples() {
        assert!(thm1_confidence(1e6, 1e6, 1, 1.0) > 1.0 - 1e-12);
        // both correction terms, evaluated directly, are below 1e-21
        let t1 = 2.0 * (-1e6 * 1e6_f64.powf(-2.0 / 3.0) / 2.0).exp();
        let t2 = 2.0 * (-0.09 * 1e6_f64.powf(2.0 / 3.0)).exp();
        assert!(t1 < 1e-21 && t2 < 1e-21);
        assert_eq!(thm1_confidence(1.0, 1.0, 1, 1.0), 0.0);
        assert!(1.0 - 2.0 * (-0.5_f64).exp() - 2.0 * (-0.09_f64).exp() < 0.0);
        assert!(thm1_confidence(1e12, 1e6, 1, 1e9) > 1.0 - 1e-12);
    }

    #[test]
    fn thm2_examples() {
        let b = thm2_bound(1.5, 3, 1e30);
        let four_e_cubed = (4.0 * E).powi(3);
        assert!((four_e_cubed - 1285.5).abs() < 0.1);
        let direct = (1.5 - 3.0 / (3.0 * PI)) / (18.0 * four_e_cubed);
        assert!((b - direct).abs() < 1e-9);
        assert!((b - 5.1e-5).abs() < 0.05e-5);
        assert!(thm2_bound(0.0, 4, 1e6) < 0.0);
        assert!((3.0 / (PI * 10.0) - 0.09549).abs() < 1e-5);
        // direct evaluation agrees with the log-domain form where it does not overflow
        for v in 1..=20 {
            let n: f64 = 1e5;
            let g = (4.0 * E).powi(v as i32);
            let direct = (0.7 - 3.0 / (PI * v as f64) - 18.0 * v as f64 * g * n.powf(-1.0 / 3.0))
                / (2.0 * (v * v) as f64 * g);
            assert!((thm2_bound(0.7, v, n) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
        assert!(thm2_bound(2.0, 60, 1e6).is_finite());
    }

    #[test]
    fn thm2_confidence_examples() {
        // k n^{-2/3} = 100, so the first term is 6 e^{-100/18}
        let direct = 1.0 - 6.0 * (-100.0_f64 / 18.0).exp() - 6.0 * (-900.0_f64).exp();
        let p = thm2_confidence(1e6, 1e6, 3, 1.0);
        assert!((p - direct).abs() < 1e-12);
        assert!(p > 0.97);
        assert_eq!(thm2_confidence(10.0, 100.0, 5, 1.0), 0.0);
        let mut prev = f64::INFINITY;
        for v in 1..=20 {
            let p = thm2_confidence(1e5, 1e3, v, 1.0);
            assert!(p <= prev + 1e-15);
            prev = p;
        }
    }

    #[test]
    fn hetero_examples() {
        let n = 1e6;
        assert!((hetero_thm1_bound(1.0, 2, n, n) - 0.45).abs() < 1e-12);
        let d = 0.8;
        assert!((hetero_thm1_bound(d, 1, 1e3, 1e3) - (d - 10.0 * 0.1)).abs() < 1e-12);
        assert!(hetero_thm1_bound(0.0, 1, 5.0, 7.0) < 0.0);
        for v in 1..6 {
            let same = hetero_thm2_bound(0.9, v, 1e4, 1e4);
            let doubled = thm2_core(0.9, v) - 2.0 * 9.0 * 1e4_f64.powf(-1.0 / 3.0) / v as f64;
            assert!((same - doubled).abs() < 1e-12);
            assert!(hetero_thm2_bound(0.0, v, 1e4, 1e5) < 0.0);
            let far = hetero_thm2_bound(0.9, v, 1e40, 1e40);
            assert!((far - thm2_core(0.9, v)).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_in_distance_and_sample_size() {
        for &(d1, d2) in &[(0.1, 0.2), (0.5, 0.9)] {
            assert!(thm1_bound(d1, 2, 1e4) < thm1_bound(d2, 2, 1e4));
            assert!(thm2_bound(d1, 2, 1e4) < thm2_bound(d2, 2, 1e4));
            assert!(hetero_thm1_bound(d1, 2, 1e4, 1e3) < hetero_thm1_bound(d2, 2, 1e4, 1e3));
            assert!(hetero_thm2_bound(d1, 2, 1e4, 1e3) < hetero_thm2_bound(d2, 2, 1e4, 1e3));
        }
        for &(n1, n2) in &[(10.0, 100.0), (1e3, 1e6)] {
            assert!(thm1_bound(0.5, 1, n1) < thm1_bound(0.5, 1, n2));
            assert!(thm2_bound(0.5, 3, n1) < thm2_bound(0.5, 3, n2));
            assert!(hetero_thm1_bound(0.5, 1, n1, 50.0) < hetero_thm1_bound(0.5, 1, n2, 50.0));
            assert!(hetero_thm2_bound(0.5, 1, 50.0, n1) < hetero_thm2_bound(0.5, 1, 50.0, n2));
        }
    }

    fn group(p: f64, k: usize, n: usize, seed: u64) -> Vec<WeightedGraph> {
        DecoratedGraphon::new(StepGraphon::constant(p).unwrap(), NoiseFamily::Bernoulli)
            .unwrap()
            .sample_graphs(k, n, seed)
            .unwrap()
    }

    #[test]
    fn identical_groups_are_inconclusive() {
        let g = group(0.4, 12, 20, 1);
        let r = equality_test_motif(&g, &g, &Motif::edge(), 1.0, 0.0).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let s = equality_test_spectral(&g, &g, &SpectralTest::default()).unwrap();
        assert_eq!(s.distance, 0.0);
        assert_eq!(s.verdict, Verdict::Inconclusive);
        assert_eq!(s.scan.len(), DEFAULT_V_MAX);
    }

    #[test]
    fn verdict_requires_bound_and_confidence() {
        let t1 = PointMeasure::uniform(&[0.1; 4]).unwrap();
        let t2 = PointMeasure::uniform(&[0.9; 4]).unwrap();
        // tiny n: bound negative
        let r = motif_report(&t1, &t2, &Motif::edge(), 100, 1.0, 0.0).unwrap();
        assert!(r.bound < 0.0);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!((0.0..=1.0).contains(&r.confidence));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["params"]["edges"], 1);
        assert_eq!(json["verdict"], "inconclusive");
    }

    #[test]
    fn unequal_group_sizes_use_the_hetero_bound() {
        let a = group(0.2, 10, 6, 2);
        let b = group(0.8, 10, 4, 3);
        let r = equality_test_motif(&a, &b, &Motif::edge(), 1.0, 0.5).unwrap();
        let expect = hetero_thm1_bound(r.distance, 1, 6.0, 4.0);
        assert!((r.bound - expect).abs() < 1e-15);
        let s = equality_test_spectral(&a, &b, &SpectralTest::default()).unwrap();
        assert!((s.bound - hetero_thm2_bound(s.distance, 1, 6.0, 4.0)).abs() < 1e-15);
        let mismatched = group(0.8, 11, 4, 3);
        assert!(matches!(
            equality_test_motif(&a, &mismatched, &Motif::edge(), 1.0, 0.5),
            Err(Error::Shape(_))
        ));
    }
}
