//! Optimal transport on the line and between measure ensembles.

use serde::Serialize;

use crate::assignment::assignment_solve;
use crate::error::{Error, Result};
use crate::measure::{MeasureEnsemble, PointMeasure};

const MASS_TOL: f64 = 1e-9;

/// Largest replicated ensemble size accepted by [`nested_wasserstein`].
pub const MAX_REPLICATED_ENSEMBLE: usize = 10_000;

/// A transport plan between two atomic measures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingPlan {
    /// `(source atom, target atom, mass)` triples.
    pub pairs: Vec<(usize, usize, f64)>,
    pub objective: f64,
}

/// Atoms sorted by value, with their original indices.
#[derive(Debug, Clone)]
pub(crate) struct Sorted {
    values: Vec<f64>,
    masses: Vec<f64>,
    index: Vec<usize>,
    uniform: bool,
}

impl Sorted {
    pub(crate) fn new(m: &PointMeasure) -> Sorted {
        let atoms = m.atoms();
        let mut index: Vec<usize> = (0..atoms.len()).collect();
        index.sort_by(|&a, &b| atoms[a].value.total_cmp(&atoms[b].value));
        let first = atoms[0].mass;
        Sorted {
            values: index.iter().map(|&i| atoms[i].value).collect(),
            masses: index.iter().map(|&i| atoms[i].mass).collect(),
            uniform: atoms.iter().all(|a| a.mass == first),
            index,
        }
    }

    fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Monotone coupling of two sorted measures; `visit` sees every transported
/// piece.
fn monotone<F: FnMut(usize, usize, f64)>(a: &Sorted, b: &Sorted, mut visit: F) -> f64 {
    if a.uniform && b.uniform && a.values.len() == b.values.len() {
        let n = a.values.len();
        let mass = 1.0 / n as f64;
        let mut cost = 0.0;
        for i in 0..n {
            visit(i, i, mass);
            cost += (a.values[i] - b.values[i]).abs();
        }
        return cost * mass;
    }
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a.masses[0], b.masses[0]);
    let mut cost = 0.0;
    while i < a.values.len() && j < b.values.len() {
        let t = ra.min(rb);
        if t > 0.0 {
            visit(i, j, t);
            cost += t * (a.values[i] - b.values[j]).abs();
        }
        ra -= t;
        rb -= t;
        if ra <= 1e-15 {
            i += 1;
            if i < a.values.len() {
                ra = a.masses[i];
            }
        }
        if rb <= 1e-15 {
            j += 1;
            if j < b.values.len() {
                rb = b.masses[j];
            }
        }
    }
    cost
}

fn check_mass(a: &Sorted, b: &Sorted) -> Result<()> {
    let (ta, tb) = (a.total(), b.total());
    if (ta - tb).abs() > MASS_TOL {
        return Err(Error::MassMismatch {
            left: ta,
            right: tb,
        });
    }
    Ok(())
}

pub(crate) fn wasserstein_sorted(a: &Sorted, b: &Sorted) -> f64 {
    monotone(a, b, |_, _, _| {})
}

/// `W¹(μ, ν)` with ground cost `|x - y|`, through the quantile coupling.
pub fn wasserstein_1d(mu: &PointMeasure, nu: &PointMeasure) -> Result<f64> {
    let (a, b) = (Sorted::new(mu), Sorted::new(nu));
    check_mass(&a, &b)?;
    Ok(wasserstein_sorted(&a, &b))
}

/// The optimal (monotone) plan realizing [`wasserstein_1d`].
pub fn wasserstein_1d_plan(mu: &PointMeasure, nu: &PointMeasure) -> Result<CouplingPlan> {
    let (a, b) = (Sorted::new(mu), Sorted::new(nu));
    check_mass(&a, &b)?;
    let mut pairs = Vec::new();
    let objective = monotone(&a, &b, |i, j, t| pairs.push((a.index[i], b.index[j], t)));
    Ok(CouplingPlan { pairs, objective })
}

/// `∫_a^b |c - x| dx`.
fn abs_gap_integral(a: f64, b: f64, c: f64) -> f64 {
    if c <= a {
        ((b - c).powi(2) - (a - c).powi(2)) / 2.0
    } else if c >= b {
        ((c - a).powi(2) - (c - b).powi(2)) / 2.0
    } else {
        ((c - a).powi(2) + (b - c).powi(2)) / 2.0
    }
}

/// Exact `W¹(μ_n, Unif[0, 1]) = ∫₀¹ |F_n(x) - x| dx` for a measure on `[0, 1]`.
pub fn wasserstein_1d_vs_uniform(mu: &PointMeasure) -> Result<f64> {
    if let Some(a) = mu.atoms().iter().find(|a| !(0.0..=1.0).contains(&a.value)) {
        return Err(Error::Domain(format!(
            "atom {} outside [0, 1] in comparison with the uniform measure",
            a.value
        )));
    }
    let s = Sorted::new(mu);
    let mut total = 0.0;
    let mut left = 0.0;
    let mut cdf = 0.0;
    for (x, m) in s.values.iter().zip(&s.masses) {
        total += abs_gap_integral(left, *x, cdf);
        cdf += m;
        left = *x;
    }
    total += abs_gap_integral(left, 1.0, cdf.min(1.0));
    Ok(total)
}

/// Result of a nested transport problem.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedTransport {
    pub distance: f64,
    /// Size of the (possibly replicated) assignment problem.
    pub replicated_size: usize,
    /// `matching[a]` is the replicated target index assigned to replicated source `a`.
    pub matching: Vec<usize>,
}

/// Cost matrix `C[i][j] = W¹(Λ_i, Λ'_j)`.
pub fn member_costs(a: &MeasureEnsemble, b: &MeasureEnsemble) -> Result<Vec<f64>> {
    let sa: Vec<Sorted> = a.members().iter().map(Sorted::new).collect();
    let sb: Vec<Sorted> = b.members().iter().map(Sorted::new).collect();
    let mut cost = Vec::with_capacity(sa.len() * sb.len());
    for x in &sa {
        for y in &sb {
            check_mass(x, y)?;
            cost.push(wasserstein_sorted(x, y));
        }
    }
    Ok(cost)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Wasserstein distance between ensembles with ground cost [`wasserstein_1d`].
///
/// Both ensembles are uniform over their members, so an optimal coupling of
/// two ensembles of equal size is a permutation. Unequal sizes `n₁, n₂` are
/// replicated to `lcm(n₁, n₂)` members each, where the same holds.
pub fn nested_wasserstein_detailed(
    a: &MeasureEnsemble,
    b: &MeasureEnsemble,
) -> Result<NestedTransport> {
    let (n1, n2) = (a.len(), b.len());
    let size = n1 / gcd(n1, n2) * n2;
    if size > MAX_REPLICATED_ENSEMBLE {
        return Err(Error::Size {
            what: "replicated ensemble size",
            actual: size as u128,
            limit: MAX_REPLICATED_ENSEMBLE as u128,
        });
    }
    let base = member_costs(a, b)?;
    let cost = if n1 == n2 {
        base
    } else {
        let (ra, rb) = (size / n1, size / n2);
        let mut c = Vec::with_capacity(size * size);
        for s in 0..size {
            let row = &base[(s / ra) * n2..(s / ra + 1) * n2];
            c.extend((0..size).map(|t| row[t / rb]));
        }
        c
    };
    let sol = assignment_solve(size, &cost)?;
    Ok(NestedTransport {
        distance: sol.objective / size as f64,
        replicated_size: size,
        matching: sol.rows_to_cols,
    })
}

pub fn nested_wasserstein(a: &MeasureEnsemble, b: &MeasureEnsemble) -> Result<f64> {
    Ok(nested_wasserstein_detailed(a, b)?.distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use crate::rng;
    use rand::Rng;

    fn pm(pairs: &[(f64, f64)]) -> PointMeasure {
        PointMeasure::new(pairs.iter().map(|&(value, mass)| Atom { value, mass }).collect()).unwrap()
    }

    fn random_measure(rng: &mut crate::rng::Stream, max_atoms: usize) -> PointMeasure {
        let n = rng.random_range(1..=max_atoms);
        pm(&(0..n)
            .map(|_| (rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() + 0.05))
            .collect::<Vec<_>>())
    }

    #[test]
    fn examples() {
        let d0 = PointMeasure::dirac(0.0).unwrap();
        let d1 = PointMeasure::dirac(1.0).unwrap();
        assert_eq!(wasserstein_1d(&d0, &d1).unwrap(), 1.0);
        let two = pm(&[(0.0, 0.5), (1.0, 0.5)]);
        let half = PointMeasure::dirac(0.5).unwrap();
        assert!((wasserstein_1d(&two, &half).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(wasserstein_1d(&two, &two).unwrap(), 0.0);
    }

    #[test]
    fn plan_is_feasible_and_consistent() {
        let mut rng = rng::stream(51);
        for _ in 0..50 {
            let a = random_measure(&mut rng, 8);
            let b = random_measure(&mut rng, 8);
            let plan = wasserstein_1d_plan(&a, &b).unwrap();
            let mut ma = vec![0.0; a.len()];
            let mut mb = vec![0.0; b.len()];
            let mut obj = 0.0;
            for &(i, j, t) in &plan.pairs {
                ma[i] += t;
                mb[j] += t;
                obj += t * (a.atoms()[i].value - b.atoms()[j].value).abs();
            }
            for (x, at) in ma.iter().zip(a.atoms()) {
                assert!((x - at.mass).abs() < 1e-10);
            }
            for (x, at) in mb.iter().zip(b.atoms()) {
                assert!((x - at.mass).abs() < 1e-10);
            }
            assert!((obj - plan.objective).abs() < 1e-10);
            assert!((plan.objective - wasserstein_1d(&a, &b).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn metric_properties() {
        let mut rng = rng::stream(52);
        for _ in 0..100 {
            let a = random_measure(&mut rng, 6);
            let b = random_measure(&mut rng, 6);
            let c = random_measure(&mut rng, 6);
            let ab = wasserstein_1d(&a, &b).unwrap();
            assert!((ab - wasserstein_1d(&b, &a).unwrap()).abs() < 1e-12);
            assert!(wasserstein_1d(&a, &c).unwrap() <= ab + wasserstein_1d(&b, &c).unwrap() + 1e-12);
            assert!(ab <= 2.0);
            assert!(wasserstein_1d(&a, &a).unwrap() < 1e-15);
        }
        let x = PointMeasure::uniform(&[0.1, 0.4, 0.4]).unwrap();
        let y = PointMeasure::uniform(&[0.4, 0.1, 0.4]).unwrap();
        assert_eq!(wasserstein_1d(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn vs_uniform_examples() {
        let half = PointMeasure::dirac(0.5).unwrap();
        assert!((wasserstein_1d_vs_uniform(&half).unwrap() - 0.25).abs() < 1e-15);
        let zero = PointMeasure::dirac(0.0).unwrap();
        assert!((wasserstein_1d_vs_uniform(&zero).unwrap() - 0.5).abs() < 1e-15);
        for n in [1usize, 2, 4] {
            let q: Vec<f64> = (1..=n).map(|i| (2 * i - 1) as f64 / (2 * n) as f64).collect();
            let m = PointMeasure::uniform(&q).unwrap();
            assert!((wasserstein_1d_vs_uniform(&m).unwrap() - 0.25 / n as f64).abs() < 1e-15);
        }
        assert!(wasserstein_1d_vs_uniform(&PointMeasure::dirac(-0.2).unwrap()).is_err());
    }

    #[test]
    fn vs_uniform_matches_fine_quadrature() {
        let mut rng = rng::stream(53);
        for _ in 0..5 {
            let vals: Vec<f64> = (0..7).map(|_| rng.random()).collect();
            let m = PointMeasure::uniform(&vals).unwrap();
            let steps = 200_000;
            let h = 1.0 / steps as f64;
            let quad: f64 = (0..steps)
                .map(|s| {
                    let x = (s as f64 + 0.5) * h;
                    let f = vals.iter().filter(|&&v| v <= x).count() as f64 / 7.0;
                    (f - x).abs() * h
                })
                .sum();
            assert!((quad - wasserstein_1d_vs_uniform(&m).unwrap()).abs() < 1e-4);
        }
    }

    fn ens(values: &[f64]) -> MeasureEnsemble {
        MeasureEnsemble::new(values.iter().map(|&v| PointMeasure::dirac(v).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn nested_examples() {
        let a = ens(&[0.0, 1.0]);
        assert_eq!(nested_wasserstein(&a, &a).unwrap(), 0.0);
        assert_eq!(nested_wasserstein(&a, &ens(&[1.0, 0.0])).unwrap(), 0.0);
        let d = nested_wasserstein(&ens(&[0.0, 0.0]), &ens(&[1.0, 0.5])).unwrap();
        assert!((d - 0.75).abs() < 1e-15);
    }

    #[test]
    fn nested_unequal_sizes_and_replication() {
        let a = ens(&[0.0, 0.2, 0.4]);
        let b = ens(&[0.1, 0.3]);
        let d = nested_wasserstein_detailed(&a, &b).unwrap();
        assert_eq!(d.replicated_size, 6);
        // same as 1D transport between the uniform atom sets
        let pa = PointMeasure::uniform(&[0.0, 0.2, 0.4]).unwrap();
        let pb = PointMeasure::uniform(&[0.1, 0.3]).unwrap();
        assert!((d.distance - wasserstein_1d(&pa, &pb).unwrap()).abs() < 1e-12);

        let mut rng = rng::stream(54);
        let random_ens = |rng: &mut crate::rng::Stream, n: usize| {
            MeasureEnsemble::new((0..n).map(|_| random_measure(rng, 4)).collect()).unwrap()
        };
        let x = random_ens(&mut rng, 4);
        let y = random_ens(&mut rng, 4);
        let base = nested_wasserstein(&x, &y).unwrap();
        let dup = |e: &MeasureEnsemble| {
            MeasureEnsemble::new(e.members().iter().chain(e.members()).cloned().collect()).unwrap()
        };
        assert!((nested_wasserstein(&dup(&x), &dup(&y)).unwrap() - base).abs() < 1e-12);
        let mut rev = x.members().to_vec();
        rev.reverse();
        let xr = MeasureEnsemble::new(rev).unwrap();
        assert!((nested_wasserstein(&xr, &y).unwrap() - base).abs() < 1e-12);

        let big1 = ens(&vec![0.0; 101]);
        let big2 = ens(&vec![0.0; 103]);
        assert!(matches!(
            nested_wasserstein(&big1, &big2),
            Err(Error::Size { .. })
        ));
    }
}
