//! Cut norm and a permutation-based upper bound on the cut distance for
//! step functions with few blocks.
//!
//! For a block-constant kernel the objective `|∫_{S×T} U|` is bilinear in the
//! per-block inclusion fractions of `S` and `T`, so the supremum over
//! measurable sets is attained by unions of whole blocks. Fixing the row set
//! `A`, the best column set takes every column whose partial sum has the
//! right sign, which leaves `2^m` row subsets to enumerate.

use crate::error::{Error, Result};
use crate::graphon::{check_permutation, StepGraphon};

/// Largest block count accepted by [`cut_norm`].
pub const MAX_CUT_BLOCKS: usize = 16;
/// Largest block count accepted by [`cut_distance_upper`].
pub const MAX_PERMUTATION_BLOCKS: usize = 8;

/// Symmetric `m × m` block-constant kernel with entries in `[-1, 1]`,
/// typically the difference of two step graphons.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedStep {
    m: usize,
    values: Vec<f64>,
}

impl SignedStep {
    pub fn from_flat(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || values.len() != m * m {
            return Err(Error::Shape(format!(
                "expected {} values for m = {m}, got {}",
                m * m,
                values.len()
            )));
        }
        for i in 0..m {
            for j in 0..m {
                let v = values[i * m + j];
                if !(-1.0..=1.0).contains(&v) {
                    return Err(Error::Domain(format!(
                        "signed step value {v} at ({i}, {j}) outside [-1, 1]"
                    )));
                }
                if (v - values[j * m + i]).abs() > 1e-12 {
                    return Err(Error::Invariant {
                        context: "signed step function".into(),
                        detail: format!("values[{i}][{j}] != values[{j}][{i}]"),
                    });
                }
            }
        }
        Ok(SignedStep { m, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_flat(rows.len(), rows.concat())
    }

    /// `W - W'` on a common block structure.
    pub fn difference(w: &StepGraphon, w2: &StepGraphon) -> Result<Self> {
        if w.blocks() != w2.blocks() {
            return Err(Error::Shape(format!(
                "block counts differ ({} vs {}); refine both to a common block count first",
                w.blocks(),
                w2.blocks()
            )));
        }
        let values = w
            .values()
            .iter()
            .zip(w2.values())
            .map(|(a, b)| a - b)
            .collect();
        Ok(SignedStep {
            m: w.blocks(),
            values,
        })
    }

    pub fn blocks(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Exact cut norm of a block-constant kernel: the maximum over block subsets
/// `A, B` of `|Σ_{i∈A, j∈B} values[i][j]| / m²`.
pub fn cut_norm(s: &SignedStep) -> Result<f64> {
    if s.m > MAX_CUT_BLOCKS {
        return Err(Error::Size {
            what: "cut-norm block count",
            actual: s.m as u128,
            limit: MAX_CUT_BLOCKS as u128,
        });
    }
    Ok(cut_norm_unchecked(s.m, &s.values))
}

fn cut_norm_unchecked(m: usize, values: &[f64]) -> f64 {
    // Gray-code walk over row subsets, maintaining column sums.
    let mut col = vec![0.0; m];
    let mut best = 0.0_f64;
    for step in 1u64..(1u64 << m) {
        let bit = step.trailing_zeros() as usize;
        let gray = step ^ (step >> 1);
        let row = &values[bit * m..(bit + 1) * m];
        if gray & (1 << bit) != 0 {
            col.iter_mut().zip(row).for_each(|(c, v)| *c += v);
        } else {
            col.iter_mut().zip(row).for_each(|(c, v)| *c -= v);
        }
        let (mut pos, mut neg) = (0.0, 0.0);
        for &c in &col {
            if c > 0.0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        best = best.max(pos).max(neg);
    }
    best / (m * m) as f64
}

/// Minimum over block permutations `π` of `‖W - W'∘π‖_□`.
///
/// Block permutations are a subset of the measure-preserving relabelings, so
/// this is an upper bound on the cut distance; it is exact for `m = 1`.
/// Returns the distance and the minimizing permutation.
pub fn cut_distance_upper(w: &StepGraphon, w2: &StepGraphon) -> Result<(f64, Vec<usize>)> {
    if w.blocks() != w2.blocks() {
        return Err(Error::Shape(format!(
            "block counts differ ({} vs {}); refine both to a common block count first",
            w.blocks(),
            w2.blocks()
        )));
    }
    let m = w.blocks();
    if m > MAX_PERMUTATION_BLOCKS {
        return Err(Error::Size {
            what: "cut-distance block count",
            actual: m as u128,
            limit: MAX_PERMUTATION_BLOCKS as u128,
        });
    }
    let mut perm: Vec<usize> = (0..m).collect();
    let mut diff = vec![0.0; m * m];
    let mut best = f64::INFINITY;
    let mut best_perm = perm.clone();
    loop {
        for i in 0..m {
            for j in 0..m {
                diff[i * m + j] = w.value(i, j) - w2.value(perm[i], perm[j]);
            }
        }
        let d = cut_norm_unchecked(m, &diff);
        if d < best {
            best = d;
            best_perm.clone_from(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok((best, best_perm))
}

/// Cut norm of `W - W'∘π` for one fixed block permutation.
pub fn cut_norm_under(w: &StepGraphon, w2: &StepGraphon, perm: &[usize]) -> Result<f64> {
    let permuted = w2.permuted(perm)?;
    check_permutation(perm, w.blocks())?;
    cut_norm(&SignedStep::difference(w, &permuted)?)
}

/// Lexicographic successor; false once the last permutation is reached.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    /// Double enumeration over all subset pairs.
    fn cut_norm_brute(m: usize, v: &[f64]) -> f64 {
        let mut best = 0.0_f64;
        for a in 0u32..(1 << m) {
            for b in 0u32..(1 << m) {
                let mut s = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        if a & (1 << i) != 0 && b & (1 << j) != 0 {
                            s += v[i * m + j];
                        }
                    }
                }
                best = best.max(s.abs());
            }
        }
        best / (m * m) as f64
    }

    fn random_signed(m: usize, rng: &mut crate::rng::Stream) -> SignedStep {
        let mut v = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let x = rng.random::<f64>() * 2.0 - 1.0;
                v[i * m + j] = x;
                v[j * m + i] = x;
            }
        }
        SignedStep::from_flat(m, v).unwrap()
    }

    fn random_graphon(m: usize, rng: &mut crate::rng::Stream) -> StepGraphon {
        let mut v = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let x = rng.random::<f64>();
                v[i * m + j] = x;
                v[j * m + i] = x;
            }
        }
        StepGraphon::from_flat(m, v).unwrap()
    }

    #[test]
    fn cut_norm_examples() {
        let c = SignedStep::from_flat(1, vec![0.6]).unwrap();
        assert!((cut_norm(&c).unwrap() - 0.6).abs() < 1e-15);
        let s = SignedStep::from_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!((cut_norm(&s).unwrap() - 0.125).abs() < 1e-15);
        assert!((cut_norm_brute(2, s.values()) - 0.125).abs() < 1e-15);
        let z = SignedStep::from_flat(3, vec![0.0; 9]).unwrap();
        assert_eq!(cut_norm(&z).unwrap(), 0.0);
        let big = SignedStep::from_flat(17, vec![0.0; 289]).unwrap();
        assert!(matches!(cut_norm(&big), Err(Error::Size { .. })));
    }

    #[test]
    fn cut_norm_matches_double_enumeration() {
        let mut rng = rng::stream(1);
        for m in 1..=6 {
            for _ in 0..10 {
                let s = random_signed(m, &mut rng);
                let fast = cut_norm(&s).unwrap();
                let brute = cut_norm_brute(m, s.values());
                assert!((fast - brute).abs() < 1e-12, "m={m}: {fast} vs {brute}");
            }
        }
    }

    #[test]
    fn cut_norm_bounded_and_permutation_invariant() {
        let mut rng = rng::stream(2);
        for m in 2..=7 {
            let s = random_signed(m, &mut rng);
            let n = cut_norm(&s).unwrap();
            let max = s.values().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
            assert!(n <= max + 1e-15);
            let mut perm: Vec<usize> = (0..m).rev().collect();
            perm.swap(0, m / 2);
            let mut pv = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    pv[i * m + j] = s.values()[perm[i] * m + perm[j]];
                }
            }
            let p = SignedStep::from_flat(m, pv).unwrap();
            assert!((cut_norm(&p).unwrap() - n).abs() < 1e-12);
        }
    }

    #[test]
    fn refine_preserves_cut_norm() {
        let mut rng = rng::stream(3);
        for case in 0..20 {
            let m = 1 + case % 4;
            let w = random_graphon(m, &mut rng);
            let w2 = random_graphon(m, &mut rng);
            let base = cut_norm(&SignedStep::difference(&w, &w2).unwrap()).unwrap();
            let factor = 1 + case % 3;
            let fine = cut_norm(
                &SignedStep::difference(&w.refine(factor).unwrap(), &w2.refine(factor).unwrap())
                    .unwrap(),
            )
            .unwrap();
            assert!((base - fine).abs() < 1e-12, "{base} vs {fine}");
        }
    }

    #[test]
    fn cut_distance_examples() {
        let p = StepGraphon::constant(0.2).unwrap();
        let q = StepGraphon::constant(0.8).unwrap();
        assert!((cut_distance_upper(&p, &q).unwrap().0 - 0.6).abs() < 1e-15);

        let w = StepGraphon::from_rows(&[
            vec![0.1, 0.5, 0.7],
            vec![0.5, 0.3, 0.2],
            vec![0.7, 0.2, 0.9],
        ])
        .unwrap();
        let shuffled = w.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(cut_distance_upper(&w, &shuffled).unwrap().0, 0.0);

        let a = StepGraphon::from_rows(&[vec![0.9, 0.1], vec![0.1, 0.9]]).unwrap();
        let b = StepGraphon::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.1]]).unwrap();
        let (d, _) = cut_distance_upper(&a, &b).unwrap();
        // relabeling a 2-block table by the swap leaves it unchanged, so the
        // tables differ by ±0.8 under both permutations: best box is one block
        assert!((d - 0.2).abs() < 1e-15);
        assert!((cut_norm_under(&a, &b, &[1, 0]).unwrap() - d).abs() < 1e-15);
        assert!((cut_norm_under(&a, &b, &[0, 1]).unwrap() - d).abs() < 1e-15);

        assert!(matches!(
            cut_distance_upper(&p, &w),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn cut_distance_symmetric_and_triangle() {
        let mut rng = rng::stream(4);
        for m in 1..=4 {
            for _ in 0..10 {
                let a = random_graphon(m, &mut rng);
                let b = random_graphon(m, &mut rng);
                let c = random_graphon(m, &mut rng);
                let ab = cut_distance_upper(&a, &b).unwrap().0;
                let ba = cut_distance_upper(&b, &a).unwrap().0;
                let bc = cut_distance_upper(&b, &c).unwrap().0;
                let ac = cut_distance_upper(&a, &c).unwrap().0;
                assert!((ab - ba).abs() < 1e-12);
                assert!(ac <= ab + bc + 1e-12);
            }
        }
    }

    #[test]
    fn permutation_enumeration_counts() {
        let mut p: Vec<usize> = (0..5).collect();
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 120);
    }
}
