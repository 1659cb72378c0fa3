//! Exact minimum-cost perfect assignment.
//!
//! Shortest augmenting paths with dual potentials (the O(n³) Hungarian
//! method). Rows are inserted one at a time; each insertion runs a
//! Dijkstra-like search over reduced costs and augments along the cheapest
//! alternating path.

use crate::error::{Error, Result};

/// Optimal assignment of an `n × n` cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// `rows_to_cols[i]` is the column matched to row `i`.
    pub rows_to_cols: Vec<usize>,
    pub objective: f64,
}

/// Solves the assignment problem for a square row-major cost matrix.
pub fn assignment_solve(n: usize, cost: &[f64]) -> Result<Assignment> {
    if cost.len() != n * n {
        return Err(Error::Shape(format!(
            "cost matrix has {} entries, expected {}",
            cost.len(),
            n * n
        )));
    }
    if let Some(c) = cost.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::Domain(format!("cost {c} is not finite and nonnegative")));
    }
    if n == 0 {
        return Ok(Assignment {
            rows_to_cols: Vec::new(),
            objective: 0.0,
        });
    }

    // 1-based arrays; column 0 is a virtual source.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut col_owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];

    for row in 1..=n {
        col_owner[0] = row;
        let mut j0 = 0;
        minv.iter_mut().for_each(|x| *x = f64::INFINITY);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let base = &cost[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = base[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut rows_to_cols = vec![0; n];
    for j in 1..=n {
        rows_to_cols[col_owner[j] - 1] = j - 1;
    }
    let objective = rows_to_cols
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i * n + j])
        .sum();
    Ok(Assignment {
        rows_to_cols,
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::next_permutation;
    use crate::rng;
    use rand::Rng;

    fn brute(n: usize, cost: &[f64]) -> f64 {
        let mut p: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        loop {
            best = best.min((0..n).map(|i| cost[i * n + p[i]]).sum());
            if !next_permutation(&mut p) {
                return best;
            }
        }
    }

    #[test]
    fn small_examples() {
        let a = assignment_solve(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(a.rows_to_cols, vec![0, 1]);
        assert_eq!(a.objective, 0.0);
        let b = assignment_solve(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(b.rows_to_cols, vec![1, 0]);
        assert_eq!(b.objective, 0.0);
        assert_eq!(assignment_solve(0, &[]).unwrap().objective, 0.0);
        assert!(assignment_solve(2, &[1.0, -1.0, 0.0, 0.0]).is_err());
        assert!(assignment_solve(2, &[1.0]).is_err());
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut rng = rng::stream(41);
        for _ in 0..50 {
            let cost: Vec<f64> = (0..36).map(|_| rng.random::<f64>() * 10.0).collect();
            let a = assignment_solve(6, &cost).unwrap();
            assert!((a.objective - brute(6, &cost)).abs() < 1e-9);
            let mut seen = [false; 6];
            a.rows_to_cols.iter().for_each(|&j| seen[j] = true);
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn handles_ties_and_integers() {
        let mut rng = rng::stream(42);
        for n in 1..=7 {
            for _ in 0..10 {
                let cost: Vec<f64> = (0..n * n).map(|_| rng.random_range(0..3) as f64).collect();
                let a = assignment_solve(n, &cost).unwrap();
                assert!((a.objective - brute(n, &cost)).abs() < 1e-12);
            }
        }
    }
}
