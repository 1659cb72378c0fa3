//! Homomorphism densities of motifs in weighted graphs and step graphons.
//!
//! The brute-force routines evaluate the defining average over all vertex
//! maps. Cycles, stars and paths also have closed forms through the
//! adjacency spectrum, the degree measure and matrix-vector powers; those are
//! what [`hom_density`] dispatches to.
//!
//! Star densities use the normalized degree measure: with
//! `d_i = (1/k) Σ_j w_ij` and `d = (1/k) Σ_i δ_{d_i}`, a star with `v` nodes
//! (one center, `v - 1` leaves) has density `∫ x^{v-1} dd(x)`.

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphon::{DecoratedGraphon, NoiseSampler, StepGraphon, WeightedGraph};
use crate::measure::PointMeasure;
use crate::motif::{Motif, MotifFamily};
use crate::rng;
use crate::spectral;

/// Maximum number of vertex maps a brute-force evaluation may enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Vertex order and back-edges for the depth-first map enumeration.
struct Plan {
    order: Vec<usize>,
    /// `back[d]` holds the depths of earlier vertices adjacent to `order[d]`.
    back: Vec<Vec<usize>>,
}

impl Plan {
    fn new(f: &Motif) -> Plan {
        let v = f.nodes();
        let mut adj = vec![Vec::new(); v];
        for &(a, b) in f.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        // breadth-first from each unvisited node so edges close early
        let mut order = Vec::with_capacity(v);
        let mut seen = vec![false; v];
        for root in 0..v {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                order.push(x);
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut depth = vec![0; v];
        for (d, &x) in order.iter().enumerate() {
            depth[x] = d;
        }
        let back = order
            .iter()
            .map(|&x| {
                let mut b: Vec<usize> = adj[x]
                    .iter()
                    .map(|&y| depth[y])
                    .filter(|&dy| dy < depth[x])
                    .collect();
                b.sort_unstable();
                b
            })
            .collect();
        Plan { order, back }
    }
}

struct Enumerator<'a> {
    plan: Plan,
    n: usize,
    values: &'a [f64],
    injective: bool,
    images: Vec<usize>,
    used: Vec<bool>,
}

impl Enumerator<'_> {
    fn sum(&mut self, depth: usize, prefix: f64) -> f64 {
        let n = self.n;
        let last = depth + 1 == self.plan.order.len();
        let mut total = 0.0;
        for img in 0..n {
            if self.injective && self.used[img] {
                continue;
            }
            let mut p = prefix;
            for &b in &self.plan.back[depth] {
                p *= self.values[self.images[b] * n + img];
            }
            if p == 0.0 {
                continue;
            }
            if last {
                total += p;
            } else {
                self.images[depth] = img;
                self.used[img] = true;
                total += self.sum(depth + 1, p);
                self.used[img] = false;
            }
        }
        total
    }
}

fn check_guard(count: u128) -> Result<()> {
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::Size {
            what: "vertex maps to enumerate",
            actual: count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(())
}

fn map_count(n: usize, v: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..v {
        c = c.saturating_mul(n as u128);
        if c > BRUTE_FORCE_LIMIT {
            return c;
        }
    }
    c
}

fn falling(n: usize, v: usize) -> u128 {
    (0..v).fold(1u128, |acc, i| acc.saturating_mul(n.saturating_sub(i) as u128))
}

/// Sum over maps (all or injective) of the edge-weight product on an `n × n` kernel.
fn kernel_sum(f: &Motif, n: usize, values: &[f64], injective: bool) -> f64 {
    let v = f.nodes();
    let mut e = Enumerator {
        plan: Plan::new(f),
        n,
        values,
        injective,
        images: vec![0; v],
        used: vec![false; n],
    };
    e.sum(0, 1.0)
}

/// `t(F, G)`: average over all `k^v` maps of the product of edge weights.
pub fn hom_density_graph(f: &Motif, g: &WeightedGraph) -> Result<f64> {
    let k = g.nodes();
    check_guard(map_count(k, f.nodes()))?;
    let total = kernel_sum(f, k, g.weights(), false);
    Ok(total / (k as f64).powi(f.nodes() as i32))
}

/// `t(F, W)` for a step graphon: the exact value of the integral, diagonal
/// blocks included.
pub fn hom_density_graphon(f: &Motif, w: &StepGraphon) -> Result<f64> {
    let m = w.blocks();
    check_guard(map_count(m, f.nodes()))?;
    let total = kernel_sum(f, m, w.values(), false);
    Ok(total / (m as f64).powi(f.nodes() as i32))
}

/// Average of the edge-weight product over injective maps only.
pub fn injective_hom_density(f: &Motif, g: &WeightedGraph) -> Result<f64> {
    let (v, k) = (f.nodes(), g.nodes());
    if v > k {
        return Err(Error::Domain(format!(
            "injective density needs v(F) = {v} <= k = {k}"
        )));
    }
    let count = falling(k, v);
    check_guard(count)?;
    Ok(kernel_sum(f, k, g.weights(), true) / count as f64)
}

/// `t(C_len, G)` from the normalized adjacency spectrum of a `nodes`-node graph.
///
/// With atoms at the eigenvalues of `A/k`, each of mass `1/k`, the cycle
/// density is the power sum `Σ w^len = k ∫ x^len dλ`. Merging coincident atoms
/// does not change the value.
pub fn cycle_density_via_spectrum(len: usize, spectrum: &PointMeasure, nodes: usize) -> Result<f64> {
    if len < 3 {
        return Err(Error::Domain(format!("cycle length must be at least 3, got {len}")));
    }
    Ok(nodes as f64 * spectrum.moment(len as u32))
}

/// `t(S_v, G) = (1/k) Σ_i d_i^{v-1}` with `d_i = (1/k) Σ_j w_ij`.
pub fn star_density_via_degrees(v: usize, g: &WeightedGraph) -> Result<f64> {
    if v < 2 {
        return Err(Error::Domain(format!("star needs at least 2 nodes, got {v}")));
    }
    Ok(star_density_via_degree_measure(v, &spectral::degree_measure(g)))
}

/// Star density from a normalized degree measure: `∫ x^{v-1} dd`.
pub fn star_density_via_degree_measure(v: usize, degrees: &PointMeasure) -> f64 {
    degrees.moment((v - 1) as u32)
}

/// `t(P_v, G) = k^{-v} 1ᵀ A^{v-1} 1`.
pub fn path_density(v: usize, g: &WeightedGraph) -> Result<f64> {
    if v < 2 {
        return Err(Error::Domain(format!("path needs at least 2 nodes, got {v}")));
    }
    let k = g.nodes();
    let scale = 1.0 / k as f64;
    let mut x = vec![1.0; k];
    let mut y = vec![0.0; k];
    for _ in 1..v {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = g.row(i).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() * scale;
        }
        std::mem::swap(&mut x, &mut y);
    }
    Ok(x.iter().sum::<f64>() * scale)
}

/// `t(F, G)` by the cheapest exact route: closed forms for edges, cycles,
/// stars and paths, brute force otherwise.
pub fn hom_density(f: &Motif, g: &WeightedGraph) -> Result<f64> {
    let d = match f.family() {
        Some(MotifFamily::Edge) => path_density(2, g)?,
        Some(MotifFamily::Path(v)) => path_density(v, g)?,
        Some(MotifFamily::Star(v)) => star_density_via_degrees(v, g)?,
        Some(MotifFamily::Cycle(len)) => {
            cycle_density_via_spectrum(len, &spectral::adjacency_spectrum(g), g.nodes())?
        }
        None => hom_density_graph(f, g)?,
    };
    // spectral round-off can leave a cycle density a hair outside [0, 1]
    Ok(d.clamp(0.0, 1.0))
}

/// `t̄(F) = (1/n) Σ δ_{t(F, G_i)}`.
pub fn empirical_density_measure(f: &Motif, graphs: &[WeightedGraph]) -> Result<PointMeasure> {
    if graphs.is_empty() {
        return Err(Error::Domain("empirical measure needs at least one graph".into()));
    }
    let values = graphs
        .iter()
        .map(|g| hom_density(f, g))
        .collect::<Result<Vec<_>>>()?;
    PointMeasure::uniform(&values)
}

/// Empirical density measure of `n` graphs sampled from `d`, generated one
/// at a time so that only the densities are kept in memory.
///
/// Graph `i` is drawn from sub-stream `(seed, i)`, matching
/// [`DecoratedGraphon::sample_graphs`].
pub fn sampled_density_measure(
    d: &DecoratedGraphon,
    f: &Motif,
    k: usize,
    n: usize,
    seed: u64,
) -> Result<PointMeasure> {
    if n == 0 || k == 0 {
        return Err(Error::Domain("need n >= 1 graphs of k >= 1 nodes".into()));
    }
    let samplers = d.block_samplers();
    let values = if f.family() == Some(MotifFamily::Edge) {
        (0..n)
            .into_par_iter()
            .map(|i| streamed_edge_density(d, &samplers, k, &mut rng::substream(seed, i as u64)))
            .collect::<Vec<_>>()
    } else {
        (0..n)
            .into_par_iter()
            .map_init(
                || WeightedGraph::empty(k),
                |g, i| {
                    d.sample_with(&samplers, k, &mut rng::substream(seed, i as u64), g);
                    hom_density(f, g)
                },
            )
            .collect::<Result<Vec<_>>>()?
    };
    PointMeasure::uniform(&values)
}

/// `t(K2, G)` for the graph `sample_with` would draw from `rng`, consuming
/// the same draws in the same order without storing the weights.
fn streamed_edge_density(
    d: &DecoratedGraphon,
    samplers: &[NoiseSampler],
    k: usize,
    rng: &mut rng::Stream,
) -> f64 {
    let m = d.expectation().blocks();
    let blocks = d.draw_blocks(k, rng);
    if m == 1 {
        let pairs = k * (k - 1) / 2;
        let total = match samplers[0] {
            NoiseSampler::Bernoulli(threshold) => {
                (0..pairs).filter(|_| rng.next_u64() < threshold).count() as f64
            }
            s => (0..pairs).map(|_| s.sample(rng)).sum(),
        };
        return (2.0 * total / (k * k) as f64).clamp(0.0, 1.0);
    }
    let mut total = 0.0;
    for i in 0..k {
        let row = &samplers[blocks[i] * m..(blocks[i] + 1) * m];
        let mut partial = 0.0;
        for &b in &blocks[i + 1..] {
            partial += row[b].sample(rng);
        }
        total += partial;
    }
    (2.0 * total / (k * k) as f64).clamp(0.0, 1.0)
}
