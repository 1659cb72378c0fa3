//! Step-function graphons, decorated graphons and the weighted graphs they generate.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

const SYMMETRY_TOL: f64 = 1e-12;

fn check_unit(context: &str, row: usize, col: usize, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Range {
            context: context.to_string(),
            row,
            col,
            value,
        });
    }
    Ok(())
}

/// Symmetric block-constant function on the unit square with `m` blocks of
/// equal Lebesgue mass `1/m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphonFile", into = "GraphonFile")]
pub struct StepGraphon {
    m: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct GraphonFile {
    m: usize,
    values: Vec<Vec<f64>>,
}

impl TryFrom<GraphonFile> for StepGraphon {
    type Error = Error;

    fn try_from(file: GraphonFile) -> Result<Self> {
        if file.values.len() != file.m {
            return Err(Error::Shape(format!(
                "graphon declares m = {} but has {} rows",
                file.m,
                file.values.len()
            )));
        }
        StepGraphon::from_rows(&file.values)
    }
}

impl From<StepGraphon> for GraphonFile {
    fn from(w: StepGraphon) -> Self {
        GraphonFile {
            m: w.m,
            values: w.rows(),
        }
    }
}

impl StepGraphon {
    /// Builds a graphon from a row-major `m × m` value table.
    pub fn from_flat(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("graphon needs at least one block".into()));
        }
        if values.len() != m * m {
            return Err(Error::Shape(format!(
                "expected {} values for m = {m}, got {}",
                m * m,
                values.len()
            )));
        }
        for i in 0..m {
            for j in 0..m {
                let v = values[i * m + j];
                check_unit("graphon", i, j, v)?;
                if (v - values[j * m + i]).abs() > SYMMETRY_TOL {
                    return Err(Error::Invariant {
                        context: "graphon".into(),
                        detail: format!("values[{i}][{j}] != values[{j}][{i}]"),
                    });
                }
            }
        }
        let mut values = values;
        for i in 0..m {
            for j in 0..i {
                values[i * m + j] = values[j * m + i];
            }
        }
        Ok(StepGraphon { m, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Shape(format!(
                "graphon row {i} has {} entries, expected {m}",
                r.len()
            )));
        }
        Self::from_flat(m, rows.concat())
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::from_flat(1, vec![p])
    }

    /// Number of blocks.
    pub fn blocks(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.m).map(<[f64]>::to_vec).collect()
    }

    /// Block containing the point `x` of the unit interval.
    #[inline]
    pub fn block_of(&self, x: f64) -> usize {
        let x = x.min(1.0_f64.next_down());
        ((x * self.m as f64) as usize).min(self.m - 1)
    }

    /// Value of the graphon at `(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
            return Err(Error::Domain(format!(
                "graphon evaluated at ({x}, {y}) outside the unit square"
            )));
        }
        Ok(self.value(self.block_of(x), self.block_of(y)))
    }

    /// Common refinement: each block split into `factor` equal sub-blocks.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Domain("refinement factor must be positive".into()));
        }
        let n = self.m * factor;
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(self.value(i / factor, j / factor));
            }
        }
        Ok(StepGraphon { m: n, values })
    }

    /// Graphon with blocks relabeled: block `i` of the result is block
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.m)?;
        let m = self.m;
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                values[i * m + j] = self.value(perm[i], perm[j]);
            }
        }
        Ok(StepGraphon { m, values })
    }
}

pub(crate) fn check_permutation(perm: &[usize], m: usize) -> Result<()> {
    if perm.len() != m {
        return Err(Error::Shape(format!(
            "permutation of length {} for {m} blocks",
            perm.len()
        )));
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || seen[p] {
            return Err(Error::Domain(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Family of centered noise distributions: for each mean `w` in [0, 1] a
/// distribution on [0, 1] whose expectation is `w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseFamily {
    /// Point mass at the mean.
    None,
    /// `{0, 1}` with `P(1) = w`; the classical graphon sample.
    Bernoulli,
    /// `Beta(κw, κ(1-w))`, a point mass when `w ∈ {0, 1}`.
    Beta { kappa: f64 },
    /// Uniform on `[w - h', w + h']` with `h' = min(h, w, 1 - w)`.
    BoundedUniform { h: f64 },
}

impl NoiseFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseFamily::Beta { kappa } if !(kappa > 0.0 && kappa.is_finite()) => Err(
                Error::Domain(format!("beta concentration must be positive, got {kappa}")),
            ),
            NoiseFamily::BoundedUniform { h } if !(0.0..=0.5).contains(&h) => Err(Error::Domain(
                format!("bounded-uniform half-width must lie in [0, 0.5], got {h}"),
            )),
            _ => Ok(()),
        }
    }

    /// Draws one weight with expectation `w`.
    pub fn sample<R: Rng + ?Sized>(&self, w: f64, rng: &mut R) -> f64 {
        NoiseSampler::new(*self, w).sample(rng)
    }

    /// Variance of the distribution with mean `w`.
    pub fn variance(&self, w: f64) -> f64 {
        match *self {
            NoiseFamily::None => 0.0,
            NoiseFamily::Bernoulli => w * (1.0 - w),
            NoiseFamily::Beta { kappa } => w * (1.0 - w) / (kappa + 1.0),
            NoiseFamily::BoundedUniform { h } => {
                let hh = h.min(w).min(1.0 - w);
                hh * hh / 3.0
            }
        }
    }
}

/// A noise distribution with its mean fixed, so repeated draws skip setup.
#[derive(Debug, Clone, Copy)]
pub(crate) enum NoiseSampler {
    Point(f64),
    /// Success when a raw 64-bit draw falls below `p · 2⁶⁴`.
    Bernoulli(u64),
    Beta(Beta<f64>),
    Uniform { low: f64, width: f64 },
}

impl NoiseSampler {
    pub(crate) fn new(family: NoiseFamily, w: f64) -> Self {
        match family {
            NoiseFamily::None => NoiseSampler::Point(w),
            NoiseFamily::Bernoulli => {
                if w <= 0.0 || w >= 1.0 {
                    NoiseSampler::Point(w)
                } else {
                    NoiseSampler::Bernoulli((w * 18_446_744_073_709_551_616.0) as u64)
                }
            }
            NoiseFamily::Beta { kappa } => {
                if w <= 0.0 || w >= 1.0 {
                    NoiseSampler::Point(w)
                } else {
                    // both shape parameters are positive here
                    NoiseSampler::Beta(Beta::new(kappa * w, kappa * (1.0 - w)).unwrap())
                }
            }
            NoiseFamily::BoundedUniform { h } => {
                let hh = h.min(w).min(1.0 - w);
                if hh <= 0.0 {
                    NoiseSampler::Point(w)
                } else {
                    NoiseSampler::Uniform {
                        low: w - hh,
                        width: 2.0 * hh,
                    }
                }
            }
        }
    }

    #[inline]
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseSampler::Point(w) => w,
            NoiseSampler::Bernoulli(threshold) => f64::from(u8::from(rng.next_u64() < threshold)),
            NoiseSampler::Beta(ref b) => b.sample(rng).clamp(0.0, 1.0),
            NoiseSampler::Uniform { low, width } => {
                (low + width * rng.random::<f64>()).clamp(0.0, 1.0)
            }
        }
    }
}

/// Expectation graphon together with a centered noise family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecoratedFile", into = "DecoratedFile")]
pub struct DecoratedGraphon {
    expectation: StepGraphon,
    noise: NoiseFamily,
}

#[derive(Serialize, Deserialize)]
struct DecoratedFile {
    expectation: StepGraphon,
    noise: NoiseFamily,
}

impl TryFrom<DecoratedFile> for DecoratedGraphon {
    type Error = Error;

    fn try_from(f: DecoratedFile) -> Result<Self> {
        DecoratedGraphon::new(f.expectation, f.noise)
    }
}

impl From<DecoratedGraphon> for DecoratedFile {
    fn from(d: DecoratedGraphon) -> Self {
        DecoratedFile {
            expectation: d.expectation,
            noise: d.noise,
        }
    }
}

impl DecoratedGraphon {
    pub fn new(expectation: StepGraphon, noise: NoiseFamily) -> Result<Self> {
        noise.validate()?;
        Ok(DecoratedGraphon { expectation, noise })
    }

    pub fn expectation(&self) -> &StepGraphon {
        &self.expectation
    }

    pub fn noise(&self) -> NoiseFamily {
        self.noise
    }

    pub(crate) fn block_samplers(&self) -> Vec<NoiseSampler> {
        self.expectation
            .values()
            .iter()
            .map(|&w| NoiseSampler::new(self.noise, w))
            .collect()
    }

    /// Draws the latent positions `U_1..U_k` and returns their blocks.
    pub(crate) fn draw_blocks<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Vec<usize> {
        (0..k)
            .map(|_| self.expectation.block_of(rng.random::<f64>()))
            .collect()
    }

    /// Samples a `k`-node weighted graph from the stream `rng`, overwriting `out`.
    ///
    /// Draw order is fixed: the `k` latent uniforms first, then one weight
    /// per pair `i < j` in row-major order.
    pub fn sample_into<R: Rng + ?Sized>(&self, k: usize, rng: &mut R, out: &mut WeightedGraph) {
        let samplers = self.block_samplers();
        self.sample_with(&samplers, k, rng, out);
    }

    pub(crate) fn sample_with<R: Rng + ?Sized>(
        &self,
        samplers: &[NoiseSampler],
        k: usize,
        rng: &mut R,
        out: &mut WeightedGraph,
    ) {
        let m = self.expectation.blocks();
        let blocks = self.draw_blocks(k, rng);
        out.k = k;
        out.weights.clear();
        out.weights.resize(k * k, 0.0);
        for i in 0..k {
            let row = &samplers[blocks[i] * m..(blocks[i] + 1) * m];
            for j in (i + 1)..k {
                let x = row[blocks[j]].sample(rng);
                out.weights[i * k + j] = x;
                out.weights[j * k + i] = x;
            }
        }
    }

    /// Samples one graph; deterministic in `(self, k, seed)`.
    pub fn sample_graph(&self, k: usize, seed: u64) -> Result<WeightedGraph> {
        if k == 0 {
            return Err(Error::Domain("graph size k must be positive".into()));
        }
        let mut g = WeightedGraph::empty(k);
        self.sample_into(k, &mut rng::stream(seed), &mut g);
        Ok(g)
    }

    /// Samples `n` graphs, graph `i` from sub-stream `(seed, i)`.
    pub fn sample_graphs(&self, k: usize, n: usize, seed: u64) -> Result<Vec<WeightedGraph>> {
        if k == 0 {
            return Err(Error::Domain("graph size k must be positive".into()));
        }
        let samplers = self.block_samplers();
        Ok((0..n)
            .map(|i| {
                let mut g = WeightedGraph::empty(k);
                self.sample_with(&samplers, k, &mut rng::substream(seed, i as u64), &mut g);
                g
            })
            .collect())
    }
}

impl From<StepGraphon> for DecoratedGraphon {
    /// A plain graphon samples binary graphs.
    fn from(w: StepGraphon) -> Self {
        DecoratedGraphon {
            expectation: w,
            noise: NoiseFamily::Bernoulli,
        }
    }
}

/// Symmetric `k × k` weight matrix with entries in [0, 1] and zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    k: usize,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// The edgeless graph on `k` nodes.
    pub fn empty(k: usize) -> Self {
        WeightedGraph {
            k,
            weights: vec![0.0; k * k],
        }
    }

    /// Complete graph with every off-diagonal weight equal to `w`.
    pub fn complete(k: usize, w: f64) -> Result<Self> {
        check_unit("complete graph", 0, 1, w)?;
        let mut g = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    g.weights[i * k + j] = w;
                }
            }
        }
        Ok(g)
    }

    /// Builds a graph from a full row-major matrix, validating every invariant.
    pub fn from_flat(k: usize, weights: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("graph needs at least one node".into()));
        }
        if weights.len() != k * k {
            return Err(Error::Shape(format!(
                "expected {} weights for k = {k}, got {}",
                k * k,
                weights.len()
            )));
        }
        let mut weights = weights;
        for i in 0..k {
            for j in 0..k {
                let v = weights[i * k + j];
                check_unit("graph", i, j, v)?;
                if i == j && v.abs() > SYMMETRY_TOL {
                    return Err(Error::Invariant {
                        context: "graph".into(),
                        detail: format!("diagonal entry ({i}, {i}) is {v}, expected 0"),
                    });
                }
                if (v - weights[j * k + i]).abs() > SYMMETRY_TOL {
                    return Err(Error::Invariant {
                        context: "graph".into(),
                        detail: format!("weights[{i}][{j}] != weights[{j}][{i}]"),
                    });
                }
            }
        }
        for i in 0..k {
            weights[i * k + i] = 0.0;
            for j in 0..i {
                weights[i * k + j] = weights[j * k + i];
            }
        }
        Ok(WeightedGraph { k, weights })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::Shape(format!(
                "graph row {i} has {} entries, expected {k}",
                r.len()
            )));
        }
        Self::from_flat(k, rows.concat())
    }

    /// Builds a graph from its strict upper triangle, row-major.
    pub fn from_upper(k: usize, upper: &[f64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("graph needs at least one node".into()));
        }
        let expected = k * (k - 1) / 2;
        if upper.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} upper-triangle weights for k = {k}, got {}",
                upper.len()
            )));
        }
        let mut g = Self::empty(k);
        let mut it = upper.iter();
        for i in 0..k {
            for j in (i + 1)..k {
                let v = *it.next().unwrap();
                check_unit("graph", i, j, v)?;
                g.weights[i * k + j] = v;
                g.weights[j * k + i] = v;
            }
        }
        Ok(g)
    }

    pub fn upper(&self) -> Vec<f64> {
        let k = self.k;
        let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            out.extend_from_slice(&self.weights[i * k + i + 1..(i + 1) * k]);
        }
        out
    }

    /// Node count.
    pub fn nodes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.k + j]
    }

    /// Full row-major weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.weights[i * self.k..(i + 1) * self.k]
    }

    /// Sets the weight of the pair `{i, j}`; `i` and `j` must differ.
    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) -> Result<()> {
        if i == j {
            return Err(Error::Domain("cannot set a diagonal weight".into()));
        }
        if i >= self.k || j >= self.k {
            return Err(Error::Domain(format!("pair ({i}, {j}) out of range")));
        }
        check_unit("graph", i, j, w)?;
        self.weights[i * self.k + j] = w;
        self.weights[j * self.k + i] = w;
        Ok(())
    }

    /// Graph with nodes relabeled: node `i` of the result is node `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.k)?;
        let k = self.k;
        let mut out = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                out.weights[i * k + j] = self.weight(perm[i], perm[j]);
            }
        }
        Ok(out)
    }

    /// The graph viewed as a `k`-block step graphon (zero diagonal retained).
    pub fn to_graphon(&self) -> StepGraphon {
        StepGraphon {
            m: self.k,
            values: self.weights.clone(),
        }
    }
}

/// Step graphon of a weighted graph, one block per node.
pub fn graphon_of_graph(g: &WeightedGraph) -> StepGraphon {
    g.to_graphon()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn two_block() -> StepGraphon {
        StepGraphon::from_rows(&[vec![0.1, 0.9], vec![0.9, 0.2]]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = StepGraphon::constant(0.5).unwrap();
        assert_eq!(c.eval(0.3, 0.9).unwrap(), 0.5);
        assert_eq!(two_block().eval(0.25, 0.75).unwrap(), 0.9);
        assert_eq!(two_block().eval(1.0, 1.0).unwrap(), 0.2);
        assert_eq!(two_block().eval(0.0, 0.5).unwrap(), 0.9);
        assert!(matches!(c.eval(1.1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(c.eval(0.0, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_is_symmetric() {
        let w = StepGraphon::from_rows(&[
            vec![0.1, 0.4, 0.7],
            vec![0.4, 0.3, 0.2],
            vec![0.7, 0.2, 0.9],
        ])
        .unwrap();
        let mut rng = rng::stream(11);
        for _ in 0..100 {
            let (x, y): (f64, f64) = (rng.random(), rng.random());
            assert_eq!(w.eval(x, y).unwrap(), w.eval(y, x).unwrap());
        }
    }

    #[test]
    fn rejects_invalid_graphons() {
        assert!(matches!(
            StepGraphon::from_rows(&[vec![0.1, 0.2], vec![0.3, 0.1]]),
            Err(Error::Invariant { .. })
        ));
        assert!(matches!(
            StepGraphon::constant(1.5),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            StepGraphon::from_rows(&[vec![0.1, 0.2]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn degenerate_means_sample_deterministically() {
        let ones = DecoratedGraphon::new(StepGraphon::constant(1.0).unwrap(), NoiseFamily::Bernoulli)
            .unwrap();
        let g = ones.sample_graph(6, 3).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.weight(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
        for noise in [
            NoiseFamily::None,
            NoiseFamily::Bernoulli,
            NoiseFamily::Beta { kappa: 3.0 },
            NoiseFamily::BoundedUniform { h: 0.3 },
        ] {
            let zero = DecoratedGraphon::new(StepGraphon::constant(0.0).unwrap(), noise).unwrap();
            let g = zero.sample_graph(5, 9).unwrap();
            assert!(g.weights().iter().all(|&w| w == 0.0));
        }
    }

    #[test]
    fn bernoulli_half_density_concentrates() {
        let d = DecoratedGraphon::new(StepGraphon::constant(0.5).unwrap(), NoiseFamily::Bernoulli)
            .unwrap();
        for seed in 0..10 {
            let g = d.sample_graph(200, seed).unwrap();
            let upper = g.upper();
            let mean = upper.iter().sum::<f64>() / upper.len() as f64;
            assert!((mean - 0.5).abs() < 0.02, "seed {seed}: mean {mean}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = DecoratedGraphon::new(two_block(), NoiseFamily::Beta { kappa: 5.0 }).unwrap();
        assert_eq!(d.sample_graph(30, 4).unwrap(), d.sample_graph(30, 4).unwrap());
        assert_ne!(d.sample_graph(30, 4).unwrap(), d.sample_graph(30, 5).unwrap());
        let many = d.sample_graphs(10, 3, 4).unwrap();
        assert_eq!(many, d.sample_graphs(10, 3, 4).unwrap());
    }

    #[test]
    fn noise_means_within_four_standard_errors() {
        let families = [
            NoiseFamily::None,
            NoiseFamily::Bernoulli,
            NoiseFamily::Beta { kappa: 10.0 },
            NoiseFamily::BoundedUniform { h: 0.2 },
        ];
        let draws = 100_000;
        let mut rng = rand_xoshiro::Xoshiro256PlusPlus::seed_from_u64(5);
        for family in families {
            for step in 1..=9 {
                let w = step as f64 / 10.0;
                let sampler = NoiseSampler::new(family, w);
                let mut sum = 0.0;
                for _ in 0..draws {
                    let x = sampler.sample(&mut rng);
                    assert!((0.0..=1.0).contains(&x));
                    sum += x;
                }
                let mean = sum / draws as f64;
                let se = (family.variance(w) / draws as f64).sqrt();
                assert!(
                    (mean - w).abs() <= 4.0 * se + 1e-9,
                    "{family:?} at {w}: mean {mean}, se {se}"
                );
            }
        }
    }

    #[test]
    fn graphon_of_graph_examples() {
        let k3 = WeightedGraph::complete(3, 1.0).unwrap();
        assert_eq!(
            graphon_of_graph(&k3).rows(),
            vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]
        );
        let one = WeightedGraph::empty(1);
        assert_eq!(graphon_of_graph(&one).rows(), vec![vec![0.0]]);
    }

    #[test]
    fn refine_examples() {
        let c = StepGraphon::constant(0.5).unwrap().refine(3).unwrap();
        assert_eq!(c.blocks(), 3);
        assert!(c.values().iter().all(|&v| v == 0.5));
        assert_eq!(two_block().refine(1).unwrap(), two_block());
        let r = two_block().refine(4).unwrap();
        let mut rng = rng::stream(2);
        for _ in 0..50 {
            let (x, y): (f64, f64) = (rng.random(), rng.random());
            assert_eq!(r.eval(x, y).unwrap(), two_block().eval(x, y).unwrap());
        }
        assert!(two_block().refine(0).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(
            WeightedGraph::from_rows(&[vec![0.0, 0.5], vec![0.4, 0.0]]),
            Err(Error::Invariant { .. })
        ));
        assert!(matches!(
            WeightedGraph::from_rows(&[vec![0.0, 1.5], vec![1.5, 0.0]]),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            WeightedGraph::from_rows(&[vec![0.2, 0.5], vec![0.5, 0.0]]),
            Err(Error::Invariant { .. })
        ));
        let g = WeightedGraph::from_upper(3, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(g.weight(2, 1), 0.3);
        assert_eq!(g.upper(), vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn json_round_trip() {
        let d = DecoratedGraphon::new(two_block(), NoiseFamily::Beta { kappa: 10.0 }).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"kind\":\"beta\""));
        let back: DecoratedGraphon = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"m": 2, "values": [[0.1, 0.2], [0.3, 0.1]]}"#;
        assert!(serde_json::from_str::<StepGraphon>(bad).is_err());
        let bad_noise = r#"{"expectation": {"m": 1, "values": [[0.5]]}, "noise": {"kind": "bounded_uniform", "h": 0.9}}"#;
        assert!(serde_json::from_str::<DecoratedGraphon>(bad_noise).is_err());
    }
}
