//! Feature graphs and the graph-guided fused lasso penalty matrix built from
//! them. Rows of the penalty matrix are `w·(e_i − e_j)` so that
//! `‖Ax‖₁ = Σ w|x_i − x_j|` over the edges.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numkit::SparseMat;
use crate::problem::Sample;
use crate::scalar::Scalar;

/// Undirected weighted graph over the `d` coordinates of `x`. Edges are kept
/// as `(i, j, w)` with `i < j`, sorted and unique.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureGraph {
    d: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl FeatureGraph {
    /// Validates and canonicalizes an edge list. Endpoints may be given in
    /// either order.
    pub fn new(d: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop on node {a}")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if j >= d {
                return Err(Error::InvalidInput(format!("edge ({a}, {b}) outside {d} nodes")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidInput(format!("edge ({a}, {b}) has weight {w}")));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidInput(format!("duplicate edge ({i}, {j})")));
            }
            out.push((i, j, w));
        }
        out.sort_by_key(|&(i, j, _)| (i, j));
        Ok(FeatureGraph { d, edges: out })
    }

    pub fn empty(d: usize) -> Self {
        FeatureGraph { d, edges: Vec::new() }
    }

    /// Path graph `0 - 1 - … - (d-1)`, the classic fused lasso.
    pub fn chain(d: usize) -> Self {
        FeatureGraph {
            d,
            edges: (1..d).map(|j| (j - 1, j, 1.0)).collect(),
        }
    }

    /// Adds up to `extra` uniformly drawn unit-weight edges not already
    /// present.
    pub fn with_random_edges(mut self, extra: usize, seed: u64) -> Self {
        if self.d < 2 {
            return self;
        }
        let max_edges = self.d * (self.d - 1) / 2;
        let mut present: BTreeSet<(usize, usize)> = self.edges.iter().map(|&(i, j, _)| (i, j)).collect();
        let target = (present.len() + extra).min(max_edges);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while present.len() < target {
            let a = rng.random_range(0..self.d);
            let b = rng.random_range(0..self.d);
            if a == b {
                continue;
            }
            if present.insert((a.min(b), a.max(b))) {
                self.edges.push((a.min(b), a.max(b), 1.0));
            }
        }
        self.edges.sort_by_key(|&(i, j, _)| (i, j));
        self
    }

    pub fn nodes(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.d];
        for &(i, j, _) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Reads an edge list: one `i j [weight]` per line, 0-based node ids,
    /// `#` starts a comment.
    pub fn read_edge_list(path: impl AsRef<Path>, d: usize) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_edge_list(&text, d, &path.display().to_string())
    }

    pub fn parse_edge_list(text: &str, d: usize, origin: &str) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: origin.to_string(),
            line,
            msg,
        };
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 || toks.len() > 3 {
                return Err(perr(lineno + 1, format!("expected `i j [weight]`, got `{line}`")));
            }
            let i: usize = toks[0]
                .parse()
                .map_err(|_| perr(lineno + 1, format!("bad node id `{}`", toks[0])))?;
            let j: usize = toks[1]
                .parse()
                .map_err(|_| perr(lineno + 1, format!("bad node id `{}`", toks[1])))?;
            let w: f64 = match toks.get(2) {
                Some(t) => t.parse().map_err(|_| perr(lineno + 1, format!("bad weight `{t}`")))?,
                None => 1.0,
            };
            edges.push((i, j, w));
        }
        FeatureGraph::new(d, edges).map_err(|e| match e {
            Error::InvalidInput(msg) => perr(0, msg),
            other => other,
        })
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# {} nodes, {} edges\n", self.d, self.edges.len());
        for &(i, j, w) in &self.edges {
            if w == 1.0 {
                s.push_str(&format!("{i} {j}\n"));
            } else {
                s.push_str(&format!("{i} {j} {w:?}\n"));
            }
        }
        s
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

/// Connects features whose absolute empirical Pearson correlation exceeds
/// `threshold`. Features with zero variance never receive an edge.
pub fn correlation_graph<F: Scalar>(samples: &[Sample<F>], d: usize, threshold: f64) -> Result<FeatureGraph> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput("correlation graph needs at least 2 samples".into()));
    }
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::InvalidInput(format!("threshold {threshold} outside [0, 1)")));
    }
    let n = samples.len();
    let mut cols = vec![0.0f64; n * d];
    for (s, sample) in samples.iter().enumerate() {
        for (&j, &v) in sample.indices().iter().zip(sample.values()) {
            if j >= d {
                return Err(Error::InvalidInput(format!("feature index {j} >= d={d}")));
            }
            cols[j * n + s] = v.as_f64();
        }
    }
    let nf = n as f64;
    let mut sd = vec![0.0f64; d];
    for j in 0..d {
        let col = &mut cols[j * n..(j + 1) * n];
        let mean = col.iter().sum::<f64>() / nf;
        col.iter_mut().for_each(|v| *v -= mean);
        sd[j] = col.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let mut edges = Vec::new();
    for i in 0..d {
        if sd[i] <= f64::EPSILON * nf.sqrt() {
            continue;
        }
        for j in (i + 1)..d {
            if sd[j] <= f64::EPSILON * nf.sqrt() {
                continue;
            }
            let ci = &cols[i * n..(i + 1) * n];
            let cj = &cols[j * n..(j + 1) * n];
            let cov: f64 = ci.iter().zip(cj).map(|(a, b)| a * b).sum();
            let corr = cov / (sd[i] * sd[j]);
            if corr.abs() > threshold {
                edges.push((i, j, 1.0));
            }
        }
    }
    FeatureGraph::new(d, edges)
}

/// One row per edge `(i, j, w)`: `+w` in column `i`, `−w` in column `j`.
pub fn penalty_matrix<F: Scalar>(g: &FeatureGraph) -> Result<SparseMat<F>> {
    let triplets: Vec<(usize, usize, F)> = g
        .edges
        .iter()
        .enumerate()
        .flat_map(|(r, &(i, j, w))| [(r, i, F::lit(w)), (r, j, -F::lit(w))])
        .collect();
    SparseMat::from_triplets(g.edges.len(), g.d, &triplets)
}
