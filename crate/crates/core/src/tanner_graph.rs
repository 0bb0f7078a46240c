//! Δ-regular bipartite graphs `G = (A ∪ B, E)` with a fixed global edge order.
//!
//! Vertices are numbered globally: `0..n` is side A and `n..2n` is side B.
//! Edges are stored as `(a, b)` pairs of *side-local* indices, and their
//! position in [`TannerGraph::edges`] is the global edge index used to index
//! words.

use std::collections::VecDeque;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default tolerance for the dense eigensolver.
pub const DENSE_TOL: f64 = 1e-9;
const INTEGER_SNAP: f64 = 1e-9;
/// Default tolerance for power iteration.
pub const POWER_TOL: f64 = 1e-6;
/// Iteration budget for power iteration.
pub const POWER_ITERATION_BUDGET: usize = 100_000;
/// Graphs with at most this many vertices use the dense eigensolver.
pub const DENSE_VERTEX_LIMIT: usize = 600;

const RESAMPLE_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Top of the adjacency spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInfo {
    pub lambda1: f64,
    /// Second largest eigenvalue in signed order.
    pub lambda2: f64,
    /// `lambda2 / Δ`.
    pub gamma: f64,
    /// Full ascending spectrum when computed densely.
    pub eigenvalues: Option<Vec<f64>>,
}

/// Both upper bounds on `2|Ê|` for the edge set induced by vertex subsets of
/// relative sizes `alpha` (side A) and `beta` (side B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedEdgeBounds {
    /// `2((1-γ)αβ + γ√(αβ))Δn`
    pub loose: f64,
    /// `2(αβ + γ√(α(1-α)β(1-β)))Δn`
    pub tight: f64,
}

#[derive(Debug, Clone)]
pub struct TannerGraph {
    n: usize,
    delta: usize,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<usize>>,
    spectrum: OnceLock<SpectralInfo>,
}

impl TannerGraph {
    /// Validates and builds a graph; the order of `edges` is the global edge
    /// order.
    pub fn from_edges(n: usize, delta: usize, edges: Vec<(usize, usize)>) -> Result<TannerGraph> {
        if n == 0 || delta == 0 {
            return Err(Error::InvalidGraph("n and delta must be positive".into()));
        }
        if edges.len() != n * delta {
            return Err(Error::InvalidGraph(format!("expected {} edges, got {}", n * delta, edges.len())));
        }
        let mut incidence = vec![Vec::with_capacity(delta); 2 * n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge {i} = ({a}, {b}) out of range")));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidGraph(format!("parallel edge ({a}, {b})")));
            }
            incidence[a].push(i);
            incidence[n + b].push(i);
        }
        if let Some(v) = incidence.iter().position(|inc| inc.len() != delta) {
            return Err(Error::InvalidGraph(format!("vertex {v} has degree {}", incidence[v].len())));
        }
        let g = TannerGraph { n, delta, edges, incidence, spectrum: OnceLock::new() };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn from_sorted(n: usize, delta: usize, mut edges: Vec<(usize, usize)>) -> Result<TannerGraph> {
        edges.sort_unstable();
        Self::from_edges(n, delta, edges)
    }

    /// `K_{n,n}`.
    pub fn complete_bipartite(n: usize) -> Result<TannerGraph> {
        let edges = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        Self::from_sorted(n, n, edges)
    }

    /// The cycle of length `2n` (Δ = 2), `n >= 2`.
    pub fn cycle(n: usize) -> Result<TannerGraph> {
        if n < 2 {
            return Err(Error::InvalidGraph("cycle needs n >= 2".into()));
        }
        let edges = (0..n).flat_map(|i| [(i, i), (i, (i + 1) % n)]).collect();
        Self::from_sorted(n, 2, edges)
    }

    /// `K_{n,n}` minus the perfect matching `{(i, i)}` (Δ = n - 1), `n >= 3`.
    pub fn complete_minus_matching(n: usize) -> Result<TannerGraph> {
        let edges = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        Self::from_sorted(n, n.saturating_sub(1), edges)
    }

    /// A random simple connected Δ-regular bipartite graph, built as a union
    /// of Δ perfect matchings. Each matching is drawn by randomized
    /// augmenting paths among the still-unused vertex pairs; the whole graph
    /// is resampled until connected. Deterministic for a fixed seed.
    pub fn random_regular_bipartite(n: usize, delta: usize, seed: u64) -> Result<TannerGraph> {
        if n == 0 || delta == 0 || delta > n {
            return Err(Error::GraphConstruction(format!("need 1 <= delta <= n, got n={n}, delta={delta}")));
        }
        if n >= 2 && delta == 1 {
            return Err(Error::GraphConstruction("a 1-regular graph on n >= 2 vertices per side is disconnected".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RESAMPLE_LIMIT {
            let mut used = vec![vec![false; n]; n];
            let mut edges = Vec::with_capacity(n * delta);
            for _ in 0..delta {
                let m = random_perfect_matching(&used, &mut rng)
                    .ok_or_else(|| Error::GraphConstruction("no perfect matching in complement".into()))?;
                for (a, &b) in m.iter().enumerate() {
                    used[a][b] = true;
                    edges.push((a, b));
                }
            }
            match Self::from_sorted(n, delta, edges) {
                Ok(g) => return Ok(g),
                Err(Error::InvalidGraph(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::GraphConstruction(format!("no connected sample in {RESAMPLE_LIMIT} attempts")))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Global vertex ids `(a, n + b)` of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.edges[e];
        (a, self.n + b)
    }

    /// Incident edges `E(v)` in global edge order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn side(&self, v: usize) -> Side {
        if v < self.n {
            Side::A
        } else {
            Side::B
        }
    }

    /// The other endpoint of `e` seen from `v`.
    pub fn opposite(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints(e);
        if v == a {
            b
        } else {
            a
        }
    }

    /// Position of edge `e` inside `E(v)`.
    pub fn local_position(&self, v: usize, e: usize) -> Option<usize> {
        self.incidence[v].iter().position(|&x| x == e)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; 2 * self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &e in &self.incidence[v] {
                let u = self.opposite(e, v);
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == 2 * self.n
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let size = 2 * self.n;
        let mut m = DMatrix::zeros(size, size);
        for e in 0..self.edges.len() {
            let (a, b) = self.endpoints(e);
            m[(a, b)] = 1.0;
            m[(b, a)] = 1.0;
        }
        m
    }

    /// Full spectrum by dense symmetric eigensolve.
    pub fn spectrum_dense(&self, tol: f64) -> Result<SpectralInfo> {
        let eig = SymmetricEigen::try_new(self.adjacency(), tol.max(f64::EPSILON), 10_000)
            .ok_or_else(|| Error::Numeric("dense eigensolver did not converge".into()))?;
        // snap roundoff around integer eigenvalues (complete graphs and friends)
        let mut values: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&x| if (x - x.round()).abs() < INTEGER_SNAP { x.round() + 0.0 } else { x })
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lambda1 = values[values.len() - 1];
        let lambda2 = if values.len() >= 2 { values[values.len() - 2] } else { lambda1 };
        self.finish_spectrum(lambda1, lambda2, Some(values), tol.max(1e-7))
    }

    /// Second eigenvalue by shifted power iteration on `A + ΔI`, deflating
    /// the all-ones top eigenvector.
    pub fn spectrum_power_iteration(&self, tol: f64, budget: usize) -> Result<SpectralInfo> {
        let size = 2 * self.n;
        let shift = self.delta as f64;
        if size <= 2 {
            return self.spectrum_dense(DENSE_TOL);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut x: Vec<f64> = (0..size).map(|_| rng.random::<f64>() - 0.5).collect();
        let project = |x: &mut Vec<f64>| {
            let mean = x.iter().sum::<f64>() / size as f64;
            x.iter_mut().for_each(|v| *v -= mean);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        };
        project(&mut x);
        let mut prev = f64::INFINITY;
        for _ in 0..budget {
            let mut y: Vec<f64> = x.iter().map(|v| shift * v).collect();
            for v in 0..size {
                for &e in &self.incidence[v] {
                    y[v] += x[self.opposite(e, v)];
                }
            }
            let rayleigh: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            project(&mut y);
            x = y;
            if (rayleigh - prev).abs() < tol {
                return self.finish_spectrum(self.delta as f64, rayleigh - shift, None, tol.sqrt());
            }
            prev = rayleigh;
        }
        Err(Error::Numeric(format!("power iteration did not converge in {budget} iterations")))
    }

    fn finish_spectrum(&self, lambda1: f64, lambda2: f64, eigenvalues: Option<Vec<f64>>, check_tol: f64) -> Result<SpectralInfo> {
        let d = self.delta as f64;
        if (lambda1 - d).abs() > check_tol * d.max(1.0) {
            return Err(Error::Numeric(format!("top eigenvalue {lambda1} differs from delta {d}")));
        }
        let lambda2 = lambda2.clamp(-d, d);
        Ok(SpectralInfo { lambda1, lambda2, gamma: lambda2 / d, eigenvalues })
    }

    /// Computes (once) and caches the spectral ratio `γ_G`. Dense for small
    /// graphs, power iteration otherwise.
    pub fn compute_spectrum(&self, tol: f64) -> Result<&SpectralInfo> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let info = if self.num_vertices() <= DENSE_VERTEX_LIMIT {
            self.spectrum_dense(tol)?
        } else {
            self.spectrum_power_iteration(tol, POWER_ITERATION_BUDGET)?
        };
        let _ = self.spectrum.set(info);
        Ok(self.spectrum.get().expect("just set"))
    }

    pub fn spectrum(&self) -> Option<&SpectralInfo> {
        self.spectrum.get()
    }

    pub fn gamma(&self) -> Result<f64> {
        self.spectrum().map(|s| s.gamma).ok_or(Error::SpectrumNotComputed)
    }

    /// Upper bounds on twice the number of edges induced by vertex subsets of
    /// relative sizes `alpha`, `beta`. Requires [`Self::compute_spectrum`].
    pub fn induced_edge_count_bound(&self, alpha: f64, beta: f64) -> Result<InducedEdgeBounds> {
        let gamma = self.gamma()?;
        induced_edge_bounds(gamma, alpha, beta, self.delta, self.n)
    }

    /// Number of edges with both endpoints in `ua ⊆ A`, `ub ⊆ B` (side-local
    /// indices).
    pub fn induced_edge_count(&self, ua: &[usize], ub: &[usize]) -> usize {
        let mut in_b = vec![false; self.n];
        for &b in ub {
            in_b[b] = true;
        }
        ua.iter()
            .flat_map(|&a| self.incidence[a].iter())
            .filter(|&&e| in_b[self.edges[e].1])
            .count()
    }

    /// Parses the graph text format: header `n delta`, then `Δn` lines
    /// `a_index b_index`. File order defines the global edge order.
    pub fn from_text(text: &str) -> Result<TannerGraph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let [n, delta] = crate::linear_code::parse_numbers(header)?[..] else {
            return Err(Error::Parse(format!("expected header `n delta`, got `{header}`")));
        };
        let mut edges = Vec::with_capacity(n * delta);
        for line in lines {
            let [a, b] = crate::linear_code::parse_numbers(line)?[..] else {
                return Err(Error::Parse(format!("expected `a b`, got `{line}`")));
            };
            edges.push((a, b));
        }
        Self::from_edges(n, delta, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.delta);
        for (a, b) in &self.edges {
            s.push_str(&format!("{a} {b}\n"));
        }
        s
    }
}

/// Evaluates both induced-edge bounds for a given `γ`.
pub fn induced_edge_bounds(gamma: f64, alpha: f64, beta: f64, delta: usize, n: usize) -> Result<InducedEdgeBounds> {
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("subset fractions must lie in [0, 1], got {alpha}, {beta}")));
    }
    let scale = 2.0 * (delta * n) as f64;
    let ab = alpha * beta;
    let loose = scale * ((1.0 - gamma) * ab + gamma * ab.sqrt());
    let tight = scale * (ab + gamma * (alpha * (1.0 - alpha) * beta * (1.0 - beta)).sqrt());
    Ok(InducedEdgeBounds { loose, tight })
}

// Perfect matching avoiding `used` pairs, via Kuhn's algorithm with shuffled
// visiting order. Returns `match_of_a[a] = b`.
fn random_perfect_matching(used: &[Vec<bool>], rng: &mut impl Rng) -> Option<Vec<usize>> {
    let n = used.len();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| !used[a][b]).collect()).collect();
    for list in adj.iter_mut() {
        list.shuffle(rng);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut match_b: Vec<Option<usize>> = vec![None; n];

    fn augment(a: usize, adj: &[Vec<usize>], seen: &mut [bool], match_b: &mut [Option<usize>]) -> bool {
        for &b in &adj[a] {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            if match_b[b].is_none_or(|a2| augment(a2, adj, seen, match_b)) {
                match_b[b] = Some(a);
                return true;
            }
        }
        false
    }

    for &a in &order {
        let mut seen = vec![false; n];
        if !augment(a, &adj, &mut seen, &mut match_b) {
            return None;
        }
    }
    let mut match_a = vec![0; n];
    for (b, a) in match_b.iter().enumerate() {
        match_a[(*a)?] = b;
    }
    Some(match_a)
}
