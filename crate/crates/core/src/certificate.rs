//! Dual witnesses for LP decoding success, error-edge peeling and error cores.
//!
//! A witness assigns `τ_{v,e}^α` to every (edge, endpoint, symbol) triple. It
//! certifies that the transmitted codeword `c` is the unique LP optimum for
//! the received word `y` when three families of constraints hold:
//!
//! * edge, `α ≠ c_e`: `τ_{a,e}^α + τ_{b,e}^α ≤ γ_e^α - ε`;
//! * edge, `α = c_e`: `τ_{a,e}^α + τ_{b,e}^α ≤ γ_e^α`;
//! * vertex `v`, local codeword `b`:
//!   `Σ_{e∈E(v)} τ_{v,e}^{b_e} ≥ -Δ/2 + dist(y|E(v), c|E(v))`.
//!
//! All arithmetic is exact over rationals.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander_code::{ExpanderCode, Word};
use crate::linear_code::hamming_distance;
use crate::orientation::{self, OrientedEdgeSet};
use crate::tanner_graph::{Side, TannerGraph};

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Starting slack of the ε schedule (`10⁻⁶`).
pub fn epsilon_start() -> Q {
    q(1, 1_000_000)
}

/// Halves ε from `start` while it stays at or above `10⁻¹²`.
pub fn epsilon_schedule_from(start: Q) -> impl Iterator<Item = Q> {
    let floor = q(1, 1_000_000_000_000);
    std::iter::successors(Some(start), |e| Some(e / 2)).take_while(move |e| *e >= floor)
}

pub fn epsilon_schedule() -> impl Iterator<Item = Q> {
    epsilon_schedule_from(epsilon_start())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualWitness {
    pub q: usize,
    pub num_edges: usize,
    /// `τ` at `(2e + s)·q + α`, `s = 0` for the A endpoint and `1` for B.
    pub tau: Vec<Q>,
    pub epsilon: Q,
    /// `σ_v = Δ/2 - dist(y|E(v), c|E(v))`.
    pub sigma: Vec<Q>,
}

impl DualWitness {
    fn zero(code: &ExpanderCode, c: &Word, y: &Word, epsilon: Q) -> DualWitness {
        let qn = code.field().order();
        let ne = code.length();
        let half_delta = q(code.graph().delta() as i64, 2);
        let sigma = (0..code.graph().num_vertices())
            .map(|v| half_delta - Q::from_integer(hamming_distance(&code.restrict(y, v), &code.restrict(c, v)) as i64))
            .collect();
        DualWitness { q: qn, num_edges: ne, tau: vec![Q::zero(); 2 * qn * ne], epsilon, sigma }
    }

    pub fn index(&self, e: usize, side: Side, alpha: usize) -> usize {
        let s = match side {
            Side::A => 0,
            Side::B => 1,
        };
        (2 * e + s) * self.q + alpha
    }

    /// `τ_{v,e}^α` for an endpoint `v` of `e`.
    pub fn tau_at(&self, graph: &TannerGraph, v: usize, e: usize, alpha: usize) -> Q {
        self.tau[self.index(e, graph.side(v), alpha)]
    }

    fn set(&mut self, graph: &TannerGraph, v: usize, e: usize, alpha: usize, value: Q) {
        let i = self.index(e, graph.side(v), alpha);
        self.tau[i] = value;
    }

    pub fn tau_f64(&self) -> Vec<f64> {
        self.tau.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Strict edge constraint at `α ≠ c_e`.
    EdgeStrict,
    /// Weak edge constraint at `α = c_e`.
    EdgeWeak,
    /// Per-vertex local codeword constraint.
    LocalCodeword,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub edge: Option<usize>,
    pub symbol: Option<usize>,
    pub vertex: Option<usize>,
    /// Index of the local codeword in the vertex's enumeration.
    pub local_codeword: Option<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} violated", self.constraint)?;
        if let Some(e) = self.edge {
            write!(f, " at edge {e}")?;
        }
        if let Some(a) = self.symbol {
            write!(f, " symbol {a}")?;
        }
        if let Some(v) = self.vertex {
            write!(f, " at vertex {v}")?;
        }
        if let Some(b) = self.local_codeword {
            write!(f, " local codeword {b}")?;
        }
        write!(f, ": {} vs {}", self.lhs, self.rhs)
    }
}

fn check_pair(code: &ExpanderCode, c: &Word, y: &Word) -> Result<()> {
    code.check_word(c)?;
    code.check_word(y)?;
    if !code.is_codeword(c)? {
        return Err(Error::Precondition("transmitted word is not a codeword".into()));
    }
    Ok(())
}

/// Checks all witness constraints; returns the first violation, if any.
pub fn check_polytope(code: &ExpanderCode, c: &Word, y: &Word, w: &DualWitness) -> Result<Option<Violation>> {
    check_pair(code, c, y)?;
    let graph = code.graph();
    let qn = code.field().order();
    if w.q != qn || w.num_edges != code.length() || w.tau.len() != 2 * qn * code.length() {
        return Err(Error::LengthMismatch { expected: 2 * qn * code.length(), got: w.tau.len() });
    }
    if w.epsilon <= Q::zero() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    // strict edge constraints first, then weak ones, then the local ones
    for strict in [true, false] {
        for e in 0..graph.num_edges() {
            let (a, b) = graph.endpoints(e);
            for alpha in 0..qn {
                if (alpha != c.0[e] as usize) != strict {
                    continue;
                }
                let gamma = Q::from_integer(if alpha == y.0[e] as usize { -1 } else { 1 });
                let lhs = w.tau_at(graph, a, e, alpha) + w.tau_at(graph, b, e, alpha);
                let (rhs, constraint) = if strict {
                    (gamma - w.epsilon, Constraint::EdgeStrict)
                } else {
                    (gamma, Constraint::EdgeWeak)
                };
                if lhs > rhs {
                    return Ok(Some(Violation {
                        constraint,
                        edge: Some(e),
                        symbol: Some(alpha),
                        vertex: None,
                        local_codeword: None,
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    }));
                }
            }
        }
    }
    for v in 0..graph.num_vertices() {
        let incident = graph.incident(v);
        let rhs = -w.sigma[v];
        let expected_sigma = q(graph.delta() as i64, 2)
            - Q::from_integer(hamming_distance(&code.restrict(y, v), &code.restrict(c, v)) as i64);
        if w.sigma[v] != expected_sigma {
            return Err(Error::Internal(format!("sigma at vertex {v} inconsistent with (c, y)")));
        }
        for (bi, word) in code.local_codewords(v).iter().enumerate() {
            let lhs: Q = incident
                .iter()
                .zip(word)
                .map(|(&e, &s)| w.tau_at(graph, v, e, s as usize))
                .fold(Q::zero(), |acc, t| acc + t);
            if lhs < rhs {
                return Ok(Some(Violation {
                    constraint: Constraint::LocalCodeword,
                    edge: None,
                    symbol: None,
                    vertex: Some(v),
                    local_codeword: Some(bi),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                }));
            }
        }
    }
    Ok(None)
}

/// Builds `τ` given, for each error edge, the endpoint receiving `-5/2 - ε`.
/// No check is made that this endpoint choice yields a feasible witness.
pub fn assign_tau(
    code: &ExpanderCode,
    c: &Word,
    y: &Word,
    epsilon: Q,
    mut charged_endpoint: impl FnMut(usize) -> Result<usize>,
) -> Result<DualWitness> {
    check_pair(code, c, y)?;
    let graph = code.graph();
    let qn = code.field().order();
    let mut w = DualWitness::zero(code, c, y, epsilon);
    let half = q(1, 2);
    for e in 0..graph.num_edges() {
        let (a, b) = graph.endpoints(e);
        let ce = c.0[e] as usize;
        if c.0[e] == y.0[e] {
            for alpha in 0..qn {
                let t = if alpha == ce { -half } else { half - epsilon };
                w.set(graph, a, e, alpha, t);
                w.set(graph, b, e, alpha, t);
            }
        } else {
            let v = charged_endpoint(e)?;
            if v != a && v != b {
                return Err(Error::Internal(format!("vertex {v} is not an endpoint of edge {e}")));
            }
            let u = if v == a { b } else { a };
            for alpha in 0..qn {
                if alpha == ce {
                    w.set(graph, v, e, alpha, half);
                    w.set(graph, u, e, alpha, half);
                } else {
                    w.set(graph, v, e, alpha, q(-5, 2) - epsilon);
                    w.set(graph, u, e, alpha, q(3, 2));
                }
            }
        }
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelingTrace {
    /// `E₁`, the error edges.
    pub error_edges: Vec<usize>,
    /// `V₀, V₁, …`; even indices lie in A, odd in B.
    pub vertex_sets: Vec<Vec<usize>>,
    /// `E₁, E₂, …` stored at positions `0, 1, …`.
    pub edge_sets: Vec<Vec<usize>>,
    pub terminated_empty: bool,
    /// Index `t` of the last computed edge set `E_t`.
    pub final_index: usize,
}

impl PeelingTrace {
    /// `E_i` for `i ≥ 1`.
    pub fn edge_set(&self, i: usize) -> &[usize] {
        &self.edge_sets[i - 1]
    }
}

fn degree_in(graph: &TannerGraph, v: usize, member: &[bool]) -> usize {
    graph.incident(v).iter().filter(|&&e| member[e]).count()
}

fn mask(len: usize, items: &[usize]) -> Vec<bool> {
    let mut m = vec![false; len];
    for &i in items {
        m[i] = true;
    }
    m
}

/// Peels the error edges of `y` relative to `c` with thresholds `δ_AΔ/4`
/// (even steps) and `δ_BΔ/4` (odd steps). Stops when an edge set is empty or
/// the state `(V_{i-1}, V_i, E_i)` repeats the one two steps earlier, after
/// which nothing can change.
pub fn peel(code: &ExpanderCode, c: &Word, y: &Word) -> Result<PeelingTrace> {
    check_pair(code, c, y)?;
    let graph = code.graph();
    let delta = graph.delta() as i64;
    let threshold = |side: Side| code.relative_distance(side) * Q::from_integer(delta) / Q::from_integer(4);
    let (thr_a, thr_b) = (threshold(Side::A), threshold(Side::B));
    let error_edges = y.support_of_difference(c);
    let mut v0: Vec<usize> = error_edges.iter().map(|&e| graph.endpoints(e).0).collect();
    let mut v1: Vec<usize> = error_edges.iter().map(|&e| graph.endpoints(e).1).collect();
    v0.sort_unstable();
    v0.dedup();
    v1.sort_unstable();
    v1.dedup();
    let mut vertex_sets = vec![v0, v1];
    let mut edge_sets = vec![error_edges.clone()];
    let mut i = 1;
    loop {
        if edge_sets[i - 1].is_empty() {
            return Ok(PeelingTrace { error_edges, vertex_sets, edge_sets, terminated_empty: true, final_index: i });
        }
        if i >= 3 && edge_sets[i - 1] == edge_sets[i - 3] && vertex_sets[i] == vertex_sets[i - 2] && vertex_sets[i - 1] == vertex_sets[i - 3] {
            return Ok(PeelingTrace { error_edges, vertex_sets, edge_sets, terminated_empty: false, final_index: i });
        }
        // compute V_{i+1} from V_{i-1} and E_i, then E_{i+1}
        let next = i + 1;
        let thr = if next % 2 == 0 { thr_a } else { thr_b };
        let current = mask(graph.num_edges(), &edge_sets[i - 1]);
        let vnext: Vec<usize> = vertex_sets[next - 2]
            .iter()
            .copied()
            .filter(|&v| Q::from_integer(degree_in(graph, v, &current) as i64) >= thr)
            .collect();
        let in_next = mask(graph.num_vertices(), &vnext);
        let in_i = mask(graph.num_vertices(), &vertex_sets[i]);
        let enext: Vec<usize> = edge_sets[i - 1]
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = graph.endpoints(e);
                (in_next[a] && in_i[b]) || (in_next[b] && in_i[a])
            })
            .collect();
        vertex_sets.push(vnext);
        edge_sets.push(enext);
        i = next;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorCore {
    pub edges: Vec<usize>,
    pub vertices_a: Vec<usize>,
    pub vertices_b: Vec<usize>,
    pub zeta_a: String,
    pub zeta_b: String,
}

/// Extracts the fixed point of a stagnated peel and certifies that every
/// endpoint in A (B) meets at least `ζ_AΔ` (`ζ_BΔ`) of its edges.
pub fn find_error_core(graph: &TannerGraph, trace: &PeelingTrace, zeta_a: Q, zeta_b: Q) -> Result<Option<ErrorCore>> {
    if trace.terminated_empty {
        return Ok(None);
    }
    let edges = trace.edge_set(trace.final_index).to_vec();
    let member = mask(graph.num_edges(), &edges);
    let mut va: Vec<usize> = edges.iter().map(|&e| graph.endpoints(e).0).collect();
    let mut vb: Vec<usize> = edges.iter().map(|&e| graph.endpoints(e).1).collect();
    va.sort_unstable();
    va.dedup();
    vb.sort_unstable();
    vb.dedup();
    let delta = Q::from_integer(graph.delta() as i64);
    for (set, zeta) in [(&va, zeta_a), (&vb, zeta_b)] {
        for &v in set {
            let d = degree_in(graph, v, &member);
            if Q::from_integer(d as i64) < zeta * delta {
                return Err(Error::Internal(format!(
                    "stagnated peel has vertex {v} with only {d} core edges, below {}",
                    zeta * delta
                )));
            }
        }
    }
    Ok(Some(ErrorCore { edges, vertices_a: va, vertices_b: vb, zeta_a: zeta_a.to_string(), zeta_b: zeta_b.to_string() }))
}

/// For each error edge, the endpoint at which peeling removed it: with `i*`
/// the last index such that `e ∈ E_{i*}`, the endpoint lying in `V_{i*-1}`.
pub fn peel_charged_endpoints(graph: &TannerGraph, trace: &PeelingTrace) -> Result<Vec<Option<usize>>> {
    if !trace.terminated_empty {
        return Err(Error::WitnessUnavailable("peeling stagnated on a nonempty edge set".into()));
    }
    let mut charged = vec![None; graph.num_edges()];
    for i in 1..trace.final_index {
        for &e in trace.edge_set(i) {
            let (a, b) = graph.endpoints(e);
            charged[e] = Some(if (i - 1) % 2 == 0 { a } else { b });
        }
    }
    Ok(charged)
}

pub fn build_witness_from_peeling(
    code: &ExpanderCode,
    c: &Word,
    y: &Word,
    trace: &PeelingTrace,
    epsilon: Q,
) -> Result<DualWitness> {
    let charged = peel_charged_endpoints(code.graph(), trace)?;
    assign_tau(code, c, y, epsilon, |e| {
        charged[e].ok_or_else(|| Error::Internal(format!("error edge {e} missing from the peeling trace")))
    })
}

/// Caps `θ_AΔ/4`, `θ_BΔ/4` used by the orientation witness.
pub fn orientation_caps(code: &ExpanderCode) -> Result<(usize, usize)> {
    let delta = code.graph().delta();
    let cap = |side: Side| -> Result<usize> {
        let theta = crate::expander_code::compute_theta(code.relative_distance(side), delta)?;
        Ok((theta * Q::from_integer(delta as i64) / Q::from_integer(4)).to_integer() as usize)
    };
    Ok((cap(Side::A)?, cap(Side::B)?))
}

/// Witness whose error edges charge their head vertex. The orientation must
/// cover exactly the error edges and respect caps no larger than
/// [`orientation_caps`].
pub fn build_witness_from_orientation(
    code: &ExpanderCode,
    c: &Word,
    y: &Word,
    o: &OrientedEdgeSet,
    epsilon: Q,
) -> Result<DualWitness> {
    check_pair(code, c, y)?;
    let graph = code.graph();
    let mut errors = y.support_of_difference(c);
    errors.sort_unstable();
    let mut covered = o.edges.clone();
    covered.sort_unstable();
    if covered != errors {
        return Err(Error::Precondition("orientation does not cover exactly the error edges".into()));
    }
    let (cap_a, cap_b) = orientation_caps(code)?;
    if o.cap_a > cap_a || o.cap_b > cap_b {
        return Err(Error::Precondition(format!(
            "orientation caps ({}, {}) exceed the admissible ({cap_a}, {cap_b})",
            o.cap_a, o.cap_b
        )));
    }
    if !orientation::verify_orientation(graph, o) {
        return Err(Error::Precondition("orientation violates its indegree caps".into()));
    }
    let mut head = vec![None; graph.num_edges()];
    for i in 0..o.edges.len() {
        head[o.edges[i]] = Some(o.arc(graph, i).1);
    }
    assign_tau(code, c, y, epsilon, |e| head[e].ok_or_else(|| Error::Internal(format!("edge {e} not oriented"))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    Peel,
    Orient,
}

impl FromStr for CertifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "peel" => Ok(CertifyMode::Peel),
            "orient" => Ok(CertifyMode::Orient),
            other => Err(Error::Parse(format!("unknown certify mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub witness_found: bool,
    pub mode: CertifyMode,
    /// The ε at which the witness passed, as a float.
    pub epsilon: Option<f64>,
    pub core: Option<ErrorCore>,
    /// Why no witness was produced, when none was.
    pub reason: Option<String>,
    #[serde(skip)]
    pub witness: Option<DualWitness>,
}

/// Builds a witness in the chosen mode, shrinking ε along the schedule until
/// it checks.
pub fn certify(code: &ExpanderCode, c: &Word, y: &Word, mode: CertifyMode) -> Result<Certification> {
    certify_from(code, c, y, mode, epsilon_start())
}

/// As [`certify`], with the schedule starting at `epsilon`.
pub fn certify_from(code: &ExpanderCode, c: &Word, y: &Word, mode: CertifyMode, epsilon: Q) -> Result<Certification> {
    check_pair(code, c, y)?;
    if epsilon <= Q::zero() {
        return Err(Error::Domain("epsilon must be positive".into()));
    }
    let graph = code.graph();
    let quarter = |side: Side| code.relative_distance(side) / Q::from_integer(4);
    let trace = peel(code, c, y)?;
    let core = find_error_core(graph, &trace, quarter(Side::A), quarter(Side::B))?;
    let not_found = |reason: String, core: Option<ErrorCore>| Certification {
        witness_found: false,
        mode,
        epsilon: None,
        core,
        reason: Some(reason),
        witness: None,
    };
    let orientation = match mode {
        CertifyMode::Peel => {
            if !trace.terminated_empty {
                return Ok(not_found("peeling stagnated".into(), core));
            }
            None
        }
        CertifyMode::Orient => {
            let (cap_a, cap_b) = match orientation_caps(code) {
                Ok(caps) => caps,
                Err(e) => return Ok(not_found(e.to_string(), core)),
            };
            match orientation::orient(graph, &y.support_of_difference(c), cap_a, cap_b)? {
                orientation::OrientOutcome::Oriented(o) => Some(o),
                orientation::OrientOutcome::Failed(f) => {
                    return Ok(not_found(format!("no orientation; {} residual violations", f.residual_violations), core));
                }
            }
        }
    };
    for eps in epsilon_schedule_from(epsilon) {
        let w = match &orientation {
            None => build_witness_from_peeling(code, c, y, &trace, eps)?,
            Some(o) => build_witness_from_orientation(code, c, y, o, eps)?,
        };
        if check_polytope(code, c, y, &w)?.is_none() {
            return Ok(Certification {
                witness_found: true,
                mode,
                epsilon: eps.to_f64(),
                core,
                reason: None,
                witness: Some(w),
            });
        }
    }
    Ok(not_found("witness failed the check at every epsilon".into(), core))
}
