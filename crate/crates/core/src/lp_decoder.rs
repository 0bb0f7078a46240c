//! The primal LP decoder.
//!
//! Variable layout: `f_e^α` at `e·q + α`, followed by one `w_{v,b}` per vertex
//! and local codeword, vertex by vertex in vertex order.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander_code::{ExpanderCode, Word};
use crate::gf::Symbol;
use crate::lp_core::{self, LpProblem, LpStatus, SolverOptions};

pub const DEFAULT_INT_TOL: f64 = 1e-6;

/// Per-edge blocks of `q` reals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    pub q: usize,
    pub values: Vec<f64>,
}

impl Embedding {
    pub fn num_edges(&self) -> usize {
        self.values.len() / self.q
    }

    pub fn block(&self, e: usize) -> &[f64] {
        &self.values[e * self.q..(e + 1) * self.q]
    }
}

pub fn embed(z: &Word, q: usize) -> Embedding {
    let mut values = vec![0.0; z.len() * q];
    for (e, &s) in z.symbols().iter().enumerate() {
        values[e * q + s as usize] = 1.0;
    }
    Embedding { q, values }
}

/// Inverse of [`embed`]. Every block must be a 0/1 indicator within `int_tol`.
pub fn unembed(f: &Embedding, int_tol: f64) -> Result<Word> {
    let mut word = Vec::with_capacity(f.num_edges());
    for e in 0..f.num_edges() {
        let block = f.block(e);
        let mut hot = None;
        for (a, &x) in block.iter().enumerate() {
            if (x - 1.0).abs() <= int_tol {
                if hot.is_some() {
                    return Err(Error::NotIntegral { edge: e });
                }
                hot = Some(a);
            } else if x.abs() > int_tol {
                return Err(Error::NotIntegral { edge: e });
            }
        }
        match hot {
            Some(a) => word.push(a as Symbol),
            None => return Err(Error::NotIntegral { edge: e }),
        }
    }
    Ok(Word(word))
}

/// `γ_e^α = -1` if `α = y_e`, else `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostVector {
    pub q: usize,
    pub gamma: Vec<i8>,
}

impl CostVector {
    pub fn dot(&self, f: &Embedding) -> f64 {
        self.gamma.iter().zip(&f.values).map(|(&g, &x)| g as f64 * x).sum()
    }
}

pub fn cost_from_received(y: &Word, q: usize) -> CostVector {
    let mut gamma = vec![1i8; y.len() * q];
    for (e, &s) in y.symbols().iter().enumerate() {
        gamma[e * q + s as usize] = -1;
    }
    CostVector { q, gamma }
}

/// Index bookkeeping for the primal variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimalLayout {
    pub q: usize,
    pub num_edges: usize,
    /// First `w` variable of each vertex.
    pub w_offset: Vec<usize>,
    pub num_vars: usize,
}

impl PrimalLayout {
    pub fn new(code: &ExpanderCode) -> PrimalLayout {
        let q = code.field().order();
        let num_edges = code.length();
        let mut offset = num_edges * q;
        let mut w_offset = Vec::with_capacity(code.graph().num_vertices());
        for v in 0..code.graph().num_vertices() {
            w_offset.push(offset);
            offset += code.local_codewords(v).len();
        }
        PrimalLayout { q, num_edges, w_offset, num_vars: offset }
    }

    pub fn f(&self, e: usize, alpha: usize) -> usize {
        e * self.q + alpha
    }

    pub fn w(&self, v: usize, b: usize) -> usize {
        self.w_offset[v] + b
    }
}

/// Assembles the primal program: maximize `Σ -γ_e^α f_e^α` subject to one
/// normalization row per vertex and one marginalization row per
/// (edge, endpoint, symbol).
pub fn build_primal(code: &ExpanderCode, y: &Word) -> Result<(LpProblem, PrimalLayout)> {
    code.check_word(y)?;
    let layout = PrimalLayout::new(code);
    let graph = code.graph();
    let q = layout.q;
    let mut p = LpProblem::new(layout.num_vars);
    let cost = cost_from_received(y, q);
    for (i, &g) in cost.gamma.iter().enumerate() {
        p.objective[i] = -(g as f64);
    }
    for v in 0..graph.num_vertices() {
        let mut row = vec![0.0; layout.num_vars];
        for b in 0..code.local_codewords(v).len() {
            row[layout.w(v, b)] = 1.0;
        }
        p.add_row(row, 1.0)?;
    }
    for e in 0..graph.num_edges() {
        let (a, b) = graph.endpoints(e);
        for v in [a, b] {
            let pos = graph.local_position(v, e).expect("endpoint is incident");
            let words = code.local_codewords(v);
            for alpha in 0..q {
                let mut row = vec![0.0; layout.num_vars];
                row[layout.f(e, alpha)] = 1.0;
                for (bi, word) in words.iter().enumerate() {
                    if word[pos] as usize == alpha {
                        row[layout.w(v, bi)] = -1.0;
                    }
                }
                p.add_row(row, 0.0)?;
            }
        }
    }
    Ok((p, layout))
}

/// The integral point `(Ξ(c), indicator w)` of a codeword `c`.
pub fn indicator_point(code: &ExpanderCode, c: &Word) -> Result<Vec<f64>> {
    if !code.is_codeword(c)? {
        return Err(Error::Precondition("word is not a codeword".into()));
    }
    let layout = PrimalLayout::new(code);
    let mut x = vec![0.0; layout.num_vars];
    x[..layout.num_edges * layout.q].copy_from_slice(&embed(c, layout.q).values);
    for v in 0..code.graph().num_vertices() {
        let local = code.restrict(c, v);
        let b = code
            .local_codewords(v)
            .iter()
            .position(|w| *w == local)
            .ok_or_else(|| Error::Internal(format!("local word at vertex {v} not enumerated")))?;
        x[layout.w(v, b)] = 1.0;
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Codeword,
    FractionalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub codeword: Option<Word>,
    pub raw_f: Embedding,
    /// `raw_w[v][b]` is the weight of local codeword `b` at vertex `v`.
    pub raw_w: Vec<Vec<f64>>,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderOptions {
    pub solver: SolverOptions,
    pub int_tol: f64,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        DecoderOptions { solver: SolverOptions::default(), int_tol: DEFAULT_INT_TOL }
    }
}

pub fn decode(code: &ExpanderCode, y: &Word, opts: &DecoderOptions) -> Result<DecodeResult> {
    let (problem, layout) = build_primal(code, y)?;
    let sol = lp_core::solve(&problem, &opts.solver)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Internal("decoder LP reported infeasible".into())),
        LpStatus::Unbounded => return Err(Error::Internal("decoder LP reported unbounded".into())),
    }
    let nf = layout.num_edges * layout.q;
    let raw_f = Embedding { q: layout.q, values: sol.values[..nf].to_vec() };
    let raw_w = (0..code.graph().num_vertices())
        .map(|v| {
            let start = layout.w_offset[v];
            sol.values[start..start + code.local_codewords(v).len()].to_vec()
        })
        .collect();
    let integral = raw_f.values.iter().all(|&x| x.abs() <= opts.int_tol || (x - 1.0).abs() <= opts.int_tol);
    let (status, codeword) = if integral {
        let word = unembed(&raw_f, opts.int_tol)?;
        if !code.is_codeword(&word)? {
            return Err(Error::Internal("integral LP optimum is not a codeword".into()));
        }
        (DecodeStatus::Codeword, Some(word))
    } else {
        (DecodeStatus::FractionalFailure, None)
    };
    Ok(DecodeResult { status, codeword, raw_f, raw_w, objective: sol.objective_value })
}
