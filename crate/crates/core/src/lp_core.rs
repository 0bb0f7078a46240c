//! Dense two-phase primal simplex for `max cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Entering columns follow Dantzig's rule with a two-pass (Harris) ratio
//! test. A run of degenerate pivots longer than
//! [`SolverOptions::degenerate_threshold`] switches the phase to Bland's rule
//! until the next nondegenerate pivot.
//!
//! Decoder programs are massively degenerate, so the solver first shifts the
//! lower bounds to `x ≥ -δ` for small pseudo-random `δ`, i.e. replaces `b` by
//! `b + Aδ`. That right-hand side stays in the range of `A`, so redundant rows
//! remain consistent. The tableau carries `B⁻¹b` for the unshifted `b` in a
//! second right-hand-side column; at the shifted optimum any slightly negative
//! basic value is repaired by dual simplex pivots, which keep the basis dual
//! feasible, and the reported point is a vertex of the original program.
//!
//! Artificial columns are never stored: a nonbasic artificial cannot
//! re-enter, and a basic one is an implicit unit column.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Coefficients of the objective to maximize.
    pub objective: Vec<f64>,
    /// Equality rows `(coefficients, rhs)`.
    pub rows: Vec<(Vec<f64>, f64)>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> LpProblem {
        LpProblem { num_vars, objective: vec![0.0; num_vars], rows: Vec::new() }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::LengthMismatch { expected: self.num_vars, got: coeffs.len() });
        }
        self.rows.push((coeffs, rhs));
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::LengthMismatch { expected: self.num_vars, got: self.objective.len() });
        }
        for (coeffs, rhs) in &self.rows {
            if coeffs.len() != self.num_vars {
                return Err(Error::LengthMismatch { expected: self.num_vars, got: coeffs.len() });
            }
            if !rhs.is_finite() || coeffs.iter().any(|x| !x.is_finite()) {
                return Err(Error::Numeric("non-finite coefficient".into()));
            }
        }
        if self.objective.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite objective coefficient".into()));
        }
        Ok(())
    }

    /// Largest absolute equality residual of `x`.
    pub fn max_residual(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|(a, b)| (a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub opt_tol: f64,
    /// Smallest magnitude accepted as a pivot element.
    pub pivot_tol: f64,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_threshold: usize,
    pub max_iterations: usize,
    /// Scale of the lower-bound shift; zero disables it.
    pub perturbation: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feas_tol: 1e-8,
            opt_tol: 1e-9,
            pivot_tol: 1e-9,
            degenerate_threshold: 50,
            max_iterations: 1_000_000,
            perturbation: 1e-6,
        }
    }
}

const ZERO_CLEAN: f64 = 1e-11;
/// Entries below this in a zero-level artificial row are treated as
/// round-off, and the row as redundant.
const REDUNDANCY_TOL: f64 = 1e-7;
const PERTURBATION_SEED: u64 = 0x51_3b_1e_c0_de;

struct Tableau {
    /// Row-major `m x (n + 2)`: structural columns, the working right-hand
    /// side, then `B⁻¹b` for the unshifted `b`.
    data: Vec<f64>,
    width: usize,
    m: usize,
    n: usize,
    /// Basic variable per row; `>= n` means the artificial of that row.
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_Bᵀ B⁻¹ A_j` of the structural columns.
    reduced: Vec<f64>,
    iterations: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.n]
    }

    fn rhs_orig(&self, i: usize) -> f64 {
        self.data[i * self.width + self.n + 1]
    }

    fn set_reduced_costs(&mut self, costs: &[f64]) {
        let mut reduced = costs.to_vec();
        for i in 0..self.m {
            let b = self.basis[i];
            let cb = if b < self.n { costs[b] } else { 0.0 };
            if cb == 0.0 {
                continue;
            }
            let row = &self.data[i * self.width..i * self.width + self.n];
            for (r, &a) in reduced.iter_mut().zip(row) {
                *r -= cb * a;
            }
        }
        for (j, r) in reduced.iter_mut().enumerate() {
            if self.basis.contains(&j) || r.abs() < ZERO_CLEAN {
                *r = 0.0;
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.width;
        let p = self.at(r, j);
        {
            let row = &mut self.data[r * w..(r + 1) * w];
            for x in row.iter_mut() {
                *x /= p;
            }
            row[j] = 1.0;
        }
        let nz: Vec<usize> = (0..w).filter(|&k| self.data[r * w + k] != 0.0).collect();
        let pivot_row: Vec<f64> = nz.iter().map(|&k| self.data[r * w + k]).collect();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + j];
            if factor == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (&k, &pv) in nz.iter().zip(&pivot_row) {
                let v = row[k] - factor * pv;
                row[k] = if v.abs() < ZERO_CLEAN { 0.0 } else { v };
            }
            row[j] = 0.0;
        }
        let factor = self.reduced[j];
        if factor != 0.0 {
            for (&k, &pv) in nz.iter().zip(&pivot_row) {
                if k < self.n {
                    let v = self.reduced[k] - factor * pv;
                    self.reduced[k] = if v.abs() < ZERO_CLEAN { 0.0 } else { v };
                }
            }
            self.reduced[j] = 0.0;
        }
        self.basis[r] = j;
        self.iterations += 1;
    }

    fn check_budget(&self, opts: &SolverOptions) -> Result<()> {
        if self.iterations >= opts.max_iterations {
            return Err(Error::Numeric(format!("simplex exceeded {} iterations", opts.max_iterations)));
        }
        Ok(())
    }

    fn run_phase(&mut self, opts: &SolverOptions) -> Result<PhaseEnd> {
        let mut degenerate_run = 0usize;
        loop {
            self.check_budget(opts)?;
            let bland = degenerate_run > opts.degenerate_threshold;
            let entering = if bland {
                (0..self.n).find(|&j| self.reduced[j] > opts.opt_tol)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.n {
                    let d = self.reduced[j];
                    if d > opts.opt_tol && best.is_none_or(|(_, bd)| d > bd) {
                        best = Some((j, d));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(j) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let leave = if bland { self.ratio_test_bland(j, opts) } else { self.ratio_test_harris(j, opts) };
            let Some((r, ratio)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            if ratio <= opts.feas_tol {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, j);
        }
    }

    /// Two-pass ratio test: among rows whose ratio is within the feasibility
    /// tolerance of the minimum, take the largest pivot (lowest row on ties).
    fn ratio_test_harris(&self, j: usize, opts: &SolverOptions) -> Option<(usize, f64)> {
        let mut bound = f64::INFINITY;
        for i in 0..self.m {
            let a = self.at(i, j);
            if a > opts.pivot_tol {
                bound = bound.min((self.rhs(i).max(0.0) + opts.feas_tol) / a);
            }
        }
        if bound == f64::INFINITY {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, j);
            if a > opts.pivot_tol && self.rhs(i).max(0.0) / a <= bound && best.is_none_or(|(_, ba)| a > ba) {
                best = Some((i, a));
            }
        }
        best.map(|(i, a)| (i, self.rhs(i).max(0.0) / a))
    }

    /// Exact minimum ratio; ties go to the lowest basic variable index.
    fn ratio_test_bland(&self, j: usize, opts: &SolverOptions) -> Option<(usize, f64)> {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, j);
            if a <= opts.pivot_tol {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / a;
            let better = match leave {
                None => true,
                Some((li, lr)) => {
                    if (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs()) {
                        self.basis[i] < self.basis[li]
                    } else {
                        ratio < lr
                    }
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        leave
    }

    /// Dual simplex on the unshifted right-hand side. Returns false when a
    /// row proves the unshifted program infeasible.
    fn restore_feasibility(&mut self, opts: &SolverOptions) -> Result<bool> {
        // the working column now tracks the unshifted right-hand side
        for i in 0..self.m {
            let v = self.rhs_orig(i);
            self.data[i * self.width + self.n] = v;
        }
        loop {
            self.check_budget(opts)?;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let v = self.rhs(i);
                if v < -opts.feas_tol && leave.is_none_or(|(_, lv)| v < lv) {
                    leave = Some((i, v));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(true);
            };
            let mut enter: Option<(usize, f64, f64)> = None;
            for j in 0..self.n {
                let a = self.at(r, j);
                if a < -opts.pivot_tol {
                    let ratio = self.reduced[j].min(0.0) / a;
                    let better = match enter {
                        None => true,
                        Some((_, br, ba)) => {
                            if (ratio - br).abs() <= opts.opt_tol {
                                a.abs() > ba.abs()
                            } else {
                                ratio < br
                            }
                        }
                    };
                    if better {
                        enter = Some((j, ratio, a));
                    }
                }
            }
            let Some((j, _, _)) = enter else {
                return Ok(false);
            };
            self.pivot(r, j);
        }
    }

    fn drop_row(&mut self, r: usize) {
        let w = self.width;
        self.data.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }
}

/// Solves `max cᵀx` subject to `Ax = b`, `x ≥ 0`.
pub fn solve(problem: &LpProblem, opts: &SolverOptions) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.num_vars;
    let m = problem.rows.len();
    let width = n + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
    let shift: Vec<f64> = (0..n)
        .map(|_| if opts.perturbation > 0.0 { opts.perturbation * rng.random_range(0.5..1.0) } else { 0.0 })
        .collect();
    let mut data = vec![0.0; m * width];
    for (i, (coeffs, rhs)) in problem.rows.iter().enumerate() {
        let shifted = rhs + coeffs.iter().zip(&shift).map(|(a, d)| a * d).sum::<f64>();
        let sign = if shifted < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in coeffs.iter().enumerate() {
            data[i * width + j] = sign * a;
        }
        data[i * width + n] = sign * shifted;
        data[i * width + n + 1] = sign * rhs;
    }
    let mut t = Tableau {
        data,
        width,
        m,
        n,
        basis: (n..n + m).collect(),
        reduced: vec![0.0; n],
        iterations: 0,
    };
    let infeasible = |t: &Tableau| LpSolution {
        status: LpStatus::Infeasible,
        values: vec![0.0; n],
        objective_value: f64::NAN,
        iterations: t.iterations,
    };

    // phase 1: maximize -Σ artificials, i.e. reduced cost Σ_i a_ij
    for i in 0..m {
        for j in 0..n {
            t.reduced[j] += t.at(i, j);
        }
    }
    let scale = 1.0 + problem.rows.iter().map(|(_, b)| b.abs()).fold(0.0, f64::max);
    t.run_phase(opts)?;
    let infeasibility: f64 = (0..t.m).filter(|&i| t.basis[i] >= n).map(|i| t.rhs(i)).sum();
    if infeasibility > opts.feas_tol * scale {
        return Ok(infeasible(&t));
    }
    // drive zero-level artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.m {
        if t.basis[i] >= n {
            let col = (0..n)
                .filter(|&j| t.at(i, j).abs() > opts.pivot_tol.max(REDUNDANCY_TOL))
                .max_by(|&a, &b| t.at(i, a).abs().partial_cmp(&t.at(i, b).abs()).unwrap());
            match col {
                Some(j) => t.pivot(i, j),
                None => {
                    if t.rhs_orig(i).abs() > opts.feas_tol * scale {
                        return Ok(infeasible(&t));
                    }
                    t.drop_row(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2
    t.set_reduced_costs(&problem.objective);
    if let PhaseEnd::Unbounded = t.run_phase(opts)? {
        let values = basic_values(&t, n, Tableau::rhs);
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values,
            objective_value: f64::INFINITY,
            iterations: t.iterations,
        });
    }
    if !t.restore_feasibility(opts)? {
        return Ok(infeasible(&t));
    }
    // dual pivots can leave small positive reduced costs; finish in primal
    if let PhaseEnd::Unbounded = t.run_phase(opts)? {
        return Err(Error::Numeric("unbounded ray after feasibility repair".into()));
    }
    let mut values = basic_values(&t, n, Tableau::rhs);
    let min_value = values.iter().copied().fold(0.0, f64::min);
    let residual = problem.max_residual(&values);
    let bound = 1e3 * opts.feas_tol * scale;
    if residual > bound || min_value < -bound {
        return Err(Error::Numeric(format!(
            "basis lost accuracy: residual {residual:e}, most negative value {min_value:e}"
        )));
    }
    for v in values.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: problem.objective_value(&values),
        values,
        iterations: t.iterations,
    })
}

fn basic_values(t: &Tableau, n: usize, column: fn(&Tableau, usize) -> f64) -> Vec<f64> {
    let mut values = vec![0.0; n];
    for i in 0..t.m {
        let b = t.basis[i];
        if b < n {
            values[b] = column(t, i);
        }
    }
    values
}
