//! Dense linear algebra over GF(q): row reduction, rank, null spaces.

use crate::gf::{Field, Symbol};

pub type Matrix = Vec<Vec<Symbol>>;

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(field: &Field, rows: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                if p != 0 {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &Matrix, ncols: usize) -> usize {
    let mut m = rows.clone();
    rref(field, &mut m, ncols).len()
}

/// Basis of `{x : rows * x^T = 0}`.
pub fn null_space(field: &Field, rows: &Matrix, ncols: usize) -> Matrix {
    let mut m = rows.clone();
    let pivots = rref(field, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0 as Symbol; ncols];
        v[free] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Linear combination `sum_i coeffs[i] * rows[i]`.
pub fn combine(field: &Field, rows: &Matrix, coeffs: &[Symbol], ncols: usize) -> Vec<Symbol> {
    let mut out = vec![0 as Symbol; ncols];
    for (row, &c) in rows.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}

/// Visits every vector of `len` symbols in base-q counting order (first
/// coordinate fastest) until `visit` returns false.
pub fn for_each_vector(q: usize, len: usize, mut visit: impl FnMut(&[Symbol]) -> bool) {
    let mut v = vec![0 as Symbol; len];
    loop {
        if !visit(&v) {
            return;
        }
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            if (v[i] as usize) + 1 < q {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// `q^k` as u128, saturating.
pub fn count_words(q: usize, k: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..k {
        c = c.saturating_mul(q as u128);
    }
    c
}
