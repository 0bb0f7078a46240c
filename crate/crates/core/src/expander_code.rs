//! The global expander code and its analytic bounds.
//!
//! A word `z` is indexed by the global edge order of the graph. Its restriction
//! `(z)_{E(v)}` lists the symbols of the edges incident with `v` in increasing
//! edge index; that restriction must lie in `C_A` for `v ∈ A` and in `C_B` for
//! `v ∈ B`.

use std::fmt;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};
use crate::linalg::{self, Matrix};
use crate::linear_code::{self, LocalCode, DEFAULT_ENUMERATION_CAP};
use crate::tanner_graph::{Side, TannerGraph};

/// Default cap on global codeword enumeration.
pub const DEFAULT_GLOBAL_CAP: u128 = 1 << 16;

/// A word of length `|E|` in global edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn zeros(len: usize) -> Word {
        Word(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn distance(&self, other: &Word) -> usize {
        linear_code::hamming_distance(&self.0, &other.0)
    }

    /// Edges where the two words differ.
    pub fn support_of_difference(&self, other: &Word) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] != other.0[i]).collect()
    }

    /// Parses one line of space-separated element indices.
    pub fn from_text(text: &str, field: &Field) -> Result<Word> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| Error::Parse("empty word file".into()))?;
        linear_code::parse_numbers(line)?
            .into_iter()
            .map(|x| field.check_symbol(x as u32))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn to_text(&self) -> String {
        format!("{}\n", linear_code::join(&self.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&linear_code::join(&self.0))
    }
}

#[derive(Debug, Clone)]
pub struct ExpanderCode {
    graph: TannerGraph,
    code_a: LocalCode,
    code_b: LocalCode,
    field: Field,
    words_a: Vec<Vec<Symbol>>,
    words_b: Vec<Vec<Symbol>>,
}

impl ExpanderCode {
    pub fn new(graph: TannerGraph, code_a: LocalCode, code_b: LocalCode) -> Result<ExpanderCode> {
        let delta = graph.delta();
        for (name, c) in [("C_A", &code_a), ("C_B", &code_b)] {
            if c.length() != delta {
                return Err(Error::InvalidCode(format!("{name} has length {} but delta is {delta}", c.length())));
            }
        }
        if code_a.field() != code_b.field() {
            return Err(Error::SpecMismatch("C_A and C_B are over different fields".into()));
        }
        let field = code_a.field().clone();
        let words_a = code_a.enumerate_codewords(DEFAULT_ENUMERATION_CAP)?;
        let words_b = code_b.enumerate_codewords(DEFAULT_ENUMERATION_CAP)?;
        Ok(ExpanderCode { graph, code_a, code_b, field, words_a, words_b })
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code_a(&self) -> &LocalCode {
        &self.code_a
    }

    pub fn code_b(&self) -> &LocalCode {
        &self.code_b
    }

    pub fn length(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn local_code(&self, v: usize) -> &LocalCode {
        match self.graph.side(v) {
            Side::A => &self.code_a,
            Side::B => &self.code_b,
        }
    }

    /// Enumerated codewords of the local code at `v`, in
    /// [`LocalCode::enumerate_codewords`] order.
    pub fn local_codewords(&self, v: usize) -> &[Vec<Symbol>] {
        match self.graph.side(v) {
            Side::A => &self.words_a,
            Side::B => &self.words_b,
        }
    }

    /// Exact relative distance of the local code on `side`.
    pub fn relative_distance(&self, side: Side) -> Ratio<i64> {
        match side {
            Side::A => self.code_a.relative_distance(),
            Side::B => self.code_b.relative_distance(),
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.len() != self.length() {
            return Err(Error::LengthMismatch { expected: self.length(), got: w.len() });
        }
        for &s in w.symbols() {
            self.field.check_symbol(s as u32)?;
        }
        Ok(())
    }

    /// `(z)_{E(v)}`.
    pub fn restrict(&self, w: &Word, v: usize) -> Vec<Symbol> {
        self.graph.incident(v).iter().map(|&e| w.0[e]).collect()
    }

    pub fn is_codeword(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        for v in 0..self.graph.num_vertices() {
            if !self.local_code(v).contains(&self.restrict(w, v))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parity-check matrix of the global code: each vertex contributes its
    /// local parity-check rows on the columns `E(v)`.
    pub fn global_parity_check(&self) -> Matrix {
        let m = self.length();
        let mut rows = Vec::new();
        for v in 0..self.graph.num_vertices() {
            let inc = self.graph.incident(v);
            for h in self.local_code(v).parity_check() {
                let mut row = vec![0; m];
                for (&e, &x) in inc.iter().zip(h) {
                    row[e] = x;
                }
                rows.push(row);
            }
        }
        rows
    }

    /// A basis of the global code.
    pub fn basis(&self) -> Matrix {
        linalg::null_space(&self.field, &self.global_parity_check(), self.length())
    }

    pub fn dimension(&self) -> usize {
        self.basis().len()
    }

    /// Every global codeword, zero word first.
    pub fn enumerate_codewords(&self, cap: u128) -> Result<Vec<Word>> {
        let basis = self.basis();
        let count = linalg::count_words(self.field.order(), basis.len());
        if count > cap {
            return Err(Error::EnumerationTooLarge { count, cap });
        }
        let mut out = Vec::with_capacity(count as usize);
        linalg::for_each_vector(self.field.order(), basis.len(), |coeffs| {
            out.push(Word(linalg::combine(&self.field, &basis, coeffs, self.length())));
            true
        });
        Ok(out)
    }

    /// Exact minimum weight of a nonzero global codeword.
    pub fn brute_force_min_distance(&self, cap: u128) -> Result<usize> {
        self.enumerate_codewords(cap)?
            .iter()
            .skip(1)
            .map(|w| linear_code::weight(&w.0))
            .min()
            .ok_or_else(|| Error::Domain("the global code is {0}".into()))
    }

    /// A uniformly random codeword drawn from the span of `basis`.
    pub fn random_codeword(&self, basis: &Matrix, rng: &mut impl Rng) -> Word {
        let q = self.field.order();
        let coeffs: Vec<Symbol> = (0..basis.len()).map(|_| rng.random_range(0..q) as Symbol).collect();
        Word(linalg::combine(&self.field, basis, &coeffs, self.length()))
    }

    /// Adds a uniformly placed error of exactly `weight` nonzero offsets.
    pub fn add_random_error(&self, c: &Word, weight: usize, rng: &mut impl Rng) -> Result<Word> {
        if weight > c.len() {
            return Err(Error::Domain(format!("error weight {weight} exceeds length {}", c.len())));
        }
        let q = self.field.order();
        let support = rand::seq::index::sample(rng, c.len(), weight);
        let mut y = c.clone();
        for e in support.iter() {
            let offset = rng.random_range(1..q) as Symbol;
            y.0[e] = self.field.add(y.0[e], offset);
        }
        Ok(y)
    }

    /// All analytic quantities for this code, each computed independently.
    /// Requires the graph spectrum.
    pub fn bounds_report(&self) -> Result<BoundReport> {
        let gamma = self.graph.gamma()?;
        let delta = self.graph.delta();
        let size = (self.length()) as f64;
        let da = self.code_a.relative_distance();
        let db = self.code_b.relative_distance();
        let (fa, fb) = (ratio_f64(da), ratio_f64(db));
        let distance = distance_bound(fa, fb, gamma);
        let peel_frac = correctable_fraction_peeling(fa, fb, gamma);
        let theta_a = compute_theta(da, delta);
        let theta_b = compute_theta(db, delta);
        let orient_frac = match (&theta_a, &theta_b) {
            (Ok(ta), Ok(tb)) => correctable_fraction_orientation(ratio_f64(*ta), ratio_f64(*tb), gamma),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        Ok(BoundReport {
            n: self.graph.n(),
            delta,
            num_edges: self.length(),
            q: self.field.order(),
            gamma,
            delta_a: da.to_string(),
            delta_b: db.to_string(),
            rate_a: self.code_a.relative_rate().to_string(),
            rate_b: self.code_b.relative_rate().to_string(),
            distance_lower_bound: Outcome::from(distance.clone().map(|d| d.value)),
            distance_bound_positive: distance.as_ref().is_ok_and(|d| d.positive),
            rate_lower_bound: ratio_f64(self.code_a.relative_rate() + self.code_b.relative_rate()) - 1.0,
            peeling_fraction: Outcome::from(peel_frac.clone()),
            peeling_max_errors: Outcome::from(peel_frac.map(|f| f * size)),
            theta_a: Outcome::from(theta_a.map(|t| t.to_string())),
            theta_b: Outcome::from(theta_b.map(|t| t.to_string())),
            orientation_fraction: Outcome::from(orient_frac.clone()),
            orientation_max_errors: Outcome::from(orient_frac.map(|f| f * size)),
        })
    }
}

pub fn ratio_f64(r: Ratio<i64>) -> f64 {
    r.to_f64().expect("finite ratio")
}

/// A value or the reason it is unavailable.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Value(T),
    Unavailable(String),
}

impl<T> From<Result<T>> for Outcome<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(e) => Outcome::Unavailable(e.to_string()),
        }
    }
}

impl<T: Clone> Outcome<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            Outcome::Value(v) => Some(v.clone()),
            Outcome::Unavailable(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub delta: usize,
    pub num_edges: usize,
    pub q: usize,
    pub gamma: f64,
    pub delta_a: String,
    pub delta_b: String,
    pub rate_a: String,
    pub rate_b: String,
    pub distance_lower_bound: Outcome<f64>,
    pub distance_bound_positive: bool,
    pub rate_lower_bound: f64,
    pub peeling_fraction: Outcome<f64>,
    pub peeling_max_errors: Outcome<f64>,
    pub theta_a: Outcome<String>,
    pub theta_b: Outcome<String>,
    pub orientation_fraction: Outcome<f64>,
    pub orientation_max_errors: Outcome<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBound {
    pub value: f64,
    /// False when `γ ≥ √(δ_Aδ_B)`, i.e. the bound says nothing.
    pub positive: bool,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    Ok(())
}

fn check_fraction(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("{name} must lie in (0, 1], got {x}")));
    }
    Ok(())
}

/// `(xy - γ√(xy)) / (1 - γ)`, shared by the distance, core-size and
/// orientation bounds.
fn expander_product(x: f64, y: f64, gamma: f64) -> f64 {
    let p = x * y;
    (p - gamma * p.sqrt()) / (1.0 - gamma)
}

/// Lower bound on the relative minimum distance of the global code.
pub fn distance_bound(delta_a: f64, delta_b: f64, gamma: f64) -> Result<DistanceBound> {
    check_fraction("delta_a", delta_a)?;
    check_fraction("delta_b", delta_b)?;
    check_gamma(gamma)?;
    let value = expander_product(delta_a, delta_b, gamma);
    Ok(DistanceBound { value, positive: value > 0.0 })
}

/// Relative error weight below which no `(ζ_A, ζ_B)`-error core can exist;
/// requires `γ ≤ √(ζ_Aζ_B)`.
pub fn core_free_fraction(zeta_a: f64, zeta_b: f64, gamma: f64) -> Result<f64> {
    check_fraction("zeta_a", zeta_a)?;
    check_fraction("zeta_b", zeta_b)?;
    check_gamma(gamma)?;
    if gamma > (zeta_a * zeta_b).sqrt() {
        return Err(Error::Domain(format!("gamma {gamma} exceeds sqrt(zeta_a zeta_b)")));
    }
    Ok(expander_product(zeta_a, zeta_b, gamma))
}

/// Relative edge-set size below which an orientation with A-caps `ρ_AΔ/2`
/// and B-caps `ρ_BΔ/2` always exists; requires `γ ≤ √(ρ_Aρ_B)`.
pub fn orientable_fraction(rho_a: f64, rho_b: f64, gamma: f64) -> Result<f64> {
    core_free_fraction(rho_a, rho_b, gamma)
}

/// Fraction of errors corrected by the peeling witness argument; requires
/// `γ ≤ √(δ_Aδ_B)/4`.
pub fn correctable_fraction_peeling(delta_a: f64, delta_b: f64, gamma: f64) -> Result<f64> {
    check_fraction("delta_a", delta_a)?;
    check_fraction("delta_b", delta_b)?;
    check_gamma(gamma)?;
    let limit = (delta_a * delta_b).sqrt() / 4.0;
    if gamma > limit {
        return Err(Error::Domain(format!(
            "gamma {gamma} exceeds sqrt(delta_a delta_b)/4 = {limit}; the guarantee does not apply"
        )));
    }
    Ok(expander_product(delta_a / 4.0, delta_b / 4.0, gamma))
}

/// Largest `θ < δ` with `θΔ/4` a positive integer: `θ = 4m/Δ`.
pub fn compute_theta(delta: Ratio<i64>, delta_len: usize) -> Result<Ratio<i64>> {
    if delta_len == 0 || delta <= Ratio::from_integer(0) || delta > Ratio::from_integer(1) {
        return Err(Error::Domain(format!("need delta in (0, 1] and positive length, got {delta}, {delta_len}")));
    }
    // 4m/Δ < δ  <=>  m < δΔ/4
    let bound = delta * Ratio::from_integer(delta_len as i64) / Ratio::from_integer(4);
    let m = bound.ceil().to_integer() - 1;
    if m < 1 {
        return Err(Error::NoValidTheta { delta: delta.to_string(), delta_len });
    }
    Ok(Ratio::new(4 * m, delta_len as i64))
}

/// Fraction of errors corrected by the orientation witness argument;
/// requires `γ ≤ √(θ_Aθ_B)/2`.
pub fn correctable_fraction_orientation(theta_a: f64, theta_b: f64, gamma: f64) -> Result<f64> {
    check_fraction("theta_a", theta_a)?;
    check_fraction("theta_b", theta_b)?;
    check_gamma(gamma)?;
    let s = (theta_a * theta_b).sqrt();
    if gamma > s / 2.0 {
        return Err(Error::Domain(format!(
            "gamma {gamma} exceeds sqrt(theta_a theta_b)/2 = {}; the guarantee does not apply",
            s / 2.0
        )));
    }
    Ok((theta_a * theta_b - 2.0 * gamma * s) / (4.0 * (1.0 - gamma)))
}

pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Inverse of the binary entropy on `[0, 1/2]` by bisection to `1e-12`.
pub fn inverse_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!("entropy value {h} outside [0, 1]")));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Local-code family assumed by the correctable-fraction tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableRegime {
    /// Binary local codes meeting the entropy bound `r = 1 - H₂(δ)`.
    BinaryEntropy,
    /// Generalized Reed-Solomon local codes, `δ = 1 - r`.
    Grs,
}

/// Correctable fraction `δ²/4` for a global code of rate `rate`, with local
/// rate `r = (1 + R)/2`.
pub fn table_fraction(rate: f64, regime: TableRegime) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Domain(format!("rate must lie in (0, 1), got {rate}")));
    }
    let local_rate = (1.0 + rate) / 2.0;
    let delta = match regime {
        TableRegime::BinaryEntropy => inverse_binary_entropy(1.0 - local_rate)?,
        TableRegime::Grs => 1.0 - local_rate,
    };
    Ok(delta * delta / 4.0)
}
