//! Finite-field arithmetic over GF(q), q = p^m, backed by full lookup tables.
//!
//! Elements are encoded as integers in `[0, q)`. For prime fields the index is
//! the residue itself; for extension fields the index holds the coefficients of
//! a polynomial over GF(p) as base-p digits, least significant digit first.
//!
//! ```
//! use expander_lp::gf::Field;
//!
//! let gf4 = Field::new(4).unwrap();
//! // x * x = x + 1 modulo x^2 + x + 1
//! assert_eq!(gf4.mul(2, 2), 3);
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field symbol, i.e. an element index in `[0, q)`.
pub type Symbol = u8;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 256;

/// Parameters of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub q: u16,
    pub p: u16,
    pub m: u32,
    /// Coefficients of the monic reduction polynomial, constant term first
    /// (length `m + 1`). Empty for prime fields.
    pub reduction_poly: Vec<u16>,
}

struct Tables {
    spec: FieldSpec,
    add: Vec<Symbol>,
    mul: Vec<Symbol>,
    neg: Vec<Symbol>,
    inv: Vec<Symbol>,
}

/// A finite field with precomputed arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.spec.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Built-in reduction polynomials, constant term first.
pub fn default_reduction_poly(q: u32) -> Option<Vec<u16>> {
    let poly = match q {
        4 => vec![1, 1, 1],     // x^2 + x + 1
        8 => vec![1, 1, 0, 1],  // x^3 + x + 1
        9 => vec![1, 0, 1],     // x^2 + 1 over GF(3)
        16 => vec![1, 1, 0, 0, 1], // x^4 + x + 1
        _ => return None,
    };
    Some(poly)
}

// Remainder of `a` modulo monic `b`, both over GF(p), constant term first.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * bc % p) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=m/2`.
pub fn is_irreducible(poly: &[u16], p: u16) -> bool {
    let p = p as u32;
    let a: Vec<u32> = poly.iter().map(|&c| c as u32 % p).collect();
    if a.len() < 2 || *a.last().unwrap() != 1 {
        return false;
    }
    let m = a.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut b = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                b.push(x % p);
                x /= p;
            }
            b.push(1);
            if poly_rem(&a, &b, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(q) for a prime or one of the prime powers with a built-in
    /// reduction polynomial (4, 8, 9, 16).
    pub fn new(q: u32) -> Result<Field> {
        let (p, m) = prime_power(q)
            .filter(|_| q <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power <= {MAX_ORDER}")))?;
        if m == 1 {
            return Self::build(p, Vec::new());
        }
        let poly = default_reduction_poly(q).ok_or_else(|| {
            Error::InvalidField(format!(
                "no built-in reduction polynomial for GF({q}); use Field::with_poly"
            ))
        })?;
        Self::build(p, poly)
    }

    /// Builds GF(p^m) from a user-supplied monic irreducible polynomial
    /// (constant term first, degree m >= 1).
    pub fn with_poly(p: u32, reduction_poly: Vec<u16>) -> Result<Field> {
        if prime_power(p) != Some((p, 1)) {
            return Err(Error::InvalidField(format!("characteristic {p} is not prime")));
        }
        let m = reduction_poly.len().saturating_sub(1) as u32;
        if m == 0 {
            return Err(Error::InvalidField("reduction polynomial must have degree >= 1".into()));
        }
        if (p as u64).pow(m) > MAX_ORDER as u64 {
            return Err(Error::InvalidField(format!("GF({p}^{m}) exceeds order {MAX_ORDER}")));
        }
        if reduction_poly.iter().any(|&c| c as u32 >= p) {
            return Err(Error::InvalidField("polynomial coefficient out of range".into()));
        }
        if !is_irreducible(&reduction_poly, p as u16) {
            return Err(Error::InvalidField(format!(
                "polynomial {reduction_poly:?} is not monic irreducible over GF({p})"
            )));
        }
        if m == 1 {
            return Self::build(p, Vec::new());
        }
        Self::build(p, reduction_poly)
    }

    fn build(p: u32, poly: Vec<u16>) -> Result<Field> {
        let m = if poly.is_empty() { 1 } else { poly.len() as u32 - 1 };
        let q = p.pow(m);
        let digits = |mut x: u32| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let qs = q as usize;
        let mut add = vec![0 as Symbol; qs * qs];
        let mut mul = vec![0 as Symbol; qs * qs];
        let poly32: Vec<u32> = poly.iter().map(|&c| c as u32).collect();
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum) as Symbol;
                let prod = if m == 1 {
                    a * b % p
                } else {
                    let mut c = vec![0u32; 2 * m as usize - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            c[i + j] = (c[i + j] + x * y) % p;
                        }
                    }
                    let mut r = poly_rem(&c, &poly32, p);
                    r.resize(m as usize, 0);
                    undigits(&r)
                };
                mul[(a * q + b) as usize] = prod as Symbol;
            }
        }
        let mut neg = vec![0 as Symbol; qs];
        let mut inv = vec![0 as Symbol; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as Symbol;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as Symbol;
                }
            }
        }
        let spec = FieldSpec { q: q as u16, p: p as u16, m, reduction_poly: poly };
        Ok(Field(Arc::new(Tables { spec, add, mul, neg, inv })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn order(&self) -> usize {
        self.0.spec.q as usize
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        self.0.add[a as usize * self.order() + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        self.0.mul[a as usize * self.order() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Symbol) -> Symbol {
        self.0.neg[a as usize]
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero { q: self.0.spec.q });
        }
        Ok(self.0.inv[a as usize])
    }

    pub fn pow(&self, a: Symbol, mut e: u32) -> Symbol {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn check_symbol(&self, s: u32) -> Result<Symbol> {
        if s < self.order() as u32 {
            Ok(s as Symbol)
        } else {
            Err(Error::SymbolOutOfRange { symbol: s, q: self.0.spec.q })
        }
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        Ok(FieldElement { field: self.clone(), index: self.check_symbol(index)? })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), index: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), index: 1 }
    }

    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        (0..self.order()).map(|x| x as Symbol)
    }
}

/// A field element that remembers its field, with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    index: Symbol,
}

impl FieldElement {
    pub fn index(&self) -> Symbol {
        self.index
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.field, other.field)))
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement { field: self.field.clone(), index: self.field.add(self.index, other.index) })
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement { field: self.field.clone(), index: self.field.mul(self.index, other.index) })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), index: self.field.inv(self.index)? })
    }
}
