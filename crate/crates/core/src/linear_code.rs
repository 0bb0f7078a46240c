//! Local constituent codes: short linear codes of length Δ over GF(q).

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::gf::{Field, Symbol};
use crate::linalg::{self, Matrix};

/// Default cap on the number of codewords a local code may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// Minimum Hamming distance, absolute and relative to the code length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinDistance {
    pub d: usize,
    pub relative: Ratio<i64>,
}

/// A linear `[Δ, k, d]` code over GF(q) given by a full-rank generator matrix.
#[derive(Debug, Clone)]
pub struct LocalCode {
    field: Field,
    length: usize,
    generator: Matrix,
    parity_check: Matrix,
    distance: MinDistance,
}

impl LocalCode {
    /// Builds a code from the generator rows. The rows must be linearly
    /// independent and the code small enough to enumerate.
    pub fn new(field: Field, generator: Matrix) -> Result<LocalCode> {
        Self::with_cap(field, generator, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(field: Field, generator: Matrix, cap: u128) -> Result<LocalCode> {
        let k = generator.len();
        let length = generator.first().map(Vec::len).unwrap_or(0);
        if k == 0 || length == 0 {
            return Err(Error::InvalidCode("generator must have at least one nonempty row".into()));
        }
        if k > length {
            return Err(Error::InvalidCode(format!("dimension {k} exceeds length {length}")));
        }
        for row in &generator {
            if row.len() != length {
                return Err(Error::LengthMismatch { expected: length, got: row.len() });
            }
            for &s in row {
                field.check_symbol(s as u32)?;
            }
        }
        if linalg::rank(&field, &generator, length) != k {
            return Err(Error::InvalidCode("generator rows are linearly dependent".into()));
        }
        let parity_check = linalg::null_space(&field, &generator, length);
        let mut code = LocalCode {
            field,
            length,
            generator,
            parity_check,
            distance: MinDistance { d: 0, relative: Ratio::new(0, 1) },
        };
        let d = code
            .enumerate_codewords(cap)?
            .iter()
            .skip(1)
            .map(|w| weight(w))
            .min()
            .unwrap_or(length);
        code.distance = MinDistance { d, relative: Ratio::new(d as i64, length as i64) };
        Ok(code)
    }

    /// The `[Δ, 1, Δ]` repetition code.
    pub fn repetition(field: Field, length: usize) -> Result<LocalCode> {
        Self::new(field, vec![vec![1; length]])
    }

    /// The `[Δ, Δ-1, 2]` code of words whose symbols sum to zero.
    pub fn single_parity_check(field: Field, length: usize) -> Result<LocalCode> {
        if length < 2 {
            return Err(Error::InvalidCode("parity-check code needs length >= 2".into()));
        }
        let minus_one = field.neg(1);
        let generator = (0..length - 1)
            .map(|i| {
                let mut row = vec![0; length];
                row[i] = 1;
                row[length - 1] = minus_one;
                row
            })
            .collect();
        Self::new(field, generator)
    }

    /// The whole space `F^Δ`.
    pub fn full_space(field: Field, length: usize) -> Result<LocalCode> {
        let generator = (0..length)
            .map(|i| {
                let mut row = vec![0; length];
                row[i] = 1;
                row
            })
            .collect();
        Self::new(field, generator)
    }

    /// Generalized Reed-Solomon code: row `i`, column `j` is
    /// `multipliers[j] * points[j]^i`. Defaults to points `0, 1, ..., Δ-1`
    /// (as element indices) and unit multipliers.
    pub fn generalized_reed_solomon(
        field: Field,
        length: usize,
        dimension: usize,
        points: Option<Vec<Symbol>>,
        multipliers: Option<Vec<Symbol>>,
    ) -> Result<LocalCode> {
        if field.order() < length {
            return Err(Error::InvalidCode(format!(
                "GRS code of length {length} needs q >= length, got q = {}",
                field.order()
            )));
        }
        let points = points.unwrap_or_else(|| (0..length).map(|x| x as Symbol).collect());
        let multipliers = multipliers.unwrap_or_else(|| vec![1; length]);
        if points.len() != length || multipliers.len() != length {
            return Err(Error::LengthMismatch { expected: length, got: points.len().min(multipliers.len()) });
        }
        let mut seen = vec![false; field.order()];
        for &p in &points {
            field.check_symbol(p as u32)?;
            if std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::InvalidCode("GRS evaluation points must be distinct".into()));
            }
        }
        if multipliers.contains(&0) {
            return Err(Error::InvalidCode("GRS column multipliers must be nonzero".into()));
        }
        let generator = (0..dimension)
            .map(|i| {
                points
                    .iter()
                    .zip(&multipliers)
                    .map(|(&a, &v)| field.mul(v, field.pow(a, i as u32)))
                    .collect()
            })
            .collect();
        Self::new(field, generator)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    pub fn relative_rate(&self) -> Ratio<i64> {
        Ratio::new(self.dimension() as i64, self.length as i64)
    }

    /// Cached minimum distance.
    pub fn distance(&self) -> MinDistance {
        self.distance
    }

    pub fn relative_distance(&self) -> Ratio<i64> {
        self.distance.relative
    }

    pub fn codeword_count(&self) -> u128 {
        linalg::count_words(self.field.order(), self.dimension())
    }

    fn check_cap(&self, cap: u128) -> Result<()> {
        let count = self.codeword_count();
        if count > cap {
            return Err(Error::EnumerationTooLarge { count, cap });
        }
        Ok(())
    }

    /// Encodes a length-k message.
    pub fn encode(&self, message: &[Symbol]) -> Vec<Symbol> {
        linalg::combine(&self.field, &self.generator, message, self.length)
    }

    /// All `q^k` codewords; the codeword at index `i` encodes the base-q
    /// digits of `i` (first message symbol least significant), so index 0 is
    /// the zero word.
    pub fn enumerate_codewords(&self, cap: u128) -> Result<Vec<Vec<Symbol>>> {
        self.check_cap(cap)?;
        let mut out = Vec::with_capacity(self.codeword_count() as usize);
        linalg::for_each_vector(self.field.order(), self.dimension(), |m| {
            out.push(self.encode(m));
            true
        });
        Ok(out)
    }

    /// Minimum Hamming weight of a nonzero codeword, subject to the same
    /// enumeration cap as [`LocalCode::enumerate_codewords`].
    pub fn min_distance(&self, cap: u128) -> Result<MinDistance> {
        self.check_cap(cap)?;
        Ok(self.distance)
    }

    /// Membership test via the parity-check matrix.
    pub fn contains(&self, word: &[Symbol]) -> Result<bool> {
        if word.len() != self.length {
            return Err(Error::LengthMismatch { expected: self.length, got: word.len() });
        }
        for &s in word {
            self.field.check_symbol(s as u32)?;
        }
        Ok(self.parity_check.iter().all(|row| {
            row.iter()
                .zip(word)
                .fold(0, |acc, (&h, &w)| self.field.add(acc, self.field.mul(h, w)))
                == 0
        }))
    }

    /// Parses the generator-matrix text format: a header line `q k length`
    /// followed by `k` rows of space-separated element indices.
    pub fn from_text(text: &str) -> Result<LocalCode> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?;
        let nums = parse_numbers(header)?;
        let [q, k, length] = nums[..] else {
            return Err(Error::Parse(format!("expected header `q k length`, got `{header}`")));
        };
        let field = Field::new(q as u32)?;
        let mut generator = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines.next().ok_or_else(|| Error::Parse("missing generator row".into()))?;
            let row = parse_numbers(line)?
                .into_iter()
                .map(|x| field.check_symbol(x as u32))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != length {
                return Err(Error::LengthMismatch { expected: length, got: row.len() });
            }
            generator.push(row);
        }
        Self::new(field, generator)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.order(), self.dimension(), self.length);
        for row in &self.generator {
            s.push_str(&join(row));
            s.push('\n');
        }
        s
    }
}

pub(crate) fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
        .collect()
}

pub(crate) fn join(row: &[Symbol]) -> String {
    row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn weight(word: &[Symbol]) -> usize {
    word.iter().filter(|&&x| x != 0).count()
}

pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn tetracode() -> LocalCode {
        LocalCode::new(gf(3), vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap()
    }

    #[test]
    fn repetition_over_gf3() {
        let c = LocalCode::repetition(gf(3), 2).unwrap();
        let words: BTreeSet<_> = c.enumerate_codewords(DEFAULT_ENUMERATION_CAP).unwrap().into_iter().collect();
        let expected: BTreeSet<_> = [vec![0, 0], vec![1, 1], vec![2, 2]].into_iter().collect();
        assert_eq!(words, expected);
        let d = c.min_distance(DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(d.d, 2);
        assert_eq!(d.relative, Ratio::new(1, 1));
        assert!(c.contains(&[2, 2]).unwrap());
        assert!(!c.contains(&[2, 1]).unwrap());
    }

    #[test]
    fn parity_over_gf2() {
        let c = LocalCode::single_parity_check(gf(2), 3).unwrap();
        let words: BTreeSet<_> = c.enumerate_codewords(DEFAULT_ENUMERATION_CAP).unwrap().into_iter().collect();
        let expected: BTreeSet<_> =
            [vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]].into_iter().collect();
        assert_eq!(words, expected);
        assert_eq!(c.distance().d, 2);
        assert_eq!(c.relative_distance(), Ratio::new(2, 3));
        assert!(!c.contains(&[1, 1, 1]).unwrap());
    }

    #[test]
    fn gf3_four_two_code_against_brute_force() {
        let c = tetracode();
        let words = c.enumerate_codewords(DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(words.len(), 9);
        let distinct: BTreeSet<_> = words.iter().cloned().collect();
        assert_eq!(distinct.len(), 9);
        // independent oracle: span computed by multiplying every message by hand
        let f = gf(3);
        let mut oracle = BTreeSet::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                oracle.insert(vec![a, b, f.add(a, b), f.add(a, f.mul(2, b))]);
            }
        }
        assert_eq!(distinct, oracle);
        let d = oracle.iter().filter(|w| weight(w) > 0).map(|w| weight(w)).min().unwrap();
        assert_eq!(d, 3);
        assert_eq!(c.distance().d, d);
        // min distance equals min pairwise distance
        let pairwise = words
            .iter()
            .enumerate()
            .flat_map(|(i, a)| words[i + 1..].iter().map(move |b| hamming_distance(a, b)))
            .min()
            .unwrap();
        assert_eq!(pairwise, d);
    }

    #[test]
    fn membership_count_matches_dimension() {
        for c in [tetracode(), LocalCode::single_parity_check(gf(3), 3).unwrap()] {
            let mut members = 0u128;
            crate::linalg::for_each_vector(3, c.length(), |w| {
                if c.contains(w).unwrap() {
                    members += 1;
                }
                true
            });
            assert_eq!(members, c.codeword_count());
        }
    }

    #[test]
    fn grs_is_mds() {
        let c = LocalCode::generalized_reed_solomon(gf(7), 6, 2, None, None).unwrap();
        assert_eq!(c.distance().d, 5);
        let c = LocalCode::generalized_reed_solomon(gf(8), 8, 3, None, Some(vec![1, 2, 3, 4, 5, 6, 7, 1])).unwrap();
        assert_eq!(c.distance().d, 6);
        assert!(LocalCode::generalized_reed_solomon(gf(5), 6, 2, None, None).is_err());
    }

    #[test]
    fn errors() {
        let f = gf(3);
        assert!(matches!(
            LocalCode::new(f.clone(), vec![vec![1, 1], vec![2, 2]]),
            Err(Error::InvalidCode(_))
        ));
        let c = tetracode();
        assert!(matches!(c.contains(&[0, 0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(c.contains(&[0, 0, 0, 5]), Err(Error::SymbolOutOfRange { .. })));
        assert!(matches!(c.enumerate_codewords(8), Err(Error::EnumerationTooLarge { count: 9, cap: 8 })));
        assert!(matches!(c.min_distance(8), Err(Error::EnumerationTooLarge { .. })));
        assert!(LocalCode::with_cap(gf(2), vec![vec![1; 30]; 1], 1).is_err());
    }

    #[test]
    fn text_format() {
        let c = tetracode();
        let text = c.to_text();
        assert_eq!(text, "3 2 4\n1 0 1 1\n0 1 1 2\n");
        let back = LocalCode::from_text(&text).unwrap();
        assert_eq!(back.generator(), c.generator());
        assert!(LocalCode::from_text("3 2 4\n1 0 1\n0 1 1 2\n").is_err());
        assert!(LocalCode::from_text("3 2\n").is_err());
    }
}
