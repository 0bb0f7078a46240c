//! Brute-force nearest-codeword decoding and exhaustive decoder scans.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander_code::{ExpanderCode, Word, DEFAULT_GLOBAL_CAP};
use crate::linalg::count_words;
use crate::lp_decoder::{decode, DecodeStatus, DecoderOptions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub nearest: Word,
    pub distance: usize,
    /// Another codeword lies at the same distance.
    pub tie: bool,
    pub num_codewords_scanned: usize,
}

/// Nearest codeword among an explicit list; the first minimizer wins.
pub fn nearest_in(codewords: &[Word], y: &Word) -> Result<OracleResult> {
    let mut best: Option<(usize, usize)> = None;
    let mut tie = false;
    for (i, c) in codewords.iter().enumerate() {
        if c.len() != y.len() {
            return Err(Error::LengthMismatch { expected: c.len(), got: y.len() });
        }
        let d = c.distance(y);
        match best {
            Some((_, bd)) if d > bd => {}
            Some((_, bd)) if d == bd => tie = true,
            _ => {
                best = Some((i, d));
                tie = false;
            }
        }
    }
    let (i, distance) = best.ok_or_else(|| Error::Internal("empty codeword list".into()))?;
    Ok(OracleResult { nearest: codewords[i].clone(), distance, tie, num_codewords_scanned: codewords.len() })
}

pub fn ml_decode(code: &ExpanderCode, y: &Word) -> Result<OracleResult> {
    code.check_word(y)?;
    let words = code.enumerate_codewords(DEFAULT_GLOBAL_CAP)?;
    nearest_in(&words, y)
}

/// Outcome of one received word in a scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub received: String,
    pub decode_status: DecodeStatus,
    pub decoded: String,
    pub decoded_distance: Option<usize>,
    pub ml_distance: usize,
    pub ml_tie: bool,
    /// Decoder returned a codeword strictly farther than the nearest one.
    pub violation: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanReport {
    pub words_scanned: usize,
    pub codewords: usize,
    pub integral_optimal: usize,
    pub fractional: usize,
    pub ties: usize,
    pub violations: usize,
    #[serde(skip)]
    pub rows: Vec<ScanRow>,
}

fn word_from_index(mut index: u128, q: usize, len: usize) -> Word {
    let mut w = Vec::with_capacity(len);
    for _ in 0..len {
        w.push((index % q as u128) as u8);
        index /= q as u128;
    }
    Word(w)
}

/// Runs the LP decoder and the oracle on every word of `F_q^{|E|}`.
pub fn exhaustive_agreement_scan(code: &ExpanderCode, max_words: u128, opts: &DecoderOptions) -> Result<ScanReport> {
    let q = code.field().order();
    let total = count_words(q, code.length());
    if total > max_words {
        return Err(Error::EnumerationTooLarge { count: total, cap: max_words });
    }
    let words = code.enumerate_codewords(DEFAULT_GLOBAL_CAP)?;
    let rows = (0..total)
        .into_par_iter()
        .map(|i| -> Result<ScanRow> {
            let y = word_from_index(i, q, code.length());
            let ml = nearest_in(&words, &y)?;
            let r = decode(code, &y, opts)?;
            let decoded_distance = r.codeword.as_ref().map(|c| c.distance(&y));
            Ok(ScanRow {
                received: y.to_string(),
                decode_status: r.status,
                decoded: r.codeword.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                decoded_distance,
                ml_distance: ml.distance,
                ml_tie: ml.tie,
                violation: decoded_distance.is_some_and(|d| d > ml.distance),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport { words_scanned: rows.len(), codewords: words.len(), ..Default::default() };
    for row in &rows {
        match row.decode_status {
            DecodeStatus::Codeword if !row.violation => report.integral_optimal += 1,
            DecodeStatus::Codeword => {}
            DecodeStatus::FractionalFailure => report.fractional += 1,
        }
        report.ties += row.ml_tie as usize;
        report.violations += row.violation as usize;
    }
    report.rows = rows;
    Ok(report)
}
