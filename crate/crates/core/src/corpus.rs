//! The frozen oracle corpus: one JSON object per line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{oracle_eval, OracleValue};
use crate::params::{validate_params, Parameters};

pub const FROZEN: &str = include_str!("../corpus/oracle_corpus.jsonl");
/// Digits at which corpus values are frozen.
pub const FREEZE_DIGITS: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu_re: f64,
    pub mu_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusPoint {
    pub x_re: f64,
    pub x_im: f64,
    pub y_re: f64,
    pub y_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecimalValue {
    pub re: String,
    pub im: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub label: String,
    pub params: CorpusParams,
    pub point: CorpusPoint,
    pub digits: u32,
    pub value: DecimalValue,
    pub tail_bound: f64,
}

impl CorpusEntry {
    pub fn parameters(&self) -> Result<Parameters> {
        let p = &self.params;
        validate_params(p.alpha, p.beta, Complex64::new(p.mu_re, p.mu_im))
    }

    pub fn x(&self) -> Complex64 {
        Complex64::new(self.point.x_re, self.point.x_im)
    }

    pub fn y(&self) -> Complex64 {
        Complex64::new(self.point.y_re, self.point.y_im)
    }

    pub fn oracle_value(&self) -> OracleValue {
        OracleValue {
            re: self.value.re.clone(),
            im: self.value.im.clone(),
            digits: self.digits,
            tail_bound: self.tail_bound,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.oracle_value().to_complex()
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Domain(format!("corpus line {}: {e}", i + 1)))
        })
        .collect()
}

pub fn frozen() -> Result<Vec<CorpusEntry>> {
    parse_corpus(FROZEN)
}

pub fn to_jsonl(entries: &[CorpusEntry]) -> String {
    entries
        .iter()
        .map(|e| serde_json::to_string(e).expect("corpus entries serialise") + "\n")
        .collect()
}

/// A named evaluation point of the standard corpus.
#[derive(Debug, Clone, Copy)]
pub struct CorpusCase {
    pub label: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub mu: Complex64,
    pub x: Complex64,
    pub y: Complex64,
}

const fn case(label: &'static str, alpha: f64, beta: f64, mu: (f64, f64), x: (f64, f64), y: (f64, f64)) -> CorpusCase {
    CorpusCase {
        label,
        alpha,
        beta,
        mu: Complex64::new(mu.0, mu.1),
        x: Complex64::new(x.0, x.1),
        y: Complex64::new(y.0, y.1),
    }
}

const R: f64 = std::f64::consts::SQRT_2 * 2.0;

pub const STANDARD_CASES: &[CorpusCase] = &[
    case("exp-2-1", 1.0, 1.0, (1.0, 0.0), (2.0, 0.0), (1.0, 0.0)),
    case("exp-1-1", 1.0, 1.0, (1.0, 0.0), (1.0, 0.0), (1.0, 0.0)),
    case("exp-2-3", 1.0, 1.0, (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)),
    case("exp-m2-m3", 1.0, 1.0, (1.0, 0.0), (-2.0, 0.0), (-3.0, 0.0)),
    case("exp-m1-2", 1.0, 1.0, (1.0, 0.0), (-1.0, 0.0), (2.0, 0.0)),
    case("recip-gamma-half", 1.0, 1.0, (0.5, 0.0), (0.0, 0.0), (0.0, 0.0)),
    case("ml-one-m4", 0.5, 1.0, (1.0, 0.0), (-4.0, 0.0), (0.0, 0.0)),
    case("negative-unit", 0.5, 0.8, (1.0, 0.0), (-1.0, 0.0), (-1.0, 0.0)),
    case("negative-unit-complex-mu", 0.5, 0.8, (1.0, 0.5), (-1.0, 0.0), (-1.0, 0.0)),
    case("y-pole-inside", 0.7, 0.7, (2.0, 0.0), (-0.5, 0.0), (3.0, 0.0)),
    case("x-pole-inside", 1.2, 0.9, (1.0, 0.0), (3.0, 0.0), (-2.0, 0.0)),
    case("both-poles-inside", 0.6, 0.9, (1.5, 0.0), (1.5, 0.0), (2.0, 0.0)),
    case("negative-five", 0.8, 0.8, (1.0, 0.0), (-5.0, 0.0), (-5.0, 0.0)),
    case("positive-six-seven", 0.8, 0.8, (1.0, 0.0), (6.0, 0.0), (7.0, 0.0)),
    case("grid-a", 0.5, 0.8, (1.0, 0.0), (4.0, 0.0), (-4.0, 0.0)),
    case("grid-b", 0.5, 0.8, (1.0, 0.0), (-4.0, 0.0), (2.0, 0.0)),
    case("grid-c", 1.2, 0.9, (1.0, 0.0), (R, R), (-R, R)),
    case("grid-d", 1.2, 0.9, (1.0, 0.0), (4.0, 0.0), (4.0, 0.0)),
    case("grid-e", 0.7, 0.7, (0.5, 0.3), (-4.0, 0.0), (2.0, 0.0)),
    case("grid-f", 0.7, 0.7, (0.5, 0.3), (R, -R), (R, R)),
    case("grid-g", 0.5, 0.8, (1.0, 0.0), (-R, -R), (R, -R)),
    case("moderate-positive", 0.8, 0.8, (1.0, 0.0), (10.0, 0.0), (12.0, 0.0)),
    case("moderate-negative", 0.8, 0.8, (1.0, 0.0), (-12.0, 0.0), (-9.0, 0.0)),
    case("exp-large-20-10", 1.0, 1.0, (1.0, 0.0), (20.0, 0.0), (10.0, 0.0)),
    case("exp-sweep-m10", 1.0, 1.0, (1.0, 0.0), (-10.0, 0.0), (-20.0, 0.0)),
    case("exp-sweep-m25", 1.0, 1.0, (1.0, 0.0), (-25.0, 0.0), (-20.0, 0.0)),
    case("exp-sweep-m40", 1.0, 1.0, (1.0, 0.0), (-40.0, 0.0), (-20.0, 0.0)),
    case("decay-t10", 0.5, 0.5, (1.0, 0.0), (-10.0, 0.0), (-10.0, 0.0)),
    case("decay-t20", 0.5, 0.5, (1.0, 0.0), (-20.0, 0.0), (-20.0, 0.0)),
    case("decay-t40", 0.5, 0.5, (1.0, 0.0), (-40.0, 0.0), (-40.0, 0.0)),
    case("decay-t80", 0.5, 0.5, (1.0, 0.0), (-80.0, 0.0), (-80.0, 0.0)),
];

pub fn oracle_entry(c: &CorpusCase, digits: u32) -> Result<CorpusEntry> {
    let params = validate_params(c.alpha, c.beta, c.mu)?;
    let v = oracle_eval(c.x, c.y, &params, digits)?;
    Ok(CorpusEntry {
        label: c.label.to_string(),
        params: CorpusParams { alpha: c.alpha, beta: c.beta, mu_re: c.mu.re, mu_im: c.mu.im },
        point: CorpusPoint { x_re: c.x.re, x_im: c.x.im, y_re: c.y.re, y_im: c.y.im },
        digits,
        value: DecimalValue { re: v.re, im: v.im },
        tail_bound: v.tail_bound,
    })
}

/// Oracle values for every standard case at `digits` digits.
pub fn freeze(digits: u32) -> Result<Vec<CorpusEntry>> {
    STANDARD_CASES.iter().map(|c| oracle_entry(c, digits)).collect()
}

pub fn find<'a>(entries: &'a [CorpusEntry], label: &str) -> Option<&'a CorpusEntry> {
    entries.iter().find(|e| e.label == label)
}
