use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AsymptoticCase {
    Case1,
    Case2,
    Case3,
    Case4,
}

impl AsymptoticCase {
    pub fn index(self) -> u8 {
        match self {
            AsymptoticCase::Case1 => 1,
            AsymptoticCase::Case2 => 2,
            AsymptoticCase::Case3 => 3,
            AsymptoticCase::Case4 => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Series,
    Lemma1,
    Lemma2,
    Remark1,
    Lemma3,
    Asymptotic(AsymptoticCase),
    Oracle,
}

impl Method {
    pub fn tag(self) -> String {
        match self {
            Method::Series => "series".into(),
            Method::Lemma1 => "lemma1".into(),
            Method::Lemma2 => "lemma2".into(),
            Method::Remark1 => "remark1".into(),
            Method::Lemma3 => "lemma3".into(),
            Method::Asymptotic(c) => format!("asymptotic-case{}", c.index()),
            Method::Oracle => "oracle".into(),
        }
    }

    pub fn is_integral(self) -> bool {
        matches!(
            self,
            Method::Lemma1 | Method::Lemma2 | Method::Remark1 | Method::Lemma3
        )
    }

    pub fn case(self) -> Option<AsymptoticCase> {
        match self {
            Method::Asymptotic(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// A value with an absolute a-posteriori error estimate. `est_error` is
/// infinite when the requested tolerance was not met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub est_error: f64,
    pub method: Method,
}

impl Evaluation {
    pub fn new(value: Complex64, est_error: f64, method: Method) -> Self {
        Evaluation {
            value,
            est_error,
            method,
        }
    }

    pub fn failed(&self) -> bool {
        !self.est_error.is_finite()
    }
}
