//! Result rows and their CSV / JSON forms.

use std::io::Write;

use ml2v::{Complex64, Evaluation, Parameters};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

pub const CSV_HEADER: [&str; 14] = [
    "alpha", "beta", "mu_re", "mu_im", "x_re", "x_im", "y_re", "y_im", "val_re", "val_im", "est_error", "method",
    "case", "ms",
];

/// Absolute error estimate; infinite estimates mark failed rows and are
/// written as the string "inf".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstError(pub f64);

impl Serialize for EstError {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for EstError {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = EstError;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<EstError, E> {
                Ok(EstError(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<EstError, E> {
                Ok(EstError(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<EstError, E> {
                Ok(EstError(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<EstError, E> {
                match v {
                    "inf" => Ok(EstError(f64::INFINITY)),
                    _ => v.parse().map(EstError).map_err(E::custom),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub alpha: f64,
    pub beta: f64,
    pub mu_re: f64,
    pub mu_im: f64,
    pub x_re: f64,
    pub x_im: f64,
    pub y_re: f64,
    pub y_im: f64,
    pub val_re: Option<f64>,
    pub val_im: Option<f64>,
    pub est_error: EstError,
    pub method: String,
    pub case: String,
    pub ms: f64,
}

impl ResultRecord {
    pub fn new(params: &Parameters, x: Complex64, y: Complex64, ev: &Evaluation, ms: f64) -> Self {
        let mut r = Self::blank(params, x, y, ev.method.tag(), ms);
        r.val_re = Some(ev.value.re);
        r.val_im = Some(ev.value.im);
        r.est_error = EstError(ev.est_error);
        r.case = ev.method.case().map(|c| format!("case{}", c.index())).unwrap_or_default();
        r
    }

    /// Row for a point whose evaluation failed.
    pub fn failed(params: &Parameters, x: Complex64, y: Complex64, method: String, ms: f64) -> Self {
        Self::blank(params, x, y, method, ms)
    }

    fn blank(params: &Parameters, x: Complex64, y: Complex64, method: String, ms: f64) -> Self {
        let mu = params.mu();
        ResultRecord {
            alpha: params.alpha(),
            beta: params.beta(),
            mu_re: mu.re,
            mu_im: mu.im,
            x_re: x.re,
            x_im: x.im,
            y_re: y.re,
            y_im: y.im,
            val_re: None,
            val_im: None,
            est_error: EstError(f64::INFINITY),
            method,
            case: String::new(),
            ms,
        }
    }

    pub fn value(&self) -> Option<Complex64> {
        Some(Complex64::new(self.val_re?, self.val_im?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn write_records<W: Write>(out: W, records: &[ResultRecord], format: Format) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn read_csv(text: &str) -> anyhow::Result<Vec<ResultRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    Ok(rd.deserialize().collect::<Result<Vec<_>, _>>()?)
}
