//! Evaluation of the two-variable Mittag-Leffler function
//!
//!   E_{α,β}(x, y; μ) = Σ_{n,m ≥ 0} x^n y^m / Γ(αn + βm + μ)
//!
//! by direct summation, by Hankel-contour integral representations and by
//! large-argument expansions, with an extended-precision oracle for checking.

// Quadrature and Lanczos tables are kept at their published precision;
// `!(a <= b)` is used on purpose so that NaN counts as a failure; the
// anti-diagonal loops index x^n and y^(k-n) together.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod contour;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod gamma;
pub mod oracle;
pub mod params;
pub mod polar;
pub mod representations;
pub mod selftest;
pub mod series;
mod sum;

pub use num_complex::Complex64;

pub use asymptotics::{
    asympt_tail_sum, classify_case, eval_asymptotic, ErrorModel, TruncationOrders,
};
pub use contour::{build_contour, integrate, DiscretizedContour, IntegrandSpec};
pub use error::{Error, Result};
pub use eval::{AsymptoticCase, Evaluation, Method};
pub use gamma::{recip_gamma, recip_gamma_hankel, GammaConfig};
pub use oracle::{oracle_eval, OracleValue};
pub use params::{
    classify_region, derived_contour_params, validate_params, ContourSpec, Parameters,
    RegionLabel, Regime,
};
pub use representations::{
    eval_auto, eval_lemma1, eval_lemma2, eval_lemma3, eval_remark1, PoleSource, ResidueTerm,
};
pub use series::{eval_double_series, eval_ml_one, SeriesBudget};
