use thiserror::Error;

use crate::eval::Evaluation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("region precondition violated: {0}")]
    Region(String),
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("pole at distance {distance:.3e} from the contour, below the floor {floor:.3e}")]
    PoleProximity { distance: f64, floor: f64 },
    #[error("quadrature estimate {estimate:.3e} above tolerance {tol:.3e} after {nodes} nodes")]
    Quadrature { estimate: f64, tol: f64, nodes: usize },
    #[error("contour geometry: {0}")]
    Geometry(String),
    #[error("arguments below the asymptotic magnitude floor {floor}")]
    MagnitudeFloor { floor: f64 },
    #[error("budget exceeded: {reason}")]
    BudgetExceeded {
        reason: String,
        partial: Option<Box<Evaluation>>,
    },
}

impl Error {
    pub fn budget(reason: impl Into<String>, partial: Option<Evaluation>) -> Self {
        Error::BudgetExceeded {
            reason: reason.into(),
            partial: partial.map(Box::new),
        }
    }

    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Geometry(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
