use thiserror::Error;

use crate::rat::Rat;
use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{x} lies outside the domain [{a}, {b}]")]
    Domain { x: Box<Rat>, a: Box<Rat>, b: Box<Rat> },

    #[error("{0} is not a breakpoint")]
    NotBreakpoint(Rat),

    #[error("invalid piecewise function: {0}")]
    InvalidFunction(String),

    #[error("invalid set-valued map: {0}")]
    InvalidMap(String),

    #[error("invalid planar curve: {0}")]
    InvalidCurve(String),

    #[error("invalid convex piecewise-affine function: {0}")]
    InvalidConvex(String),

    #[error("maps have different domains")]
    DomainMismatch,

    /// A construction's precondition check failed; the verdict carries the witnesses.
    #[error("rejected: {0}")]
    Rejected(Box<Verdict>),

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("the polygons intersect; no strictly separating functional exists")]
    NotSeparable,
}

pub type Result<T> = std::result::Result<T, Error>;
