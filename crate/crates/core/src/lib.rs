//! Exact decision procedures and constructions for minimal usco and minimal
//! cusco maps built from piecewise rational functions on closed intervals.

pub mod analysis;
pub mod cli;
pub mod convex2d;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod minimal;
pub mod oracle;
pub mod pwfun;
pub mod rat;
pub mod subdiff;
pub mod svmap;
pub mod verdict;

pub use error::{Error, Result};
pub use pwfun::{PWFun, PieceExpr, Side};
pub use rat::{ExtReal, Rat};
pub use svmap::{GraphMap, IntervalUnion, IntervalValue, MultiMap};
pub use verdict::{Ray, RayDirection, Verdict, Witness};
