//! Subdifferentials of convex piecewise-affine functions.

use std::fmt;

use crate::error::{Error, Result};
use crate::pwfun::{self, CofiniteSet, Location, PWFun, PieceExpr};
use crate::rat::Rat;
use crate::svmap::{Band, IntervalUnion, IntervalValue, MultiMap};

/// A continuous convex function given by strictly increasing slopes and its
/// value at the left endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPWAffine {
    breakpoints: Vec<Rat>,
    slopes: Vec<Rat>,
    anchor: Rat,
}

impl ConvexPWAffine {
    pub fn new(breakpoints: Vec<Rat>, slopes: Vec<Rat>, anchor: Rat) -> Result<Self> {
        pwfun::validate_breakpoints(&breakpoints).map_err(Error::InvalidConvex)?;
        if slopes.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidConvex(format!(
                "{} breakpoints need {} slopes, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                slopes.len()
            )));
        }
        if let Some(w) = slopes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConvex(format!(
                "slopes must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(ConvexPWAffine { breakpoints, slopes, anchor })
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rat] {
        &self.slopes
    }

    pub fn anchor(&self) -> &Rat {
        &self.anchor
    }

    /// Values at the breakpoints, integrated from the anchor.
    fn breakpoint_values(&self) -> Vec<Rat> {
        let mut out = vec![self.anchor.clone()];
        for (j, s) in self.slopes.iter().enumerate() {
            let next = &out[j] + s * (&self.breakpoints[j + 1] - &self.breakpoints[j]);
            out.push(next);
        }
        out
    }

    pub fn value_at(&self, x: &Rat) -> Result<Rat> {
        let vals = self.breakpoint_values();
        Ok(match pwfun::locate(&self.breakpoints, x)? {
            Location::Breakpoint(i) => vals[i].clone(),
            Location::Piece(j) => &vals[j] + &self.slopes[j] * (x - &self.breakpoints[j]),
        })
    }

    pub fn to_pwfun(&self) -> PWFun {
        let vals = self.breakpoint_values();
        let pieces = self
            .slopes
            .iter()
            .enumerate()
            .map(|(j, s)| PieceExpr::affine(s.clone(), &vals[j] - s * &self.breakpoints[j]))
            .collect();
        PWFun::new(self.breakpoints.clone(), pieces, vals.into_iter().map(Some).collect())
            .expect("affine pieces fit every interval")
    }
}

impl fmt::Display for ConvexPWAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.breakpoints.iter().map(|r| r.to_string()).collect();
        let s: Vec<String> = self.slopes.iter().map(|r| r.to_string()).collect();
        write!(f, "breakpoints [{}] slopes=[{}] anchor={}", b.join(", "), s.join(", "), self.anchor)
    }
}

/// `x -> ∂g(x)`: the slope on each piece, the slope interval at interior
/// breakpoints, and the one available slope at the domain endpoints.
pub fn subdifferential(g: &ConvexPWAffine) -> MultiMap {
    let n = g.slopes.len();
    let bands = g.slopes.iter().map(|s| vec![Band::curve(PieceExpr::constant(s.clone()))]).collect();
    let values = (0..=n)
        .map(|i| {
            let lo = &g.slopes[i.saturating_sub(1)];
            let hi = &g.slopes[i.min(n - 1)];
            IntervalUnion::single(IntervalValue::new(lo.clone(), hi.clone()).expect("slopes increase"))
        })
        .collect();
    MultiMap::new(g.breakpoints.clone(), bands, values).expect("constant bands are valid")
}

/// Points where `g` is differentiable: all but the interior breakpoints.
pub fn differentiability_points(g: &ConvexPWAffine) -> CofiniteSet {
    let n = g.breakpoints.len();
    CofiniteSet { excluded: g.breakpoints[1..n - 1].iter().cloned().collect() }
}
