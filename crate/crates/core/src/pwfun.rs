//! Piecewise single-valued functions on a compact rational interval.
//!
//! A [`PWFun`] is given by breakpoints `t0 = a < t1 < ... < tn = b`, one
//! [`PieceExpr`] per open interval `(t(i-1), t(i))` and a value (or nothing)
//! at every breakpoint. Pieces are affine or shifted reciprocals, which keeps
//! one-sided limits, images of subintervals, and pointwise comparisons of two
//! pieces exactly computable.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{int, ExtReal, Rat};

/// Side from which a point is approached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `x -> t` with `x < t`.
    Left,
    /// `x -> t` with `x > t`.
    Right,
}

/// Expression of a single piece. `Reciprocal` means `scale / (x - pole) + offset`.
///
/// Constructors normalize a zero-scale reciprocal to a constant, so two
/// expressions describe the same function on an open interval iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PieceExpr {
    Affine { slope: Rat, intercept: Rat },
    Reciprocal { pole: Rat, scale: Rat, offset: Rat },
}

impl PieceExpr {
    pub fn affine(slope: Rat, intercept: Rat) -> Self {
        PieceExpr::Affine { slope, intercept }
    }

    pub fn constant(c: Rat) -> Self {
        PieceExpr::Affine { slope: Rat::zero(), intercept: c }
    }

    pub fn reciprocal(pole: Rat, scale: Rat, offset: Rat) -> Self {
        if scale.is_zero() {
            PieceExpr::constant(offset)
        } else {
            PieceExpr::Reciprocal { pole, scale, offset }
        }
    }

    /// The affine function through `(x0, y0)` and `(x1, y1)`.
    pub fn through(x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &slope * x0;
        PieceExpr::affine(slope, intercept)
    }

    pub fn pole(&self) -> Option<&Rat> {
        match self {
            PieceExpr::Reciprocal { pole, .. } => Some(pole),
            PieceExpr::Affine { .. } => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, PieceExpr::Affine { slope, .. } if slope.is_zero())
    }

    /// Value at `x`; `None` only at the pole of a reciprocal.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        match self {
            PieceExpr::Affine { slope, intercept } => Some(slope * x + intercept),
            PieceExpr::Reciprocal { pole, scale, offset } => {
                let d = x - pole;
                if d.is_zero() {
                    None
                } else {
                    Some(scale / d + offset)
                }
            }
        }
    }

    /// Limit as `x -> t` from `side`.
    pub fn limit(&self, t: &Rat, side: Side) -> ExtReal {
        match self.eval(t) {
            Some(v) => ExtReal::Finite(v),
            None => {
                let PieceExpr::Reciprocal { scale, .. } = self else {
                    unreachable!("affine expressions are total")
                };
                // x - pole has the sign of the approach side.
                let positive = match side {
                    Side::Right => scale.is_positive(),
                    Side::Left => scale.is_negative(),
                };
                ExtReal::infinity_with_sign(positive)
            }
        }
    }

    /// The unique `x` with `expr(x) = y`, if the expression is invertible there.
    pub fn solve(&self, y: &Rat) -> Option<Rat> {
        match self {
            PieceExpr::Affine { slope, intercept } => {
                if slope.is_zero() {
                    None
                } else {
                    Some((y - intercept) / slope)
                }
            }
            PieceExpr::Reciprocal { pole, scale, offset } => {
                let d = y - offset;
                if d.is_zero() {
                    None
                } else {
                    Some(pole + scale / d)
                }
            }
        }
    }

    /// Whether the expression is continuous on the open interval `(l, r)`.
    pub fn fits(&self, l: &Rat, r: &Rat) -> bool {
        match self.pole() {
            Some(p) => !(p > l && p < r),
            None => true,
        }
    }

    /// Numerator and denominator as linear polynomials: `expr = num / den`.
    fn as_fraction(&self) -> (Linear, Linear) {
        match self {
            PieceExpr::Affine { slope, intercept } => (
                Linear { c0: intercept.clone(), c1: slope.clone() },
                Linear { c0: int(1), c1: Rat::zero() },
            ),
            PieceExpr::Reciprocal { pole, scale, offset } => (
                Linear { c0: scale - offset * pole, c1: offset.clone() },
                Linear { c0: -pole.clone(), c1: int(1) },
            ),
        }
    }

    /// Sign of the denominator on `(l, r)`; constant because the pole is outside.
    fn denominator_sign(&self, l: &Rat) -> i32 {
        match self.pole() {
            None => 1,
            Some(p) if p <= l => 1,
            Some(_) => -1,
        }
    }
}

impl fmt::Display for PieceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceExpr::Affine { slope, intercept } => write!(f, "affine {slope} {intercept}"),
            PieceExpr::Reciprocal { pole, scale, offset } => {
                write!(f, "recip {pole} {scale} {offset}")
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Linear {
    c0: Rat,
    c1: Rat,
}

impl Linear {
    fn mul(&self, other: &Linear) -> Quadratic {
        Quadratic {
            a: &self.c1 * &other.c1,
            b: &self.c0 * &other.c1 + &self.c1 * &other.c0,
            c: &self.c0 * &other.c0,
        }
    }
}

/// `a x^2 + b x + c`
#[derive(Clone, Debug)]
struct Quadratic {
    a: Rat,
    b: Rat,
    c: Rat,
}

impl Quadratic {
    fn eval(&self, x: &Rat) -> Rat {
        (&self.a * x + &self.b) * x + &self.c
    }

    fn scaled(self, s: i32) -> Quadratic {
        if s >= 0 {
            self
        } else {
            Quadratic { a: -self.a, b: -self.b, c: -self.c }
        }
    }

    fn sub(&self, o: &Quadratic) -> Quadratic {
        Quadratic { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    fn vertex(&self) -> Option<Rat> {
        if self.a.is_zero() {
            None
        } else {
            Some(-&self.b / (int(2) * &self.a))
        }
    }

    /// Exact minimum over `[l, r]`: endpoints or the (rational) vertex.
    fn min_on(&self, l: &Rat, r: &Rat) -> Rat {
        let mut m = std::cmp::min(self.eval(l), self.eval(r));
        if self.a.is_positive() {
            if let Some(v) = self.vertex() {
                if &v > l && &v < r {
                    m = std::cmp::min(m, self.eval(&v));
                }
            }
        }
        m
    }

    fn nonneg_on(&self, l: &Rat, r: &Rat) -> bool {
        !self.min_on(l, r).is_negative()
    }

    /// Strictly positive on the open interval `(l, r)`.
    fn positive_inside(&self, l: &Rat, r: &Rat) -> bool {
        if !self.nonneg_on(l, r) || self.is_zero() {
            return false;
        }
        // A nonnegative quadratic can only vanish inside at an interior minimum.
        if self.a.is_positive() {
            if let Some(v) = self.vertex() {
                if &v > l && &v < r && self.eval(&v).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// `(h - g) * den_g * den_h` as a quadratic, together with the constant sign
/// of `den_g * den_h` on `(l, r)`.
fn difference_numerator(g: &PieceExpr, h: &PieceExpr, l: &Rat) -> Quadratic {
    let (ng, dg) = g.as_fraction();
    let (nh, dh) = h.as_fraction();
    let q = nh.mul(&dg).sub(&ng.mul(&dh));
    q.scaled(g.denominator_sign(l) * h.denominator_sign(l))
}

/// `g(x) <= h(x)` for every `x` in the open interval `(l, r)`.
///
/// Both expressions must be continuous on `(l, r)`.
pub fn le_on(g: &PieceExpr, h: &PieceExpr, l: &Rat, r: &Rat) -> bool {
    difference_numerator(g, h, l).nonneg_on(l, r)
}

/// `g(x) < h(x)` for every `x` in the open interval `(l, r)`.
pub fn lt_on(g: &PieceExpr, h: &PieceExpr, l: &Rat, r: &Rat) -> bool {
    difference_numerator(g, h, l).positive_inside(l, r)
}

/// Image of the open interval `(u, v)` under a piece continuous there.
///
/// Pieces are monotone, so the image is the open interval between the two
/// endpoint limits, or a single point for constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub lo: ExtReal,
    pub hi: ExtReal,
    /// True when the image is the single point `lo = hi`.
    pub point: bool,
}

impl Image {
    pub fn of(expr: &PieceExpr, u: &Rat, v: &Rat) -> Image {
        if expr.is_constant() {
            let c = ExtReal::Finite(expr.eval(u).expect("constant piece"));
            return Image { lo: c.clone(), hi: c, point: true };
        }
        let a = expr.limit(u, Side::Right);
        let b = expr.limit(v, Side::Left);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Image { lo, hi, point: false }
    }

    /// Whether the image meets the open interval `(lo, hi)` (bounds may be infinite).
    pub fn meets_open(&self, lo: &ExtReal, hi: &ExtReal) -> bool {
        if self.point {
            &self.lo > lo && &self.lo < hi
        } else {
            std::cmp::max(&self.lo, lo) < std::cmp::min(&self.hi, hi)
        }
    }

    /// Whether the image lies inside the open interval `(lo, hi)`.
    pub fn within_open(&self, lo: &ExtReal, hi: &ExtReal) -> bool {
        if self.point {
            &self.lo > lo && &self.lo < hi
        } else {
            &self.lo >= lo && &self.hi <= hi
        }
    }
}

/// Where a point of the domain sits relative to the breakpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Breakpoint(usize),
    /// Inside the open piece with this index.
    Piece(usize),
}

pub(crate) fn locate(breakpoints: &[Rat], x: &Rat) -> Result<Location> {
    let a = &breakpoints[0];
    let b = &breakpoints[breakpoints.len() - 1];
    if x < a || x > b {
        return Err(Error::Domain { x: Box::new(x.clone()), a: Box::new(a.clone()), b: Box::new(b.clone()) });
    }
    Ok(match breakpoints.binary_search(x) {
        Ok(i) => Location::Breakpoint(i),
        Err(i) => Location::Piece(i - 1),
    })
}

pub(crate) fn validate_breakpoints(breakpoints: &[Rat]) -> std::result::Result<(), String> {
    if breakpoints.len() < 2 {
        return Err("need at least two breakpoints (the domain endpoints)".into());
    }
    if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
        return Err(format!("breakpoints must increase strictly ({} then {})", w[0], w[1]));
    }
    Ok(())
}

/// Limit values around a point; `None` marks a missing side (domain endpoint)
/// or an undefined value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet {
    pub left_limit: Option<ExtReal>,
    pub right_limit: Option<ExtReal>,
    pub point_value: Option<Rat>,
}

impl ClusterSet {
    /// Finite cluster values: the section of the graph closure at the point.
    pub fn finite_members(&self) -> BTreeSet<Rat> {
        let mut out = BTreeSet::new();
        for l in [&self.left_limit, &self.right_limit].into_iter().flatten() {
            if let ExtReal::Finite(q) = l {
                out.insert(q.clone());
            }
        }
        if let Some(v) = &self.point_value {
            out.insert(v.clone());
        }
        out
    }

    pub fn limits(&self) -> impl Iterator<Item = &ExtReal> {
        [&self.left_limit, &self.right_limit].into_iter().flatten()
    }
}

/// Domain minus finitely many breakpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CofiniteSet {
    pub excluded: BTreeSet<Rat>,
}

impl CofiniteSet {
    pub fn contains(&self, x: &Rat) -> bool {
        !self.excluded.contains(x)
    }
}

/// A piecewise function, possibly undefined at some breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PWFun {
    breakpoints: Vec<Rat>,
    pieces: Vec<PieceExpr>,
    values: Vec<Option<Rat>>,
}

impl PWFun {
    pub fn new(
        breakpoints: Vec<Rat>,
        pieces: Vec<PieceExpr>,
        values: Vec<Option<Rat>>,
    ) -> Result<Self> {
        validate_breakpoints(&breakpoints).map_err(Error::InvalidFunction)?;
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        if values.len() != breakpoints.len() {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} breakpoint values, got {}",
                breakpoints.len(),
                breakpoints.len(),
                values.len()
            )));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !p.fits(&breakpoints[i], &breakpoints[i + 1]) {
                return Err(Error::InvalidFunction(format!(
                    "pole of `{p}` lies inside ({}, {})",
                    breakpoints[i],
                    breakpoints[i + 1]
                )));
            }
        }
        Ok(PWFun { breakpoints, pieces, values })
    }

    /// `c` on `[a, b]`.
    pub fn constant(a: Rat, b: Rat, c: Rat) -> Result<Self> {
        PWFun::new(vec![a, b], vec![PieceExpr::constant(c.clone())], vec![Some(c.clone()), Some(c)])
    }

    /// Single expression on `[a, b]` with endpoint values from the expression.
    pub fn from_expr(a: Rat, b: Rat, expr: PieceExpr) -> Result<Self> {
        let va = expr.eval(&a);
        let vb = expr.eval(&b);
        if va.is_none() || vb.is_none() {
            return Err(Error::InvalidFunction(format!("`{expr}` is undefined at an endpoint")));
        }
        PWFun::new(vec![a, b], vec![expr], vec![va, vb])
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[PieceExpr] {
        &self.pieces
    }

    pub fn values(&self) -> &[Option<Rat>] {
        &self.values
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.breakpoints[0], &self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn locate(&self, x: &Rat) -> Result<Location> {
        locate(&self.breakpoints, x)
    }

    /// `Ok(None)` exactly at undefined breakpoints.
    pub fn eval(&self, x: &Rat) -> Result<Option<Rat>> {
        Ok(match self.locate(x)? {
            Location::Breakpoint(i) => self.values[i].clone(),
            Location::Piece(j) => self.pieces[j].eval(x),
        })
    }

    /// One-sided limits at breakpoint index `i`; a side is `None` at the
    /// matching domain endpoint.
    pub fn limits_at_index(&self, i: usize) -> (Option<ExtReal>, Option<ExtReal>) {
        let t = &self.breakpoints[i];
        let left = (i > 0).then(|| self.pieces[i - 1].limit(t, Side::Left));
        let right = (i < self.pieces.len()).then(|| self.pieces[i].limit(t, Side::Right));
        (left, right)
    }

    pub fn one_sided_limits(&self, t: &Rat) -> Result<(Option<ExtReal>, Option<ExtReal>)> {
        match self.locate(t) {
            Ok(Location::Breakpoint(i)) => Ok(self.limits_at_index(i)),
            _ => Err(Error::NotBreakpoint(t.clone())),
        }
    }

    pub fn cluster_set(&self, x: &Rat) -> Result<ClusterSet> {
        Ok(match self.locate(x)? {
            Location::Piece(j) => {
                let v = self.pieces[j].eval(x).expect("pieces are continuous inside");
                ClusterSet {
                    left_limit: Some(ExtReal::Finite(v.clone())),
                    right_limit: Some(ExtReal::Finite(v.clone())),
                    point_value: Some(v),
                }
            }
            Location::Breakpoint(i) => self.cluster_set_at_index(i),
        })
    }

    pub fn cluster_set_at_index(&self, i: usize) -> ClusterSet {
        let (left_limit, right_limit) = self.limits_at_index(i);
        ClusterSet { left_limit, right_limit, point_value: self.values[i].clone() }
    }

    /// Whether `f` is continuous (on its domain `[a, b]`) at breakpoint `i`.
    pub fn is_continuous_at_index(&self, i: usize) -> bool {
        let Some(v) = &self.values[i] else {
            return false;
        };
        let (l, r) = self.limits_at_index(i);
        let fv = ExtReal::Finite(v.clone());
        [l, r].into_iter().flatten().all(|lim| lim == fv)
    }

    pub fn continuity_points(&self) -> CofiniteSet {
        let excluded = (0..self.breakpoints.len())
            .filter(|&i| !self.is_continuous_at_index(i))
            .map(|i| self.breakpoints[i].clone())
            .collect();
        CofiniteSet { excluded }
    }

    /// Make `f` undefined at the breakpoints in `drop`.
    pub fn restrict<'a>(&self, drop: impl IntoIterator<Item = &'a Rat>) -> Result<PWFun> {
        let mut out = self.clone();
        for t in drop {
            match self.locate(t) {
                Ok(Location::Breakpoint(i)) => out.values[i] = None,
                _ => return Err(Error::NotBreakpoint(t.clone())),
            }
        }
        Ok(out)
    }

    /// Same function with the extra points inserted as breakpoints (value
    /// taken from the piece). Points already present are ignored.
    pub fn refine<'a>(&self, points: impl IntoIterator<Item = &'a Rat>) -> Result<PWFun> {
        let mut out = self.clone();
        for t in points {
            if let Location::Piece(j) = out.locate(t)? {
                let expr = out.pieces[j].clone();
                let v = expr.eval(t);
                out.breakpoints.insert(j + 1, t.clone());
                out.pieces.insert(j + 1, expr);
                out.values.insert(j + 1, v);
            }
        }
        Ok(out)
    }

    /// Merge removable breakpoints: equal expressions on both sides and a
    /// defined value continuing them.
    pub fn canonical(&self) -> PWFun {
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut pieces: Vec<PieceExpr> = Vec::new();
        let mut values = vec![self.values[0].clone()];
        for j in 0..self.pieces.len() {
            let t = &self.breakpoints[j + 1];
            let expr = &self.pieces[j];
            let prev_i = bps.len() - 1;
            let removable = j > 0
                && pieces.last() == Some(expr)
                && values[prev_i].is_some()
                && values[prev_i] == expr.eval(&bps[prev_i]);
            if removable {
                bps[prev_i] = t.clone();
                values[prev_i] = self.values[j + 1].clone();
            } else {
                pieces.push(expr.clone());
                bps.push(t.clone());
                values.push(self.values[j + 1].clone());
            }
        }
        PWFun { breakpoints: bps, pieces, values }
    }

    /// Pointwise equality (on the common domain, including definedness).
    pub fn equivalent(&self, other: &PWFun) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for PWFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.breakpoints.iter().enumerate() {
            match &self.values[i] {
                Some(v) => write!(f, "[{t}: {v}]")?,
                None => write!(f, "[{t}: undefined]")?,
            }
            if let Some(p) = self.pieces.get(i) {
                write!(f, " {p} ")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{int, rat};

    #[test]
    fn eval_on_example_jump() {
        let f = fixtures::jump_function();
        assert_eq!(f.eval(&int(-3)).unwrap_err().to_string(), "-3 lies outside the domain [-2, 2]");
        assert_eq!(f.eval(&rat(-3, 2)).unwrap(), Some(int(-1)));
        assert_eq!(f.eval(&int(0)).unwrap(), Some(int(0)));
        assert_eq!(f.eval(&int(1)).unwrap(), Some(int(1)));
        let id = PWFun::from_expr(int(0), int(1), PieceExpr::affine(int(1), int(0))).unwrap();
        assert_eq!(id.eval(&rat(1, 2)).unwrap(), Some(rat(1, 2)));
    }

    #[test]
    fn eval_wide_window() {
        // Values left of zero are -1 throughout, e.g. at -3 on a wider window.
        let f = fixtures::jump_function_on(int(-4), int(4));
        assert_eq!(f.eval(&int(-3)).unwrap(), Some(int(-1)));
    }

    #[test]
    fn one_sided_limits_examples() {
        let f = fixtures::jump_function();
        assert_eq!(
            f.one_sided_limits(&int(0)).unwrap(),
            (Some(ExtReal::Finite(int(-1))), Some(ExtReal::Finite(int(1))))
        );
        let g = fixtures::blowup_function();
        assert_eq!(
            g.one_sided_limits(&int(0)).unwrap(),
            (Some(ExtReal::Finite(int(0))), Some(ExtReal::PosInf))
        );
        let h = PWFun::from_expr(int(-1), int(1), PieceExpr::affine(int(2), int(1)))
            .unwrap()
            .refine([&rat(1, 3)])
            .unwrap();
        let v = ExtReal::Finite(rat(5, 3));
        assert_eq!(h.one_sided_limits(&rat(1, 3)).unwrap(), (Some(v.clone()), Some(v)));
        assert!(matches!(f.one_sided_limits(&int(1)), Err(Error::NotBreakpoint(_))));
        assert_eq!(f.one_sided_limits(&int(-2)).unwrap().0, None);
    }

    #[test]
    fn reciprocal_limit_signs() {
        let e = PieceExpr::reciprocal(int(0), int(-2), int(0));
        assert_eq!(e.limit(&int(0), Side::Right), ExtReal::NegInf);
        assert_eq!(e.limit(&int(0), Side::Left), ExtReal::PosInf);
        assert_eq!(PieceExpr::reciprocal(int(3), int(0), int(5)), PieceExpr::constant(int(5)));
    }

    #[test]
    fn cluster_sets() {
        let f = fixtures::jump_function();
        let members: Vec<Rat> = f.cluster_set(&int(0)).unwrap().finite_members().into_iter().collect();
        assert_eq!(members, vec![int(-1), int(0), int(1)]);
        let g = fixtures::blowup_function();
        let members: Vec<Rat> = g.cluster_set(&int(0)).unwrap().finite_members().into_iter().collect();
        assert_eq!(members, vec![int(0)]);
        let c = PWFun::constant(int(0), int(1), rat(7, 3)).unwrap();
        for x in [int(0), rat(1, 2), int(1)] {
            let m: Vec<Rat> = c.cluster_set(&x).unwrap().finite_members().into_iter().collect();
            assert_eq!(m, vec![rat(7, 3)]);
        }
    }

    #[test]
    fn continuity_points_examples() {
        let f = fixtures::jump_function();
        assert_eq!(f.continuity_points().excluded, [int(0)].into_iter().collect());
        let id = PWFun::from_expr(int(-1), int(1), PieceExpr::affine(int(1), int(0))).unwrap();
        assert!(id.continuity_points().excluded.is_empty());
        let two = fixtures::two_jump_step();
        assert_eq!(two.continuity_points().excluded, [int(-1), int(2)].into_iter().collect());
    }

    #[test]
    fn restrict_examples() {
        let f = fixtures::jump_function();
        let r = f.restrict([&int(0)]).unwrap();
        assert_eq!(r.eval(&int(0)).unwrap(), None);
        assert_eq!(r.eval(&int(1)).unwrap(), Some(int(1)));
        assert_eq!(f.restrict(std::iter::empty()).unwrap(), f);
        assert!(matches!(f.restrict([&int(1)]), Err(Error::NotBreakpoint(_))));
    }

    #[test]
    fn rejects_malformed() {
        let r = PWFun::new(vec![int(1), int(0)], vec![PieceExpr::constant(int(0))], vec![None, None]);
        assert!(r.is_err());
        let r = PWFun::new(
            vec![int(-1), int(1)],
            vec![PieceExpr::reciprocal(int(0), int(1), int(0))],
            vec![None, None],
        );
        assert!(r.is_err());
        let r = PWFun::new(vec![int(0), int(1)], vec![], vec![None, None]);
        assert!(r.is_err());
    }

    #[test]
    fn canonical_merges_removable_breakpoints() {
        let f = PWFun::from_expr(int(0), int(4), PieceExpr::affine(int(1), int(0))).unwrap();
        let g = f.refine([&int(1), &int(3)]).unwrap();
        assert_eq!(g.breakpoints().len(), 4);
        assert_eq!(g.canonical(), f);
        assert!(f.equivalent(&g));
        // An undefined breakpoint is not removable.
        let h = g.restrict([&int(1)]).unwrap();
        assert!(!h.equivalent(&f));
    }

    #[test]
    fn comparisons_affine_and_reciprocal() {
        let zero = PieceExpr::constant(int(0));
        let x = PieceExpr::affine(int(1), int(0));
        let inv = PieceExpr::reciprocal(int(0), int(1), int(0));
        // 0 <= x on (0, 1), strictly
        assert!(le_on(&zero, &x, &int(0), &int(1)));
        assert!(lt_on(&zero, &x, &int(0), &int(1)));
        assert!(!le_on(&x, &zero, &int(0), &int(1)));
        // x <= 1/x on (0, 1): touches only at 1
        assert!(le_on(&x, &inv, &int(0), &int(1)));
        assert!(lt_on(&x, &inv, &int(0), &int(1)));
        assert!(!le_on(&x, &inv, &int(0), &int(2)));
        // on (-1, 0) the reciprocal is below
        assert!(le_on(&inv, &x, &int(-1), &int(0)));
        // tangent: 2 - x vs 1/x touch at x = 1 inside (0, 2)
        let line = PieceExpr::affine(int(-1), int(2));
        assert!(le_on(&line, &inv, &int(0), &int(2)));
        assert!(!lt_on(&line, &inv, &int(0), &int(2)));
        // two reciprocals with different poles
        let inv2 = PieceExpr::reciprocal(int(-1), int(1), int(0));
        assert!(le_on(&inv2, &inv, &int(0), &int(5)));
        assert!(lt_on(&inv2, &inv, &int(0), &int(5)));
        assert!(le_on(&zero, &zero, &int(0), &int(1)));
        assert!(!lt_on(&zero, &zero, &int(0), &int(1)));
    }

    #[test]
    fn images() {
        let inv = PieceExpr::reciprocal(int(0), int(1), int(0));
        let im = Image::of(&inv, &int(0), &int(1));
        assert_eq!(im.lo, ExtReal::Finite(int(1)));
        assert_eq!(im.hi, ExtReal::PosInf);
        assert!(!im.point);
        let c = Image::of(&PieceExpr::constant(int(2)), &int(0), &int(1));
        assert!(c.point);
        assert!(c.within_open(&ExtReal::Finite(int(1)), &ExtReal::Finite(int(3))));
        assert!(!c.within_open(&ExtReal::Finite(int(2)), &ExtReal::Finite(int(3))));
    }

    #[test]
    fn solve_inverts() {
        let inv = PieceExpr::reciprocal(int(1), int(3), int(-2));
        let x = inv.solve(&int(5)).unwrap();
        assert_eq!(inv.eval(&x).unwrap(), int(5));
        assert!(PieceExpr::constant(int(1)).solve(&int(1)).is_none());
    }
}
