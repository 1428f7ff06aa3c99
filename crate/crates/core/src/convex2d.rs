//! Exact planar convex geometry and planar piecewise-affine curves.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pwfun::{self, Location};
use crate::rat::{int, sign, Rat};
use crate::verdict::{clause, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point2 { x, y }
    }

    pub fn dot(&self, o: &Point2) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Rat) -> Point2 {
        Point2::new(&self.x * k, &self.y * k)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Sign of the turn `a -> b -> c` (positive for counterclockwise).
fn orient(a: &Point2, b: &Point2, c: &Point2) -> i32 {
    let u = b.sub(a);
    let v = c.sub(a);
    sign(&(&u.x * &v.y - &u.y * &v.x))
}

/// Closest point of the segment `[a, b]` to `p`.
fn closest_on_segment(a: &Point2, b: &Point2, p: &Point2) -> Point2 {
    let d = b.sub(a);
    let len2 = d.dot(&d);
    if len2.is_zero() {
        return a.clone();
    }
    let t = p.sub(a).dot(&d) / len2;
    let t = t.clamp(Rat::zero(), Rat::one());
    a.add(&d.scale(&t))
}

/// A convex polygon with vertices in counterclockwise order, starting at the
/// lexicographically least vertex. One vertex is a point, two a segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Edges in order; a segment has one, a point a degenerate one.
    fn edges(&self) -> Vec<(&Point2, &Point2)> {
        let n = self.vertices.len();
        match n {
            1 => vec![(&self.vertices[0], &self.vertices[0])],
            2 => vec![(&self.vertices[0], &self.vertices[1])],
            _ => (0..n).map(|i| (&self.vertices[i], &self.vertices[(i + 1) % n])).collect(),
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point2) -> bool {
        match self.vertices.len() {
            1 => &self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                orient(a, b, p) == 0 && p.sub(a).dot(&p.sub(b)) <= Rat::zero()
            }
            _ => self.edges().iter().all(|(a, b)| orient(a, b, p) >= 0),
        }
    }

    pub fn contains_polygon(&self, other: &Polygon) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "hull {{{}}}", parts.join(" "))
    }
}

/// Convex hull by the monotone chain, dropping collinear points.
pub fn hull<'a>(points: impl IntoIterator<Item = &'a Point2>) -> Result<Polygon> {
    let pts: Vec<Point2> = points.into_iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if pts.len() <= 2 {
        return Ok(Polygon { vertices: pts });
    }
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(Polygon { vertices: lower })
}

pub fn extreme_points(p: &Polygon) -> BTreeSet<Point2> {
    p.vertices.iter().cloned().collect()
}

/// Every extreme point of the hull of `k` belongs to `k`.
pub fn milman_check(k: &[Point2]) -> Result<Verdict> {
    let h = hull(k)?;
    let members: BTreeSet<&Point2> = k.iter().collect();
    let witnesses = extreme_points(&h)
        .into_iter()
        .filter(|e| !members.contains(e))
        .map(|e| Witness::new(e.x.clone(), format!("extreme point {e} is not in the set")))
        .collect();
    Ok(Verdict::from_witnesses(clause::MILMAN, witnesses))
}

/// The open half-plane `{p : normal·p > threshold}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinFunc2 {
    pub normal: Point2,
    pub threshold: Rat,
}

impl LinFunc2 {
    pub fn new(normal: Point2, threshold: Rat) -> Result<Self> {
        if normal.is_origin() {
            return Err(Error::InvalidCurve("half-plane normal must be nonzero".into()));
        }
        Ok(LinFunc2 { normal, threshold })
    }

    pub fn eval(&self, p: &Point2) -> Rat {
        self.normal.dot(p)
    }

    /// Strictly on the open side.
    pub fn contains(&self, p: &Point2) -> bool {
        self.eval(p) > self.threshold
    }

    /// `h·p < λ` on all of `p` and `h·q > λ` on all of `q`.
    pub fn separates(&self, p: &Polygon, q: &Polygon) -> bool {
        p.vertices.iter().all(|v| self.eval(v) < self.threshold) && q.vertices.iter().all(|v| self.contains(v))
    }
}

impl fmt::Display for LinFunc2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{p : {}·p > {}}}", self.normal, self.threshold)
    }
}

/// Strict separation from the closest pair of points, verified by vertex sweeps.
pub fn separate(p: &Polygon, q: &Polygon) -> Result<LinFunc2> {
    let mut best: Option<(Rat, Point2, Point2)> = None;
    let mut consider = |a: Point2, b: Point2| {
        let d = b.sub(&a);
        let d2 = d.dot(&d);
        if best.as_ref().is_none_or(|(m, _, _)| &d2 < m) {
            best = Some((d2, a, b));
        }
    };
    for v in &p.vertices {
        for (a, b) in q.edges() {
            consider(v.clone(), closest_on_segment(a, b, v));
        }
    }
    for v in &q.vertices {
        for (a, b) in p.edges() {
            consider(closest_on_segment(a, b, v), v.clone());
        }
    }
    let (d2, ps, qs) = best.expect("polygons are nonempty");
    if d2.is_zero() {
        return Err(Error::NotSeparable);
    }
    let normal = qs.sub(&ps);
    let threshold = normal.dot(&ps.add(&qs)) / int(2);
    let cert = LinFunc2 { normal, threshold };
    // A small polygon strictly inside a large one has no touching features.
    if cert.separates(p, q) {
        Ok(cert)
    } else {
        Err(Error::NotSeparable)
    }
}

/// `p(x) = base + x·dir` on one open piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarPiece {
    pub base: Point2,
    pub dir: Point2,
}

impl PlanarPiece {
    pub fn new(base: Point2, dir: Point2) -> Self {
        PlanarPiece { base, dir }
    }

    pub fn constant(p: Point2) -> Self {
        PlanarPiece { base: p, dir: Point2::new(Rat::zero(), Rat::zero()) }
    }

    pub fn eval(&self, x: &Rat) -> Point2 {
        self.base.add(&self.dir.scale(x))
    }
}

impl fmt::Display for PlanarPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} {}", self.base, self.dir)
    }
}

/// A planar piecewise-affine curve, possibly undefined at some breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve2 {
    breakpoints: Vec<Rat>,
    pieces: Vec<PlanarPiece>,
    values: Vec<Option<Point2>>,
}

impl Curve2 {
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<PlanarPiece>, values: Vec<Option<Point2>>) -> Result<Self> {
        pwfun::validate_breakpoints(&breakpoints).map_err(Error::InvalidCurve)?;
        if pieces.len() + 1 != breakpoints.len() || values.len() != breakpoints.len() {
            return Err(Error::InvalidCurve(format!(
                "{} breakpoints need {} pieces and {} values",
                breakpoints.len(),
                breakpoints.len() - 1,
                breakpoints.len()
            )));
        }
        Ok(Curve2 { breakpoints, pieces, values })
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[PlanarPiece] {
        &self.pieces
    }

    pub fn values(&self) -> &[Option<Point2>] {
        &self.values
    }

    pub fn eval(&self, x: &Rat) -> Result<Option<Point2>> {
        Ok(match pwfun::locate(&self.breakpoints, x)? {
            Location::Breakpoint(i) => self.values[i].clone(),
            Location::Piece(j) => Some(self.pieces[j].eval(x)),
        })
    }

    /// One-sided limit points at breakpoint `i` (left first when present).
    pub fn limit_points(&self, i: usize) -> Vec<Point2> {
        let t = &self.breakpoints[i];
        let mut out = Vec::new();
        if i > 0 {
            out.push(self.pieces[i - 1].eval(t));
        }
        if i < self.pieces.len() {
            out.push(self.pieces[i].eval(t));
        }
        out
    }
}

impl fmt::Display for Curve2 {
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

/// Each defined breakpoint value is one of its one-sided limit points.
/// Affine pieces make every planar curve subcontinuous.
pub fn planar_quasicontinuous(f: &Curve2) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in f.breakpoints.iter().enumerate() {
        let Some(v) = &f.values[i] else { continue };
        let limits = f.limit_points(i);
        if !limits.contains(v) {
            witnesses.push(Witness::new(t.clone(), format!("value {v} is not a one-sided limit point")));
        }
    }
    Verdict::from_witnesses(clause::PLANAR_QC, witnesses)
}

/// Each defined breakpoint value lies in the hull of its one-sided limit
/// points; failures carry a half-plane containing the value and no limit.
pub fn planar_hyperplane_minimal(f: &Curve2) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in f.breakpoints.iter().enumerate() {
        let Some(v) = &f.values[i] else { continue };
        let limits = hull(&f.limit_points(i)).expect("every breakpoint has a limit");
        if !limits.contains(v) {
            let point = hull([v]).expect("nonempty");
            let w = separate(&limits, &point).expect("a point outside a polygon is separable");
            witnesses.push(Witness::new(
                t.clone(),
                format!("value {v} lies outside {limits}; half-plane {w} misses every limit"),
            ));
        }
    }
    Verdict::from_witnesses(clause::PLANAR_HPMIN, witnesses)
}

/// Polygon-valued map: a single point on each open piece, a hull at breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarCuscoMap {
    breakpoints: Vec<Rat>,
    pieces: Vec<PlanarPiece>,
    values: Vec<Polygon>,
}

impl PlanarCuscoMap {
    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Polygon] {
        &self.values
    }

    pub fn value_at(&self, x: &Rat) -> Result<Polygon> {
        Ok(match pwfun::locate(&self.breakpoints, x)? {
            Location::Breakpoint(i) => self.values[i].clone(),
            Location::Piece(j) => hull([&self.pieces[j].eval(x)])?,
        })
    }
}

impl fmt::Display for PlanarCuscoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.breakpoints.iter().enumerate() {
            write!(f, "[{t}: {}]", self.values[i])?;
            if let Some(p) = self.pieces.get(i) {
                write!(f, " {p} ")?;
            }
        }
        Ok(())
    }
}

/// `x -> co cl f(x)` for a quasicontinuous planar curve.
pub fn planar_minimal_cusco_from(f: &Curve2) -> Result<PlanarCuscoMap> {
    let qc = planar_quasicontinuous(f);
    if !qc.holds {
        return Err(Error::Rejected(Box::new(qc)));
    }
    let values = (0..f.breakpoints.len()).map(|i| hull(&f.limit_points(i))).collect::<Result<_>>()?;
    Ok(PlanarCuscoMap { breakpoints: f.breakpoints.clone(), pieces: f.pieces.clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn pt(x: i64, y: i64) -> Point2 {
        Point2::new(int(x), int(y))
    }

    fn square(dx: i64) -> Polygon {
        hull(&[pt(dx, 0), pt(dx + 1, 0), pt(dx + 1, 1), pt(dx, 1)]).unwrap()
    }

    fn step_curve(value: Point2) -> Curve2 {
        Curve2::new(
            vec![int(-1), int(0), int(1)],
            vec![PlanarPiece::constant(pt(0, 0)), PlanarPiece::constant(pt(1, 1))],
            vec![Some(pt(0, 0)), Some(value), Some(pt(1, 1))],
        )
        .unwrap()
    }

    #[test]
    fn hull_examples() {
        assert!(hull(&[pt(0, 0)]).unwrap().is_point());
        let t = hull(&[pt(0, 0), pt(1, 0), pt(0, 1), Point2::new(rat(1, 4), rat(1, 4))]).unwrap();
        assert_eq!(t.vertices(), &[pt(0, 0), pt(1, 0), pt(0, 1)]);
        assert!(hull(&[pt(1, 1), pt(0, 0)]).unwrap().is_segment());
        assert_eq!(hull(&[pt(0, 0), pt(1, 1), pt(2, 2)]).unwrap().vertices(), &[pt(0, 0), pt(2, 2)]);
        assert!(hull(&[]).is_err());
    }

    #[test]
    fn extreme_point_examples() {
        assert_eq!(extreme_points(&square(0)).len(), 4);
        let seg = hull(&[pt(0, 0), pt(1, 0), pt(2, 0)]).unwrap();
        assert_eq!(extreme_points(&seg), [pt(0, 0), pt(2, 0)].into_iter().collect());
        assert!(milman_check(&[pt(0, 0)]).unwrap().holds);
    }

    #[test]
    fn separation_examples() {
        let (p, q) = (square(0), square(3));
        let h = separate(&p, &q).unwrap();
        assert!(h.separates(&p, &q));
        assert_eq!(h.threshold / h.normal.x.clone(), int(2));
        let h = separate(&hull(&[pt(0, 0)]).unwrap(), &hull(&[pt(0, 5)]).unwrap()).unwrap();
        assert_eq!(h.threshold / h.normal.y.clone(), rat(5, 2));
        assert!(matches!(separate(&square(0), &hull(&[pt(0, 0), pt(2, 2), pt(0, 2)]).unwrap()), Err(Error::NotSeparable)));
        let big = hull(&[pt(-5, -5), pt(5, -5), pt(5, 5), pt(-5, 5)]).unwrap();
        assert!(separate(&big, &square(0)).is_err());
    }

    #[test]
    fn planar_step_examples() {
        let f = step_curve(pt(0, 0));
        let m = planar_minimal_cusco_from(&f).unwrap();
        assert_eq!(m.value_at(&int(0)).unwrap().vertices(), &[pt(0, 0), pt(1, 1)]);
        assert!(m.value_at(&rat(1, 2)).unwrap().is_point());
        assert!(planar_hyperplane_minimal(&f).holds);
        let bad = step_curve(pt(5, 5));
        match planar_minimal_cusco_from(&bad) {
            Err(Error::Rejected(v)) => assert_eq!(v.failing_points(), vec![int(0)]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(!planar_hyperplane_minimal(&bad).holds);
        let mid = step_curve(Point2::new(rat(1, 2), rat(1, 2)));
        assert!(planar_hyperplane_minimal(&mid).holds);
        assert!(!planar_quasicontinuous(&mid).holds);
    }

    #[test]
    fn continuous_curve_is_singleton_valued() {
        let piece = PlanarPiece::new(pt(1, 2), pt(1, -1));
        let f = Curve2::new(
            vec![int(0), int(1), int(2)],
            vec![piece.clone(), piece.clone()],
            vec![Some(pt(1, 2)), Some(pt(2, 1)), Some(pt(3, 0))],
        )
        .unwrap();
        let m = planar_minimal_cusco_from(&f).unwrap();
        assert!(m.values().iter().all(Polygon::is_point));
    }

    fn small_point() -> impl Strategy<Value = Point2> {
        (-6i64..=6, -6i64..=6, 1i64..=3).prop_map(|(x, y, d)| Point2::new(rat(x, d), rat(y, d)))
    }

    proptest! {
        #[test]
        fn hull_contains_inputs_and_is_idempotent(pts in prop::collection::vec(small_point(), 1..20)) {
            let h = hull(&pts).unwrap();
            prop_assert!(pts.iter().all(|p| h.contains(p)));
            prop_assert_eq!(hull(h.vertices()).unwrap(), h.clone());
            prop_assert!(milman_check(&pts).unwrap().holds);
        }

        #[test]
        fn hull_is_monotone(a in prop::collection::vec(small_point(), 1..10), b in prop::collection::vec(small_point(), 0..10)) {
            let small = hull(&a).unwrap();
            let all: Vec<Point2> = a.iter().chain(&b).cloned().collect();
            prop_assert!(hull(&all).unwrap().contains_polygon(&small));
        }

        #[test]
        fn separation_certificates_verify(a in prop::collection::vec(small_point(), 1..6), b in prop::collection::vec(small_point(), 1..6)) {
            let p = hull(&a).unwrap();
            let shifted: Vec<Point2> = b.iter().map(|q| q.add(&pt(20, 3))).collect();
            let q = hull(&shifted).unwrap();
            let h = separate(&p, &q).unwrap();
            prop_assert!(h.separates(&p, &q));
        }
    }
}
