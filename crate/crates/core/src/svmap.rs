//! Set-valued maps on a rational interval.
//!
//! On every open piece a [`MultiMap`] is a sorted list of pairwise disjoint
//! bands `lower(x) <= y <= upper(x)`; at every breakpoint it is a finite union
//! of closed intervals. Values are nonempty and compact by construction, so
//! usco-ness reduces to what happens at breakpoints.

use std::collections::BTreeSet;
use std::fmt;

use crate::analysis;
use crate::error::{Error, Result};
use crate::pwfun::{self, le_on, lt_on, Location, PWFun, PieceExpr, Side};
use crate::rat::{ExtReal, Rat};
use crate::verdict::{clause, Verdict, Witness};

/// Nonempty closed bounded interval.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalValue {
    lo: Rat,
    hi: Rat,
}

impl IntervalValue {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidMap(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(IntervalValue { lo, hi })
    }

    pub fn point(y: Rat) -> Self {
        IntervalValue { lo: y.clone(), hi: y }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, y: &Rat) -> bool {
        &self.lo <= y && y <= &self.hi
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Finite union of closed intervals, kept sorted with overlapping or touching
/// components merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalUnion(Vec<IntervalValue>);

impl IntervalUnion {
    pub fn new(mut parts: Vec<IntervalValue>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidMap("empty value".into()));
        }
        parts.sort();
        let mut merged: Vec<IntervalValue> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => {
                    if p.hi > last.hi {
                        last.hi = p.hi;
                    }
                }
                _ => merged.push(p),
            }
        }
        Ok(IntervalUnion(merged))
    }

    pub fn single(v: IntervalValue) -> Self {
        IntervalUnion(vec![v])
    }

    pub fn point(y: Rat) -> Self {
        IntervalUnion(vec![IntervalValue::point(y)])
    }

    pub fn points<'a>(ys: impl IntoIterator<Item = &'a Rat>) -> Result<Self> {
        IntervalUnion::new(ys.into_iter().cloned().map(IntervalValue::point).collect())
    }

    pub fn components(&self) -> &[IntervalValue] {
        &self.0
    }

    pub fn min(&self) -> &Rat {
        &self.0[0].lo
    }

    pub fn max(&self) -> &Rat {
        &self.0[self.0.len() - 1].hi
    }

    pub fn hull(&self) -> IntervalValue {
        IntervalValue { lo: self.min().clone(), hi: self.max().clone() }
    }

    pub fn is_convex(&self) -> bool {
        self.0.len() == 1
    }

    /// Every component is a single point.
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(IntervalValue::is_point)
    }

    pub fn contains(&self, y: &Rat) -> bool {
        self.0.iter().any(|c| c.contains(y))
    }

    /// Whether `[lo, hi]` lies in the union (necessarily in one component).
    pub fn contains_interval(&self, lo: &Rat, hi: &Rat) -> bool {
        self.0.iter().any(|c| &c.lo <= lo && hi <= &c.hi)
    }

    pub fn is_subset_of(&self, other: &IntervalUnion) -> bool {
        self.0.iter().all(|c| other.contains_interval(&c.lo, &c.hi))
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = self.0.clone();
        parts.extend(other.0.iter().cloned());
        IntervalUnion::new(parts).expect("nonempty")
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if c.is_point() {
                write!(f, "{}", c.lo)?;
            } else {
                write!(f, "[{},{}]", c.lo, c.hi)?;
            }
        }
        Ok(())
    }
}

/// Closed convex subset of the real line with possibly infinite ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtInterval {
    pub lo: ExtReal,
    pub hi: ExtReal,
}

impl ExtInterval {
    pub fn is_compact(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl fmt::Display for ExtInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo.is_finite() { "[" } else { "(" };
        let close = if self.hi.is_finite() { "]" } else { ")" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// `{ (x, y) : lower(x) <= y <= upper(x) }` over one open piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Band {
    pub lower: PieceExpr,
    pub upper: PieceExpr,
}

impl Band {
    pub fn new(lower: PieceExpr, upper: PieceExpr) -> Self {
        Band { lower, upper }
    }

    /// Degenerate band: a single curve.
    pub fn curve(expr: PieceExpr) -> Self {
        Band { lower: expr.clone(), upper: expr }
    }

    pub fn is_curve(&self) -> bool {
        self.lower == self.upper
    }

    fn value_at(&self, x: &Rat) -> Option<IntervalValue> {
        Some(IntervalValue { lo: self.lower.eval(x)?, hi: self.upper.eval(x)? })
    }

    /// Limits of the band endpoints as `x -> t` from `side`.
    pub fn limits(&self, t: &Rat, side: Side) -> (ExtReal, ExtReal) {
        (self.lower.limit(t, side), self.upper.limit(t, side))
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_curve() {
            write!(f, "{}", self.lower)
        } else {
            write!(f, "{} .. {}", self.lower, self.upper)
        }
    }
}

/// A set-valued map with band pieces and finite-union breakpoint values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiMap {
    breakpoints: Vec<Rat>,
    bands: Vec<Vec<Band>>,
    values: Vec<IntervalUnion>,
}

impl MultiMap {
    pub fn new(
        breakpoints: Vec<Rat>,
        bands: Vec<Vec<Band>>,
        values: Vec<IntervalUnion>,
    ) -> Result<Self> {
        pwfun::validate_breakpoints(&breakpoints).map_err(Error::InvalidMap)?;
        if bands.len() + 1 != breakpoints.len() || values.len() != breakpoints.len() {
            return Err(Error::InvalidMap(format!(
                "{} breakpoints need {} pieces and {} values, got {} and {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                breakpoints.len(),
                bands.len(),
                values.len()
            )));
        }
        for (j, piece) in bands.iter().enumerate() {
            let (l, r) = (&breakpoints[j], &breakpoints[j + 1]);
            if piece.is_empty() {
                return Err(Error::InvalidMap(format!("piece ({l}, {r}) has no band")));
            }
            for band in piece {
                for e in [&band.lower, &band.upper] {
                    if !e.fits(l, r) {
                        return Err(Error::InvalidMap(format!(
                            "pole of `{e}` lies inside ({l}, {r})"
                        )));
                    }
                }
                if !le_on(&band.lower, &band.upper, l, r) {
                    return Err(Error::InvalidMap(format!(
                        "band `{band}` has lower above upper somewhere in ({l}, {r})"
                    )));
                }
            }
            for w in piece.windows(2) {
                if !lt_on(&w[0].upper, &w[1].lower, l, r) {
                    return Err(Error::InvalidMap(format!(
                        "bands `{}` and `{}` are not disjoint and sorted on ({l}, {r})",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(MultiMap { breakpoints, bands, values })
    }

    pub(crate) fn from_parts(
        breakpoints: Vec<Rat>,
        bands: Vec<Vec<Band>>,
        values: Vec<IntervalUnion>,
    ) -> Self {
        debug_assert!(bands.len() + 1 == breakpoints.len() && values.len() == breakpoints.len());
        MultiMap { breakpoints, bands, values }
    }

    /// The map `x -> [lower(x), upper(x)]` for two totally defined functions.
    pub fn between(lower: &PWFun, upper: &PWFun) -> Result<Self> {
        if lower.domain() != upper.domain() {
            return Err(Error::DomainMismatch);
        }
        if !lower.is_total() || !upper.is_total() {
            return Err(Error::InvalidMap("envelope functions must be defined everywhere".into()));
        }
        let lo = lower.refine(upper.breakpoints())?;
        let hi = upper.refine(lo.breakpoints())?;
        let mut values = Vec::with_capacity(lo.breakpoints().len());
        for (t, (a, b)) in lo.breakpoints().iter().zip(lo.values().iter().zip(hi.values())) {
            let (a, b) = (a.clone().expect("total"), b.clone().expect("total"));
            if a > b {
                return Err(Error::InvalidMap(format!("lower value {a} exceeds upper value {b} at {t}")));
            }
            values.push(IntervalUnion::single(IntervalValue { lo: a, hi: b }));
        }
        let bands = lo
            .pieces()
            .iter()
            .zip(hi.pieces())
            .map(|(l, u)| vec![Band::new(l.clone(), u.clone())])
            .collect();
        MultiMap::new(lo.breakpoints().to_vec(), bands, values)
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn bands(&self) -> &[Vec<Band>] {
        &self.bands
    }

    pub fn values(&self) -> &[IntervalUnion] {
        &self.values
    }

    pub fn domain(&self) -> (&Rat, &Rat) {
        (&self.breakpoints[0], &self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn value_at(&self, x: &Rat) -> Result<IntervalUnion> {
        Ok(match pwfun::locate(&self.breakpoints, x)? {
            Location::Breakpoint(i) => self.values[i].clone(),
            Location::Piece(j) => band_values(&self.bands[j], x).expect("bands are finite inside"),
        })
    }

    /// Limit intervals `(lower limit, upper limit)` of the bands meeting
    /// breakpoint `i` from `side`; empty on the missing side of an endpoint.
    pub fn limit_intervals(&self, i: usize, side: Side) -> Vec<(ExtReal, ExtReal)> {
        let t = &self.breakpoints[i];
        let piece = match side {
            Side::Left if i > 0 => Some(i - 1),
            Side::Right if i < self.bands.len() => Some(i),
            _ => None,
        };
        piece
            .map(|j| self.bands[j].iter().map(|b| b.limits(t, side)).collect())
            .unwrap_or_default()
    }

    /// Single band per piece and single interval per breakpoint.
    pub fn is_convex_valued(&self) -> bool {
        self.bands.iter().all(|p| p.len() == 1) && self.values.iter().all(IntervalUnion::is_convex)
    }

    /// Same map with extra breakpoints inserted.
    pub fn refine<'a>(&self, points: impl IntoIterator<Item = &'a Rat>) -> Result<MultiMap> {
        let mut out = self.clone();
        for t in points {
            if let Location::Piece(j) = pwfun::locate(&out.breakpoints, t)? {
                let piece = out.bands[j].clone();
                let v = band_values(&piece, t).expect("bands are finite inside");
                out.breakpoints.insert(j + 1, t.clone());
                out.bands.insert(j + 1, piece);
                out.values.insert(j + 1, v);
            }
        }
        Ok(out)
    }

    /// Merge removable breakpoints. Two maps agree pointwise iff their
    /// canonical forms are equal.
    pub fn canonical(&self) -> MultiMap {
        let mut bps = vec![self.breakpoints[0].clone()];
        let mut bands: Vec<Vec<Band>> = Vec::new();
        let mut values = vec![self.values[0].clone()];
        for j in 0..self.bands.len() {
            let piece = &self.bands[j];
            let k = bps.len() - 1;
            let removable = j > 0
                && bands.last() == Some(piece)
                && continues_through(piece, &bps[k], &values[k]);
            if removable {
                bps[k] = self.breakpoints[j + 1].clone();
                values[k] = self.values[j + 1].clone();
            } else {
                bands.push(piece.clone());
                bps.push(self.breakpoints[j + 1].clone());
                values.push(self.values[j + 1].clone());
            }
        }
        MultiMap { breakpoints: bps, bands, values }
    }

    pub fn equivalent(&self, other: &MultiMap) -> bool {
        self.canonical() == other.canonical()
    }

    /// Pointwise containment `self(x) ⊆ other(x)` for all `x`.
    pub fn is_submap_of(&self, other: &MultiMap) -> Result<bool> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch);
        }
        let g = self.refine(other.breakpoints())?;
        let f = other.refine(g.breakpoints())?;
        for (j, piece) in g.bands.iter().enumerate() {
            let (l, r) = (&g.breakpoints[j], &g.breakpoints[j + 1]);
            let inside = piece.iter().all(|gb| {
                f.bands[j]
                    .iter()
                    .any(|fb| le_on(&fb.lower, &gb.lower, l, r) && le_on(&gb.upper, &fb.upper, l, r))
            });
            if !inside {
                return Ok(false);
            }
        }
        Ok(g.values.iter().zip(&f.values).all(|(gv, fv)| gv.is_subset_of(fv)))
    }
}

fn band_values(piece: &[Band], x: &Rat) -> Option<IntervalUnion> {
    let parts = piece.iter().map(|b| b.value_at(x)).collect::<Option<Vec<_>>>()?;
    IntervalUnion::new(parts).ok()
}

/// Whether `value` at `t` is exactly what the bands of `piece` take at `t`,
/// with the bands still pairwise disjoint there.
fn continues_through(piece: &[Band], t: &Rat, value: &IntervalUnion) -> bool {
    let Some(parts) = piece.iter().map(|b| b.value_at(t)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let separated = parts.windows(2).all(|w| w[0].hi < w[1].lo);
    separated && IntervalUnion(parts) == *value
}

impl fmt::Display for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.breakpoints.iter().enumerate() {
            write!(f, "[{t}: {}]", self.values[i])?;
            if let Some(piece) = self.bands.get(i) {
                let parts: Vec<String> = piece.iter().map(|b| b.to_string()).collect();
                write!(f, " {} ", parts.join(" | "))?;
            }
        }
        Ok(())
    }
}

/// Graph closure of a single-valued function: one curve per piece and finite
/// point sets at breakpoints, stored in canonical form so `==` is pointwise
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphMap(MultiMap);

impl GraphMap {
    pub fn from_map(map: MultiMap) -> Result<Self> {
        if !map.bands.iter().all(|p| p.len() == 1 && p[0].is_curve()) {
            return Err(Error::InvalidMap("graph maps need a single curve per piece".into()));
        }
        if !map.values.iter().all(IntervalUnion::is_finite) {
            return Err(Error::InvalidMap("graph maps need finite breakpoint sets".into()));
        }
        Ok(GraphMap(map.canonical()))
    }

    pub fn as_map(&self) -> &MultiMap {
        &self.0
    }

    pub fn into_map(self) -> MultiMap {
        self.0
    }

    pub fn curves(&self) -> impl Iterator<Item = &PieceExpr> {
        self.0.bands.iter().map(|p| &p[0].lower)
    }
}

impl fmt::Display for GraphMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Closure of the graph of a subcontinuous (possibly densely defined) `f`.
pub fn graph_closure(f: &PWFun) -> Result<GraphMap> {
    let sub = analysis::is_subcontinuous(f);
    if !sub.holds {
        return Err(Error::Rejected(Box::new(sub)));
    }
    let values = (0..f.breakpoints().len())
        .map(|i| {
            let members: BTreeSet<Rat> = f.cluster_set_at_index(i).finite_members();
            IntervalUnion::points(&members)
        })
        .collect::<Result<Vec<_>>>()?;
    let bands = f.pieces().iter().map(|p| vec![Band::curve(p.clone())]).collect();
    Ok(GraphMap(MultiMap::from_parts(f.breakpoints().to_vec(), bands, values).canonical()))
}

/// Pointwise closed convex hull.
pub fn convexify(g: &MultiMap) -> MultiMap {
    let bands = g
        .bands
        .iter()
        .map(|p| vec![Band::new(p[0].lower.clone(), p[p.len() - 1].upper.clone())])
        .collect();
    let values = g.values.iter().map(|v| IntervalUnion::single(v.hull())).collect();
    MultiMap::from_parts(g.breakpoints.clone(), bands, values).canonical()
}

/// Intersection over neighborhoods `V` of `x` of the closed convex hull of `f(V)`.
pub fn csc(f: &PWFun, x: &Rat) -> Result<ExtInterval> {
    let cs = f.cluster_set(x)?;
    let mut pts: Vec<ExtReal> = cs.limits().cloned().collect();
    if let Some(v) = cs.point_value {
        pts.push(ExtReal::Finite(v));
    }
    let lo = pts.iter().min().cloned().expect("every point has a one-sided limit");
    let hi = pts.iter().max().cloned().expect("every point has a one-sided limit");
    Ok(ExtInterval { lo, hi })
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

pub fn is_usco(map: &MultiMap) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in map.breakpoints.iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            for (lo, hi) in map.limit_intervals(i, side) {
                match (lo.finite(), hi.finite()) {
                    (Some(a), Some(b)) => {
                        if !map.values[i].contains_interval(a, b) {
                            witnesses.push(Witness::new(
                                t.clone(),
                                format!(
                                    "{} limit values [{a}, {b}] are not contained in F({t}) = {}",
                                    side_name(side),
                                    map.values[i]
                                ),
                            ));
                        }
                    }
                    _ => witnesses.push(Witness::new(
                        t.clone(),
                        format!(
                            "{} values escape every neighborhood of F({t}) = {} (band limit {lo}..{hi})",
                            side_name(side),
                            map.values[i]
                        ),
                    )),
                }
            }
        }
    }
    Verdict::from_witnesses(clause::USCO, witnesses)
}

pub fn is_cusco(map: &MultiMap) -> Verdict {
    let mut v = is_usco(map);
    v.clause = clause::CUSCO.to_string();
    for (j, piece) in map.bands.iter().enumerate() {
        if piece.len() > 1 {
            let (l, r) = (&map.breakpoints[j], &map.breakpoints[j + 1]);
            v.witnesses.push(Witness::new(
                crate::rat::midpoint(l, r),
                format!("{} disjoint bands on ({l}, {r}): value is not convex", piece.len()),
            ));
        }
    }
    for (i, value) in map.values.iter().enumerate() {
        if !value.is_convex() {
            v.witnesses.push(Witness::new(
                map.breakpoints[i].clone(),
                format!("value {value} is not convex"),
            ));
        }
    }
    v.holds = v.witnesses.is_empty();
    v
}

pub fn has_closed_graph(map: &MultiMap) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in map.breakpoints.iter().enumerate() {
        for side in [Side::Left, Side::Right] {
            for (lo, hi) in map.limit_intervals(i, side) {
                let ok = match (&lo, &hi) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => map.values[i].contains_interval(a, b),
                    // Both ends run off to the same infinity: no finite limit points.
                    (ExtReal::PosInf, ExtReal::PosInf) | (ExtReal::NegInf, ExtReal::NegInf) => true,
                    // A half-line (or the whole line) of limit points.
                    _ => false,
                };
                if !ok {
                    witnesses.push(Witness::new(
                        t.clone(),
                        format!(
                            "{} limit points {lo}..{hi} are not contained in F({t}) = {}",
                            side_name(side),
                            map.values[i]
                        ),
                    ));
                }
            }
        }
    }
    Verdict::from_witnesses(clause::CLOSED_GRAPH, witnesses)
}

/// `(inf F, sup F)` as totally defined piecewise functions.
pub fn envelopes(map: &MultiMap) -> (PWFun, PWFun) {
    let bps = map.breakpoints.clone();
    let inf_pieces = map.bands.iter().map(|p| p[0].lower.clone()).collect();
    let sup_pieces = map.bands.iter().map(|p| p[p.len() - 1].upper.clone()).collect();
    let inf_values = map.values.iter().map(|v| Some(v.min().clone())).collect();
    let sup_values = map.values.iter().map(|v| Some(v.max().clone())).collect();
    let inf = PWFun::new(bps.clone(), inf_pieces, inf_values).expect("bands fit their pieces");
    let sup = PWFun::new(bps, sup_pieces, sup_values).expect("bands fit their pieces");
    (inf, sup)
}
