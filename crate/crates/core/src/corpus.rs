//! Seeded random generators for functions, maps, curves, and point sets.
//!
//! Breakpoints sit on a coarse grid of `[-2, 2]` and values on a grid of
//! step 1/2, so pieces are never steep on the scale of the oracle's
//! neighborhoods at the default depth.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex2d::{Curve2, PlanarPiece, Point2};
use crate::minimal::minimal_cusco_from;
use crate::pwfun::{PWFun, PieceExpr, Side};
use crate::rat::{int, midpoint, rat, ExtReal, Rat};
use crate::subdiff::ConvexPWAffine;
use crate::svmap::{Band, IntervalUnion, IntervalValue, MultiMap};

pub struct Corpus {
    rng: ChaCha8Rng,
}

/// Kinds of set-valued maps produced by [`Corpus::convex_map`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    MinimalCusco,
    Cusco,
    Broken,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform on `{-2, -3/2, ..., 2}`.
    fn grid_value(&mut self) -> Rat {
        rat(self.rng.gen_range(-4..=4), 2)
    }

    /// `[-2, 2]` with up to four interior breakpoints on the half-integer grid.
    fn breakpoints(&mut self) -> Vec<Rat> {
        let k = self.rng.gen_range(0..=4);
        let mut interior: Vec<i64> = (-3..=3).collect();
        interior.shuffle(&mut self.rng);
        let mut pts: Vec<Rat> = interior[..k].iter().map(|n| rat(*n, 2)).collect();
        pts.push(int(-2));
        pts.push(int(2));
        pts.sort();
        pts
    }

    /// A piece on `(l, r)` with finite endpoint limits `vl`, `vr`.
    fn bounded_piece(&mut self, l: &Rat, r: &Rat, vl: &Rat, vr: &Rat) -> PieceExpr {
        if vl == vr {
            return PieceExpr::constant(vl.clone());
        }
        let len = r - l;
        match self.rng.gen_range(0..3) {
            0 => PieceExpr::through(l, vl, r, vr),
            // Pole one piece-length to the right: scale 2len(vl - vr), offset 2vl - vr.
            1 => PieceExpr::reciprocal(r + &len, int(2) * &len * (vl - vr), int(2) * vl - vr),
            _ => PieceExpr::reciprocal(l - &len, int(2) * &len * (vl - vr), int(2) * vr - vl),
        }
    }

    /// A piece blowing up at one end of `(l, r)`.
    fn blowup_piece(&mut self, l: &Rat, r: &Rat) -> PieceExpr {
        let len = r - l;
        let scale = if self.rng.gen_bool(0.5) { len } else { -len };
        let offset = self.grid_value();
        let pole = if self.rng.gen_bool(0.5) { l.clone() } else { r.clone() };
        PieceExpr::reciprocal(pole, scale, offset)
    }

    /// Pieces with finite limits; neighbors sometimes join continuously.
    fn bounded_pieces(&mut self, bps: &[Rat]) -> Vec<PieceExpr> {
        let mut pieces = Vec::new();
        let mut prev_right: Option<Rat> = None;
        for w in bps.windows(2) {
            let vl = match prev_right.take() {
                Some(v) if self.rng.gen_bool(0.4) => v,
                _ => self.grid_value(),
            };
            let vr = self.grid_value();
            pieces.push(self.bounded_piece(&w[0], &w[1], &vl, &vr));
            prev_right = Some(vr);
        }
        pieces
    }

    /// Quasicontinuous and subcontinuous: bounded pieces, each breakpoint
    /// value one of its one-sided limits.
    pub fn qc_function(&mut self) -> PWFun {
        let bps = self.breakpoints();
        let pieces = self.bounded_pieces(&bps);
        let values = (0..bps.len())
            .map(|i| {
                let t = &bps[i];
                let mut limits = Vec::new();
                if i > 0 {
                    limits.push(pieces[i - 1].limit(t, Side::Left));
                }
                if i < pieces.len() {
                    limits.push(pieces[i].limit(t, Side::Right));
                }
                limits.choose(&mut self.rng).and_then(ExtReal::finite).cloned()
            })
            .collect();
        PWFun::new(bps, pieces, values).expect("generated pieces fit")
    }

    /// Anything in the vocabulary: blow-ups, values off the limits or between
    /// them, undefined breakpoints.
    pub fn function(&mut self) -> PWFun {
        let bps = self.breakpoints();
        let mut pieces = self.bounded_pieces(&bps);
        for (j, w) in bps.windows(2).enumerate() {
            if self.rng.gen_bool(0.2) {
                pieces[j] = self.blowup_piece(&w[0], &w[1]);
            }
        }
        let values = (0..bps.len())
            .map(|i| {
                let t = &bps[i];
                let finite: Vec<Rat> = [
                    (i > 0).then(|| pieces[i - 1].limit(t, Side::Left)),
                    (i < pieces.len()).then(|| pieces[i].limit(t, Side::Right)),
                ]
                .into_iter()
                .flatten()
                .filter_map(|e| e.finite().cloned())
                .collect();
                match self.rng.gen_range(0..6) {
                    0 => None,
                    1 | 2 if !finite.is_empty() => finite.choose(&mut self.rng).cloned(),
                    3 if finite.len() == 2 => Some(midpoint(&finite[0], &finite[1])),
                    _ => Some(self.grid_value()),
                }
            })
            .collect();
        PWFun::new(bps, pieces, values).expect("generated pieces fit")
    }

    /// A random set of breakpoints of `f` at which to make it undefined.
    pub fn drop_set(&mut self, f: &PWFun) -> BTreeSet<Rat> {
        f.breakpoints().iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect()
    }

    /// A band with `lower <= upper` and finite limits; sometimes a curve.
    fn band(&mut self, l: &Rat, r: &Rat) -> Band {
        let (mut a, mut b) = (self.grid_value(), self.grid_value());
        let (mut c, mut d) = (self.grid_value(), self.grid_value());
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if c > d {
            std::mem::swap(&mut c, &mut d);
        }
        if self.rng.gen_bool(0.3) {
            return Band::curve(self.bounded_piece(l, r, &a, &c));
        }
        if self.rng.gen_bool(0.5) {
            Band::new(PieceExpr::through(l, &a, r, &c), PieceExpr::through(l, &b, r, &d))
        } else {
            // Shared pole keeps the two reciprocals ordered.
            let len = r - l;
            let lower = PieceExpr::reciprocal(r + &len, int(2) * &len * (&a - &c), int(2) * &a - &c);
            let upper = PieceExpr::reciprocal(r + &len, int(2) * &len * (&b - &d), int(2) * &b - &d);
            Band::new(lower, upper)
        }
    }

    /// Union of the finite limit intervals at breakpoint `i`.
    fn limit_hull(bps: &[Rat], bands: &[Vec<Band>], i: usize) -> Vec<IntervalValue> {
        let t = &bps[i];
        let mut parts = Vec::new();
        let sides = [(i.checked_sub(1), Side::Left), ((i < bands.len()).then_some(i), Side::Right)];
        for (j, side) in sides {
            let Some(j) = j else { continue };
            for b in &bands[j] {
                let (lo, hi) = b.limits(t, side);
                if let (Some(lo), Some(hi)) = (lo.finite(), hi.finite()) {
                    parts.push(IntervalValue::new(lo.clone(), hi.clone()).expect("ordered band"));
                }
            }
        }
        parts
    }

    /// Convex-valued maps: minimal cuscos, general cuscos, and maps broken
    /// at some breakpoint (a value missing a limit or a blow-up envelope).
    pub fn convex_map(&mut self, kind: MapKind) -> MultiMap {
        if kind == MapKind::MinimalCusco {
            return self.minimal_cusco();
        }
        let bps = self.breakpoints();
        let mut bands: Vec<Vec<Band>> = bps.windows(2).map(|w| vec![self.band(&w[0], &w[1])]).collect();
        let broken_at = self.rng.gen_range(0..bps.len());
        if kind == MapKind::Broken && self.rng.gen_bool(0.3) {
            let j = broken_at.min(bands.len() - 1);
            let (l, r) = (bps[j].clone(), bps[j + 1].clone());
            let lower = self.blowup_piece(&l, &r);
            // A blow-up lower envelope under a high constant upper one.
            let top = std::cmp::max(lower.eval(&midpoint(&l, &r)).expect("inside"), int(3)) + int(8);
            bands[j] = vec![Band::new(lower.clone(), PieceExpr::constant(top))];
            if !crate::pwfun::le_on(&bands[j][0].lower, &bands[j][0].upper, &l, &r) {
                bands[j] = vec![Band::curve(lower)];
            }
        }
        let values = (0..bps.len())
            .map(|i| {
                let parts = Self::limit_hull(&bps, &bands, i);
                let (mut lo, mut hi) = match parts.is_empty() {
                    true => (int(0), int(0)),
                    false => (
                        parts.iter().map(|p| p.lo().clone()).min().expect("nonempty"),
                        parts.iter().map(|p| p.hi().clone()).max().expect("nonempty"),
                    ),
                };
                if kind == MapKind::Broken && i == broken_at && hi > lo {
                    if self.rng.gen_bool(0.5) {
                        hi = midpoint(&lo, &hi);
                    } else {
                        lo = midpoint(&lo, &hi);
                    }
                } else if kind == MapKind::Broken && i == broken_at {
                    hi = &hi + rat(1, 2);
                    lo = hi.clone();
                } else if self.rng.gen_bool(0.3) {
                    lo = &lo - rat(self.rng.gen_range(0..=2), 2);
                    hi = &hi + rat(self.rng.gen_range(0..=2), 2);
                }
                IntervalUnion::single(IntervalValue::new(lo, hi).expect("ordered"))
            })
            .collect();
        MultiMap::new(bps, bands, values).expect("generated bands are valid")
    }

    pub fn minimal_cusco(&mut self) -> MultiMap {
        minimal_cusco_from(&self.qc_function()).expect("qc_function yields valid selections")
    }

    /// Up to two disjoint affine bands per piece, values containing every
    /// limit interval (usco) unless `usco` is false.
    pub fn multi_band_map(&mut self, usco: bool) -> MultiMap {
        let bps = self.breakpoints();
        let bands: Vec<Vec<Band>> = bps
            .windows(2)
            .map(|w| {
                let (l, r) = (&w[0], &w[1]);
                let n = self.rng.gen_range(1..=2);
                let mut ends: Vec<(Vec<Rat>, Vec<Rat>)> = Vec::new();
                // 2n sorted grid values at each end, strictly increasing.
                let mut left: Vec<i64> = (-4..=4).collect();
                let mut right = left.clone();
                left.shuffle(&mut self.rng);
                right.shuffle(&mut self.rng);
                let mut left: Vec<i64> = left[..2 * n].to_vec();
                let mut right: Vec<i64> = right[..2 * n].to_vec();
                left.sort();
                right.sort();
                let curve = self.rng.gen_bool(0.4);
                ends.push((left.iter().map(|v| rat(*v, 2)).collect(), right.iter().map(|v| rat(*v, 2)).collect()));
                let (lv, rv) = &ends[0];
                (0..n)
                    .map(|k| {
                        let lower = PieceExpr::through(l, &lv[2 * k], r, &rv[2 * k]);
                        if curve {
                            Band::curve(lower)
                        } else {
                            Band::new(lower, PieceExpr::through(l, &lv[2 * k + 1], r, &rv[2 * k + 1]))
                        }
                    })
                    .collect()
            })
            .collect();
        let broken_at = (!usco).then(|| self.rng.gen_range(0..bps.len()));
        let values = (0..bps.len())
            .map(|i| {
                let mut parts = Self::limit_hull(&bps, &bands, i);
                if Some(i) == broken_at {
                    let k = self.rng.gen_range(0..parts.len());
                    let dropped = parts.remove(k);
                    parts.retain(|p| p != &dropped);
                    let covered = !parts.is_empty()
                        && IntervalUnion::new(parts.clone())
                            .expect("nonempty")
                            .contains_interval(dropped.lo(), dropped.hi());
                    if covered || parts.is_empty() {
                        let top = parts.iter().map(|p| p.hi()).chain([dropped.hi()]).max().expect("nonempty");
                        parts = vec![IntervalValue::point(top + rat(1, 2))];
                    }
                } else if self.rng.gen_bool(0.3) {
                    parts.push(IntervalValue::point(self.grid_value()));
                }
                IntervalUnion::new(parts).expect("nonempty")
            })
            .collect();
        MultiMap::new(bps, bands, values).expect("generated bands are valid")
    }

    pub fn convex_pw_affine(&mut self) -> ConvexPWAffine {
        let bps = self.breakpoints();
        let mut s = rat(self.rng.gen_range(-8..=0), 2);
        let mut slopes = Vec::new();
        for _ in 1..bps.len() {
            slopes.push(s.clone());
            s = &s + rat(self.rng.gen_range(1..=4), 2);
        }
        ConvexPWAffine::new(bps, slopes, self.grid_value()).expect("slopes increase")
    }

    fn planar_grid_point(&mut self) -> Point2 {
        Point2::new(rat(self.rng.gen_range(-2..=2), 2), rat(self.rng.gen_range(-2..=2), 2))
    }

    /// Integer breakpoints on `[-2, 2]`, pieces interpolating grid points in
    /// `[-1, 1]^2`, breakpoint values a limit point, a hull point, or anything.
    pub fn curve(&mut self) -> Curve2 {
        let mut interior: Vec<i64> = vec![-1, 0, 1];
        interior.shuffle(&mut self.rng);
        let k = self.rng.gen_range(0..=3);
        let mut bps: Vec<Rat> = interior[..k].iter().map(|n| int(*n)).collect();
        bps.push(int(-2));
        bps.push(int(2));
        bps.sort();
        let pieces: Vec<PlanarPiece> = bps
            .windows(2)
            .map(|w| {
                let (pl, pr) = (self.planar_grid_point(), self.planar_grid_point());
                if self.rng.gen_bool(0.4) {
                    PlanarPiece::constant(pl)
                } else {
                    let len = &w[1] - &w[0];
                    let dir = pr.sub(&pl).scale(&(int(1) / len));
                    PlanarPiece::new(pl.sub(&dir.scale(&w[0])), dir)
                }
            })
            .collect();
        let values = (0..bps.len())
            .map(|i| {
                let t = &bps[i];
                let mut limits = Vec::new();
                if i > 0 {
                    limits.push(pieces[i - 1].eval(t));
                }
                if i < pieces.len() {
                    limits.push(pieces[i].eval(t));
                }
                match self.rng.gen_range(0..5) {
                    0 => None,
                    1 | 2 => limits.choose(&mut self.rng).cloned(),
                    3 => Some(
                        limits[0]
                            .add(&limits[limits.len() - 1])
                            .scale(&rat(1, 2)),
                    ),
                    _ => Some(self.planar_grid_point()),
                }
            })
            .collect();
        Curve2::new(bps, pieces, values).expect("generated curve is valid")
    }

    pub fn point_set(&mut self) -> Vec<Point2> {
        let n = self.rng.gen_range(1..=20);
        (0..n)
            .map(|_| Point2::new(rat(self.rng.gen_range(-12..=12), 4), rat(self.rng.gen_range(-12..=12), 4)))
            .collect()
    }

    /// Sorted switch points inside the domain of `map`.
    pub fn switches(&mut self, map: &MultiMap) -> BTreeSet<Rat> {
        let (a, b) = map.domain();
        let n = self.rng.gen_range(0..=4);
        (0..n)
            .map(|_| {
                let k = self.rng.gen_range(0..=16);
                a + (b - a) * rat(k, 16)
            })
            .collect()
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{is_quasicontinuous, is_subcontinuous};
    use crate::svmap::{is_cusco, is_usco};

    #[test]
    fn generators_respect_their_contracts() {
        let mut c = Corpus::new(7);
        for _ in 0..100 {
            let f = c.qc_function();
            assert!(is_quasicontinuous(&f).holds && is_subcontinuous(&f).holds, "{f}");
            assert!(is_cusco(&c.convex_map(MapKind::Cusco)).holds);
            assert!(is_usco(&c.multi_band_map(true)).holds);
            assert!(!is_usco(&c.multi_band_map(false)).holds);
            c.function();
            c.curve();
            c.convex_pw_affine();
        }
    }

    #[test]
    fn seeds_reproduce() {
        assert_eq!(Corpus::new(3).function(), Corpus::new(3).function());
    }
}
