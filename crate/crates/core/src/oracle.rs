//! Brute-force checks that evaluate the defining quantifiers directly over
//! finite families of neighborhoods, value intervals, half-lines, and
//! half-planes.
//!
//! A failing oracle verdict is a concrete counterexample to the quantifier.
//! A passing verdict is evidence at the sampled resolution only.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::convex2d::{Curve2, Point2};
use crate::error::{Error, Result};
use crate::pwfun::{Image, PWFun, PieceExpr, Side};
use crate::rat::{int, midpoint, ExtReal, Rat};
use crate::svmap::{is_usco, Band, IntervalUnion, MultiMap};
use crate::verdict::{clause, Ray, RayDirection, Verdict, Witness};

pub const DEFAULT_DEPTH: u32 = 6;

/// Symmetric neighborhoods `(c - r, c + r)` of a point, intersected with the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NbhdBasis {
    pub center: Rat,
    /// Strictly decreasing.
    pub radii: Vec<Rat>,
}

impl NbhdBasis {
    /// Radii `g, g/2, ..., g/2^depth` where `g` is the distance from `center`
    /// to the nearest other breakpoint.
    pub fn around(breakpoints: &[Rat], center: &Rat, depth: u32) -> NbhdBasis {
        let g = breakpoints
            .iter()
            .filter(|t| *t != center)
            .map(|t| if t > center { t - center } else { center - t })
            .min()
            .expect("at least two breakpoints");
        let mut radii = vec![g];
        for _ in 0..depth {
            let next = radii.last().expect("nonempty") / int(2);
            radii.push(next);
        }
        NbhdBasis { center: center.clone(), radii }
    }
}

/// Open half-lines at the thresholds where a verdict can change: the given
/// critical values, their midpoints, and one unit beyond the extremes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySet {
    pub rays: Vec<Ray>,
}

impl RaySet {
    pub fn around<'a>(critical: impl IntoIterator<Item = &'a Rat>) -> RaySet {
        let vals: BTreeSet<Rat> = critical.into_iter().cloned().collect();
        let mut thresholds = vals.clone();
        let v: Vec<&Rat> = vals.iter().collect();
        for w in v.windows(2) {
            thresholds.insert(midpoint(w[0], w[1]));
        }
        if let (Some(lo), Some(hi)) = (v.first(), v.last()) {
            thresholds.insert(*lo - int(1));
            thresholds.insert(*hi + int(1));
        } else {
            thresholds.insert(Rat::zero());
        }
        let rays = thresholds
            .into_iter()
            .flat_map(|t| [Ray::up(t.clone()), Ray::down(t)])
            .collect();
        RaySet { rays }
    }
}

fn ray_bounds(ray: &Ray) -> (ExtReal, ExtReal) {
    let t = ExtReal::Finite(ray.threshold.clone());
    match ray.direction {
        RayDirection::Up => (t, ExtReal::PosInf),
        RayDirection::Down => (ExtReal::NegInf, t),
    }
}

/// Pieces of `(c - r, c + r) ∩ [a, b]` as `(piece index, l, r)` open
/// intervals, and the breakpoint indices it contains.
fn split(breakpoints: &[Rat], c: &Rat, r: &Rat) -> (Vec<(usize, Rat, Rat)>, Vec<usize>) {
    let (lo, hi) = (c - r, c + r);
    let mut parts = Vec::new();
    for j in 0..breakpoints.len() - 1 {
        let l = std::cmp::max(&breakpoints[j], &lo);
        let u = std::cmp::min(&breakpoints[j + 1], &hi);
        if l < u {
            parts.push((j, l.clone(), u.clone()));
        }
    }
    let inside = (0..breakpoints.len())
        .filter(|&i| breakpoints[i] > lo && breakpoints[i] < hi)
        .collect();
    (parts, inside)
}

/// Two rationals strictly inside the extended open interval `(a, b)`.
fn pick_inside(a: &ExtReal, b: &ExtReal) -> (Rat, Rat) {
    match (a, b) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let third = (b - a) / int(3);
            (a + &third, b - &third)
        }
        (ExtReal::Finite(a), _) => (a + int(1), a + int(2)),
        (_, ExtReal::Finite(b)) => (b - int(2), b - int(1)),
        _ => (int(0), int(1)),
    }
}

/// A nonempty open `G ⊆ (l, r)` with `expr(G) ⊆ (lo, hi)`, verified exactly.
fn open_preimage(expr: &PieceExpr, l: &Rat, r: &Rat, lo: &ExtReal, hi: &ExtReal) -> Option<(Rat, Rat)> {
    let img = Image::of(expr, l, r);
    if !img.meets_open(lo, hi) {
        return None;
    }
    let (u, w) = if img.point {
        (l.clone(), r.clone())
    } else {
        let a = std::cmp::max(&img.lo, lo);
        let b = std::cmp::min(&img.hi, hi);
        let (y1, y2) = pick_inside(a, b);
        let (x1, x2) = (expr.solve(&y1)?, expr.solve(&y2)?);
        if x1 < x2 { (x1, x2) } else { (x2, x1) }
    };
    let ok = &u >= l && &w <= r && u < w && Image::of(expr, &u, &w).within_open(lo, hi);
    ok.then_some((u, w))
}

/// Breakpoints followed by piece midpoints: the points each oracle visits.
fn test_points(breakpoints: &[Rat]) -> Vec<Rat> {
    let mut pts = breakpoints.to_vec();
    pts.extend(breakpoints.windows(2).map(|w| midpoint(&w[0], &w[1])));
    pts
}

fn eps_family(center: &Rat, critical: &BTreeSet<Rat>) -> BTreeSet<Rat> {
    let mut out: BTreeSet<Rat> = critical
        .iter()
        .filter(|c| *c != center)
        .map(|c| if c > center { (c - center) / int(2) } else { (center - c) / int(2) })
        .collect();
    out.insert(int(1));
    out
}

/// For every `V = (f(x) - ε, f(x) + ε)` and basis neighborhood `U` of `x`,
/// look for an open `G ⊆ U` with `f(G) ⊆ V`.
pub fn oracle_quasicontinuous(f: &PWFun, depth: u32) -> Verdict {
    let bps = f.breakpoints();
    let mut witnesses = Vec::new();
    'points: for x in test_points(bps) {
        let Some(v) = f.eval(&x).expect("test points lie in the domain") else { continue };
        let mut critical: BTreeSet<Rat> = BTreeSet::new();
        if let Ok((l, r)) = f.one_sided_limits(&x) {
            critical.extend([l, r].into_iter().flatten().filter_map(|e| e.finite().cloned()));
        }
        let basis = NbhdBasis::around(bps, &x, depth);
        for eps in eps_family(&v, &critical) {
            let (lo, hi) = (ExtReal::Finite(&v - &eps), ExtReal::Finite(&v + &eps));
            for r in &basis.radii {
                let (parts, _) = split(bps, &x, r);
                let found = parts
                    .iter()
                    .any(|(j, l, u)| open_preimage(&f.pieces()[*j], l, u, &lo, &hi).is_some());
                if !found {
                    witnesses.push(Witness::new(
                        x.clone(),
                        format!("no open set in ({x} - {r}, {x} + {r}) maps into ({lo}, {hi})"),
                    ));
                    continue 'points;
                }
            }
        }
    }
    Verdict::from_witnesses(clause::ORACLE_QC, witnesses)
}

/// Whether some value of `f` on `U = (x - r, x + r)` meets `(lo, hi)`, and
/// whether some open subset of `U` maps entirely into it.
fn hits_and_preimage(f: &PWFun, x: &Rat, r: &Rat, lo: &ExtReal, hi: &ExtReal) -> (bool, bool) {
    let (parts, inside) = split(f.breakpoints(), x, r);
    let preimage = parts
        .iter()
        .any(|(j, l, u)| open_preimage(&f.pieces()[*j], l, u, lo, hi).is_some());
    let hit_piece = parts.iter().any(|(j, l, u)| Image::of(&f.pieces()[*j], l, u).meets_open(lo, hi));
    let hit_point = inside.iter().any(|&i| {
        f.values()[i]
            .as_ref()
            .is_some_and(|v| &ExtReal::Finite(v.clone()) > lo && &ExtReal::Finite(v.clone()) < hi)
    });
    (hit_piece || hit_point, preimage)
}

fn critical_values(f: &PWFun, x: &Rat) -> Vec<Rat> {
    let cs = f.cluster_set(x).expect("test points lie in the domain");
    cs.finite_members().into_iter().collect()
}

/// For every half-line `W` and basis neighborhood `U` with `f(U) ∩ W ≠ ∅`,
/// look for an open `V ⊆ U` with `f(V) ⊆ W`.
pub fn oracle_hyperplane_minimal(f: &PWFun, depth: u32) -> Verdict {
    let bps = f.breakpoints();
    let mut witnesses = Vec::new();
    'points: for x in test_points(bps) {
        let basis = NbhdBasis::around(bps, &x, depth);
        let rays = RaySet::around(&critical_values(f, &x));
        for ray in rays.rays {
            let (lo, hi) = ray_bounds(&ray);
            for r in &basis.radii {
                let (hit, preimage) = hits_and_preimage(f, &x, r, &lo, &hi);
                if hit && !preimage {
                    witnesses.push(
                        Witness::new(
                            x.clone(),
                            format!("f({x} - {r}, {x} + {r}) meets {ray} but no open subset maps into it"),
                        )
                        .with_ray(ray),
                    );
                    continue 'points;
                }
            }
        }
    }
    Verdict::from_witnesses(clause::ORACLE_HPMIN, witnesses)
}

/// Open ε-fattening of a finite union of closed intervals, as disjoint open intervals.
fn fatten(value: &IntervalUnion, eps: &Rat) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for c in value.components() {
        let (lo, hi) = (c.lo() - eps, c.hi() + eps);
        match out.last_mut() {
            Some(last) if last.1 > lo => last.1 = hi,
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Whether the band's graph over the open `(l, u)` lies inside `(p, q)`.
fn band_within(band: &Band, l: &Rat, u: &Rat, p: &Rat, q: &Rat) -> bool {
    let (p, q) = (ExtReal::Finite(p.clone()), ExtReal::Finite(q.clone()));
    let lower = Image::of(&band.lower, l, u);
    let upper = Image::of(&band.upper, l, u);
    let low_ok = if lower.point { lower.lo > p } else { lower.lo >= p };
    let high_ok = if upper.point { upper.hi < q } else { upper.hi <= q };
    low_ok && high_ok
}

fn map_critical_values(map: &MultiMap, x: &Rat) -> BTreeSet<Rat> {
    let mut out = BTreeSet::new();
    let value = map.value_at(x).expect("test points lie in the domain");
    for c in value.components() {
        out.insert(c.lo().clone());
        out.insert(c.hi().clone());
    }
    if let Ok(i) = map.breakpoints().binary_search(x) {
        for side in [Side::Left, Side::Right] {
            for (lo, hi) in map.limit_intervals(i, side) {
                out.extend([lo, hi].into_iter().filter_map(|e| e.finite().cloned()));
            }
        }
    }
    out
}

/// For every ε-fattening `V` of `F(x)`, look for a basis neighborhood `U`
/// of `x` with `F(U) ⊆ V`; band images are computed exactly.
pub fn oracle_usc(map: &MultiMap, depth: u32) -> Verdict {
    let bps = map.breakpoints();
    let mut witnesses = Vec::new();
    'points: for x in test_points(bps) {
        let value = map.value_at(&x).expect("test points lie in the domain");
        let critical = map_critical_values(map, &x);
        let mut eps: BTreeSet<Rat> = BTreeSet::new();
        for a in &critical {
            eps.extend(eps_family(a, &critical));
        }
        let basis = NbhdBasis::around(bps, &x, depth);
        for e in eps {
            let v = fatten(&value, &e);
            let fits = |band: &Band, l: &Rat, u: &Rat| v.iter().any(|(p, q)| band_within(band, l, u, p, q));
            let exists = basis.radii.iter().any(|r| {
                let (parts, inside) = split(bps, &x, r);
                let bands_ok = parts
                    .iter()
                    .all(|(j, l, u)| map.bands()[*j].iter().all(|b| fits(b, l, u)));
                let points_ok = inside.iter().all(|&i| {
                    map.values()[i].components().iter().all(|c| v.iter().any(|(p, q)| c.lo() > p && c.hi() < q))
                });
                bands_ok && points_ok
            });
            if !exists {
                witnesses.push(Witness::new(
                    x.clone(),
                    format!("no neighborhood of {x} maps into the {e}-fattening of F({x}) = {value}"),
                ));
                continue 'points;
            }
        }
    }
    Verdict::from_witnesses(clause::ORACLE_USC, witnesses)
}

/// Ways to shrink one piece: each band kept, cut to its lower or upper
/// curve, or dropped, with at least one band left.
fn piece_choices(piece: &[Band]) -> Vec<Vec<Band>> {
    let mut out: Vec<Vec<Band>> = vec![Vec::new()];
    for band in piece {
        let mut options = vec![Some(band.clone())];
        if !band.is_curve() {
            options.push(Some(Band::curve(band.lower.clone())));
            options.push(Some(Band::curve(band.upper.clone())));
        }
        if piece.len() > 1 {
            options.push(None);
        }
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.extend(o.clone());
                    p
                })
            })
            .collect();
    }
    out.retain(|p| !p.is_empty());
    // The unchanged piece first, so the search stays close to F.
    out.sort_by_key(|p| p.as_slice() != piece);
    out
}

/// Candidate values at breakpoint `i`: `F(t)` and every nonempty subset of
/// its critical points that lies in `F(t)`.
fn value_choices(map: &MultiMap, i: usize) -> Vec<IntervalUnion> {
    let t = &map.breakpoints()[i];
    let value = &map.values()[i];
    let critical: Vec<Rat> = map_critical_values(map, t)
        .into_iter()
        .filter(|c| value.contains(c))
        .collect();
    let mut out = vec![value.clone()];
    let n = critical.len().min(12);
    for mask in 1u32..(1 << n) {
        let pts: Vec<&Rat> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| &critical[k]).collect();
        let cand = IntervalUnion::points(pts).expect("nonempty");
        if !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// The value `v` contains every limit interval of the bands meeting `t`.
fn holds_limits(t: &Rat, v: &IntervalUnion, bands: &[Band], side: Side) -> bool {
    bands.iter().all(|b| {
        let (lo, hi) = b.limits(t, side);
        match (lo.finite(), hi.finite()) {
            (Some(a), Some(c)) => v.contains_interval(a, c),
            _ => false,
        }
    })
}

/// Search every submap obtained by shrinking pieces and breakpoint values
/// for a proper usco submap.
pub fn submap_search(map: &MultiMap) -> Result<Verdict> {
    let pre = is_usco(map);
    if !pre.holds {
        return Err(Error::Rejected(Box::new(pre)));
    }
    let bps = map.breakpoints();
    let pieces: Vec<Vec<Vec<Band>>> = map.bands().iter().map(|p| piece_choices(p)).collect();
    let values: Vec<Vec<IntervalUnion>> = (0..bps.len()).map(|i| value_choices(map, i)).collect();
    let target = map.canonical();
    let mut chosen_pieces: Vec<Vec<Band>> = Vec::new();
    let mut chosen_values: Vec<IntervalUnion> = Vec::new();
    let found = search(map, &pieces, &values, &target, &mut chosen_values, &mut chosen_pieces);
    let witnesses = match found {
        Some(sub) => vec![Witness::new(first_difference(&sub, map), format!("proper usco submap {sub}"))],
        None => Vec::new(),
    };
    Ok(Verdict::from_witnesses(clause::ORACLE_SUBMAP, witnesses))
}

/// Depth-first over `value_0, piece_0, value_1, ...`, pruning on the limit
/// containment at each breakpoint.
fn search(
    map: &MultiMap,
    pieces: &[Vec<Vec<Band>>],
    values: &[Vec<IntervalUnion>],
    target: &MultiMap,
    chosen_values: &mut Vec<IntervalUnion>,
    chosen_pieces: &mut Vec<Vec<Band>>,
) -> Option<MultiMap> {
    let bps = map.breakpoints();
    let i = chosen_values.len();
    if i == bps.len() {
        let cand = MultiMap::new(bps.to_vec(), chosen_pieces.clone(), chosen_values.clone()).ok()?;
        let proper = cand.canonical() != *target;
        return (proper && is_usco(&cand).holds).then_some(cand);
    }
    let t = &bps[i];
    for v in &values[i] {
        if i > 0 && !holds_limits(t, v, &chosen_pieces[i - 1], Side::Left) {
            continue;
        }
        chosen_values.push(v.clone());
        if i + 1 == bps.len() {
            if let Some(found) = search(map, pieces, values, target, chosen_values, chosen_pieces) {
                return Some(found);
            }
        } else {
            for p in &pieces[i] {
                if !holds_limits(t, v, p, Side::Right) {
                    continue;
                }
                chosen_pieces.push(p.clone());
                let found = search(map, pieces, values, target, chosen_values, chosen_pieces);
                chosen_pieces.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        chosen_values.pop();
    }
    None
}

fn first_difference(sub: &MultiMap, map: &MultiMap) -> Rat {
    test_points(map.breakpoints())
        .into_iter()
        .find(|x| sub.value_at(x).ok() != map.value_at(x).ok())
        .unwrap_or_else(|| map.domain().0.clone())
}

/// Lattice directions plus, per breakpoint, the value-to-limit differences
/// and the normals of the limit segment.
fn planar_directions(f: &Curve2, i: usize) -> Vec<Point2> {
    let mut dirs: BTreeSet<Point2> = BTreeSet::new();
    for (a, b) in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)] {
        dirs.insert(Point2::new(int(a), int(b)));
        dirs.insert(Point2::new(int(-a), int(-b)));
    }
    let limits = f.limit_points(i);
    if let Some(v) = &f.values()[i] {
        for l in &limits {
            dirs.insert(v.sub(l));
        }
    }
    for a in &limits {
        for b in &limits {
            let d = b.sub(a);
            dirs.insert(d.clone());
            dirs.insert(Point2::new(-d.y.clone(), d.x.clone()));
        }
    }
    dirs.retain(|d| !d.is_origin());
    dirs.into_iter().collect()
}

/// `x -> h·f(x)`, a real piecewise-affine function.
fn project(f: &Curve2, h: &Point2) -> PWFun {
    let pieces = f
        .pieces()
        .iter()
        .map(|p| PieceExpr::affine(h.dot(&p.dir), h.dot(&p.base)))
        .collect();
    let values = f.values().iter().map(|v| v.as_ref().map(|v| h.dot(v))).collect();
    PWFun::new(f.breakpoints().to_vec(), pieces, values).expect("affine pieces fit every interval")
}

/// For every sampled half-plane `{p : h·p > λ}` and basis neighborhood `U`
/// of a breakpoint, look for an open `V ⊆ U` mapping into it.
pub fn oracle_planar_hyperplane_minimal(f: &Curve2, depth: u32) -> Verdict {
    let mut witnesses = Vec::new();
    'points: for (i, t) in f.breakpoints().iter().enumerate() {
        for h in planar_directions(f, i) {
            let g = project(f, &h);
            let basis = NbhdBasis::around(g.breakpoints(), t, depth);
            for ray in RaySet::around(&critical_values(&g, t)).rays {
                if ray.direction != RayDirection::Up {
                    continue;
                }
                let (lo, hi) = ray_bounds(&ray);
                for r in &basis.radii {
                    let (hit, preimage) = hits_and_preimage(&g, t, r, &lo, &hi);
                    if hit && !preimage {
                        witnesses.push(Witness::new(
                            t.clone(),
                            format!(
                                "f({t} - {r}, {t} + {r}) meets {{p : {h}·p > {}}} but no open subset maps into it",
                                ray.threshold
                            ),
                        ));
                        continue 'points;
                    }
                }
            }
        }
    }
    Verdict::from_witnesses(clause::ORACLE_PLANAR_HPMIN, witnesses)
}

/// A closed-form verdict next to its oracle counterpart.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub property: &'static str,
    pub closed_form: Verdict,
    pub oracle: Verdict,
    /// Whether failing points must match too, not just the verdicts.
    pub pointwise: bool,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.closed_form.holds == self.oracle.holds
            && (!self.pointwise || self.closed_form.failing_points() == self.oracle.failing_points())
    }
}

pub fn compare_function(f: &PWFun, depth: u32) -> Vec<Comparison> {
    vec![
        Comparison {
            property: "quasicontinuous",
            closed_form: crate::analysis::is_quasicontinuous(f),
            oracle: oracle_quasicontinuous(f, depth),
            pointwise: true,
        },
        Comparison {
            property: "hyperplane minimal",
            closed_form: crate::analysis::is_hyperplane_minimal(f),
            oracle: oracle_hyperplane_minimal(f, depth),
            pointwise: true,
        },
    ]
}

/// Usc always; minimal usco too when the map is usco.
pub fn compare_map(map: &MultiMap, depth: u32) -> Vec<Comparison> {
    let closed = is_usco(map);
    let usco = closed.holds;
    let mut out = vec![Comparison {
        property: "usco",
        closed_form: closed,
        oracle: oracle_usc(map, depth),
        pointwise: true,
    }];
    if usco {
        out.push(Comparison {
            property: "minimal usco",
            closed_form: crate::minimal::is_minimal_usco(map),
            oracle: submap_search(map).expect("usco checked above"),
            pointwise: false,
        });
    }
    out
}

pub fn compare_curve(f: &Curve2, depth: u32) -> Vec<Comparison> {
    vec![Comparison {
        property: "planar hyperplane minimal",
        closed_form: crate::convex2d::planar_hyperplane_minimal(f),
        oracle: oracle_planar_hyperplane_minimal(f, depth),
        pointwise: true,
    }]
}
