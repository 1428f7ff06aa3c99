//! Minimal usco and minimal cusco maps: recognition, construction from
//! selections, extraction inside larger maps, and extreme selections.

use std::collections::BTreeSet;

use crate::analysis::{is_quasicontinuous, is_subcontinuous};
use crate::error::{Error, Result};
use crate::pwfun::{PWFun, PieceExpr, Side};
use crate::rat::{ExtReal, Rat};
use crate::svmap::{
    convexify, envelopes, graph_closure, has_closed_graph, is_cusco, is_usco, GraphMap,
    IntervalUnion, MultiMap,
};
use crate::verdict::{clause, Verdict, Witness};

/// Which envelope seeds an extraction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Envelope {
    #[default]
    Inf,
    Sup,
}

impl std::str::FromStr for Envelope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "inf" => Ok(Envelope::Inf),
            "sup" => Ok(Envelope::Sup),
            other => Err(format!("unknown envelope `{other}` (expected inf or sup)")),
        }
    }
}

fn qc_and_subcontinuous(f: &PWFun, label: &str) -> Verdict {
    let qc = is_quasicontinuous(f);
    let sub = is_subcontinuous(f);
    let mut witnesses = Vec::new();
    for w in qc.witnesses.into_iter().chain(sub.witnesses) {
        witnesses.push(Witness { detail: format!("{label}: {}", w.detail), ..w });
    }
    Verdict::from_witnesses("", witnesses)
}

/// `x -> co cl f(x)` for a quasicontinuous subcontinuous, possibly densely
/// defined, selection `f`.
pub fn minimal_cusco_from(f: &PWFun) -> Result<MultiMap> {
    let mut pre = qc_and_subcontinuous(f, "selection");
    if !pre.holds {
        pre.clause = if f.is_total() { clause::FROM_SELECTION } else { clause::FROM_DENSE_SELECTION }
            .to_string();
        return Err(Error::Rejected(Box::new(pre)));
    }
    Ok(convexify(graph_closure(f)?.as_map()))
}

fn single_curve(map: &MultiMap, j: usize) -> Option<&PieceExpr> {
    match map.bands()[j].as_slice() {
        [b] if b.is_curve() => Some(&b.lower),
        _ => None,
    }
}

/// Usco, a single curve on every piece, and breakpoint values equal to the
/// set of one-sided limits of the adjacent curves.
pub fn is_minimal_usco(map: &MultiMap) -> Verdict {
    let mut v = is_usco(map);
    v.clause = clause::MINIMAL_USCO.to_string();
    let bps = map.breakpoints();
    let mut single_valued = true;
    for j in 0..map.bands().len() {
        if single_curve(map, j).is_none() {
            single_valued = false;
            v.witnesses.push(Witness::new(
                crate::rat::midpoint(&bps[j], &bps[j + 1]),
                format!("not single-valued on ({}, {})", bps[j], bps[j + 1]),
            ));
        }
    }
    if single_valued && v.witnesses.is_empty() {
        for (i, t) in bps.iter().enumerate() {
            let limits: BTreeSet<Rat> = [Side::Left, Side::Right]
                .into_iter()
                .flat_map(|s| map.limit_intervals(i, s))
                .filter_map(|(lo, _)| lo.finite().cloned())
                .collect();
            let expected = IntervalUnion::points(&limits).expect("usco maps have limits");
            if map.values()[i] != expected {
                v.witnesses.push(Witness::new(
                    t.clone(),
                    format!("F({t}) = {} properly contains the limit set {expected}", map.values()[i]),
                ));
            }
        }
    }
    v.holds = v.witnesses.is_empty();
    v
}

/// Convex values, closed graph, quasicontinuous subcontinuous envelopes, and
/// equal graph closures of the two envelopes.
pub fn is_minimal_cusco(map: &MultiMap) -> Verdict {
    let mut witnesses = Vec::new();
    for (j, piece) in map.bands().iter().enumerate() {
        if piece.len() > 1 {
            let bps = map.breakpoints();
            witnesses.push(Witness::new(
                crate::rat::midpoint(&bps[j], &bps[j + 1]),
                "value is not convex".to_string(),
            ));
        }
    }
    for (i, value) in map.values().iter().enumerate() {
        if !value.is_convex() {
            witnesses.push(Witness::new(map.breakpoints()[i].clone(), format!("value {value} is not convex")));
        }
    }
    witnesses.extend(has_closed_graph(map).witnesses);
    let (inf, sup) = envelopes(map);
    let inf_ok = qc_and_subcontinuous(&inf, "inf F");
    let sup_ok = qc_and_subcontinuous(&sup, "sup F");
    let envelopes_ok = inf_ok.holds && sup_ok.holds;
    witnesses.extend(inf_ok.witnesses);
    witnesses.extend(sup_ok.witnesses);
    if envelopes_ok {
        let gi = graph_closure(&inf).expect("subcontinuous");
        let gs = graph_closure(&sup).expect("subcontinuous");
        if gi != gs {
            witnesses.push(closure_mismatch(&gi, &gs));
        }
    }
    Verdict::from_witnesses(clause::MINIMAL_CUSCO, witnesses)
}

/// First point where two graph closures differ.
fn closure_mismatch(a: &GraphMap, b: &GraphMap) -> Witness {
    let a = a.as_map();
    let b = b.as_map();
    let mut pts: BTreeSet<Rat> = a.breakpoints().iter().chain(b.breakpoints()).cloned().collect();
    let mut all: Vec<Rat> = pts.iter().cloned().collect();
    for w in all.clone().windows(2) {
        pts.insert(crate::rat::midpoint(&w[0], &w[1]));
    }
    all = pts.into_iter().collect();
    for x in &all {
        let (va, vb) = (a.value_at(x).expect("in domain"), b.value_at(x).expect("in domain"));
        if va != vb {
            return Witness::new(x.clone(), format!("cl inf F({x}) = {va} but cl sup F({x}) = {vb}"));
        }
    }
    Witness::new(all[0].clone(), "graph closures of inf F and sup F differ".to_string())
}

/// Compact values, quasicontinuous subcontinuous envelopes, and
/// `F = co cl(sup F) = co cl(inf F)`.
pub fn envelope_hull_criterion(map: &MultiMap) -> Verdict {
    let (inf, sup) = envelopes(map);
    let inf_ok = qc_and_subcontinuous(&inf, "inf F");
    let sup_ok = qc_and_subcontinuous(&sup, "sup F");
    let mut witnesses: Vec<Witness> = inf_ok.witnesses.into_iter().chain(sup_ok.witnesses).collect();
    if witnesses.is_empty() {
        for (name, env) in [("inf", &inf), ("sup", &sup)] {
            let hull = convexify(graph_closure(env).expect("subcontinuous").as_map());
            if !hull.equivalent(map) {
                witnesses.push(Witness::new(
                    map.domain().0.clone(),
                    format!("F differs from co cl({name} F)"),
                ));
            }
        }
    }
    Verdict::from_witnesses(clause::ENVELOPE_HULL, witnesses)
}

/// `F = co cl(e | C(e))` for the chosen envelope `e`.
pub fn roundtrip_criterion(map: &MultiMap, which: Envelope) -> Verdict {
    let (inf, sup) = envelopes(map);
    let e = match which {
        Envelope::Inf => inf,
        Envelope::Sup => sup,
    };
    let restricted = e.restrict(&e.continuity_points().excluded).expect("breakpoints");
    let witnesses = match graph_closure(&restricted) {
        Err(Error::Rejected(v)) => v.witnesses,
        Err(other) => vec![Witness::new(map.domain().0.clone(), other.to_string())],
        Ok(g) => {
            if convexify(g.as_map()).equivalent(map) {
                Vec::new()
            } else {
                vec![Witness::new(
                    map.domain().0.clone(),
                    "F differs from the hull of the restricted envelope closure".to_string(),
                )]
            }
        }
    };
    Verdict::from_witnesses(clause::ROUNDTRIP, witnesses)
}

fn extract_usco(map: &MultiMap, which: Envelope) -> Result<GraphMap> {
    let (inf, sup) = envelopes(map);
    let e = match which {
        Envelope::Inf => inf,
        Envelope::Sup => sup,
    };
    let restricted = e.restrict(&e.continuity_points().excluded)?;
    graph_closure(&restricted)
}

/// `cl(inf F | C(inf F))` (or the sup variant): a minimal usco inside the usco `F`.
pub fn minimal_usco_within(map: &MultiMap, which: Envelope) -> Result<GraphMap> {
    let pre = is_usco(map);
    if !pre.holds {
        return Err(Error::Rejected(Box::new(pre)));
    }
    extract_usco(map, which)
}

/// `co cl(inf F | C(inf F))` (or the sup variant): a minimal cusco inside the cusco `F`.
pub fn minimal_cusco_within(map: &MultiMap, which: Envelope) -> Result<MultiMap> {
    let pre = is_cusco(map);
    if !pre.holds {
        return Err(Error::Rejected(Box::new(pre)));
    }
    Ok(convexify(extract_usco(map, which)?.as_map()))
}

/// The unique minimal usco inside a minimal cusco: `cl(sup F)`, which equals `cl(inf F)`.
pub fn unique_minimal_usco(map: &MultiMap) -> Result<GraphMap> {
    let pre = is_minimal_cusco(map);
    if !pre.holds {
        return Err(Error::Rejected(Box::new(pre)));
    }
    let (inf, sup) = envelopes(map);
    let g = graph_closure(&sup)?;
    debug_assert_eq!(g, graph_closure(&inf)?);
    debug_assert!(is_minimal_usco(g.as_map()).holds);
    debug_assert!(g.as_map().is_submap_of(map)?);
    Ok(g)
}

/// Selection following `inf F` up to the first switch point and alternating
/// between the envelopes at every switch (a switch point takes the envelope
/// that starts there).
pub fn extreme_selection(map: &MultiMap, switches: &BTreeSet<Rat>) -> Result<PWFun> {
    let pre = is_cusco(map);
    if !pre.holds {
        return Err(Error::Rejected(Box::new(pre)));
    }
    let (inf, sup) = envelopes(map);
    let inf = inf.refine(switches)?;
    let sup = sup.refine(inf.breakpoints())?;
    let bps = inf.breakpoints().to_vec();
    let uses_sup = |x: &Rat| switches.iter().filter(|s| *s <= x).count() % 2 == 1;
    let pieces = (0..bps.len() - 1)
        .map(|j| if uses_sup(&bps[j]) { sup.pieces()[j].clone() } else { inf.pieces()[j].clone() })
        .collect();
    let values = bps
        .iter()
        .enumerate()
        .map(|(i, t)| if uses_sup(t) { sup.values()[i].clone() } else { inf.values()[i].clone() })
        .collect();
    PWFun::new(bps, pieces, values)
}

/// Every limit of an envelope is finite; convenience for reports.
pub fn envelopes_bounded(map: &MultiMap) -> bool {
    let (inf, sup) = envelopes(map);
    [inf, sup].iter().all(|e| {
        (0..e.breakpoints().len()).all(|i| {
            let (l, r) = e.limits_at_index(i);
            [l, r].into_iter().flatten().all(|x: ExtReal| x.is_finite())
        })
    })
}
