//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use cusco_core::analysis::{is_hyperplane_minimal, is_quasicontinuous, is_subcontinuous};
use cusco_core::convex2d::{hull, milman_check, separate, Point2};
use cusco_core::corpus::{Corpus, MapKind};
use cusco_core::fixtures;
use cusco_core::minimal::{
    envelope_hull_criterion, extreme_selection, is_minimal_cusco, is_minimal_usco, minimal_cusco_from,
    minimal_cusco_within, minimal_usco_within, roundtrip_criterion, unique_minimal_usco, Envelope,
};
use cusco_core::oracle::{compare_curve, compare_function, compare_map, Comparison, DEFAULT_DEPTH};
use cusco_core::rat::{int, rat, ExtReal};
use cusco_core::subdiff::{differentiability_points, subdifferential, ConvexPWAffine};
use cusco_core::svmap::{csc, envelopes, graph_closure, ExtInterval, IntervalUnion, IntervalValue};

const SEED: u64 = 0x5eed;

#[derive(Default)]
struct Tally {
    good: usize,
    total: usize,
    negative: usize,
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let ok = out.ok && in_time;
    println!(
        "criterion {id:>2} {name}: {} ({}; {:.2?}, limit {:?})",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        limit
    );
    ok
}

fn join(points: &[cusco_core::Rat]) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn example_2_1() -> Outcome {
    let f = fixtures::jump_function();
    let hp = is_hyperplane_minimal(&f);
    let qc = is_quasicontinuous(&f);
    outcome(
        hp.holds && !qc.holds && qc.failing_points() == vec![int(0)],
        format!("hyperplane minimal: {}; quasicontinuous: {} at {}", hp.holds, qc.holds, join(&qc.failing_points())),
    )
}

fn example_2_2() -> Outcome {
    let f = fixtures::blowup_function();
    let at0 = csc(&f, &int(0)).unwrap();
    let expect0 = ExtInterval { lo: ExtReal::Finite(int(0)), hi: ExtReal::PosInf };
    let mut off_zero = true;
    for k in -16..=16 {
        let x = rat(k, 8);
        if k == 0 {
            continue;
        }
        let v = ExtReal::Finite(f.eval(&x).unwrap().unwrap());
        off_zero &= csc(&f, &x).unwrap() == ExtInterval { lo: v.clone(), hi: v };
    }
    let closure0 = IntervalUnion::points(&f.cluster_set(&int(0)).unwrap().finite_members()).unwrap().hull();
    let sub = is_subcontinuous(&f);
    outcome(
        at0 == expect0 && off_zero && closure0 == IntervalValue::point(int(0)) && sub.failing_points() == vec![int(0)],
        format!("CSC(f)(0) = {at0}; co cl f(0) = {closure0}; subcontinuous: {}", sub.holds),
    )
}

fn envelope_sweep() -> Outcome {
    let mut c = Corpus::new(SEED);
    let (mut agree, mut held, n) = (0, 0, 600);
    for k in 0..n {
        let kind = [MapKind::MinimalCusco, MapKind::Cusco, MapKind::Broken][k % 3];
        let m = c.convex_map(kind);
        let a = is_minimal_cusco(&m).holds;
        let b = envelope_hull_criterion(&m).holds;
        let r1 = roundtrip_criterion(&m, Envelope::Inf).holds;
        let r2 = roundtrip_criterion(&m, Envelope::Sup).holds;
        if a == b && b == r1 && r1 == r2 {
            agree += 1;
        } else {
            eprintln!("disagreement ({a} {b} {r1} {r2}) on {m}");
        }
        held += a as usize;
    }
    outcome(agree == n, format!("{agree}/{n} maps agree, {held} minimal cusco"))
}

fn construction_roundtrip() -> Outcome {
    let mut c = Corpus::new(SEED + 1);
    let (mut good, n) = (0, 500);
    for _ in 0..n {
        let f = c.qc_function();
        let m = minimal_cusco_from(&f).unwrap();
        let ok = is_minimal_cusco(&m).holds && unique_minimal_usco(&m).unwrap() == graph_closure(&f).unwrap();
        good += ok as usize;
        if !ok {
            eprintln!("roundtrip failed for {f}");
        }
    }
    outcome(good == n, format!("{good}/{n} selections"))
}

fn extraction() -> Outcome {
    let mut c = Corpus::new(SEED + 2);
    let (mut usco_ok, mut cusco_ok, n) = (0, 0, 200);
    for k in 0..n {
        let m = c.multi_band_map(true);
        let g = minimal_usco_within(&m, Envelope::Inf).unwrap();
        usco_ok += (g.as_map().is_submap_of(&m).unwrap() && is_minimal_usco(g.as_map()).holds) as usize;
        let kind = if k % 4 == 0 { MapKind::MinimalCusco } else { MapKind::Cusco };
        let m = c.convex_map(kind);
        let ok = [Envelope::Inf, Envelope::Sup].iter().all(|&e| {
            let h = minimal_cusco_within(&m, e).unwrap();
            h.is_submap_of(&m).unwrap() && is_minimal_cusco(&h).holds
        });
        cusco_ok += ok as usize;
    }
    let unit = fixtures::constant_map(int(0), int(1), int(0), int(1));
    let lo = minimal_cusco_within(&unit, Envelope::Inf).unwrap();
    let hi = minimal_cusco_within(&unit, Envelope::Sup).unwrap();
    let split = lo == fixtures::constant_map(int(0), int(1), int(0), int(0))
        && hi == fixtures::constant_map(int(0), int(1), int(1), int(1));
    outcome(
        usco_ok == n && cusco_ok == n && split,
        format!("usco {usco_ok}/{n}, cusco {cusco_ok}/{n}, constant [0,1] gives {{0}} and {{1}}: {split}"),
    )
}

fn uniqueness() -> Outcome {
    let mut c = Corpus::new(SEED + 3);
    let (mut good, n) = (0, 200);
    for _ in 0..n {
        let m = c.minimal_cusco();
        let target = unique_minimal_usco(&m).unwrap();
        let mut ok = minimal_usco_within(&m, Envelope::Inf).unwrap() == target
            && minimal_usco_within(&m, Envelope::Sup).unwrap() == target;
        let (inf, sup) = envelopes(&m);
        ok &= graph_closure(&inf).unwrap() == target && graph_closure(&sup).unwrap() == target;
        for _ in 0..5 {
            let e = extreme_selection(&m, &c.switches(&m)).unwrap();
            ok &= graph_closure(&e).unwrap() == target;
        }
        good += ok as usize;
    }
    outcome(good == n, format!("{good}/{n} maps with 2 envelope paths and 5 extreme selections"))
}

fn extreme_functions() -> Outcome {
    let mut c = Corpus::new(SEED + 4);
    let (mut good, mut total) = (0, 0);
    for _ in 0..200 {
        let m = c.minimal_cusco();
        let target = unique_minimal_usco(&m).unwrap();
        for _ in 0..5 {
            let e = extreme_selection(&m, &c.switches(&m)).unwrap();
            let ok = is_quasicontinuous(&e).holds
                && is_subcontinuous(&e).holds
                && graph_closure(&e).unwrap() == target;
            good += ok as usize;
            total += 1;
        }
    }
    outcome(good == total, format!("{good}/{total} extreme selections"))
}

fn subdifferentials() -> Outcome {
    let mut c = Corpus::new(SEED + 5);
    let (mut good, n) = (0, 100);
    for _ in 0..n {
        let g = c.convex_pw_affine();
        let d = subdifferential(&g);
        let (_, sup) = envelopes(&d);
        good += (is_minimal_cusco(&d).holds && differentiability_points(&g) == sup.continuity_points()) as usize;
    }
    let abs = ConvexPWAffine::new(vec![int(-1), int(0), int(1)], vec![int(-1), int(1)], int(1)).unwrap();
    let at0 = subdifferential(&abs).value_at(&int(0)).unwrap();
    let exact = at0 == IntervalUnion::single(IntervalValue::new(int(-1), int(1)).unwrap());
    outcome(good == n && exact, format!("{good}/{n} functions; ∂|x|(0) = {at0}"))
}

fn tally(comparisons: impl IntoIterator<Item = Comparison>, t: &mut Tally) {
    for c in comparisons {
        t.total += 1;
        t.negative += !c.closed_form.holds as usize;
        if c.agrees() {
            t.good += 1;
        } else {
            eprintln!("{}: closed form {} / oracle {}", c.property, c.closed_form, c.oracle);
        }
    }
}

fn oracle_line() -> Outcome {
    let mut c = Corpus::new(SEED + 6);
    let mut t = Tally::default();
    for _ in 0..300 {
        tally(compare_function(&c.function(), DEFAULT_DEPTH), &mut t);
        tally(compare_function(&c.qc_function(), DEFAULT_DEPTH), &mut t);
    }
    for k in 0..300 {
        let kind = [MapKind::MinimalCusco, MapKind::Cusco, MapKind::Broken][k % 3];
        tally(compare_map(&c.convex_map(kind), DEFAULT_DEPTH), &mut t);
        tally(compare_map(&c.multi_band_map(k % 4 != 0), DEFAULT_DEPTH), &mut t);
    }
    let mut named = Tally::default();
    for f in [fixtures::jump_function(), fixtures::blowup_function()] {
        tally(compare_function(&f, 10), &mut named);
    }
    let blowup_graph = cusco_core::svmap::MultiMap::new(
        fixtures::blowup_function().breakpoints().to_vec(),
        fixtures::blowup_function()
            .pieces()
            .iter()
            .map(|p| vec![cusco_core::svmap::Band::curve(p.clone())])
            .collect(),
        vec![IntervalUnion::point(int(0)), IntervalUnion::point(int(0)), IntervalUnion::point(rat(1, 2))],
    )
    .unwrap();
    tally(compare_map(&blowup_graph, 10), &mut named);
    tally(compare_map(graph_closure(&fixtures::jump_function()).unwrap().as_map(), 10), &mut named);
    outcome(
        t.good == t.total && named.good == named.total,
        format!(
            "corpus {}/{} at depth {DEFAULT_DEPTH} ({} false), named examples {}/{} at depth 10 ({} false)",
            t.good, t.total, t.negative, named.good, named.total, named.negative
        ),
    )
}

fn oracle_plane() -> Outcome {
    let mut c = Corpus::new(SEED + 7);
    let mut t = Tally::default();
    for _ in 0..200 {
        let f = c.curve();
        tally(compare_curve(&f, DEFAULT_DEPTH), &mut t);
    }
    let mut milman = 0;
    for _ in 0..500 {
        milman += milman_check(&c.point_set()).unwrap().holds as usize;
    }
    let (mut certs, mut verified, mut forced) = (0, 0, 0);
    for k in 0..500 {
        let p = hull(&c.point_set()).unwrap();
        let shift = if k % 2 == 0 { Point2::new(int(7), int(k as i64 % 5 - 2)) } else { Point2::new(int(0), int(0)) };
        let qs: Vec<Point2> = c.point_set().iter().map(|q| q.add(&shift)).collect();
        let q = hull(&qs).unwrap();
        match separate(&p, &q) {
            Ok(h) => {
                certs += 1;
                verified += h.separates(&p, &q) as usize;
            }
            // Shifted sets lie in disjoint boxes and must separate.
            Err(_) => forced += (k % 2 == 0) as usize,
        }
    }
    outcome(
        t.good == t.total && milman == 500 && verified == certs && forced == 0,
        format!(
            "curves {}/{} ({} not hyperplane minimal), milman {milman}/500, certificates {verified}/{certs}",
            t.good, t.total, t.negative
        ),
    )
}

fn dense_invariance() -> Outcome {
    let mut c = Corpus::new(SEED + 8);
    let (mut good, n) = (0, 200);
    for _ in 0..n {
        let f = c.qc_function();
        let drop = c.drop_set(&f);
        let dense = f.restrict(&drop).unwrap();
        good += (minimal_cusco_from(&dense).unwrap() == minimal_cusco_from(&f).unwrap()) as usize;
    }
    outcome(good == n, format!("{good}/{n} drop sets"))
}

fn main() {
    let second = Duration::from_secs(1);
    let minute = Duration::from_secs(60);
    let results = [
        run(1, "hyperplane minimal jump function", second, example_2_1),
        run(2, "blow-up function cluster sets", second, example_2_2),
        run(3, "minimal cusco criteria agree", minute, envelope_sweep),
        run(4, "selection construction roundtrip", minute, construction_roundtrip),
        run(5, "minimal submap extraction", minute, extraction),
        run(6, "unique minimal usco", minute, uniqueness),
        run(7, "extreme selections", minute, extreme_functions),
        run(8, "convex subdifferentials", minute, subdifferentials),
        run(9, "oracle agreement on the line", Duration::from_secs(300), oracle_line),
        run(10, "oracle agreement in the plane", Duration::from_secs(300), oracle_plane),
        run(11, "densely defined selections", minute, dense_invariance),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
