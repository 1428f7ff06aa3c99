//! Named example functions and maps used across tests, the CLI, and the
//! acceptance suite. Functions on the whole real line are placed on a window
//! wide enough that every breakpoint is interior.

use crate::pwfun::{PWFun, PieceExpr};
use crate::rat::{int, rat, Rat};
use crate::svmap::{Band, IntervalUnion, IntervalValue, MultiMap};

/// `-1` left of zero, `0` at zero, `1` right of zero, on `[-2, 2]`.
pub fn jump_function() -> PWFun {
    jump_function_on(int(-2), int(2))
}

pub fn jump_function_on(a: Rat, b: Rat) -> PWFun {
    PWFun::new(
        vec![a, int(0), b],
        vec![PieceExpr::constant(int(-1)), PieceExpr::constant(int(1))],
        vec![Some(int(-1)), Some(int(0)), Some(int(1))],
    )
    .expect("valid jump function")
}

/// `0` for `x <= 0` and `1/x` for `x > 0`, on `[-2, 2]`.
pub fn blowup_function() -> PWFun {
    PWFun::new(
        vec![int(-2), int(0), int(2)],
        vec![PieceExpr::constant(int(0)), PieceExpr::reciprocal(int(0), int(1), int(0))],
        vec![Some(int(0)), Some(int(0)), Some(rat(1, 2))],
    )
    .expect("valid blow-up function")
}

/// `0` for `x <= 0`, `1` for `x > 0`, on `[-2, 2]`; quasicontinuous.
pub fn step_function() -> PWFun {
    PWFun::new(
        vec![int(-2), int(0), int(2)],
        vec![PieceExpr::constant(int(0)), PieceExpr::constant(int(1))],
        vec![Some(int(0)), Some(int(0)), Some(int(1))],
    )
    .expect("valid step")
}

/// Left-continuous step with jumps at `-1` and `2`, on `[-3, 3]`.
pub fn two_jump_step() -> PWFun {
    PWFun::new(
        vec![int(-3), int(-1), int(2), int(3)],
        vec![PieceExpr::constant(int(0)), PieceExpr::constant(int(1)), PieceExpr::constant(int(2))],
        vec![Some(int(0)), Some(int(0)), Some(int(1)), Some(int(2))],
    )
    .expect("valid two-jump step")
}

/// `-1` left of zero, `value` at zero, `1` right of zero, on `[-2, 2]`.
pub fn jump_with_value(value: Rat) -> PWFun {
    PWFun::new(
        vec![int(-2), int(0), int(2)],
        vec![PieceExpr::constant(int(-1)), PieceExpr::constant(int(1))],
        vec![Some(int(-1)), Some(value), Some(int(1))],
    )
    .expect("valid jump")
}

/// The constant map `[lo, hi]` on `[a, b]`.
pub fn constant_map(a: Rat, b: Rat, lo: Rat, hi: Rat) -> MultiMap {
    let v = IntervalUnion::single(IntervalValue::new(lo.clone(), hi.clone()).expect("lo <= hi"));
    MultiMap::new(
        vec![a, b],
        vec![vec![Band::new(PieceExpr::constant(lo), PieceExpr::constant(hi))]],
        vec![v.clone(), v],
    )
    .expect("valid constant map")
}

/// `{-1}` left of zero, `[-1, 1]` at zero, `{1}` right of zero, on `[-2, 2]`.
pub fn sign_map() -> MultiMap {
    let point = |c: i64| IntervalUnion::point(int(c));
    MultiMap::new(
        vec![int(-2), int(0), int(2)],
        vec![vec![Band::curve(PieceExpr::constant(int(-1)))], vec![Band::curve(PieceExpr::constant(int(1)))]],
        vec![
            point(-1),
            IntervalUnion::single(IntervalValue::new(int(-1), int(1)).unwrap()),
            point(1),
        ],
    )
    .expect("valid sign map")
}
