//! Quasicontinuity, subcontinuity, and hyperplane minimality of piecewise
//! functions, decided from one-sided limit data at the breakpoints.
//!
//! Open pieces are continuous, so every property can only fail at a
//! breakpoint. Undefined breakpoints lie outside `dom f` and are only
//! constrained by subcontinuity, which is a condition at every point of the
//! interval.

use crate::pwfun::PWFun;
use crate::rat::{int, midpoint, ExtReal, Rat};
use crate::verdict::{clause, Ray, Verdict, Witness};

fn fmt_limits(limits: &[&ExtReal]) -> String {
    let parts: Vec<String> = limits.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Quasicontinuous on `dom f` iff each defined breakpoint value is a finite
/// one-sided limit.
pub fn is_quasicontinuous(f: &PWFun) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in f.breakpoints().iter().enumerate() {
        let Some(v) = &f.values()[i] else { continue };
        let (l, r) = f.limits_at_index(i);
        let limits: Vec<&ExtReal> = [&l, &r].into_iter().flatten().collect();
        let fv = ExtReal::Finite(v.clone());
        if !limits.iter().any(|lim| **lim == fv) {
            witnesses.push(Witness::new(
                t.clone(),
                format!("value {v} is not a one-sided limit {}", fmt_limits(&limits)),
            ));
        }
    }
    Verdict::from_witnesses(clause::QUASICONTINUITY, witnesses)
}

/// Subcontinuous iff every one-sided limit at every breakpoint is finite.
pub fn is_subcontinuous(f: &PWFun) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in f.breakpoints().iter().enumerate() {
        let (l, r) = f.limits_at_index(i);
        for (name, lim) in [("left", l), ("right", r)] {
            if let Some(lim) = lim.filter(|lim| !lim.is_finite()) {
                witnesses.push(Witness::new(t.clone(), format!("{name} limit {lim}")));
            }
        }
    }
    Verdict::from_witnesses(clause::SUBCONTINUITY, witnesses)
}

/// A half-line containing `value` but none of the one-sided `limits`, or
/// `None` when `value` lies between the smallest and largest limit.
pub(crate) fn separating_ray(value: &Rat, limits: &[&ExtReal]) -> Option<Ray> {
    let lo = limits.iter().min()?;
    let hi = limits.iter().max()?;
    let fv = ExtReal::Finite(value.clone());
    if &fv > *hi {
        // Unit step past the nearest limit, capped at half the gap.
        let lambda = match hi.finite() {
            Some(h) => {
                let half = midpoint(h, value);
                std::cmp::min(h + int(1), half)
            }
            None => value - int(1),
        };
        Some(Ray::up(lambda))
    } else if &fv < *lo {
        let lambda = match lo.finite() {
            Some(l) => {
                let half = midpoint(l, value);
                std::cmp::max(l - int(1), half)
            }
            None => value + int(1),
        };
        Some(Ray::down(lambda))
    } else {
        None
    }
}

/// Hyperplane minimal iff each defined breakpoint value lies between the
/// smallest and largest one-sided limit (in the extended order). At a domain
/// endpoint this forces the value to equal the single finite limit.
pub fn is_hyperplane_minimal(f: &PWFun) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, t) in f.breakpoints().iter().enumerate() {
        let Some(v) = &f.values()[i] else { continue };
        let (l, r) = f.limits_at_index(i);
        let limits: Vec<&ExtReal> = [&l, &r].into_iter().flatten().collect();
        if let Some(ray) = separating_ray(v, &limits) {
            witnesses.push(
                Witness::new(
                    t.clone(),
                    format!(
                        "value {v} lies outside the range of the one-sided limits {}",
                        fmt_limits(&limits)
                    ),
                )
                .with_ray(ray),
            );
        }
    }
    Verdict::from_witnesses(clause::HYPERPLANE_MINIMALITY, witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pwfun::PieceExpr;
    use crate::rat::{int, rat};
    use crate::verdict::RayDirection;

    #[test]
    fn quasicontinuity_examples() {
        let v = is_quasicontinuous(&fixtures::jump_function());
        assert!(!v.holds);
        assert_eq!(v.failing_points(), vec![int(0)]);
        assert!(v.witnesses[0].detail.contains("value 0"));
        assert!(is_quasicontinuous(&fixtures::step_function()).holds);
        assert!(is_quasicontinuous(&PWFun::constant(int(0), int(1), int(3)).unwrap()).holds);
    }

    #[test]
    fn undefined_points_are_outside_the_domain() {
        let f = fixtures::jump_function().restrict([&int(0)]).unwrap();
        assert!(is_quasicontinuous(&f).holds);
        assert!(is_hyperplane_minimal(&f).holds);
    }

    #[test]
    fn subcontinuity_examples() {
        let v = is_subcontinuous(&fixtures::blowup_function());
        assert!(!v.holds);
        assert_eq!(v.failing_points(), vec![int(0)]);
        assert!(v.witnesses[0].detail.contains("right limit +inf"));
        assert!(is_subcontinuous(&fixtures::jump_function()).holds);
        assert!(is_subcontinuous(&PWFun::constant(int(0), int(1), int(3)).unwrap()).holds);
        // An undefined breakpoint still needs finite limits.
        let g = fixtures::blowup_function().restrict([&int(0)]).unwrap();
        assert!(!is_subcontinuous(&g).holds);
    }

    #[test]
    fn hyperplane_minimality_examples() {
        assert!(is_hyperplane_minimal(&fixtures::jump_function()).holds);
        assert!(is_hyperplane_minimal(&fixtures::blowup_function()).holds);
        let v = is_hyperplane_minimal(&fixtures::jump_with_value(int(5)));
        assert!(!v.holds);
        let w = &v.witnesses[0];
        assert_eq!(w.point, int(0));
        assert_eq!(w.ray, Some(Ray { direction: RayDirection::Up, threshold: int(2) }));
        let v = is_hyperplane_minimal(&fixtures::jump_with_value(rat(-3, 2)));
        assert_eq!(v.witnesses[0].ray, Some(Ray::down(rat(-5, 4))));
    }

    #[test]
    fn endpoint_blowup_kills_hyperplane_minimality() {
        let f = PWFun::new(
            vec![int(0), int(1)],
            vec![PieceExpr::reciprocal(int(1), int(-1), int(0))],
            vec![Some(int(1)), Some(int(0))],
        )
        .unwrap();
        // 1/(1-x) -> +inf at 1, value 0 there
        let v = is_hyperplane_minimal(&f);
        assert_eq!(v.failing_points(), vec![int(1)]);
        assert_eq!(v.witnesses[0].ray.as_ref().unwrap().direction, RayDirection::Down);
    }

    #[test]
    fn endpoint_value_must_match_its_limit() {
        let f = PWFun::new(vec![int(0), int(1)], vec![PieceExpr::constant(int(0))], vec![Some(int(1)), Some(int(0))])
            .unwrap();
        assert_eq!(is_quasicontinuous(&f).failing_points(), vec![int(0)]);
        assert_eq!(is_hyperplane_minimal(&f).failing_points(), vec![int(0)]);
    }
}
