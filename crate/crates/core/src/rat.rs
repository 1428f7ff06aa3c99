//! Exact rational scalars and the extended real line used for one-sided limits.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational in canonical form (gcd 1, positive denominator).
///
/// `Display` renders `p/q`, or just `p` for integers, which is also what
/// [`parse_rat`] accepts.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn midpoint(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

/// Parse `p`, `-p`, or `p/q`. Whitespace around the token is ignored.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational".to_string());
    }
    t.parse::<Rat>()
        .map_err(|e| format!("invalid rational `{t}`: {e}"))
}

/// A point of the extended real line. The derived order is the usual one:
/// `NegInf < Finite(q) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtReal {
    NegInf,
    Finite(Rat),
    PosInf,
}

impl ExtReal {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtReal::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// `+inf` when `sign > 0`, `-inf` otherwise.
    pub fn infinity_with_sign(positive: bool) -> Self {
        if positive {
            ExtReal::PosInf
        } else {
            ExtReal::NegInf
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(q) => ExtReal::Finite(-q),
        }
    }
}

impl From<Rat> for ExtReal {
    fn from(q: Rat) -> Self {
        ExtReal::Finite(q)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(q) => write!(f, "{q}"),
        }
    }
}

pub(crate) fn sign(q: &Rat) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_display() {
        assert_eq!(rat(6, -4), rat(-3, 2));
        assert_eq!(rat(6, -4).to_string(), "-3/2");
        assert_eq!(int(7).to_string(), "7");
        assert_eq!(parse_rat(" -3/2 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("4/2").unwrap(), int(2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn ext_real_order() {
        let a = ExtReal::Finite(int(-1000));
        let b = ExtReal::Finite(int(1000));
        assert!(ExtReal::NegInf < a);
        assert!(a < b);
        assert!(b < ExtReal::PosInf);
        assert_eq!(ExtReal::PosInf.to_string(), "+inf");
        assert_eq!(ExtReal::Finite(rat(1, 2)).neg(), ExtReal::Finite(rat(-1, 2)));
    }
}
