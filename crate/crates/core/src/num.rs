//! Exact rational scalars and the small helpers the rest of the crate leans on.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Exact rational scalar used for every geometric predicate.
pub type Q = BigRational;

#[inline]
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[inline]
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[inline]
pub fn zero() -> Q {
    Q::zero()
}

#[inline]
pub fn one() -> Q {
    Q::one()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale through the bit lengths.
        let n = x.numer();
        let d = x.denom();
        let shift = n.bits().max(d.bits()) as i64 - 60;
        if shift <= 0 {
            return f64::NAN;
        }
        let ns = (n >> shift as usize).to_f64().unwrap_or(0.0);
        let ds = (d >> shift as usize).to_f64().unwrap_or(1.0);
        ns / ds
    })
}

/// Exact rational image of a finite float.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Rational with a power-of-two denominator close to `x`; keeps coefficient sizes small.
pub fn dyadic(x: f64, bits: u32) -> Q {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round() as i64;
    Q::new(BigInt::from(n), BigInt::from(1u64 << bits))
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn cmp(a: &Q, b: &Q) -> Ordering {
    a.cmp(b)
}

pub fn min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn mid(a: &Q, b: &Q) -> Q {
    (a + b) / qi(2)
}

/// Parses `p/q` or `p` (also accepts plain decimals such as `0.25`).
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

/// Formats as `p/q`, omitting the denominator when it is 1.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-7"), Some(qi(-7)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 3)), "-1/3");
    }

    #[test]
    fn float_conversions() {
        assert_eq!(to_f64(&q(1, 4)), 0.25);
        assert_eq!(from_f64(0.375), q(3, 8));
        assert_eq!(dyadic(0.3, 4), q(5, 16));
    }
}
