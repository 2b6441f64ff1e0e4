//! Exact rational scalars.
//!
//! Everything in the workbench is computed over `Q` (arbitrary precision
//! rationals). Text form is `p` or `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `(-1)^k` for a parity product.
pub fn sign(odd: bool) -> Q {
    if odd {
        -one()
    } else {
        one()
    }
}

pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational literal {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Canonical text: `p` for integers, `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact square root, if `x` is the square of a rational.
pub fn sqrt_exact(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_q("-4").unwrap(), q(-4));
        assert_eq!(fmt_q(&frac(-2, 4)), "-1/2");
        assert_eq!(fmt_q(&q(7)), "7");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(sqrt_exact(&frac(9, 4)), Some(frac(3, 2)));
        assert_eq!(sqrt_exact(&q(2)), None);
        assert_eq!(sqrt_exact(&q(-1)), None);
    }
}
