//! Exact rational scalars. All probabilities and payoffs in the engine are
//! arbitrary-precision rationals; floats are deliberately absent so that
//! equality, argmax, and equilibrium membership are decidable.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The scalar type carried by every probability and payoff.
pub type Rational = BigRational;

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Build `n/d` from machine integers. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render as `"n/d"`, or just `"n"` when the denominator is 1.
pub fn to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"n"` or `"n/d"` (optionally signed). Denominator must be nonzero;
/// the result is stored in lowest terms with a positive denominator.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational {s:?}, expected \"n\" or \"n/d\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num.parse().map_err(|_| mk_err())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| mk_err())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Nonnegativity check used by distribution constructors.
pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
