//! Arbitrary-precision rational scalars and small parsing/formatting helpers.
//!
//! Every exact computation in this crate runs over `Rat` (= `num::BigRational`).
//! Values are kept in canonical reduced form by the underlying library, so
//! structural equality is value equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat_i(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Shorthand for `p/q`; panics on `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a fraction string: `"3"`, `"-2/5"`, with optional surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational {s:?}"))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| format!("invalid rational {s:?}"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(n, d))
}

/// Formats in the same `p/q` (or plain integer) notation accepted by `parse_rat`.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// Integer power with negative exponents allowed; `0^e` only for `e >= 0`.
pub fn rat_pow(r: &Rat, e: i32) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    if r.is_zero() {
        assert!(e > 0, "zero to a negative power");
        return Rat::zero();
    }
    let mut acc = Rat::one();
    let base = if e > 0 { r.clone() } else { r.recip() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Lossy conversion for reporting; exact code paths never round-trip through this.
pub fn rat_to_f64(r: &Rat) -> f64 {
    num::ToPrimitive::to_f64(r).unwrap_or_else(|| {
        // Fall back to a manual division for magnitudes outside f64's exponent
        // range of either component.
        let n = r.numer();
        let d = r.denom();
        let nf = num::ToPrimitive::to_f64(n).unwrap_or(if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
        let df = num::ToPrimitive::to_f64(d).unwrap_or(f64::INFINITY);
        nf / df
    })
}
