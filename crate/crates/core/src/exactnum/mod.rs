//! Exact arithmetic: big rationals, binomial coefficients and the cyclotomic
//! field `Q(ε)` for a primitive `m`-th root of unity `ε`.
//!
//! Nothing in this module touches floating point except the explicit
//! [`CycloElem::to_complex`] embedding, which exists only so the numeric
//! side can compare against exact values.

mod cyclo;
mod poly;

pub use cyclo::{cyclotomic_polynomial, power_of_eps, root_power_sum, CycloElem, CycloError, CycloField};
pub use poly::QPoly;

use alloc::format;
use alloc::string::String;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational number; always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Exact binomial coefficient `C(a, b)`.
///
/// Returns zero outside the range `0 <= b <= a` (this includes every `a < 0`).
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 1..=b {
        acc *= BigInt::from(a - b + i);
        acc /= BigInt::from(i);
    }
    acc
}

/// `C(a, b)` as a rational.
pub fn binomial_q(a: i64, b: i64) -> Rational {
    Rational::from_integer(binomial(a, b))
}

/// `base^exp` for a small integer base.
pub fn int_pow(base: i64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `p / q` reduced to canonical form. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `"p/q"`, keeping the `/1` for integers.
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Checks the canonical-form invariants of a rational.
pub fn is_canonical(r: &Rational) -> bool {
    let (n, d) = (r.numer(), r.denom());
    if !d.is_positive() {
        return false;
    }
    if n.is_zero() {
        return d.is_one();
    }
    n.abs().gcd(d).is_one()
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
