//! Dense truncated power series `Σ_{j=0}^{D} c_j x^j`.
//!
//! The truncation order `D` is always explicit: it is fixed at construction
//! and binary operations require both operands to share it.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{CycloElem, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("cannot differentiate a series truncated at order 0")]
    DerivativeOfOrderZero,
    #[error("series has no multiplicative inverse (zero constant term)")]
    NotInvertible,
}

/// Coefficient ring for [`Series`].
///
/// Zero is taken from an existing value because `Q(ε)` elements carry their
/// conductor.
pub trait Coeff: Clone + PartialEq + core::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn mul_rational(&self, r: &Rational) -> Self;
    /// Inverse of a unit, `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self * Rational::from_integer(BigInt::from(k))
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coeff for CycloElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        CycloElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_int(&self, k: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(k)))
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn inverse(&self) -> Option<Self> {
        CycloElem::inverse(self).ok()
    }
}

/// Truncated power series with coefficients in `C`; `coeffs.len() == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<C: Coeff> {
    order: usize,
    coeffs: Vec<C>,
}

/// Series over exact rationals.
pub type TruncSeries = Series<Rational>;
/// Series over `Q(ε)`, all coefficients sharing one conductor.
pub type CycloSeries = Series<CycloElem>;

/// Lowest nonzero term of a truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowestTerm<C> {
    Term { degree: usize, coeff: C },
    /// Every coefficient up to and including this order vanishes.
    ZeroTo(usize),
}

impl<C> LowestTerm<C> {
    pub fn degree(&self) -> Option<usize> {
        match self {
            LowestTerm::Term { degree, .. } => Some(*degree),
            LowestTerm::ZeroTo(_) => None,
        }
    }

    pub fn coeff(&self) -> Option<&C> {
        match self {
            LowestTerm::Term { coeff, .. } => Some(coeff),
            LowestTerm::ZeroTo(_) => None,
        }
    }
}

impl<C: Coeff> Series<C> {
    /// Builds a series from leading coefficients, padding with `zero` or
    /// dropping anything past `order`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<C>, zero: &C) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, zero.zero_like());
        Series { order, coeffs }
    }

    pub fn zero(order: usize, zero: &C) -> Self {
        Series::from_coeffs(order, Vec::new(), zero)
    }

    pub fn constant(order: usize, c: C) -> Self {
        let zero = c.zero_like();
        Series::from_coeffs(order, alloc::vec![c], &zero)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Option<&C> {
        self.coeffs.get(j)
    }

    fn zero_coeff(&self) -> C {
        self.coeffs[0].zero_like()
    }

    fn same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Series {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        Ok(Series {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    /// Truncated product; zero coefficients are skipped, which matters for
    /// the sparse character sums this crate builds.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_order(other)?;
        let d = self.order;
        let mut out: Vec<C> = (0..=d).map(|_| self.zero_coeff()).collect();
        let rhs: Vec<(usize, &C)> = other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j > d {
                    break;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Ok(Series { order: d, coeffs: out })
    }

    /// `self^e` by repeated squaring, truncating at every step.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Series::constant(self.order, self.coeffs[0].one_like());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.mul_int(k)).collect(),
        }
    }

    /// Multiplies by `x`; the top coefficient falls off.
    pub fn shift_by_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order + 1);
        coeffs.push(self.zero_coeff());
        coeffs.extend(self.coeffs[..self.order].iter().cloned());
        Series { order: self.order, coeffs }
    }

    /// Termwise derivative; the result has order `D - 1`.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        if self.order == 0 {
            return Err(SeriesError::DerivativeOfOrderZero);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_int(i as i64 + 1))
            .collect();
        Ok(Series {
            order: self.order - 1,
            coeffs,
        })
    }

    /// Same series re-truncated at a lower (or padded to a higher) order.
    pub fn with_order(&self, order: usize) -> Self {
        let zero = self.zero_coeff();
        Series::from_coeffs(order, self.coeffs.clone(), &zero)
    }

    /// Multiplicative inverse, defined when the constant term is a unit.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0_inv = self.coeffs[0].inverse().ok_or(SeriesError::NotInvertible)?;
        let mut out: Vec<C> = Vec::with_capacity(self.order + 1);
        out.push(c0_inv.clone());
        for j in 1..=self.order {
            let mut s = self.zero_coeff();
            for i in 1..=j {
                if !self.coeffs[i].is_zero() {
                    s = s.add(&self.coeffs[i].mul(&out[j - i]));
                }
            }
            out.push(s.mul(&c0_inv).neg());
        }
        Ok(Series {
            order: self.order,
            coeffs: out,
        })
    }

    pub fn lowest_nonzero_term(&self) -> LowestTerm<C> {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(degree) => LowestTerm::Term {
                degree,
                coeff: self.coeffs[degree].clone(),
            },
            None => LowestTerm::ZeroTo(self.order),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coeff::is_zero)
    }
}

impl TruncSeries {
    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        let zero = Rational::zero();
        Series::from_coeffs(
            order,
            coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect(),
            &zero,
        )
    }

    /// Exact value of the truncated polynomial at `x` (Horner).
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl CycloSeries {
    /// Converts down to a rational series if every coefficient lies in `Q`;
    /// otherwise returns the first offending degree.
    pub fn to_rational(&self) -> Result<TruncSeries, usize> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.as_rational().ok_or(j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Series {
            order: self.order,
            coeffs,
        })
    }
}

macro_rules! forward_series_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<C: Coeff> $trait<&Series<C>> for &Series<C> {
            type Output = Series<C>;
            /// # Panics
            /// If the truncation orders differ.
            fn $method(self, rhs: &Series<C>) -> Series<C> {
                match self.$try(rhs) {
                    Ok(s) => s,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

forward_series_binop!(Add, add, try_add);
forward_series_binop!(Sub, sub, try_sub);
forward_series_binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series {
            order: self.order,
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    fn s(order: usize, c: &[i64]) -> TruncSeries {
        TruncSeries::from_ints(order, c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&s(3, &[1, 1]) * &s(3, &[1, -1]), s(3, &[1, 0, -1]));
        assert_eq!(s(2, &[1, 1]).pow(3), s(2, &[1, 3, 3]));
        assert_eq!(s(2, &[1, 2]).shift_by_x(), s(2, &[0, 1, 2]));
        assert_eq!(s(2, &[0, 0, 7]).shift_by_x(), s(2, &[]));
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(
            s(4, &[0, 0, 5]).lowest_nonzero_term(),
            LowestTerm::Term { degree: 2, coeff: rat_int(5) }
        );
        assert_eq!(s(10, &[]).lowest_nonzero_term(), LowestTerm::ZeroTo(10));
        assert_eq!(
            s(1, &[3, -3]).lowest_nonzero_term(),
            LowestTerm::Term { degree: 0, coeff: rat_int(3) }
        );
    }

    #[test]
    fn derivatives() {
        assert_eq!(s(2, &[1, 1, 1]).derivative().unwrap(), s(1, &[1, 2]));
        assert_eq!(s(1, &[7]).derivative().unwrap(), s(0, &[0]));
        assert_eq!(s(3, &[0, 0, 0, 4]).derivative().unwrap(), s(2, &[0, 0, 12]));
        assert_eq!(s(0, &[7]).derivative(), Err(SeriesError::DerivativeOfOrderZero));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert_eq!(s(2, &[1]).try_mul(&s(3, &[1])), Err(SeriesError::OrderMismatch(2, 3)));
    }

    #[test]
    #[should_panic(expected = "truncation order mismatch")]
    fn operator_panics_on_mismatch() {
        let _ = &s(2, &[1]) + &s(3, &[1]);
    }

    #[test]
    fn inverse_of_one_minus_x() {
        let inv = s(5, &[1, -1]).inverse().unwrap();
        assert_eq!(inv, s(5, &[1, 1, 1, 1, 1, 1]));
        assert_eq!(s(3, &[0, 1]).inverse(), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn evaluation() {
        let f = s(2, &[1, 3, 3]);
        assert_eq!(f.eval(&crate::exactnum::rat(1, 2)), crate::exactnum::rat(13, 4));
    }
}
