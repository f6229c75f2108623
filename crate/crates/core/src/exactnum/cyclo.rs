use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{QPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("division by zero in Q(eps_{0})")]
    DivisionByZero(u32),
    #[error("character sum over Q(eps_{0}) is not a rational scalar")]
    NotRational(u32),
}

/// The `m`-th cyclotomic polynomial `Φ_m`, coefficients low to high.
///
/// Built from `x^m - 1 = Π_{d | m} Φ_d` by exact division.
///
/// # Panics
/// If `m == 0`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    let divisors: Vec<u32> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut known: BTreeMap<u32, QPoly> = BTreeMap::new();
    for &d in &divisors {
        let mut xd_minus_1 = vec![Rational::zero(); d as usize + 1];
        xd_minus_1[0] = -Rational::one();
        xd_minus_1[d as usize] = Rational::one();
        let mut poly = QPoly::new(xd_minus_1);
        for (&e, phi_e) in known.iter().filter(|(e, _)| d % **e == 0) {
            debug_assert!(e < d);
            let (q, r) = poly.div_rem(phi_e).expect("cyclotomic factor is nonzero");
            debug_assert!(r.is_zero());
            poly = q;
        }
        known.insert(d, poly);
    }
    known
        .remove(&m)
        .expect("m divides itself")
        .into_coeffs()
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

#[derive(Debug)]
struct Modulus {
    m: u32,
    /// Monic `Φ_m`, length `deg + 1`.
    phi: Vec<BigInt>,
    phi_q: QPoly,
}

/// Handle on `Q(ε)`, `ε` a primitive `m`-th root of unity, represented as
/// `Q[x] / Φ_m(x)`.
#[derive(Clone, Debug)]
pub struct CycloField {
    modulus: Arc<Modulus>,
}

impl CycloField {
    /// # Panics
    /// If `m == 0`.
    pub fn new(m: u32) -> Self {
        let phi = cyclotomic_polynomial(m);
        let phi_q = QPoly::new(phi.iter().cloned().map(Rational::from_integer).collect());
        CycloField {
            modulus: Arc::new(Modulus { m, phi, phi_q }),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.modulus.m
    }

    /// Euler totient of the conductor, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.phi.len() - 1
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem {
            modulus: self.modulus.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycloElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, r: Rational) -> CycloElem {
        let mut e = self.zero();
        e.coeffs[0] = r;
        e
    }

    /// Residue of an arbitrary polynomial in `ε`.
    pub fn from_poly(&self, coeffs: Vec<Rational>) -> CycloElem {
        CycloElem {
            modulus: self.modulus.clone(),
            coeffs: reduce(&self.modulus, coeffs),
        }
    }

    /// `ε^j`; negative `j` is taken mod `m`.
    pub fn eps_pow(&self, j: i64) -> CycloElem {
        let m = i64::from(self.modulus.m);
        let e = j.rem_euclid(m) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        self.from_poly(poly)
    }
}

fn reduce(modulus: &Modulus, mut c: Vec<Rational>) -> Vec<Rational> {
    let d = modulus.phi.len() - 1;
    if c.len() > d {
        for i in (d..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let lead = core::mem::replace(&mut c[i], Rational::zero());
            // Φ_m is monic: x^i ≡ x^{i-d} (x^d - Φ_m).
            for (j, p) in modulus.phi[..d].iter().enumerate() {
                if !p.is_zero() {
                    c[i - d + j] -= &lead * p;
                }
            }
        }
    }
    c.resize(d, Rational::zero());
    c
}

/// Element of `Q(ε)` in canonical residue form modulo `Φ_m`.
#[derive(Clone)]
pub struct CycloElem {
    modulus: Arc<Modulus>,
    coeffs: Vec<Rational>,
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.m == other.modulus.m && self.coeffs == other.coeffs
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElem(m={}, ", self.modulus.m)?;
        f.debug_list().entries(self.coeffs.iter().map(|c| alloc::format!("{c}"))).finish()?;
        write!(f, ")")
    }
}

impl CycloElem {
    pub fn conductor(&self) -> u32 {
        self.modulus.m
    }

    /// Residue coefficients, length `φ(m)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn field(&self) -> CycloField {
        CycloField {
            modulus: self.modulus.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &CycloElem) -> Result<(), CycloError> {
        if self.modulus.m == other.modulus.m {
            Ok(())
        } else {
            Err(CycloError::ConductorMismatch(self.modulus.m, other.modulus.m))
        }
    }

    fn with_coeffs(&self, coeffs: Vec<Rational>) -> CycloElem {
        CycloElem {
            modulus: self.modulus.clone(),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn try_sub(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect()))
    }

    pub fn try_mul(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![Rational::zero(); (2 * d).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.with_coeffs(reduce(&self.modulus, prod)))
    }

    pub fn scale(&self, r: &Rational) -> CycloElem {
        self.with_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_m`.
    pub fn inverse(&self) -> Result<CycloElem, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.modulus.m));
        }
        let mut r0 = self.modulus.phi_q.clone();
        let mut r1 = QPoly::new(self.coeffs.clone());
        let mut s0 = QPoly::zero();
        let mut s1 = QPoly::constant(Rational::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s);
        }
        // Φ_m is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(r0.degree(), Some(0));
        let c = r0.coeffs()[0].clone();
        let inv = s0.scale(&(Rational::one() / c));
        Ok(self.with_coeffs(reduce(&self.modulus, inv.into_coeffs())))
    }

    pub fn try_div(&self, other: &CycloElem) -> Result<CycloElem, CycloError> {
        self.check(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> CycloElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
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

    /// Horner evaluation of a rational polynomial at this element.
    pub fn eval_poly(&self, poly: &[Rational]) -> CycloElem {
        let mut acc = self.field().zero();
        for c in poly.iter().rev() {
            acc = &(&acc * self) + &self.field().from_rational(c.clone());
        }
        acc
    }

    /// Embedding `ε ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let m = f64::from(self.modulus.m);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * core::f64::consts::PI * (i as f64) / m;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&CycloElem> for &CycloElem {
            type Output = CycloElem;
            /// # Panics
            /// On conductor mismatch.
            fn $method(self, rhs: &CycloElem) -> CycloElem {
                self.$try(rhs).expect("CycloElem operands must share a conductor")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `ε^j` in `Q(ε_m)`.
pub fn power_of_eps(m: u32, j: i64) -> CycloElem {
    CycloField::new(m).eps_pow(j)
}

/// `Σ_{k=0}^{m-1} ε^{jk}` evaluated exactly in `Q(ε)`.
///
/// The sum is always rational (`m` if `m | j`, else `0`); anything else
/// indicates broken field arithmetic and is reported as
/// [`CycloError::NotRational`].
pub fn root_power_sum(m: u32, j: i64) -> Result<Rational, CycloError> {
    let field = CycloField::new(m);
    let mut acc = field.zero();
    for k in 0..i64::from(m) {
        acc = &acc + &field.eps_pow(j.wrapping_mul(k).rem_euclid(i64::from(m)));
    }
    acc.as_rational().ok_or(CycloError::NotRational(m))
}
