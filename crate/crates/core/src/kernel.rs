//! The diagonal Kähler–Einstein identity as an identity of power series.
//!
//! On the slice `z = (z_1, 0, …, 0)` with `x = |z_1|^2`, the potential and
//! both sides of the Monge–Ampère identity are built from the character sums
//!
//! ```text
//! f_{t,p}(x) = Σ_{k=0}^{m-1} ε^{-tk} (ε^k − x)^{-p}
//! ```
//!
//! whose Taylor coefficients are `m·C(p+j−1, j)` when `m | t+p+j` and zero
//! otherwise. The residual `R = φ^{n+2} − P·Q` vanishes identically exactly
//! for the trivial group; for every other group its lowest term is predicted
//! by [`classify_case`].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::{binomial, CycloElem, CycloError, CycloField, Rational};
use crate::group::{classify_case, CasePrediction, GroupSpec, SpecError};
use crate::series::{CycloSeries, LowestTerm, Series, TruncSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("cyclotomic expansion has a non-rational coefficient at degree {0}")]
    NotRational(usize),
    #[error("truncation order must be at least 1")]
    OrderTooSmall,
    #[error("residual of a nontrivial group is zero to order {order}{}", if *.retried { " after retry" } else { "" })]
    ResidualVanished { order: usize, retried: bool },
    #[error("residual of the trivial group is nonzero at degree {0}")]
    TrivialResidualNonzero(usize),
    #[error("index tuple must have n+1 = {expected} entries in [0, {m})")]
    InvalidIndices { expected: usize, m: u32 },
}

/// Truncation order for residual computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationOrder {
    /// `(n+2)·m + n + 4`, doubled once if the residual is zero there.
    Auto,
    Fixed(usize),
}

pub fn default_order(spec: &GroupSpec) -> usize {
    (spec.n() + 2) * spec.m() as usize + spec.n() + 4
}

/// Coefficient of `x^j` in `(1 − x)^{-p}`: `C(p+j−1, j)`, with `p = 0`
/// giving the constant 1.
fn neg_binomial(p: i64, j: i64) -> BigInt {
    if p == 0 {
        BigInt::from(u8::from(j == 0))
    } else {
        binomial(p + j - 1, j)
    }
}

/// `f_{t,p}` from the divisibility rule for its Taylor coefficients.
pub fn f_series(m: u32, t: i64, p: u32, order: usize) -> TruncSeries {
    let mm = i64::from(m);
    let p = i64::from(p);
    let coeffs = (0..=order as i64)
        .map(|j| {
            if (t + p + j).rem_euclid(mm) == 0 {
                Rational::from_integer(BigInt::from(m) * neg_binomial(p, j))
            } else {
                Rational::zero()
            }
        })
        .collect();
    Series::from_coeffs(order, coeffs, &Rational::zero())
}

/// `f_{t,p}` by summing the expansions of `ε^{-tk}(ε^k − x)^{-p}` over `k`
/// in `Q(ε)` and checking that every coefficient is rational.
pub fn f_series_oracle(m: u32, t: i64, p: u32, order: usize) -> Result<TruncSeries, KernelError> {
    let field = CycloField::new(m);
    let pi = i64::from(p);
    let mut acc = CycloSeries::zero(order, &field.zero());
    for k in 0..i64::from(m) {
        // ε^{-tk} (ε^k − x)^{-p} = ε^{-k(t+p)} Σ_j C(p+j−1, j) ε^{-kj} x^j
        let coeffs: Vec<CycloElem> = (0..=order as i64)
            .map(|j| {
                let c = Rational::from_integer(neg_binomial(pi, j));
                field.eps_pow(-k * (t + pi + j)).scale(&c)
            })
            .collect();
        acc = &acc + &Series::from_coeffs(order, coeffs, &field.zero());
    }
    acc.to_rational().map_err(KernelError::NotRational)
}

/// `f'_{t,p} = p·f_{t,p+1}`, checked exactly on truncated series.
pub fn lemma44_check(m: u32, t: i64, p: u32, order: usize) -> Result<bool, KernelError> {
    if order == 0 {
        return Err(KernelError::OrderTooSmall);
    }
    let lhs = f_series(m, t, p, order).derivative().expect("order >= 1");
    let rhs = f_series(m, t, p + 1, order - 1).scale_int(i64::from(p));
    Ok(lhs == rhs)
}

/// `Σ_k ε^{tk} (1 − ε^k x)^{-p} = f_{t−p,p}`, with the left side expanded
/// directly in `Q(ε)`.
pub fn lemma46_check(m: u32, t: i64, p: u32, order: usize) -> Result<bool, KernelError> {
    let field = CycloField::new(m);
    let pi = i64::from(p);
    let mut acc = CycloSeries::zero(order, &field.zero());
    for k in 0..i64::from(m) {
        let coeffs: Vec<CycloElem> = (0..=order as i64)
            .map(|j| {
                let c = Rational::from_integer(neg_binomial(pi, j));
                field.eps_pow(k * (t + j)).scale(&c)
            })
            .collect();
        acc = &acc + &Series::from_coeffs(order, coeffs, &field.zero());
    }
    let lhs = acc.to_rational().map_err(KernelError::NotRational)?;
    Ok(lhs == f_series(m, t - pi, p, order))
}

fn t_sum(spec: &GroupSpec) -> i64 {
    spec.t_sum() as i64
}

/// `φ(z*, z̄*)` as a series in `x = |z_1|^2`: `f_{|T|−(n+1), n+1}`.
pub fn phi_diagonal_series(spec: &GroupSpec, order: usize) -> TruncSeries {
    let n = spec.n() as i64;
    f_series(spec.m(), t_sum(spec) - (n + 1), spec.n() as u32 + 1, order)
}

/// The factors `P` and `Q` of `J(φ)/(n+1)^n` on the slice.
pub fn pq_series(spec: &GroupSpec, order: usize) -> (TruncSeries, TruncSeries) {
    let m = spec.m();
    let n = spec.n() as i64;
    let np = spec.n() as u32;
    let ts = t_sum(spec);
    let f = |t: i64, p: u32| f_series(m, t, p, order);

    let f_a = f(ts - (n + 2), np + 2);
    let f_b = f(ts - (n + 1), np + 2);
    let f_c = f(ts - (n + 1), np + 1);
    let f_d = f(ts - (n + 1), np + 3);
    let bracket = &(&f_b * &f_b) - &(&f_c * &f_d);
    let p = &(&f_a * &f_b) - &bracket.shift_by_x().scale_int(n + 2);

    let q = spec.t()[1..]
        .iter()
        .fold(TruncSeries::constant(order, Rational::one()), |acc, &tj| {
            &acc * &f(ts + i64::from(tj) - (n + 2), np + 2)
        });
    (p, q)
}

/// `R = φ^{n+2} − P·Q` truncated at `order`.
pub fn residual_series(spec: &GroupSpec, order: usize) -> TruncSeries {
    let phi = phi_diagonal_series(spec, order);
    let (p, q) = pq_series(spec, order);
    &phi.pow(spec.n() as u32 + 2) - &(&p * &q)
}

/// Observed lowest term of the residual compared against the case prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub spec: GroupSpec,
    pub order_used: usize,
    pub observed: LowestTerm<Rational>,
    /// `None` for the trivial group.
    pub prediction: Option<CasePrediction>,
    pub degree_match: bool,
    pub coeff_match: bool,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.degree_match && self.coeff_match
    }
}

/// Computes the residual and checks it against [`classify_case`].
///
/// For the trivial group the residual must vanish to the chosen order.
/// For a nontrivial group a residual that is zero to the order (after the
/// single automatic retry) contradicts the non-Einstein theorem and is
/// returned as [`KernelError::ResidualVanished`]; a nonzero residual that
/// disagrees with the prediction is reported with the match flags cleared.
pub fn ke_residual(spec: &GroupSpec, order: TruncationOrder) -> Result<ResidualReport, KernelError> {
    let (mut d, auto) = match order {
        TruncationOrder::Auto => (default_order(spec), true),
        TruncationOrder::Fixed(d) => (d, false),
    };
    let mut observed = residual_series(spec, d).lowest_nonzero_term();

    if spec.is_trivial() {
        if let LowestTerm::Term { degree, .. } = observed {
            return Err(KernelError::TrivialResidualNonzero(degree));
        }
        return Ok(ResidualReport {
            spec: spec.clone(),
            order_used: d,
            observed,
            prediction: None,
            degree_match: true,
            coeff_match: true,
        });
    }

    if auto && matches!(observed, LowestTerm::ZeroTo(_)) {
        d *= 2;
        observed = residual_series(spec, d).lowest_nonzero_term();
    }
    let LowestTerm::Term { degree, coeff } = &observed else {
        return Err(KernelError::ResidualVanished { order: d, retried: auto });
    };
    let prediction = classify_case(spec)?;
    let degree_match = *degree == prediction.residual_degree;
    let coeff_match = degree_match && *coeff == prediction.residual_coeff;
    Ok(ResidualReport {
        spec: spec.clone(),
        order_used: d,
        observed,
        prediction: Some(prediction),
        degree_match,
        coeff_match,
    })
}

/// `det A(γ^{k_0}, …, γ^{k_n})` at `z = (z_1, 0, …, 0)`, `x = |z_1|^2`,
/// evaluated exactly in `Q(ε)` from the closed form
///
/// ```text
/// ε^{k_1 + Σ_{j≥2} k_j t_j} · (1 − (n+2) ε^{k_0} x + (n+2) ε^{k_1} x (1 − ε^{k_0} x)/(1 − ε^{k_1} x))
/// ```
pub fn det_a_slice(spec: &GroupSpec, k: &[u32], x: &Rational) -> Result<CycloElem, KernelError> {
    let m = spec.m();
    if k.len() != spec.n() + 1 || k.iter().any(|&ki| ki >= m) {
        return Err(KernelError::InvalidIndices {
            expected: spec.n() + 1,
            m,
        });
    }
    let field = CycloField::new(m);
    let eps = |e: i64| field.eps_pow(e);
    let k0 = i64::from(k[0]);
    let k1 = i64::from(k[1]);
    let phase: i64 = k1
        + k[2..]
            .iter()
            .zip(&spec.t()[1..])
            .map(|(&kj, &tj)| i64::from(kj) * i64::from(tj))
            .sum::<i64>();
    let n2 = Rational::from_integer(BigInt::from(spec.n() as i64 + 2));
    let one = field.one();
    let a0x = eps(k0).scale(x);
    let a1x = eps(k1).scale(x);
    let ratio = (&one - &a0x).try_div(&(&one - &a1x))?;
    let inner = &(&one - &a0x.scale(&n2)) + &(&ratio * &a1x).scale(&n2);
    Ok(&eps(phase) * &inner)
}
