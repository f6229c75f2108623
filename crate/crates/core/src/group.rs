//! Cyclic fixed-point-free diagonal subgroups of `U(n)` and the case
//! taxonomy that predicts the lowest-order mismatch of the diagonal
//! Kähler–Einstein identity.
//!
//! A group is given by its order `m` and exponents `t_1..t_n`: it is
//! generated by `diag(ε^{t_1}, …, ε^{t_n})` with `ε = exp(2πi/m)`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exactnum::{binomial, gcd_u64, int_pow, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("group order must be at least 1")]
    ZeroOrder,
    #[error("complex dimension n={0} is below 2")]
    DimensionTooSmall(usize),
    #[error("t={t} ≡ 0 mod {m}: not fixed point free")]
    ZeroExponent { t: i64, m: u32 },
    #[error("gcd({t},{m})≠1: not fixed point free")]
    NotCoprime { t: u32, m: u32 },
    #[error("trivial group (m=1) has no mismatch prediction")]
    TrivialGroup,
}

/// Normalized exponent data `(m; t_1..t_n)` of a cyclic group.
///
/// For `m >= 2` the exponents are units mod `m`, sorted, with `t_1 = 1`.
/// The trivial group is `m = 1` with all exponents zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    m: u32,
    t: Vec<u32>,
    t_sum: u64,
}

impl GroupSpec {
    pub fn trivial(n: usize) -> Result<Self, SpecError> {
        if n < 2 {
            return Err(SpecError::DimensionTooSmall(n));
        }
        Ok(GroupSpec {
            m: 1,
            t: alloc::vec![0; n],
            t_sum: 0,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    /// `|T| = Σ t_j`.
    pub fn t_sum(&self) -> u64 {
        self.t_sum
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 1
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, t=(", self.m)?;
        for (i, t) in self.t.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "))")
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i64) as u64)
}

/// Validates raw exponent data and brings it to normal form.
///
/// Entries are reduced mod `m`, rescaled by the inverse of the smallest
/// entry (so the minimum becomes 1) and sorted. `m = 1` yields the trivial
/// spec regardless of the raw entries.
pub fn validate_spec(m: u32, t_raw: &[i64]) -> Result<GroupSpec, SpecError> {
    if m == 0 {
        return Err(SpecError::ZeroOrder);
    }
    let n = t_raw.len();
    if n < 2 {
        return Err(SpecError::DimensionTooSmall(n));
    }
    if m == 1 {
        return GroupSpec::trivial(n);
    }
    let mm = i64::from(m);
    let mut reduced = Vec::with_capacity(n);
    for &raw in t_raw {
        let r = raw.rem_euclid(mm) as u32;
        if r == 0 {
            return Err(SpecError::ZeroExponent { t: raw, m });
        }
        if gcd_u64(u64::from(r), u64::from(m)) != 1 {
            return Err(SpecError::NotCoprime { t: r, m });
        }
        reduced.push(r);
    }
    let smallest = *reduced.iter().min().expect("n >= 2");
    let u = mod_inverse(u64::from(smallest), u64::from(m)).expect("smallest entry is a unit");
    let mut t: Vec<u32> = reduced
        .iter()
        .map(|&r| ((u64::from(r) * u) % u64::from(m)) as u32)
        .collect();
    t.sort_unstable();
    debug_assert_eq!(t[0], 1);
    let t_sum = t.iter().map(|&x| u64::from(x)).sum();
    Ok(GroupSpec { m, t, t_sum })
}

/// Fixed-point-freeness from the definition: no nontrivial power
/// `γ^k` (`1 <= k < m`) has an eigenvalue 1.
pub fn is_fixed_point_free(m: u32, t: &[u32]) -> bool {
    (1..m).all(|k| t.iter().all(|&tj| (u64::from(k) * u64::from(tj)) % u64::from(m) != 0))
}

/// Equivalent shortcut: every exponent is a unit mod `m`.
pub fn is_fixed_point_free_gcd(m: u32, t: &[u32]) -> bool {
    m == 1 || t.iter().all(|&tj| gcd_u64(u64::from(tj), u64::from(m)) == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    Trivial,
    /// `m | |T|`.
    I,
    /// `m | |T| + 1`.
    II,
    /// `m | |T| + k`, `2 <= k < m`, with some `t_j > k`.
    IIIa,
    /// `m | |T| + k`, `2 <= k < m`, all `t_j <= k`.
    IIIb,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Trivial => "Trivial",
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::IIIa => "IIIa",
            CaseTag::IIIb => "IIIb",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Predicted lowest-order terms of both sides of `φ^{n+2} = P·Q` on the
/// slice, and of their difference `R = φ^{n+2} − P·Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasePrediction {
    pub case_tag: CaseTag,
    /// Smallest `j >= 0` with `m | |T| + j`.
    pub k: u32,
    /// Case II: `#{t_j = 1}`; Case III: `#{t_j <= k}`; Case I: 0.
    pub a: u32,
    pub lhs_degree: usize,
    pub lhs_coeff: Rational,
    /// `None` stands for `+∞` (Case I only tracks `P(0)Q(0) = 0`).
    pub pq_degree: Option<usize>,
    pub pq_coeff: Rational,
    pub residual_degree: usize,
    pub residual_coeff: Rational,
}

impl CasePrediction {
    pub fn degrees_tie(&self) -> bool {
        self.pq_degree == Some(self.lhs_degree)
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Classifies a nontrivial spec and fills in the leading-term predictions.
pub fn classify_case(spec: &GroupSpec) -> Result<CasePrediction, SpecError> {
    if spec.is_trivial() {
        return Err(SpecError::TrivialGroup);
    }
    let m = i64::from(spec.m);
    let n = spec.n() as i64;
    let nu = spec.n() as u32;
    let t: Vec<i64> = spec.t.iter().map(|&x| i64::from(x)).collect();
    let t_sum = spec.t_sum as i64;
    let k = (0..m).find(|j| (t_sum + j) % m == 0).expect("some j < m works");
    let m_pow = |e: u32| int_pow(m, e);

    let (case_tag, a, lhs_degree, lhs_coeff, pq_degree, pq_coeff) = match k {
        0 => {
            let lhs = Rational::from_integer(m_pow(nu + 2));
            (CaseTag::I, 0, 0usize, lhs, None, Rational::zero())
        }
        1 => {
            let a = t.iter().filter(|&&x| x == 1).count();
            let tail = &t[a..];
            let lhs = Rational::from_integer(int_pow(n + 1, nu + 2) * m_pow(nu + 2));
            let degree = (m + 1) * (n - a as i64 + 1) - tail.iter().sum::<i64>();
            let mut num = m_pow(nu + 3) * big(n + 1) * binomial(n + m + 1, m);
            for &tj in tail {
                num *= binomial(m + n + 2 - tj, m + 1 - tj);
            }
            let pq = Rational::new(num, big(m + 1));
            (CaseTag::II, a, (n + 2) as usize, lhs, Some(degree as usize), pq)
        }
        _ => {
            let a = t.iter().filter(|&&x| x <= k).count();
            let tag = if a == spec.n() { CaseTag::IIIb } else { CaseTag::IIIa };
            let lhs = Rational::from_integer(m_pow(nu + 2) * num_traits::pow(binomial(n + k, k), nu as usize + 2));
            let low = &t[1..a];
            let high = &t[a..];
            let degree = (n + 1) * k + m - 1 - low.iter().sum::<i64>() + high.iter().map(|tj| m - tj).sum::<i64>();
            let mut num = m_pow(nu + 3) * binomial(n + k, k - 1) * binomial(n + k + m, n);
            for &tj in low {
                num *= binomial(n + 1 + k - tj, k - tj);
            }
            for &tj in high {
                num *= binomial(n + 1 + m + k - tj, m + k - tj);
            }
            let pq = Rational::new(num, big(k));
            (tag, a, (k * (n + 2)) as usize, lhs, Some(degree as usize), pq)
        }
    };

    let (residual_degree, residual_coeff) = match pq_degree {
        Some(d) if d < lhs_degree => (d, -pq_coeff.clone()),
        Some(d) if d == lhs_degree => (d, &lhs_coeff - &pq_coeff),
        _ => (lhs_degree, lhs_coeff.clone()),
    };
    debug_assert!(!residual_coeff.is_zero());

    Ok(CasePrediction {
        case_tag,
        k: k as u32,
        a: a as u32,
        lhs_degree,
        lhs_coeff,
        pq_degree,
        pq_coeff,
        residual_degree,
        residual_coeff,
    })
}

/// All normalized specs with `m <= max_m` and `2 <= n <= max_n`, ordered by
/// `m`, then `n`, then `t` lexicographically. The trivial group is included
/// once per `n`.
pub fn enumerate_specs(max_m: u32, max_n: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for m in 1..=max_m {
        for n in 2..=max_n {
            if m == 1 {
                out.push(GroupSpec::trivial(n).expect("n >= 2"));
                continue;
            }
            let units: Vec<u32> = (1..m).filter(|&u| gcd_u64(u64::from(u), u64::from(m)) == 1).collect();
            let mut t = alloc::vec![1u32];
            push_tuples(m, n, &units, 0, &mut t, &mut out);
        }
    }
    out
}

fn push_tuples(m: u32, n: usize, units: &[u32], from: usize, t: &mut Vec<u32>, out: &mut Vec<GroupSpec>) {
    if t.len() == n {
        let t_sum = t.iter().map(|&x| u64::from(x)).sum();
        out.push(GroupSpec { m, t: t.clone(), t_sum });
        return;
    }
    for (i, &u) in units.iter().enumerate().skip(from) {
        t.push(u);
        push_tuples(m, n, units, i, t, out);
        t.pop();
    }
}
