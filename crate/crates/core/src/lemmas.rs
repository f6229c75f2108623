//! Exact verifiers for the binomial inequalities behind the coefficient
//! mismatch, plus bounded enumerations of their hypotheses.
//!
//! Every check evaluates both sides with big integers/rationals. The scans
//! are finite confidence checks over bounded parameter boxes, not proofs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactnum::{binomial, int_pow, Rational};
use crate::group::{CasePrediction, CaseTag, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

type LemmaResult<T> = Result<T, LemmaError>;

fn require(cond: bool, what: &'static str) -> LemmaResult<()> {
    if cond {
        Ok(())
    } else {
        Err(LemmaError::Precondition(what))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    Comb1,
    Rearrange,
    Fmono,
    Main,
    MainSimplified,
    Elementary,
    Lmono,
    L2ClosedForm,
}

impl LemmaId {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::Comb1 => "comb1",
            LemmaId::Rearrange => "rearrange",
            LemmaId::Fmono => "fmono",
            LemmaId::Main => "main",
            LemmaId::MainSimplified => "simplified",
            LemmaId::Elementary => "elementary",
            LemmaId::Lmono => "lmono",
            LemmaId::L2ClosedForm => "l2closed",
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One evaluated instance. `holds` records whether the stated (in)equality
/// is true for `params`; the meaning of `lhs`/`rhs` is per lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheckResult {
    pub lemma_id: LemmaId,
    pub params: Vec<i64>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

fn q(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

fn result(lemma_id: LemmaId, params: Vec<i64>, lhs: Rational, rhs: Rational, holds: bool) -> LemmaCheckResult {
    LemmaCheckResult {
        lemma_id,
        params,
        lhs,
        rhs,
        holds,
    }
}

fn with_tail(head: &[i64], tail: &[i64]) -> Vec<i64> {
    let mut v = head.to_vec();
    v.extend_from_slice(tail);
    v
}

// ---------------------------------------------------------------------------
// Case II inequality

/// Hypotheses of the Case II inequality for one tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comb1Params {
    pub m: i64,
    pub n: i64,
    pub a: usize,
    pub t: Vec<i64>,
}

fn comb1_admissible(m: i64, n: i64, a: usize, t: &[i64]) -> LemmaResult<()> {
    require(m >= 2 && n >= 2, "m, n >= 2")?;
    require(t.len() as i64 == n, "t has length n")?;
    require(a >= 1 && a as i64 <= n, "1 <= a <= n")?;
    require(t[..a].iter().all(|&x| x == 1), "t_1 = ... = t_a = 1")?;
    require(t[a..].iter().all(|&x| x > 1 && x < m), "1 < t_j <= m-1 for j > a")?;
    require(t.windows(2).all(|w| w[0] <= w[1]), "t nondecreasing")?;
    let tail: i64 = t[a..].iter().sum();
    require(
        n + 2 == (m + 1) * (n - a as i64 + 1) - tail,
        "n+2 = (m+1)(n-a+1) - sum_{j>a} t_j",
    )
}

/// `(n+1)^{n+1}(m+1) > m·C(n+m+1, m)·Π_{j>a} C(m+n+2−t_j, m+1−t_j)`.
pub fn check_comb1(m: i64, n: i64, a: usize, t: &[i64]) -> LemmaResult<LemmaCheckResult> {
    comb1_admissible(m, n, a, t)?;
    let lhs = int_pow(n + 1, (n + 1) as u32) * BigInt::from(m + 1);
    let mut rhs = BigInt::from(m) * binomial(n + m + 1, m);
    for &tj in &t[a..] {
        rhs *= binomial(m + n + 2 - tj, m + 1 - tj);
    }
    let holds = lhs > rhs;
    Ok(result(
        LemmaId::Comb1,
        with_tail(&[m, n, a as i64], t),
        q(lhs),
        q(rhs),
        holds,
    ))
}

/// Every tuple meeting the Case II hypotheses with `m <= max_m`, `n <= max_n`.
pub fn enumerate_comb1(max_m: i64, max_n: i64) -> Vec<Comb1Params> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        for n in 2..=max_n {
            for a in 1..=n as usize {
                let len = n as usize - a;
                let target = (m + 1) * (n - a as i64 + 1) - (n + 2);
                let mut tail = Vec::with_capacity(len);
                tails_with_sum(2, m - 1, len, target, &mut tail, &mut |tail| {
                    let mut t = vec![1; a];
                    t.extend_from_slice(tail);
                    out.push(Comb1Params { m, n, a, t });
                });
            }
        }
    }
    out
}

fn tails_with_sum(lo: i64, hi: i64, len: usize, target: i64, cur: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    if cur.len() == len {
        if target == 0 {
            emit(cur);
        }
        return;
    }
    let left = (len - cur.len()) as i64;
    for v in lo..=hi {
        if v * left > target {
            break;
        }
        if hi * left < target {
            continue;
        }
        cur.push(v);
        tails_with_sum(v, hi, len, target - v, cur, emit);
        cur.pop();
    }
}

// ---------------------------------------------------------------------------
// Rearrangement

/// `C(n+1+k−s, k−s)·C(n+1+k−t, k−t) < C(n+k−s, k−s−1)·C(n+2+k−t, k−t+1)`
/// for `s + 1 < t <= k`.
pub fn check_rearrangement(n: i64, k: i64, s: i64, t: i64) -> LemmaResult<LemmaCheckResult> {
    require(n >= 1, "n >= 1")?;
    require(s + 1 < t && t <= k, "s+1 < t <= k")?;
    let lhs = binomial(n + 1 + k - s, k - s) * binomial(n + 1 + k - t, k - t);
    let rhs = binomial(n + k - s, k - s - 1) * binomial(n + 2 + k - t, k - t + 1);
    let holds = lhs < rhs;
    Ok(result(LemmaId::Rearrange, vec![n, k, s, t], q(lhs), q(rhs), holds))
}

// ---------------------------------------------------------------------------
// The function F and the main inequality

/// `m·C(n+k+m, n)·Π_j C(n+1+k−λ_j, k−λ_j)` for an explicit `m`; no
/// constraint ties `m` to `λ` here.
fn main_rhs(n: i64, k: i64, m: i64, lambda: &[i64]) -> BigInt {
    lambda.iter().fold(BigInt::from(m) * binomial(n + k + m, n), |acc, &l| {
        acc * binomial(n + 1 + k - l, k - l)
    })
}

/// `F(n, k, λ)` with `m = k + Σ λ_j`, for `0 <= λ_j <= k`.
pub fn f_value(n: i64, k: i64, lambda: &[i64]) -> LemmaResult<Rational> {
    require(lambda.len() as i64 == n, "lambda has length n")?;
    require(lambda.iter().all(|&l| (0..=k).contains(&l)), "0 <= lambda_j <= k")?;
    let m = k + lambda.iter().sum::<i64>();
    Ok(q(main_rhs(n, k, m, lambda)))
}

/// `F(n,k,λ) <= F(n,k,λ − e_j)`; `j` is a 1-based coordinate with `λ_j >= 1`.
pub fn check_f_monotone(n: i64, k: i64, lambda: &[i64], j: usize) -> LemmaResult<LemmaCheckResult> {
    require(n >= 1 && k >= 1, "n, k >= 1")?;
    require(j >= 1 && j <= lambda.len(), "1 <= j <= n")?;
    require(lambda[j - 1] >= 1, "lambda_j >= 1")?;
    let lhs = f_value(n, k, lambda)?;
    let mut lowered = lambda.to_vec();
    lowered[j - 1] -= 1;
    let rhs = f_value(n, k, &lowered)?;
    let holds = lhs <= rhs;
    Ok(result(LemmaId::Fmono, with_tail(&[n, k, j as i64], lambda), lhs, rhs, holds))
}

fn main_admissible(k: i64, m: i64, n: i64, lambda: &[i64]) -> LemmaResult<()> {
    require(1 <= k && k < m, "1 <= k <= m-1")?;
    require(n >= 2, "n >= 2")?;
    require(lambda.len() as i64 == n, "lambda has length n")?;
    require(lambda.iter().all(|&l| l <= k), "lambda_j <= k")?;
    require(lambda.iter().sum::<i64>() == m - k, "sum lambda = m - k")
}

/// `k·C(n+k, k)^{n+2} > m·C(n+k+m, n)·Π_j C(n+1+k−λ_j, k−λ_j)`.
pub fn check_main(k: i64, m: i64, n: i64, lambda: &[i64]) -> LemmaResult<LemmaCheckResult> {
    main_admissible(k, m, n, lambda)?;
    let lhs = BigInt::from(k) * num_traits::pow(binomial(n + k, k), (n + 2) as usize);
    let rhs = main_rhs(n, k, m, lambda);
    let holds = lhs > rhs;
    Ok(result(LemmaId::Main, with_tail(&[k, m, n], lambda), q(lhs), q(rhs), holds))
}

/// `k·C(n+k, k)^{n+2} > (k+1)·C(n+2k+1, n)·C(n+k, k−1)·C(n+k+1, k)^{n−1}`.
pub fn check_main_simplified(n: i64, k: i64) -> LemmaResult<LemmaCheckResult> {
    require(n >= 2 && k >= 1, "n >= 2, k >= 1")?;
    let lhs = BigInt::from(k) * num_traits::pow(binomial(n + k, k), (n + 2) as usize);
    let rhs = BigInt::from(k + 1)
        * binomial(n + 2 * k + 1, n)
        * binomial(n + k, k - 1)
        * num_traits::pow(binomial(n + k + 1, k), (n - 1) as usize);
    let holds = lhs > rhs;
    Ok(result(LemmaId::MainSimplified, vec![n, k], q(lhs), q(rhs), holds))
}

/// One move of the three-step reduction of the main inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionMove {
    Start,
    /// `λ_from += 1`, `λ_to −= 1` (1-based), `m` fixed.
    Rearrange { from: usize, to: usize },
    /// `λ_j −= 1` (1-based), so `m` drops by one.
    Lower { j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    pub mv: ReductionMove,
    pub lambda: Vec<i64>,
    pub m: i64,
    pub rhs: Rational,
}

/// Trace of the reduction from an admissible `(k, m, n, λ)` down to
/// `λ = e_j`, `m = k + 1`, followed by the simplified inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainReduction {
    pub initial: LemmaCheckResult,
    pub states: Vec<ReductionState>,
    pub simplified: LemmaCheckResult,
}

impl MainReduction {
    /// The right-hand side never decreases along the trace and ends at the
    /// simplified inequality's right-hand side.
    pub fn is_monotone(&self) -> bool {
        self.states.windows(2).all(|w| w[0].rhs <= w[1].rhs)
            && self.states.last().map(|s| &s.rhs) == Some(&self.simplified.rhs)
    }
}

pub fn main_reduction(k: i64, m: i64, n: i64, lambda: &[i64]) -> LemmaResult<MainReduction> {
    let initial = check_main(k, m, n, lambda)?;
    let mut lam = lambda.to_vec();
    let mut m_cur = m;
    let state = |mv, lam: &[i64], m_cur| ReductionState {
        mv,
        lambda: lam.to_vec(),
        m: m_cur,
        rhs: q(main_rhs(n, k, m_cur, lam)),
    };
    let mut states = vec![state(ReductionMove::Start, &lam, m_cur)];

    // Step 1: lift negative entries against positive ones.
    while let Some(from) = lam.iter().position(|&l| l < 0) {
        let to = lam.iter().position(|&l| l > 0).expect("sum lambda >= 1 leaves a positive entry");
        lam[from] += 1;
        lam[to] -= 1;
        states.push(state(ReductionMove::Rearrange { from: from + 1, to: to + 1 }, &lam, m_cur));
    }

    // Step 2: lower entries until only a single 1 remains.
    let pivot = lam.iter().position(|&l| l >= 1).expect("sum lambda >= 1");
    for j in (0..lam.len()).filter(|&j| j != pivot) {
        while lam[j] > 0 {
            lam[j] -= 1;
            m_cur -= 1;
            states.push(state(ReductionMove::Lower { j: j + 1 }, &lam, m_cur));
        }
    }
    while lam[pivot] > 1 {
        lam[pivot] -= 1;
        m_cur -= 1;
        states.push(state(ReductionMove::Lower { j: pivot + 1 }, &lam, m_cur));
    }
    debug_assert_eq!(m_cur, k + 1);

    // Step 3.
    let simplified = check_main_simplified(n, k)?;
    Ok(MainReduction {
        initial,
        states,
        simplified,
    })
}

// ---------------------------------------------------------------------------
// Elementary inequality and L(n, k)

/// `C(n+k, k−1) < (n+1)^{k−1}` evaluated for any `n, k >= 1`, including the
/// region `k <= 2` where it can fail.
pub fn elementary_values(n: i64, k: i64) -> LemmaCheckResult {
    let lhs = binomial(n + k, k - 1);
    let rhs = int_pow(n + 1, (k - 1).max(0) as u32);
    let holds = lhs < rhs;
    result(LemmaId::Elementary, vec![n, k], q(lhs), q(rhs), holds)
}

/// [`elementary_values`] restricted to its hypothesis `n, k >= 3`.
pub fn check_elementary(n: i64, k: i64) -> LemmaResult<LemmaCheckResult> {
    require(n >= 3 && k >= 3, "n, k >= 3")?;
    Ok(elementary_values(n, k))
}

fn factorial(v: i64) -> BigInt {
    (2..=v).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `L(n,k) = (n+1)^n / ((k+1)(n+k+1)^{n−1}) · (n+k)!² (2k+1)! / (n! k!² (n+2k+1)!)`
/// for `n, k >= 0`.
pub fn l_value(n: i64, k: i64) -> Rational {
    let mut num = int_pow(n + 1, n as u32) * num_traits::pow(factorial(n + k), 2) * factorial(2 * k + 1);
    let mut den = BigInt::from(k + 1) * factorial(n) * num_traits::pow(factorial(k), 2) * factorial(n + 2 * k + 1);
    if n >= 1 {
        den *= int_pow(n + k + 1, (n - 1) as u32);
    } else {
        num *= BigInt::from(n + k + 1);
    }
    Rational::new(num, den)
}

/// `L(n+1,k) / L(n,k)` from its closed form
/// `((n+2)/(n+1))^{n+1} · (n+k+1)^{n+1} / ((n+k+2)^n (n+2k+2))`.
pub fn l_ratio_closed_form(n: i64, k: i64) -> Rational {
    let num = int_pow(n + 2, (n + 1) as u32) * int_pow(n + k + 1, (n + 1) as u32);
    let den = int_pow(n + 1, (n + 1) as u32) * int_pow(n + k + 2, n as u32) * BigInt::from(n + 2 * k + 2);
    Rational::new(num, den)
}

/// `L(n,k) <= L(n+1,k)`.
pub fn check_l_monotone(n: i64, k: i64) -> LemmaResult<LemmaCheckResult> {
    require(n >= 0 && k >= 0, "n, k >= 0")?;
    let lhs = l_value(n, k);
    let rhs = l_value(n + 1, k);
    let holds = lhs <= rhs;
    Ok(result(LemmaId::Lmono, vec![n, k], lhs, rhs, holds))
}

/// `L(2,k) = 9(k²+4k+4) / (4(2k²+9k+9))`, and this exceeds 1.
pub fn check_l2_closed_form(k: i64) -> LemmaResult<LemmaCheckResult> {
    require(k >= 1, "k >= 1")?;
    let lhs = l_value(2, k);
    let rhs = Rational::new(
        BigInt::from(9 * (k * k + 4 * k + 4)),
        BigInt::from(4 * (2 * k * k + 9 * k + 9)),
    );
    let holds = lhs == rhs && rhs > Rational::one();
    Ok(result(LemmaId::L2ClosedForm, vec![k], lhs, rhs, holds))
}

// ---------------------------------------------------------------------------
// Bridge from case predictions

/// The inequality instance that decides a tied-degree case: Case II maps to
/// the Case II inequality with the group's own `(m, n, a, t)`; Case III maps
/// to the main inequality with `λ = (t_1..t_a, t_{a+1}−m, …, t_n−m)`.
///
/// Returns `None` when the degrees do not tie (no coefficient comparison is
/// needed) or for Case I.
pub fn lemma_instance_for(spec: &GroupSpec, prediction: &CasePrediction) -> Option<LemmaResult<LemmaCheckResult>> {
    if !prediction.degrees_tie() {
        return None;
    }
    let m = i64::from(spec.m());
    let n = spec.n() as i64;
    let t: Vec<i64> = spec.t().iter().map(|&x| i64::from(x)).collect();
    let a = prediction.a as usize;
    match prediction.case_tag {
        CaseTag::II => Some(check_comb1(m, n, a, &t)),
        CaseTag::IIIa | CaseTag::IIIb => {
            let lambda: Vec<i64> = t
                .iter()
                .enumerate()
                .map(|(j, &tj)| if j < a { tj } else { tj - m })
                .collect();
            Some(check_main(i64::from(prediction.k), m, n, &lambda))
        }
        CaseTag::I | CaseTag::Trivial => None,
    }
}

// ---------------------------------------------------------------------------
// Suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Comb1,
    Rearrange,
    Fmono,
    Main,
    Simplified,
    Elementary,
    Lmono,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Comb1,
        Suite::Rearrange,
        Suite::Fmono,
        Suite::Main,
        Suite::Simplified,
        Suite::Elementary,
        Suite::Lmono,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Comb1 => "comb1",
            Suite::Rearrange => "rearrange",
            Suite::Fmono => "fmono",
            Suite::Main => "main",
            Suite::Simplified => "simplified",
            Suite::Elementary => "elementary",
            Suite::Lmono => "lmono",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

/// Parameter boxes for the suites. Defaults are the full desk-scale scans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteBounds {
    /// Case II inequality: `m <= comb1_max_m`, `n <= comb1_max_n`.
    pub comb1_max_m: i64,
    pub comb1_max_n: i64,
    /// Rearrangement: `1 <= n, k <= rearrange_max`, `s >= -rearrange_max`.
    pub rearrange_max: i64,
    /// F-monotonicity: `n <= fmono_max_n`, `k <= fmono_max_k`, `Σλ <= fmono_max_sum`.
    pub fmono_max_n: i64,
    pub fmono_max_k: i64,
    pub fmono_max_sum: i64,
    /// Main inequality: `m <= main_max_m`, `n <= main_max_n`, `λ_j >= main_min_lambda`.
    pub main_max_m: i64,
    pub main_max_n: i64,
    pub main_min_lambda: i64,
    pub simplified_max_n: i64,
    pub simplified_max_k: i64,
    /// Elementary inequality: `3 <= n, k <= elementary_max`.
    pub elementary_max: i64,
    /// L-monotonicity: `n <= lmono_max_n`, `k <= lmono_max_k`; closed form for `1 <= k <= lmono_max_k`.
    pub lmono_max_n: i64,
    pub lmono_max_k: i64,
}

impl Default for SuiteBounds {
    fn default() -> Self {
        SuiteBounds {
            comb1_max_m: 12,
            comb1_max_n: 6,
            rearrange_max: 12,
            fmono_max_n: 4,
            fmono_max_k: 5,
            fmono_max_sum: 6,
            main_max_m: 10,
            main_max_n: 4,
            main_min_lambda: -3,
            simplified_max_n: 6,
            simplified_max_k: 10,
            elementary_max: 20,
            lmono_max_n: 8,
            lmono_max_k: 12,
        }
    }
}

impl SuiteBounds {
    /// Defaults with the primary bound of `suite` replaced by `max`; the
    /// secondary bounds are capped at `max`.
    pub fn with_max(suite: Suite, max: i64) -> Self {
        let mut b = SuiteBounds::default();
        match suite {
            Suite::Comb1 => {
                b.comb1_max_m = max;
                b.comb1_max_n = b.comb1_max_n.min(max);
            }
            Suite::Rearrange => b.rearrange_max = max,
            Suite::Fmono => {
                b.fmono_max_k = max;
                b.fmono_max_n = b.fmono_max_n.min(max);
                b.fmono_max_sum = b.fmono_max_sum.min(max);
            }
            Suite::Main => {
                b.main_max_m = max;
                b.main_max_n = b.main_max_n.min(max);
            }
            Suite::Simplified => {
                b.simplified_max_k = max;
                b.simplified_max_n = b.simplified_max_n.min(max);
            }
            Suite::Elementary => b.elementary_max = max,
            Suite::Lmono => {
                b.lmono_max_n = max;
                b.lmono_max_k = b.lmono_max_k.min(max);
            }
        }
        b
    }
}

/// Runs one suite over its parameter box, in a fixed deterministic order.
pub fn run_suite(suite: Suite, bounds: &SuiteBounds) -> Vec<LemmaCheckResult> {
    let ok = |r: LemmaResult<LemmaCheckResult>| r.expect("enumerated parameters satisfy the preconditions");
    let mut out = Vec::new();
    match suite {
        Suite::Comb1 => {
            for p in enumerate_comb1(bounds.comb1_max_m, bounds.comb1_max_n) {
                out.push(ok(check_comb1(p.m, p.n, p.a, &p.t)));
            }
        }
        Suite::Rearrange => {
            let b = bounds.rearrange_max;
            for n in 1..=b {
                for k in 0..=b {
                    for t in -b..=k {
                        for s in -b..t - 1 {
                            out.push(ok(check_rearrangement(n, k, s, t)));
                        }
                    }
                }
            }
        }
        Suite::Fmono => {
            for n in 1..=bounds.fmono_max_n {
                for k in 1..=bounds.fmono_max_k {
                    for_each_box(n as usize, 0, k, |lambda| {
                        if lambda.iter().sum::<i64>() > bounds.fmono_max_sum {
                            return;
                        }
                        for j in 1..=lambda.len() {
                            if lambda[j - 1] >= 1 {
                                out.push(ok(check_f_monotone(n, k, lambda, j)));
                            }
                        }
                    });
                }
            }
        }
        Suite::Main => {
            for m in 2..=bounds.main_max_m {
                for n in 2..=bounds.main_max_n {
                    for k in 1..m {
                        for_each_box(n as usize, bounds.main_min_lambda, k, |lambda| {
                            if lambda.iter().sum::<i64>() == m - k {
                                out.push(ok(check_main(k, m, n, lambda)));
                            }
                        });
                    }
                }
            }
        }
        Suite::Simplified => {
            for n in 2..=bounds.simplified_max_n {
                for k in 1..=bounds.simplified_max_k {
                    out.push(ok(check_main_simplified(n, k)));
                }
            }
        }
        Suite::Elementary => {
            for n in 3..=bounds.elementary_max {
                for k in 3..=bounds.elementary_max {
                    out.push(ok(check_elementary(n, k)));
                }
            }
        }
        Suite::Lmono => {
            for n in 0..=bounds.lmono_max_n {
                for k in 0..=bounds.lmono_max_k {
                    out.push(ok(check_l_monotone(n, k)));
                }
            }
            for k in 1..=bounds.lmono_max_k {
                out.push(ok(check_l2_closed_form(k)));
            }
        }
    }
    out
}

/// Visits every vector in `[lo, hi]^len` in lexicographic order.
fn for_each_box(len: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    if lo > hi {
        return;
    }
    let mut cur = vec![lo; len];
    loop {
        f(&cur);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < hi {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = lo;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    #[test]
    fn comb1_examples() {
        let r = check_comb1(3, 2, 2, &[1, 1]).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.holds), (rat_int(108), rat_int(60), true));
        assert!(check_comb1(3, 3, 3, &[1, 1, 1]).is_err());
        assert_eq!(enumerate_comb1(3, 2), vec![Comb1Params { m: 3, n: 2, a: 2, t: vec![1, 1] }]);
        assert!(enumerate_comb1(2, 4).is_empty());
    }

    #[test]
    fn rearrangement_examples() {
        let r = check_rearrangement(2, 5, 1, 4).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(140), rat_int(200), true));
        let r = check_rearrangement(1, 3, 0, 2).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(30), rat_int(36), true));
        assert!(check_rearrangement(2, 5, 2, 3).is_err());
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_value(2, 1, &[1, 0]).unwrap(), rat_int(80));
        let r = check_f_monotone(2, 3, &[1, 0], 1).unwrap();
        assert_eq!(r.rhs, f_value(2, 3, &[0, 0]).unwrap());
        assert!(r.holds);
        assert!(check_f_monotone(2, 3, &[0, 1], 1).is_err());
    }

    #[test]
    fn main_examples() {
        let r = check_main(2, 5, 2, &[1, 2]).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(2592), rat_int(720), true));
        let r = check_main(1, 2, 2, &[1, 0]).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(81), rat_int(80), true));
        assert!(check_main(2, 3, 2, &[2, -1]).unwrap().holds);
        assert!(check_main(2, 5, 2, &[3, 0]).is_err());
    }

    #[test]
    fn reduction_trace() {
        let red = main_reduction(2, 3, 2, &[2, -1]).unwrap();
        assert!(red.is_monotone());
        assert_eq!(red.states.last().unwrap().lambda, vec![1, 0]);
        assert!(red.simplified.holds);
    }

    #[test]
    fn simplified_and_elementary() {
        let r = check_main_simplified(2, 1).unwrap();
        assert_eq!((r.lhs, r.rhs), (rat_int(81), rat_int(80)));
        assert!(check_main_simplified(2, 2).unwrap().holds);
        let r = check_elementary(3, 3).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(15), rat_int(16), true));
        let r = elementary_values(3, 2);
        assert_eq!((r.lhs, r.rhs, r.holds), (rat_int(5), rat_int(4), false));
        assert!(check_elementary(3, 2).is_err());
    }

    #[test]
    fn l_values() {
        assert_eq!(l_value(2, 1), rat(81, 80));
        for n in 0..=8 {
            assert_eq!(&l_value(n + 1, 0) / &l_value(n, 0), rat_int(1));
        }
        let r = check_l2_closed_form(1).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, rat(81, 80));
    }

    #[test]
    fn box_iteration_order() {
        let mut seen = Vec::new();
        for_each_box(2, -1, 0, |v| seen.push(v.to_vec()));
        assert_eq!(seen, vec![vec![-1, -1], vec![-1, 0], vec![0, -1], vec![0, 0]]);
    }
}
