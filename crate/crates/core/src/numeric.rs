//! Double-precision evaluation of the potential `φ`, its first and mixed
//! second derivatives, the bordered Monge–Ampère determinant and the
//! Einstein defect, together with two independent oracles (the direct
//! determinant of the ξ-column matrix and a selected monomial expansion).
//!
//! `φ` omits the `n!/π^n` normalisation of the ball kernel:
//!
//! ```text
//! φ(z, w̄) = Σ_{k=0}^{m-1} ε^{-k|T|} (1 − Σ_j ε^{-k t_j} z_j w̄_j)^{-(n+1)}
//! ```
//!
//! so that on the slice `z = w = (x_1, 0, …, 0)` it equals the exact series
//! of [`crate::kernel::phi_diagonal_series`] at `x = |x_1|^2`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Float, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::GroupSpec;
use crate::kernel::residual_series;
use crate::series::TruncSeries;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("point has norm {norm} but must satisfy |z| < {bound}")]
    OutsideDomain { norm: f64, bound: f64 },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular denominator 1 − <z, γz̄> = 0 for index {index}")]
    SingularDenominator { index: u32 },
    #[error("index tuple must have n+1 = {expected} entries in [0, {m})")]
    InvalidIndices { expected: usize, m: u32 },
    #[error("radius must lie in (0, 1), got {0}")]
    InvalidRadius(f64),
}

type NumResult<T> = Result<T, NumericError>;

fn norm(v: &[C64]) -> f64 {
    Float::sqrt(v.iter().map(|c| c.norm_sqr()).sum::<f64>())
}

fn check_point(spec: &GroupSpec, z: &[C64], bound: f64, inclusive: bool) -> NumResult<()> {
    if z.len() != spec.n() {
        return Err(NumericError::DimensionMismatch {
            expected: spec.n(),
            got: z.len(),
        });
    }
    let r = norm(z);
    let inside = if inclusive { r <= bound } else { r < bound };
    if !inside || !r.is_finite() {
        return Err(NumericError::OutsideDomain { norm: r, bound });
    }
    Ok(())
}

/// `ε^j` as a complex number, `ε = exp(2πi/m)`.
pub fn eps_c(m: u32, j: i64) -> C64 {
    let r = j.rem_euclid(i64::from(m));
    C64::from_polar(1.0, 2.0 * core::f64::consts::PI * r as f64 / f64::from(m))
}

/// Per-group-element constants: `c_k = ε^{-k|T|}` and `e_{k,i} = ε^{-k t_i}`.
struct Action {
    c: Vec<C64>,
    e: Vec<Vec<C64>>,
}

impl Action {
    fn new(spec: &GroupSpec) -> Self {
        let m = spec.m();
        let t_sum = spec.t_sum() as i64;
        let c = (0..i64::from(m)).map(|k| eps_c(m, -k * t_sum)).collect();
        let e = (0..i64::from(m))
            .map(|k| spec.t().iter().map(|&ti| eps_c(m, -k * i64::from(ti))).collect())
            .collect();
        Action { c, e }
    }
}

/// `φ(z, w̄)` by the direct `m`-term sum. Requires `|z|, |w| < 1`.
pub fn phi_eval(spec: &GroupSpec, z: &[C64], w: &[C64]) -> NumResult<C64> {
    check_point(spec, z, 1.0, false)?;
    check_point(spec, w, 1.0, false)?;
    let act = Action::new(spec);
    let p = spec.n() as i32 + 1;
    Ok(act
        .c
        .iter()
        .zip(&act.e)
        .map(|(ck, ek)| {
            let s: C64 = ek.iter().zip(z.iter().zip(w)).map(|(e, (zi, wi))| e * zi * wi.conj()).sum();
            ck * (C64::new(1.0, 0.0) - s).powi(-p)
        })
        .sum())
}

/// Value and analytic derivatives of `φ(z, z̄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiDerivatives {
    pub value: C64,
    /// `∂φ/∂z_i`.
    pub grad: Vec<C64>,
    /// `∂φ/∂z̄_j`.
    pub grad_bar: Vec<C64>,
    /// Mixed Hessian `∂²φ/∂z_i∂z̄_j`, row-major by `i`.
    pub hess: Vec<Vec<C64>>,
}

/// Closed-form derivatives on the diagonal `w = z`:
///
/// ```text
/// φ_{z_i}    = (n+1) Σ_k c_k e_i z̄_i d^{-(n+2)}
/// φ_{z̄_j}    = (n+1) Σ_k c_k e_j z_j d^{-(n+2)}
/// φ_{z_i z̄_j} = (n+1) Σ_k c_k [δ_ij e_i d^{-(n+2)} + (n+2) e_i z̄_i e_j z_j d^{-(n+3)}]
/// ```
///
/// with `d = 1 − Σ_l e_l |z_l|^2`.
pub fn phi_derivatives(spec: &GroupSpec, z: &[C64]) -> NumResult<PhiDerivatives> {
    check_point(spec, z, 1.0, false)?;
    let n = spec.n();
    let n1 = (n + 1) as f64;
    let n2 = (n + 2) as f64;
    let act = Action::new(spec);
    let mut out = PhiDerivatives {
        value: C64::zero(),
        grad: vec![C64::zero(); n],
        grad_bar: vec![C64::zero(); n],
        hess: vec![vec![C64::zero(); n]; n],
    };
    for (ck, ek) in act.c.iter().zip(&act.e) {
        let s: C64 = ek.iter().zip(z).map(|(e, zi)| e * zi.norm_sqr()).sum();
        let d = C64::new(1.0, 0.0) - s;
        let d1 = d.powi(-(n as i32 + 1));
        let d2 = d1 / d;
        let d3 = d2 / d;
        out.value += ck * d1;
        let u: Vec<C64> = ek.iter().zip(z).map(|(e, zi)| e * zi.conj()).collect();
        let v: Vec<C64> = ek.iter().zip(z).map(|(e, zi)| e * zi).collect();
        for i in 0..n {
            out.grad[i] += ck * n1 * u[i] * d2;
            out.grad_bar[i] += ck * n1 * v[i] * d2;
            for (j, h) in out.hess[i].iter_mut().enumerate() {
                *h += ck * n1 * n2 * u[i] * v[j] * d3;
                if i == j {
                    *h += ck * n1 * ek[i] * d2;
                }
            }
        }
    }
    Ok(out)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn complex_det(mut a: Vec<Vec<C64>>) -> C64 {
    let n = a.len();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return C64::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            if f.is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// The bordered matrix `[[φ, φ_z̄ᵀ], [φ_z, H]]`.
pub fn bordered_matrix(d: &PhiDerivatives) -> Vec<Vec<C64>> {
    let n = d.grad.len();
    let mut rows = Vec::with_capacity(n + 1);
    let mut top = vec![d.value];
    top.extend_from_slice(&d.grad_bar);
    rows.push(top);
    for i in 0..n {
        let mut row = vec![d.grad[i]];
        row.extend_from_slice(&d.hess[i]);
        rows.push(row);
    }
    rows
}

/// `J(φ)` at `z` as a complex number; its imaginary part is rounding noise.
pub fn j_phi_complex(spec: &GroupSpec, z: &[C64]) -> NumResult<C64> {
    Ok(complex_det(bordered_matrix(&phi_derivatives(spec, z)?)))
}

/// `J(φ)` at `z` (real part).
pub fn j_phi(spec: &GroupSpec, z: &[C64]) -> NumResult<f64> {
    Ok(j_phi_complex(spec, z)?.re)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericDefectSample {
    pub z: Vec<C64>,
    pub phi: C64,
    pub j: f64,
    /// `J − (n+1)^n φ^{n+2}`.
    pub defect: f64,
    /// `defect / max(1, |(n+1)^n φ^{n+2}|)`.
    pub rel_defect: f64,
}

pub fn ke_defect(spec: &GroupSpec, z: &[C64]) -> NumResult<NumericDefectSample> {
    let d = phi_derivatives(spec, z)?;
    let n = spec.n() as i32;
    let phi = d.value;
    let j = complex_det(bordered_matrix(&d)).re;
    let target = Float::powi((n + 1) as f64, n) * phi.powi(n + 2).re;
    let defect = j - target;
    Ok(NumericDefectSample {
        z: z.to_vec(),
        phi,
        j,
        defect,
        rel_defect: defect / Float::abs(target).max(1.0),
    })
}

/// `det A(γ^{k_0}, …, γ^{k_n})` from the ξ columns:
///
/// ```text
/// ξ_0(γ) = (1 − <z, γz̄>, (n+1) γz̄)
/// ξ_j(γ) = (z^T γ_j, [γ_j (1 − <z, γz̄>) + (n+2) γz̄ (z^T γ_j)] / (1 − <z, γz̄>))
/// ```
///
/// where `γ = diag(ε^{k t_i})` and `γ_j` is its `j`-th column.
pub fn det_a_direct(spec: &GroupSpec, k: &[u32], z: &[C64]) -> NumResult<C64> {
    check_point(spec, z, 1.0, false)?;
    let n = spec.n();
    let m = spec.m();
    if k.len() != n + 1 || k.iter().any(|&ki| ki >= m) {
        return Err(NumericError::InvalidIndices { expected: n + 1, m });
    }
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n + 1);
    for (j, &kj) in k.iter().enumerate() {
        let g: Vec<C64> = spec
            .t()
            .iter()
            .map(|&ti| eps_c(m, i64::from(kj) * i64::from(ti)))
            .collect();
        let gz: Vec<C64> = g.iter().zip(z).map(|(gi, zi)| gi * zi.conj()).collect();
        let s = C64::new(1.0, 0.0) - z.iter().zip(&gz).map(|(a, b)| a * b).sum::<C64>();
        let col = if j == 0 {
            let mut c = vec![s];
            c.extend(gz.iter().map(|v| v * (n + 1) as f64));
            c
        } else {
            if s.is_zero() {
                return Err(NumericError::SingularDenominator { index: kj });
            }
            let zg = z[j - 1] * g[j - 1];
            let mut c = vec![zg];
            c.extend((0..n).map(|i| {
                let gji = if i == j - 1 { g[i] } else { C64::zero() };
                (gji * s + gz[i] * zg * (n + 2) as f64) / s
            }));
            c
        };
        cols.push(col);
    }
    let rows = (0..=n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    Ok(complex_det(rows))
}

/// Result of the monomial oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOracleValue {
    pub value: C64,
    /// Bound on the dropped tail `m·C(n+D, n)·r^D·(1−r)^{-(n+1)}` with
    /// `D = cutoff + 1` and `r = Σ |z_j||w_j|`.
    pub truncation_bound: f64,
    /// Set when the bound exceeds [`MONOMIAL_WARN_REL`] relative to the value.
    pub warning: Option<f64>,
}

pub const MONOMIAL_WARN_REL: f64 = 1e-8;

/// `φ(z, w̄)` as the selected monomial sum
///
/// ```text
/// Σ_{|α| ≤ cutoff, m | |T| + α·T} m·(n+|α|)!/(n!·α!)·z^α·w̄^α
/// ```
///
/// The selection keeps exactly the multi-indices whose character sum
/// `Σ_k ε^{-k(|T| + α·T)}` does not cancel. Requires `|z|, |w| <= 1/2`.
pub fn monomial_oracle_phi(spec: &GroupSpec, z: &[C64], w: &[C64], cutoff: usize) -> NumResult<MonomialOracleValue> {
    monomial_sum(spec, z, w, cutoff, Selection::Plus)
}

/// Which character sums survive in the monomial expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// `m | |T| + α·T`, the rule that reproduces `φ`.
    Plus,
    /// `m | |T| − α·T`; kept only to show that it does not.
    Minus,
}

/// Whether the multi-index `α` survives under `rule`.
pub fn monomial_selected(spec: &GroupSpec, alpha: &[u32], rule: Selection) -> bool {
    let m = i64::from(spec.m());
    let dot: i64 = alpha.iter().zip(spec.t()).map(|(&a, &t)| i64::from(a) * i64::from(t)).sum();
    let t_sum = spec.t_sum() as i64;
    match rule {
        Selection::Plus => (t_sum + dot).rem_euclid(m) == 0,
        Selection::Minus => (t_sum - dot).rem_euclid(m) == 0,
    }
}

/// [`monomial_oracle_phi`] with an explicit selection rule.
pub fn monomial_sum(
    spec: &GroupSpec,
    z: &[C64],
    w: &[C64],
    cutoff: usize,
    rule: Selection,
) -> NumResult<MonomialOracleValue> {
    check_point(spec, z, 0.5, true)?;
    check_point(spec, w, 0.5, true)?;
    let n = spec.n();
    let m = u64::from(spec.m());
    let t: Vec<u64> = spec.t().iter().map(|&x| u64::from(x)).collect();
    let target = match rule {
        Selection::Plus => (m - spec.t_sum() % m) % m,
        Selection::Minus => spec.t_sum() % m,
    };
    let zw: Vec<C64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();

    // Walk α coordinate by coordinate, carrying the partial monomial, the
    // multinomial |α|!/α! and α·T mod m; keep α·T ≡ target.
    struct Walk<'a> {
        n: usize,
        m: u64,
        target: u64,
        t: &'a [u64],
        zw: &'a [C64],
        acc: C64,
    }
    impl Walk<'_> {
        fn step(&mut self, i: usize, left: usize, total: usize, term: C64, multinom: f64, dot: u64) {
            if i == self.n {
                if dot == self.target {
                    self.acc += term * multinom * binom_f64(self.n + total, self.n) * self.m as f64;
                }
                return;
            }
            let mut p = C64::new(1.0, 0.0);
            let mut mult = multinom;
            for a in 0..=left {
                if a > 0 {
                    p *= self.zw[i];
                    mult *= (total + a) as f64 / a as f64;
                }
                let d = (dot + a as u64 * self.t[i]) % self.m;
                self.step(i + 1, left - a, total + a, term * p, mult, d);
            }
        }
    }
    let mut walk = Walk {
        n,
        m,
        target,
        t: &t,
        zw: &zw,
        acc: C64::zero(),
    };
    walk.step(0, cutoff, 0, C64::new(1.0, 0.0), 1.0, 0);
    let value = walk.acc;

    let r: f64 = z.iter().zip(w).map(|(a, b)| a.norm() * b.norm()).sum();
    let dd = cutoff + 1;
    let truncation_bound =
        m as f64 * binom_f64(n + dd, n) * Float::powi(r, dd as i32) / Float::powi(1.0 - r, n as i32 + 1);
    let warning = (truncation_bound > MONOMIAL_WARN_REL * value.norm().max(1.0)).then_some(truncation_bound);
    Ok(MonomialOracleValue {
        value,
        truncation_bound,
        warning,
    })
}

fn binom_f64(a: usize, b: usize) -> f64 {
    let b = b.min(a - b);
    (1..=b).fold(1.0, |acc, i| acc * (a - b + i) as f64 / i as f64)
}

/// Number of slice and interior points in a grid scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridCounts {
    pub slice: usize,
    pub interior: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridScan {
    pub samples: Vec<NumericDefectSample>,
    pub max_abs_rel_defect: f64,
    pub argmax: Option<usize>,
}

/// The deterministic slice points `(radius·i/slice, 0, …, 0)`, `i = 1..=slice`,
/// followed by `interior` seeded uniform points of the ball of `radius`.
pub fn grid_points(n: usize, radius: f64, counts: GridCounts, seed: u64) -> NumResult<Vec<Vec<C64>>> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(NumericError::InvalidRadius(radius));
    }
    let mut pts = Vec::with_capacity(counts.slice + counts.interior);
    for i in 1..=counts.slice {
        let mut z = vec![C64::zero(); n];
        z[0] = C64::new(radius * i as f64 / counts.slice as f64, 0.0);
        pts.push(z);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while pts.len() < counts.slice + counts.interior {
        let z: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
            .collect();
        if norm(&z) < radius {
            pts.push(z);
        }
    }
    Ok(pts)
}

/// Evaluates [`ke_defect`] on [`grid_points`]. The argmax is the first
/// index attaining the maximum of `|rel_defect|`.
pub fn residual_grid_scan(spec: &GroupSpec, radius: f64, counts: GridCounts, seed: u64) -> NumResult<GridScan> {
    let samples = grid_points(spec.n(), radius, counts, seed)?
        .iter()
        .map(|z| ke_defect(spec, z))
        .collect::<NumResult<Vec<_>>>()?;
    Ok(summarize(samples))
}

pub fn summarize(samples: Vec<NumericDefectSample>) -> GridScan {
    let mut max = 0.0;
    let mut argmax = None;
    for (i, s) in samples.iter().enumerate() {
        let a = Float::abs(s.rel_defect);
        if argmax.is_none() || a > max {
            max = a;
            argmax = Some(i);
        }
    }
    GridScan {
        samples,
        max_abs_rel_defect: max,
        argmax,
    }
}

/// Truncation order for slice comparisons: at `x <= 1/2` the dropped tail
/// of the residual series is below `1e-12` relative from this order on.
pub const SLICE_ORDER: usize = 96;

/// `R(x)` in double precision, from the exact residual series at `order`.
pub fn residual_at(spec: &GroupSpec, x: f64, order: usize) -> f64 {
    horner(&residual_series(spec, order), x)
}

fn horner(r: &TruncSeries, x: f64) -> f64 {
    r.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// Slice comparison of [`ke_defect`] at `(√x, 0, …, 0)` with `−(n+1)^n R(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceCheck {
    pub x: f64,
    pub defect: f64,
    pub predicted: f64,
    /// `|defect − predicted| / |predicted|`, or `|rel_defect|` when the
    /// exact residual vanishes (trivial group).
    pub rel_gap: f64,
    /// Hadamard bound `Π_i ‖row_i‖` of the bordered matrix, the scale of
    /// the rounding error in `J`.
    pub hadamard: f64,
    /// `|predicted| >= SLICE_RESOLUTION · hadamard`: the defect is large
    /// enough relative to the matrix entries to be resolved in doubles.
    pub resolved: bool,
}

/// Smallest `|(n+1)^n R(x)|` relative to the Hadamard bound at which a
/// slice point is compared. Below it the determinant cancels to rounding
/// level (observed gap ≈ 4e-16 divided by this ratio).
pub const SLICE_RESOLUTION: f64 = 1e-6;

pub fn slice_check(spec: &GroupSpec, x: f64, order: usize) -> NumResult<SliceCheck> {
    slice_check_with(spec, &residual_series(spec, order), x)
}

/// [`slice_check`] against a precomputed residual series.
pub fn slice_check_with(spec: &GroupSpec, series: &TruncSeries, x: f64) -> NumResult<SliceCheck> {
    let mut z = vec![C64::zero(); spec.n()];
    z[0] = C64::new(Float::sqrt(x), 0.0);
    let d = phi_derivatives(spec, &z)?;
    let rows = bordered_matrix(&d);
    let hadamard = rows
        .iter()
        .map(|r| Float::sqrt(r.iter().map(|c| c.norm_sqr()).sum::<f64>()))
        .product::<f64>();
    let sample = ke_defect(spec, &z)?;
    let n = spec.n() as i32;
    if series.is_zero() {
        return Ok(SliceCheck {
            x,
            defect: sample.defect,
            predicted: 0.0,
            rel_gap: Float::abs(sample.rel_defect),
            hadamard,
            resolved: true,
        });
    }
    let predicted = -Float::powi((n + 1) as f64, n) * horner(series, x);
    Ok(SliceCheck {
        x,
        defect: sample.defect,
        predicted,
        rel_gap: Float::abs(sample.defect - predicted) / Float::abs(predicted).max(f64::MIN_POSITIVE),
        hadamard,
        resolved: Float::abs(predicted) >= SLICE_RESOLUTION * hadamard,
    })
}

/// [`slice_check`]'s relative gap.
pub fn slice_consistency(spec: &GroupSpec, x: f64, order: usize) -> NumResult<f64> {
    slice_check(spec, x, order).map(|c| c.rel_gap)
}

/// Default step for the finite-difference checks.
pub const FD_STEP: f64 = 1e-5;

fn max_abs(v: impl Iterator<Item = C64>) -> f64 {
    v.map(|c| c.norm()).fold(0.0, f64::max)
}

/// Wirtinger derivatives `(½(∂_x − i∂_y) f, ½(∂_x + i∂_y) f)` along
/// coordinate `i` by central differences.
fn wirtinger<F: Fn(&[C64]) -> NumResult<C64>>(f: &F, z: &[C64], i: usize, h: f64) -> NumResult<(C64, C64)> {
    let shifted = |delta: C64| -> NumResult<C64> {
        let mut p = z.to_vec();
        p[i] += delta;
        f(&p)
    };
    let dx = (shifted(C64::new(h, 0.0))? - shifted(C64::new(-h, 0.0))?) / (2.0 * h);
    let dy = (shifted(C64::new(0.0, h))? - shifted(C64::new(0.0, -h))?) / (2.0 * h);
    let i_dy = C64::i() * dy;
    Ok(((dx - i_dy) * 0.5, (dx + i_dy) * 0.5))
}

/// Relative max-norm error of the analytic `(∂_z φ, ∂_z̄ φ)` against central
/// differences of `φ(z, z̄)`.
pub fn fd_gradient_error(spec: &GroupSpec, z: &[C64], h: f64) -> NumResult<f64> {
    let d = phi_derivatives(spec, z)?;
    let f = |p: &[C64]| phi_eval(spec, p, p);
    let mut err = 0.0;
    for i in 0..spec.n() {
        let (dz, dzb) = wirtinger(&f, z, i, h)?;
        err = f64::max(err, (dz - d.grad[i]).norm());
        err = f64::max(err, (dzb - d.grad_bar[i]).norm());
    }
    let scale = max_abs(d.grad.iter().chain(&d.grad_bar).copied()).max(f64::MIN_POSITIVE);
    Ok(err / scale)
}

/// Relative max-norm error of the analytic mixed Hessian against central
/// differences `∂_{z_i}` of the analytic `∂_{z̄_j} φ`.
pub fn fd_hessian_error(spec: &GroupSpec, z: &[C64], h: f64) -> NumResult<f64> {
    let d = phi_derivatives(spec, z)?;
    let n = spec.n();
    let mut err = 0.0;
    for j in 0..n {
        let g = |p: &[C64]| phi_derivatives(spec, p).map(|d| d.grad_bar[j]);
        for i in 0..n {
            let (dz, _) = wirtinger(&g, z, i, h)?;
            err = f64::max(err, (dz - d.hess[i][j]).norm());
        }
    }
    let scale = max_abs(d.hess.iter().flatten().copied()).max(f64::MIN_POSITIVE);
    Ok(err / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::validate_spec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn phi_trivial() {
        let ball = GroupSpec::trivial(2).unwrap();
        assert!((phi_eval(&ball, &[c(0.0), c(0.0)], &[c(0.0), c(0.0)]).unwrap() - c(1.0)).norm() < 1e-15);
        let z = [C64::new(0.3, -0.2), C64::new(0.1, 0.4)];
        let r2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
        let expect = (1.0 - r2).powi(-3);
        assert!((phi_eval(&ball, &z, &z).unwrap() - c(expect)).norm() < 1e-12 * expect);
        assert!(phi_eval(&ball, &[c(1.0), c(0.0)], &z).is_err());
    }

    #[test]
    fn derivatives_at_origin() {
        let ball = GroupSpec::trivial(3).unwrap();
        let d = phi_derivatives(&ball, &[c(0.0); 3]).unwrap();
        assert!(d.grad.iter().all(|g| g.is_zero()));
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 4.0 } else { 0.0 };
                assert_eq!(d.hess[i][j], c(want));
            }
        }
    }

    #[test]
    fn trivial_group_is_einstein() {
        let ball = GroupSpec::trivial(2).unwrap();
        let s = ke_defect(&ball, &[C64::new(0.5, 0.1), C64::new(-0.2, 0.3)]).unwrap();
        assert!(s.rel_defect.abs() < 1e-12);
    }

    #[test]
    fn defect_at_origin_case_one() {
        let s = validate_spec(2, &[1, 1]).unwrap();
        let d = ke_defect(&s, &[c(0.0), c(0.0)]).unwrap();
        assert!((d.defect + 9.0 * 16.0).abs() < 1e-9);
    }

    #[test]
    fn det_a_identity_and_origin() {
        let s = validate_spec(5, &[1, 2]).unwrap();
        let v = det_a_direct(&s, &[0, 0, 0], &[c(0.4), c(0.0)]).unwrap();
        assert!((v - c(1.0)).norm() < 1e-12);
        let v = det_a_direct(&s, &[3, 1, 4], &[c(0.0), c(0.0)]).unwrap();
        assert!((v - eps_c(5, 1 + 4 * 2)).norm() < 1e-12);
        let v = det_a_direct(&validate_spec(4, &[1, 3]).unwrap(), &[1, 2, 3], &[c((1.0f64 / 3.0).sqrt()), c(0.0)]).unwrap();
        assert!((v - c(-1.0)).norm() < 1e-12);
    }

    #[test]
    fn monomial_parity_example() {
        let s = validate_spec(2, &[1, 1]).unwrap();
        let z = [c(0.3), c(0.2)];
        let o = monomial_oracle_phi(&s, &z, &z, 60).unwrap();
        let d = phi_eval(&s, &z, &z).unwrap();
        assert!((o.value - d).norm() < 1e-6);
        assert!(o.warning.is_none());
        assert!(monomial_oracle_phi(&s, &z, &z, 2).unwrap().warning.is_some());
        for a in 0..6u32 {
            for b in 0..6u32 {
                assert_eq!(monomial_selected(&s, &[a, b], Selection::Plus), (a + b) % 2 == 0);
            }
        }
    }

    #[test]
    fn wrong_selection_rule_fails() {
        let s = validate_spec(3, &[1, 1]).unwrap();
        let z = [C64::new(0.3, 0.1), C64::new(0.2, -0.1)];
        let w = [C64::new(-0.1, 0.2), C64::new(0.25, 0.05)];
        let d = phi_eval(&s, &z, &w).unwrap();
        let plus = monomial_sum(&s, &z, &w, 60, Selection::Plus).unwrap().value;
        let minus = monomial_sum(&s, &z, &w, 60, Selection::Minus).unwrap().value;
        assert!((plus - d).norm() < 1e-10);
        assert!((minus - d).norm() > 1e-3);
    }

    #[test]
    fn grid_is_deterministic() {
        let s = validate_spec(3, &[1, 1]).unwrap();
        let counts = GridCounts { slice: 5, interior: 5 };
        let a = residual_grid_scan(&s, 0.8, counts, 7).unwrap();
        let b = residual_grid_scan(&s, 0.8, counts, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.max_abs_rel_defect > 1e-4);
        assert!(grid_points(2, 1.0, counts, 0).is_err());
    }

    #[test]
    fn finite_differences() {
        let s = validate_spec(3, &[1, 2]).unwrap();
        let z = [C64::new(0.3, 0.1), C64::new(-0.2, 0.25)];
        assert!(fd_gradient_error(&s, &z, FD_STEP).unwrap() < 1e-6);
        assert!(fd_hessian_error(&s, &z, FD_STEP).unwrap() < 1e-6);
    }
}
