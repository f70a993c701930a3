//! Vector-valued Eisenstein series `Ê^l_km(g, s)` on `SL(2, C)`, their
//! pullbacks to `H³`, the classical series and Fourier coefficients.
//!
//! All sums run over the coset list of [`crate::bianchi_cosets`] truncated at
//! `Ω(c, d; P) ≤ X` and are reduced with [`crate::reduce`], so values do not
//! depend on the thread count.
//!
//! Normalisation: `Ê = Σ_rows f(σg) / (index · rows_per_coset)`, which is the
//! same number under both index conventions (`1/|units|` times the SL sum).
//! Only [`classical_e`], defined as `index · Ê^0_00`, depends on the convention.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bianchi_cosets::{enumerate_coset_rows, unipotent_index, CosetRow, IndexConvention};
use crate::error::{invalid, Result};
use crate::harmonics::{wigner_d, HarmonicIndex};
use crate::hyperbolic3::{Mat2, PointH3};
use crate::number_field::RingSpec;
use crate::real::{ceil, cis, fabs, pow, round, rpow, sqrt, PI, TAU};
use crate::reduce::{map_range, sum_slice};
use crate::rotations::{frame_rotation_cd, spin_cover, Su2};
use crate::zeta::{dedekind_zeta, norm_counts, scattering_phi, DEFAULT_CUTOFF};

/// Relative size of the tail estimate above which [`SeriesValue::tail_warning`] is set.
pub const TAIL_WARNING_RATIO: f64 = 0.1;

/// Spectral parameter, truncation and index convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesParams {
    /// `s`, with `Re s > 1`.
    pub s: Complex64,
    /// Truncation `X` of `Ω(c, d; P)`.
    pub omega_bound: f64,
    /// Index convention.
    pub convention: IndexConvention,
}

impl SeriesParams {
    /// SL convention.
    pub fn new(s: Complex64, omega_bound: f64) -> Self {
        SeriesParams { s, omega_bound, convention: IndexConvention::Sl }
    }

    fn validate(&self) -> Result<()> {
        if !(self.s.re > 1.0) || !self.s.im.is_finite() {
            return Err(invalid("the series converges only for Re s > 1"));
        }
        if !(self.omega_bound > 0.0) || !self.omega_bound.is_finite() {
            return Err(invalid("Ω bound must be positive and finite"));
        }
        Ok(())
    }
}

/// A truncated series value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    /// Partial sum.
    pub value: Complex64,
    /// Number of coset rows summed.
    pub n_terms: usize,
    /// Truncation used.
    pub omega_bound: f64,
    /// Estimate of the omitted part, in the same normalisation as `value`;
    /// asymptotically `C·X^{1−Re s}`.
    pub tail_estimate: f64,
    /// `tail_estimate > 0.1·|value|`.
    pub tail_warning: bool,
}

impl SeriesValue {
    fn new(value: Complex64, n_terms: usize, omega_bound: f64, tail_estimate: f64) -> Self {
        SeriesValue {
            value,
            n_terms,
            omega_bound,
            tail_estimate,
            tail_warning: tail_estimate > TAIL_WARNING_RATIO * value.norm(),
        }
    }
}

/// `f_lkm(g, s) = conj(D^l_km(Φ(T(g))⁻¹))·height(g)^{1+s}`.
pub fn f_lkm(idx: HarmonicIndex, g: &Mat2, s: Complex64) -> Result<Complex64> {
    let t = g.c.norm_sqr() + g.d.norm_sqr();
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("f_lkm needs a bottom row (c, d) ≠ (0, 0)"));
    }
    Ok(f_from_bottom_row(idx, g.c, g.d, s))
}

#[inline]
fn f_from_bottom_row(idx: HarmonicIndex, c: Complex64, d: Complex64, s: Complex64) -> Complex64 {
    let t = c.norm_sqr() + d.norm_sqr();
    let k = Su2::from_bottom_row(c, d);
    let weight = height_power(1.0 / t, s);
    if idx == HarmonicIndex::SCALAR {
        return weight;
    }
    wigner_d(idx, &spin_cover(&k.inverse())).conj() * weight
}

#[inline]
fn height_power(h: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new(pow(h, 1.0 + s.re), 0.0)
    } else {
        rpow(h, s + 1.0)
    }
}

/// Largest norm of `c` summed explicitly in [`tail_estimate`].
const TAIL_EXPLICIT_NORMS: i64 = 1 << 18;

/// Estimate of `Σ_{Ω > X} (h/Ω)^{1+σ}` over all rows, normalised by `norm`.
///
/// For fixed `c ≠ 0` the omitted `d` are replaced by the integral
/// `(π/|Λ|)·h^{1+σ}·Ω_c^{−σ}/σ` over `Ω > Ω_c`, where `Ω_c` is `X` with the
/// disk radius shrunk by the covering radius of `O_D`, or `N(c)h²`. That is summed over the
/// lattice of `c` (counted exactly up to [`TAIL_EXPLICIT_NORMS`], by area
/// beyond). Ignoring coprimality overcounts by about `ζ_D(2)`. For large `X`
/// this behaves like `C·X^{1−σ}`, but it also sees the lumps that high points
/// get when a whole shell of `c` starts just beyond `X`.
fn tail_estimate(ring: &RingSpec, omega_bound: f64, height: f64, sigma: f64, norm: f64) -> f64 {
    let area = PI / ring.covolume();
    let h2 = height * height;
    let k = omega_bound / h2;
    let m = (ceil(4.0 * k) as i64).max(ceil(k) as i64 + 64).min(TAIL_EXPLICIT_NORMS);
    let counts = norm_counts(ring, m);
    let rho = covering_radius(ring);
    let (mut inner, mut outer) = (0.0, 0.0);
    for (n, &cnt) in counts.iter().enumerate().skip(1) {
        if cnt == 0 {
            continue;
        }
        if (n as f64) <= k {
            // Lattice points of `d` can sit up to `ρ` inside the disk edge.
            let edge = sqrt(omega_bound - n as f64 * h2) - rho;
            let om = n as f64 * h2 + if edge > 0.0 { edge * edge } else { 0.0 };
            inner += cnt as f64 * pow(om, -sigma);
        } else {
            outer += cnt as f64 * pow(n as f64 * h2, -sigma);
        }
    }
    let m = m as f64;
    if k > m {
        inner += area * (k - m) * pow(omega_bound, -sigma);
        outer += area * pow(h2, -sigma) * pow(k, 1.0 - sigma) / (sigma - 1.0);
    } else {
        outer += area * pow(h2, -sigma) * pow(m, 1.0 - sigma) / (sigma - 1.0);
    }
    let mut t = area * pow(height, 1.0 + sigma) * (inner + outer) / sigma;
    // The c = 0 rows sit at Ω = 1.
    if omega_bound < 1.0 {
        t += ring.units().len() as f64 * pow(height, 1.0 + sigma);
    }
    t / norm
}

/// Leading term `2κ·h^{1+σ}·X^{1−σ}/(σ − 1)` of the omitted part of the
/// scalar series at height `h`, in the normalisation of `Ê`, with
/// `κ = π²/(2h²·|Λ|²·ζ_D(2))` the asymptotic density of coprime rows.
///
/// Unlike [`SeriesValue::tail_estimate`] this is not meant as a bound; it is
/// the expected size of the tail, for extrapolation.
pub fn asymptotic_tail(ring: &RingSpec, height: f64, sigma: f64, omega_bound: f64, conv: IndexConvention) -> Result<f64> {
    if !(sigma > 1.0) || !(height > 0.0) || !(omega_bound > 0.0) {
        return Err(invalid("asymptotic tail needs σ > 1, h > 0 and X > 0"));
    }
    let zeta2 = dedekind_zeta(ring, Complex64::new(2.0, 0.0), DEFAULT_CUTOFF)?.value.re;
    let covol = ring.covolume();
    let kappa = PI * PI / (2.0 * height * height * covol * covol * zeta2);
    let t = 2.0 * kappa * pow(height, 1.0 + sigma) * pow(omega_bound, 1.0 - sigma) / (sigma - 1.0);
    Ok(t / series_norm(ring, conv))
}

/// Circumradius of the triangle `(0, 1, ω)`, which is acute or right for every
/// supported ring, so it is the covering radius of `O_D`.
fn covering_radius(ring: &RingSpec) -> f64 {
    let w = ring.omega();
    w.norm() * (w - 1.0).norm() / (2.0 * w.im)
}

fn series_norm(ring: &RingSpec, conv: IndexConvention) -> f64 {
    (unipotent_index(ring, conv) * conv.rows_per_coset()) as f64
}

/// `Ê^l_km(g, s) = (1/index)·Σ_{σ ∈ Γ'_∞\Γ} f_lkm(σg, s)`, truncated at
/// `Ω(σ; g·j) ≤ X`.
pub fn eisenstein_hat(ring: &RingSpec, idx: HarmonicIndex, g: &Mat2, params: &SeriesParams) -> Result<SeriesValue> {
    params.validate()?;
    let p = g.act(&PointH3::J);
    let rows = enumerate_coset_rows(ring, &p, params.omega_bound)?;
    Ok(hat_from_rows(ring, idx, g, params, &rows, p.lambda))
}

fn hat_from_rows(
    ring: &RingSpec,
    idx: HarmonicIndex,
    g: &Mat2,
    params: &SeriesParams,
    rows: &[CosetRow],
    height: f64,
) -> SeriesValue {
    let norm = series_norm(ring, params.convention);
    let sum = sum_slice(rows, |r| {
        let (c, d) = (ring.embed(r.c), ring.embed(r.d));
        f_from_bottom_row(idx, c * g.a + d * g.c, c * g.b + d * g.d, params.s)
    });
    let tail = tail_estimate(ring, params.omega_bound, height, params.s.re, norm);
    SeriesValue::new(sum / norm, rows.len(), params.omega_bound, tail)
}

/// Rows passed to the `*_with_rows` functions must be
/// `enumerate_coset_rows(ring, p, X)` for the same `p` and `X`; this checks the
/// cheap necessary conditions.
fn check_rows(ring: &RingSpec, p: &PointH3, params: &SeriesParams, rows: &[CosetRow]) -> Result<()> {
    params.validate()?;
    let units = ring.units().len();
    if rows.len() < units || rows.iter().any(|r| !(r.omega <= params.omega_bound)) {
        return Err(invalid("coset list does not match the point and bound"));
    }
    // Rows with c = 0 have Ω = 1 at every point, so probe the others.
    for r in rows.iter().filter(|r| !r.c.is_zero()).take(8) {
        let (c, d) = (ring.embed(r.c), ring.embed(r.d));
        let om = (c * p.z + d).norm_sqr() + c.norm_sqr() * p.lambda * p.lambda;
        if fabs(om - r.omega) > 1e-9 * om.max(1.0) {
            return Err(invalid("coset list was enumerated at a different point"));
        }
    }
    Ok(())
}

/// `E^l_km(P, s) = Ê^l_km(n[z]a[λ], s)`, with the coset list enumerated at `P`.
pub fn eisenstein_e(ring: &RingSpec, idx: HarmonicIndex, p: &PointH3, params: &SeriesParams) -> Result<SeriesValue> {
    params.validate()?;
    let rows = enumerate_coset_rows(ring, p, params.omega_bound)?;
    eisenstein_e_with_rows(ring, idx, p, params, &rows)
}

/// [`eisenstein_e`] over a precomputed coset list.
pub fn eisenstein_e_with_rows(
    ring: &RingSpec,
    idx: HarmonicIndex,
    p: &PointH3,
    params: &SeriesParams,
    rows: &[CosetRow],
) -> Result<SeriesValue> {
    check_rows(ring, p, params, rows)?;
    Ok(hat_from_rows(ring, idx, &Mat2::point(p), params, rows, p.lambda))
}

/// `H^l_km(P, s) = (1/index)·Σ conj(D^l_km(R(σ, P)⁻¹))·(Im σP)^{1+s}`.
///
/// Equals `e^{−i(k+m)π}·E^l_km(P, s)`.
pub fn series_h(ring: &RingSpec, idx: HarmonicIndex, p: &PointH3, params: &SeriesParams) -> Result<SeriesValue> {
    params.validate()?;
    let rows = enumerate_coset_rows(ring, p, params.omega_bound)?;
    series_h_with_rows(ring, idx, p, params, &rows)
}

/// [`series_h`] over a precomputed coset list.
pub fn series_h_with_rows(
    ring: &RingSpec,
    idx: HarmonicIndex,
    p: &PointH3,
    params: &SeriesParams,
    rows: &[CosetRow],
) -> Result<SeriesValue> {
    check_rows(ring, p, params, rows)?;
    let norm = series_norm(ring, params.convention);
    let sum = sum_slice(rows, |r| {
        let (c, d) = (ring.embed(r.c), ring.embed(r.d));
        let weight = height_power(p.lambda / r.omega, params.s);
        if idx == HarmonicIndex::SCALAR {
            return weight;
        }
        wigner_d(idx, &frame_rotation_cd(c, d, p).transpose()).conj() * weight
    });
    let tail = tail_estimate(ring, params.omega_bound, p.lambda, params.s.re, norm);
    Ok(SeriesValue::new(sum / norm, rows.len(), params.omega_bound, tail))
}

/// `E(P, s) = index·E^0_00(P, s) = Σ (Im σP)^{1+s} / rows_per_coset`.
pub fn classical_e(ring: &RingSpec, p: &PointH3, params: &SeriesParams) -> Result<SeriesValue> {
    params.validate()?;
    let rows = enumerate_coset_rows(ring, p, params.omega_bound)?;
    classical_e_with_rows(ring, p, params, &rows)
}

/// [`classical_e`] over a precomputed coset list.
pub fn classical_e_with_rows(ring: &RingSpec, p: &PointH3, params: &SeriesParams, rows: &[CosetRow]) -> Result<SeriesValue> {
    check_rows(ring, p, params, rows)?;
    let norm = params.convention.rows_per_coset() as f64;
    let sum = sum_slice(rows, |r| height_power(p.lambda / r.omega, params.s));
    let tail = tail_estimate(ring, params.omega_bound, p.lambda, params.s.re, norm);
    Ok(SeriesValue::new(sum / norm, rows.len(), params.omega_bound, tail))
}

/// `α(λ, s) = λ^{1+s} + φ(s)·λ^{1−s}`, the constant term of `E^0_00`.
pub fn constant_term(ring: &RingSpec, lambda: f64, s: Complex64) -> Result<Complex64> {
    let phi = scattering_phi(ring, s)?;
    Ok(rpow(lambda, s + 1.0) + phi * rpow(lambda, 1.0 - s))
}

/// Classical series with `index·α(λ, s)` removed at heights `λ ≥ T`.
pub fn truncated_e(ring: &RingSpec, p: &PointH3, params: &SeriesParams, t: f64) -> Result<SeriesValue> {
    params.validate()?;
    let rows = enumerate_coset_rows(ring, p, params.omega_bound)?;
    truncated_e_with_rows(ring, p, params, t, &rows)
}

/// [`truncated_e`] over a precomputed coset list.
pub fn truncated_e_with_rows(
    ring: &RingSpec,
    p: &PointH3,
    params: &SeriesParams,
    t: f64,
    rows: &[CosetRow],
) -> Result<SeriesValue> {
    let mut v = classical_e_with_rows(ring, p, params, rows)?;
    if p.lambda >= t {
        let index = unipotent_index(ring, params.convention) as f64;
        v.value -= constant_term(ring, p.lambda, params.s)? * index;
        v.tail_warning = v.tail_estimate > TAIL_WARNING_RATIO * v.value.norm();
    }
    Ok(v)
}

/// A Fourier coefficient of `E^l_km(·, s)` along the horosphere at height `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierValue {
    /// `b^l_km(λ, s)_w`.
    pub value: Complex64,
    /// Largest tail estimate over the quadrature nodes.
    pub tail_estimate: f64,
    /// Total coset rows summed.
    pub n_terms: usize,
    /// Nodes per direction of the trapezoid rule.
    pub order: usize,
}

/// Default trapezoid order for [`fourier_coeff`].
pub const DEFAULT_FOURIER_ORDER: usize = 32;

/// Coordinates `(n₁, n₂)` of `w = n₁b₁* + n₂b₂*`, or an error if `w ∉ Λ*`.
pub fn dual_coordinates(ring: &RingSpec, w: Complex64) -> Result<(i64, i64)> {
    let om = ring.omega();
    let n1 = w.re;
    let n2 = w.re * om.re + w.im * om.im;
    let (r1, r2) = (round(n1), round(n2));
    if fabs(n1 - r1) > 1e-9 || fabs(n2 - r2) > 1e-9 {
        return Err(invalid("w is not in the dual lattice Λ*"));
    }
    Ok((r1 as i64, r2 as i64))
}

/// `b_w = (1/|Λ|)∬_{C/Λ} E^l_km(z + λj, s)·e^{−2πi⟨z, w⟩} dx dy`, by the
/// `order × order` periodic trapezoid rule on the parallelogram spanned by
/// `1` and `ω`.
pub fn fourier_coeff(
    ring: &RingSpec,
    idx: HarmonicIndex,
    lambda: f64,
    params: &SeriesParams,
    w: Complex64,
    order: usize,
) -> Result<FourierValue> {
    params.validate()?;
    let (n1, n2) = dual_coordinates(ring, w)?;
    if order == 0 {
        return Err(invalid("quadrature order must be positive"));
    }
    if !(lambda > 0.0) {
        return Err(invalid("λ must be positive"));
    }
    let om = ring.omega();
    let h = 1.0 / order as f64;
    let nodes: Vec<Result<(Complex64, f64, usize)>> = map_range(order * order, |i| {
        let (u, v) = ((i / order) as f64 * h, (i % order) as f64 * h);
        let p = PointH3 { z: Complex64::new(u, 0.0) + om * v, lambda };
        let e = eisenstein_e(ring, idx, &p, params)?;
        let phase = cis(-TAU * (n1 as f64 * u + n2 as f64 * v));
        Ok((e.value * phase, e.tail_estimate, e.n_terms))
    });
    let mut acc = Complex64::new(0.0, 0.0);
    let mut tail: f64 = 0.0;
    let mut n_terms = 0;
    for node in nodes {
        let (v, t, n) = node?;
        acc += v;
        tail = tail.max(t);
        n_terms += n;
    }
    Ok(FourierValue { value: acc * (h * h), tail_estimate: tail, n_terms, order })
}
