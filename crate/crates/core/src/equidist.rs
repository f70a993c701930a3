//! Test functions on the unit tangent bundle `T₁(M_D)`, horosphere measures
//! `ν(λ)`, the Liouville measure, Mellin transforms and fiber Laplace
//! coefficients.
//!
//! A unit tangent vector at `P = z + λj` is written `v = λ·u` with `u ∈ S²`
//! Euclidean; [`tangent_vector`] gives the spherical parametrisation.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bianchi_cosets::{complete_row, enumerate_coset_rows, is_sign_canonical};
use crate::error::{invalid, Error, Result};
use crate::harmonics::{direction, spherical_angles, ylm};
use crate::hyperbolic3::{hyperbolic_distance, Mat2, PointH3};
use crate::number_field::RingSpec;
use crate::quadrature::{adaptive, Rule};
use crate::real::{atan2, cosh_m1, exp, fabs, log, rpow, sqrt, PI, TAU};
use crate::reduce::map_range;
use crate::rotations::{frame_rotation, frame_rotation_cd, So3};
use crate::zeta::orbifold_volume;

/// `v(ϑ, φ)_P = λ·(cos φ sin ϑ, sin φ sin ϑ, cos ϑ)`.
pub fn tangent_vector(p: &PointH3, theta: f64, phi: f64) -> [f64; 3] {
    let u = direction(theta, phi);
    [p.lambda * u[0], p.lambda * u[1], p.lambda * u[2]]
}

/// `ψ(t) = exp(1 − 1/(1 − t²))` on `|t| < 1`, zero elsewhere; `ψ(0) = 1`.
pub fn bump_profile(t: f64) -> f64 {
    let q = 1.0 - t * t;
    if q <= 0.0 {
        0.0
    } else {
        exp(1.0 - 1.0 / q)
    }
}

/// Angle between unit vectors, accurate near `0` and `π`.
pub fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    atan2(sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]), dot)
}

/// Γ-periodised smooth bump `f = Σ_{γ ∈ PSL(2, O_D)} F∘γ` with seed
/// `F(P, u) = A·ψ(d(P, P₀)/r_s)·ψ(∠(u, u₀)/r_d)`.
///
/// `P₀ = g₀·j` and `u₀` is the first vector of the frame `g₀` carries to `P₀`.
/// For each probed point the sum is exact: only `γ` with
/// `Im γP ∈ (h₀e^{−r_s}, h₀e^{r_s})` and `γP` inside the horizontal disk of the
/// ball around `P₀` can contribute, and all of them are enumerated.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareBump {
    ring: RingSpec,
    center: Mat2,
    p0: PointH3,
    u0: [f64; 3],
    spatial_radius: f64,
    directional_radius: f64,
    amplitude: Complex64,
    max_rows: usize,
}

/// Default cap on coset rows examined per probed point.
pub const DEFAULT_MAX_ROWS: usize = 1 << 20;

impl PoincareBump {
    /// Validates `r_s > 0` and `0 < r_d ≤ π`.
    pub fn new(
        ring: RingSpec,
        center: Mat2,
        spatial_radius: f64,
        directional_radius: f64,
        amplitude: Complex64,
    ) -> Result<Self> {
        if !(spatial_radius > 0.0 && spatial_radius.is_finite()) {
            return Err(invalid("spatial radius must be positive"));
        }
        if !(directional_radius > 0.0 && directional_radius <= PI) {
            return Err(invalid("directional radius must lie in (0, π]"));
        }
        if (center.det() - 1.0).norm() > 1e-12 {
            return Err(invalid("bump center must lie in SL(2, C)"));
        }
        let p0 = center.act(&PointH3::J);
        let u0 = frame_rotation(&center, &PointH3::J).apply([1.0, 0.0, 0.0]);
        Ok(PoincareBump {
            ring,
            center,
            p0,
            u0,
            spatial_radius,
            directional_radius,
            amplitude,
            max_rows: DEFAULT_MAX_ROWS,
        })
    }

    /// Replaces the per-point row cap that backs the certificate.
    pub fn with_max_rows(mut self, max_rows: usize) -> Self {
        self.max_rows = max_rows;
        self
    }

    /// Same bump with amplitude `a`.
    pub fn with_amplitude(mut self, a: Complex64) -> Self {
        self.amplitude = a;
        self
    }

    /// The ring.
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// `g₀`.
    pub fn center(&self) -> &Mat2 {
        &self.center
    }

    /// `P₀ = g₀·j`.
    pub fn center_point(&self) -> PointH3 {
        self.p0
    }

    /// `u₀`.
    pub fn center_direction(&self) -> [f64; 3] {
        self.u0
    }

    /// `r_s`.
    pub fn spatial_radius(&self) -> f64 {
        self.spatial_radius
    }

    /// `r_d`.
    pub fn directional_radius(&self) -> f64 {
        self.directional_radius
    }

    /// `A`.
    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    /// `ψ(d(P, P₀)/r_s)`.
    pub fn spatial_factor(&self, p: &PointH3) -> f64 {
        bump_profile(hyperbolic_distance(p, &self.p0) / self.spatial_radius)
    }

    /// `ψ(∠(u, u₀)/r_d)`.
    pub fn directional_factor(&self, u: [f64; 3]) -> f64 {
        bump_profile(angle_between(u, self.u0) / self.directional_radius)
    }

    /// The seed `F(P, u)`.
    pub fn seed(&self, p: &PointH3, u: [f64; 3]) -> Complex64 {
        self.amplitude * (self.spatial_factor(p) * self.directional_factor(u))
    }

    /// Every `γ ∈ PSL(2, O_D)` with `γP` in the support of the seed, as
    /// `(γ, γP, R(dγ, P))`, together with the certificate of the search.
    pub fn translates(&self, p: &PointH3) -> Result<(Vec<(Mat2, PointH3, So3)>, Certificate)> {
        let r = self.spatial_radius;
        let h0 = self.p0.lambda;
        let (h_lo, h_hi) = (h0 * exp(-r), h0 * exp(r));
        let (om_lo, om_hi) = (p.lambda / h_hi, p.lambda / h_lo);
        let rows = enumerate_coset_rows(&self.ring, p, om_hi)?;
        if rows.len() > self.max_rows {
            return Err(Error::Certificate(alloc::format!(
                "{} coset rows needed at height {} exceed the cap {}",
                rows.len(),
                p.lambda,
                self.max_rows
            )));
        }
        let cm1 = cosh_m1(r);
        let mut out = Vec::new();
        for row in rows.iter().filter(|w| w.omega >= om_lo && is_sign_canonical(w.c, w.d)) {
            let sigma = complete_row(&self.ring, row.c, row.d)?.to_complex(&self.ring);
            let q = sigma.act(p);
            // cosh d < cosh r  ⇔  |Δz|² < 2·h·h₀·(cosh r − 1) − (h − h₀)².
            let rho2 = 2.0 * q.lambda * h0 * cm1 - (q.lambda - h0) * (q.lambda - h0);
            if rho2 <= 0.0 {
                continue;
            }
            let rot = frame_rotation_cd(sigma.c, sigma.d, p);
            for t in self.ring.points_in_disk(self.p0.z - q.z, sqrt(rho2)) {
                let tz = self.ring.embed(t);
                let gamma = Mat2::n(tz).mul(&sigma);
                out.push((gamma, PointH3 { z: q.z + tz, lambda: q.lambda }, rot));
            }
        }
        let cert = Certificate {
            omega_window: (om_lo, om_hi),
            rows_examined: rows.len(),
            translates: out.len(),
        };
        Ok((out, cert))
    }
}

/// Record of an exact Poincaré-sum evaluation: the `Ω` window implied by the
/// seed's height range and how much work it took.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Certificate {
    /// Rows with `Ω` outside this window cannot reach the support.
    pub omega_window: (f64, f64),
    /// Coset rows enumerated.
    pub rows_examined: usize,
    /// Translates meeting the support.
    pub translates: usize,
}

impl Certificate {
    fn merge(&mut self, o: &Certificate) {
        // The window depends on the height only, so it is shared by all nodes.
        self.omega_window = o.omega_window;
        self.rows_examined = self.rows_examined.max(o.rows_examined);
        self.translates = self.translates.max(o.translates);
    }
}

/// Smooth fiber profile `f(P, v(ϑ, φ)) = A·ρ(λ)·Y^l_m(ϑ, φ)`; invariant under
/// `Γ'_∞` only, so it is accepted by [`nu_lambda`], [`mellin`] and
/// [`laplace_coeffs`] but not by [`liouville`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspProfile {
    /// Height profile.
    pub profile: HeightProfile,
    /// Degree.
    pub l: u32,
    /// Order.
    pub m: i32,
    /// Amplitude `A`.
    pub amplitude: Complex64,
}

/// Height profile of a [`CuspProfile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeightProfile {
    /// `ρ ≡ 1`.
    Flat,
    /// `ψ((2λ − a − b)/(b − a))`, supported on `[a, b]`.
    Bump {
        /// Lower end.
        lo: f64,
        /// Upper end.
        hi: f64,
    },
}

impl HeightProfile {
    /// `ρ(λ)`.
    pub fn eval(&self, lambda: f64) -> f64 {
        match *self {
            HeightProfile::Flat => 1.0,
            HeightProfile::Bump { lo, hi } => bump_profile((2.0 * lambda - lo - hi) / (hi - lo)),
        }
    }
}

impl CuspProfile {
    /// Validates `|m| ≤ l` and the profile's interval.
    pub fn new(profile: HeightProfile, l: u32, m: i32, amplitude: Complex64) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(invalid("cusp profile needs |m| ≤ l"));
        }
        if let HeightProfile::Bump { lo, hi } = profile {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(invalid("cusp profile support must satisfy 0 < lo < hi"));
            }
        }
        Ok(CuspProfile { profile, l, m, amplitude })
    }
}

/// Admissible test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// Compactly supported Γ-invariant bump.
    PoincareBump(PoincareBump),
    /// Γ'_∞-invariant fiber profile.
    CuspProfile(CuspProfile),
    /// The constant function.
    Constant(Complex64),
}

/// A test function restricted to the fiber over one point.
#[derive(Debug, Clone, PartialEq)]
pub enum Fiber {
    /// `A·Σ_γ w_γ·ψ(∠(u, R_γᵀu₀)/r_d)` with `w_γ` the spatial factor at `γP`.
    Sum {
        /// `A`.
        amplitude: Complex64,
        /// `r_d`.
        directional_radius: f64,
        /// `(w_γ, R(dγ, P)ᵀ·u₀)`.
        terms: Vec<(f64, [f64; 3])>,
    },
    /// `c·Y^l_m(u)`.
    Harmonic {
        /// `A·ρ(λ)`.
        coefficient: Complex64,
        /// Degree.
        l: u32,
        /// Order.
        m: i32,
    },
    /// A constant.
    Constant(Complex64),
}

impl Fiber {
    /// `f(P, u)`.
    pub fn eval(&self, u: [f64; 3]) -> Complex64 {
        match self {
            Fiber::Sum { amplitude, directional_radius, terms } => {
                let mut acc = 0.0;
                for &(w, v) in terms {
                    acc += w * bump_profile(angle_between(u, v) / directional_radius);
                }
                *amplitude * acc
            }
            Fiber::Harmonic { coefficient, l, m } => {
                let (th, ph) = spherical_angles(u);
                *coefficient * ylm(*l, *m, th, ph).unwrap_or_default()
            }
            Fiber::Constant(k) => *k,
        }
    }
}

impl TestFunction {
    /// Restriction to the fiber over `p`, with the certificate for Poincaré sums.
    pub fn fiber(&self, p: &PointH3) -> Result<(Fiber, Certificate)> {
        match self {
            TestFunction::PoincareBump(b) => {
                let (tr, cert) = b.translates(p)?;
                let u0 = b.u0;
                let terms = tr
                    .iter()
                    .map(|(_, q, rot)| (b.spatial_factor(q), rot.transpose().apply(u0)))
                    .filter(|(w, _)| *w != 0.0)
                    .collect();
                Ok((
                    Fiber::Sum { amplitude: b.amplitude, directional_radius: b.directional_radius, terms },
                    cert,
                ))
            }
            TestFunction::CuspProfile(c) => Ok((
                Fiber::Harmonic { coefficient: c.amplitude * c.profile.eval(p.lambda), l: c.l, m: c.m },
                Certificate::default(),
            )),
            TestFunction::Constant(k) => Ok((Fiber::Constant(*k), Certificate::default())),
        }
    }

    /// `f(P, u)`.
    pub fn eval(&self, p: &PointH3, u: [f64; 3]) -> Result<Complex64> {
        Ok(self.fiber(p)?.0.eval(u))
    }

    /// Complex conjugate test function.
    pub fn conj(&self) -> TestFunction {
        match self {
            TestFunction::PoincareBump(b) => TestFunction::PoincareBump(b.clone().with_amplitude(b.amplitude.conj())),
            TestFunction::CuspProfile(c) => {
                // conj(Y^l_m) = (−1)^m Y^l_{−m}.
                let sign = if c.m % 2 == 0 { 1.0 } else { -1.0 };
                TestFunction::CuspProfile(CuspProfile { m: -c.m, amplitude: c.amplitude.conj() * sign, ..*c })
            }
            TestFunction::Constant(k) => TestFunction::Constant(k.conj()),
        }
    }

    /// `k·f`.
    pub fn scale(&self, k: Complex64) -> TestFunction {
        match self {
            TestFunction::PoincareBump(b) => TestFunction::PoincareBump(b.clone().with_amplitude(b.amplitude * k)),
            TestFunction::CuspProfile(c) => TestFunction::CuspProfile(CuspProfile { amplitude: c.amplitude * k, ..*c }),
            TestFunction::Constant(v) => TestFunction::Constant(v * k),
        }
    }
}

/// `ν(λ)(f)` with its quadrature data.
#[derive(Debug, Clone, PartialEq)]
pub struct NuValue {
    /// `(1/|Λ|)∬_{C/Λ} f(z + λj, e₁) dx dy`.
    pub value: Complex64,
    /// Trapezoid nodes per direction.
    pub order: usize,
    /// Worst-case certificate over the nodes.
    pub certificate: Certificate,
}

/// `e₁ ↔ (ϑ, φ) = (π/2, 0)`.
pub const E1: [f64; 3] = [1.0, 0.0, 0.0];

/// `ν(λ)(f)` by the periodic `order × order` trapezoid rule on the
/// parallelogram spanned by `1` and `ω`.
pub fn nu_lambda(ring: &RingSpec, f: &TestFunction, lambda: f64, order: usize) -> Result<NuValue> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("λ must be positive"));
    }
    if order == 0 {
        return Err(invalid("quadrature order must be positive"));
    }
    if let TestFunction::PoincareBump(b) = f {
        if b.ring.d() != ring.d() {
            return Err(invalid("test function and ring disagree on D"));
        }
    }
    let om = ring.omega();
    let h = 1.0 / order as f64;
    let vals = map_range(order * order, |i| {
        let (u, v) = ((i / order) as f64 * h, (i % order) as f64 * h);
        let p = PointH3 { z: Complex64::new(u, 0.0) + om * v, lambda };
        let (fib, cert) = f.fiber(&p)?;
        Ok::<_, Error>((fib.eval(E1), cert))
    });
    let mut acc = Complex64::new(0.0, 0.0);
    let mut cert = Certificate::default();
    for v in vals {
        let (x, c) = v?;
        acc += x;
        cert.merge(&c);
    }
    Ok(NuValue { value: acc / (order * order) as f64, order, certificate: cert })
}

/// Quadrature orders for [`liouville`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiouvilleOrders {
    /// Gauss–Legendre nodes in each of `x`, `y`, `λ`.
    pub spatial: usize,
    /// Gauss–Legendre nodes in `ϑ`; the trapezoid in `φ` uses twice as many.
    pub directional: usize,
}

impl Default for LiouvilleOrders {
    fn default() -> Self {
        LiouvilleOrders { spatial: 96, directional: 64 }
    }
}

/// `ν(f) = (1/(4π·Vol))∫ F(x + iy + λj, v(ϑ, φ)) sin ϑ dx dy dλ dϑ dφ / λ³`, the
/// seed integrated over `T₁(H³)` by tensor quadrature on a box containing its
/// support. `Vol` is the volume of `H³/PSL(2, O_D)`.
pub fn liouville(f: &TestFunction, orders: LiouvilleOrders) -> Result<Complex64> {
    match f {
        TestFunction::PoincareBump(b) => {
            let vol = orbifold_volume(&b.ring);
            Ok(seed_integral(b, orders) / (4.0 * PI * vol))
        }
        TestFunction::Constant(k) => Ok(*k),
        TestFunction::CuspProfile(_) => {
            Err(invalid("cusp profiles are not Γ-invariant; the Liouville measure is undefined for them"))
        }
    }
}

/// `∫_{T₁(H³)} F` for the seed of `b`.
///
/// The seed is a product of a spatial and a directional factor, so the
/// five-dimensional tensor sum is evaluated as the product of its spatial and
/// directional partial sums.
pub fn seed_integral(b: &PoincareBump, orders: LiouvilleOrders) -> Complex64 {
    b.amplitude * (seed_spatial_integral(b, orders.spatial) * seed_directional_integral(b, orders.directional))
}

/// `∫_{H³} ψ(d(P, P₀)/r_s) dx dy dλ / λ³` on the box
/// `|x − x₀|, |y − y₀| ≤ h₀ sinh r_s`, `λ ∈ [h₀e^{−r_s}, h₀e^{r_s}]`.
pub fn seed_spatial_integral(b: &PoincareBump, n: usize) -> f64 {
    let (z0, h0, r) = (b.p0.z, b.p0.lambda, b.spatial_radius);
    let half = h0 * libm::sinh(r);
    let rx = Rule::gauss_legendre(n, z0.re - half, z0.re + half);
    let ry = Rule::gauss_legendre(n, z0.im - half, z0.im + half);
    // Integrate in log λ so that the 1/λ³ weight becomes e^{−2t}.
    let rl = Rule::gauss_legendre(n, log(h0) - r, log(h0) + r);
    let slabs = map_range(rl.len(), |k| {
        let lam = exp(rl.nodes[k]);
        let mut acc = 0.0;
        for (x, wx) in rx.nodes.iter().zip(&rx.weights) {
            for (y, wy) in ry.nodes.iter().zip(&ry.weights) {
                let p = PointH3 { z: Complex64::new(*x, *y), lambda: lam };
                acc += wx * wy * b.spatial_factor(&p);
            }
        }
        rl.weights[k] * acc / (lam * lam)
    });
    slabs.into_iter().sum()
}

/// `∫_{S²} ψ(∠(u, u₀)/r_d) dΩ` by Gauss–Legendre in the polar angle about
/// `u₀` over `[0, r_d]` and trapezoid in the azimuth about `u₀`.
pub fn seed_directional_integral(b: &PoincareBump, n: usize) -> f64 {
    let u0 = b.u0;
    // Orthonormal frame (e1, e2, u0).
    let seed = if fabs(u0[0]) < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = seed[0] * u0[0] + seed[1] * u0[1] + seed[2] * u0[2];
    let mut e1 = [seed[0] - dot * u0[0], seed[1] - dot * u0[1], seed[2] - dot * u0[2]];
    let len = sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    e1 = [e1[0] / len, e1[1] / len, e1[2] / len];
    let e2 = [u0[1] * e1[2] - u0[2] * e1[1], u0[2] * e1[0] - u0[0] * e1[2], u0[0] * e1[1] - u0[1] * e1[0]];
    let rt = Rule::gauss_legendre(n, 0.0, b.directional_radius);
    let rp = Rule::periodic(2 * n, 0.0, TAU);
    let mut acc = 0.0;
    for (t, wt) in rt.nodes.iter().zip(&rt.weights) {
        let (st, ct) = (libm::sin(*t), libm::cos(*t));
        for (p, wp) in rp.nodes.iter().zip(&rp.weights) {
            let (sp, cp) = (libm::sin(*p), libm::cos(*p));
            let u: [f64; 3] = core::array::from_fn(|i| st * (cp * e1[i] + sp * e2[i]) + ct * u0[i]);
            acc += wt * wp * st * b.directional_factor(u);
        }
    }
    acc
}

/// Result of [`mellin`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    /// `M(f, s) = ∫ ν(λ)(f)·λ^{s−2} dλ`.
    pub value: Complex64,
    /// Adaptive quadrature error estimate.
    pub error: f64,
    /// `‖f‖_∞·C^{Re s − 1}/(Re s − 1)` with `C` the top of the λ-support.
    pub bound: f64,
}

/// Mellin transform of `λ ↦ ν(λ)(f)` over its compact λ-support.
///
/// Only profiles supported in some `[a, b] ⊂ (0, ∞)` are accepted.
pub fn mellin(ring: &RingSpec, f: &TestFunction, s: Complex64, tol: f64) -> Result<MellinValue> {
    if !(s.re > 1.0) {
        return Err(invalid("the Mellin transform is taken for Re s > 1"));
    }
    let (c, lo, hi, sup) = match f {
        TestFunction::CuspProfile(CuspProfile { profile: HeightProfile::Bump { lo, hi }, l, amplitude, .. }) => {
            (*hi, *lo, *hi, amplitude.norm() * sqrt((2 * l + 1) as f64 / (4.0 * PI)))
        }
        _ => return Err(invalid("Mellin transform needs a λ-support bounded away from 0 and ∞")),
    };
    let nu = |lam: f64| nu_lambda(ring, f, lam, 1).map(|v| v.value);
    let mut first_err = None;
    let mut re = |lam: f64| match nu(lam) {
        Ok(v) => (v * rpow(lam, s - 2.0)).re,
        Err(e) => {
            first_err.get_or_insert(e);
            0.0
        }
    };
    let a_re = adaptive(&mut re, lo, hi, tol, 40);
    let mut im = |lam: f64| nu(lam).map(|v| (v * rpow(lam, s - 2.0)).im).unwrap_or(0.0);
    let a_im = adaptive(&mut im, lo, hi, tol, 40);
    if let Some(e) = first_err {
        return Err(e);
    }
    let bound = sup * libm::pow(c, s.re - 1.0) / (s.re - 1.0);
    Ok(MellinValue { value: Complex64::new(a_re.value, a_im.value), error: a_re.error + a_im.error, bound })
}

/// `f̂^l_m(P) = ∫_{S²} f(P, v(ϑ, φ))·conj(Y^l_m(ϑ, φ)) sin ϑ dϑ dφ` for
/// `l ≤ l_max`, stored at `l² + l + m`.
pub fn laplace_coeffs(f: &TestFunction, p: &PointH3, l_max: u32, order: usize) -> Result<Vec<Complex64>> {
    if order == 0 {
        return Err(invalid("quadrature order must be positive"));
    }
    let (fib, _) = f.fiber(p)?;
    let rt = Rule::gauss_legendre(order, 0.0, PI);
    let rp = Rule::periodic(2 * order, 0.0, TAU);
    let n = ((l_max + 1) * (l_max + 1)) as usize;
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
    for (t, wt) in rt.nodes.iter().zip(&rt.weights) {
        let st = libm::sin(*t);
        for (ph, wp) in rp.nodes.iter().zip(&rp.weights) {
            let v = fib.eval(direction(*t, *ph));
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = wt * wp * st;
            for l in 0..=l_max {
                for m in -(l as i32)..=l as i32 {
                    let y = ylm(l, m, *t, *ph)?;
                    out[((l * l + l) as i32 + m) as usize] += v * y.conj() * w;
                }
            }
        }
    }
    Ok(out)
}

/// Heights probed by an equidistribution experiment.
pub const DEFAULT_GRID: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];

/// Settings of [`equidistribution_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Heights `λ`.
    pub grid: Vec<f64>,
    /// Trapezoid order at `λ = 1`; at height `λ` the order is `⌈order/λ⌉`.
    pub order: usize,
    /// Orders for [`liouville`].
    pub liouville: LiouvilleOrders,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { grid: DEFAULT_GRID.to_vec(), order: 48, liouville: LiouvilleOrders::default() }
    }
}

/// Output of [`equidistribution_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    /// Heights.
    pub lambdas: Vec<f64>,
    /// `ν(λ)(f)`.
    pub values: Vec<Complex64>,
    /// Trapezoid order used at each height.
    pub orders: Vec<usize>,
    /// `|ν(λ)(f) − ν_{order/2}(λ)(f)|`, the quadrature error estimate.
    pub quadrature_errors: Vec<f64>,
    /// Certificates of the Poincaré sums.
    pub certificates: Vec<Certificate>,
    /// `ν(f)`.
    pub reference: Complex64,
    /// Change of `ν(f)` between the configured and three-quarter orders.
    pub reference_error: f64,
    /// `ν(λ)(f) − ν(f)`.
    pub deltas: Vec<Complex64>,
    /// Test-function evaluations spent at each height, both orders included.
    pub evaluations: Vec<usize>,
    /// Least-squares slope of `log |delta|` against `log λ` over the points
    /// with `|delta|` at least ten times their quadrature tolerance.
    pub slope: Option<f64>,
    /// Points used in the fit.
    pub fitted_points: usize,
    /// Free-form notes.
    pub notes: Vec<String>,
}

/// Tabulates `ν(λ)(f)` over the grid and compares it with `ν(f)`.
pub fn equidistribution_experiment(ring: &RingSpec, f: &TestFunction, cfg: &ExperimentConfig) -> Result<MeasureReport> {
    if cfg.grid.is_empty() || cfg.grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(invalid("grid must be a non-empty list of positive heights"));
    }
    if cfg.order < 2 {
        return Err(invalid("quadrature order must be at least 2"));
    }
    let reference = liouville(f, cfg.liouville)?;
    let coarse = LiouvilleOrders {
        spatial: (cfg.liouville.spatial * 3 / 4).max(1),
        directional: (cfg.liouville.directional * 3 / 4).max(1),
    };
    let reference_error = (liouville(f, coarse)? - reference).norm();
    let mut rep = MeasureReport {
        lambdas: cfg.grid.clone(),
        values: Vec::new(),
        orders: Vec::new(),
        quadrature_errors: Vec::new(),
        certificates: Vec::new(),
        reference,
        reference_error,
        deltas: Vec::new(),
        evaluations: Vec::new(),
        slope: None,
        fitted_points: 0,
        notes: Vec::new(),
    };
    for &lam in &cfg.grid {
        let order = libm::ceil(cfg.order as f64 / lam.min(1.0)) as usize;
        let fine = nu_lambda(ring, f, lam, order)?;
        let half = nu_lambda(ring, f, lam, order.div_ceil(2))?;
        rep.values.push(fine.value);
        rep.orders.push(order);
        rep.quadrature_errors.push((fine.value - half.value).norm());
        rep.certificates.push(fine.certificate);
        rep.deltas.push(fine.value - reference);
        rep.evaluations.push(order * order + half.order * half.order);
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..rep.lambdas.len() {
        let tol = rep.quadrature_errors[i] + rep.reference_error;
        let d = rep.deltas[i].norm();
        if d > 0.0 && d >= 10.0 * tol {
            xs.push(log(rep.lambdas[i]));
            ys.push(log(d));
        } else {
            rep.notes.push(alloc::format!("λ = {} dropped from the fit: |delta| below 10× quadrature tolerance", rep.lambdas[i]));
        }
    }
    rep.fitted_points = xs.len();
    rep.slope = ols_slope(&xs, &ys);
    Ok(rep)
}

/// Ordinary least-squares slope; `None` with fewer than two distinct abscissae.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if fabs(sxx) == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}
