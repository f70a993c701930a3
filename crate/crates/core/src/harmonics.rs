//! Spherical harmonics, Euler angles and Wigner matrices.
//!
//! Rotations are parametrised as `ROT(θ, χ, φ) = Rz'(θ)·M(χ)·Rz'(φ)` with
//!
//! ```text
//! Rz'(θ) = [[cos θ, sin θ, 0], [−sin θ, cos θ, 0], [0, 0, 1]]
//! M(χ)   = [[cos χ, 0, −sin χ], [0, 1, 0], [sin χ, 0, cos χ]]
//! ```
//!
//! so `Rz'(θ)` turns by `−θ` about the z axis and `M(χ)` turns by `−χ` about
//! the y axis. With this choice `D^l_km(ROT(θ, χ, φ)) = e^{ikθ}·d^l_km(χ)·e^{imφ}`
//! satisfies `Y^l_m(R⁻¹p) = Σ_k D^l_km(R)·Y^l_k(p)` provided `d^l_km(χ)` is the
//! textbook small-d evaluated at `−χ`; see [`small_d`].

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::real::{atan2, cis, cos, powi, sin, sqrt, wrap_tau, PI};
use crate::rotations::So3;

/// Degree and orders `(l, k, m)` with `|k|, |m| ≤ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    l: u32,
    k: i32,
    m: i32,
}

impl HarmonicIndex {
    /// Validates `|k|, |m| ≤ l`.
    pub fn new(l: u32, k: i32, m: i32) -> Result<Self> {
        let li = l as i32;
        if k.abs() > li || m.abs() > li {
            return Err(invalid("harmonic index needs |k|, |m| ≤ l"));
        }
        Ok(HarmonicIndex { l, k, m })
    }

    /// `(0, 0, 0)`.
    pub const SCALAR: HarmonicIndex = HarmonicIndex { l: 0, k: 0, m: 0 };

    /// Degree.
    pub fn l(&self) -> u32 {
        self.l
    }

    /// Row order.
    pub fn k(&self) -> i32 {
        self.k
    }

    /// Column order.
    pub fn m(&self) -> i32 {
        self.m
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Orthonormal spherical harmonic with the Condon–Shortley phase.
pub fn ylm(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() > l {
        return Err(invalid("spherical harmonic needs |m| ≤ l"));
    }
    let ma = m.unsigned_abs();
    let norm = sqrt((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - ma) / factorial(l + ma));
    let y = cis(ma as f64 * phi) * (norm * legendre_cs(l, ma, cos(theta)));
    Ok(if m < 0 {
        let s = if ma % 2 == 0 { 1.0 } else { -1.0 };
        y.conj() * s
    } else {
        y
    })
}

/// Associated Legendre `P_l^m(x)`, `m ≥ 0`, including `(−1)^m`.
fn legendre_cs(l: u32, m: u32, x: f64) -> f64 {
    let s = sqrt(((1.0 - x) * (1.0 + x)).max(0.0));
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * s;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in m + 2..=l {
        let p = (x * (2 * ll - 1) as f64 * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = p;
    }
    pm1
}

/// Angles with `θ ∈ [0, 2π)`, `χ ∈ [0, π]`, `φ ∈ [−2π, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    /// First angle.
    pub theta: f64,
    /// Middle angle.
    pub chi: f64,
    /// Last angle.
    pub phi: f64,
}

/// `ROT(θ, χ, φ)`.
pub fn rot(a: &EulerAngles) -> So3 {
    let rz = |t: f64| So3([[cos(t), sin(t), 0.0], [-sin(t), cos(t), 0.0], [0.0, 0.0, 1.0]]);
    let (c, s) = (cos(a.chi), sin(a.chi));
    let m = So3([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]]);
    rz(a.theta) * m * rz(a.phi)
}

/// Inverse of [`rot`].
///
/// `θ ± φ` are read from the combinations of the upper-left block that stay
/// well conditioned near `χ = 0` and `χ = π`. When `χ` is exactly `0` or `π`
/// the free angle is put in `θ` and `φ = 0`.
pub fn euler_extract(r: &So3) -> EulerAngles {
    let m = &r.0;
    let chi = atan2(libm::hypot(m[2][0], m[2][1]), m[2][2]);
    let (sx, sy) = (m[0][0] + m[1][1], m[0][1] - m[1][0]);
    let (dx, dy) = (m[1][1] - m[0][0], m[0][1] + m[1][0]);
    let (theta, phi) = if dx == 0.0 && dy == 0.0 {
        (atan2(sy, sx), 0.0)
    } else if sx == 0.0 && sy == 0.0 {
        (atan2(dy, dx), 0.0)
    } else {
        let sum = atan2(sy, sx);
        let diff = atan2(dy, dx);
        let (mut t, mut p) = ((sum + diff) / 2.0, (sum - diff) / 2.0);
        // (θ + π, φ + π) has the same sum and difference; keep the branch
        // whose last row matches (sin χ cos φ, sin χ sin φ).
        if m[2][0] * cos(p) + m[2][1] * sin(p) < 0.0 {
            t += PI;
            p += PI;
        }
        (t, p)
    };
    EulerAngles { theta: wrap_tau(theta), chi, phi }
}

/// `d^l_km(χ)` in the convention of [`rot`]: the textbook Wigner small-d
/// `d^l_km(β)` evaluated at `β = −χ`, equal to `(−1)^{k−m}·d^l_km(χ)`.
pub fn small_d(l: u32, k: i32, m: i32, chi: f64) -> f64 {
    let j = l as i32;
    if k.abs() > j || m.abs() > j {
        return 0.0;
    }
    let beta = -chi;
    let (c, s) = (cos(beta / 2.0), sin(beta / 2.0));
    let pre = sqrt(
        factorial((j + k) as u32)
            * factorial((j - k) as u32)
            * factorial((j + m) as u32)
            * factorial((j - m) as u32),
    );
    let lo = 0.max(m - k);
    let hi = (j + m).min(j - k);
    let mut acc = 0.0;
    for t in lo..=hi {
        let sign = if (t - m + k) % 2 == 0 { 1.0 } else { -1.0 };
        let den = factorial((j + m - t) as u32)
            * factorial(t as u32)
            * factorial((j - k - t) as u32)
            * factorial((t - m + k) as u32);
        acc += sign * powi(c, 2 * j - 2 * t + m - k) * powi(s, 2 * t - m + k) / den;
    }
    pre * acc
}

/// `D^l_km(R) = e^{ikθ}·d^l_km(χ)·e^{imφ}` with `(θ, χ, φ) = euler_extract(R)`.
pub fn wigner_d(idx: HarmonicIndex, r: &So3) -> Complex64 {
    wigner_d_from_angles(idx, &euler_extract(r))
}

/// [`wigner_d`] at known angles.
pub fn wigner_d_from_angles(idx: HarmonicIndex, a: &EulerAngles) -> Complex64 {
    let (k, m) = (idx.k as f64, idx.m as f64);
    cis(k * a.theta + m * a.phi) * small_d(idx.l, idx.k, idx.m, a.chi)
}

/// Full `(2l+1)×(2l+1)` matrix, row `k + l`, column `m + l`, row-major.
pub fn wigner_matrix(l: u32, r: &So3) -> Vec<Complex64> {
    let a = euler_extract(r);
    let j = l as i32;
    let mut out = Vec::with_capacity(((2 * j + 1) * (2 * j + 1)) as usize);
    for k in -j..=j {
        for m in -j..=j {
            out.push(wigner_d_from_angles(HarmonicIndex { l, k, m }, &a));
        }
    }
    out
}

/// Unit vector `(cos φ sin ϑ, sin φ sin ϑ, cos ϑ)`.
pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [cos(phi) * sin(theta), sin(phi) * sin(theta), cos(theta)]
}

/// `(ϑ, φ)` of a unit vector, `ϑ ∈ [0, π]`, `φ ∈ (−π, π]`.
pub fn spherical_angles(u: [f64; 3]) -> (f64, f64) {
    (atan2(libm::hypot(u[0], u[1]), u[2]), atan2(u[1], u[0]))
}
