//! Float helpers routed through `libm` so results do not depend on the
//! platform's math library.

use num_complex::Complex64;

pub(crate) use libm::{atan2, cos, exp, fabs, log, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn cis(t: f64) -> Complex64 {
    Complex64::new(cos(t), sin(t))
}

/// `cosh x − 1` without cancellation for small `x`.
#[inline]
pub(crate) fn cosh_m1(x: f64) -> f64 {
    let s = libm::sinh(x / 2.0);
    2.0 * s * s
}

/// `x^s` for real `x > 0` and complex `s`.
#[inline]
pub(crate) fn rpow(x: f64, s: Complex64) -> Complex64 {
    let l = log(x);
    let m = exp(s.re * l);
    Complex64::new(m * cos(s.im * l), m * sin(s.im * l))
}

#[inline]
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    let mut r = 1.0;
    let mut b = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r *= b;
        }
        b *= b;
        e >>= 1;
    }
    r
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// `x` reduced to `[0, 2π)`.
#[inline]
pub(crate) fn wrap_tau(x: f64) -> f64 {
    let r = x - TAU * floor(x / TAU);
    if r >= TAU || r < 0.0 {
        0.0
    } else {
        r
    }
}
