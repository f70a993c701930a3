//! `SU(2)`, `SO(3)`, the spin cover between them, and the rotation that a
//! Möbius map induces on orthonormal frames of `H³`.

use core::ops::Mul;

use num_complex::Complex64;

use crate::hyperbolic3::{omega_factor, Mat2, PointH3};
use crate::real::sqrt;

/// `((α, β), (−β̄, ᾱ))` with `|α|² + |β|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    /// Entry (1,1).
    pub alpha: Complex64,
    /// Entry (1,2).
    pub beta: Complex64,
}

impl Su2 {
    /// Compact Iwasawa part of any matrix with bottom row `(c, d) ≠ 0`:
    /// `((d̄, −c̄), (c, d)) / √(|c|² + |d|²)`.
    pub fn from_bottom_row(c: Complex64, d: Complex64) -> Su2 {
        let s = sqrt(c.norm_sqr() + d.norm_sqr());
        Su2 { alpha: d.conj() / s, beta: -c.conj() / s }
    }

    /// The identity.
    pub const IDENTITY: Su2 =
        Su2 { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) };

    /// As a 2×2 matrix.
    pub fn to_mat2(&self) -> Mat2 {
        Mat2 { a: self.alpha, b: self.beta, c: -self.beta.conj(), d: self.alpha.conj() }
    }

    /// Inverse, equal to the conjugate transpose.
    pub fn inverse(&self) -> Su2 {
        Su2 { alpha: self.alpha.conj(), beta: -self.beta }
    }

    /// Product `self·o`.
    pub fn mul(&self, o: &Su2) -> Su2 {
        Su2 {
            alpha: self.alpha * o.alpha - self.beta * o.beta.conj(),
            beta: self.alpha * o.beta + self.beta * o.alpha.conj(),
        }
    }
}

/// A 3×3 real matrix, used for elements of `SO(3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3(pub [[f64; 3]; 3]);

impl So3 {
    /// The identity.
    pub const IDENTITY: So3 = So3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// `B = diag(1, 1, −1)`.
    pub const B: So3 = So3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);

    /// Transpose, which is the inverse for rotations.
    pub fn transpose(&self) -> So3 {
        So3(core::array::from_fn(|i| core::array::from_fn(|j| self.0[j][i])))
    }

    /// `self·v`.
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        core::array::from_fn(|i| self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2])
    }

    /// Determinant.
    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `max |RᵀR − I|` entrywise.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = self.transpose() * *self;
        let mut e: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let t = if i == j { 1.0 } else { 0.0 };
                e = e.max((p.0[i][j] - t).abs());
            }
        }
        e
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, o: &So3) -> f64 {
        let mut e: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                e = e.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        e
    }
}

impl Mul for So3 {
    type Output = So3;
    fn mul(self, o: So3) -> So3 {
        So3(core::array::from_fn(|i| {
            core::array::from_fn(|j| (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum())
        }))
    }
}

/// The two-to-one homomorphism `Φ: SU(2) → SO(3)`.
pub fn spin_cover(u: &Su2) -> So3 {
    let (a, b) = (u.alpha, u.beta);
    let a2 = a * a;
    let b2 = b * b;
    let ab = a * b;
    let abar_b = a.conj() * b;
    let a_bbar = a * b.conj();
    So3([
        [(a2 - b2).re, -(a2 + b2).im, 2.0 * ab.re],
        [(a2 - b2).im, (a2 + b2).re, 2.0 * ab.im],
        [-2.0 * abar_b.re, 2.0 * a_bbar.im, a.norm_sqr() - b.norm_sqr()],
    ])
}

/// `R(dσ, P)`: the rotation taking the standard frame at `P` to the
/// normalised image frame `(λ / Im σP)·dσ_P(e_k)` at `σP`.
///
/// Only the bottom row of `σ` enters.
pub fn frame_rotation(sigma: &Mat2, p: &PointH3) -> So3 {
    frame_rotation_cd(sigma.c, sigma.d, p)
}

/// [`frame_rotation`] from the bottom row `(c, d)`.
pub fn frame_rotation_cd(c: Complex64, d: Complex64, p: &PointH3) -> So3 {
    let i = Complex64::new(0.0, 1.0);
    let (z, lam) = (p.z, p.lambda);
    let l2 = lam * lam;
    let om = omega_factor(c, d, p);
    let (zb, cb, db) = (z.conj(), c.conj(), d.conj());
    let zcd = z * c * d;
    let cc = c.norm_sqr();
    let zc2 = z * c * c;
    let zbcb2 = zb * cb * cb;
    let cd = c * d;
    let cbdb = cb * db;
    let a_plus = zb * zb * cb * cb + z * z * c * c + (zcd.conj() + zcd) * 2.0 + (db * db + d * d);
    let a_minus = zb * zb * cb * cb - z * z * c * c + (zcd.conj() - zcd) * 2.0 + (db * db - d * d);
    let cl_plus = (cb * cb + c * c) * l2;
    let cl_minus = (cb * cb - c * c) * l2;
    let two_om = 2.0 * om;
    let e1 = [
        (a_plus - cl_plus) / two_om,
        -i * (a_minus - cl_minus) / two_om,
        -(lam / om) * ((zb + z) * cc + (c * db + cb * d)),
    ];
    let e2 = [
        i * (a_minus + cl_minus) / two_om,
        (a_plus + cl_plus) / two_om,
        -(i * lam / om) * ((zb - z) * cc + (c * db - cb * d)),
    ];
    let e3 = [
        (lam / om) * ((zbcb2 + zc2) + (cbdb + cd)),
        -(i * lam / om) * ((zbcb2 - zc2) + (cbdb - cd)),
        (cc * (z.norm_sqr() - l2) + d.norm_sqr() + (zb * cb * d + z * c * db)) / om,
    ];
    So3([
        [e1[0].re, e2[0].re, e3[0].re],
        [e1[1].re, e2[1].re, e3[1].re],
        [e1[2].re, e2[2].re, e3[2].re],
    ])
}
