//! Upper half-space `H³ = C × R₊` and the action of `SL(2, C)` on it.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::number_field::{QuadInt, RingSpec};
use crate::real::{exp, log, sqrt};
use crate::rotations::Su2;

/// A point `z + λ·j` of `H³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointH3 {
    /// Horizontal coordinate.
    pub z: Complex64,
    /// Height, strictly positive.
    pub lambda: f64,
}

impl PointH3 {
    /// Validates `λ > 0` and finiteness.
    pub fn new(z: Complex64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
            return Err(invalid("a point of H³ needs finite z and λ > 0"));
        }
        Ok(PointH3 { z, lambda })
    }

    /// The base point `j`.
    pub const J: PointH3 = PointH3 { z: Complex64::new(0.0, 0.0), lambda: 1.0 };

    /// Euclidean distance squared in `R³`.
    pub fn euclid_dist2(&self, o: &PointH3) -> f64 {
        (self.z - o.z).norm_sqr() + (self.lambda - o.lambda) * (self.lambda - o.lambda)
    }
}

/// Complex 2×2 matrix, intended to have determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    /// Entry (1,1).
    pub a: Complex64,
    /// Entry (1,2).
    pub b: Complex64,
    /// Entry (2,1).
    pub c: Complex64,
    /// Entry (2,2).
    pub d: Complex64,
}

impl Mat2 {
    /// Builds a matrix and checks `|det − 1| ≤ 1e-12`.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        if (m.det() - 1.0).norm() > 1e-12 {
            return Err(invalid("determinant differs from 1"));
        }
        Ok(m)
    }

    /// The identity.
    pub const IDENTITY: Mat2 = Mat2 {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// `n[z] = ((1, z), (0, 1))`.
    pub fn n(z: Complex64) -> Mat2 {
        Mat2 { b: z, ..Mat2::IDENTITY }
    }

    /// `a[μ] = diag(√μ, 1/√μ)`; acts on `H³` by `P ↦ μP`.
    pub fn a(mu: f64) -> Mat2 {
        let r = sqrt(mu);
        Mat2 { a: Complex64::new(r, 0.0), d: Complex64::new(1.0 / r, 0.0), ..Mat2::IDENTITY }
    }

    /// `n[z]·a[λ]`, the element sending `j` to `z + λj`.
    pub fn point(p: &PointH3) -> Mat2 {
        Mat2::n(p.z).mul(&Mat2::a(p.lambda))
    }

    /// Determinant.
    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix product `self·o`.
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Inverse of a determinant-one matrix (the adjugate).
    pub fn inverse(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        [(self.a - o.a), (self.b - o.b), (self.c - o.c), (self.d - o.d)]
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    /// `σP` together with `Ω = |cz + d|² + |c|²λ²`.
    pub fn act_with_omega(&self, p: &PointH3) -> (PointH3, f64) {
        let cz_d = self.c * p.z + self.d;
        let l2 = p.lambda * p.lambda;
        let om = omega_factor(self.c, self.d, p);
        let num = (self.a * p.z + self.b) * cz_d.conj() + self.a * self.c.conj() * l2;
        (PointH3 { z: num / om, lambda: p.lambda / om }, om)
    }

    /// `σP`.
    pub fn act(&self, p: &PointH3) -> PointH3 {
        self.act_with_omega(p).0
    }
}

/// `Ω(c, d; P) = |cz + d|² + |c|²λ²`, so that `Im σP = λ / Ω`.
#[inline]
pub fn omega_factor(c: Complex64, d: Complex64, p: &PointH3) -> f64 {
    (c * p.z + d).norm_sqr() + c.norm_sqr() * p.lambda * p.lambda
}

/// Matrix over `O_D` with determinant exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactMat2 {
    /// Entry (1,1).
    pub a: QuadInt,
    /// Entry (1,2).
    pub b: QuadInt,
    /// Entry (2,1).
    pub c: QuadInt,
    /// Entry (2,2).
    pub d: QuadInt,
}

impl ExactMat2 {
    /// Builds a matrix and checks `ad − bc = 1` exactly.
    pub fn new(ring: &RingSpec, a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Result<Self> {
        let m = ExactMat2 { a, b, c, d };
        if m.det(ring) != QuadInt::ONE {
            return Err(invalid("determinant is not 1 in O_D"));
        }
        Ok(m)
    }

    /// The identity.
    pub const IDENTITY: ExactMat2 =
        ExactMat2 { a: QuadInt::ONE, b: QuadInt::ZERO, c: QuadInt::ZERO, d: QuadInt::ONE };

    /// Exact determinant.
    pub fn det(&self, ring: &RingSpec) -> QuadInt {
        ring.mul(self.a, self.d) - ring.mul(self.b, self.c)
    }

    /// Exact product `self·o`.
    pub fn mul(&self, ring: &RingSpec, o: &ExactMat2) -> ExactMat2 {
        ExactMat2 {
            a: ring.mul(self.a, o.a) + ring.mul(self.b, o.c),
            b: ring.mul(self.a, o.b) + ring.mul(self.b, o.d),
            c: ring.mul(self.c, o.a) + ring.mul(self.d, o.c),
            d: ring.mul(self.c, o.b) + ring.mul(self.d, o.d),
        }
    }

    /// Exact inverse.
    pub fn inverse(&self) -> ExactMat2 {
        ExactMat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `−self`.
    pub fn neg(&self) -> ExactMat2 {
        ExactMat2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Image in `SL(2, C)`.
    pub fn to_complex(&self, ring: &RingSpec) -> Mat2 {
        Mat2 {
            a: ring.embed(self.a),
            b: ring.embed(self.b),
            c: ring.embed(self.c),
            d: ring.embed(self.d),
        }
    }
}

/// Coordinates of `g = n[z]·a[1/t]·A` with `A ∈ SU(2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Iwasawa {
    /// `(a·c̄ + b·d̄) / t`.
    pub z: Complex64,
    /// `t = |c|² + |d|²`.
    pub t: f64,
    /// `1/t`, the height of `g·j`.
    pub height: f64,
    /// The compact part `((d̄, −c̄), (c, d)) / √t`.
    pub k: Su2,
}

impl Iwasawa {
    /// `n[z]·a[1/t]·A`.
    pub fn reassemble(&self) -> Mat2 {
        Mat2::n(self.z).mul(&Mat2::a(self.height)).mul(&self.k.to_mat2())
    }
}

/// Iwasawa decomposition of `g`; fails when `c = d = 0`.
pub fn iwasawa(g: &Mat2) -> Result<Iwasawa> {
    let t = g.c.norm_sqr() + g.d.norm_sqr();
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("Iwasawa decomposition needs (c, d) ≠ (0, 0)"));
    }
    Ok(Iwasawa {
        z: (g.a * g.c.conj() + g.b * g.d.conj()) / t,
        t,
        height: 1.0 / t,
        k: Su2::from_bottom_row(g.c, g.d),
    })
}

/// `diag(e^{T/2}, e^{−T/2})·g`.
pub fn geodesic_flow(g: &Mat2, t: f64) -> Mat2 {
    let h = exp(t / 2.0);
    let gt = Mat2 { a: Complex64::new(h, 0.0), d: Complex64::new(1.0 / h, 0.0), ..Mat2::IDENTITY };
    gt.mul(g)
}

/// `n[S]·g`.
pub fn horocycle_flow(g: &Mat2, s: Complex64) -> Mat2 {
    Mat2::n(s).mul(g)
}

/// `cosh d(P, Q) = 1 + |P − Q|² / (2 λ_P λ_Q)`.
pub fn cosh_distance(p: &PointH3, q: &PointH3) -> f64 {
    1.0 + p.euclid_dist2(q) / (2.0 * p.lambda * q.lambda)
}

/// Hyperbolic distance.
pub fn hyperbolic_distance(p: &PointH3, q: &PointH3) -> f64 {
    let c = cosh_distance(p, q);
    // acosh(c) = log(c + √(c² − 1)), written to keep precision near c = 1.
    let e = c - 1.0;
    log(1.0 + e + sqrt(e * (e + 2.0)))
}
