//! Rings of integers `O_D` of the nine imaginary quadratic fields
//! `Q(√−D)` with class number one.
//!
//! Elements are stored exactly as integer coordinates in the basis `{1, ω}`.
//! Integer arithmetic is checked; an overflow panics instead of wrapping.

use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::real::{ceil, floor, round, sqrt};

/// The values of `D` for which `O_D` is a principal ideal domain.
pub const SUPPORTED_D: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// An element `x + y·ω` of `O_D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuadInt {
    /// Coefficient of `1`.
    pub x: i64,
    /// Coefficient of `ω`.
    pub y: i64,
}

impl QuadInt {
    /// Builds `x + y·ω`.
    pub const fn new(x: i64, y: i64) -> Self {
        QuadInt { x, y }
    }

    /// The additive identity.
    pub const ZERO: QuadInt = QuadInt::new(0, 0);
    /// The multiplicative identity.
    pub const ONE: QuadInt = QuadInt::new(1, 0);
    /// The generator `ω`.
    pub const OMEGA: QuadInt = QuadInt::new(0, 1);

    /// True for `0`.
    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

fn add_i(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("QuadInt overflow")
}

fn mul_i(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("QuadInt overflow")
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(add_i(self.x, o.x), add_i(self.y, o.y))
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        self + (-o)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(
            self.x.checked_neg().expect("QuadInt overflow"),
            self.y.checked_neg().expect("QuadInt overflow"),
        )
    }
}

/// Static description of `O_D`.
///
/// `ω` satisfies `ω² = t·ω − n` with `(t, n) = (0, D)` for `D ≡ 1, 2 (mod 4)`
/// and `(t, n) = (1, (1 + D)/4)` for `D ≡ 3 (mod 4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingSpec {
    d: i64,
    trace: i64,
    norm_omega: i64,
    discriminant: i64,
    omega: Complex64,
    units: Vec<QuadInt>,
}

impl RingSpec {
    /// Ring of integers of `Q(√−D)`; fails unless `D ∈ SUPPORTED_D`.
    pub fn new(d: i64) -> Result<Self> {
        if !SUPPORTED_D.contains(&d) {
            return Err(Error::UnsupportedField(d));
        }
        let (trace, norm_omega, discriminant, omega) = if d % 4 == 3 {
            (1, (1 + d) / 4, -d, Complex64::new(0.5, sqrt(d as f64) / 2.0))
        } else {
            (0, d, -4 * d, Complex64::new(0.0, sqrt(d as f64)))
        };
        let units = match d {
            1 => alloc::vec![
                QuadInt::new(1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(-1, 0),
                QuadInt::new(0, -1),
            ],
            3 => alloc::vec![
                QuadInt::new(1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(-1, 1),
                QuadInt::new(-1, 0),
                QuadInt::new(0, -1),
                QuadInt::new(1, -1),
            ],
            _ => alloc::vec![QuadInt::new(1, 0), QuadInt::new(-1, 0)],
        };
        Ok(RingSpec { d, trace, norm_omega, discriminant, omega, units })
    }

    /// The squarefree `D`.
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Field discriminant `d_K` (negative).
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `ω` as a complex number.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// `ω + ω̄`.
    pub fn trace_omega(&self) -> i64 {
        self.trace
    }

    /// `ω·ω̄`.
    pub fn norm_omega(&self) -> i64 {
        self.norm_omega
    }

    /// Area of a fundamental parallelogram of `O_D ⊂ C`, `√|d_K| / 2`.
    pub fn covolume(&self) -> f64 {
        sqrt(self.discriminant.unsigned_abs() as f64) / 2.0
    }

    /// Units of `O_D`, starting with `1`.
    pub fn units(&self) -> &[QuadInt] {
        &self.units
    }

    /// Basis of `Λ*` dual to `{1, ω}` under `⟨z, w⟩ = Re z·Re w + Im z·Im w`.
    pub fn dual_basis(&self) -> [Complex64; 2] {
        let (re, im) = (self.omega.re, self.omega.im);
        [Complex64::new(1.0, -re / im), Complex64::new(0.0, 1.0 / im)]
    }

    /// The point `a` of `C`.
    pub fn embed(&self, a: QuadInt) -> Complex64 {
        Complex64::new(a.x as f64 + a.y as f64 * self.omega.re, a.y as f64 * self.omega.im)
    }

    /// Exact product.
    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        let yy = mul_i(a.y, b.y);
        QuadInt::new(
            add_i(mul_i(a.x, b.x), -mul_i(self.norm_omega, yy)),
            add_i(add_i(mul_i(a.x, b.y), mul_i(a.y, b.x)), mul_i(self.trace, yy)),
        )
    }

    /// Complex conjugate, `conj(x + yω) = (x + t·y) − y·ω`.
    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(add_i(a.x, mul_i(self.trace, a.y)), -a.y)
    }

    /// Exact norm `a·ā`.
    pub fn norm(&self, a: QuadInt) -> i64 {
        add_i(
            add_i(mul_i(a.x, a.x), mul_i(self.trace, mul_i(a.x, a.y))),
            mul_i(self.norm_omega, mul_i(a.y, a.y)),
        )
    }

    /// True when `a` is a unit.
    pub fn is_unit(&self, a: QuadInt) -> bool {
        self.norm(a) == 1
    }

    /// `a / b` when `b` divides `a` exactly.
    pub fn div_exact(&self, a: QuadInt, b: QuadInt) -> Option<QuadInt> {
        let n = self.norm(b);
        if n == 0 {
            return None;
        }
        let p = self.mul(a, self.conj(b));
        if p.x % n == 0 && p.y % n == 0 {
            Some(QuadInt::new(p.x / n, p.y / n))
        } else {
            None
        }
    }

    /// Hermite normal form `[[h11, h12], [0, h22]]` of the ideal `(c, d)`
    /// viewed as a sublattice of `Z² ≅ O_D`.
    pub fn ideal_hnf(&self, c: QuadInt, d: QuadInt) -> [[i64; 2]; 2] {
        let (h, _) = self.hnf_with_transform(c, d);
        let narrow = |v: i128| i64::try_from(v).expect("QuadInt overflow");
        [[narrow(h[0][0]), narrow(h[0][1])], [narrow(h[1][0]), narrow(h[1][1])]]
    }

    /// Index `[O_D : (c, d)]`; zero when `c = d = 0`.
    pub fn ideal_index(&self, c: QuadInt, d: QuadInt) -> i64 {
        let h = self.ideal_hnf(c, d);
        mul_i(h[0][0], h[1][1]).abs()
    }

    /// Whether `(c, d) = O_D`. The pair `(0, 0)` is not coprime.
    pub fn is_coprime(&self, c: QuadInt, d: QuadInt) -> bool {
        if c.is_zero() {
            return self.is_unit(d);
        }
        if d.is_zero() {
            return self.is_unit(c);
        }
        if gcd(self.norm(c), self.norm(d)) == 1 {
            return true;
        }
        self.ideal_index(c, d) == 1
    }

    /// `(x, y)` with `x·c + y·d = 1`, read off the HNF transformation matrix
    /// and then size-reduced along `(x + t·d, y − t·c)`.
    pub fn bezout(&self, c: QuadInt, d: QuadInt) -> Result<(QuadInt, QuadInt)> {
        let (h, u) = self.hnf_with_transform(c, d);
        if (h[0][0] * h[1][1]).abs() != 1 {
            return Err(Error::NotCoprime);
        }
        // (1, 0) = s1·h_row0 + s2·h_row1 with h11, h22 = ±1.
        let s1 = h[0][0];
        let s2 = -(h[0][0] * h[0][1] * h[1][1]);
        let coef: [i128; 4] = core::array::from_fn(|k| add_w(mul_w(s1, u[0][k]), mul_w(s2, u[1][k])));
        let (mut x, mut y) = ([coef[0], coef[1]], [coef[2], coef[3]]);
        // The transform can be large; shift by the nearest multiple of the
        // other generator.
        let (cw, dw) = ([c.x as i128, c.y as i128], [d.x as i128, d.y as i128]);
        let (num, den, sign) = if d.is_zero() { (y, cw, 1) } else { (x, dw, -1) };
        let ratio = self.embed_wide(num) / self.embed_wide(den);
        let t = [sign * round(ratio.re - ratio.im * self.omega.re / self.omega.im) as i128,
            sign * round(ratio.im / self.omega.im) as i128];
        let (td, tc) = (self.mul_wide(t, dw), self.mul_wide(t, cw));
        x = [add_w(x[0], td[0]), add_w(x[1], td[1])];
        y = [add_w(y[0], -tc[0]), add_w(y[1], -tc[1])];
        let narrow = |v: i128| i64::try_from(v).expect("QuadInt overflow");
        let x = QuadInt::new(narrow(x[0]), narrow(x[1]));
        let y = QuadInt::new(narrow(y[0]), narrow(y[1]));
        debug_assert_eq!(self.mul(x, c) + self.mul(y, d), QuadInt::ONE);
        Ok((x, y))
    }

    fn embed_wide(&self, a: [i128; 2]) -> Complex64 {
        Complex64::new(a[0] as f64 + a[1] as f64 * self.omega.re, a[1] as f64 * self.omega.im)
    }

    fn mul_wide(&self, a: [i128; 2], b: [i128; 2]) -> [i128; 2] {
        let yy = mul_w(a[1], b[1]);
        [
            add_w(mul_w(a[0], b[0]), -mul_w(self.norm_omega as i128, yy)),
            add_w(add_w(mul_w(a[0], b[1]), mul_w(a[1], b[0])), mul_w(self.trace as i128, yy)),
        ]
    }

    /// Row-style HNF of the generators `c, cω, d, dω` with the unimodular
    /// `U` such that `U·M = H`; rows 0 and 1 of `H` are returned. Runs in
    /// `i128` because the entries of `U` grow much faster than those of `H`.
    fn hnf_with_transform(&self, c: QuadInt, d: QuadInt) -> ([[i128; 2]; 2], [[i128; 4]; 4]) {
        let gens = [c, self.mul(c, QuadInt::OMEGA), d, self.mul(d, QuadInt::OMEGA)];
        let mut m: [[i128; 2]; 4] = core::array::from_fn(|i| [gens[i].x as i128, gens[i].y as i128]);
        let mut u: [[i128; 4]; 4] = core::array::from_fn(|i| core::array::from_fn(|j| (i == j) as i128));
        let mut pivot_row = 0;
        for col in 0..2 {
            for j in pivot_row + 1..4 {
                if m[j][col] == 0 {
                    continue;
                }
                let (a, b) = (m[pivot_row][col], m[j][col]);
                let (g, p, q) = ext_gcd_wide(a, b);
                let (ra, rb) = (a / g, b / g);
                combine(&mut m, pivot_row, j, p, q, -rb, ra);
                combine(&mut u, pivot_row, j, p, q, -rb, ra);
            }
            if m[pivot_row][col] != 0 {
                if m[pivot_row][col] < 0 {
                    for v in m[pivot_row].iter_mut() {
                        *v = -*v;
                    }
                    for v in u[pivot_row].iter_mut() {
                        *v = -*v;
                    }
                }
                pivot_row += 1;
            }
        }
        // Reduce the off-diagonal entry modulo the second pivot.
        if m[1][1] != 0 {
            let q = m[0][1].div_euclid(m[1][1]);
            if q != 0 {
                combine(&mut m, 0, 1, 1, -q, 0, 1);
                combine(&mut u, 0, 1, 1, -q, 0, 1);
            }
        }
        ([m[0], m[1]], u)
    }

    /// All `a ∈ O_D` with `|a − center| ≤ radius`, in `(y, x)` order.
    ///
    /// The candidate box is padded by one lattice unit in each direction and
    /// then filtered by the exact disk predicate.
    pub fn points_in_disk(&self, center: Complex64, radius: f64) -> Vec<QuadInt> {
        let mut out = Vec::new();
        if !(radius >= 0.0) {
            return out;
        }
        let im = self.omega.im;
        let r2 = radius * radius;
        let y_lo = floor((center.im - radius) / im) as i64 - 1;
        let y_hi = ceil((center.im + radius) / im) as i64 + 1;
        for y in y_lo..=y_hi {
            let dy = y as f64 * im - center.im;
            let rem = r2 - dy * dy;
            let half = if rem > 0.0 { sqrt(rem) } else { 0.0 };
            let cx = center.re - y as f64 * self.omega.re;
            let x_lo = floor(cx - half) as i64 - 1;
            let x_hi = ceil(cx + half) as i64 + 1;
            for x in x_lo..=x_hi {
                let a = QuadInt::new(x, y);
                if (self.embed(a) - center).norm_sqr() <= r2 {
                    out.push(a);
                }
            }
        }
        out
    }

    /// All nonzero `a` with `N(a) ≤ bound`, found exactly from the norm form.
    pub fn elements_with_norm_at_most(&self, bound: i64) -> Vec<QuadInt> {
        let mut out = Vec::new();
        if bound < 1 {
            return out;
        }
        // N = (x + t·y/2)² + (n − t²/4)·y², so |y| ≤ √(bound / (n − t²/4)).
        let disc4 = 4 * self.norm_omega - self.trace * self.trace;
        let y_max = sqrt(4.0 * bound as f64 / disc4 as f64) as i64 + 1;
        for y in -y_max..=y_max {
            let x_mid = -(self.trace * y) as f64 / 2.0;
            let rest = bound as f64 - (disc4 * y * y) as f64 / 4.0;
            if rest < -1.0 {
                continue;
            }
            let half = sqrt(rest.max(0.0)) + 1.0;
            for x in (x_mid - half) as i64 - 1..=(x_mid + half) as i64 + 1 {
                let a = QuadInt::new(x, y);
                let n = self.norm(a);
                if n >= 1 && n <= bound {
                    out.push(a);
                }
            }
        }
        out
    }
}

fn add_w(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("QuadInt overflow")
}

fn mul_w(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("QuadInt overflow")
}

fn combine<const N: usize>(
    rows: &mut [[i128; N]; 4],
    i: usize,
    j: usize,
    p: i128,
    q: i128,
    r: i128,
    s: i128,
) {
    let (ri, rj) = (rows[i], rows[j]);
    for k in 0..N {
        rows[i][k] = add_w(mul_w(p, ri[k]), mul_w(q, rj[k]));
        rows[j][k] = add_w(mul_w(r, ri[k]), mul_w(s, rj[k]));
    }
}

/// `(g, p, q)` with `p·a + q·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (g, p, q) = ext_gcd_wide(a as i128, b as i128);
    (g as i64, p as i64, q as i64)
}

fn ext_gcd_wide(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, add_w(s0, -mul_w(q, s1)));
        (t0, t1) = (t1, add_w(t0, -mul_w(q, t1)));
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}
