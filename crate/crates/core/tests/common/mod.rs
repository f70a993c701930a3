#![allow(dead_code)]

use bianchi_core::hyperbolic3::{Mat2, PointH3};
use bianchi_core::rotations::{So3, Su2};
use bianchi_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex(r: &mut impl Rng, scale: f64) -> Complex64 {
    c(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

/// Random element of SL(2, C) with entries of moderate size.
pub fn sl2c(r: &mut impl Rng) -> Mat2 {
    loop {
        let (a, b, cc) = (complex(r, 2.0), complex(r, 2.0), complex(r, 2.0));
        if a.norm() < 0.2 {
            continue;
        }
        let d = (c(1.0, 0.0) + b * cc) / a;
        return Mat2::new(a, b, cc, d).unwrap();
    }
}

pub fn point(r: &mut impl Rng) -> PointH3 {
    PointH3::new(complex(r, 1.5), r.gen_range(0.2..3.0)).unwrap()
}

pub fn su2(r: &mut impl Rng) -> Su2 {
    let v: [f64; 4] = core::array::from_fn(|_| r.gen_range(-1.0..1.0));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Su2 { alpha: c(v[0] / n, v[1] / n), beta: c(v[2] / n, v[3] / n) }
}

pub fn so3(r: &mut impl Rng) -> So3 {
    bianchi_core::rotations::spin_cover(&su2(r))
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
