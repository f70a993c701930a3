mod common;

use bianchi_core::hyperbolic3::{iwasawa, Mat2, PointH3};
use bianchi_core::rotations::*;
use common::c;
use proptest::prelude::*;
use rand::Rng;

/// `(λ/Im σP)·(σ(P + h e_k) − σ(P − h e_k))/(2h)` as columns.
fn fd_rotation(s: &Mat2, p: &PointH3, h: f64) -> So3 {
    let q = s.act(p);
    let shift = |k: usize, t: f64| {
        let mut r = *p;
        match k {
            0 => r.z += c(t, 0.0),
            1 => r.z += c(0.0, t),
            _ => r.lambda += t,
        }
        let v = s.act(&r);
        [v.z.re, v.z.im, v.lambda]
    };
    let mut m = [[0.0; 3]; 3];
    for k in 0..3 {
        let (a, b) = (shift(k, h), shift(k, -h));
        for i in 0..3 {
            m[i][k] = p.lambda / q.lambda * (a[i] - b[i]) / (2.0 * h);
        }
    }
    So3(m)
}

#[test]
fn special_cases() {
    let p = PointH3::new(c(0.3, -0.4), 0.7).unwrap();
    assert!(frame_rotation(&Mat2::n(c(1.5, 2.0)), &p).max_abs_diff(&So3::IDENTITY) < 1e-15);
    assert!(frame_rotation(&Mat2::a(3.0), &p).max_abs_diff(&So3::IDENTITY) < 1e-14);
    let s = Mat2::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    let want = So3([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
    assert!(frame_rotation(&s, &PointH3::J).max_abs_diff(&want) < 1e-15);
    assert!(fd_rotation(&s, &PointH3::J, 1e-5).max_abs_diff(&want) < 1e-6);
}

#[test]
fn b_matrix() {
    assert!((So3::B * So3::B).max_abs_diff(&So3::IDENTITY) == 0.0);
    assert_eq!(So3::B.transpose(), So3::B);
    assert_eq!(So3::B.det(), -1.0);
}

#[test]
fn spin_cover_examples() {
    assert!(spin_cover(&Su2::IDENTITY).max_abs_diff(&So3::IDENTITY) < 1e-15);
    let th: f64 = 0.83;
    let u = Su2 { alpha: c((th / 2.0).cos(), (th / 2.0).sin()), beta: c(0.0, 0.0) };
    let want = So3([[th.cos(), -th.sin(), 0.0], [th.sin(), th.cos(), 0.0], [0.0, 0.0, 1.0]]);
    assert!(spin_cover(&u).max_abs_diff(&want) < 1e-15);
}

#[test]
fn spin_cover_is_an_even_homomorphism() {
    let mut g = common::rng(10);
    for _ in 0..1000 {
        let (a, b) = (common::su2(&mut g), common::su2(&mut g));
        let lhs = spin_cover(&a.mul(&b));
        assert!(lhs.max_abs_diff(&(spin_cover(&a) * spin_cover(&b))) < 1e-10);
        let neg = Su2 { alpha: -a.alpha, beta: -a.beta };
        assert!(spin_cover(&neg).max_abs_diff(&spin_cover(&a)) < 1e-15);
    }
}

#[test]
fn bridge_identity_with_the_compact_part() {
    let mut g = common::rng(11);
    for _ in 0..1000 {
        let s = common::sl2c(&mut g);
        let p = common::point(&mut g);
        let k = iwasawa(&s.mul(&Mat2::point(&p))).unwrap().k;
        let lhs = spin_cover(&k);
        let rhs = So3::B * frame_rotation(&s, &p) * So3::B;
        assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }
}

#[test]
fn frame_rotations_are_rotations_and_match_differences() {
    let mut g = common::rng(12);
    for _ in 0..1000 {
        let s = common::sl2c(&mut g);
        let p = common::point(&mut g);
        let r = frame_rotation(&s, &p);
        assert!(r.orthogonality_defect() < 1e-10);
        assert!((r.det() - 1.0).abs() < 1e-10);
        assert!(r.max_abs_diff(&fd_rotation(&s, &p, 1e-5)) < 1e-6);
    }
}

#[test]
fn cocycle() {
    let mut g = common::rng(13);
    for _ in 0..500 {
        let (s, t) = (common::sl2c(&mut g), common::sl2c(&mut g));
        let p = common::point(&mut g);
        let lhs = frame_rotation(&s.mul(&t), &p);
        let rhs = frame_rotation(&s, &t.act(&p)) * frame_rotation(&t, &p);
        assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }
}

proptest! {
    #[test]
    fn frame_rotation_preserves_lengths(seed in any::<u64>(), v in prop::array::uniform3(-1.0..1.0f64)) {
        let mut g = common::rng(seed);
        let s = common::sl2c(&mut g);
        let p = common::point(&mut g);
        let w = frame_rotation(&s, &p).apply(v);
        let n0: f64 = v.iter().map(|x| x * x).sum();
        let n1: f64 = w.iter().map(|x| x * x).sum();
        prop_assert!((n0 - n1).abs() < 1e-10);
    }

    #[test]
    fn su2_inverse(seed in any::<u64>()) {
        let mut g = common::rng(seed);
        let a = common::su2(&mut g);
        let e = a.mul(&a.inverse()).to_mat2();
        prop_assert!(e.max_abs_diff(&Mat2::IDENTITY) < 1e-12);
        let _ = g.gen::<u8>();
    }
}
