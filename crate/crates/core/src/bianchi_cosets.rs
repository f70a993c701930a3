//! Coset representatives of `Γ'_∞ \ SL(2, O_D)` and bounded enumeration of
//! the group itself.
//!
//! `Γ'_∞ = {n[t] : t ∈ O_D}` is the unipotent part of the stabiliser of `∞`.
//! A coset is determined by its bottom row `(c, d)`, a coprime pair, and every
//! coprime pair occurs. Pairs differing by a unit are distinct cosets.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::hyperbolic3::{omega_factor, ExactMat2, PointH3};
use crate::number_field::{QuadInt, RingSpec};
use crate::real::sqrt;

/// How `[Γ_∞ : Γ'_∞]` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IndexConvention {
    /// Inside `SL(2, O_D)`: the index is the number of units.
    #[default]
    Sl,
    /// Inside `PSL(2, O_D)`: half the number of units.
    Psl,
}

impl IndexConvention {
    /// Coprime rows per coset of the chosen group: `1` for SL, `2` for PSL
    /// where `(c, d)` and `(−c, −d)` coincide.
    pub fn rows_per_coset(self) -> usize {
        match self {
            IndexConvention::Sl => 1,
            IndexConvention::Psl => 2,
        }
    }
}

/// `[Γ_∞ : Γ'_∞]` under `conv`.
pub fn unipotent_index(ring: &RingSpec, conv: IndexConvention) -> usize {
    ring.units().len() / conv.rows_per_coset()
}

/// A coprime bottom row with its weight `Ω(c, d; P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetRow {
    /// Bottom-left entry.
    pub c: QuadInt,
    /// Bottom-right entry.
    pub d: QuadInt,
    /// `|cz + d|² + |c|²λ²`.
    pub omega: f64,
}

/// A coset representative `σ` with `Ω(σ; P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosetRep {
    /// Completed matrix with the enumerated bottom row.
    pub sigma: ExactMat2,
    /// `|cz + d|² + |c|²λ²`.
    pub omega: f64,
}

/// Sort key `(N(c), N(d), c.x, c.y, d.x, d.y)`.
pub fn canonical_key(ring: &RingSpec, c: QuadInt, d: QuadInt) -> (i64, i64, i64, i64, i64, i64) {
    (ring.norm(c), ring.norm(d), c.x, c.y, d.x, d.y)
}

/// All coprime `(c, d)` with `Ω(c, d; P) ≤ omega_bound`, in canonical order.
///
/// For `X < X'` the list at `X` is a subsequence of the list at `X'`.
pub fn enumerate_coset_rows(ring: &RingSpec, p: &PointH3, omega_bound: f64) -> Result<Vec<CosetRow>> {
    if !(omega_bound >= 0.0) || !omega_bound.is_finite() {
        return Err(invalid("Ω bound must be finite and non-negative"));
    }
    let mut rows = Vec::new();
    let l2 = p.lambda * p.lambda;
    for c in ring.points_in_disk(num_complex::Complex64::new(0.0, 0.0), sqrt(omega_bound / l2)) {
        let cz = ring.embed(c);
        let rem = omega_bound - cz.norm_sqr() * l2;
        if rem < 0.0 {
            continue;
        }
        for d in ring.points_in_disk(-(cz * p.z), sqrt(rem)) {
            let om = omega_factor(cz, ring.embed(d), p);
            if om <= omega_bound && ring.is_coprime(c, d) {
                rows.push(CosetRow { c, d, omega: om });
            }
        }
    }
    rows.sort_unstable_by_key(|r| canonical_key(ring, r.c, r.d));
    Ok(rows)
}

/// [`enumerate_coset_rows`] with each row completed to a matrix of `SL(2, O_D)`.
pub fn enumerate_cosets(ring: &RingSpec, p: &PointH3, omega_bound: f64) -> Result<Vec<CosetRep>> {
    enumerate_coset_rows(ring, p, omega_bound)?
        .into_iter()
        .map(|r| Ok(CosetRep { sigma: complete_row(ring, r.c, r.d)?, omega: r.omega }))
        .collect()
}

/// Some `((a, b), (c, d)) ∈ SL(2, O_D)`; `(a, b)` comes from the Bézout
/// identity `x·c + y·d = 1` as `a = y`, `b = −x`.
pub fn complete_row(ring: &RingSpec, c: QuadInt, d: QuadInt) -> Result<ExactMat2> {
    let (x, y) = ring.bezout(c, d)?;
    Ok(ExactMat2 { a: y, b: -x, c, d })
}

/// All `γ ∈ SL(2, O_D)` whose four entries have norm at most `bound`,
/// sorted by `(max entry norm, entries)`.
pub fn enumerate_group(ring: &RingSpec, bound: i64) -> Result<Vec<ExactMat2>> {
    if bound < 1 {
        return Err(invalid("entry bound must be at least 1"));
    }
    let origin = num_complex::Complex64::new(0.0, 0.0);
    let r = sqrt(bound as f64) + 1e-9;
    let small: Vec<QuadInt> = ring
        .points_in_disk(origin, r)
        .into_iter()
        .filter(|&a| ring.norm(a) <= bound)
        .collect();
    let mut out = Vec::new();
    for &c in &small {
        for &d in &small {
            if !ring.is_coprime(c, d) {
                continue;
            }
            let base = complete_row(ring, c, d)?;
            // Other completions are n[t]·base = ((a + tc, b + td), (c, d)).
            let pivot = if c.is_zero() { d } else { c };
            let start = if c.is_zero() { base.b } else { base.a };
            let pz = ring.embed(pivot);
            let center = -ring.embed(start) / pz;
            for t in ring.points_in_disk(center, r / pz.norm()) {
                let a = base.a + ring.mul(t, c);
                let b = base.b + ring.mul(t, d);
                if ring.norm(a) <= bound && ring.norm(b) <= bound {
                    out.push(ExactMat2 { a, b, c, d });
                }
            }
        }
    }
    let key = |g: &ExactMat2| {
        let m = [g.a, g.b, g.c, g.d].iter().map(|&e| ring.norm(e)).max().unwrap_or(0);
        (m, *g)
    };
    out.sort_unstable_by_key(key);
    out.dedup();
    Ok(out)
}

/// Bottom rows up to sign: keeps `(c, d)` when its first nonzero coordinate
/// among `(c.x, c.y, d.x, d.y)` is positive.
pub fn is_sign_canonical(c: QuadInt, d: QuadInt) -> bool {
    for v in [c.x, c.y, d.x, d.y] {
        if v != 0 {
            return v > 0;
        }
    }
    false
}
