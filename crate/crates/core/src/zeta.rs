//! Dedekind zeta functions, the scattering coefficient `φ(s)` and orbifold
//! volumes.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::number_field::RingSpec;
use crate::real::{pow, rpow, sqrt, PI};

/// Cutoff used by [`scattering_phi`] and [`orbifold_volume`].
pub const DEFAULT_CUTOFF: i64 = 4_000_000;

/// Truncated Dirichlet series with an explicit tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    /// `(1/|units|)·Σ_{0 < N(α) ≤ cutoff} N(α)^{−s}`.
    pub value: Complex64,
    /// `C_D·cutoff^{1−Re s}/(Re s − 1)` with `C_D = 2π/(√|d_K|·|units|)`.
    pub tail_bound: f64,
    /// Norm cutoff.
    pub cutoff: i64,
}

/// Number of `α ∈ O_D` with `N(α) = n`, for `0 ≤ n ≤ cutoff`.
pub fn norm_counts(ring: &RingSpec, cutoff: i64) -> Vec<u32> {
    let mut counts = alloc::vec![0u32; cutoff as usize + 1];
    let (t, n) = (ring.trace_omega(), ring.norm_omega());
    let disc4 = 4 * n - t * t;
    let y_max = sqrt(4.0 * cutoff as f64 / disc4 as f64) as i64 + 1;
    for y in -y_max..=y_max {
        // N = x² + t·x·y + n·y² ≤ cutoff solved for x.
        let rest = cutoff as f64 - (disc4 * y * y) as f64 / 4.0;
        if rest < 0.0 {
            continue;
        }
        let mid = -(t * y) as f64 / 2.0;
        let half = sqrt(rest);
        for x in (mid - half) as i64 - 1..=(mid + half) as i64 + 1 {
            let v = x * x + t * x * y + n * y * y;
            if v <= cutoff {
                counts[v as usize] += 1;
            }
        }
    }
    counts
}

/// `ζ_D(s)` for `Re s > 1` as a truncated sum over nonzero elements.
pub fn dedekind_zeta(ring: &RingSpec, s: Complex64, cutoff: i64) -> Result<ZetaValue> {
    if !(s.re > 1.0) {
        return Err(invalid("ζ_D(s) needs Re s > 1"));
    }
    if cutoff < 10 {
        return Err(invalid("ζ_D cutoff must be at least 10"));
    }
    let counts = norm_counts(ring, cutoff);
    Ok(zeta_from_counts(ring, &counts, s))
}

fn zeta_from_counts(ring: &RingSpec, counts: &[u32], s: Complex64) -> ZetaValue {
    let cutoff = counts.len() as i64 - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    // Largest norms first so that small terms are added before large ones.
    for n in (1..counts.len()).rev() {
        if counts[n] != 0 {
            let term = if s.im == 0.0 { Complex64::new(pow(n as f64, -s.re), 0.0) } else { rpow(n as f64, -s) };
            acc += term * counts[n] as f64;
        }
    }
    let w = ring.units().len() as f64;
    ZetaValue { value: acc / w, tail_bound: zeta_tail_bound(ring, s.re, cutoff), cutoff }
}

/// `(2π/√|d_K|)/|units| · cutoff^{1−σ}/(σ − 1)`.
pub fn zeta_tail_bound(ring: &RingSpec, sigma: f64, cutoff: i64) -> f64 {
    let c = 2.0 * PI / sqrt(ring.discriminant().unsigned_abs() as f64) / ring.units().len() as f64;
    c * pow(cutoff as f64, 1.0 - sigma) / (sigma - 1.0)
}

/// `φ(s) = π/(s·|Λ|) · ζ_D(s)/ζ_D(s + 1)` for `Re s > 1`, at `cutoff`.
pub fn scattering_phi_at(ring: &RingSpec, s: Complex64, cutoff: i64) -> Result<Complex64> {
    if !(s.re > 1.0) {
        return Err(invalid("φ(s) is evaluated here only for Re s > 1"));
    }
    let counts = norm_counts(ring, cutoff);
    let num = zeta_from_counts(ring, &counts, s).value;
    let den = zeta_from_counts(ring, &counts, s + 1.0).value;
    Ok(num / den * (PI / ring.covolume()) / s)
}

/// [`scattering_phi_at`] with [`DEFAULT_CUTOFF`].
pub fn scattering_phi(ring: &RingSpec, s: Complex64) -> Result<Complex64> {
    scattering_phi_at(ring, s, DEFAULT_CUTOFF)
}

/// `Vol(H³/PSL(2, O_D)) = |d_K|^{3/2}·ζ_D(2)/(4π²)`.
pub fn orbifold_volume(ring: &RingSpec) -> f64 {
    let z2 = zeta_from_counts(ring, &norm_counts(ring, DEFAULT_CUTOFF), Complex64::new(2.0, 0.0));
    let d = ring.discriminant().unsigned_abs() as f64;
    pow(d, 1.5) * z2.value.re / (4.0 * PI * PI)
}
