//! The subcommands. Each validates its arguments completely, computes, and
//! returns the JSON document (config, result, metadata) as a string.

use std::path::PathBuf;

use bianchi_core::bianchi_cosets::{enumerate_coset_rows, is_sign_canonical, unipotent_index, CosetRow, IndexConvention};
use bianchi_core::eisenstein::{
    classical_e_with_rows, constant_term, eisenstein_e_with_rows, fourier_coeff, series_h_with_rows,
    truncated_e_with_rows, SeriesParams, SeriesValue,
};
use bianchi_core::equidist::{
    equidistribution_experiment, ExperimentConfig, LiouvilleOrders, MeasureReport, PoincareBump, TestFunction,
};
use bianchi_core::harmonics::HarmonicIndex;
use bianchi_core::hyperbolic3::{Mat2, PointH3};
use bianchi_core::number_field::RingSpec;
use bianchi_core::rotations::Su2;
use bianchi_core::zeta::{dedekind_zeta, orbifold_volume, scattering_phi_at};
use bianchi_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cache::{load_or_enumerate, CacheReport};
use crate::config::{
    Command, Convention, CosetArgs, EisensteinArgs, EquidistArgs, FourierArgs, RunConfig, SeriesKind, ZetaArgs,
};
use crate::CliError;

/// A finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    /// The JSON document.
    pub json: String,
    /// CSV mirror and where it goes.
    pub csv: Option<(PathBuf, String)>,
    /// Tolerance warnings (also inside the JSON).
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    config: &'a RunConfig,
    result: R,
    metadata: Metadata,
}

#[derive(Serialize)]
struct Metadata {
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cache: Option<CacheReport>,
}

#[derive(Serialize, Clone, Copy)]
struct Cx {
    re: f64,
    im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn emit<R: Serialize>(cfg: &RunConfig, result: R, warnings: Vec<String>, cache: Option<CacheReport>) -> Result<Output, CliError> {
    let doc = Envelope { config: cfg, result, metadata: Metadata { warnings: warnings.clone(), cache } };
    let json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(format!("serialising output: {e}")))?;
    Ok(Output { json: json + "\n", csv: None, warnings })
}

/// Parses "x,y,lambda".
pub fn parse_point(s: &str) -> Result<PointH3, CliError> {
    let v = parse_floats(s)?;
    if v.len() != 3 {
        return Err(invalid(format!("point \"{s}\" needs three numbers x,y,lambda")));
    }
    Ok(PointH3::new(Complex64::new(v[0], v[1]), v[2])?)
}

/// Parses a strictly decreasing list of positive heights.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let v = parse_floats(s)?;
    if v.is_empty() || v.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(invalid("grid must list positive heights"));
    }
    if v.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("grid must be strictly decreasing"));
    }
    Ok(v)
}

fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| invalid(format!("\"{t}\" is not a number"))))
        .collect()
}

fn parse_pair(s: &str) -> Result<(i64, i64), CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| invalid(format!("\"{t}\" is not an integer"))))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(invalid(format!("\"{s}\" needs two integers n1,n2"))),
    }
}

fn convention(c: Convention) -> IndexConvention {
    match c {
        Convention::Sl => IndexConvention::Sl,
        Convention::Psl => IndexConvention::Psl,
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("--{name} must be positive")))
    }
}

fn series_params(s_re: f64, s_im: f64, bound: f64, conv: IndexConvention) -> Result<SeriesParams, CliError> {
    if !(s_re > 1.0) || !s_im.is_finite() {
        return Err(invalid("series need Re s > 1"));
    }
    positive("bound", bound)?;
    Ok(SeriesParams { convention: conv, ..SeriesParams::new(Complex64::new(s_re, s_im), bound) })
}

/// Runs the configured command.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let ring = RingSpec::new(cfg.d)?;
    let conv = convention(cfg.index_convention);
    match &cfg.command {
        Command::Ring => cmd_ring(cfg, &ring),
        Command::Cosets(a) => cmd_cosets(cfg, &ring, a),
        Command::Eisenstein(a) => cmd_eisenstein(cfg, &ring, conv, a),
        Command::Fourier(a) => cmd_fourier(cfg, &ring, conv, a),
        Command::Zeta(a) => cmd_zeta(cfg, &ring, a),
        Command::Equidist(a) => cmd_equidist(cfg, &ring, a),
    }
}

#[derive(Serialize)]
struct RingOut {
    omega: Cx,
    discriminant: i64,
    units: Vec<[i64; 2]>,
    covolume: f64,
    dual_basis: [Cx; 2],
    index_sl: usize,
    index_psl: usize,
}

fn cmd_ring(cfg: &RunConfig, ring: &RingSpec) -> Result<Output, CliError> {
    let dual = ring.dual_basis();
    let out = RingOut {
        omega: ring.omega().into(),
        discriminant: ring.discriminant(),
        units: ring.units().iter().map(|u| [u.x, u.y]).collect(),
        covolume: ring.covolume(),
        dual_basis: [dual[0].into(), dual[1].into()],
        index_sl: unipotent_index(ring, IndexConvention::Sl),
        index_psl: unipotent_index(ring, IndexConvention::Psl),
    };
    emit(cfg, out, Vec::new(), None)
}

#[derive(Serialize)]
struct RowOut {
    c: [i64; 2],
    d: [i64; 2],
    omega: f64,
}

#[derive(Serialize)]
struct CosetsOut {
    point: [f64; 3],
    bound: f64,
    n_rows: usize,
    n_psl_cosets: usize,
    rows: Vec<RowOut>,
}

fn rows_for(ring: &RingSpec, p: &PointH3, bound: f64, cache: &Option<PathBuf>) -> Result<(Vec<CosetRow>, Option<CacheReport>), CliError> {
    match cache {
        Some(path) => {
            let (rows, rep) = load_or_enumerate(path, ring, p, bound)?;
            Ok((rows, Some(rep)))
        }
        None => Ok((enumerate_coset_rows(ring, p, bound)?, None)),
    }
}

fn cmd_cosets(cfg: &RunConfig, ring: &RingSpec, a: &CosetArgs) -> Result<Output, CliError> {
    let p = parse_point(&a.point)?;
    positive("bound", a.bound)?;
    let (rows, cache) = rows_for(ring, &p, a.bound, &a.cache)?;
    let out = CosetsOut {
        point: [p.z.re, p.z.im, p.lambda],
        bound: a.bound,
        n_rows: rows.len(),
        n_psl_cosets: rows.iter().filter(|r| is_sign_canonical(r.c, r.d)).count(),
        rows: rows.iter().take(a.limit).map(|r| RowOut { c: [r.c.x, r.c.y], d: [r.d.x, r.d.y], omega: r.omega }).collect(),
    };
    emit(cfg, out, Vec::new(), cache)
}

/// JSON record of one series value.
#[derive(Serialize)]
struct SeriesOut {
    #[serde(rename = "D")]
    d: i64,
    series: SeriesKind,
    l: u32,
    k: i32,
    m: i32,
    s_re: f64,
    s_im: f64,
    point: [f64; 3],
    bound: f64,
    n_terms: usize,
    value_re: f64,
    value_im: f64,
    tail_estimate: f64,
    tail_warning: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    he_check: Option<HeCheck>,
}

#[derive(Serialize)]
struct HeCheck {
    e: Cx,
    h: Cx,
    /// e^{−i(k+m)π}.
    expected_phase: f64,
    /// `|H − phase·E| / max(|E|, |E^0_00|)`.
    relative_error: f64,
}

/// Tolerance of the H/E identity at matched coset lists.
pub const HE_TOLERANCE: f64 = 1e-10;

fn cmd_eisenstein(cfg: &RunConfig, ring: &RingSpec, conv: IndexConvention, a: &EisensteinArgs) -> Result<Output, CliError> {
    let idx = HarmonicIndex::new(a.l, a.k, a.m)?;
    let p = parse_point(&a.point)?;
    let params = series_params(a.s_re, a.s_im, a.bound, conv)?;
    let scalar = matches!(a.series, SeriesKind::Classical | SeriesKind::Truncated);
    if scalar && idx != HarmonicIndex::SCALAR {
        return Err(invalid("classical and truncated series are scalar; use l = k = m = 0"));
    }
    if a.he_check && scalar {
        return Err(invalid("--he-check applies to --series e or h"));
    }
    if a.series == SeriesKind::Truncated {
        positive("truncation", a.truncation)?;
    }
    let (rows, cache) = rows_for(ring, &p, a.bound, &a.cache)?;
    let v: SeriesValue = match a.series {
        SeriesKind::E => eisenstein_e_with_rows(ring, idx, &p, &params, &rows)?,
        SeriesKind::H => series_h_with_rows(ring, idx, &p, &params, &rows)?,
        SeriesKind::Classical => classical_e_with_rows(ring, &p, &params, &rows)?,
        SeriesKind::Truncated => truncated_e_with_rows(ring, &p, &params, a.truncation, &rows)?,
    };
    let mut warnings = Vec::new();
    if v.tail_warning {
        warnings.push(format!("tail estimate {:e} exceeds 10% of |value| = {:e}", v.tail_estimate, v.value.norm()));
    }
    let he_check = if a.he_check {
        let e = eisenstein_e_with_rows(ring, idx, &p, &params, &rows)?.value;
        let h = series_h_with_rows(ring, idx, &p, &params, &rows)?.value;
        let e0 = eisenstein_e_with_rows(ring, HarmonicIndex::SCALAR, &p, &params, &rows)?.value;
        let phase = if (a.k + a.m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let scale = e.norm().max(e0.norm());
        let rel = (h - e * phase).norm() / scale;
        if !(rel <= HE_TOLERANCE) {
            warnings.push(format!("H / E identity off by {rel:e} (tolerance {HE_TOLERANCE:e})"));
        }
        Some(HeCheck { e: e.into(), h: h.into(), expected_phase: phase, relative_error: rel })
    } else {
        None
    };
    let out = SeriesOut {
        d: cfg.d,
        series: a.series,
        l: a.l,
        k: a.k,
        m: a.m,
        s_re: a.s_re,
        s_im: a.s_im,
        point: [p.z.re, p.z.im, p.lambda],
        bound: a.bound,
        n_terms: v.n_terms,
        value_re: v.value.re,
        value_im: v.value.im,
        tail_estimate: v.tail_estimate,
        tail_warning: v.tail_warning,
        he_check,
    };
    emit(cfg, out, warnings, cache)
}

#[derive(Serialize)]
struct FourierOut {
    l: u32,
    k: i32,
    m: i32,
    lambda: f64,
    s_re: f64,
    s_im: f64,
    w: [i64; 2],
    w_complex: Cx,
    bound: f64,
    order: usize,
    value: Cx,
    tail_estimate: f64,
    n_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_term: Option<ConstantTermCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay: Option<Vec<DecayRow>>,
}

#[derive(Serialize)]
struct ConstantTermCheck {
    /// `λ^{1+s} + φ(s)·λ^{1−s}`.
    alpha: Cx,
    index: usize,
    /// `|b − α|`; the coefficient of `E^0_00` is `α` itself.
    abs_diff: f64,
    /// `tail_estimate + 1e-6`.
    tolerance: f64,
    within: bool,
    /// `index·b / α`, which equals the index.
    index_b_over_alpha: Cx,
}

#[derive(Serialize)]
struct DecayRow {
    n1: i64,
    abs_value: f64,
}

fn cmd_fourier(cfg: &RunConfig, ring: &RingSpec, conv: IndexConvention, a: &FourierArgs) -> Result<Output, CliError> {
    let idx = HarmonicIndex::new(a.l, a.k, a.m)?;
    positive("lambda", a.lambda)?;
    let params = series_params(a.s_re, a.s_im, a.bound, conv)?;
    if a.order == 0 {
        return Err(invalid("--order must be positive"));
    }
    let (n1, n2) = parse_pair(&a.w)?;
    let dual = ring.dual_basis();
    let w = dual[0] * n1 as f64 + dual[1] * n2 as f64;
    let b = fourier_coeff(ring, idx, a.lambda, &params, w, a.order)?;
    let mut warnings = Vec::new();
    let constant = if idx == HarmonicIndex::SCALAR && (n1, n2) == (0, 0) {
        let alpha = constant_term(ring, a.lambda, params.s)?;
        let index = unipotent_index(ring, conv);
        let diff = (b.value - alpha).norm();
        let tol = b.tail_estimate + 1e-6;
        if diff > tol {
            warnings.push(format!("constant term differs from α by {diff:e} > {tol:e}"));
        }
        Some(ConstantTermCheck {
            alpha: alpha.into(),
            index,
            abs_diff: diff,
            tolerance: tol,
            within: diff <= tol,
            index_b_over_alpha: (b.value * index as f64 / alpha).into(),
        })
    } else {
        None
    };
    let decay = match a.decay {
        Some(n) => Some(
            (0..=n as i64)
                .map(|j| {
                    let v = fourier_coeff(ring, idx, a.lambda, &params, dual[0] * j as f64, a.order)?;
                    Ok(DecayRow { n1: j, abs_value: v.value.norm() })
                })
                .collect::<Result<Vec<_>, CliError>>()?,
        ),
        None => None,
    };
    let out = FourierOut {
        l: a.l,
        k: a.k,
        m: a.m,
        lambda: a.lambda,
        s_re: a.s_re,
        s_im: a.s_im,
        w: [n1, n2],
        w_complex: w.into(),
        bound: a.bound,
        order: b.order,
        value: b.value.into(),
        tail_estimate: b.tail_estimate,
        n_terms: b.n_terms,
        constant_term: constant,
        decay,
    };
    emit(cfg, out, warnings, None)
}

#[derive(Serialize)]
struct ZetaOut {
    s_re: f64,
    s_im: f64,
    cutoff: i64,
    zeta: Cx,
    tail_bound: f64,
    phi: Cx,
    volume_psl: f64,
    /// `|Λ| / Vol`, the residue of the PSL classical series at `s = 1`.
    residue_psl: f64,
}

fn cmd_zeta(cfg: &RunConfig, ring: &RingSpec, a: &ZetaArgs) -> Result<Output, CliError> {
    if !(a.s_re > 1.0) || !a.s_im.is_finite() {
        return Err(invalid("zeta needs Re s > 1"));
    }
    let s = Complex64::new(a.s_re, a.s_im);
    let z = dedekind_zeta(ring, s, a.cutoff)?;
    let phi = scattering_phi_at(ring, s, a.cutoff)?;
    let vol = orbifold_volume(ring);
    let out = ZetaOut {
        s_re: a.s_re,
        s_im: a.s_im,
        cutoff: a.cutoff,
        zeta: z.value.into(),
        tail_bound: z.tail_bound,
        phi: phi.into(),
        volume_psl: vol,
        residue_psl: ring.covolume() / vol,
    };
    emit(cfg, out, Vec::new(), None)
}

#[derive(Serialize)]
struct CertificateOut {
    omega_lo: f64,
    omega_hi: f64,
    rows_examined: usize,
    translates: usize,
}

#[derive(Serialize)]
struct EquidistOut {
    center: [f64; 3],
    frame: [Cx; 2],
    spatial_radius: f64,
    directional_radius: f64,
    amplitude: Cx,
    lambdas: Vec<f64>,
    values: Vec<Cx>,
    orders: Vec<usize>,
    quadrature_errors: Vec<f64>,
    certificates: Vec<CertificateOut>,
    reference: Cx,
    reference_error: f64,
    deltas: Vec<Cx>,
    delta_abs: Vec<f64>,
    evaluations: Vec<usize>,
    slope: Option<f64>,
    fitted_points: usize,
    interpretation: &'static str,
    notes: Vec<String>,
}

const TREND: &str = "The slope of log|delta| against log(lambda) measures the weak-convergence trend of \
nu(lambda) toward nu over this grid; a positive value means the deltas shrink as lambda decreases. \
It is not an estimate of the asymptotic decay exponents, which are out of reach at these heights.";

/// Bump center and frame: the given point with the identity frame, or, with a
/// seed, the point moved by up to 0.05 in `x`, `y` and `log λ` and a random
/// `SU(2)` frame.
pub fn bump_center(p: &PointH3, seed: Option<u64>) -> (PointH3, Su2) {
    let Some(seed) = seed else {
        return (*p, Su2::IDENTITY);
    };
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut j = || g.gen_range(-0.05..0.05);
    let z = p.z + Complex64::new(j(), j());
    let lambda = p.lambda * j().exp();
    let v: [f64; 4] = std::array::from_fn(|_| g.gen_range(-1.0..1.0));
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let k = Su2 { alpha: Complex64::new(v[0] / n, v[1] / n), beta: Complex64::new(v[2] / n, v[3] / n) };
    (PointH3 { z, lambda }, k)
}

/// The equidistribution run, returned as the core report and the CSV text.
pub fn equidist_report(ring: &RingSpec, a: &EquidistArgs, seed: Option<u64>) -> Result<(MeasureReport, PoincareBump), CliError> {
    let p = parse_point(&a.point)?;
    let grid = parse_grid(&a.grid)?;
    positive("rs", a.rs)?;
    if a.order < 2 || a.liouville_order == 0 || a.directional_order == 0 {
        return Err(invalid("quadrature orders must be positive (--order at least 2)"));
    }
    if a.max_rows == 0 {
        return Err(invalid("--max-rows must be positive"));
    }
    let (center, frame) = bump_center(&p, seed);
    let g0 = Mat2::point(&center).mul(&frame.to_mat2());
    let bump = PoincareBump::new(ring.clone(), g0, a.rs, a.rd, Complex64::new(a.amp_re, a.amp_im))?
        .with_max_rows(a.max_rows);
    let f = TestFunction::PoincareBump(bump.clone());
    let cfg = ExperimentConfig {
        grid,
        order: a.order,
        liouville: LiouvilleOrders { spatial: a.liouville_order, directional: a.directional_order },
    };
    Ok((equidistribution_experiment(ring, &f, &cfg)?, bump))
}

/// Flat CSV: `lambda,value_re,value_im,delta_abs`.
pub fn report_csv(rep: &MeasureReport) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Row {
        lambda: f64,
        value_re: f64,
        value_im: f64,
        delta_abs: f64,
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for i in 0..rep.lambdas.len() {
        w.serialize(Row {
            lambda: rep.lambdas[i],
            value_re: rep.values[i].re,
            value_im: rep.values[i].im,
            delta_abs: rep.deltas[i].norm(),
        })
        .map_err(|e| CliError::Io(format!("writing CSV: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(format!("writing CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(format!("writing CSV: {e}")))
}

fn cmd_equidist(cfg: &RunConfig, ring: &RingSpec, a: &EquidistArgs) -> Result<Output, CliError> {
    let (rep, bump) = equidist_report(ring, a, cfg.seed)?;
    let mut warnings = Vec::new();
    match rep.slope {
        None => warnings.push(format!("only {} grid points rose above the quadrature tolerance; no slope fitted", rep.fitted_points)),
        Some(s) if !(s > 0.0) => warnings.push(format!("fitted slope {s} is not positive")),
        Some(_) => {}
    }
    let p0 = bump.center_point();
    let k = bump_center(&parse_point(&a.point)?, cfg.seed).1;
    let out = EquidistOut {
        center: [p0.z.re, p0.z.im, p0.lambda],
        frame: [k.alpha.into(), k.beta.into()],
        spatial_radius: a.rs,
        directional_radius: a.rd,
        amplitude: bump.amplitude().into(),
        lambdas: rep.lambdas.clone(),
        values: rep.values.iter().map(|&v| v.into()).collect(),
        orders: rep.orders.clone(),
        quadrature_errors: rep.quadrature_errors.clone(),
        certificates: rep
            .certificates
            .iter()
            .map(|c| CertificateOut {
                omega_lo: c.omega_window.0,
                omega_hi: c.omega_window.1,
                rows_examined: c.rows_examined,
                translates: c.translates,
            })
            .collect(),
        reference: rep.reference.into(),
        reference_error: rep.reference_error,
        deltas: rep.deltas.iter().map(|&v| v.into()).collect(),
        delta_abs: rep.deltas.iter().map(|v| v.norm()).collect(),
        evaluations: rep.evaluations.clone(),
        slope: rep.slope,
        fitted_points: rep.fitted_points,
        interpretation: TREND,
        notes: rep.notes.clone(),
    };
    let mut o = emit(cfg, out, warnings, None)?;
    if let Some(path) = &a.csv {
        o.csv = Some((path.clone(), report_csv(&rep)?));
    }
    Ok(o)
}
