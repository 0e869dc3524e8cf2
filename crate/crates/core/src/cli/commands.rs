use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::output::{emit, emit_one};
use super::{BoundChoice, Command, Format, Outcome, RunConfig, Source, TransformKind};
use crate::error::{Error, Result};
use crate::grid::{
    random_packets2, random_packets4, read_any_field, sample_gaussian2, sample_gaussian4, write_csv2, write_csv4,
    write_field2, write_field4, AnyField, Domain, Field2, Field4, Gaussian2, Gaussian4, Grid2Spec, Grid4Spec, MVField4,
    PacketConfig, QField2, Spectrum2, Spectrum4,
};
use crate::hypercomplex::{Multivector31, Quaternion, BLADE_COUNT};
use crate::identities::{run_identity_suite, IdentityCheck};
use crate::qft::{
    qft_brute, qft_fast, qft_inverse, qft_right_sided, qft_right_sided_brute, qft_split_parts, Direction2,
};
use crate::sft::{sft_brute, sft_fast, sft_inverse, wave_packets, Direction4};
use crate::uncertainty::{
    component_up_check_with, split_energies, sweep_directions_2d, verify_directional_up_2d_with,
    verify_directional_up_4d_with, Bound4, EnergyReport, SweepRow, UncertaintyReport, VerifyOptions,
    DEFAULT_EQUALITY_TOL, DEFAULT_SLACK,
};

/// Tolerances for transform self-checks.
const TOL_2D: f64 = 1e-10;
const TOL_4D: f64 = 1e-9;
const TOL_SPLIT: f64 = 1e-12;

type QftFn = fn(&QField2) -> Result<Spectrum2>;

pub(super) fn run(mut cfg: RunConfig) -> Result<Outcome> {
    cfg.format = Some(cfg.format.unwrap_or_default());
    match cfg.command.expect("command resolved before dispatch") {
        Command::GenGaussian => gen_gaussian(cfg),
        Command::Transform => transform(cfg),
        Command::Split => split(cfg),
        Command::Packets => packets(cfg),
        Command::Verify2d => verify_2d(cfg),
        Command::Verify4d => verify_4d(cfg),
        Command::VerifyComponent => verify_component(cfg),
        Command::Sweep => sweep(cfg),
        Command::CheckIdentities => check_identities(cfg),
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    }
}

enum Loaded {
    Two(QField2),
    Four(MVField4),
}

impl Loaded {
    fn dim(&self) -> usize {
        match self {
            Loaded::Two(_) => 2,
            Loaded::Four(_) => 4,
        }
    }

    fn into_two(self) -> Result<QField2> {
        match self {
            Loaded::Two(f) => Ok(f),
            Loaded::Four(_) => Err(Error::GridMismatch("this command needs a 2D quaternion field".into())),
        }
    }

    fn into_four(self) -> Result<MVField4> {
        match self {
            Loaded::Four(f) => Ok(f),
            Loaded::Two(_) => Err(Error::GridMismatch("this command needs a 4D multivector field".into())),
        }
    }
}

/// `(n, h)` used when the grid is not given.
fn default_grid(dim: usize, source: Source) -> (usize, f64) {
    match (dim, source) {
        (2, Source::Gaussian) => (128, 0.125),
        (2, Source::Random) => (64, 0.3),
        (_, Source::Gaussian) => (16, 0.6),
        // balanced 8-point axes
        (_, Source::Random) => (8, (2.0 * PI / 8.0).sqrt()),
    }
}

fn check_dim(dim: usize) -> Result<usize> {
    match dim {
        2 | 4 => Ok(dim),
        other => Err(invalid(format!("--dim must be 2 or 4, got {other}"))),
    }
}

/// Loads `--input` or generates the configured field, recording every
/// default it fills in back into `cfg`.
fn resolve_field(cfg: &mut RunConfig, default_dim: usize) -> Result<Loaded> {
    if cfg.input.is_none() {
        check_dim(cfg.dim.unwrap_or(default_dim))?;
    }
    if let Some(path) = &cfg.input {
        let loaded = match read_any_field(path)? {
            AnyField::Quaternion2(f) => Loaded::Two(f),
            AnyField::Multivector4(f) => Loaded::Four(f),
        };
        if let Some(d) = cfg.dim.filter(|&d| d != loaded.dim()) {
            return Err(invalid(format!("--dim {d} conflicts with the {}D field in {}", loaded.dim(), path.display())));
        }
        cfg.dim = Some(loaded.dim());
        return Ok(loaded);
    }
    let dim = check_dim(cfg.dim.unwrap_or(default_dim))?;
    let source = cfg.source.unwrap_or_default();
    let (n_default, h_default) = default_grid(dim, source);
    let n = *cfg.n.get_or_insert(n_default);
    let h = *cfg.h.get_or_insert(h_default);
    cfg.dim = Some(dim);
    cfg.source = Some(source);
    match source {
        Source::Gaussian => {
            let alpha = expand_alpha(cfg.alpha.get_or_insert_with(|| vec![0.5]), dim)?;
            let c0 = cfg.c0.get_or_insert_with(|| vec![1.0]).clone();
            if dim == 2 {
                let spec = Grid2Spec::square(n, h)?;
                let g = Gaussian2 { c0: quaternion_from(&c0)?, alpha: [alpha[0], alpha[1]] };
                Ok(Loaded::Two(sample_gaussian2(&g, &spec)?))
            } else {
                let spec = Grid4Spec::cube(n, h)?;
                let g = Gaussian4 { c0: multivector_from(&c0)?, alpha: [alpha[0], alpha[1], alpha[2], alpha[3]] };
                Ok(Loaded::Four(sample_gaussian4(&g, &spec)?))
            }
        }
        Source::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.expect("seed resolved"));
            if dim == 2 {
                Ok(Loaded::Two(random_packets2(&Grid2Spec::square(n, h)?, &PacketConfig::default(), &mut rng)))
            } else {
                Ok(Loaded::Four(random_packets4(&Grid4Spec::cube(n, h)?, &PacketConfig::coarse(), &mut rng)))
            }
        }
    }
}

fn expand_alpha(alpha: &[f64], dim: usize) -> Result<Vec<f64>> {
    match alpha.len() {
        1 => Ok(vec![alpha[0]; dim]),
        len if len == dim => Ok(alpha.to_vec()),
        len => Err(invalid(format!("--alpha takes 1 or {dim} values, got {len}"))),
    }
}

fn quaternion_from(c: &[f64]) -> Result<Quaternion> {
    match c {
        [s] => Ok(Quaternion::from_scalar(*s)),
        [r, i, j, k] => Ok(Quaternion::new(*r, *i, *j, *k)),
        _ => Err(invalid(format!("--c0 takes 1 or 4 values for a 2D field, got {}", c.len()))),
    }
}

fn multivector_from(c: &[f64]) -> Result<Multivector31> {
    match c.len() {
        1 => Ok(Multivector31::scalar(c[0])),
        BLADE_COUNT => Ok(Multivector31::new(c.try_into().expect("length checked"))),
        len => Err(invalid(format!("--c0 takes 1 or 16 values for a 4D field, got {len}"))),
    }
}

fn direction2(v: &mut Option<Vec<f64>>, flag: &str) -> Result<Direction2> {
    match v.get_or_insert_with(|| vec![1.0, 0.0]).as_slice() {
        [a1, a2] => Ok(Direction2::new(*a1, *a2)),
        other => Err(invalid(format!("--{flag} takes 2 components in 2D, got {}", other.len()))),
    }
}

fn direction4(v: &mut Option<Vec<f64>>, flag: &str) -> Result<Direction4> {
    match v.get_or_insert_with(|| vec![1.0, 0.0, 0.0, 0.0]).as_slice() {
        [t, a1, a2, a3] => Ok(Direction4::new(*t, *a1, *a2, *a3)),
        other => Err(invalid(format!("--{flag} takes 4 components (t, x, y, z) in 4D, got {}", other.len()))),
    }
}

fn verify_options(cfg: &mut RunConfig, four_d: bool) -> VerifyOptions {
    let bound4 = if four_d {
        match *cfg.bound.get_or_insert(BoundChoice::default()) {
            BoundChoice::Stated => Bound4::Stated,
            BoundChoice::PacketConsistent => Bound4::PacketConsistent,
        }
    } else {
        Bound4::Stated
    };
    VerifyOptions {
        slack: *cfg.slack.get_or_insert(DEFAULT_SLACK),
        equality_tol: *cfg.equality_tol.get_or_insert(DEFAULT_EQUALITY_TOL),
        recenter: *cfg.recenter.get_or_insert(false),
        bound4,
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn write2<D: Domain>(path: &Path, f: &Field2<D>) -> Result<()> {
    if is_csv(path) {
        write_csv2(path, f)
    } else {
        write_field2(path, f)
    }
}

fn write4<D: Domain>(path: &Path, f: &Field4<D>) -> Result<()> {
    if is_csv(path) {
        write_csv4(path, f)
    } else {
        write_field4(path, f)
    }
}

#[derive(Serialize)]
struct GridSummary {
    shape: Vec<usize>,
    spacing: Vec<f64>,
}

impl GridSummary {
    fn of2(spec: &Grid2Spec) -> Self {
        Self { shape: spec.shape().to_vec(), spacing: spec.axes.iter().map(|a| a.h).collect() }
    }

    fn of4(spec: &Grid4Spec) -> Self {
        Self { shape: spec.shape().to_vec(), spacing: spec.axes.iter().map(|a| a.h).collect() }
    }
}

#[derive(Serialize)]
struct FieldReport {
    output: PathBuf,
    grid: GridSummary,
    energies: EnergyReport,
    boundary_ratio: f64,
}

fn gen_gaussian(mut cfg: RunConfig) -> Result<Outcome> {
    let output = cfg.output.clone().ok_or_else(|| invalid("gen-gaussian needs --output FILE"))?;
    let report = match resolve_field(&mut cfg, 2)? {
        Loaded::Two(f) => {
            write2(&output, &f)?;
            FieldReport {
                output,
                grid: GridSummary::of2(f.spec()),
                energies: split_energies(&f),
                boundary_ratio: f.boundary_ratio(),
            }
        }
        Loaded::Four(f) => {
            write4(&output, &f)?;
            FieldReport {
                output,
                grid: GridSummary::of4(f.spec()),
                energies: split_energies(&f),
                boundary_ratio: f.boundary_ratio(),
            }
        }
    };
    emit_one(&cfg, &report)?;
    Ok(Outcome::Success)
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    Fast,
    Brute,
    Compare,
}

#[derive(Serialize)]
struct TransformReport {
    kind: TransformKind,
    method: Method,
    grid: GridSummary,
    input_energy: f64,
    output_energy: f64,
    parseval_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_relative_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    round_trip_error: Option<f64>,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
}

/// `max |x − y| / max |y|` over paired samples.
fn max_relative_deviation(x: impl Iterator<Item = f64>, y_max: f64) -> f64 {
    let worst = x.fold(0.0, f64::max);
    if y_max > 0.0 {
        worst / y_max
    } else {
        worst
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if b != 0.0 {
        (a - b).abs() / b.abs()
    } else {
        (a - b).abs()
    }
}

fn transform(mut cfg: RunConfig) -> Result<Outcome> {
    let default_dim = match cfg.kind {
        Some(TransformKind::Sft | TransformKind::SftInverse) => 4,
        Some(_) => 2,
        None => cfg.dim.unwrap_or(2),
    };
    let compare = *cfg.compare.get_or_insert(false);
    let brute = *cfg.brute.get_or_insert(compare);
    let fast = *cfg.fast.get_or_insert(compare || !brute);
    if !brute && !fast {
        return Err(invalid("--fast false with no --brute leaves nothing to run"));
    }
    let method = match (brute, fast) {
        (true, true) => Method::Compare,
        (true, false) => Method::Brute,
        _ => Method::Fast,
    };
    let inverse = matches!(cfg.kind, Some(TransformKind::QftInverse | TransformKind::SftInverse));
    if inverse && brute {
        return Err(invalid("inverse transforms have no direct-sum variant; drop --brute/--compare"));
    }
    let loaded = resolve_field(&mut cfg, default_dim)?;
    let kind = *cfg.kind.get_or_insert(if loaded.dim() == 2 { TransformKind::Qft } else { TransformKind::Sft });
    let read_as_spectrum = inverse && cfg.input.is_some();
    let output = cfg.output.clone();

    let report = match loaded {
        Loaded::Two(f) => {
            let grid = GridSummary::of2(f.spec());
            match kind {
                TransformKind::Qft | TransformKind::QftRight => {
                    let (fast_fn, brute_fn): (QftFn, QftFn) = if kind == TransformKind::Qft {
                        (qft_fast, qft_brute)
                    } else {
                        (qft_right_sided, qft_right_sided_brute)
                    };
                    let fast_s = if fast { Some(fast_fn(&f)?) } else { None };
                    let brute_s = if brute { Some(brute_fn(&f)?) } else { None };
                    let deviation = match (&fast_s, &brute_s) {
                        (Some(a), Some(b)) => Some(max_relative_deviation(
                            a.samples().iter().zip(b.samples()).map(|(x, y)| (*x - *y).norm()),
                            b.max_norm(),
                        )),
                        _ => None,
                    };
                    let s = fast_s.or(brute_s).expect("one method ran");
                    if let Some(path) = &output {
                        write2(path, &s)?;
                    }
                    transform_report(
                        kind,
                        method,
                        grid,
                        f.energy(),
                        s.parseval_energy(),
                        deviation,
                        None,
                        TOL_2D,
                        output,
                    )
                }
                TransformKind::QftInverse if read_as_spectrum => {
                    let s = Spectrum2::new(*f.spec(), f.into_samples())?;
                    let g = qft_inverse(&s)?;
                    if let Some(path) = &output {
                        write2(path, &g)?;
                    }
                    transform_report(kind, method, grid, s.parseval_energy(), g.energy(), None, None, TOL_2D, output)
                }
                TransformKind::QftInverse => {
                    let s = qft_fast(&f)?;
                    let g = qft_inverse(&s)?;
                    let err = g.checked_sub(&f)?.frobenius() / f.frobenius().max(f64::MIN_POSITIVE);
                    if let Some(path) = &output {
                        write2(path, &g)?;
                    }
                    transform_report(
                        kind,
                        method,
                        grid,
                        s.parseval_energy(),
                        g.energy(),
                        None,
                        Some(err),
                        TOL_2D,
                        output,
                    )
                }
                TransformKind::Sft | TransformKind::SftInverse => {
                    return Err(invalid(format!("--kind {kind:?} needs a 4D field").to_lowercase()))
                }
            }
        }
        Loaded::Four(f) => {
            let grid = GridSummary::of4(f.spec());
            match kind {
                TransformKind::Sft => {
                    let fast_s = if fast { Some(sft_fast(&f)?) } else { None };
                    let brute_s = if brute { Some(sft_brute(&f)?) } else { None };
                    let deviation = match (&fast_s, &brute_s) {
                        (Some(a), Some(b)) => Some(max_relative_deviation(
                            a.samples().iter().zip(b.samples()).map(|(x, y)| (*x - *y).norm()),
                            b.max_norm(),
                        )),
                        _ => None,
                    };
                    let s = fast_s.or(brute_s).expect("one method ran");
                    if let Some(path) = &output {
                        write4(path, &s)?;
                    }
                    transform_report(
                        kind,
                        method,
                        grid,
                        f.energy(),
                        s.parseval_energy(),
                        deviation,
                        None,
                        TOL_4D,
                        output,
                    )
                }
                TransformKind::SftInverse if read_as_spectrum => {
                    let s = Spectrum4::new(*f.spec(), f.into_samples())?;
                    let g = sft_inverse(&s)?;
                    if let Some(path) = &output {
                        write4(path, &g)?;
                    }
                    transform_report(kind, method, grid, s.parseval_energy(), g.energy(), None, None, TOL_4D, output)
                }
                TransformKind::SftInverse => {
                    let s = sft_fast(&f)?;
                    let g = sft_inverse(&s)?;
                    let err = g.checked_sub(&f)?.frobenius() / f.frobenius().max(f64::MIN_POSITIVE);
                    if let Some(path) = &output {
                        write4(path, &g)?;
                    }
                    transform_report(
                        kind,
                        method,
                        grid,
                        s.parseval_energy(),
                        g.energy(),
                        None,
                        Some(err),
                        TOL_4D,
                        output,
                    )
                }
                _ => return Err(invalid(format!("--kind {kind:?} needs a 2D field").to_lowercase())),
            }
        }
    };
    emit_one(&cfg, &report)?;
    Ok(verdict(report.passed))
}

#[allow(clippy::too_many_arguments)]
fn transform_report(
    kind: TransformKind,
    method: Method,
    grid: GridSummary,
    input_energy: f64,
    output_energy: f64,
    deviation: Option<f64>,
    round_trip: Option<f64>,
    tolerance: f64,
    output: Option<PathBuf>,
) -> TransformReport {
    let parseval_residual = rel_gap(output_energy, input_energy);
    let passed = parseval_residual <= tolerance
        && deviation.is_none_or(|d| d <= tolerance)
        && round_trip.is_none_or(|e| e <= tolerance);
    TransformReport {
        kind,
        method,
        grid,
        input_energy,
        output_energy,
        parseval_residual,
        max_relative_deviation: deviation,
        round_trip_error: round_trip,
        tolerance,
        passed,
        output,
    }
}

#[derive(Serialize)]
struct SplitReport {
    dim: usize,
    grid: GridSummary,
    energies: EnergyReport,
    additivity_residual: f64,
    reconstruction_residual: f64,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_minus: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_plus: Option<PathBuf>,
}

fn split(mut cfg: RunConfig) -> Result<Outcome> {
    let loaded = resolve_field(&mut cfg, 2)?;
    let (dim, grid, energies, reconstruction) = match loaded {
        Loaded::Two(f) => {
            let (m, p) = f.split();
            if let Some(path) = &cfg.out_minus {
                write2(path, &m)?;
            }
            if let Some(path) = &cfg.out_plus {
                write2(path, &p)?;
            }
            let gap = m.checked_add(&p)?.checked_sub(&f)?.frobenius() / f.frobenius().max(f64::MIN_POSITIVE);
            (2, GridSummary::of2(f.spec()), split_energies(&f), gap)
        }
        Loaded::Four(f) => {
            let (m, p) = f.split();
            if let Some(path) = &cfg.out_minus {
                write4(path, &m)?;
            }
            if let Some(path) = &cfg.out_plus {
                write4(path, &p)?;
            }
            let gap = m.checked_add(&p)?.checked_sub(&f)?.frobenius() / f.frobenius().max(f64::MIN_POSITIVE);
            (4, GridSummary::of4(f.spec()), split_energies(&f), gap)
        }
    };
    let additivity = energies.additivity_residual();
    let report = SplitReport {
        dim,
        grid,
        energies,
        additivity_residual: additivity,
        reconstruction_residual: reconstruction,
        tolerance: TOL_SPLIT,
        passed: additivity <= TOL_SPLIT && reconstruction <= TOL_SPLIT,
        out_minus: cfg.out_minus.clone(),
        out_plus: cfg.out_plus.clone(),
    };
    emit_one(&cfg, &report)?;
    Ok(verdict(report.passed))
}

#[derive(Serialize)]
struct PacketsReport {
    dim: usize,
    grid: GridSummary,
    field_energies: EnergyReport,
    /// Parseval energies of the `+` and `−` packets.
    plus_energy: f64,
    minus_energy: f64,
    reconstruction_residual: f64,
    modulus_residual: f64,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_plus: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    out_minus: Option<PathBuf>,
}

fn packets(mut cfg: RunConfig) -> Result<Outcome> {
    let loaded = resolve_field(&mut cfg, 4)?;
    let report = match loaded {
        Loaded::Four(f) => {
            let (p, m) = wave_packets(&f)?;
            let whole = sft_fast(&f)?;
            if let Some(path) = &cfg.out_plus {
                write4(path, &p)?;
            }
            if let Some(path) = &cfg.out_minus {
                write4(path, &m)?;
            }
            let recon = p.checked_add(&m)?.checked_sub(&whole)?.frobenius() / whole.frobenius().max(f64::MIN_POSITIVE);
            let modulus = whole
                .samples()
                .iter()
                .zip(p.samples().iter().zip(m.samples()))
                .map(|(w, (p, m))| (w.norm_sq() - p.norm_sq() - m.norm_sq()).abs())
                .fold(0.0, f64::max)
                / whole.max_norm().powi(2).max(f64::MIN_POSITIVE);
            packets_report(
                4,
                GridSummary::of4(f.spec()),
                split_energies(&f),
                p.parseval_energy(),
                m.parseval_energy(),
                recon,
                modulus,
                &cfg,
            )
        }
        Loaded::Two(f) => {
            let (m, p) = qft_split_parts(&f)?;
            let whole = qft_fast(&f)?;
            if let Some(path) = &cfg.out_plus {
                write2(path, &p)?;
            }
            if let Some(path) = &cfg.out_minus {
                write2(path, &m)?;
            }
            let recon = p.checked_add(&m)?.checked_sub(&whole)?.frobenius() / whole.frobenius().max(f64::MIN_POSITIVE);
            let modulus = whole
                .samples()
                .iter()
                .zip(p.samples().iter().zip(m.samples()))
                .map(|(w, (p, m))| (w.norm_sq() - p.norm_sq() - m.norm_sq()).abs())
                .fold(0.0, f64::max)
                / whole.max_norm().powi(2).max(f64::MIN_POSITIVE);
            packets_report(
                2,
                GridSummary::of2(f.spec()),
                split_energies(&f),
                p.parseval_energy(),
                m.parseval_energy(),
                recon,
                modulus,
                &cfg,
            )
        }
    };
    emit_one(&cfg, &report)?;
    Ok(verdict(report.passed))
}

#[allow(clippy::too_many_arguments)]
fn packets_report(
    dim: usize,
    grid: GridSummary,
    field_energies: EnergyReport,
    plus_energy: f64,
    minus_energy: f64,
    reconstruction_residual: f64,
    modulus_residual: f64,
    cfg: &RunConfig,
) -> PacketsReport {
    PacketsReport {
        dim,
        grid,
        field_energies,
        plus_energy,
        minus_energy,
        reconstruction_residual,
        modulus_residual,
        tolerance: TOL_SPLIT,
        passed: reconstruction_residual <= TOL_SPLIT && modulus_residual <= TOL_SPLIT,
        out_plus: cfg.out_plus.clone(),
        out_minus: cfg.out_minus.clone(),
    }
}

fn finish_verification(cfg: &RunConfig, report: &UncertaintyReport) -> Result<Outcome> {
    emit_one(cfg, report)?;
    Ok(verdict(report.satisfied))
}

/// Rejects a conflicting `--dim` before any field is generated.
fn require_dim(cfg: &RunConfig, dim: usize) -> Result<()> {
    match cfg.dim {
        Some(d) if d != dim => Err(invalid(format!("--dim {d} is not supported here; this command needs {dim}D"))),
        _ => Ok(()),
    }
}

fn verify_2d(mut cfg: RunConfig) -> Result<Outcome> {
    require_dim(&cfg, 2)?;
    let f = resolve_field(&mut cfg, 2)?.into_two()?;
    let a = direction2(&mut cfg.a, "a")?;
    let b = direction2(&mut cfg.b, "b")?;
    let opts = verify_options(&mut cfg, false);
    let report = verify_directional_up_2d_with(&f, a, b, &opts)?;
    finish_verification(&cfg, &report)
}

fn verify_4d(mut cfg: RunConfig) -> Result<Outcome> {
    require_dim(&cfg, 4)?;
    let f = resolve_field(&mut cfg, 4)?.into_four()?;
    let a = direction4(&mut cfg.a, "a")?;
    let b = direction4(&mut cfg.b, "b")?;
    let opts = verify_options(&mut cfg, true);
    let report = verify_directional_up_4d_with(&f, a, b, &opts)?;
    finish_verification(&cfg, &report)
}

fn verify_component(mut cfg: RunConfig) -> Result<Outcome> {
    require_dim(&cfg, 2)?;
    let f = resolve_field(&mut cfg, 2)?.into_two()?;
    let axis = *cfg.axis.get_or_insert(1);
    let opts = verify_options(&mut cfg, false);
    let report = component_up_check_with(&f, axis, &opts)?;
    finish_verification(&cfg, &report)
}

#[derive(Serialize)]
struct SweepReport<'a> {
    rows: &'a [SweepRow],
    all_satisfied: bool,
    #[serde(serialize_with = "ser_min_ratio")]
    min_ratio: f64,
}

fn ser_min_ratio<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn sweep(mut cfg: RunConfig) -> Result<Outcome> {
    require_dim(&cfg, 2)?;
    let f = resolve_field(&mut cfg, 2)?.into_two()?;
    let steps = *cfg.steps.get_or_insert(12);
    if steps == 0 {
        return Err(invalid("--steps must be at least 1"));
    }
    let opts = verify_options(&mut cfg, false);
    let angles: Vec<f64> = (0..steps).map(|i| PI * i as f64 / steps as f64).collect();
    let rows = sweep_directions_2d(&f, &angles, &angles, &opts)?;
    let report = SweepReport {
        rows: &rows,
        all_satisfied: rows.iter().all(|r| r.satisfied),
        min_ratio: rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
    };
    emit(&cfg, &report, &rows)?;
    Ok(verdict(report.all_satisfied))
}

#[derive(Serialize)]
struct IdentityReport<'a> {
    checks: &'a [IdentityCheck],
    passed: bool,
}

fn check_identities(cfg: RunConfig) -> Result<Outcome> {
    let checks = run_identity_suite(cfg.seed.expect("seed resolved"));
    let passed = checks.iter().all(|c| c.passed);
    if cfg.format == Some(Format::Json) || cfg.format.is_none() {
        emit(&cfg, &IdentityReport { checks: &checks, passed }, &checks)?;
    } else {
        emit(&cfg, &checks, &checks)?;
    }
    Ok(verdict(passed))
}
