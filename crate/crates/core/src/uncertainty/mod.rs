//! Directional moments, split energies, uncertainty bounds and verdicts.
//!
//! All moments are raw (about the origin) unless recentering is requested, in
//! which case the directional mean of the weight is subtracted first. Spectral
//! moments carry the plain frequency measure `Δω₁Δω₂` (or `Π Δω` in 4D); the
//! `(2π)ⁿ` factors live in the bounds.

mod proof;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{MVField4, QField2, Spectrum2, Spectrum4};
use crate::qft::{qft_fast, qft_right_sided, reflect_u1, Direction2};
use crate::sft::{sft_fast, Direction4};

pub use proof::{
    integration_by_parts_residual, proof_chain_2d, sc_derivative_residual, vector_differential_residuals, ProofChain2,
};

/// Default relative slack on `satisfied`.
pub const DEFAULT_SLACK: f64 = 1e-6;
/// Default tolerance on `|ratio − 1|` for flagging equality.
pub const DEFAULT_EQUALITY_TOL: f64 = 1e-2;
/// Boundary-to-peak ratio above which 2D moments are flagged as truncated.
pub const DECAY_WARN_2D: f64 = 1e-10;
/// Same for 4D fields.
pub const DECAY_WARN_4D: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub f_total: f64,
    pub f_minus: f64,
    pub f_plus: f64,
}

impl EnergyReport {
    /// `|F − F₋ − F₊| / F`.
    pub fn additivity_residual(&self) -> f64 {
        let gap = (self.f_total - self.f_minus - self.f_plus).abs();
        if self.f_total > 0.0 {
            gap / self.f_total
        } else {
            gap
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { f_total: self.f_total * s, f_minus: self.f_minus * s, f_plus: self.f_plus * s }
    }
}

/// Fields whose split-part energies can be measured.
pub trait SplitEnergies {
    fn split_energies(&self) -> EnergyReport;
}

impl SplitEnergies for QField2 {
    fn split_energies(&self) -> EnergyReport {
        let (minus, plus) = self.split();
        EnergyReport { f_total: self.energy(), f_minus: minus.energy(), f_plus: plus.energy() }
    }
}

impl SplitEnergies for MVField4 {
    fn split_energies(&self) -> EnergyReport {
        let (minus, plus) = self.split();
        EnergyReport { f_total: self.energy(), f_minus: minus.energy(), f_plus: plus.energy() }
    }
}

pub fn split_energies<F: SplitEnergies>(f: &F) -> EnergyReport {
    f.split_energies()
}

/// Direction as recorded in a report; 2D and 4D records are told apart by
/// their keys.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionRecord {
    Spacetime(Direction4),
    Planar(Direction2),
}

impl From<Direction2> for DirectionRecord {
    fn from(d: Direction2) -> Self {
        DirectionRecord::Planar(d)
    }
}

impl From<Direction4> for DirectionRecord {
    fn from(d: Direction4) -> Self {
        DirectionRecord::Spacetime(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportKind {
    #[serde(rename = "directional_2d")]
    Directional2d,
    #[serde(rename = "directional_4d")]
    Directional4d,
    #[serde(rename = "component")]
    Component,
}

/// Which energy weighting the 4D bound uses.
///
/// `Stated` is `(a_t b_t − a⃗·b⃗)² F₋² + (a_t b_t + a⃗·b⃗)² F₊²`.
/// `PacketConsistent` swaps the two coefficients, which is what the 2D proof
/// yields when carried through the packet phases `x⃗·ω⃗ ± tω_t`: the `−` packet
/// has no time flip, so its coefficient is the Euclidean pairing
/// `a_t b_t + a⃗·b⃗` of the two weight vectors `(a_t, −a⃗)` and `(b_t, −b⃗)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound4 {
    #[default]
    Stated,
    PacketConsistent,
}

impl fmt::Display for Bound4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound4::Stated => "stated",
            Bound4::PacketConsistent => "packet-consistent",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// `satisfied ⇔ lhs ≥ rhs·(1 − slack)`.
    pub slack: f64,
    /// `equality ⇔ |ratio − 1| < equality_tol`.
    pub equality_tol: f64,
    /// Subtract directional means before taking second moments.
    pub recenter: bool,
    pub bound4: Bound4,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { slack: DEFAULT_SLACK, equality_tol: DEFAULT_EQUALITY_TOL, recenter: false, bound4: Bound4::Stated }
    }
}

impl VerifyOptions {
    pub fn with_slack(slack: f64) -> Self {
        Self { slack, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("slack", self.slack), ("equality tolerance", self.equality_tol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub kind: ReportKind,
    pub lhs_product: f64,
    pub rhs_bound: f64,
    /// `lhs / rhs`, `+∞` when the bound vanishes; serialized as `"inf"` then.
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub ratio: f64,
    pub a: DirectionRecord,
    pub b: DirectionRecord,
    pub b_prime: DirectionRecord,
    pub energies: EnergyReport,
    pub satisfied: bool,
    pub slack_tolerance: f64,
    pub equality: bool,
    pub equality_tolerance: f64,
    pub spatial_moment: f64,
    pub spectral_moment: f64,
    pub boundary_ratio: f64,
    pub recentered: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound4: Option<Bound4>,
}

fn ser_ratio<S: Serializer>(ratio: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if ratio.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*ratio)
    }
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid ratio {t:?}"))),
    }
}

/// `lhs / rhs`, or `+∞` when `rhs ≤ 0`.
pub fn uncertainty_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else {
        f64::INFINITY
    }
}

struct Measured {
    kind: ReportKind,
    spatial: f64,
    spectral: f64,
    rhs: f64,
    a: DirectionRecord,
    b: DirectionRecord,
    b_prime: DirectionRecord,
    energies: EnergyReport,
    boundary_ratio: f64,
    bound4: Option<Bound4>,
}

impl Measured {
    fn into_report(self, opts: &VerifyOptions) -> UncertaintyReport {
        let lhs = self.spatial * self.spectral;
        let ratio = uncertainty_ratio(lhs, self.rhs);
        UncertaintyReport {
            kind: self.kind,
            lhs_product: lhs,
            rhs_bound: self.rhs,
            ratio,
            a: self.a,
            b: self.b,
            b_prime: self.b_prime,
            energies: self.energies,
            satisfied: lhs >= self.rhs * (1.0 - opts.slack),
            slack_tolerance: opts.slack,
            equality: (ratio - 1.0).abs() < opts.equality_tol,
            equality_tolerance: opts.equality_tol,
            spatial_moment: self.spatial,
            spectral_moment: self.spectral,
            boundary_ratio: self.boundary_ratio,
            recentered: opts.recenter,
            bound4: self.bound4,
        }
    }
}

/// `cell · Σ (w − μ)² m` over `(weight, mass)` pairs, with `μ` the
/// mass-weighted mean of `w` when recentering and 0 otherwise.
fn weighted_moment(pairs: impl Iterator<Item = (f64, f64)>, cell: f64, recenter: bool) -> f64 {
    if !recenter {
        return cell * pairs.map(|(w, m)| w * w * m).sum::<f64>();
    }
    let pairs: Vec<(f64, f64)> = pairs.collect();
    let mass: f64 = pairs.iter().map(|p| p.1).sum();
    let mean = if mass > 0.0 { pairs.iter().map(|(w, m)| w * m).sum::<f64>() / mass } else { 0.0 };
    cell * pairs.iter().map(|(w, m)| (w - mean) * (w - mean) * m).sum::<f64>()
}

/// `h₁h₂ Σ (a·x)² |f|²`.
pub fn directional_second_moment(f: &QField2, a: Direction2) -> f64 {
    directional_second_moment_with(f, a, false)
}

pub fn directional_second_moment_with(f: &QField2, a: Direction2, recenter: bool) -> f64 {
    let pairs = f.nodes().zip(f.samples()).map(|((x1, x2), q)| (a.dot(x1, x2), q.norm_sq()));
    weighted_moment(pairs, f.spec().cell_area(), recenter)
}

/// `Δω₁Δω₂ Σ (b·ω)² |F|²`.
pub fn spectral_second_moment(spectrum: &Spectrum2, b: Direction2) -> f64 {
    spectral_second_moment_with(spectrum, b, false)
}

pub fn spectral_second_moment_with(spectrum: &Spectrum2, b: Direction2, recenter: bool) -> f64 {
    let pairs = spectrum.nodes().zip(spectrum.samples()).map(|((w1, w2), q)| (b.dot(w1, w2), q.norm_sq()));
    weighted_moment(pairs, spectrum.spec().freq_cell_area(), recenter)
}

/// `Δt Δx Δy Δz Σ (a_t t − a⃗·x⃗)² ‖f‖²`.
pub fn spacetime_second_moment(f: &MVField4, a: Direction4) -> f64 {
    spacetime_second_moment_with(f, a, false)
}

pub fn spacetime_second_moment_with(f: &MVField4, a: Direction4, recenter: bool) -> f64 {
    let pairs = f.samples().iter().enumerate().map(|(n, m)| (a.weight(f.node(n)), m.norm_sq()));
    weighted_moment(pairs, f.spec().cell_volume(), recenter)
}

/// `Π Δω Σ (b_t ω_t − b⃗·ω⃗)² ‖F‖²`.
pub fn spacetime_spectral_second_moment(spectrum: &Spectrum4, b: Direction4) -> f64 {
    spacetime_spectral_second_moment_with(spectrum, b, false)
}

pub fn spacetime_spectral_second_moment_with(spectrum: &Spectrum4, b: Direction4, recenter: bool) -> f64 {
    let pairs = spectrum.samples().iter().enumerate().map(|(n, m)| (b.weight(spectrum.node(n)), m.norm_sq()));
    weighted_moment(pairs, spectrum.spec().freq_cell_volume(), recenter)
}

/// `(2π)²/4 [(a·b)² F₋² + (a·b′)² F₊²]` with `b′ = U₁b`.
pub fn directional_bound_2d(a: Direction2, b: Direction2, e: &EnergyReport) -> f64 {
    let ab = a.dot_dir(&b);
    let abp = a.dot_dir(&reflect_u1(b));
    (2.0 * PI).powi(2) / 4.0 * (ab * ab * e.f_minus * e.f_minus + abp * abp * e.f_plus * e.f_plus)
}

/// `(2π)⁴/4 [(a_t b_t − a⃗·b⃗)² F₋² + (a_t b_t + a⃗·b⃗)² F₊²]`.
pub fn directional_bound_4d(a: Direction4, b: Direction4, e: &EnergyReport) -> f64 {
    directional_bound_4d_variant(a, b, e, Bound4::Stated)
}

pub fn directional_bound_4d_variant(a: Direction4, b: Direction4, e: &EnergyReport, variant: Bound4) -> f64 {
    let tt = a.a_t * b.a_t;
    let ss = a.spatial_dot(&b);
    let (c_minus, c_plus) = match variant {
        Bound4::Stated => (tt - ss, tt + ss),
        Bound4::PacketConsistent => (tt + ss, tt - ss),
    };
    (2.0 * PI).powi(4) / 4.0 * (c_minus * c_minus * e.f_minus * e.f_minus + c_plus * c_plus * e.f_plus * e.f_plus)
}

fn warn_decay(boundary_ratio: f64, limit: f64, what: &str) {
    if boundary_ratio > limit {
        log::warn!(
            "{what}: boundary/peak ratio {boundary_ratio:.2e} exceeds {limit:.0e}; moments are truncated by the grid"
        );
    }
}

/// Checks the directional QFT uncertainty principle on `f`.
pub fn verify_directional_up_2d(f: &QField2, a: Direction2, b: Direction2, slack: f64) -> Result<UncertaintyReport> {
    verify_directional_up_2d_with(f, a, b, &VerifyOptions::with_slack(slack))
}

pub fn verify_directional_up_2d_with(
    f: &QField2,
    a: Direction2,
    b: Direction2,
    opts: &VerifyOptions,
) -> Result<UncertaintyReport> {
    opts.validate()?;
    check_direction2(a)?;
    check_direction2(b)?;
    let boundary_ratio = f.boundary_ratio();
    warn_decay(boundary_ratio, DECAY_WARN_2D, "verify-2d");
    let spectrum = qft_fast(f)?;
    let energies = f.split_energies();
    Ok(Measured {
        kind: ReportKind::Directional2d,
        spatial: directional_second_moment_with(f, a, opts.recenter),
        spectral: spectral_second_moment_with(&spectrum, b, opts.recenter),
        rhs: directional_bound_2d(a, b, &energies),
        a: a.into(),
        b: b.into(),
        b_prime: reflect_u1(b).into(),
        energies,
        boundary_ratio,
        bound4: None,
    }
    .into_report(opts))
}

/// Component-wise principle along axis `k ∈ {1, 2}` with the right-sided
/// transform: `∫x_k²|f|² · ∫ω_k²|F_r{f}|² ≥ (2π)²/4 F²`. `equality_tol`
/// flags `|ratio − 1| < equality_tol`; the slack is the default.
pub fn component_up_check(f: &QField2, k: usize, equality_tol: f64) -> Result<UncertaintyReport> {
    component_up_check_with(f, k, &VerifyOptions { equality_tol, ..VerifyOptions::default() })
}

pub fn component_up_check_with(f: &QField2, k: usize, opts: &VerifyOptions) -> Result<UncertaintyReport> {
    opts.validate()?;
    let dir = match k {
        1 => Direction2::E1,
        2 => Direction2::E2,
        _ => return Err(Error::InvalidArgument(format!("component axis must be 1 or 2, got {k}"))),
    };
    let boundary_ratio = f.boundary_ratio();
    warn_decay(boundary_ratio, DECAY_WARN_2D, "verify-component");
    let spectrum = qft_right_sided(f)?;
    let energies = f.split_energies();
    let total = energies.f_total;
    Ok(Measured {
        kind: ReportKind::Component,
        spatial: directional_second_moment_with(f, dir, opts.recenter),
        spectral: spectral_second_moment_with(&spectrum, dir, opts.recenter),
        rhs: (2.0 * PI).powi(2) / 4.0 * total * total,
        a: dir.into(),
        b: dir.into(),
        b_prime: dir.into(),
        energies,
        boundary_ratio,
        bound4: None,
    }
    .into_report(opts))
}

/// Checks the directional spacetime principle on `f` using the stated bound.
pub fn verify_directional_up_4d(f: &MVField4, a: Direction4, b: Direction4, slack: f64) -> Result<UncertaintyReport> {
    verify_directional_up_4d_with(f, a, b, &VerifyOptions::with_slack(slack))
}

pub fn verify_directional_up_4d_with(
    f: &MVField4,
    a: Direction4,
    b: Direction4,
    opts: &VerifyOptions,
) -> Result<UncertaintyReport> {
    opts.validate()?;
    check_direction4(a)?;
    check_direction4(b)?;
    let boundary_ratio = f.boundary_ratio();
    warn_decay(boundary_ratio, DECAY_WARN_4D, "verify-4d");
    let spectrum = sft_fast(f)?;
    let energies = f.split_energies();
    Ok(Measured {
        kind: ReportKind::Directional4d,
        spatial: spacetime_second_moment_with(f, a, opts.recenter),
        spectral: spacetime_spectral_second_moment_with(&spectrum, b, opts.recenter),
        rhs: directional_bound_4d_variant(a, b, &energies, opts.bound4),
        a: a.into(),
        b: b.into(),
        b_prime: b.reflect_time().into(),
        energies,
        boundary_ratio,
        bound4: Some(opts.bound4),
    }
    .into_report(opts))
}

/// One `(a, b)` pair of a direction sweep; `a` and `b` are unit vectors at
/// the given angles from `e₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub angle_a: f64,
    pub angle_b: f64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub ratio: f64,
    pub satisfied: bool,
}

/// Evaluates the 2D principle for every pair in `angles_a × angles_b`, with
/// one transform shared by all pairs.
pub fn sweep_directions_2d(
    f: &QField2,
    angles_a: &[f64],
    angles_b: &[f64],
    opts: &VerifyOptions,
) -> Result<Vec<SweepRow>> {
    opts.validate()?;
    warn_decay(f.boundary_ratio(), DECAY_WARN_2D, "sweep");
    let spectrum = qft_fast(f)?;
    let energies = f.split_energies();
    let mut rows = Vec::with_capacity(angles_a.len() * angles_b.len());
    for &angle_a in angles_a {
        let a = Direction2::from_angle(angle_a);
        let spatial = directional_second_moment_with(f, a, opts.recenter);
        for &angle_b in angles_b {
            let b = Direction2::from_angle(angle_b);
            let lhs = spatial * spectral_second_moment_with(&spectrum, b, opts.recenter);
            let rhs = directional_bound_2d(a, b, &energies);
            rows.push(SweepRow {
                angle_a,
                angle_b,
                lhs,
                rhs,
                ratio: uncertainty_ratio(lhs, rhs),
                satisfied: lhs >= rhs * (1.0 - opts.slack),
            });
        }
    }
    Ok(rows)
}

fn check_direction2(d: Direction2) -> Result<()> {
    if d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("direction ({}, {}) is not finite", d.a1, d.a2)))
    }
}

fn check_direction4(d: Direction4) -> Result<()> {
    if d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("direction {:?} is not finite", d.to_array())))
    }
}
