//! The directional 2D argument replayed on sampled fields, one step at a time.
//!
//! Each step of the chain — split expansion, moments traded for derivative
//! energies, vanishing mixed scalar parts, Cauchy–Schwarz and integration by
//! parts — is measured separately so a failure points at the step that broke.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{directional_bound_2d, directional_second_moment, spectral_second_moment, split_energies};
use crate::calculus::{directional_derivative2, partial_scalar2};
use crate::error::{Error, Result};
use crate::grid::{QField2, Spectrum2};
use crate::hypercomplex::Quaternion;
use crate::qft::{qft_fast, qft_split_parts, reflect_u1, relative_frobenius, Direction2};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofChain2 {
    /// `∫(a·x)²|f|² · ∫(b·ω)²|F{f}|²`.
    pub lhs_product: f64,
    /// `(A₋ + A₊)(B₋ + B₊)` from the split parts.
    pub split_expanded: f64,
    pub spatial_minus: f64,
    pub spatial_plus: f64,
    /// `∫(b·ω)²|F{f±}|²`.
    pub spectral_minus: f64,
    pub spectral_plus: f64,
    /// `(2π)² ∫|b·∇f₋|²` and `(2π)² ∫|b′·∇f₊|²`.
    pub derivative_minus: f64,
    pub derivative_plus: f64,
    /// `∫ Sc(a·x f₋ · b·∇f̃₋)` and `∫ Sc(a·x f₊ · b′·∇f̃₊)`.
    pub schwarz_minus: f64,
    pub schwarz_plus: f64,
    /// `∫ Sc(a·x f₋ · b′·∇f̃₊)` and `∫ Sc(a·x f₊ · b·∇f̃₋)`.
    pub cross_terms: [f64; 2],
    /// Cauchy–Schwarz scales `‖a·x f∓‖ ‖∇f±‖` of the two cross terms.
    pub cross_scales: [f64; 2],
    pub f_minus: f64,
    pub f_plus: f64,
    pub a_dot_b: f64,
    pub a_dot_b_prime: f64,
    pub bound: f64,
}

fn rel(gap: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        gap.abs() / scale
    } else {
        gap.abs()
    }
}

impl ProofChain2 {
    pub fn split_residual(&self) -> f64 {
        rel(self.lhs_product - self.split_expanded, self.lhs_product)
    }

    /// Largest relative gap between a spectral moment and its derivative energy.
    pub fn derivative_residual(&self) -> f64 {
        let scale = self.spectral_minus + self.spectral_plus;
        rel(self.spectral_minus - self.derivative_minus, scale)
            .max(rel(self.spectral_plus - self.derivative_plus, scale))
    }

    pub fn cross_residual(&self) -> f64 {
        rel(self.cross_terms[0], self.cross_scales[0]).max(rel(self.cross_terms[1], self.cross_scales[1]))
    }

    /// `A± · D± ≥ (2π)² S±²` for both parts.
    pub fn schwarz_holds(&self) -> bool {
        let c = (2.0 * PI).powi(2);
        self.spatial_minus * self.derivative_minus >= c * self.schwarz_minus.powi(2) * (1.0 - 1e-12)
            && self.spatial_plus * self.derivative_plus >= c * self.schwarz_plus.powi(2) * (1.0 - 1e-12)
    }

    /// Gap between `S₋, S₊` and `−½(a·b)F₋, −½(a·b′)F₊`, relative to the
    /// Cauchy–Schwarz scale of each term.
    pub fn integration_by_parts_residual(&self) -> f64 {
        let c = (2.0 * PI).powi(2);
        let scale_m = (self.spatial_minus * self.derivative_minus / c).sqrt();
        let scale_p = (self.spatial_plus * self.derivative_plus / c).sqrt();
        rel(self.schwarz_minus + 0.5 * self.a_dot_b * self.f_minus, scale_m)
            .max(rel(self.schwarz_plus + 0.5 * self.a_dot_b_prime * self.f_plus, scale_p))
    }

    /// The chain's final lower bound, `(2π)²[S₋² + S₊²]`.
    pub fn schwarz_bound(&self) -> f64 {
        (2.0 * PI).powi(2) * (self.schwarz_minus.powi(2) + self.schwarz_plus.powi(2))
    }
}

fn weighted_by(f: &QField2, a: Direction2) -> Vec<Quaternion> {
    f.nodes().zip(f.samples()).map(|((x1, x2), q)| *q * a.dot(x1, x2)).collect()
}

/// `cell · Σ Sc(p q̃)`.
fn sc_integral(p: &[Quaternion], q: &[Quaternion], cell: f64) -> f64 {
    cell * p.iter().zip(q).map(|(p, q)| (*p * q.conj()).scalar_part()).sum::<f64>()
}

fn l2(v: &[Quaternion], cell: f64) -> f64 {
    (cell * v.iter().map(|q| q.norm_sq()).sum::<f64>()).sqrt()
}

pub fn proof_chain_2d(f: &QField2, a: Direction2, b: Direction2) -> Result<ProofChain2> {
    let cell = f.spec().cell_area();
    let bp = reflect_u1(b);
    let (fm, fp) = f.split();
    let (sm, sp) = qft_split_parts(f)?;
    let whole = qft_fast(f)?;
    let energies = split_energies(f);

    let spatial_minus = directional_second_moment(&fm, a);
    let spatial_plus = directional_second_moment(&fp, a);
    let spectral_minus = spectral_second_moment(&sm, b);
    let spectral_plus = spectral_second_moment(&sp, b);

    let dm = directional_derivative2(&fm, b);
    let dp = directional_derivative2(&fp, bp);
    let c = (2.0 * PI).powi(2);

    let (xm, xp) = (weighted_by(&fm, a), weighted_by(&fp, a));
    Ok(ProofChain2 {
        lhs_product: directional_second_moment(f, a) * spectral_second_moment(&whole, b),
        split_expanded: (spatial_minus + spatial_plus) * (spectral_minus + spectral_plus),
        spatial_minus,
        spatial_plus,
        spectral_minus,
        spectral_plus,
        derivative_minus: c * dm.energy(),
        derivative_plus: c * dp.energy(),
        schwarz_minus: sc_integral(&xm, dm.samples(), cell),
        schwarz_plus: sc_integral(&xp, dp.samples(), cell),
        cross_terms: [sc_integral(&xm, dp.samples(), cell), sc_integral(&xp, dm.samples(), cell)],
        cross_scales: [l2(&xm, cell) * l2(dp.samples(), cell), l2(&xp, cell) * l2(dm.samples(), cell)],
        f_minus: energies.f_minus,
        f_plus: energies.f_plus,
        a_dot_b: a.dot_dir(&b),
        a_dot_b_prime: a.dot_dir(&bp),
        bound: directional_bound_2d(a, b, &energies),
    })
}

/// `(b·ω) F[m] j` at every frequency node.
fn times_b_omega_j(spectrum: &Spectrum2, b: Direction2) -> Result<Spectrum2> {
    let samples =
        spectrum.nodes().zip(spectrum.samples()).map(|((w1, w2), q)| *q * Quaternion::J * b.dot(w1, w2)).collect();
    Spectrum2::new(*spectrum.spec(), samples)
}

/// Relative Frobenius residuals of the two vector-differential identities
/// `F{b·∇f₋} = (b·ω) F{f₋} j` and `F{b′·∇f₊} = (b·ω) F{f₊} j`.
pub fn vector_differential_residuals(f: &QField2, b: Direction2) -> Result<[f64; 2]> {
    let (fm, fp) = f.split();
    let (sm, sp) = qft_split_parts(f)?;
    let lhs_m = qft_fast(&directional_derivative2(&fm, b))?;
    let lhs_p = qft_fast(&directional_derivative2(&fp, reflect_u1(b)))?;
    Ok([relative_frobenius(&lhs_m, &times_b_omega_j(&sm, b)?)?, relative_frobenius(&lhs_p, &times_b_omega_j(&sp, b)?)?])
}

/// Largest pointwise gap in `Sc(f± · b·∇f̃±) = ½ b·∇(f± f̃±)` over both split
/// parts, relative to `max|f±| · max|b·∇f±|`.
///
/// `f f̃` has twice the bandwidth of `f`, so the spectral derivative on the
/// right is exact only when the spectrum of `f` lies within half the band;
/// otherwise the residual measures aliasing of the square.
pub fn sc_derivative_residual(f: &QField2, b: Direction2) -> f64 {
    let spec = *f.spec();
    let (fm, fp) = f.split();
    [fm, fp]
        .iter()
        .map(|part| {
            let d = directional_derivative2(part, b);
            let sq: Vec<f64> = part.samples().iter().map(|q| (*q * q.conj()).scalar_part()).collect();
            let (d1, d2) = (partial_scalar2(&sq, &spec, 0), partial_scalar2(&sq, &spec, 1));
            let gap = part
                .samples()
                .iter()
                .zip(d.samples())
                .enumerate()
                .map(|(n, (p, dp))| ((*p * dp.conj()).scalar_part() - 0.5 * (b.a1 * d1[n] + b.a2 * d2[n])).abs())
                .fold(0.0, f64::max);
            rel(gap, part.max_norm() * d.max_norm())
        })
        .fold(0.0, f64::max)
}

/// `|Σ g (b·∇h) + Σ (b·∇g) h|` relative to its Cauchy–Schwarz scale; vanishes
/// for fields that decay at the boundary.
pub fn integration_by_parts_residual(g: &QField2, h: &QField2, b: Direction2) -> Result<f64> {
    if g.spec() != h.spec() {
        return Err(Error::GridMismatch("integration by parts needs both fields on one grid".into()));
    }
    let cell = g.spec().cell_area();
    let (dg, dh) = (directional_derivative2(g, b), directional_derivative2(h, b));
    let total: Quaternion = g
        .samples()
        .iter()
        .zip(dh.samples())
        .map(|(g, dh)| *g * *dh)
        .chain(dg.samples().iter().zip(h.samples()).map(|(dg, h)| *dg * *h))
        .sum::<Quaternion>()
        * cell;
    let scale = l2(g.samples(), cell) * l2(dh.samples(), cell) + l2(dg.samples(), cell) * l2(h.samples(), cell);
    Ok(rel(total.norm(), scale))
}
