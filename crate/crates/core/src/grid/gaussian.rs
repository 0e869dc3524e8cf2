use serde::{Deserialize, Serialize};

use super::{Axis, Grid2Spec, Grid4Spec, MVField4, QField2};
use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector31, Quaternion};

/// `c0 · exp(−α₁x₁² − α₂x₂²)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian2 {
    pub c0: Quaternion,
    pub alpha: [f64; 2],
}

/// `c0 · exp(−α_t t² − α_x x² − α_y y² − α_z z²)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian4 {
    pub c0: Multivector31,
    pub alpha: [f64; 4],
}

impl Gaussian2 {
    pub fn isotropic(c0: Quaternion, alpha: f64) -> Self {
        Self { c0, alpha: [alpha; 2] }
    }
}

impl Gaussian4 {
    pub fn isotropic(c0: Multivector31, alpha: f64) -> Self {
        Self { c0, alpha: [alpha; 4] }
    }
}

fn check_alphas(alpha: &[f64]) -> Result<()> {
    match alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        Some(&a) => Err(Error::InvalidAlpha(a)),
        None => Ok(()),
    }
}

/// Warns when an axis does not reach 6σ of the envelope `exp(−αx²)`.
fn warn_on_coverage(axes: &[Axis], alpha: &[f64]) {
    for (dim, (axis, &a)) in axes.iter().zip(alpha).enumerate() {
        let needed = 6.0 / (2.0 * a).sqrt();
        if axis.half_extent() < needed {
            log::warn!(
                "axis {dim}: half extent {:.3} is below 6σ = {needed:.3}; truncation will bias moments",
                axis.half_extent()
            );
        }
    }
}

pub fn sample_gaussian2(g: &Gaussian2, spec: &Grid2Spec) -> Result<QField2> {
    check_alphas(&g.alpha)?;
    warn_on_coverage(&spec.axes, &g.alpha);
    let [a1, a2] = g.alpha;
    Ok(QField2::from_fn(*spec, |x1, x2| g.c0 * (-a1 * x1 * x1 - a2 * x2 * x2).exp()))
}

pub fn sample_gaussian4(g: &Gaussian4, spec: &Grid4Spec) -> Result<MVField4> {
    check_alphas(&g.alpha)?;
    warn_on_coverage(&spec.axes, &g.alpha);
    Ok(MVField4::from_fn(*spec, |x| {
        let exponent: f64 = x.iter().zip(g.alpha).map(|(c, a)| -a * c * c).sum();
        g.c0 * exponent.exp()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn centre_value_is_c0() {
        let spec = Grid2Spec::square(16, 0.5).unwrap();
        let f = sample_gaussian2(&Gaussian2::isotropic(Quaternion::ONE, 0.5), &spec).unwrap();
        assert_eq!(f.get(8, 8), Quaternion::ONE);
    }

    #[test]
    fn discrete_energy_matches_closed_form() {
        // ∫ e^{−x²} d²x = π
        let spec = Grid2Spec::square(128, 0.125).unwrap();
        let f = sample_gaussian2(&Gaussian2::isotropic(Quaternion::ONE, 0.5), &spec).unwrap();
        assert!((f.energy() - PI).abs() < 1e-6);
    }

    #[test]
    fn k_valued_constant() {
        let spec = Grid2Spec::square(16, 0.5).unwrap();
        let f = sample_gaussian2(&Gaussian2::isotropic(Quaternion::K, 0.5), &spec).unwrap();
        for (q, (x, y)) in f.samples().iter().zip(f.nodes()) {
            assert_eq!((q.r, q.i, q.j), (0.0, 0.0, 0.0));
            assert!((q.k - (-0.5 * (x * x + y * y)).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn rejects_non_positive_alpha() {
        let spec = Grid2Spec::square(8, 1.0).unwrap();
        let bad = Gaussian2 { c0: Quaternion::ONE, alpha: [0.5, 0.0] };
        assert!(matches!(sample_gaussian2(&bad, &spec), Err(Error::InvalidAlpha(_))));
        let spec4 = Grid4Spec::cube(8, 1.0).unwrap();
        let bad4 = Gaussian4 { c0: Multivector31::scalar(1.0), alpha: [0.5, 0.5, -1.0, 0.5] };
        assert!(matches!(sample_gaussian4(&bad4, &spec4), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn four_d_energy() {
        // ∫ e^{−|x|²} d⁴x = π²
        let spec = Grid4Spec::cube(16, 0.6).unwrap();
        let f = sample_gaussian4(&Gaussian4::isotropic(Multivector31::scalar(1.0), 0.5), &spec).unwrap();
        assert!((f.energy() - PI * PI).abs() < 1e-6);
    }
}
