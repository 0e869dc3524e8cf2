//! Spectral directional derivatives of sampled fields.
//!
//! Each real coefficient is differentiated independently with a plain
//! (uncentered) FFT, so these operators share no code path with the
//! hypercomplex transforms they are used to check.

use crate::fft::spectral_derivative;
use crate::grid::{Grid2Spec, QField2};
use crate::hypercomplex::Quaternion;
use crate::qft::Direction2;

fn component_planes(f: &QField2) -> [Vec<f64>; 4] {
    std::array::from_fn(|c| f.samples().iter().map(|q| q.to_array()[c]).collect())
}

/// `∂f/∂x_axis` for `axis ∈ {0, 1}`.
pub fn partial2(f: &QField2, axis: usize) -> QField2 {
    let spec: Grid2Spec = *f.spec();
    let shape = spec.shape();
    let h = spec.axes[axis].h;
    let planes = component_planes(f).map(|p| spectral_derivative(&p, &shape, axis, h));
    let samples =
        (0..spec.len()).map(|n| Quaternion::new(planes[0][n], planes[1][n], planes[2][n], planes[3][n])).collect();
    QField2::new(spec, samples).expect("derivative of a finite field is finite")
}

/// `(b·∇) f = b₁ ∂₁f + b₂ ∂₂f`.
pub fn directional_derivative2(f: &QField2, b: Direction2) -> QField2 {
    let (d1, d2) = (partial2(f, 0), partial2(f, 1));
    d1.zip_with(&d2, |p, q| p * b.a1 + q * b.a2).expect("same grid")
}

/// Spectral derivative of a real scalar field along `axis`.
pub fn partial_scalar2(values: &[f64], spec: &Grid2Spec, axis: usize) -> Vec<f64> {
    spectral_derivative(values, &spec.shape(), axis, spec.axes[axis].h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{sample_gaussian2, Gaussian2};

    #[test]
    fn gaussian_gradient() {
        let spec = Grid2Spec::square(64, 0.25).unwrap();
        let c0 = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let f = sample_gaussian2(&Gaussian2::isotropic(c0, 0.5), &spec).unwrap();
        let b = Direction2::new(0.6, -1.1);
        let d = directional_derivative2(&f, b);
        for (q, (x1, x2)) in d.samples().iter().zip(f.nodes()) {
            let want = c0 * (-(b.a1 * x1 + b.a2 * x2) * (-0.5 * (x1 * x1 + x2 * x2)).exp());
            assert!((*q - want).norm() < 1e-10);
        }
    }
}
