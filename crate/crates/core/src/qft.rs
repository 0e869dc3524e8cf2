//! Discrete double-sided and right-sided quaternion Fourier transforms.
//!
//! The double-sided transform on a centered grid is the Riemann sum
//!
//! ```text
//! F[m] = h₁h₂ Σ_n e^{−i x₁[n] ω₁[m]} f[n] e^{−j x₂[n] ω₂[m]}
//! ```
//!
//! and its inverse carries the matching `(2π)⁻² Δω₁Δω₂` weight.
//!
//! The fast path uses the ± split. Since `i f₋ = f₋ j` and `i f₊ = −f₊ j`, the
//! left kernel factor moves through each split part onto the right:
//!
//! ```text
//! F{f₋}(ω) = Σ f₋ e^{−j (x₁ω₁ + x₂ω₂)},   F{f₊}(ω) = Σ f₊ e^{−j (−x₁ω₁ + x₂ω₂)}
//! ```
//!
//! Writing `f∓ = ½(1∓k)·z∓` with `z₋ = (r−k) + j(i+j)` and `z₊ = (r+k) + j(j−i)`,
//! each part is one complex 2D DFT in the `j` plane, and the `+` part is read
//! back with `ω₁` reversed.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{centered_dft, centered_dft_all, flip_axis, Sign};
use crate::grid::{Grid2Spec, QField2, Spectrum2};
use crate::hypercomplex::Quaternion;

/// Default sample cap for the O(N²) brute-force sums (64²).
pub const DEFAULT_BRUTE_CAP_2D: usize = 64 * 64;

/// A constant direction `a₁e₁ + a₂e₂`; not necessarily unit length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Direction2 {
    pub a1: f64,
    pub a2: f64,
}

impl Direction2 {
    pub const E1: Direction2 = Direction2 { a1: 1.0, a2: 0.0 };
    pub const E2: Direction2 = Direction2 { a1: 0.0, a2: 1.0 };

    pub const fn new(a1: f64, a2: f64) -> Self {
        Self { a1, a2 }
    }

    /// Unit direction at angle `theta` from `e₁`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(&self, u1: f64, u2: f64) -> f64 {
        self.a1 * u1 + self.a2 * u2
    }

    pub fn dot_dir(&self, other: &Direction2) -> f64 {
        self.dot(other.a1, other.a2)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.a1 * s, self.a2 * s)
    }

    pub fn is_finite(&self) -> bool {
        self.a1.is_finite() && self.a2.is_finite()
    }
}

/// `U₁(b₁, b₂) = (−b₁, b₂)`.
pub fn reflect_u1(d: Direction2) -> Direction2 {
    Direction2::new(-d.a1, d.a2)
}

/// Reverses the `ω₁` axis of a spectrum, pairing node `m` with `N − m`.
pub fn spectrum_reflect_u1(spectrum: &Spectrum2) -> Spectrum2 {
    spectrum.reflect_u1()
}

fn check_cap(samples: usize, cap: usize) -> Result<()> {
    if samples > cap {
        return Err(Error::GridTooLarge { samples, cap });
    }
    Ok(())
}

/// `(cos θ, sin θ)` for `θ = u[n]·w[m]`, indexed `[n][m]`.
fn phase_table(nodes: &[f64], freqs: &[f64]) -> Vec<Vec<(f64, f64)>> {
    nodes
        .iter()
        .map(|&u| {
            freqs
                .iter()
                .map(|&w| {
                    let (s, c) = (u * w).sin_cos();
                    (c, s)
                })
                .collect()
        })
        .collect()
}

/// Direct double sum with the default cap.
pub fn qft_brute(f: &QField2) -> Result<Spectrum2> {
    qft_brute_with_cap(f, DEFAULT_BRUTE_CAP_2D)
}

pub fn qft_brute_with_cap(f: &QField2, cap: usize) -> Result<Spectrum2> {
    brute_sum(f, cap, |left, q, right| left * q * right)
}

/// Direct double sum of the right-sided kernel `f e^{−iω₁x₁} e^{−jω₂x₂}`.
pub fn qft_right_sided_brute(f: &QField2) -> Result<Spectrum2> {
    qft_right_sided_brute_with_cap(f, DEFAULT_BRUTE_CAP_2D)
}

pub fn qft_right_sided_brute_with_cap(f: &QField2, cap: usize) -> Result<Spectrum2> {
    brute_sum(f, cap, |left, q, right| q * left * right)
}

/// `F[m] = h₁h₂ Σ_n combine(e^{−i x₁ω₁}, f[n], e^{−j x₂ω₂})`.
#[allow(clippy::needless_range_loop)]
fn brute_sum(
    f: &QField2,
    cap: usize,
    combine: impl Fn(Quaternion, Quaternion, Quaternion) -> Quaternion,
) -> Result<Spectrum2> {
    let spec = *f.spec();
    check_cap(spec.len(), cap)?;
    let [a1, a2] = spec.axes;
    let t1 = phase_table(&a1.coords(), &a1.freqs());
    let t2 = phase_table(&a2.coords(), &a2.freqs());
    let measure = spec.cell_area();
    let mut out = Vec::with_capacity(spec.len());
    for m1 in 0..a1.n {
        for m2 in 0..a2.n {
            let mut acc = Quaternion::ZERO;
            for n1 in 0..a1.n {
                let (c1, s1) = t1[n1][m1];
                let left = Quaternion::new(c1, -s1, 0.0, 0.0);
                for n2 in 0..a2.n {
                    let (c2, s2) = t2[n2][m2];
                    let right = Quaternion::new(c2, 0.0, -s2, 0.0);
                    acc += combine(left, f.get(n1, n2), right);
                }
            }
            out.push(acc * measure);
        }
    }
    Ok(Spectrum2::from_parts(spec, out))
}

/// The `j`-plane coordinates `(z₋, z₊)` of a quaternion.
#[inline]
fn split_planes(q: Quaternion) -> (Complex64, Complex64) {
    (Complex64::new(q.r - q.k, q.i + q.j), Complex64::new(q.r + q.k, q.j - q.i))
}

/// `½(1−k)(a + jb)`
#[inline]
fn minus_from_plane(z: Complex64) -> Quaternion {
    Quaternion::new(0.5 * z.re, 0.5 * z.im, 0.5 * z.im, -0.5 * z.re)
}

/// `½(1+k)(a + jb)`
#[inline]
fn plus_from_plane(z: Complex64) -> Quaternion {
    Quaternion::new(0.5 * z.re, -0.5 * z.im, 0.5 * z.im, 0.5 * z.re)
}

/// Transformed `j`-plane arrays of the two split parts, with `ω₁` already
/// reversed on the `+` part. Both carry the measure `scale`.
fn split_plane_transform(
    spec: &Grid2Spec,
    samples: &[Quaternion],
    sign: Sign,
    scale: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let shape = spec.shape();
    let (mut zm, mut zp): (Vec<Complex64>, Vec<Complex64>) = samples.iter().map(|&q| split_planes(q)).unzip();
    match sign {
        Sign::Forward => {
            centered_dft_all(&mut zm, &shape, sign);
            centered_dft_all(&mut zp, &shape, sign);
            flip_axis(&mut zp, &shape, 0);
        }
        Sign::Inverse => {
            centered_dft_all(&mut zm, &shape, sign);
            flip_axis(&mut zp, &shape, 0);
            centered_dft_all(&mut zp, &shape, sign);
        }
    }
    for z in zm.iter_mut().chain(zp.iter_mut()) {
        *z *= scale;
    }
    (zm, zp)
}

/// Transforms of the two split parts, `(F{f₋}, F{f₊})`.
pub fn qft_split_parts(f: &QField2) -> Result<(Spectrum2, Spectrum2)> {
    let spec = *f.spec();
    spec.require_pow2()?;
    let (zm, zp) = split_plane_transform(&spec, f.samples(), Sign::Forward, spec.cell_area());
    Ok((
        Spectrum2::from_parts(spec, zm.into_iter().map(minus_from_plane).collect()),
        Spectrum2::from_parts(spec, zp.into_iter().map(plus_from_plane).collect()),
    ))
}

/// Fast double-sided QFT: two complex 2D FFTs via the ± split.
pub fn qft_fast(f: &QField2) -> Result<Spectrum2> {
    let spec = *f.spec();
    spec.require_pow2()?;
    let (zm, zp) = split_plane_transform(&spec, f.samples(), Sign::Forward, spec.cell_area());
    let samples = zm.into_iter().zip(zp).map(|(m, p)| minus_from_plane(m) + plus_from_plane(p)).collect();
    Ok(Spectrum2::from_parts(spec, samples))
}

/// Inverse of [`qft_fast`]:
/// `f[n] = (2π)⁻² Δω₁Δω₂ Σ_m e^{+i x₁ω₁} F[m] e^{+j x₂ω₂}`.
pub fn qft_inverse(spectrum: &Spectrum2) -> Result<QField2> {
    let spec = *spectrum.spec();
    spec.require_pow2()?;
    let scale = spec.freq_cell_area() / (2.0 * PI).powi(2);
    let (zm, zp) = split_plane_transform(&spec, spectrum.samples(), Sign::Inverse, scale);
    let samples = zm.into_iter().zip(zp).map(|(m, p)| minus_from_plane(m) + plus_from_plane(p)).collect();
    Ok(QField2::from_parts(spec, samples))
}

/// Fast right-sided QFT `Σ f e^{−iω₁x₁} e^{−jω₂x₂}`.
///
/// First pass along `x₁`: `f = (r + i q_i) + j(q_j − i q_k)`, so right
/// multiplication by `e^{−iθ}` is a DFT of two `i`-plane arrays. Second pass
/// along `x₂`: `g = (g_r + j g_j) + i(g_i + j g_k)`, two `j`-plane arrays.
pub fn qft_right_sided(f: &QField2) -> Result<Spectrum2> {
    let spec = *f.spec();
    spec.require_pow2()?;
    let shape = spec.shape();

    let (mut u, mut v): (Vec<Complex64>, Vec<Complex64>) =
        f.samples().iter().map(|q| (Complex64::new(q.r, q.i), Complex64::new(q.j, -q.k))).unzip();
    centered_dft(&mut u, &shape, &[0], Sign::Forward);
    centered_dft(&mut v, &shape, &[0], Sign::Forward);

    // g = U + jV = (u_re, u_im, v_re, −v_im)
    let (mut p, mut s): (Vec<Complex64>, Vec<Complex64>) =
        u.iter().zip(&v).map(|(uu, vv)| (Complex64::new(uu.re, vv.re), Complex64::new(uu.im, -vv.im))).unzip();
    centered_dft(&mut p, &shape, &[1], Sign::Forward);
    centered_dft(&mut s, &shape, &[1], Sign::Forward);

    let measure = spec.cell_area();
    let samples = p.iter().zip(&s).map(|(pp, ss)| Quaternion::new(pp.re, ss.re, pp.im, ss.im) * measure).collect();
    Ok(Spectrum2::from_parts(spec, samples))
}

/// Relative Frobenius distance `‖a − b‖ / ‖b‖` (absolute when `b` vanishes).
pub fn relative_frobenius(a: &Spectrum2, b: &Spectrum2) -> Result<f64> {
    let diff = a.checked_sub(b)?.frobenius();
    let base = b.frobenius();
    Ok(if base > 0.0 { diff / base } else { diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{random_packets2, sample_gaussian2, Gaussian2, PacketConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(n: usize, seed: u64) -> QField2 {
        let spec = Grid2Spec::square(n, (2.0 * PI / n as f64).sqrt()).unwrap();
        random_packets2(&spec, &PacketConfig::default(), &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// i.i.d. coefficients, no smoothness at all.
    fn noise_field(spec: Grid2Spec, seed: u64) -> QField2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        QField2::from_fn(spec, |_, _| Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))))
    }

    #[test]
    fn delta_at_origin_has_flat_spectrum() {
        let spec = Grid2Spec::square(16, 0.5).unwrap();
        let mut samples = vec![Quaternion::ZERO; spec.len()];
        samples[spec.index(8, 8)] = Quaternion::from_scalar(1.0 / spec.cell_area());
        let f = QField2::new(spec, samples).unwrap();
        for spectrum in [qft_brute(&f).unwrap(), qft_fast(&f).unwrap(), qft_right_sided(&f).unwrap()] {
            for q in spectrum.samples() {
                assert!((*q - Quaternion::ONE).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let f = QField2::zeros(Grid2Spec::square(8, 1.0).unwrap());
        assert!(qft_brute(&f).unwrap().samples().iter().all(|q| *q == Quaternion::ZERO));
        assert!(qft_fast(&f).unwrap().samples().iter().all(|q| *q == Quaternion::ZERO));
        let back = qft_inverse(&Spectrum2::zeros(*f.spec())).unwrap();
        assert!(back.samples().iter().all(|q| *q == Quaternion::ZERO));
    }

    #[test]
    fn gaussian_spectrum_closed_form() {
        // ∫ e^{−x²/2} e^{−ixω} dx = √(2π) e^{−ω²/2} per axis
        let spec = Grid2Spec::square(32, 0.5).unwrap();
        let f = sample_gaussian2(&Gaussian2::isotropic(Quaternion::ONE, 0.5), &spec).unwrap();
        for spectrum in [qft_brute(&f).unwrap(), qft_fast(&f).unwrap()] {
            for (q, (w1, w2)) in spectrum.samples().iter().zip(spectrum.nodes()) {
                let want = 2.0 * PI * (-0.5 * (w1 * w1 + w2 * w2)).exp();
                if want > 1e-3 * 2.0 * PI {
                    assert!((*q - Quaternion::from_scalar(want)).norm() <= 1e-6 * want);
                }
            }
        }
    }

    #[test]
    fn fast_matches_brute_on_noise_and_packets() {
        for seed in 0..4 {
            let f = noise_field(Grid2Spec::new(16, 8, 0.4, 0.7).unwrap(), seed);
            let err = relative_frobenius(&qft_fast(&f).unwrap(), &qft_brute(&f).unwrap()).unwrap();
            assert!(err < 1e-12, "seed {seed}: {err}");
            let g = random_field(16, seed);
            let err = relative_frobenius(&qft_fast(&g).unwrap(), &qft_brute(&g).unwrap()).unwrap();
            assert!(err < 1e-12, "seed {seed}: {err}");
        }
    }

    #[test]
    fn right_sided_fast_matches_brute() {
        for seed in 0..4 {
            let f = noise_field(Grid2Spec::new(8, 16, 0.5, 0.3).unwrap(), 100 + seed);
            let err = relative_frobenius(&qft_right_sided(&f).unwrap(), &qft_right_sided_brute(&f).unwrap()).unwrap();
            assert!(err < 1e-12, "{err}");
        }
    }

    #[test]
    fn right_and_double_sided_agree_on_real_fields() {
        let spec = Grid2Spec::square(16, 0.5).unwrap();
        let f = noise_field(spec, 5).map(|q| Quaternion::from_scalar(q.r));
        let err = relative_frobenius(&qft_right_sided(&f).unwrap(), &qft_fast(&f).unwrap()).unwrap();
        assert!(err < 1e-13);
        let g = noise_field(spec, 6);
        let err = relative_frobenius(&qft_right_sided(&g).unwrap(), &qft_fast(&g).unwrap()).unwrap();
        assert!(err > 1e-3, "non-real fields must distinguish the two kernels");
    }

    #[test]
    fn plus_free_field_lands_in_minus_plane() {
        let (minus, _) = noise_field(Grid2Spec::square(16, 0.5).unwrap(), 8).split();
        let spectrum = qft_fast(&minus).unwrap();
        // minus-plane quaternions have the shape ½(a, b, b, −a)
        for q in spectrum.samples() {
            assert!((q.i - q.j).abs() < 1e-12 && (q.r + q.k).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_round_trip() {
        for seed in 0..3 {
            let f = noise_field(Grid2Spec::new(16, 32, 0.3, 0.2).unwrap(), 20 + seed);
            let back = qft_inverse(&qft_fast(&f).unwrap()).unwrap();
            let err = back.checked_sub(&f).unwrap().frobenius() / f.frobenius();
            assert!(err < 1e-10, "{err}");
        }
        let spec = Grid2Spec::square(64, 0.25).unwrap();
        let g = sample_gaussian2(&Gaussian2::isotropic(Quaternion::new(0.2, 1.0, -0.3, 0.5), 0.5), &spec).unwrap();
        let back = qft_inverse(&qft_fast(&g).unwrap()).unwrap();
        let max_err = back.checked_sub(&g).unwrap().max_norm();
        assert!(max_err < 1e-10, "{max_err}");
    }

    #[test]
    fn split_additivity_and_linearity() {
        let spec = Grid2Spec::square(16, 0.5).unwrap();
        let (f, g) = (noise_field(spec, 40), noise_field(spec, 41));
        let (fm, fp) = f.split();
        let whole = qft_fast(&f).unwrap();
        let parts = qft_fast(&fm).unwrap().checked_add(&qft_fast(&fp).unwrap()).unwrap();
        assert!(relative_frobenius(&parts, &whole).unwrap() < 1e-12);

        let alpha = -1.7;
        let combo = f.scale(alpha).checked_add(&g).unwrap();
        let lhs = qft_fast(&combo).unwrap();
        let rhs = whole.scale(alpha).checked_add(&qft_fast(&g).unwrap()).unwrap();
        assert!(relative_frobenius(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn discrete_parseval() {
        let f = noise_field(Grid2Spec::new(32, 16, 0.3, 0.45).unwrap(), 9);
        let spectrum = qft_fast(&f).unwrap();
        assert!((spectrum.parseval_energy() - f.energy()).abs() <= 1e-12 * f.energy());
    }

    #[test]
    fn spectral_modulus_identity() {
        let f = noise_field(Grid2Spec::square(16, 0.5).unwrap(), 10);
        let whole = qft_fast(&f).unwrap();
        let (minus, plus) = qft_split_parts(&f).unwrap();
        for ((w, m), p) in whole.samples().iter().zip(minus.samples()).zip(plus.samples()) {
            let lhs = w.norm_sq();
            assert!((lhs - m.norm_sq() - p.norm_sq()).abs() <= 1e-12 * lhs.max(1e-300));
        }
    }

    #[test]
    fn reflection() {
        assert_eq!(reflect_u1(Direction2::new(1.0, 0.0)), Direction2::new(-1.0, 0.0));
        assert_eq!(reflect_u1(Direction2::E2), Direction2::E2);
        let d = Direction2::new(0.3, -2.0);
        assert_eq!(reflect_u1(reflect_u1(d)), d);
        let s = qft_fast(&noise_field(Grid2Spec::square(8, 1.0).unwrap(), 1)).unwrap();
        assert_eq!(spectrum_reflect_u1(&spectrum_reflect_u1(&s)), s);
    }

    #[test]
    fn errors() {
        let f = QField2::zeros(Grid2Spec::square(12, 1.0).unwrap());
        assert!(matches!(qft_fast(&f), Err(Error::GridNotPow2(12))));
        assert!(matches!(qft_right_sided(&f), Err(Error::GridNotPow2(12))));
        assert!(matches!(qft_inverse(&Spectrum2::zeros(*f.spec())), Err(Error::GridNotPow2(12))));
        assert!(qft_brute(&f).is_ok());
        let big = QField2::zeros(Grid2Spec::square(128, 1.0).unwrap());
        assert!(matches!(qft_brute(&big), Err(Error::GridTooLarge { samples: 16384, cap: 4096 })));
        assert!(matches!(qft_right_sided_brute(&big), Err(Error::GridTooLarge { .. })));
    }
}
