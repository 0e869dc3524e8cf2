//! Discrete spacetime Fourier transform of Cl(3,1)-valued fields on 4D grids.
//!
//! ```text
//! F[m] = Δt Δx Δy Δz Σ_n e^{−e_t t ω_t} f[n] e^{−i₃ x⃗·ω⃗}
//! ```
//!
//! For the split parts `f± = ½(f ± e_t f i₃)` one has `e_t f₊ = −f₊ i₃` and
//! `e_t f₋ = f₋ i₃`, so the left kernel moves to the right and each part sees a
//! single phase: `f₊ e^{−i₃(x⃗·ω⃗ − tω_t)}` and `f₋ e^{−i₃(x⃗·ω⃗ + tω_t)}`. These
//! are the two wave packets; the `+` packet is the `−` computation read back
//! with `ω_t` reversed.
//!
//! Right multiplication by `i₃` pairs the 16 blades into 8 complex planes:
//!
//! | real blade | imaginary blade | `real · i₃` |
//! |------------|-----------------|-------------|
//! | 1          | i₃              | `+i₃`       |
//! | e_t        | i_st            | `+i_st`     |
//! | e₁         | e₂e₃            | `+e₂e₃`     |
//! | e₂         | e₁e₃            | `−e₁e₃`     |
//! | e₃         | e₁e₂            | `+e₁e₂`     |
//! | e_te₁      | e_te₂e₃         | `+e_te₂e₃`  |
//! | e_te₂      | e_te₁e₃         | `−e_te₁e₃`  |
//! | e_te₃      | e_te₁e₂         | `+e_te₁e₂`  |
//!
//! The table is derived at run time from the blade product, not hand-coded.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{centered_dft_all, flip_axis, for_each_line, Sign};
use crate::grid::{Grid4Spec, MVField4, Spectrum4};
use crate::hypercomplex::{blade, Multivector31, BLADE_COUNT, PRODUCT_TABLE};

/// Default sample cap for the brute-force sum (16⁴).
pub const DEFAULT_BRUTE_CAP_4D: usize = 16 * 16 * 16 * 16;

/// A constant spacetime direction `a_t e_t + a₁e₁ + a₂e₂ + a₃e₃`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Direction4 {
    pub a_t: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl Direction4 {
    pub const E_T: Direction4 = Direction4::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Direction4 = Direction4::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Direction4 = Direction4::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Direction4 = Direction4::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a_t: f64, a1: f64, a2: f64, a3: f64) -> Self {
        Self { a_t, a1, a2, a3 }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a_t, self.a1, self.a2, self.a3]
    }

    /// `a_t u_t − a⃗·u⃗` for node coordinates `u = (u_t, u₁, u₂, u₃)`.
    #[inline]
    pub fn weight(&self, u: [f64; 4]) -> f64 {
        self.a_t * u[0] - (self.a1 * u[1] + self.a2 * u[2] + self.a3 * u[3])
    }

    /// Spatial dot product `a⃗·b⃗`.
    pub fn spatial_dot(&self, other: &Direction4) -> f64 {
        self.a1 * other.a1 + self.a2 * other.a2 + self.a3 * other.a3
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_array(self.to_array().map(|c| c * s))
    }

    /// Reverses the time component, the analogue of `U₁` for the `ω_t` flip.
    pub fn reflect_time(&self) -> Self {
        Self::new(-self.a_t, self.a1, self.a2, self.a3)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

/// One complex plane under right multiplication by `i₃`:
/// `blade[real] · i₃ = sign · blade[imag]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanePair {
    pub real: usize,
    pub imag: usize,
    pub sign: i8,
}

/// The eight `i₃` planes, ordered by their real blade.
pub fn i3_plane_pairs() -> &'static [PlanePair; 8] {
    static PAIRS: OnceLock<[PlanePair; 8]> = OnceLock::new();
    PAIRS.get_or_init(|| {
        let mut seen = [false; BLADE_COUNT];
        let mut pairs = Vec::with_capacity(8);
        for b in 0..BLADE_COUNT {
            if seen[b] {
                continue;
            }
            let (sign, imag) = PRODUCT_TABLE[b][blade::I3];
            seen[b] = true;
            seen[imag] = true;
            pairs.push(PlanePair { real: b, imag, sign });
        }
        pairs.try_into().expect("right multiplication by i3 pairs 16 blades into 8 planes")
    })
}

/// Multivector samples to 8 complex planes, `z = c[real] + i·sign·c[imag]`.
fn to_planes(samples: &[Multivector31]) -> Vec<Vec<Complex64>> {
    i3_plane_pairs()
        .iter()
        .map(|p| {
            let s = f64::from(p.sign);
            samples.iter().map(|m| Complex64::new(m.coeffs[p.real], s * m.coeffs[p.imag])).collect()
        })
        .collect()
}

fn from_planes(planes: &[Vec<Complex64>], len: usize) -> Vec<Multivector31> {
    let mut out = vec![Multivector31::ZERO; len];
    for (p, plane) in i3_plane_pairs().iter().zip(planes) {
        let s = f64::from(p.sign);
        for (m, z) in out.iter_mut().zip(plane) {
            m.coeffs[p.real] = z.re;
            m.coeffs[p.imag] = s * z.im;
        }
    }
    out
}

/// Right-phase transform of one split part. `flip_time` reverses `ω_t` on the
/// output (forward) or the input (inverse).
fn part_transform(
    spec: &Grid4Spec,
    samples: &[Multivector31],
    sign: Sign,
    flip_time: bool,
    scale: f64,
) -> Vec<Multivector31> {
    let shape = spec.shape();
    let mut planes = to_planes(samples);
    for plane in &mut planes {
        if flip_time && sign == Sign::Inverse {
            flip_axis(plane, &shape, 0);
        }
        centered_dft_all(plane, &shape, sign);
        if flip_time && sign == Sign::Forward {
            flip_axis(plane, &shape, 0);
        }
        for z in plane.iter_mut() {
            *z *= scale;
        }
    }
    from_planes(&planes, samples.len())
}

/// The two wave packets `(F{f₊}, F{f₋})`; their sum is the full SFT.
pub fn wave_packets(f: &MVField4) -> Result<(Spectrum4, Spectrum4)> {
    let spec = *f.spec();
    spec.require_pow2()?;
    let (minus, plus) = f.split();
    let vol = spec.cell_volume();
    let plus_hat = part_transform(&spec, plus.samples(), Sign::Forward, true, vol);
    let minus_hat = part_transform(&spec, minus.samples(), Sign::Forward, false, vol);
    Ok((Spectrum4::from_parts(spec, plus_hat), Spectrum4::from_parts(spec, minus_hat)))
}

/// Fast SFT via the spacetime split: 8 complex 4D FFTs per part.
pub fn sft_fast(f: &MVField4) -> Result<Spectrum4> {
    let (plus, minus) = wave_packets(f)?;
    plus.checked_add(&minus)
}

/// `f[n] = (2π)⁻⁴ ΠΔω Σ_m e^{+e_t t ω_t} F[m] e^{+i₃ x⃗·ω⃗}`.
pub fn sft_inverse(spectrum: &Spectrum4) -> Result<MVField4> {
    let spec = *spectrum.spec();
    spec.require_pow2()?;
    let (minus, plus) = spectrum.split();
    let scale = spec.freq_cell_volume() / (2.0 * PI).powi(4);
    let plus_x = part_transform(&spec, plus.samples(), Sign::Inverse, true, scale);
    let minus_x = part_transform(&spec, minus.samples(), Sign::Inverse, false, scale);
    let samples = plus_x.into_iter().zip(minus_x).map(|(a, b)| a + b).collect();
    Ok(MVField4::from_parts(spec, samples))
}

pub fn sft_brute(f: &MVField4) -> Result<Spectrum4> {
    sft_brute_with_cap(f, DEFAULT_BRUTE_CAP_4D)
}

/// Direct evaluation through separable per-axis sums: the `t` pass multiplies
/// by `cos − e_t sin` on the left, the spatial passes by `cos − i₃ sin` on the
/// right. Every product goes through the general geometric product.
pub fn sft_brute_with_cap(f: &MVField4, cap: usize) -> Result<Spectrum4> {
    let spec = *f.spec();
    if spec.len() > cap {
        return Err(Error::GridTooLarge { samples: spec.len(), cap });
    }
    let shape = spec.shape();
    let mut data = f.samples().to_vec();
    for (axis_idx, axis) in spec.axes.iter().enumerate() {
        let (nodes, freqs) = (axis.coords(), axis.freqs());
        let unit = if axis_idx == 0 { Multivector31::e_t() } else { Multivector31::i3() };
        let kernel: Vec<Vec<Multivector31>> = freqs
            .iter()
            .map(|&w| {
                nodes
                    .iter()
                    .map(|&u| {
                        let (s, c) = (u * w).sin_cos();
                        Multivector31::scalar(c) - unit * s
                    })
                    .collect()
            })
            .collect();
        let mut out_line = vec![Multivector31::ZERO; axis.n];
        for_each_line(&mut data, &shape, axis_idx, |line| {
            for (out, row) in out_line.iter_mut().zip(&kernel) {
                *out = if axis_idx == 0 {
                    row.iter().zip(line.iter()).map(|(k, v)| *k * *v).sum()
                } else {
                    row.iter().zip(line.iter()).map(|(k, v)| *v * *k).sum()
                };
            }
            line.copy_from_slice(&out_line);
        });
    }
    let vol = spec.cell_volume();
    Ok(Spectrum4::from_parts(spec, data.into_iter().map(|m| m * vol).collect()))
}

/// Relative Frobenius distance `‖a − b‖ / ‖b‖` (absolute when `b` vanishes).
pub fn relative_frobenius4(a: &Spectrum4, b: &Spectrum4) -> Result<f64> {
    let diff = a.checked_sub(b)?.frobenius();
    let base = b.frobenius();
    Ok(if base > 0.0 { diff / base } else { diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{
        random_packets4, sample_gaussian2, sample_gaussian4, Gaussian2, Gaussian4, Grid2Spec, PacketConfig, QField2,
    };
    use crate::hypercomplex::{quat_embed, quat_extract, Quaternion};
    use crate::qft::qft_brute;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn noise4(spec: Grid4Spec, seed: u64) -> MVField4 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        MVField4::from_fn(spec, |_| Multivector31::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))))
    }

    #[test]
    fn plane_table_matches_documentation() {
        use blade::*;
        let want = [
            (SCALAR, I3, 1),
            (E_T, I_ST, 1),
            (E1, E23, 1),
            (E2, E13, -1),
            (E3, E12, 1),
            (E_T1, E_T23, 1),
            (E_T2, E_T13, -1),
            (E_T3, E_T12, 1),
        ];
        let got: Vec<(usize, usize, i8)> = i3_plane_pairs().iter().map(|p| (p.real, p.imag, p.sign)).collect();
        assert_eq!(got, want);
        for p in i3_plane_pairs() {
            let prod = Multivector31::basis(p.real) * Multivector31::i3();
            assert_eq!(prod, Multivector31::basis(p.imag) * f64::from(p.sign));
        }
    }

    #[test]
    fn plane_round_trip() {
        let f = noise4(Grid4Spec::cube(8, 1.0).unwrap(), 1);
        assert_eq!(from_planes(&to_planes(f.samples()), f.samples().len()), f.samples());
    }

    #[test]
    fn delta_has_flat_spectrum() {
        let spec = Grid4Spec::cube(8, 0.8).unwrap();
        let mut samples = vec![Multivector31::ZERO; spec.len()];
        samples[spec.index([4, 4, 4, 4])] = Multivector31::scalar(1.0 / spec.cell_volume());
        let f = MVField4::new(spec, samples).unwrap();
        for s in [sft_brute(&f).unwrap(), sft_fast(&f).unwrap()] {
            for m in s.samples() {
                assert!((*m - Multivector31::scalar(1.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn fast_matches_brute() {
        for seed in 0..2 {
            let f = noise4(Grid4Spec::new([8, 8, 16, 8], [0.7, 0.9, 0.5, 1.1]).unwrap(), seed);
            let err = relative_frobenius4(&sft_fast(&f).unwrap(), &sft_brute(&f).unwrap()).unwrap();
            assert!(err < 1e-12, "{err}");
        }
    }

    #[test]
    fn packets_sum_and_modulus() {
        let f = noise4(Grid4Spec::cube(8, 0.9).unwrap(), 3);
        let (plus, minus) = wave_packets(&f).unwrap();
        let whole = sft_fast(&f).unwrap();
        for ((w, p), m) in whole.samples().iter().zip(plus.samples()).zip(minus.samples()) {
            let lhs = w.norm_sq();
            assert!((lhs - p.norm_sq() - m.norm_sq()).abs() <= 1e-12 * lhs.max(1e-300));
        }
        // the + packet of f is the transform of f₊ alone
        let (_, fp) = f.split();
        let err = relative_frobenius4(&plus, &sft_brute(&fp).unwrap()).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn pure_plus_field_has_no_minus_packet() {
        let spec = Grid4Spec::cube(8, 0.9).unwrap();
        let c0 = (Multivector31::scalar(1.0) + Multivector31::i_st()) * 0.5;
        let f = sample_gaussian4(&Gaussian4::isotropic(c0, 0.5), &spec).unwrap();
        let (plus, minus) = wave_packets(&f).unwrap();
        assert!(minus.max_norm() == 0.0);
        assert!(plus.max_norm() > 1.0);
    }

    #[test]
    fn single_node_packets_are_phase_fields() {
        // f = 1 at node n₀: F±(ω) = vol · ½(1 ± i_st) e^{−i₃(x⃗₀·ω⃗ ∓ t₀ω_t)}
        let spec = Grid4Spec::cube(8, 0.7).unwrap();
        let node = [5, 2, 6, 3];
        let mut samples = vec![Multivector31::ZERO; spec.len()];
        samples[spec.index(node)] = Multivector31::scalar(1.0);
        let f = MVField4::new(spec, samples).unwrap();
        let x0: [f64; 4] = std::array::from_fn(|a| spec.axes[a].coord(node[a]));
        let (plus, minus) = wave_packets(&f).unwrap();
        let vol = spec.cell_volume();
        let one = Multivector31::scalar(1.0);
        for flat in 0..spec.len() {
            let w = plus.node(flat);
            let spatial = x0[1] * w[1] + x0[2] * w[2] + x0[3] * w[3];
            let phase = |theta: f64| one * theta.cos() - Multivector31::i3() * theta.sin();
            let want_p = (one + Multivector31::i_st()) * 0.5 * phase(spatial - x0[0] * w[0]) * vol;
            let want_m = (one - Multivector31::i_st()) * 0.5 * phase(spatial + x0[0] * w[0]) * vol;
            assert!((plus.samples()[flat] - want_p).norm() < 1e-13);
            assert!((minus.samples()[flat] - want_m).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_closed_form() {
        // per axis ∫ e^{−u²/2} e^{−iuw} du = √(2π) e^{−w²/2}; the ±4.8 window
        // truncates at e^{−11.5}
        let spec = Grid4Spec::cube(16, 0.6).unwrap();
        let f = sample_gaussian4(&Gaussian4::isotropic(Multivector31::scalar(1.0), 0.5), &spec).unwrap();
        let peak = (2.0 * PI).powi(2);
        for s in [sft_fast(&f).unwrap(), sft_brute(&f).unwrap()] {
            for (flat, m) in s.samples().iter().enumerate() {
                let w = s.node(flat);
                let want = peak * (-0.5 * w.iter().map(|c| c * c).sum::<f64>()).exp();
                if want > 1e-3 * peak {
                    assert!((*m - Multivector31::scalar(want)).norm() <= 1e-4 * peak);
                }
            }
        }
    }

    #[test]
    fn restriction_to_volume_time_subalgebra_is_the_qft() {
        // q(t, x) embedded, constant along y and z
        let (nt, nx, ny, nz) = (16, 8, 8, 8);
        let (ht, hx, hy, hz) = (0.5, 0.75, 0.9, 1.2);
        let spec4 = Grid4Spec::new([nt, nx, ny, nz], [ht, hx, hy, hz]).unwrap();
        let spec2 = Grid2Spec::new(nt, nx, ht, hx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let q: QField2 =
            QField2::from_fn(spec2, |_, _| Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0))));
        let f = MVField4::from_fn(spec4, |_| Multivector31::ZERO);
        let samples: Vec<Multivector31> = (0..spec4.len())
            .map(|flat| {
                let [it, ix, _, _] = spec4.unravel(flat);
                quat_embed(q.get(it, ix))
            })
            .collect();
        let f = MVField4::new(*f.spec(), samples).unwrap();
        let sft = sft_brute(&f).unwrap();
        let qft = qft_brute(&q).unwrap();
        let transverse = (ny as f64 * hy) * (nz as f64 * hz);
        for flat in 0..spec4.len() {
            let [mt, mx, my, mz] = spec4.unravel(flat);
            let got = sft.samples()[flat];
            if my == ny / 2 && mz == nz / 2 {
                let want = qft.get(mt, mx) * transverse;
                assert!((quat_extract(&got).unwrap() - want).norm() < 1e-11 * transverse);
            } else {
                assert!(got.norm() < 1e-11 * transverse);
            }
        }
    }

    #[test]
    fn inverse_round_trip_and_parseval() {
        let f = noise4(Grid4Spec::new([8, 16, 8, 8], [0.6, 0.4, 0.8, 0.9]).unwrap(), 5);
        let s = sft_fast(&f).unwrap();
        assert!((s.parseval_energy() - f.energy()).abs() <= 1e-12 * f.energy());
        let back = sft_inverse(&s).unwrap();
        assert!(back.checked_sub(&f).unwrap().frobenius() <= 1e-12 * f.frobenius());
        assert!(sft_inverse(&Spectrum4::zeros(*f.spec())).unwrap().max_norm() == 0.0);

        let spec = Grid4Spec::cube(16, 0.6).unwrap();
        let g = sample_gaussian4(&Gaussian4::isotropic(Multivector31::i_st(), 0.5), &spec).unwrap();
        let back = sft_inverse(&sft_fast(&g).unwrap()).unwrap();
        assert!(back.checked_sub(&g).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn time_reflection_is_an_involution() {
        let s = sft_fast(&random_packets4(
            &Grid4Spec::cube(8, 0.9).unwrap(),
            &PacketConfig::coarse(),
            &mut ChaCha8Rng::seed_from_u64(8),
        ))
        .unwrap();
        assert_eq!(s.reflect_time().reflect_time(), s);
        let d = Direction4::new(0.5, -1.0, 2.0, 0.25);
        assert_eq!(d.reflect_time().reflect_time(), d);
    }

    #[test]
    fn errors() {
        let f = MVField4::zeros(Grid4Spec::new([8, 8, 12, 8], [1.0; 4]).unwrap());
        assert!(matches!(sft_fast(&f), Err(Error::GridNotPow2(12))));
        assert!(matches!(sft_inverse(&Spectrum4::zeros(*f.spec())), Err(Error::GridNotPow2(12))));
        let big = MVField4::zeros(Grid4Spec::new([32, 16, 16, 16], [1.0; 4]).unwrap());
        assert!(matches!(sft_brute(&big), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn gaussian2_embedding_smoke() {
        // keeps sample_gaussian2 in the embedding path honest
        let spec = Grid2Spec::square(8, 1.0).unwrap();
        let g = sample_gaussian2(&Gaussian2::isotropic(Quaternion::J, 0.5), &spec).unwrap();
        assert!(g.samples().iter().all(|q| quat_extract(&quat_embed(*q)).unwrap() == *q));
    }
}
