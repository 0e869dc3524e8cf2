//! Centered multidimensional DFT passes over row-major complex arrays.
//!
//! With the centered node convention the kernel phase is
//! `2π (n − N/2)(m − N/2) / N`, which factors as
//! `(−1)^{n} · e^{∓2πi nm/N} · (−1)^{m + N/2}` for even `N`. Each axis pass
//! therefore modulates, runs a plain FFT and modulates again. Transforms are
//! unnormalized; callers apply the grid measure.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Sign {
    /// Kernel `e^{−iθ}`.
    Forward,
    /// Kernel `e^{+iθ}`.
    Inverse,
}

struct Plans {
    planner: FftPlanner<f64>,
    cache: HashMap<(usize, Sign), Arc<dyn Fft<f64>>>,
}

impl Plans {
    fn new() -> Self {
        Self { planner: FftPlanner::new(), cache: HashMap::new() }
    }

    fn get(&mut self, n: usize, sign: Sign) -> Arc<dyn Fft<f64>> {
        let planner = &mut self.planner;
        self.cache
            .entry((n, sign))
            .or_insert_with(|| match sign {
                Sign::Forward => planner.plan_fft_forward(n),
                Sign::Inverse => planner.plan_fft_inverse(n),
            })
            .clone()
    }
}

#[inline]
fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Calls `visit(line)` for every 1D line of `data` along `axis`, writing the
/// modified line back afterwards.
pub(crate) fn for_each_line<T: Copy + Default>(
    data: &mut [T],
    shape: &[usize],
    axis: usize,
    mut visit: impl FnMut(&mut [T]),
) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut line = vec![T::default(); n];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * n * stride + s;
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * stride];
            }
            visit(&mut line);
            for (k, v) in line.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }
}

fn centered_pass(plans: &mut Plans, data: &mut [Complex64], shape: &[usize], axis: usize, sign: Sign) {
    let n = shape[axis];
    let fft = plans.get(n, sign);
    let post = parity(n / 2);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for_each_line(data, shape, axis, |line| {
        for (k, v) in line.iter_mut().enumerate() {
            *v *= parity(k);
        }
        fft.process_with_scratch(line, &mut scratch);
        for (k, v) in line.iter_mut().enumerate() {
            *v *= parity(k) * post;
        }
    });
}

/// Centered DFT along the listed axes.
pub(crate) fn centered_dft(data: &mut [Complex64], shape: &[usize], axes: &[usize], sign: Sign) {
    let mut plans = Plans::new();
    for &axis in axes {
        centered_pass(&mut plans, data, shape, axis, sign);
    }
}

/// Centered DFT along every axis.
pub(crate) fn centered_dft_all(data: &mut [Complex64], shape: &[usize], sign: Sign) {
    let axes: Vec<usize> = (0..shape.len()).collect();
    centered_dft(data, shape, &axes, sign);
}

/// Reindexes `m ↦ (N − m) mod N` along `axis`, i.e. negates that frequency.
pub(crate) fn flip_axis<T: Copy + Default>(data: &mut [T], shape: &[usize], axis: usize) {
    for_each_line(data, shape, axis, |line| line[1..].reverse());
}

/// Spectral derivative `∂/∂u` of real samples along `axis` with spacing `h`.
///
/// Multiplies mode `m` by `iκ_m`; the unpaired Nyquist mode is dropped so the
/// result stays real and the operator is exactly antisymmetric.
pub(crate) fn spectral_derivative(data: &[f64], shape: &[usize], axis: usize, h: f64) -> Vec<f64> {
    let n = shape[axis];
    let mut plans = Plans::new();
    let forward = plans.get(n, Sign::Forward);
    let inverse = plans.get(n, Sign::Inverse);
    let mut scratch =
        vec![Complex64::default(); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];
    let step = 2.0 * PI / (n as f64 * h);
    let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    for_each_line(&mut buf, shape, axis, |line| {
        forward.process_with_scratch(line, &mut scratch);
        for (m, v) in line.iter_mut().enumerate() {
            let wave = if 2 * m < n {
                m as f64
            } else if 2 * m == n {
                0.0
            } else {
                m as f64 - n as f64
            };
            *v *= Complex64::new(0.0, wave * step / n as f64);
        }
        inverse.process_with_scratch(line, &mut scratch);
    });
    buf.into_iter().map(|c| c.re).collect()
}
