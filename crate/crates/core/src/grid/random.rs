//! Seeded random fields built from Gaussian wave packets.
//!
//! Each packet is `A · exp(−Σ (u−c)²/(2σ²)) · cos(κ·(u−c) + φ)` with a random
//! hypercomplex amplitude `A`. Widths are drawn around the balanced width
//! `σ₀ = h·√(N/2π)` of each axis, which spreads the decay margin evenly between
//! the spatial and the spectral grid; centres and carriers stay in a fraction of
//! the half extent and of the Nyquist frequency respectively.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Axis, Grid2Spec, Grid4Spec, MVField4, QField2};
use crate::hypercomplex::{Multivector31, Quaternion, BLADE_COUNT};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketConfig {
    pub count: usize,
    /// Centres lie within this fraction of the half extent.
    pub center_frac: f64,
    /// Carrier wavenumbers lie within this fraction of `π/h`.
    pub carrier_frac: f64,
    /// Width range as multiples of the balanced width.
    pub width: (f64, f64),
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self { count: 3, center_frac: 0.2, carrier_frac: 0.2, width: (0.75, 1.25) }
    }
}

impl PacketConfig {
    /// Settings for coarse 8-point axes, where only near-centred packets decay.
    pub fn coarse() -> Self {
        Self { count: 2, center_frac: 0.1, carrier_frac: 0.1, width: (0.8, 1.1) }
    }
}

struct AxisDraw {
    center: f64,
    sigma: f64,
    carrier: f64,
}

fn draw_axis<R: Rng + ?Sized>(rng: &mut R, axis: &Axis, cfg: &PacketConfig) -> AxisDraw {
    let balanced = axis.h * (axis.n as f64 / (2.0 * PI)).sqrt();
    let nyquist = PI / axis.h;
    AxisDraw {
        center: cfg.center_frac * axis.half_extent() * rng.gen_range(-1.0..=1.0),
        sigma: balanced * rng.gen_range(cfg.width.0..=cfg.width.1),
        carrier: cfg.carrier_frac * nyquist * rng.gen_range(-1.0..=1.0),
    }
}

fn packet_value(draws: &[AxisDraw], phase: f64, u: &[f64]) -> f64 {
    let mut exponent = 0.0;
    let mut arg = phase;
    for (d, &c) in draws.iter().zip(u) {
        let rel = c - d.center;
        exponent -= rel * rel / (2.0 * d.sigma * d.sigma);
        arg += d.carrier * rel;
    }
    exponent.exp() * arg.cos()
}

pub fn random_packets2<R: Rng + ?Sized>(spec: &Grid2Spec, cfg: &PacketConfig, rng: &mut R) -> QField2 {
    let mut field = QField2::zeros(*spec);
    for _ in 0..cfg.count {
        let amp = Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)));
        let draws: Vec<AxisDraw> = spec.axes.iter().map(|a| draw_axis(rng, a, cfg)).collect();
        let phase = rng.gen_range(0.0..2.0 * PI);
        let packet = QField2::from_fn(*spec, |x1, x2| amp * packet_value(&draws, phase, &[x1, x2]));
        field = field.checked_add(&packet).expect("same grid");
    }
    field
}

pub fn random_packets4<R: Rng + ?Sized>(spec: &Grid4Spec, cfg: &PacketConfig, rng: &mut R) -> MVField4 {
    let mut field = MVField4::zeros(*spec);
    for _ in 0..cfg.count {
        let amp = Multivector31::new(std::array::from_fn::<f64, BLADE_COUNT, _>(|_| rng.gen_range(-1.0..=1.0)));
        let draws: Vec<AxisDraw> = spec.axes.iter().map(|a| draw_axis(rng, a, cfg)).collect();
        let phase = rng.gen_range(0.0..2.0 * PI);
        let packet = MVField4::from_fn(*spec, |x| amp * packet_value(&draws, phase, &x));
        field = field.checked_add(&packet).expect("same grid");
    }
    field
}
