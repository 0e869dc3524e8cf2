//! Centered uniform grids and the sampled fields that live on them.
//!
//! Node `n` of an axis with `N` samples and spacing `h` sits at
//! `x[n] = (n − N/2)·h`, so `x[N/2] = 0` exactly. The matching frequency nodes
//! are `ω[m] = 2π(m − N/2)/(N·h)` with step `Δω = 2π/(N·h)`.

mod gaussian;
mod io;
mod random;

use std::f64::consts::PI;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector31, Quaternion};

pub use gaussian::{sample_gaussian2, sample_gaussian4, Gaussian2, Gaussian4};
pub use io::{
    read_any_field, read_field2, read_field4, write_csv2, write_csv4, write_field2, write_field4, AnyField,
    FORMAT_VERSION, MAGIC_MV4, MAGIC_Q2,
};
pub use random::{random_packets2, random_packets4, PacketConfig};

/// One centered grid axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub h: f64,
}

impl Axis {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("axis length {n} must be even and at least 8")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {h} must be positive and finite")));
        }
        Ok(Self { n, h })
    }

    #[inline]
    pub fn coord(&self, idx: usize) -> f64 {
        (idx as f64 - (self.n / 2) as f64) * self.h
    }

    #[inline]
    pub fn freq(&self, idx: usize) -> f64 {
        (idx as f64 - (self.n / 2) as f64) * self.freq_step()
    }

    #[inline]
    pub fn freq_step(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.h)
    }

    /// Distance from the zero node to the far end, `N/2 · h`.
    pub fn half_extent(&self) -> f64 {
        (self.n / 2) as f64 * self.h
    }

    pub fn is_pow2(&self) -> bool {
        self.n.is_power_of_two()
    }

    /// Index of `−ω[m]`: `m ↔ N − m`, with `m = 0` mapped to itself.
    ///
    /// Node 0 carries the Nyquist frequency `−π/h`, which the periodic DFT
    /// cannot tell apart from `+π/h`.
    #[inline]
    pub fn reflect_index(&self, idx: usize) -> usize {
        (self.n - idx) % self.n
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.freq(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2Spec {
    pub axes: [Axis; 2],
}

impl Grid2Spec {
    pub fn new(n1: usize, n2: usize, h1: f64, h2: f64) -> Result<Self> {
        Ok(Self { axes: [Axis::new(n1, h1)?, Axis::new(n2, h2)?] })
    }

    pub fn square(n: usize, h: f64) -> Result<Self> {
        Self::new(n, n, h, h)
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.axes[0].n, self.axes[1].n]
    }

    pub fn len(&self) -> usize {
        self.axes[0].n * self.axes[1].n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.axes[1].n + i2
    }

    /// `h₁h₂`
    pub fn cell_area(&self) -> f64 {
        self.axes[0].h * self.axes[1].h
    }

    /// `Δω₁Δω₂`
    pub fn freq_cell_area(&self) -> f64 {
        self.axes[0].freq_step() * self.axes[1].freq_step()
    }

    pub fn require_pow2(&self) -> Result<()> {
        require_pow2(&self.axes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid4Spec {
    /// Axes in `(t, x, y, z)` order.
    pub axes: [Axis; 4],
}

impl Grid4Spec {
    pub fn new(n: [usize; 4], h: [f64; 4]) -> Result<Self> {
        Ok(Self {
            axes: [Axis::new(n[0], h[0])?, Axis::new(n[1], h[1])?, Axis::new(n[2], h[2])?, Axis::new(n[3], h[3])?],
        })
    }

    pub fn cube(n: usize, h: f64) -> Result<Self> {
        Self::new([n; 4], [h; 4])
    }

    pub fn shape(&self) -> [usize; 4] {
        self.axes.map(|a| a.n)
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, idx: [usize; 4]) -> usize {
        let [_, nx, ny, nz] = self.shape();
        ((idx[0] * nx + idx[1]) * ny + idx[2]) * nz + idx[3]
    }

    /// Inverse of [`Grid4Spec::index`].
    #[inline]
    pub fn unravel(&self, mut flat: usize) -> [usize; 4] {
        let [_, nx, ny, nz] = self.shape();
        let iz = flat % nz;
        flat /= nz;
        let iy = flat % ny;
        flat /= ny;
        let ix = flat % nx;
        [flat / nx, ix, iy, iz]
    }

    /// `Δt Δx Δy Δz`
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.h).product()
    }

    pub fn freq_cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.freq_step()).product()
    }

    pub fn require_pow2(&self) -> Result<()> {
        require_pow2(&self.axes)
    }
}

fn require_pow2(axes: &[Axis]) -> Result<()> {
    match axes.iter().find(|a| !a.is_pow2()) {
        Some(a) => Err(Error::GridNotPow2(a.n)),
        None => Ok(()),
    }
}

/// Which side of the transform a sampled array belongs to.
pub trait Domain: Clone + Copy + std::fmt::Debug + PartialEq + 'static {
    const NAME: &'static str;
    /// Physical coordinate of node `idx` on `axis`.
    fn node(axis: &Axis, idx: usize) -> f64;
}

/// Position space (`x`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Space {}

/// Frequency space (`ω`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frequency {}

impl Domain for Space {
    const NAME: &'static str = "space";
    fn node(axis: &Axis, idx: usize) -> f64 {
        axis.coord(idx)
    }
}

impl Domain for Frequency {
    const NAME: &'static str = "frequency";
    fn node(axis: &Axis, idx: usize) -> f64 {
        axis.freq(idx)
    }
}

/// Quaternion samples on a 2D grid, row-major with the first axis slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field2<D: Domain> {
    spec: Grid2Spec,
    samples: Vec<Quaternion>,
    _domain: PhantomData<D>,
}

pub type QField2 = Field2<Space>;
pub type Spectrum2 = Field2<Frequency>;

impl<D: Domain> Field2<D> {
    pub fn new(spec: Grid2Spec, samples: Vec<Quaternion>) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}x{} grid",
                samples.len(),
                spec.axes[0].n,
                spec.axes[1].n
            )));
        }
        if let Some(pos) = samples.iter().position(|q| !q.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite sample at flat index {pos}")));
        }
        Ok(Self::from_parts(spec, samples))
    }

    pub(crate) fn from_parts(spec: Grid2Spec, samples: Vec<Quaternion>) -> Self {
        debug_assert_eq!(samples.len(), spec.len());
        Self { spec, samples, _domain: PhantomData }
    }

    pub fn zeros(spec: Grid2Spec) -> Self {
        Self::from_parts(spec, vec![Quaternion::ZERO; spec.len()])
    }

    /// Samples `f(u₁, u₂)` at the domain's node coordinates.
    pub fn from_fn(spec: Grid2Spec, mut f: impl FnMut(f64, f64) -> Quaternion) -> Self {
        let [a1, a2] = spec.axes;
        let mut samples = Vec::with_capacity(spec.len());
        for i1 in 0..a1.n {
            let u1 = D::node(&a1, i1);
            for i2 in 0..a2.n {
                samples.push(f(u1, D::node(&a2, i2)));
            }
        }
        Self::from_parts(spec, samples)
    }

    pub fn spec(&self) -> &Grid2Spec {
        &self.spec
    }

    pub fn samples(&self) -> &[Quaternion] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Quaternion> {
        self.samples
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize) -> Quaternion {
        self.samples[self.spec.index(i1, i2)]
    }

    /// Node coordinates `(u₁, u₂)` of every sample, in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let [a1, a2] = self.spec.axes;
        (0..a1.n).flat_map(move |i1| (0..a2.n).map(move |i2| (D::node(&a1, i1), D::node(&a2, i2))))
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self::from_parts(self.spec, self.samples.iter().map(|&q| f(q)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.spec, samples))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise ± split, returned as `(minus, plus)`.
    pub fn split(&self) -> (Self, Self) {
        let (minus, plus) = self
            .samples
            .iter()
            .map(|q| {
                let s = q.split();
                (s.minus, s.plus)
            })
            .unzip();
        (Self::from_parts(self.spec, minus), Self::from_parts(self.spec, plus))
    }

    /// `Σ |f|²` with no measure attached.
    pub fn sum_norm_sq(&self) -> f64 {
        self.samples.iter().map(|q| q.norm_sq()).sum()
    }

    /// Frobenius norm of the coefficient array.
    pub fn frobenius(&self) -> f64 {
        self.sum_norm_sq().sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Largest sample magnitude on the outermost ring of nodes relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let [n1, n2] = self.spec.shape();
        let peak = self.max_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let edge = (0..n1)
            .flat_map(|i1| (0..n2).map(move |i2| (i1, i2)))
            .filter(|&(i1, i2)| i1 == 0 || i2 == 0 || i1 == n1 - 1 || i2 == n2 - 1)
            .map(|(i1, i2)| self.get(i1, i2).norm())
            .fold(0.0, f64::max);
        edge / peak
    }
}

impl Field2<Space> {
    /// `h₁h₂ Σ |f|²`
    pub fn energy(&self) -> f64 {
        self.spec.cell_area() * self.sum_norm_sq()
    }
}

impl Field2<Frequency> {
    /// `(2π)⁻² Δω₁Δω₂ Σ |F|²`, equal to the spatial energy by Parseval.
    pub fn parseval_energy(&self) -> f64 {
        self.spec.freq_cell_area() * self.sum_norm_sq() / (2.0 * PI).powi(2)
    }

    /// Reverses the `ω₁` axis, i.e. `F(ω₁, ω₂) ↦ F(−ω₁, ω₂)`.
    pub fn reflect_u1(&self) -> Self {
        let [a1, a2] = self.spec.axes;
        let mut samples = Vec::with_capacity(self.samples.len());
        for m1 in 0..a1.n {
            let src = a1.reflect_index(m1);
            samples.extend_from_slice(&self.samples[src * a2.n..(src + 1) * a2.n]);
        }
        Self::from_parts(self.spec, samples)
    }
}

/// Multivector samples on a 4D `(t, x, y, z)` grid, row-major with `t` slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Field4<D: Domain> {
    spec: Grid4Spec,
    samples: Vec<Multivector31>,
    _domain: PhantomData<D>,
}

pub type MVField4 = Field4<Space>;
pub type Spectrum4 = Field4<Frequency>;

impl<D: Domain> Field4<D> {
    pub fn new(spec: Grid4Spec, samples: Vec<Multivector31>) -> Result<Self> {
        if samples.len() != spec.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {:?}", samples.len(), spec.shape())));
        }
        if let Some(pos) = samples.iter().position(|m| !m.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite sample at flat index {pos}")));
        }
        Ok(Self::from_parts(spec, samples))
    }

    pub(crate) fn from_parts(spec: Grid4Spec, samples: Vec<Multivector31>) -> Self {
        debug_assert_eq!(samples.len(), spec.len());
        Self { spec, samples, _domain: PhantomData }
    }

    pub fn zeros(spec: Grid4Spec) -> Self {
        Self::from_parts(spec, vec![Multivector31::ZERO; spec.len()])
    }

    pub fn from_fn(spec: Grid4Spec, mut f: impl FnMut([f64; 4]) -> Multivector31) -> Self {
        let samples = (0..spec.len())
            .map(|flat| {
                let idx = spec.unravel(flat);
                f(std::array::from_fn(|a| D::node(&spec.axes[a], idx[a])))
            })
            .collect();
        Self::from_parts(spec, samples)
    }

    pub fn spec(&self) -> &Grid4Spec {
        &self.spec
    }

    pub fn samples(&self) -> &[Multivector31] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Multivector31> {
        self.samples
    }

    pub fn get(&self, idx: [usize; 4]) -> Multivector31 {
        self.samples[self.spec.index(idx)]
    }

    /// Node coordinates of the sample at `flat`.
    pub fn node(&self, flat: usize) -> [f64; 4] {
        let idx = self.spec.unravel(flat);
        std::array::from_fn(|a| D::node(&self.spec.axes[a], idx[a]))
    }

    pub fn map(&self, f: impl Fn(&Multivector31) -> Multivector31) -> Self {
        Self::from_parts(self.spec, self.samples.iter().map(f).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|m| *m * s)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Multivector31, &Multivector31) -> Multivector31) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| f(a, b)).collect();
        Ok(Self::from_parts(self.spec, samples))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| *a + *b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| *a - *b)
    }

    /// Pointwise spacetime split, returned as `(minus, plus)`.
    pub fn split(&self) -> (Self, Self) {
        let (minus, plus) = self
            .samples
            .iter()
            .map(|m| {
                let s = m.st_split();
                (s.minus, s.plus)
            })
            .unzip();
        (Self::from_parts(self.spec, minus), Self::from_parts(self.spec, plus))
    }

    pub fn sum_norm_sq(&self) -> f64 {
        self.samples.iter().map(|m| m.norm_sq()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.sum_norm_sq().sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.max_norm();
        if peak == 0.0 {
            return 0.0;
        }
        let shape = self.spec.shape();
        let edge = (0..self.samples.len())
            .filter(|&flat| {
                let idx = self.spec.unravel(flat);
                idx.iter().zip(shape).any(|(&i, n)| i == 0 || i == n - 1)
            })
            .map(|flat| self.samples[flat].norm())
            .fold(0.0, f64::max);
        edge / peak
    }
}

impl Field4<Space> {
    /// `Δt Δx Δy Δz Σ ‖f‖²`
    pub fn energy(&self) -> f64 {
        self.spec.cell_volume() * self.sum_norm_sq()
    }
}

impl Field4<Frequency> {
    /// `(2π)⁻⁴ Π Δω Σ ‖F‖²`
    pub fn parseval_energy(&self) -> f64 {
        self.spec.freq_cell_volume() * self.sum_norm_sq() / (2.0 * PI).powi(4)
    }

    /// Reverses the `ω_t` axis.
    pub fn reflect_time(&self) -> Self {
        let at = self.spec.axes[0];
        let slab = self.samples.len() / at.n;
        let mut samples = Vec::with_capacity(self.samples.len());
        for m in 0..at.n {
            let src = at.reflect_index(m);
            samples.extend_from_slice(&self.samples[src * slab..(src + 1) * slab]);
        }
        Self::from_parts(self.spec, samples)
    }
}

/// Pointwise split of a 2D field, `(minus, plus)`.
pub fn field_split(f: &QField2) -> (QField2, QField2) {
    f.split()
}

/// Pointwise spacetime split of a 4D field, `(minus, plus)`.
pub fn field_split4(f: &MVField4) -> (MVField4, MVField4) {
    f.split()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_nodes() {
        let a = Axis::new(16, 0.3).unwrap();
        assert_eq!(a.coord(8), 0.0);
        assert_eq!(a.freq(8), 0.0);
        assert_eq!(a.coord(0), -2.4);
        assert_eq!(a.freq_step() * a.h * a.n as f64, 2.0 * PI);
        for m in 1..16 {
            assert!((a.freq(a.reflect_index(m)) + a.freq(m)).abs() < 1e-12);
        }
        assert_eq!(a.reflect_index(0), 0);
        assert_eq!(a.reflect_index(8), 8);
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(6, 1.0).is_err());
        assert!(Axis::new(9, 1.0).is_err());
        assert!(Axis::new(8, 0.0).is_err());
        assert!(Axis::new(8, f64::NAN).is_err());
        assert!(Axis::new(12, 0.5).is_ok());
        assert!(matches!(Grid2Spec::square(12, 0.5).unwrap().require_pow2(), Err(Error::GridNotPow2(12))));
    }

    #[test]
    fn grid4_index_round_trip() {
        let g = Grid4Spec::new([8, 16, 8, 32], [1.0; 4]).unwrap();
        for flat in [0, 1, 77, 4095, g.len() - 1] {
            assert_eq!(g.index(g.unravel(flat)), flat);
        }
    }

    #[test]
    fn field_new_checks_shape_and_finiteness() {
        let g = Grid2Spec::square(8, 1.0).unwrap();
        assert!(QField2::new(g, vec![Quaternion::ONE; 63]).is_err());
        let mut s = vec![Quaternion::ONE; 64];
        s[5].j = f64::INFINITY;
        assert!(QField2::new(g, s).is_err());
    }

    #[test]
    fn split_of_constant_field() {
        let g = Grid2Spec::square(8, 1.0).unwrap();
        let f = QField2::from_fn(g, |_, _| Quaternion::ONE);
        let (minus, plus) = field_split(&f);
        assert!(plus.samples().iter().all(|&q| q == Quaternion::new(0.5, 0.0, 0.0, 0.5)));
        assert!(minus.samples().iter().all(|&q| q == Quaternion::new(0.5, 0.0, 0.0, -0.5)));
    }

    #[test]
    fn split_commutes_with_real_envelope() {
        let g = Grid2Spec::square(16, 0.5).unwrap();
        let c0 = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let env = |x: f64, y: f64| (-0.5 * (x * x + y * y)).exp();
        let f = QField2::from_fn(g, |x, y| c0 * env(x, y));
        let (minus, plus) = f.split();
        let s = c0.split();
        for ((q_m, q_p), (x, y)) in minus.samples().iter().zip(plus.samples()).zip(f.nodes()) {
            assert!((*q_m - s.minus * env(x, y)).norm() < 1e-15);
            assert!((*q_p - s.plus * env(x, y)).norm() < 1e-15);
        }
    }

    #[test]
    fn reflect_twice_is_identity() {
        let g = Grid2Spec::new(8, 16, 0.5, 0.25).unwrap();
        let mut k = 0.0;
        let f = Spectrum2::from_fn(g, |_, _| {
            k += 1.0;
            Quaternion::new(k, -k, 2.0 * k, 0.5)
        });
        assert_eq!(f.reflect_u1().reflect_u1(), f);
        assert_ne!(f.reflect_u1(), f);
    }
}
