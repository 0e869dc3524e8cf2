//! Multivectors of the spacetime algebra Cl(3,1) with `−e_t² = e₁² = e₂² = e₃² = 1`.
//!
//! Coefficients are stored in a fixed canonical blade order: grade first, then
//! lexicographic with `e_t` as the first basis vector.
//!
//! | index | blade   | index | blade    |
//! |-------|---------|-------|----------|
//! | 0     | 1       | 8     | e₁e₂     |
//! | 1     | e_t     | 9     | e₁e₃     |
//! | 2     | e₁      | 10    | e₂e₃     |
//! | 3     | e₂      | 11    | e_te₁e₂  |
//! | 4     | e₃      | 12    | e_te₁e₃  |
//! | 5     | e_te₁   | 13    | e_te₂e₃  |
//! | 6     | e_te₂   | 14    | i₃ = e₁e₂e₃ |
//! | 7     | e_te₃   | 15    | i_st = e_te₁e₂e₃ |
//!
//! Internally each blade is also a bitmask over `(e_t, e₁, e₂, e₃)` (bit 0 is
//! `e_t`); product signs are the canonical-reordering parity times the metric
//! signs of the shared basis vectors.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::quaternion::Quaternion;
use crate::error::{Error, Result};

pub const BLADE_COUNT: usize = 16;

/// Blade indices into [`Multivector31::coeffs`].
pub mod blade {
    pub const SCALAR: usize = 0;
    pub const E_T: usize = 1;
    pub const E1: usize = 2;
    pub const E2: usize = 3;
    pub const E3: usize = 4;
    pub const E_T1: usize = 5;
    pub const E_T2: usize = 6;
    pub const E_T3: usize = 7;
    pub const E12: usize = 8;
    pub const E13: usize = 9;
    pub const E23: usize = 10;
    pub const E_T12: usize = 11;
    pub const E_T13: usize = 12;
    pub const E_T23: usize = 13;
    pub const I3: usize = 14;
    pub const I_ST: usize = 15;
}

pub const BLADE_NAMES: [&str; BLADE_COUNT] = [
    "1", "e_t", "e1", "e2", "e3", "e_t1", "e_t2", "e_t3", "e12", "e13", "e23", "e_t12", "e_t13", "e_t23", "i3", "i_st",
];

const BLADE_MASKS: [u8; BLADE_COUNT] = [
    0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, 0b0111, 0b1011, 0b1101,
    0b1110, 0b1111,
];

/// Squares of the basis vectors `(e_t, e₁, e₂, e₃)`.
const METRIC: [i8; 4] = [-1, 1, 1, 1];

const fn mask_to_index(mask: u8) -> usize {
    let mut idx = 0;
    while idx < BLADE_COUNT {
        if BLADE_MASKS[idx] == mask {
            return idx;
        }
        idx += 1;
    }
    panic!("unknown blade mask");
}

const fn blade_product(a: u8, b: u8) -> (i8, usize) {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let mut sign: i8 = if swaps.is_multiple_of(2) { 1 } else { -1 };
    let common = a & b;
    let mut bit = 0;
    while bit < 4 {
        if common & (1 << bit) != 0 {
            sign *= METRIC[bit];
        }
        bit += 1;
    }
    (sign, mask_to_index(a ^ b))
}

const fn build_product_table() -> [[(i8, usize); BLADE_COUNT]; BLADE_COUNT] {
    let mut table = [[(0i8, 0usize); BLADE_COUNT]; BLADE_COUNT];
    let mut a = 0;
    while a < BLADE_COUNT {
        let mut b = 0;
        while b < BLADE_COUNT {
            table[a][b] = blade_product(BLADE_MASKS[a], BLADE_MASKS[b]);
            b += 1;
        }
        a += 1;
    }
    table
}

/// `PRODUCT_TABLE[a][b] = (sign, c)` with `blade_a · blade_b = sign · blade_c`.
pub const PRODUCT_TABLE: [[(i8, usize); BLADE_COUNT]; BLADE_COUNT] = build_product_table();

/// Grade of the blade at `index`.
pub fn blade_grade(index: usize) -> u32 {
    BLADE_MASKS[index].count_ones()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Multivector31 {
    pub coeffs: [f64; BLADE_COUNT],
}

impl Multivector31 {
    pub const ZERO: Multivector31 = Multivector31 { coeffs: [0.0; BLADE_COUNT] };

    pub const fn new(coeffs: [f64; BLADE_COUNT]) -> Self {
        Self { coeffs }
    }

    pub fn scalar(s: f64) -> Self {
        Self::basis(blade::SCALAR) * s
    }

    /// Unit blade at `index` in the canonical order.
    pub fn basis(index: usize) -> Self {
        let mut coeffs = [0.0; BLADE_COUNT];
        coeffs[index] = 1.0;
        Self { coeffs }
    }

    pub fn e_t() -> Self {
        Self::basis(blade::E_T)
    }

    pub fn i3() -> Self {
        Self::basis(blade::I3)
    }

    pub fn i_st() -> Self {
        Self::basis(blade::I_ST)
    }

    /// Coefficient-Euclidean norm squared `Σ c²`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `e_t M i₃`, the involution behind the spacetime split.
    pub fn st_involution(&self) -> Self {
        Self::e_t() * *self * Self::i3()
    }

    /// Spacetime split `M± = ½(M ± e_t M i₃)`.
    pub fn st_split(&self) -> STSplitPair {
        let swapped = self.st_involution();
        STSplitPair { minus: (*self - swapped) * 0.5, plus: (*self + swapped) * 0.5 }
    }

    /// Embeds `r + i q_i + j q_j + k q_k` as `r + q_i e_t + q_j i₃ + q_k i_st`.
    pub fn from_quaternion(q: Quaternion) -> Self {
        let mut coeffs = [0.0; BLADE_COUNT];
        coeffs[blade::SCALAR] = q.r;
        coeffs[blade::E_T] = q.i;
        coeffs[blade::I3] = q.j;
        coeffs[blade::I_ST] = q.k;
        Self { coeffs }
    }

    /// Inverse of [`Multivector31::from_quaternion`].
    ///
    /// Fails when a coefficient outside `{1, e_t, i₃, i_st}` exceeds `1e-12`.
    pub fn to_quaternion(&self) -> Result<Quaternion> {
        const TOL: f64 = 1e-12;
        let off = (0..BLADE_COUNT)
            .filter(|&b| !matches!(b, blade::SCALAR | blade::E_T | blade::I3 | blade::I_ST))
            .map(|b| self.coeffs[b].abs())
            .fold(0.0, f64::max);
        if off.is_nan() || off >= TOL {
            return Err(Error::NotInSubalgebra { magnitude: off });
        }
        let c = &self.coeffs;
        Ok(Quaternion::new(c[blade::SCALAR], c[blade::E_T], c[blade::I3], c[blade::I_ST]))
    }
}

/// Embedding of ℍ onto the volume-time subalgebra.
pub fn quat_embed(q: Quaternion) -> Multivector31 {
    Multivector31::from_quaternion(q)
}

pub fn quat_extract(m: &Multivector31) -> Result<Quaternion> {
    m.to_quaternion()
}

/// The two parts of the spacetime split.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct STSplitPair {
    pub minus: Multivector31,
    pub plus: Multivector31,
}

impl STSplitPair {
    pub fn sum(&self) -> Multivector31 {
        self.minus + self.plus
    }
}

impl Add for Multivector31 {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}

impl AddAssign for Multivector31 {
    fn add_assign(&mut self, o: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a += b;
        }
    }
}

impl Sub for Multivector31 {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(o.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Multivector31 {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for Multivector31 {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for c in &mut self.coeffs {
            *c *= s;
        }
        self
    }
}

/// Geometric product.
impl Mul for Multivector31 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; BLADE_COUNT];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                let (sign, c) = PRODUCT_TABLE[a][b];
                out[c] += f64::from(sign) * ca * cb;
            }
        }
        Self { coeffs: out }
    }
}

impl std::iter::Sum for Multivector31 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}
