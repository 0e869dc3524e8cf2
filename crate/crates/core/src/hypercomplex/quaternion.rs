//! Real quaternions `q = r + i·q_i + j·q_j + k·q_k` with `i² = j² = k² = ijk = -1`.

use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub r: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(r: f64, i: f64, j: f64, k: f64) -> Self {
        Self { r, i, j, k }
    }

    #[inline]
    pub const fn from_scalar(r: f64) -> Self {
        Self::new(r, 0.0, 0.0, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.r, self.i, self.j, self.k]
    }

    /// `cos θ + i sin θ`, i.e. `e^{iθ}`.
    #[inline]
    pub fn exp_i(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s, 0.0, 0.0)
    }

    /// `cos θ + j sin θ`, i.e. `e^{jθ}`.
    #[inline]
    pub fn exp_j(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, 0.0, s, 0.0)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.r, -self.i, -self.j, -self.k)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Scalar part `Sc(q) = ½(q + q̃) = q_r`.
    #[inline]
    pub fn scalar_part(self) -> f64 {
        self.r
    }

    pub fn is_finite(self) -> bool {
        self.r.is_finite() && self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }

    /// The ± split `q∓ = ½(q ∓ i q j)`.
    ///
    /// Evaluated through the explicit component form
    /// `q₊ = ½(r+k, i−j, j−i, r+k)`, `q₋ = ½(r−k, i+j, i+j, k−r)`.
    pub fn split(self) -> SplitPair {
        let Self { r, i, j, k } = self;
        let (rk_plus, ij_minus) = (0.5 * (r + k), 0.5 * (i - j));
        let (rk_minus, ij_plus) = (0.5 * (r - k), 0.5 * (i + j));
        SplitPair {
            minus: Quaternion::new(rk_minus, ij_plus, ij_plus, -rk_minus),
            plus: Quaternion::new(rk_plus, ij_minus, -ij_minus, rk_plus),
        }
    }

    /// `i q j`; the involution whose ±1 eigenspaces are the split parts.
    #[inline]
    pub fn sandwich_ij(self) -> Self {
        Self::I * self * Self::J
    }
}

/// The two parts of the quaternion ± split; `minus + plus` is the source.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPair {
    pub minus: Quaternion,
    pub plus: Quaternion,
}

impl SplitPair {
    pub fn sum(self) -> Quaternion {
        self.minus + self.plus
    }
}

/// `(Sc(p₊ q̃₋), Sc(p₋ q̃₊))`; both vanish for all `p`, `q`.
pub fn mixed_scalar(p: Quaternion, q: Quaternion) -> (f64, f64) {
    let (ps, qs) = (p.split(), q.split());
    ((ps.plus * qs.minus.conj()).scalar_part(), (ps.minus * qs.plus.conj()).scalar_part())
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.r, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.r * q.r - p.i * q.i - p.j * q.j - p.k * q.k,
            p.r * q.i + p.i * q.r + p.j * q.k - p.k * q.j,
            p.r * q.j - p.i * q.k + p.j * q.r + p.k * q.i,
            p.r * q.k + p.i * q.j - p.j * q.i + p.k * q.r,
        )
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, q: Self) {
        *self = *self * q;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.r * s, self.i * s, self.j * s, self.k * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}
