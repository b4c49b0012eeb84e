//! Quaternion arithmetic and the slice structure of H.
//!
//! Every quaternion `q = x + I y` with `x` real, `y >= 0` and `I` a unit
//! imaginary quaternion (`I^2 = -1`). The set of such `I` is the unit sphere
//! `S` of purely imaginary quaternions and each `I` spans a complex plane
//! `C_I = {x + I y}` sitting inside H.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// A quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Deserialize)]
#[serde(from = "[T; 4]")]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T> From<[T; 4]> for Quaternion<T> {
    fn from([w, x, y, z]: [T; 4]) -> Self {
        Quaternion { w, x, y, z }
    }
}

impl<T: Serialize> Serialize for Quaternion<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.w, &self.x, &self.y, &self.z].serialize(s)
    }
}

impl<T> From<Quaternion<T>> for [T; 4] {
    fn from(q: Quaternion<T>) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl<T: Scalar> Quaternion<T> {
    #[inline]
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    #[inline]
    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    #[inline]
    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// The basis `(1, i, j, k)` in order.
    pub fn basis() -> [Self; 4] {
        [Self::one(), Self::i(), Self::j(), Self::k()]
    }

    #[inline]
    pub fn from_real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn to_array(self) -> [T; 4] {
        self.into()
    }

    #[inline]
    pub fn re(self) -> T {
        self.w
    }

    /// `q - Re(q)`.
    #[inline]
    pub fn im(self) -> Self {
        Self::new(T::zero(), self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `|q|^2 = q conj(q)`, computed directly from the components.
    #[inline]
    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Euclidean inner product `Re(p conj(q))`.
    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Self::zero()
    }

    #[inline]
    pub fn is_real(self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Largest absolute component; a cheap norm for tolerance checks.
    pub fn max_abs(self) -> T {
        let mut m = self.w.abs();
        for c in [self.x, self.y, self.z] {
            if c.abs() > m {
                m = c.abs();
            }
        }
        m
    }

    /// Multiplicative inverse `conj(q) / |q|^2`.
    pub fn inverse(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::Domain("inverse of the zero quaternion".into()));
        }
        let c = self.conj();
        Ok(Self::new(c.w / n, c.x / n, c.y / n, c.z / n))
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }
}

impl<T: Real> Quaternion<T> {
    /// `|q|`, scaled by the largest component so that huge or tiny entries do
    /// not overflow or underflow.
    pub fn norm(self) -> T {
        let m = self.max_abs();
        if m.is_zero() || !m.is_finite() {
            return m;
        }
        let s = self.scale(m.recip());
        m * s.norm_sqr().sqrt()
    }

    /// Norm of the imaginary part, computed like [`Quaternion::norm`].
    pub fn im_norm(self) -> T {
        self.im().norm()
    }

    /// Unit quaternion in the direction of `q`.
    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Domain("cannot normalize the zero quaternion".into()));
        }
        Ok(self.scale(n.recip()))
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Exponential `e^x (cos y + I sin y)` for `q = x + I y`.
    pub fn exp(self) -> Self {
        let ex = self.w.exp();
        let y = self.im_norm();
        if y.is_zero() {
            return Self::from_real(ex);
        }
        let (s, c) = y.sin_cos();
        let f = ex * s / y;
        Self::new(ex * c, self.x * f, self.y * f, self.z * f)
    }

    pub fn slice_decompose(self) -> SliceCoordinates<T> {
        slice_decompose(self)
    }
}

impl<T: Scalar> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T: Scalar> Mul for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (o.w, o.x, o.y, o.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl<T: Scalar> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> MulAssign for Quaternion<T> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Scalar> Sum for Quaternion<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: fmt::Display + Scalar> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// `hamilton_product(p, q) = p q`.
pub fn quat_mul<T: Scalar>(p: Quaternion<T>, q: Quaternion<T>) -> Quaternion<T> {
    p * q
}

pub fn quat_inverse<T: Scalar>(q: Quaternion<T>) -> Result<Quaternion<T>> {
    q.inverse()
}

pub fn quat_exp<T: Real>(q: Quaternion<T>) -> Quaternion<T> {
    q.exp()
}

/// An element of the sphere `S` of unit purely imaginary quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[T; 3]", bound(serialize = "T: Scalar + Serialize"))]
pub struct ImaginaryUnit<T>(Quaternion<T>);

impl<T: Scalar> From<ImaginaryUnit<T>> for [T; 3] {
    fn from(u: ImaginaryUnit<T>) -> Self {
        [u.0.x, u.0.y, u.0.z]
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ImaginaryUnit<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[T; 3]>::deserialize(d)?;
        ImaginaryUnit::from_vector(x, y, z).map_err(serde::de::Error::custom)
    }
}

impl<T: Real> ImaginaryUnit<T> {
    /// Normalizes the imaginary part of `q`; fails when it vanishes.
    pub fn new(q: Quaternion<T>) -> Result<Self> {
        let im = q.im();
        let n = im.norm();
        if n.is_zero() || !n.is_finite() {
            return Err(Error::Domain("imaginary part is zero; no unit direction".into()));
        }
        Ok(ImaginaryUnit(im.scale(n.recip())))
    }

    pub fn from_vector(x: T, y: T, z: T) -> Result<Self> {
        Self::new(Quaternion::new(T::zero(), x, y, z))
    }

    pub fn i() -> Self {
        ImaginaryUnit(Quaternion::i())
    }

    pub fn j() -> Self {
        ImaginaryUnit(Quaternion::j())
    }

    pub fn k() -> Self {
        ImaginaryUnit(Quaternion::k())
    }

    #[inline]
    pub fn as_quaternion(self) -> Quaternion<T> {
        self.0
    }

    /// Some unit orthogonal to `self`, so that `(self, J, self*J)` is an
    /// oriented orthonormal frame of `Im(H)`.
    pub fn orthogonal(self) -> Self {
        let u = self.0;
        // cross with the basis vector least aligned with u
        let (ax, ay, az) = (u.x.abs(), u.y.abs(), u.z.abs());
        let e = if ax <= ay && ax <= az {
            Quaternion::i()
        } else if ay <= az {
            Quaternion::j()
        } else {
            Quaternion::k()
        };
        let v = e - u.scale(e.dot(u));
        ImaginaryUnit::new(v).expect("orthogonal complement is non-degenerate")
    }

    /// Embeds `z = x + i y` into `C_I`.
    #[inline]
    pub fn embed(self, x: T, y: T) -> Quaternion<T> {
        Quaternion::new(x, self.0.x * y, self.0.y * y, self.0.z * y)
    }

    #[inline]
    pub fn embed_complex(self, z: Complex<T>) -> Quaternion<T> {
        self.embed(z.re, z.im)
    }
}

/// Slice coordinates `q = x + unit * y` with `y >= 0`.
///
/// At real points `unit` is fixed to `i`; nothing downstream may depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct SliceCoordinates<T: Real> {
    pub x: T,
    pub y: T,
    pub unit: ImaginaryUnit<T>,
}

impl<T: Real> SliceCoordinates<T> {
    pub fn new(x: T, y: T, unit: ImaginaryUnit<T>) -> Self {
        SliceCoordinates { x, y, unit }
    }

    pub fn to_quaternion(self) -> Quaternion<T> {
        slice_embed(Complex::new(self.x, self.y), self.unit)
    }

    pub fn complex(self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }
}

pub fn slice_decompose<T: Real>(q: Quaternion<T>) -> SliceCoordinates<T> {
    let y = q.im_norm();
    let unit = if y.is_zero() {
        ImaginaryUnit::i()
    } else {
        ImaginaryUnit(q.im().scale(y.recip()))
    };
    SliceCoordinates { x: q.w, y, unit }
}

/// `tau_I(x + i y) = x + I y`.
pub fn slice_embed<T: Real>(z: Complex<T>, unit: ImaginaryUnit<T>) -> Quaternion<T> {
    unit.embed_complex(z)
}

/// Reads a quaternion lying in `C_I` back as a complex number; the part of
/// `q` orthogonal to `C_I` is dropped.
pub fn slice_project<T: Real>(q: Quaternion<T>, unit: ImaginaryUnit<T>) -> Complex<T> {
    Complex::new(q.w, q.dot(unit.as_quaternion()))
}
