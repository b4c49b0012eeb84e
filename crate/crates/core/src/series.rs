//! Truncated regular power series with quaternion coefficients.
//!
//! A [`Side::Left`] series is `sum q^n a_n`, a [`Side::Right`] series is
//! `sum a_n q^n`. All operations here are exact coefficient manipulations;
//! nothing is truncated silently, so the order of a product is the sum of
//! the orders of its factors.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A regular power series truncated at `order` (coefficients `a_0..=a_order`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SeriesSpec<T>", into = "SeriesSpec<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RegularSeries<T: Scalar> {
    side: Side,
    coeffs: Vec<Quaternion<T>>,
}

/// Wire form of a series: `{"side": "left", "coeffs": [[w,x,y,z], ...], "order": N}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesSpec<T> {
    pub side: Side,
    pub coeffs: Vec<Quaternion<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl<T: Scalar> TryFrom<SeriesSpec<T>> for RegularSeries<T> {
    type Error = Error;
    fn try_from(s: SeriesSpec<T>) -> Result<Self> {
        match s.order {
            Some(n) => RegularSeries::with_order(s.side, s.coeffs, n),
            None => Ok(RegularSeries::new(s.side, s.coeffs)),
        }
    }
}

impl<T: Scalar> From<RegularSeries<T>> for SeriesSpec<T> {
    fn from(s: RegularSeries<T>) -> Self {
        SeriesSpec { side: s.side, order: Some(s.order()), coeffs: s.coeffs }
    }
}

/// Result of evaluating a truncated series at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEvalReport<T> {
    pub value: Quaternion<T>,
    pub terms_used: usize,
    /// `|a_N| |q|^N`, the magnitude of the last term kept.
    pub trunc_bound: T,
}

impl<T: Scalar> RegularSeries<T> {
    /// Series of order `coeffs.len() - 1`; an empty list is the zero constant.
    pub fn new(side: Side, mut coeffs: Vec<Quaternion<T>>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Quaternion::zero());
        }
        RegularSeries { side, coeffs }
    }

    /// Series with an explicit truncation order; missing coefficients are zero.
    pub fn with_order(side: Side, mut coeffs: Vec<Quaternion<T>>, order: usize) -> Result<Self> {
        if coeffs.len() > order + 1 {
            return Err(Error::Usage(format!(
                "{} coefficients do not fit truncation order {order}",
                coeffs.len()
            )));
        }
        coeffs.resize(order + 1, Quaternion::zero());
        Ok(RegularSeries { side, coeffs })
    }

    pub fn left(coeffs: Vec<Quaternion<T>>) -> Self {
        Self::new(Side::Left, coeffs)
    }

    pub fn right(coeffs: Vec<Quaternion<T>>) -> Self {
        Self::new(Side::Right, coeffs)
    }

    /// Intrinsic series from real coefficients.
    pub fn from_real(side: Side, coeffs: &[T]) -> Self {
        Self::new(side, coeffs.iter().map(|&c| Quaternion::from_real(c)).collect())
    }

    pub fn constant(side: Side, c: Quaternion<T>) -> Self {
        Self::new(side, vec![c])
    }

    pub fn one(side: Side) -> Self {
        Self::constant(side, Quaternion::one())
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Quaternion<T>] {
        &self.coeffs
    }

    /// Coefficient `a_n`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Quaternion<T> {
        self.coeffs.get(n).copied().unwrap_or_else(Quaternion::zero)
    }

    pub fn is_intrinsic(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Index of the last coefficient that is not exactly zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Keeps `a_0..=a_order`, padding with zeros if needed.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Quaternion::zero());
        RegularSeries { side: self.side, coeffs }
    }

    fn map(&self, side: Side, f: impl Fn(Quaternion<T>) -> Quaternion<T>) -> Self {
        RegularSeries { side, coeffs: self.coeffs.iter().map(|&c| f(c)).collect() }
    }

    /// Coefficients `a_n λ`. For a left series this is the pointwise product `f(q) λ`.
    pub fn right_mul(&self, lambda: Quaternion<T>) -> Self {
        self.map(self.side, |c| c * lambda)
    }

    /// Coefficients `λ a_n`. For a right series this is the pointwise product `λ f(q)`.
    pub fn left_mul(&self, lambda: Quaternion<T>) -> Self {
        self.map(self.side, |c| lambda * c)
    }

    /// Horner evaluation respecting the side.
    pub fn eval(&self, q: Quaternion<T>) -> Quaternion<T> {
        let mut acc = Quaternion::zero();
        match self.side {
            Side::Left => {
                for &c in self.coeffs.iter().rev() {
                    acc = q * acc + c;
                }
            }
            Side::Right => {
                for &c in self.coeffs.iter().rev() {
                    acc = acc * q + c;
                }
            }
        }
        acc
    }

    fn check_side(&self, other: &Self, op: &str) -> Result<()> {
        if self.side != other.side {
            return Err(Error::Usage(format!(
                "{op}: side mismatch ({} vs {})",
                self.side, other.side
            )));
        }
        Ok(())
    }

    /// Regular product: `c_n = sum_{k<=n} a_k b_{n-k}` on either side.
    pub fn star(&self, g: &Self) -> Result<Self> {
        self.check_side(g, "star product")?;
        let n = self.order() + g.order();
        let mut coeffs = vec![Quaternion::zero(); n + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, &b) in g.coeffs.iter().enumerate() {
                coeffs[k + l] += a * b;
            }
        }
        Ok(RegularSeries { side: self.side, coeffs })
    }

    /// Regular conjugate `f^c`: coefficientwise quaternion conjugation.
    pub fn regular_conjugate(&self) -> Self {
        self.map(self.side, Quaternion::conj)
    }

    /// Symmetrization `f^s = f * f^c`, snapped to exactly real coefficients.
    pub fn symmetrization(&self) -> Result<Self> {
        let raw = self.star(&self.regular_conjugate())?;
        let tol = T::snap_tolerance();
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for (n, c) in raw.coeffs.iter().enumerate() {
            let residue = c.im().max_abs();
            if residue > tol {
                return Err(Error::Consistency(format!(
                    "symmetrization coefficient {n} has imaginary residue {residue:?}"
                )));
            }
            coeffs.push(Quaternion::from_real(c.w));
        }
        Ok(RegularSeries { side: self.side, coeffs })
    }

    /// Regular reciprocal `f^{-*} = (f^s)^{-1} f^c`, truncated at `order`.
    ///
    /// `f^s` is inverted as a real power series, which needs `f^s(0) = |a_0|^2 != 0`.
    pub fn regular_reciprocal(&self, order: usize) -> Result<Self> {
        if self.coeff(0).is_zero() {
            return Err(Error::Singular(
                "a_0 = 0, so 0 lies in Z_{f^s}, the zero set of the symmetrization".into(),
            ));
        }
        let sym = self.symmetrization()?;
        let s: Vec<T> = sym.coeffs.iter().map(|c| c.w).collect();
        let inv = invert_real_series(&s, order)?;
        let inv = RegularSeries::from_real(self.side, &inv);
        Ok(inv.star(&self.regular_conjugate())?.truncate(order))
    }

    /// Slice derivative: `a_n -> (n+1) a_{n+1}`.
    pub fn slice_derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(self.side, Quaternion::zero());
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(n, &c)| c.scale(T::from_usize_lossy(n + 1)))
            .collect();
        RegularSeries { side: self.side, coeffs }
    }

    /// `eta(f)(q) = conj(f(conj q))`: flips the side and conjugates coefficients.
    pub fn eta(&self) -> Self {
        self.map(self.side.flip(), Quaternion::conj)
    }

    /// Splits `f = h_0 + h_1 i + h_2 j + h_3 k` into intrinsic (real) series.
    pub fn intrinsic_components(&self) -> [Self; 4] {
        let part = |sel: fn(&Quaternion<T>) -> T| {
            self.map(self.side, |c| Quaternion::from_real(sel(&c)))
        };
        [part(|c| c.w), part(|c| c.x), part(|c| c.y), part(|c| c.z)]
    }

    /// Inverse of [`RegularSeries::intrinsic_components`].
    pub fn from_components(components: &[Self; 4]) -> Result<Self> {
        let side = components[0].side;
        let order = components.iter().map(|c| c.order()).max().unwrap_or(0);
        let mut coeffs = vec![Quaternion::zero(); order + 1];
        for (h, basis) in components.iter().zip(Quaternion::<T>::basis()) {
            if h.side != side {
                return Err(Error::Usage("components disagree on side".into()));
            }
            if !h.is_intrinsic() {
                return Err(Error::Usage("component series must have real coefficients".into()));
            }
            for (n, c) in h.coeffs.iter().enumerate() {
                coeffs[n] += basis.scale(c.w);
            }
        }
        Ok(RegularSeries { side, coeffs })
    }

    /// Coefficientwise comparison within `tol`, ignoring trailing zeros.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        if self.side != other.side {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| (self.coeff(k) - other.coeff(k)).max_abs() <= tol)
    }

    /// Largest coefficient deviation from `other`, over the common length.
    pub fn max_coeff_diff(&self, other: &Self) -> T {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).max_abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Quaternion<T>, Quaternion<T>) -> Quaternion<T>) -> Result<Self> {
        self.check_side(other, "series addition")?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| f(self.coeff(k), other.coeff(k))).collect();
        Ok(RegularSeries { side: self.side, coeffs })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl<T: Real> RegularSeries<T> {
    pub fn eval_report(&self, q: Quaternion<T>) -> SeriesEvalReport<T> {
        let n = self.order();
        let last = self.coeffs[n].norm() * q.norm().powi(n as i32);
        SeriesEvalReport { value: self.eval(q), terms_used: n + 1, trunc_bound: last }
    }
}

/// Equality within [`Scalar::coeff_tolerance`] after trimming trailing zeros.
impl<T: Scalar> PartialEq for RegularSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, T::coeff_tolerance())
    }
}

impl<T: Scalar> Neg for &RegularSeries<T> {
    type Output = RegularSeries<T>;
    fn neg(self) -> RegularSeries<T> {
        self.map(self.side, |c| -c)
    }
}

/// Panics on side mismatch; use [`RegularSeries::try_add`] for a fallible version.
impl<T: Scalar> Add for &RegularSeries<T> {
    type Output = RegularSeries<T>;
    fn add(self, rhs: Self) -> RegularSeries<T> {
        self.try_add(rhs).expect("series sides must match")
    }
}

impl<T: Scalar> Sub for &RegularSeries<T> {
    type Output = RegularSeries<T>;
    fn sub(self, rhs: Self) -> RegularSeries<T> {
        self.try_sub(rhs).expect("series sides must match")
    }
}

/// Power-series reciprocal of a real series with `s_0 != 0`, up to `order`.
pub fn invert_real_series<T: Scalar>(s: &[T], order: usize) -> Result<Vec<T>> {
    let s0 = match s.first() {
        Some(&v) if !v.is_zero() => v,
        _ => return Err(Error::Singular("constant term of the series is zero".into())),
    };
    let mut r = Vec::with_capacity(order + 1);
    r.push(T::one() / s0);
    for n in 1..=order {
        let mut acc = T::zero();
        for k in 1..=n.min(s.len() - 1) {
            acc = acc + s[k] * r[n - k];
        }
        r.push(-acc / s0);
    }
    Ok(r)
}

pub fn series_eval<T: Real>(f: &RegularSeries<T>, q: Quaternion<T>) -> SeriesEvalReport<T> {
    f.eval_report(q)
}

pub fn star_product<T: Scalar>(f: &RegularSeries<T>, g: &RegularSeries<T>) -> Result<RegularSeries<T>> {
    f.star(g)
}

pub fn regular_conjugate<T: Scalar>(f: &RegularSeries<T>) -> RegularSeries<T> {
    f.regular_conjugate()
}

pub fn symmetrization<T: Scalar>(f: &RegularSeries<T>) -> Result<RegularSeries<T>> {
    f.symmetrization()
}

pub fn regular_reciprocal<T: Scalar>(f: &RegularSeries<T>, order: usize) -> Result<RegularSeries<T>> {
    f.regular_reciprocal(order)
}

pub fn slice_derivative_series<T: Scalar>(f: &RegularSeries<T>) -> RegularSeries<T> {
    f.slice_derivative()
}

pub fn eta_series<T: Scalar>(f: &RegularSeries<T>) -> RegularSeries<T> {
    f.eta()
}

pub fn intrinsic_components<T: Scalar>(f: &RegularSeries<T>) -> [RegularSeries<T>; 4] {
    f.intrinsic_components()
}
