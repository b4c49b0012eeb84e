//! Intrinsic holomorphic stems.
//!
//! A stem is a complex function `h` with `h(conj z) = conj h(z)` on a region
//! symmetric about the real axis. Extended to H by `x + I y -> u + I v`, it
//! becomes an intrinsic (slice-preserving) regular function, and four of them
//! tensored with `1, i, j, k` describe every regular function.
//!
//! Stems are built from a small set of closed forms and combinators, each
//! carrying its own derivative where one is known. Evaluations report an
//! error estimate, which is zero for closed forms and propagated to first
//! order through the combinators.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::region::Region;

/// Value of a stem together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StemValue {
    pub value: Complex64,
    pub error: f64,
}

impl StemValue {
    pub fn exact(value: Complex64) -> Self {
        StemValue { value, error: 0.0 }
    }
}

/// A holomorphic function of one complex variable.
pub trait Holomorphic: Send + Sync + fmt::Debug {
    fn eval(&self, z: Complex64) -> Result<StemValue>;

    /// Complex derivative, when it can be produced without numerics.
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>>;

    fn is_zero(&self) -> bool {
        false
    }
}

type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Step of the four-point central difference used for numeric derivatives.
pub const NUMERIC_DERIVATIVE_STEP: f64 = 1e-3;

#[derive(Debug)]
struct Zero;

impl Holomorphic for Zero {
    fn eval(&self, _: Complex64) -> Result<StemValue> {
        Ok(StemValue::exact(Complex64::new(0.0, 0.0)))
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        Some(Arc::new(Zero))
    }
    fn is_zero(&self) -> bool {
        true
    }
}

/// Real-coefficient polynomial `sum c_n z^n`.
#[derive(Debug)]
struct Polynomial(Vec<f64>);

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(n, &a)| n as f64 * a).collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0))
        .collect()
}

impl Holomorphic for Polynomial {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        Ok(StemValue::exact(horner(&self.0, z)))
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        Some(polynomial_arc(poly_derivative(&self.0)))
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

fn polynomial_arc(c: Vec<f64>) -> Arc<dyn Holomorphic> {
    if c.iter().all(|&a| a == 0.0) {
        Arc::new(Zero)
    } else {
        Arc::new(Polynomial(c))
    }
}

/// Real rational function `num(z) / den(z)`.
#[derive(Debug)]
struct Rational {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl Holomorphic for Rational {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        let d = horner(&self.den, z);
        if d.norm() == 0.0 {
            return Err(Error::Pole(format!("denominator vanishes at {z}")));
        }
        Ok(StemValue::exact(horner(&self.num, z) / d))
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        let num = poly_sub(
            &poly_mul(&poly_derivative(&self.num), &self.den),
            &poly_mul(&self.num, &poly_derivative(&self.den)),
        );
        Some(Arc::new(Rational { num, den: poly_mul(&self.den, &self.den) }))
    }
    fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0.0)
    }
}

/// `e^{rate z}`.
#[derive(Debug)]
struct ExpRate(f64);

impl Holomorphic for ExpRate {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        Ok(StemValue::exact((z * self.0).exp()))
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        Some(Arc::new(Linear(vec![(self.0, Arc::new(ExpRate(self.0)) as Arc<dyn Holomorphic>)])))
    }
}

/// Real linear combination `sum c_i h_i`.
#[derive(Debug)]
struct Linear(Vec<(f64, Arc<dyn Holomorphic>)>);

impl Holomorphic for Linear {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        let mut out = StemValue::exact(Complex64::new(0.0, 0.0));
        for (c, h) in &self.0 {
            let v = h.eval(z)?;
            out.value += v.value * *c;
            out.error += c.abs() * v.error;
        }
        Ok(out)
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        let terms = self
            .0
            .iter()
            .map(|(c, h)| h.derivative().map(|d| (*c, d)))
            .collect::<Option<Vec<_>>>()?;
        Some(Arc::new(Linear(terms)))
    }
}

#[derive(Debug)]
struct Product(Arc<dyn Holomorphic>, Arc<dyn Holomorphic>);

impl Holomorphic for Product {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        let a = self.0.eval(z)?;
        let b = self.1.eval(z)?;
        Ok(StemValue {
            value: a.value * b.value,
            error: a.value.norm() * b.error + b.value.norm() * a.error + a.error * b.error,
        })
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        let da = self.0.derivative()?;
        let db = self.1.derivative()?;
        Some(Arc::new(Linear(vec![
            (1.0, Arc::new(Product(da, self.1.clone())) as Arc<dyn Holomorphic>),
            (1.0, Arc::new(Product(self.0.clone(), db))),
        ])))
    }
}

/// `z -> h(z + shift)` with a real shift.
#[derive(Debug)]
struct Shift(Arc<dyn Holomorphic>, f64);

impl Holomorphic for Shift {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        self.0.eval(z + self.1)
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        Some(Arc::new(Shift(self.0.derivative()?, self.1)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// User-supplied closure, optionally with an analytic derivative.
struct FnStem {
    f: ComplexFn,
    df: Option<Arc<dyn Holomorphic>>,
    name: String,
}

impl fmt::Debug for FnStem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnStem({})", self.name)
    }
}

impl Holomorphic for FnStem {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        Ok(StemValue::exact((self.f)(z)))
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        self.df.clone()
    }
}

/// Four-point central difference along the real direction.
#[derive(Debug)]
struct NumericDerivative(Arc<dyn Holomorphic>, f64);

impl Holomorphic for NumericDerivative {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        let h = self.1;
        let f = |dx: f64| self.0.eval(z + dx);
        let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
        let value = (m2.value - m1.value * 8.0 + p1.value * 8.0 - p2.value) / (12.0 * h);
        let noise = (m2.error + 8.0 * m1.error + 8.0 * p1.error + p2.error) / (12.0 * h);
        // difference to the two-point rule as a truncation estimate
        let crude = (p1.value - m1.value) / (2.0 * h);
        Ok(StemValue { value, error: noise + (value - crude).norm() * h * h })
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        None
    }
}

/// Region of `z -> h(z + shift)` given the region of `h`. Disks and annuli are
/// not translation invariant, so they shrink to the largest origin-centred
/// region inside the translate.
fn shifted_region(region: &Region, shift: f64) -> Region {
    if shift == 0.0 {
        return region.clone();
    }
    match region {
        Region::HalfPlane { re_min } => Region::half_plane(re_min - shift),
        Region::Entire => Region::Entire,
        Region::Disk { radius } => Region::disk((radius - shift.abs()).max(0.0)),
        Region::Annulus { inner, outer } => Region::Annulus {
            inner: inner + shift.abs(),
            outer: outer - shift.abs(),
        },
        Region::Intersection { parts } => Region::Intersection {
            parts: parts.iter().map(|p| shifted_region(p, shift)).collect(),
        },
    }
}

/// An intrinsic holomorphic stem on an axially symmetric region.
#[derive(Clone, Debug)]
pub struct IntrinsicStem {
    func: Arc<dyn Holomorphic>,
    region: Region,
}

impl IntrinsicStem {
    pub fn from_holomorphic(func: Arc<dyn Holomorphic>, region: Region) -> Self {
        IntrinsicStem { func, region }
    }

    /// Wraps a closure. The closure must satisfy `f(conj z) = conj f(z)`;
    /// [`IntrinsicStem::check_intrinsic`] spot-checks that.
    pub fn from_fn<F>(name: &str, region: Region, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_holomorphic(
            Arc::new(FnStem { f: Arc::new(f), df: None, name: name.into() }),
            region,
        )
    }

    /// Closure stem with an analytic derivative stem.
    pub fn from_fn_with_derivative<F>(name: &str, region: Region, f: F, derivative: IntrinsicStem) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::from_holomorphic(
            Arc::new(FnStem { f: Arc::new(f), df: Some(derivative.func), name: name.into() }),
            region,
        )
    }

    pub fn zero() -> Self {
        Self::from_holomorphic(Arc::new(Zero), Region::Entire)
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(vec![c])
    }

    /// `z -> z`.
    pub fn identity() -> Self {
        Self::polynomial(vec![0.0, 1.0])
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self::from_holomorphic(polynomial_arc(coeffs), Region::Entire)
    }

    /// `z -> num(z) / den(z)` with real coefficients; zeros of `den` are poles.
    pub fn rational(num: Vec<f64>, den: Vec<f64>, region: Region) -> Self {
        if num.iter().all(|&c| c == 0.0) {
            return Self::zero();
        }
        Self::from_holomorphic(Arc::new(Rational { num, den }), region)
    }

    pub fn exp() -> Self {
        Self::exp_rate(1.0)
    }

    /// `z -> e^{rate z}`.
    pub fn exp_rate(rate: f64) -> Self {
        Self::from_holomorphic(Arc::new(ExpRate(rate)), Region::Entire)
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn with_region(mut self, region: Region) -> Self {
        self.region = region;
        self
    }

    pub fn holomorphic(&self) -> &Arc<dyn Holomorphic> {
        &self.func
    }

    pub fn is_zero(&self) -> bool {
        self.func.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.func.eval(z)?.value)
    }

    pub fn eval_with_error(&self, z: Complex64) -> Result<StemValue> {
        self.func.eval(z)
    }

    /// Complex derivative. Uses the analytic derivative when there is one;
    /// otherwise a four-point central difference if `numeric_fallback` is set.
    pub fn derivative(&self, numeric_fallback: bool) -> Result<Self> {
        if let Some(d) = self.func.derivative() {
            return Ok(Self::from_holomorphic(d, self.region.clone()));
        }
        if numeric_fallback {
            return Ok(self.numeric_derivative(NUMERIC_DERIVATIVE_STEP));
        }
        Err(Error::Capability(format!(
            "stem {:?} has no analytic derivative and numeric differentiation is disabled",
            self.func
        )))
    }

    pub fn numeric_derivative(&self, step: f64) -> Self {
        Self::from_holomorphic(Arc::new(NumericDerivative(self.func.clone(), step)), self.region.clone())
    }

    /// `sum c_i h_i`; zero terms are dropped.
    pub fn linear_combination(terms: &[(f64, &IntrinsicStem)]) -> Self {
        let mut region = Region::Entire;
        let mut kept = Vec::new();
        for (c, h) in terms {
            region = region.intersect(&h.region);
            if *c != 0.0 && !h.is_zero() {
                kept.push((*c, h.func.clone()));
            }
        }
        match kept.len() {
            0 => Self::zero().with_region(region),
            1 if kept[0].0 == 1.0 => Self::from_holomorphic(kept.pop().unwrap().1, region),
            _ => Self::from_holomorphic(Arc::new(Linear(kept)), region),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combination(&[(1.0, self), (1.0, other)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combination(&[(1.0, self), (-1.0, other)])
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::linear_combination(&[(c, self)])
    }

    /// Pointwise product; intrinsic stems form a commutative algebra.
    pub fn mul(&self, other: &Self) -> Self {
        let region = self.region.intersect(&other.region);
        if self.is_zero() || other.is_zero() {
            return Self::zero().with_region(region);
        }
        Self::from_holomorphic(Arc::new(Product(self.func.clone(), other.func.clone())), region)
    }

    /// `z -> h(z + shift)`; the region moves by `-shift`.
    pub fn shift_arg(&self, shift: f64) -> Self {
        let region = shifted_region(&self.region, shift);
        if self.is_zero() {
            return Self::zero().with_region(region);
        }
        Self::from_holomorphic(Arc::new(Shift(self.func.clone(), shift)), region)
    }

    /// Spot-checks `h(conj z) = conj h(z)` and realness on the axis at the
    /// given points, within `tol` relative to `max(1, |h(z)|)`.
    pub fn check_intrinsic(&self, probes: &[(f64, f64)], tol: f64) -> Result<()> {
        for &(x, y) in probes {
            let z = Complex64::new(x, y);
            let a = self.eval(z)?;
            let b = self.eval(z.conj())?;
            let dev = (a.conj() - b).norm();
            if dev > tol * a.norm().max(1.0) || !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::InvalidStem(format!(
                    "h(conj z) != conj h(z) at z = {z} (deviation {dev:e})"
                )));
            }
        }
        Ok(())
    }

    /// Probe points for [`IntrinsicStem::check_intrinsic`] derived from the region.
    pub fn default_probes(&self) -> Vec<(f64, f64)> {
        let mut p = self.region.slice_probes();
        if let Ok(xs) = self.region.chebyshev_real_probes(3) {
            p.extend(xs.into_iter().map(|x| (x, 0.0)));
        }
        p
    }
}
