//! Left and right quaternionic Laplace transforms.
//!
//! Writing `f = sum f_m J_m` with real `f_m`, the left transform is
//! `sum L{f_m}(s) J_m` and the right one `sum J_m L{f_m}(s)`: both are
//! tensor-form regular functions whose stems are the classical transforms of
//! the real components. The four complex integrals share one quadrature.
//!
//! Panels are planned once per cell of the `s`-slice and reused for every
//! point in it. A fixed quadrature rule is an entire function of `s`, so
//! transforms evaluated this way stay holomorphic to rounding inside a cell,
//! which is what finite-difference regularity checks see.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, partition};
use crate::region::Region;
use crate::series::Side;
use crate::slice_fn::{reciprocal_linear_stems, Evaluation, SliceRegularFunction};
use crate::stem::{Holomorphic, IntrinsicStem, StemValue};
use crate::time_fn::{ExpOrder, TimeDomainFunction};
use crate::Quat;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Absolute error budget per evaluation, split evenly between the
    /// quadrature on `[0, T*]` and the truncated tail.
    pub abs_tol: f64,
    /// Maximum number of panels per integral.
    pub max_subdivisions: usize,
    /// Inflation of the declared growth constant `K` in the tail bound.
    pub tail_safety: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-10, max_subdivisions: 4000, tail_safety: 10.0 }
    }
}

impl QuadratureConfig {
    pub fn with_tolerance(abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Usage(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Usage("max_subdivisions must be positive".into()));
        }
        if !(self.tail_safety >= 1.0) {
            return Err(Error::Usage(format!("tail_safety must be >= 1, got {}", self.tail_safety)));
        }
        Ok(())
    }
}

/// Width of the planning cells in `Re(s) - a` and `|Im(s)|`.
const CELL: f64 = 0.25;
/// Cache entries kept before a cache is flushed.
const CACHE_LIMIT: usize = 1 << 16;

type Vector = [f64; 8];

/// `∫_0^∞ e^{-t z} t^power f_m(t) dt` for the four real components at once.
struct Kernel {
    f: TimeDomainFunction,
    order: ExpOrder,
    power: u32,
    cfg: QuadratureConfig,
    values: RwLock<HashMap<(u64, u64), (Vector, f64)>>,
    plans: RwLock<HashMap<(i64, i64), Arc<Vec<f64>>>>,
    child: OnceLock<Arc<Kernel>>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laplace[t^{} {}]", self.power, self.f.label())
    }
}

impl Kernel {
    fn new(f: TimeDomainFunction, power: u32, cfg: QuadratureConfig) -> Self {
        let order = f.global_exp_order();
        Kernel {
            f,
            order,
            power,
            cfg,
            values: RwLock::new(HashMap::new()),
            plans: RwLock::new(HashMap::new()),
            child: OnceLock::new(),
        }
    }

    fn child(&self) -> Arc<Kernel> {
        self.child
            .get_or_init(|| Arc::new(Kernel::new(self.f.clone(), self.power + 1, self.cfg)))
            .clone()
    }

    fn integrand(&self, z: Complex64) -> impl Fn(f64) -> Vector + '_ {
        let p = self.power as i32;
        move |t| {
            let f = self.f.eval(t).to_array();
            let w = (-t * z.re).exp() * t.powi(p);
            let (s, c) = (t * z.im).sin_cos();
            let (re, im) = (w * c, -w * s);
            let mut out = [0.0; 8];
            for m in 0..4 {
                out[2 * m] = re * f[m];
                out[2 * m + 1] = im * f[m];
            }
            out
        }
    }

    /// Cell key and its planning point: the smallest real part and the
    /// largest frequency in the cell.
    fn cell(&self, z: Complex64) -> ((i64, i64), Complex64) {
        let u = z.re - self.order.a;
        let (ix, x) = if u >= CELL {
            let i = (u / CELL).floor();
            (i as i64, i * CELL)
        } else {
            // geometric cells towards the boundary of the half-plane
            let k = (4.0 * u.log2()).floor();
            (k as i64 - (1 << 20), (k / 4.0).exp2())
        };
        let iy = (z.im.abs() / CELL).floor();
        ((ix, iy as i64), Complex64::new(self.order.a + x, (iy + 1.0) * CELL))
    }

    fn budget(&self) -> f64 {
        0.5 * self.cfg.abs_tol
    }

    fn plan(&self, z: Complex64) -> Result<Arc<Vec<f64>>> {
        let (key, rep) = self.cell(z);
        if let Some(p) = self.plans.read().expect("plan cache").get(&key) {
            return Ok(p.clone());
        }
        let order = self.order.times_power(self.power);
        let t_star = order.truncation_point(rep.re, self.cfg.tail_safety, self.budget())?;
        let start = partition(0.0, t_star, self.f.breakpoints());
        let plan = match integrate(&self.integrand(rep), &start, self.budget(), self.cfg.max_subdivisions) {
            Ok(r) => r.points,
            // the planning point is the worst case of the cell; let the
            // actual evaluation decide whether the budget suffices
            Err(Error::Accuracy { .. }) => start,
            Err(e) => return Err(e),
        };
        let plan = Arc::new(plan);
        let mut plans = self.plans.write().expect("plan cache");
        if plans.len() >= CACHE_LIMIT {
            plans.clear();
        }
        plans.insert(key, plan.clone());
        Ok(plan)
    }

    fn eval(&self, z: Complex64) -> Result<(Vector, f64)> {
        if !(z.re > self.order.a) {
            return Err(Error::Domain(format!(
                "Re(s) = {} must exceed the exponential order {}",
                z.re, self.order.a
            )));
        }
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.values.read().expect("value cache").get(&key) {
            return Ok(*v);
        }
        let plan = self.plan(z)?;
        let t_star = *plan.last().expect("nonempty plan");
        let r = integrate(&self.integrand(z), &plan, self.budget(), self.cfg.max_subdivisions)?;
        let tail = self.order.times_power(self.power).tail(z.re, t_star);
        let out = (r.value, r.error + tail);
        let mut values = self.values.write().expect("value cache");
        if values.len() >= CACHE_LIMIT {
            values.clear();
        }
        values.insert(key, out);
        Ok(out)
    }
}

/// Stem `sign * ∫ e^{-tz} t^power f_m(t) dt`.
struct QuadratureStem {
    kernel: Arc<Kernel>,
    m: usize,
    sign: f64,
}

impl fmt::Debug for QuadratureStem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}[{}]", if self.sign < 0.0 { "-" } else { "" }, self.kernel, self.m)
    }
}

impl Holomorphic for QuadratureStem {
    fn eval(&self, z: Complex64) -> Result<StemValue> {
        let (v, err) = self.kernel.eval(z)?;
        Ok(StemValue {
            value: Complex64::new(v[2 * self.m], v[2 * self.m + 1]) * self.sign,
            error: err,
        })
    }
    fn derivative(&self) -> Option<Arc<dyn Holomorphic>> {
        Some(Arc::new(QuadratureStem { kernel: self.kernel.child(), m: self.m, sign: -self.sign }))
    }
}

/// A transform as an evaluable regular function on `Re(s) > a`.
#[derive(Clone, Debug)]
pub struct TransformResult {
    func: SliceRegularFunction,
    re_min: f64,
    quadrature_tolerance: f64,
}

/// One evaluation, as emitted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub s: Quat,
    pub value: Quat,
    pub est_error: f64,
}

impl TransformResult {
    fn new(func: SliceRegularFunction, re_min: f64, quadrature_tolerance: f64) -> Self {
        TransformResult { func, re_min, quadrature_tolerance }
    }

    fn with_func(&self, func: SliceRegularFunction, re_min: f64) -> Self {
        Self::new(func, re_min, self.quadrature_tolerance)
    }

    pub fn func(&self) -> &SliceRegularFunction {
        &self.func
    }

    pub fn side(&self) -> Side {
        self.func.side()
    }

    /// Abscissa `a` of the half-plane `Re(s) > a`.
    pub fn abscissa(&self) -> f64 {
        self.re_min
    }

    pub fn domain(&self) -> Region {
        Region::half_plane(self.re_min)
    }

    pub fn quadrature_tolerance(&self) -> f64 {
        self.quadrature_tolerance
    }

    pub fn eval(&self, s: Quat) -> Result<Quat> {
        self.func.eval(s)
    }

    pub fn eval_with_error(&self, s: Quat) -> Result<Evaluation> {
        self.func.eval_with_error(s)
    }

    pub fn record(&self, s: Quat) -> Result<TransformRecord> {
        let e = self.eval_with_error(s)?;
        Ok(TransformRecord { s, value: e.value, est_error: e.error })
    }

    fn map_stems(&self, re_min: f64, f: impl Fn(usize, &IntrinsicStem) -> IntrinsicStem) -> Self {
        let stems = std::array::from_fn(|m| f(m, &self.func.stems()[m]));
        let region = Region::half_plane(re_min);
        let domain = stems.iter().fold(region, |acc: Region, s: &IntrinsicStem| acc.intersect(s.region()));
        self.with_func(SliceRegularFunction::from_parts(self.side(), stems, domain), re_min)
    }
}

fn transform(f: &TimeDomainFunction, side: Side, cfg: &QuadratureConfig) -> Result<TransformResult> {
    cfg.validate()?;
    f.exp_order().validate()?;
    let kernel = Arc::new(Kernel::new(f.clone(), 0, *cfg));
    let a = kernel.order.a;
    let region = Region::half_plane(a);
    let real = f.is_real_valued();
    let stems = std::array::from_fn(|m| {
        if real && m > 0 {
            IntrinsicStem::zero().with_region(region.clone())
        } else {
            IntrinsicStem::from_holomorphic(Arc::new(QuadratureStem { kernel: kernel.clone(), m, sign: 1.0 }), region.clone())
        }
    });
    Ok(TransformResult::new(SliceRegularFunction::from_parts(side, stems, region), a, cfg.abs_tol))
}

/// `L^l{f}(s) = ∫_0^∞ e^{-ts} f(t) dt`, left regular on `Re(s) > a`.
pub fn laplace_left(f: &TimeDomainFunction, cfg: &QuadratureConfig) -> Result<TransformResult> {
    transform(f, Side::Left, cfg)
}

/// `L^r{f}(s) = ∫_0^∞ f(t) e^{-ts} dt`, right regular on `Re(s) > a`.
pub fn laplace_right(f: &TimeDomainFunction, cfg: &QuadratureConfig) -> Result<TransformResult> {
    transform(f, Side::Right, cfg)
}

pub fn laplace(f: &TimeDomainFunction, side: Side, cfg: &QuadratureConfig) -> Result<TransformResult> {
    transform(f, side, cfg)
}

/// Transform of `e^{bt}` in closed form: `(s^2 - 2 Re(b) s + |b|^2)^{-1} (s - conj b)`
/// for the left side and `(s - conj b) (s^2 - 2 Re(b) s + |b|^2)^{-1}` for the right.
pub fn closed_form_exp(b: Quat, side: Side) -> TransformResult {
    let region = Region::half_plane(b.w);
    let stems = reciprocal_linear_stems(b, 1.0, region.clone());
    TransformResult::new(SliceRegularFunction::from_parts(side, stems, region), b.w, 0.0)
}

/// `F(s + a)`: the transform of `e^{-at} f(t)`.
pub fn shift_real(f: &TransformResult, a_shift: f64) -> TransformResult {
    f.map_stems(f.re_min - a_shift, |_, h| h.shift_arg(a_shift))
}

/// `e^{-as} F(s)`: the transform of `f(t - a) H(t - a)`.
pub fn heaviside_shift(f: &TransformResult, a_shift: f64) -> Result<TransformResult> {
    if !(a_shift >= 0.0 && a_shift.is_finite()) {
        return Err(Error::Usage(format!("shift must be finite and >= 0, got {a_shift}")));
    }
    let e = IntrinsicStem::exp_rate(-a_shift);
    Ok(f.map_stems(f.re_min, |_, h| e.mul(h)))
}

/// `s F(s) - f(0+)`: the transform of `f'`.
pub fn transform_of_derivative(f: &TransformResult, f0plus: Quat) -> TransformResult {
    transform_of_nth_derivative(f, &[f0plus])
}

/// `s^n F(s) - s^{n-1} f(0+) - ... - f^{(n-1)}(0+)`. The powers of `s` are
/// intrinsic and act on each stem.
pub fn transform_of_nth_derivative(f: &TransformResult, initial_values: &[Quat]) -> TransformResult {
    let n = initial_values.len();
    if n == 0 {
        return f.clone();
    }
    let mut zn = vec![0.0; n + 1];
    zn[n] = 1.0;
    let zn = IntrinsicStem::polynomial(zn);
    f.map_stems(f.re_min, |m, h| {
        // sum_r c_{r,m} z^{n-1-r}, coefficients listed by ascending power
        let poly: Vec<f64> = (0..n).map(|p| initial_values[n - 1 - p].to_array()[m]).collect();
        zn.mul(h).sub(&IntrinsicStem::polynomial(poly))
    })
}

/// `(-1)^n F^{(n)}(s)`: the transform of `t^n f(t)`.
pub fn derivative_of_transform(f: &TransformResult, n: u32) -> Result<TransformResult> {
    let mut g = f.func.clone();
    for _ in 0..n {
        g = g.slice_derivative(false)?;
    }
    let out = f.with_func(g, f.re_min);
    Ok(if n % 2 == 1 { out.map_stems(f.re_min, |_, h| h.scale(-1.0)) } else { out })
}

/// `s^{-1} F(s)`: the transform of `∫_0^t f`, on `Re(s) > max(a, 0)`.
pub fn transform_of_integral(f: &TransformResult) -> TransformResult {
    let re_min = f.re_min.max(0.0);
    let inv = IntrinsicStem::rational(vec![1.0], vec![0.0, 1.0], Region::half_plane(0.0));
    f.map_stems(re_min, |_, h| inv.mul(h))
}

/// `(f ∘ g)(t) = ∫_0^t f(t - τ) g(τ) dτ`, with the default configuration.
pub fn convolve(f: &TimeDomainFunction, g: &TimeDomainFunction, t: f64) -> Result<Quat> {
    convolve_with(f, g, t, &QuadratureConfig::default())
}

/// Convolution by adaptive quadrature, with panel boundaries at the images
/// `t - b` of the breakpoints of `f` and at the breakpoints of `g`.
pub fn convolve_with(f: &TimeDomainFunction, g: &TimeDomainFunction, t: f64, cfg: &QuadratureConfig) -> Result<Quat> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Usage(format!("convolution needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(Quat::zero());
    }
    let mut bps: Vec<f64> = f.breakpoints().iter().map(|b| t - b).collect();
    bps.extend_from_slice(g.breakpoints());
    let pts = partition(0.0, t, &bps);
    let integrand = |tau: f64| (f.eval(t - tau) * g.eval(tau)).to_array();
    let r = integrate(&integrand, &pts, cfg.abs_tol, cfg.max_subdivisions)?;
    let [w, x, y, z] = r.value;
    Ok(Quat::new(w, x, y, z))
}

/// `f ∘ g` as a time-domain function, with growth bound
/// `K_f K_g (1 + t)^{d_f + d_g + 1} e^{max(a_f, a_g) t}`.
pub fn convolution_function(f: &TimeDomainFunction, g: &TimeDomainFunction, cfg: &QuadratureConfig) -> TimeDomainFunction {
    let (of, og) = (f.global_exp_order(), g.global_exp_order());
    let order = ExpOrder { a: of.a.max(og.a), k: of.k * og.k, t: 0.0, degree: of.degree + og.degree + 1 };
    let (f, g, cfg) = (f.clone(), g.clone(), *cfg);
    let label = format!("({}) o ({})", f.label(), g.label());
    let cache: RwLock<HashMap<u64, Quat>> = RwLock::new(HashMap::new());
    TimeDomainFunction::from_fn(&label, order, move |t| {
        if let Some(v) = cache.read().expect("convolution cache").get(&t.to_bits()) {
            return *v;
        }
        // a failed inner integral poisons the outer one, which then reports it
        let v = convolve_with(&f, &g, t, &cfg).unwrap_or(Quat::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN));
        let mut c = cache.write().expect("convolution cache");
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(t.to_bits(), v);
        v
    })
    .with_value_at_zero_plus(Quat::zero())
}

/// The two sides of the convolution theorem.
#[derive(Clone, Debug)]
pub struct ConvolutionTransform {
    /// Quadrature transform of the convolution itself.
    pub direct: TransformResult,
    /// Regular product `F * G` of the separate transforms.
    pub product: TransformResult,
}

impl ConvolutionTransform {
    /// `|direct(s) - product(s)|`.
    pub fn residual(&self, s: Quat) -> Result<f64> {
        Ok((self.direct.eval(s)? - self.product.eval(s)?).norm())
    }
}

/// `L^l{f ∘ g} = L^l{f} * L^l{g}` on `Re(s) > max(a, b)`.
pub fn laplace_of_convolution(f: &TimeDomainFunction, g: &TimeDomainFunction, cfg: &QuadratureConfig) -> Result<ConvolutionTransform> {
    let inner = QuadratureConfig { abs_tol: cfg.abs_tol * 1e-2, ..*cfg };
    let h = convolution_function(f, g, &inner);
    let direct = laplace_left(&h, cfg)?;
    let (ff, gg) = (laplace_left(f, cfg)?, laplace_left(g, cfg)?);
    let c = ff.re_min.max(gg.re_min);
    let product = TransformResult::new(ff.func.star(&gg.func)?, c, cfg.abs_tol);
    Ok(ConvolutionTransform { direct, product })
}

/// Residuals of the two duality identities over a probe set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    /// `max |eta(L^l f)(s) - L^r(conj f)(s)|`.
    pub left_to_right: f64,
    /// `max |eta(L^r f)(s) - L^l(conj f)(s)|`.
    pub right_to_left: f64,
    pub max_residual: f64,
    pub probes: usize,
}

/// Checks `eta(L^l{f}) = L^r{conj f}` and `eta(L^r{f}) = L^l{conj f}`, using
/// the pointwise definition `eta(F)(s) = conj(F(conj s))`.
pub fn eta_duality_check(f: &TimeDomainFunction, probes: &[Quat], cfg: &QuadratureConfig) -> Result<DualityReport> {
    let fl = laplace_left(f, cfg)?;
    let fr = laplace_right(f, cfg)?;
    let fc = f.conj();
    let gl = laplace_left(&fc, cfg)?;
    let gr = laplace_right(&fc, cfg)?;
    let (mut lr, mut rl) = (0.0f64, 0.0f64);
    for &s in probes {
        let eta_l = fl.eval(s.conj())?.conj();
        lr = lr.max((eta_l - gr.eval(s)?).norm());
        let eta_r = fr.eval(s.conj())?.conj();
        rl = rl.max((eta_r - gl.eval(s)?).norm());
    }
    Ok(DualityReport { left_to_right: lr, right_to_left: rl, max_residual: lr.max(rl), probes: probes.len() })
}

pub use crate::time_fn::estimate_exp_order;

#[cfg(test)]
mod tests {
    use super::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quat {
        Quat::new(w, x, y, z)
    }

    fn close(a: Quat, b: Quat, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_and_exponential() {
        let one = laplace_left(&TimeDomainFunction::constant(Quat::one()), &cfg()).unwrap();
        assert!(close(one.eval(Quat::from_real(2.0)).unwrap(), Quat::from_real(0.5), 1e-9));
        let e = laplace_left(&TimeDomainFunction::exp(Quat::from_real(0.5)), &cfg()).unwrap();
        assert!(close(e.eval(Quat::from_real(2.0)).unwrap(), Quat::from_real(1.0 / 1.5), 1e-9));
        assert!(matches!(one.eval(Quat::from_real(0.0)), Err(Error::Domain(_))));
        assert!(matches!(one.eval(Quat::from_real(-1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_j_matches_closed_form() {
        let f = laplace_left(&TimeDomainFunction::exp(Quat::j()), &cfg()).unwrap();
        let c = closed_form_exp(Quat::j(), Side::Left);
        for s in [q(1.0, 2.0, 0.0, 0.0), q(0.6, 0.0, -1.0, 2.0), q(2.5, 0.3, 0.3, 0.3)] {
            let (a, b) = (f.eval(s).unwrap(), c.eval(s).unwrap());
            assert!(close(a, b, 1e-9), "{s}: {a} vs {b}");
        }
        // explicit (s^2 + 1)^{-1} (s + j)
        let s = q(1.0, 2.0, 0.0, 0.0);
        let direct = (s * s + Quat::one()).inverse().unwrap() * (s + Quat::j());
        assert!(close(c.eval(s).unwrap(), direct, 1e-15));
    }

    #[test]
    fn closed_form_examples() {
        let c = closed_form_exp(Quat::i(), Side::Left);
        assert!(close(c.eval(Quat::from_real(2.0)).unwrap(), q(0.4, 0.2, 0.0, 0.0), 1e-15));
        let r = closed_form_exp(Quat::from_real(0.5), Side::Right);
        assert!(close(r.eval(q(2.0, 0.0, 1.0, 0.0)).unwrap(), (q(1.5, 0.0, 1.0, 0.0)).inverse().unwrap(), 1e-15));
        let b = q(0.2, 0.3, -0.4, 0.5);
        let s = q(1.0, 0.5, 0.0, -1.0);
        let qd = (s * s - s.scale(2.0 * b.w) + Quat::from_real(b.norm_sqr())).inverse().unwrap();
        assert!(close(closed_form_exp(b, Side::Left).eval(s).unwrap(), qd * (s - b.conj()), 1e-14));
        assert!(close(closed_form_exp(b, Side::Right).eval(s).unwrap(), (s - b.conj()) * qd, 1e-14));
    }

    #[test]
    fn right_transform_examples() {
        let t = TimeDomainFunction::poly(vec![Quat::zero(), Quat::one()]);
        let s = Quat::from_real(2.0);
        assert!(close(laplace_left(&t, &cfg()).unwrap().eval(s).unwrap(), Quat::from_real(0.25), 1e-9));
        assert!(close(laplace_right(&t, &cfg()).unwrap().eval(s).unwrap(), Quat::from_real(0.25), 1e-9));
        let j = laplace_right(&TimeDomainFunction::constant(Quat::j()), &cfg()).unwrap();
        assert!(close(j.eval(Quat::one()).unwrap(), Quat::j(), 1e-9));
        let b = q(0.1, 0.0, 1.0, 1.0);
        let r = laplace_right(&TimeDomainFunction::exp(b), &cfg()).unwrap();
        let s = q(1.0, 0.5, 0.0, -1.0);
        assert!(close(r.eval(s).unwrap(), closed_form_exp(b, Side::Right).eval(s).unwrap(), 1e-9));
    }

    #[test]
    fn operational_rules_on_closed_forms() {
        let one = laplace_left(&TimeDomainFunction::constant(Quat::one()), &cfg()).unwrap();
        let s = q(1.5, 0.3, -0.2, 0.4);
        let sh = shift_real(&one, 3.0);
        assert!(close(sh.eval(s).unwrap(), (s + Quat::from_real(3.0)).inverse().unwrap(), 1e-9));
        assert_eq!(sh.abscissa(), -3.0);
        let hs = heaviside_shift(&one, 1.0).unwrap();
        assert!(close(hs.eval(Quat::one()).unwrap(), Quat::from_real((-1f64).exp()), 1e-9));
        let d = transform_of_derivative(&one, Quat::one());
        assert!(close(d.eval(s).unwrap(), Quat::zero(), 1e-9));
        let dd = derivative_of_transform(&one, 1).unwrap();
        assert!(close(dd.eval(s).unwrap(), (s * s).inverse().unwrap(), 1e-9));
        let int = transform_of_integral(&one);
        assert!(close(int.eval(s).unwrap(), (s * s).inverse().unwrap(), 1e-9));
    }

    #[test]
    fn nth_derivative_of_t_squared() {
        let t2 = TimeDomainFunction::poly(vec![Quat::zero(), Quat::zero(), Quat::one()]);
        let f = laplace_left(&t2, &cfg()).unwrap();
        let g = transform_of_nth_derivative(&f, &[Quat::zero(), Quat::zero()]);
        let s = q(1.2, 0.0, 0.7, 0.0);
        assert!(close(g.eval(s).unwrap(), s.inverse().unwrap().scale(2.0), 1e-8));
        assert!(close(transform_of_nth_derivative(&f, &[]).eval(s).unwrap(), f.eval(s).unwrap(), 0.0));
    }

    #[test]
    fn convolution_examples() {
        let one = TimeDomainFunction::constant(Quat::one());
        assert!(close(convolve(&one, &one, 2.0).unwrap(), Quat::from_real(2.0), 1e-14));
        let i = TimeDomainFunction::constant(Quat::i());
        let j = TimeDomainFunction::constant(Quat::j());
        assert!(close(convolve(&i, &j, 1.0).unwrap(), Quat::k(), 1e-14));
        assert!(close(convolve(&j, &i, 1.0).unwrap(), -Quat::k(), 1e-14));
        assert!(matches!(convolve(&one, &one, -1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn duality_for_constant_k() {
        let f = TimeDomainFunction::constant(Quat::k());
        let probes = [q(1.0, 0.5, 0.0, 0.0), q(2.0, 0.0, -1.0, 0.3)];
        let r = eta_duality_check(&f, &probes, &cfg()).unwrap();
        assert!(r.max_residual <= 1e-8);
    }

    #[test]
    fn memoized_values_are_stable() {
        let f = laplace_left(&TimeDomainFunction::exp(Quat::k()), &cfg()).unwrap();
        let s = q(0.9, 0.1, 1.1, -0.3);
        let a = f.eval(s).unwrap();
        let b = f.eval(s).unwrap();
        assert_eq!(a, b);
    }
}
