//! Quaternion-valued functions of a real time variable `t >= 0`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Side;
use crate::Quat;

/// Growth bound `|f(t)| <= K (1 + t)^d e^{a t}` for `t > T`.
///
/// The polynomial factor keeps convolutions and `t^n f(t)` inside the
/// family without inflating the rate `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpOrder {
    pub a: f64,
    pub k: f64,
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub degree: u32,
}

impl ExpOrder {
    pub fn new(a: f64, k: f64, t: f64) -> Result<Self> {
        Self::with_degree(a, k, t, 0)
    }

    pub fn with_degree(a: f64, k: f64, t: f64, degree: u32) -> Result<Self> {
        let order = ExpOrder { a, k, t, degree };
        order.validate()?;
        Ok(order)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 0.0 && self.a.is_finite()) {
            return Err(Error::Usage(format!("exponential rate must be finite and >= 0, got {}", self.a)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) || !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::Usage(format!("invalid growth constants K = {}, T = {}", self.k, self.t)));
        }
        Ok(())
    }

    /// Bound value at `t`.
    pub fn bound(&self, t: f64) -> f64 {
        self.k * (1.0 + t).powi(self.degree as i32) * (self.a * t).exp()
    }

    /// `∫_{t0}^∞ K (1+t)^d e^{(a - x) t} dt` for `x > a`, in closed form.
    pub fn tail(&self, x: f64, t0: f64) -> f64 {
        let sigma = x - self.a;
        if sigma <= 0.0 {
            return f64::INFINITY;
        }
        let d = self.degree as i32;
        let u = 1.0 + t0;
        // ∫_u^∞ v^d e^{-σ v} dv = e^{-σu} Σ_k d!/(d-k)! u^{d-k} / σ^{k+1}
        let mut sum = 0.0;
        let mut falling = 1.0;
        for k in 0..=d {
            sum += falling * u.powi(d - k) / sigma.powi(k + 1);
            falling *= (d - k) as f64;
        }
        self.k * ((self.a - x) * t0).exp() * sum
    }

    /// Smallest truncation point (up to bisection accuracy) with
    /// `safety * tail(x, T*) <= budget` and `T* >= T`.
    pub fn truncation_point(&self, x: f64, safety: f64, budget: f64) -> Result<f64> {
        if x <= self.a {
            return Err(Error::Domain(format!("Re(s) = {x} is not greater than the exponential order {}", self.a)));
        }
        let ok = |t: f64| safety * self.tail(x, t) <= budget;
        let mut lo = self.t;
        if ok(lo) {
            return Ok(lo);
        }
        let mut hi = (lo * 2.0).max(1.0);
        while !ok(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::Accuracy { achieved: safety * self.tail(x, hi), requested: budget });
            }
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-6 * hi {
                break;
            }
        }
        Ok(hi)
    }

    /// Order of `t^n f(t)`.
    pub fn times_power(&self, n: u32) -> Self {
        ExpOrder { degree: self.degree + n, ..*self }
    }
}

/// JSON description of a time-domain function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeFnSpec {
    /// `e^{b t}`.
    Exp { b: Quat },
    /// `sum c_n t^n`.
    Poly { coeffs: Vec<Quat> },
    /// `f(t - delay) H(t - delay)` with `H(0) = 1`.
    HeavisideShift { delay: f64, f: Box<TimeFnSpec> },
    Sum { terms: Vec<TimeFnSpec> },
    /// `by * f(t)` (side `left`, the default) or `f(t) * by` (side `right`).
    Scale {
        by: Quat,
        #[serde(default = "default_side")]
        side: Side,
        f: Box<TimeFnSpec>,
    },
    /// Pointwise quaternion product, factors multiplied in the listed order.
    Product { factors: Vec<TimeFnSpec> },
}

fn default_side() -> Side {
    Side::Left
}

/// A spec together with optional overrides, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeFnDocument {
    #[serde(flatten)]
    pub spec: TimeFnSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_order: Option<ExpOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoints: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_at_zero_plus: Option<Quat>,
}

type Evaluator = Arc<dyn Fn(f64) -> Quat + Send + Sync>;

/// `f: [0, ∞) -> H`, piecewise continuous between its breakpoints and of
/// exponential order.
#[derive(Clone)]
pub struct TimeDomainFunction {
    eval: Evaluator,
    exp_order: ExpOrder,
    breakpoints: Vec<f64>,
    value_at_zero_plus: Option<Quat>,
    /// Known to take only real values.
    real_valued: bool,
    label: String,
}

impl fmt::Debug for TimeDomainFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDomainFunction")
            .field("label", &self.label)
            .field("exp_order", &self.exp_order)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

/// Richardson step for `f(0+)`.
pub const ZERO_PLUS_STEP: f64 = 1e-3;

/// Number of samples used to spot-check a declared growth bound.
const GROWTH_SAMPLES: usize = 64;

impl TimeDomainFunction {
    pub fn from_fn<F>(label: &str, exp_order: ExpOrder, f: F) -> Self
    where
        F: Fn(f64) -> Quat + Send + Sync + 'static,
    {
        TimeDomainFunction {
            eval: Arc::new(f),
            exp_order,
            breakpoints: Vec::new(),
            value_at_zero_plus: None,
            real_valued: false,
            label: label.into(),
        }
    }

    pub fn with_breakpoints(mut self, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.retain(|t| *t > 0.0 && t.is_finite());
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        self.breakpoints = breakpoints;
        self
    }

    pub fn with_value_at_zero_plus(mut self, v: Quat) -> Self {
        self.value_at_zero_plus = Some(v);
        self
    }

    pub fn with_exp_order(mut self, order: ExpOrder) -> Self {
        self.exp_order = order;
        self
    }

    /// Marks the function as real-valued (the caller vouches).
    pub fn real(mut self) -> Self {
        self.real_valued = true;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exp_order(&self) -> ExpOrder {
        self.exp_order
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn eval(&self, t: f64) -> Quat {
        (self.eval)(t)
    }

    /// `f(0+)`: the supplied value, or Richardson extrapolation from
    /// `t = h, h/2, h/4` eliminating the linear and quadratic terms.
    pub fn value_at_zero_plus(&self) -> Quat {
        if let Some(v) = self.value_at_zero_plus {
            return v;
        }
        let h = ZERO_PLUS_STEP;
        let (f1, f2, f4) = (self.eval(h), self.eval(h / 2.0), self.eval(h / 4.0));
        (f1 - f2.scale(6.0) + f4.scale(8.0)).scale(1.0 / 3.0)
    }

    /// `e^{b t}`.
    pub fn exp(b: Quat) -> Self {
        let order = ExpOrder { a: b.w.max(0.0), k: 1.0, t: 0.0, degree: 0 };
        let mut f = Self::from_fn(&format!("exp(({b}) t)"), order, move |t| b.scale(t).exp())
            .with_value_at_zero_plus(Quat::one());
        f.real_valued = b.im().is_zero();
        f
    }

    /// `sum c_n t^n`.
    pub fn poly(coeffs: Vec<Quat>) -> Self {
        let k = coeffs.iter().map(|c| c.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
        let degree = coeffs.len().saturating_sub(1) as u32;
        let real = coeffs.iter().all(|c| c.im().is_zero());
        let c0 = coeffs.first().copied().unwrap_or_else(Quat::zero);
        let order = ExpOrder { a: 0.0, k, t: 0.0, degree };
        let mut f = Self::from_fn("poly", order, move |t| {
            coeffs.iter().rev().fold(Quat::zero(), |acc, &c| acc.scale(t) + c)
        })
        .with_value_at_zero_plus(c0);
        f.real_valued = real;
        f
    }

    pub fn constant(c: Quat) -> Self {
        Self::poly(vec![c])
    }

    /// `f(t - delay) H(t - delay)`, with `H(0) = 1`.
    pub fn heaviside_shift(&self, delay: f64) -> Result<Self> {
        if !(delay >= 0.0 && delay.is_finite()) {
            return Err(Error::Usage(format!("delay must be finite and >= 0, got {delay}")));
        }
        let g = self.clone();
        let order = ExpOrder { t: self.exp_order.t + delay, ..self.exp_order };
        let mut bps: Vec<f64> = self.breakpoints.iter().map(|b| b + delay).collect();
        bps.push(delay);
        let mut f = Self::from_fn(&format!("H(t-{delay}) {}", self.label), order, move |t| {
            if t >= delay {
                g.eval(t - delay)
            } else {
                Quat::zero()
            }
        })
        .with_breakpoints(bps);
        f.value_at_zero_plus = Some(if delay > 0.0 { Quat::zero() } else { self.value_at_zero_plus() });
        f.real_valued = self.real_valued;
        Ok(f)
    }

    pub fn sum(terms: &[TimeDomainFunction]) -> Self {
        let fs: Vec<TimeDomainFunction> = terms.to_vec();
        let a = fs.iter().map(|f| f.exp_order.a).fold(0.0, f64::max);
        let degree = fs.iter().map(|f| f.exp_order.degree).max().unwrap_or(0);
        let t = fs.iter().map(|f| f.exp_order.t).fold(0.0, f64::max);
        let k = fs.iter().map(|f| f.exp_order.k).sum::<f64>().max(f64::MIN_POSITIVE);
        let bps = fs.iter().flat_map(|f| f.breakpoints.iter().copied()).collect();
        let zero_plus = fs.iter().map(|f| f.value_at_zero_plus).sum::<Option<Quat>>();
        let real = fs.iter().all(|f| f.real_valued);
        let label = fs.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(" + ");
        let mut out = Self::from_fn(&label, ExpOrder { a, k, t, degree }, move |t| fs.iter().map(|f| f.eval(t)).sum())
            .with_breakpoints(bps);
        out.value_at_zero_plus = zero_plus;
        out.real_valued = real;
        out
    }

    /// `lambda * f` (left) or `f * lambda` (right).
    pub fn scale(&self, lambda: Quat, side: Side) -> Self {
        let g = self.clone();
        let order = ExpOrder { k: (self.exp_order.k * lambda.norm()).max(f64::MIN_POSITIVE), ..self.exp_order };
        let mul = move |v: Quat| match side {
            Side::Left => lambda * v,
            Side::Right => v * lambda,
        };
        let mut f = Self::from_fn(&format!("{lambda} * ({})", self.label), order, move |t| mul(g.eval(t)))
            .with_breakpoints(self.breakpoints.clone());
        f.value_at_zero_plus = self.value_at_zero_plus.map(mul);
        f.real_valued = self.real_valued && lambda.im().is_zero();
        f
    }

    /// Pointwise product `f_1(t) f_2(t) ... f_n(t)`.
    pub fn product(factors: &[TimeDomainFunction]) -> Self {
        let fs: Vec<TimeDomainFunction> = factors.to_vec();
        let a = fs.iter().map(|f| f.exp_order.a).sum();
        let degree = fs.iter().map(|f| f.exp_order.degree).sum();
        let t = fs.iter().map(|f| f.exp_order.t).fold(0.0, f64::max);
        let k = fs.iter().map(|f| f.exp_order.k).product::<f64>().max(f64::MIN_POSITIVE);
        let bps = fs.iter().flat_map(|f| f.breakpoints.iter().copied()).collect();
        let zero_plus = fs
            .iter()
            .try_fold(Quat::one(), |acc, f| f.value_at_zero_plus.map(|v| acc * v));
        let real = fs.iter().all(|f| f.real_valued);
        let label = fs.iter().map(|f| format!("({})", f.label)).collect::<Vec<_>>().join(" ");
        let mut out = Self::from_fn(&label, ExpOrder { a, k, t, degree }, move |t| {
            fs.iter().fold(Quat::one(), |acc, f| acc * f.eval(t))
        })
        .with_breakpoints(bps);
        out.value_at_zero_plus = zero_plus;
        out.real_valued = real;
        out
    }

    /// `t -> conj(f(t))`.
    pub fn conj(&self) -> Self {
        let g = self.clone();
        let mut f = Self::from_fn(&format!("conj({})", self.label), self.exp_order, move |t| g.eval(t).conj())
            .with_breakpoints(self.breakpoints.clone());
        f.value_at_zero_plus = self.value_at_zero_plus.map(Quat::conj);
        f.real_valued = self.real_valued;
        f
    }

    /// Real component `m` of `f = sum f_m J_m`, as a quaternion-valued function on the real axis.
    pub fn component(&self, m: usize) -> Self {
        let g = self.clone();
        let mut f = Self::from_fn(&format!("{}[{m}]", self.label), self.exp_order, move |t| {
            Quat::from_real(g.eval(t).to_array()[m])
        })
        .with_breakpoints(self.breakpoints.clone());
        f.real_valued = true;
        f
    }

    /// Bound `M >= sup |f|` on `[0, T]`, sampled, so that the growth bound
    /// also holds on `[0, ∞)` with `K' = max(K, M)`.
    pub fn global_exp_order(&self) -> ExpOrder {
        let o = self.exp_order;
        if o.t == 0.0 {
            return o;
        }
        let n = 4 * GROWTH_SAMPLES;
        let m = (1..=n)
            .map(|i| {
                let t = o.t * i as f64 / n as f64;
                self.eval(t).norm() / o.bound(t) * o.k
            })
            .fold(0.0, f64::max);
        ExpOrder { k: o.k.max(2.0 * m), t: 0.0, ..o }
    }

    /// Spot-checks the declared growth bound at sampled `t > T`.
    pub fn check_exp_order(&self, t_max: f64) -> Result<()> {
        let o = self.exp_order;
        let lo = o.t;
        let hi = t_max.max(lo + 1.0);
        for i in 1..=GROWTH_SAMPLES {
            let t = lo + (hi - lo) * i as f64 / GROWTH_SAMPLES as f64;
            let v = self.eval(t).norm();
            if !(v <= o.bound(t) * (1.0 + 1e-12)) {
                return Err(Error::Usage(format!(
                    "|f({t})| = {v:e} exceeds the declared bound {:e}",
                    o.bound(t)
                )));
            }
        }
        Ok(())
    }

    pub fn from_spec(spec: &TimeFnSpec) -> Result<Self> {
        Ok(match spec {
            TimeFnSpec::Exp { b } => Self::exp(*b),
            TimeFnSpec::Poly { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::Usage("poly needs at least one coefficient".into()));
                }
                Self::poly(coeffs.clone())
            }
            TimeFnSpec::HeavisideShift { delay, f } => Self::from_spec(f)?.heaviside_shift(*delay)?,
            TimeFnSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::Usage("sum needs at least one term".into()));
                }
                Self::sum(&terms.iter().map(Self::from_spec).collect::<Result<Vec<_>>>()?)
            }
            TimeFnSpec::Scale { by, side, f } => Self::from_spec(f)?.scale(*by, *side),
            TimeFnSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Usage("product needs at least one factor".into()));
                }
                Self::product(&factors.iter().map(Self::from_spec).collect::<Result<Vec<_>>>()?)
            }
        })
    }

    pub fn from_document(doc: &TimeFnDocument) -> Result<Self> {
        let mut f = Self::from_spec(&doc.spec)?;
        if let Some(order) = doc.exp_order {
            order.validate()?;
            f.exp_order = order;
        }
        if let Some(bps) = &doc.breakpoints {
            let mut all = f.breakpoints.clone();
            all.extend(bps.iter().copied());
            f = f.with_breakpoints(all);
        }
        if let Some(v) = doc.value_at_zero_plus {
            f.value_at_zero_plus = Some(v);
        }
        Ok(f)
    }
}

/// Fits `|f(t)| <= K e^{a t}` on `[0, t_max]`.
///
/// `a` is the least-squares slope of `log |f|` (clamped at zero), `K` is
/// `tail_safety` times the largest observed `|f| e^{-a t}`. Growth that is
/// visibly faster than exponential over the window is rejected.
pub fn estimate_exp_order<F>(f: F, t_max: f64, tail_safety: f64) -> Result<ExpOrder>
where
    F: Fn(f64) -> Quat,
{
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Usage(format!("t_max must be positive, got {t_max}")));
    }
    const N: usize = 201;
    let ts: Vec<f64> = (0..N).map(|i| t_max * i as f64 / (N - 1) as f64).collect();
    let mut logs = Vec::with_capacity(N);
    for &t in &ts {
        let v = f(t).norm();
        if !v.is_finite() {
            return Err(Error::Estimation(format!("f({t}) is not finite")));
        }
        logs.push(v.max(1e-300).ln());
    }
    let slope = |lo: usize, hi: usize| -> f64 {
        let n = (hi - lo) as f64;
        let mt = ts[lo..hi].iter().sum::<f64>() / n;
        let ml = logs[lo..hi].iter().sum::<f64>() / n;
        let (mut num, mut den) = (0.0, 0.0);
        for i in lo..hi {
            num += (ts[i] - mt) * (logs[i] - ml);
            den += (ts[i] - mt).powi(2);
        }
        num / den
    };
    let half = N / 2;
    let (s1, s2) = (slope(0, half + 1), slope(half, N));
    let window = t_max / 2.0;
    // an exponential has equal half-window slopes; e^{c t^2} adds c * t_max
    if s2 - s1 > 1.0 + 0.25 * s1.abs() + 4.0 / window {
        return Err(Error::Estimation(format!(
            "log|f| slope grows from {s1:.3} to {s2:.3} across the window: faster than exponential"
        )));
    }
    let a = slope(0, N).max(0.0);
    let m = ts
        .iter()
        .zip(&logs)
        .map(|(&t, &l)| (l - a * t).exp())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    Ok(ExpOrder { a, k: tail_safety * m, t: 0.0, degree: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_matches_numeric_integral() {
        let o = ExpOrder { a: 0.5, k: 2.0, t: 0.0, degree: 2 };
        let (x, t0) = (1.5, 3.0);
        // crude trapezoid over a long window
        let n = 200_000;
        let h = 60.0 / n as f64;
        let g = |t: f64| o.bound(t) * (-x * t).exp();
        let num: f64 = (0..n).map(|i| 0.5 * h * (g(t0 + i as f64 * h) + g(t0 + (i + 1) as f64 * h))).sum();
        assert!((o.tail(x, t0) - num).abs() < 1e-6 * num);
    }

    #[test]
    fn truncation_point_meets_budget() {
        let o = ExpOrder::new(0.0, 1.0, 0.0).unwrap();
        let t = o.truncation_point(0.5, 10.0, 1e-10).unwrap();
        assert!(10.0 * o.tail(0.5, t) <= 1e-10);
        assert!(10.0 * o.tail(0.5, t * 0.99) > 1e-10);
        assert!(matches!(o.truncation_point(0.0, 10.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn constructors_and_zero_plus() {
        let f = TimeDomainFunction::exp(Quat::j());
        assert_eq!(f.value_at_zero_plus(), Quat::one());
        let g = TimeDomainFunction::from_fn("cos", ExpOrder::new(0.0, 1.0, 0.0).unwrap(), |t| Quat::from_real(t.cos() + t));
        assert!((g.value_at_zero_plus() - Quat::one()).norm() < 1e-9);
        let h = TimeDomainFunction::constant(Quat::one()).heaviside_shift(1.0).unwrap();
        assert_eq!(h.eval(1.0), Quat::one());
        assert_eq!(h.eval(0.999), Quat::zero());
        assert_eq!(h.breakpoints(), &[1.0]);
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"kind":"scale","by":[1,0,0,1],"f":{"kind":"exp","b":[0,1,0,0]}}"#;
        let doc: TimeFnDocument = serde_json::from_str(json).unwrap();
        let f = TimeDomainFunction::from_document(&doc).unwrap();
        let t = 0.7;
        let expect = Quat::new(1.0, 0.0, 0.0, 1.0) * Quat::new(0.0, t, 0.0, 0.0).exp();
        assert!((f.eval(t) - expect).norm() < 1e-15);
        let back: TimeFnDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back, doc);
        let bad = serde_json::from_str::<TimeFnDocument>(r#"{"kind":"gamma"}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn declared_bounds_hold() {
        for f in [
            TimeDomainFunction::exp(Quat::new(0.5, 0.0, 2.0, 0.0)),
            TimeDomainFunction::poly(vec![Quat::one(), Quat::i(), Quat::k().scale(3.0)]),
            TimeDomainFunction::product(&[
                TimeDomainFunction::poly(vec![Quat::zero(), Quat::one()]),
                TimeDomainFunction::exp(Quat::from_real(-1.0)),
            ]),
        ] {
            f.check_exp_order(40.0).unwrap();
        }
    }

    #[test]
    fn exp_order_estimates() {
        let o = estimate_exp_order(|_| Quat::one(), 10.0, 10.0).unwrap();
        assert_eq!(o.a, 0.0);
        let o = estimate_exp_order(|t| Quat::from_real((2.0 * t).exp()), 10.0, 10.0).unwrap();
        assert!((o.a - 2.0).abs() < 0.05);
        let o = estimate_exp_order(|t| Quat::new(0.0, t, 0.0, 0.0).exp(), 10.0, 10.0).unwrap();
        assert!(o.a.abs() < 0.05);
        let r = estimate_exp_order(|t| Quat::from_real((t * t).exp()), 10.0, 10.0);
        assert!(matches!(r, Err(Error::Estimation(_))));
    }
}
