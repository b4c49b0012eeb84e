//! Finite-difference checks of slice regularity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quat::{slice_decompose, ImaginaryUnit, SliceCoordinates};
use crate::series::Side;
use crate::Quat;

pub const DEFAULT_STEP: f64 = 1e-5;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Tolerance of the slice-preservation test.
pub const SLICE_PRESERVING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResidual {
    pub point: Quat,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub side: Side,
    pub step: f64,
    pub max_residual: f64,
    pub probes: Vec<ProbeResidual>,
}

impl RegularityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }
}

/// Central-difference estimate of `½(∂_x f + I ∂_y f)` (left) or
/// `½(∂_x f + ∂_y f I)` (right) at `x + I y`.
pub fn cauchy_riemann_residual<F>(f: &F, side: Side, c: SliceCoordinates<f64>, step: f64) -> Result<Quat>
where
    F: Fn(Quat) -> Result<Quat> + ?Sized,
{
    let at = |dx: f64, dy: f64| f(c.unit.embed(c.x + dx, c.y + dy));
    let h2 = 0.5 / step;
    let fx = (at(step, 0.0)? - at(-step, 0.0)?).scale(h2);
    let fy = (at(0.0, step)? - at(0.0, -step)?).scale(h2);
    let i = c.unit.as_quaternion();
    let d = match side {
        Side::Left => fx + i * fy,
        Side::Right => fx + fy * i,
    };
    Ok(d.scale(0.5))
}

/// Maximum of `|∂̄_I f|` over the probes.
pub fn verify_regular<F>(f: &F, side: Side, probes: &[SliceCoordinates<f64>], step: f64) -> Result<RegularityReport>
where
    F: Fn(Quat) -> Result<Quat> + ?Sized,
{
    let mut out = Vec::with_capacity(probes.len());
    let mut max = 0.0f64;
    for &c in probes {
        let r = cauchy_riemann_residual(f, side, c, step)?.norm();
        max = max.max(r);
        out.push(ProbeResidual { point: c.to_quaternion(), residual: r });
    }
    Ok(RegularityReport { side, step, max_residual: max, probes: out })
}

/// Whether real probes map into R and slice probes stay in their slice,
/// within [`SLICE_PRESERVING_TOL`] relative to `max(1, |f|)`.
pub fn is_slice_preserving<F>(f: &F, probes: &[Quat]) -> Result<bool>
where
    F: Fn(Quat) -> Result<Quat> + ?Sized,
{
    for &q in probes {
        let v = f(q)?;
        let tol = SLICE_PRESERVING_TOL * v.norm().max(1.0);
        let c = slice_decompose(q);
        let off = if c.y == 0.0 {
            v.im().norm()
        } else {
            let i = c.unit.as_quaternion();
            let along = v.im().dot(i);
            (v.im() - i.scale(along)).norm()
        };
        if off > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the splitting test on one slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    /// Cauchy–Riemann residual of the `C_I` part.
    pub first: f64,
    /// Cauchy–Riemann residual of the part multiplied by `J`.
    pub second: f64,
    /// Largest reassembly error `|f - (F + G J)|` (or `F + J G` on the right).
    pub reassembly: f64,
}

impl SplittingReport {
    pub fn max_residual(&self) -> f64 {
        self.first.max(self.second).max(self.reassembly)
    }
}

/// Splits `f` on `C_I` as `F + G J` (left) or `F + J G` (right) with
/// `F, G: C_I -> C_I` and `J ⊥ I`, and measures how far each part is from
/// holomorphic by `½(∂_x + i ∂_y)` on the complex coordinates.
pub fn splitting_check<F>(
    f: &F,
    side: Side,
    unit: ImaginaryUnit<f64>,
    points: &[(f64, f64)],
    step: f64,
) -> Result<SplittingReport>
where
    F: Fn(Quat) -> Result<Quat> + ?Sized,
{
    let i = unit.as_quaternion();
    let j = unit.orthogonal().as_quaternion();
    let ij = i * j;
    let split = |x: f64, y: f64| -> Result<(Complex64, Complex64, f64)> {
        let v = f(unit.embed(x, y))?;
        let a = Complex64::new(v.w, v.dot(i));
        let b = match side {
            // v = a0 + a1 I + (b0 + b1 I) J, and I J = ij
            Side::Left => Complex64::new(v.dot(j), v.dot(ij)),
            // v = a0 + a1 I + J (b0 + b1 I), and J I = -ij
            Side::Right => Complex64::new(v.dot(j), -v.dot(ij)),
        };
        let emb = |z: Complex64| Quat::new(z.re, 0.0, 0.0, 0.0) + i.scale(z.im);
        let back = match side {
            Side::Left => emb(a) + emb(b) * j,
            Side::Right => emb(a) + j * emb(b),
        };
        Ok((a, b, (back - v).norm()))
    };
    let h2 = 0.5 / step;
    let mut rep = SplittingReport { first: 0.0, second: 0.0, reassembly: 0.0 };
    for &(x, y) in points {
        let (_, _, e) = split(x, y)?;
        let (ap, bp, _) = split(x + step, y)?;
        let (am, bm, _) = split(x - step, y)?;
        let (aq, bq, _) = split(x, y + step)?;
        let (an, bn, _) = split(x, y - step)?;
        let cr = |p: Complex64, m: Complex64, q: Complex64, n: Complex64| {
            let dx = (p - m) * h2;
            let dy = (q - n) * h2;
            ((dx + Complex64::i() * dy) * 0.5).norm()
        };
        rep.first = rep.first.max(cr(ap, am, aq, an));
        rep.second = rep.second.max(cr(bp, bm, bq, bn));
        rep.reassembly = rep.reassembly.max(e);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{slice_fn, IntrinsicStem, Series, SliceRegularFunction};

    fn probes() -> Vec<SliceCoordinates<f64>> {
        let u = ImaginaryUnit::from_vector(0.3, -0.5, 0.8).unwrap();
        vec![
            SliceCoordinates::new(0.2, 0.7, u),
            SliceCoordinates::new(-0.4, 1.1, ImaginaryUnit::j()),
            SliceCoordinates::new(0.9, 0.0, ImaginaryUnit::k()),
        ]
    }

    #[test]
    fn identity_and_exp_are_regular() {
        let id = |q: Quat| Ok(q);
        let r = verify_regular(&id, Side::Left, &probes(), DEFAULT_STEP).unwrap();
        assert!(r.max_residual <= 1e-9);
        let e = |q: Quat| Ok(q.exp());
        assert!(verify_regular(&e, Side::Left, &probes(), DEFAULT_STEP).unwrap().max_residual <= 1e-6);
        assert!(verify_regular(&e, Side::Right, &probes(), DEFAULT_STEP).unwrap().max_residual <= 1e-6);
    }

    #[test]
    fn conjugation_is_detected() {
        let c = |q: Quat| Ok(q.conj());
        let r = verify_regular(&c, Side::Left, &probes(), DEFAULT_STEP).unwrap();
        assert!((r.max_residual - 1.0).abs() < 1e-6);
    }

    #[test]
    fn side_matters_for_noncommuting_coefficients() {
        // q -> q i is left regular but not right regular
        let f = |q: Quat| Ok(q * Quat::i());
        let p = vec![SliceCoordinates::new(0.3, 0.8, ImaginaryUnit::j())];
        assert!(verify_regular(&f, Side::Left, &p, DEFAULT_STEP).unwrap().max_residual < 1e-9);
        assert!(verify_regular(&f, Side::Right, &p, DEFAULT_STEP).unwrap().max_residual > 0.5);
    }

    #[test]
    fn slice_preservation() {
        let pts = [Quat::from_real(0.5), Quat::new(0.1, 0.2, -0.3, 0.4)];
        assert!(is_slice_preserving(&|q: Quat| Ok(q.exp()), &pts).unwrap());
        assert!(is_slice_preserving(&|q: Quat| Ok(q * q), &pts).unwrap());
        assert!(!is_slice_preserving(&|q: Quat| Ok(q + Quat::i()), &pts).unwrap());
    }

    #[test]
    fn splitting_parts_are_holomorphic() {
        let f = SliceRegularFunction::from_series(&Series::left(vec![
            Quat::new(1.0, 0.5, -0.2, 0.3),
            Quat::new(0.0, 1.0, 1.0, 0.0),
            Quat::new(0.2, 0.0, 0.0, -1.0),
        ]));
        let u = ImaginaryUnit::from_vector(1.0, 2.0, -0.5).unwrap();
        let pts = [(0.2, 0.3), (-0.5, 0.1), (0.0, 0.8)];
        let r = splitting_check(&f.as_map(), Side::Left, u, &pts, DEFAULT_STEP).unwrap();
        assert!(r.max_residual() < 1e-6, "{r:?}");
        let g = f.eta();
        let r = splitting_check(&g.as_map(), Side::Right, u, &pts, DEFAULT_STEP).unwrap();
        assert!(r.max_residual() < 1e-6, "{r:?}");
        let e = slice_fn::ext(IntrinsicStem::exp()).unwrap();
        let r = splitting_check(&e.as_map(), Side::Left, u, &pts, DEFAULT_STEP).unwrap();
        assert!(r.max_residual() < 1e-6);
    }
}
