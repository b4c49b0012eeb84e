//! Regular functions in tensor form.
//!
//! A left regular function is stored as `sum_m h_m ⊗ J_m` with intrinsic
//! stems `h_m` and `J = (1, i, j, k)`, and evaluated as
//! `sum_m h_m(q) J_m`; a right regular one evaluates as `sum_m J_m h_m(q)`.
//! The regular product multiplies the tensor factors,
//! `(f ⊗ I) * (g ⊗ J) = f g ⊗ I J`, which is where noncommutativity lives.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{slice_decompose, ImaginaryUnit};
use crate::region::Region;
use crate::series::Side;
use crate::stem::IntrinsicStem;
use crate::{Quat, Series};

/// Symmetry tolerance for stems accepted by [`ext`] and [`assemble`].
pub const STEM_SYMMETRY_TOL: f64 = 1e-9;

/// `J_m J_n = sign * J_p`, as `(sign, p)`.
fn basis_product(m: usize, n: usize) -> (f64, usize) {
    let b = Quat::basis();
    let p = (b[m] * b[n]).to_array();
    let idx = p.iter().position(|&c| c != 0.0).expect("basis product is a signed basis element");
    (p[idx], idx)
}

#[derive(Clone, Debug)]
pub struct SliceRegularFunction {
    side: Side,
    stems: [IntrinsicStem; 4],
    domain: Region,
}

/// A point value with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: Quat,
    pub error: f64,
}

impl SliceRegularFunction {
    /// Builds without validating the stems; the caller vouches for symmetry.
    pub(crate) fn from_parts(side: Side, stems: [IntrinsicStem; 4], domain: Region) -> Self {
        SliceRegularFunction { side, stems, domain }
    }

    fn from_stems_unchecked(side: Side, stems: [IntrinsicStem; 4]) -> Result<Self> {
        let domain = stems.iter().fold(Region::Entire, |acc, s| acc.intersect(s.region()));
        if !domain.meets_real_axis() {
            return Err(Error::Usage("stem domains have no common real interval".into()));
        }
        Ok(Self::from_parts(side, stems, domain))
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn stems(&self) -> &[IntrinsicStem; 4] {
        &self.stems
    }

    pub fn domain(&self) -> &Region {
        &self.domain
    }

    /// Restricts the domain further.
    pub fn restrict(&self, region: &Region) -> Result<Self> {
        let domain = self.domain.intersect(region);
        if !domain.meets_real_axis() {
            return Err(Error::Usage("restricted domain misses the real axis".into()));
        }
        Ok(Self::from_parts(self.side, self.stems.clone(), domain))
    }

    /// Constant function `c` on H.
    pub fn constant(side: Side, c: Quat) -> Self {
        let stems = c.to_array().map(IntrinsicStem::constant);
        Self::from_parts(side, stems, Region::Entire)
    }

    /// Tensor form of a truncated series (polynomial stems, entire).
    pub fn from_series(f: &Series) -> Self {
        let stems = f
            .intrinsic_components()
            .map(|h| IntrinsicStem::polynomial(h.coeffs().iter().map(|c| c.w).collect()));
        Self::from_parts(f.side(), stems, Region::Entire)
    }

    pub fn eval(&self, q: Quat) -> Result<Quat> {
        Ok(self.eval_with_error(q)?.value)
    }

    pub fn eval_with_error(&self, q: Quat) -> Result<Evaluation> {
        let c = slice_decompose(q);
        self.eval_slice_with_error(c.x, c.y, c.unit)
    }

    /// Evaluates at `x + unit * y` with an explicit slice unit.
    pub fn eval_slice(&self, x: f64, y: f64, unit: ImaginaryUnit<f64>) -> Result<Quat> {
        Ok(self.eval_slice_with_error(x, y, unit)?.value)
    }

    pub fn eval_slice_with_error(&self, x: f64, y: f64, unit: ImaginaryUnit<f64>) -> Result<Evaluation> {
        if !self.domain.contains_slice(x, y) {
            return Err(Error::Domain(format!(
                "point {} lies outside the domain {:?}",
                unit.embed(x, y),
                self.domain
            )));
        }
        let z = Complex64::new(x, y);
        let mut value = Quat::zero();
        let mut error = 0.0;
        for (stem, basis) in self.stems.iter().zip(Quat::basis()) {
            if stem.is_zero() {
                continue;
            }
            let v = stem.eval_with_error(z)?;
            let t = unit.embed_complex(v.value);
            value += match self.side {
                Side::Left => t * basis,
                Side::Right => basis * t,
            };
            error += v.error;
        }
        Ok(Evaluation { value, error })
    }

    fn check_compatible(&self, other: &Self, op: &str) -> Result<Region> {
        if self.side != other.side {
            return Err(Error::Usage(format!("{op}: side mismatch ({} vs {})", self.side, other.side)));
        }
        let domain = self.domain.intersect(&other.domain);
        if !domain.meets_real_axis() {
            return Err(Error::Usage(format!("{op}: domains do not overlap on the real axis")));
        }
        Ok(domain)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let domain = self.check_compatible(other, "sum")?;
        let stems = std::array::from_fn(|m| self.stems[m].add(&other.stems[m]));
        Ok(Self::from_parts(self.side, stems, domain))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let domain = self.check_compatible(other, "difference")?;
        let stems = std::array::from_fn(|m| self.stems[m].sub(&other.stems[m]));
        Ok(Self::from_parts(self.side, stems, domain))
    }

    /// Regular product through the 16-term bilinear expansion.
    pub fn star(&self, other: &Self) -> Result<Self> {
        let domain = self.check_compatible(other, "regular product")?;
        let mut terms: [Vec<(f64, IntrinsicStem)>; 4] = Default::default();
        for (m, f) in self.stems.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (n, g) in other.stems.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let (sign, p) = basis_product(m, n);
                terms[p].push((sign, f.mul(g)));
            }
        }
        let stems = terms.map(|t| {
            let refs: Vec<(f64, &IntrinsicStem)> = t.iter().map(|(c, s)| (*c, s)).collect();
            IntrinsicStem::linear_combination(&refs)
        });
        Ok(Self::from_parts(self.side, stems, domain))
    }

    /// Multiplies every tensor component by an intrinsic stem (central element).
    pub fn mul_intrinsic(&self, h: &IntrinsicStem) -> Self {
        let stems = std::array::from_fn(|m| h.mul(&self.stems[m]));
        Self::from_parts(self.side, stems, self.domain.intersect(h.region()))
    }

    /// Multiplies by a quaternion constant on the outer side: `F(q) λ` for a
    /// left function, `λ F(q)` for a right one. Both stay regular.
    pub fn scale_outer(&self, lambda: Quat) -> Self {
        let l = lambda.to_array();
        let mut terms: [Vec<(f64, &IntrinsicStem)>; 4] = Default::default();
        for (m, h) in self.stems.iter().enumerate() {
            for (n, &c) in l.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let (sign, p) = match self.side {
                    Side::Left => basis_product(m, n),
                    Side::Right => basis_product(n, m),
                };
                terms[p].push((sign * c, h));
            }
        }
        let stems = terms.map(|t| IntrinsicStem::linear_combination(&t));
        Self::from_parts(self.side, stems, self.domain.clone())
    }

    /// `eta(F)(q) = conj(F(conj q))`: side flips, basis is conjugated.
    pub fn eta(&self) -> Self {
        Self::from_parts(self.side.flip(), self.conjugated_stems(), self.domain.clone())
    }

    /// Regular conjugate: `(h ⊗ μ)^c = h ⊗ conj(μ)`.
    pub fn regular_conjugate(&self) -> Self {
        Self::from_parts(self.side, self.conjugated_stems(), self.domain.clone())
    }

    fn conjugated_stems(&self) -> [IntrinsicStem; 4] {
        std::array::from_fn(|m| if m == 0 { self.stems[0].clone() } else { self.stems[m].scale(-1.0) })
    }

    /// `F^s = F * F^c = sum_m h_m^2`, an intrinsic function.
    pub fn symmetrization(&self) -> Self {
        let terms: Vec<IntrinsicStem> = self.stems.iter().map(|h| h.mul(h)).collect();
        let refs: Vec<(f64, &IntrinsicStem)> = terms.iter().map(|s| (1.0, s)).collect();
        let s = IntrinsicStem::linear_combination(&refs);
        let z = IntrinsicStem::zero();
        Self::from_parts(self.side, [s, z.clone(), z.clone(), z], self.domain.clone())
    }

    /// `F^{-*} = (F^s)^{-1} F^c`, defined off the zero set of `F^s`.
    pub fn regular_reciprocal(&self) -> Self {
        let sym = self.symmetrization().stems[0].clone();
        let inv = IntrinsicStem::from_holomorphic(std::sync::Arc::new(Reciprocal(sym.holomorphic().clone())), sym.region().clone());
        self.regular_conjugate().mul_intrinsic(&inv)
    }

    /// Componentwise slice derivative.
    pub fn slice_derivative(&self, numeric_fallback: bool) -> Result<Self> {
        let mut stems: Vec<IntrinsicStem> = Vec::with_capacity(4);
        for h in &self.stems {
            stems.push(h.derivative(numeric_fallback)?);
        }
        let stems: [IntrinsicStem; 4] = stems.try_into().expect("four stems");
        Ok(Self::from_parts(self.side, stems, self.domain.clone()))
    }

    /// Whether all non-real components vanish identically (by construction).
    pub fn is_structurally_intrinsic(&self) -> bool {
        self.stems[1..].iter().all(IntrinsicStem::is_zero)
    }

    /// Evaluation closure for the verifiers.
    pub fn as_map(&self) -> impl Fn(Quat) -> Result<Quat> + Sync + '_ {
        move |q| self.eval(q)
    }
}

#[derive(Debug)]
struct Reciprocal(std::sync::Arc<dyn crate::stem::Holomorphic>);

impl crate::stem::Holomorphic for Reciprocal {
    fn eval(&self, z: Complex64) -> Result<crate::stem::StemValue> {
        let v = self.0.eval(z)?;
        if v.value.norm() == 0.0 {
            return Err(Error::Pole(format!("symmetrization vanishes at {z}")));
        }
        let inv = 1.0 / v.value;
        Ok(crate::stem::StemValue { value: inv, error: v.error * inv.norm_sqr() })
    }
    fn derivative(&self) -> Option<std::sync::Arc<dyn crate::stem::Holomorphic>> {
        None
    }
}

/// Extends one intrinsic stem to the intrinsic regular function `u + I v`.
pub fn ext(stem: IntrinsicStem) -> Result<SliceRegularFunction> {
    stem.check_intrinsic(&stem.default_probes(), STEM_SYMMETRY_TOL)?;
    let z = IntrinsicStem::zero();
    SliceRegularFunction::from_stems_unchecked(Side::Left, [stem, z.clone(), z.clone(), z])
}

/// The regular function `sum h_m ⊗ J_m` on the given side.
pub fn assemble(stems: [IntrinsicStem; 4], side: Side) -> Result<SliceRegularFunction> {
    for s in &stems {
        s.check_intrinsic(&s.default_probes(), STEM_SYMMETRY_TOL)?;
    }
    SliceRegularFunction::from_stems_unchecked(side, stems)
}

pub fn eval_slice_fn(f: &SliceRegularFunction, q: Quat) -> Result<Quat> {
    f.eval(q)
}

pub fn star_product_tensor(f: &SliceRegularFunction, g: &SliceRegularFunction) -> Result<SliceRegularFunction> {
    f.star(g)
}

pub fn eta_fn(f: &SliceRegularFunction) -> SliceRegularFunction {
    f.eta()
}

pub fn regular_conjugate_tensor(f: &SliceRegularFunction) -> SliceRegularFunction {
    f.regular_conjugate()
}

pub fn slice_derivative_fn(f: &SliceRegularFunction, numeric_fallback: bool) -> Result<SliceRegularFunction> {
    f.slice_derivative(numeric_fallback)
}

/// `Q(z) = z^2 - 2 Re(c) z + |c|^2`, the real quadratic vanishing on the sphere of `c`.
fn sphere_quadratic(c: Quat) -> Vec<f64> {
    vec![c.norm_sqr(), -2.0 * c.w, 1.0]
}

/// Stems of `Q(z)^{-1} (z - conj(c))` with `Q` the quadratic of `c`:
/// the regular reciprocal of `z - c`.
pub(crate) fn reciprocal_linear_stems(c: Quat, scale: f64, region: Region) -> [IntrinsicStem; 4] {
    let den = sphere_quadratic(c);
    let cc = c.conj().to_array();
    std::array::from_fn(|m| {
        let num = if m == 0 { vec![-cc[0] * scale, scale] } else { vec![-cc[m] * scale] };
        IntrinsicStem::rational(num, den.clone(), region.clone())
    })
}

/// The quaternionic Cauchy kernel `q -> -(q^2 - 2 Re(s) q + |s|^2)^{-1} (q - conj(s))`,
/// left regular in `q`, singular on the sphere `Re(s) + S |Im(s)|`.
pub fn cauchy_kernel(s: Quat) -> SliceRegularFunction {
    SliceRegularFunction::from_parts(Side::Left, reciprocal_linear_stems(s, -1.0, Region::Entire), Region::Entire)
}

/// The same kernel as a function of `s` for fixed `q`, written as
/// `(s - conj(q)) (s^2 - 2 Re(q) s + |q|^2)^{-1}`, right regular in `s`.
pub fn cauchy_kernel_right(q: Quat) -> SliceRegularFunction {
    SliceRegularFunction::from_parts(Side::Right, reciprocal_linear_stems(q, 1.0, Region::Entire), Region::Entire)
}

/// Direct evaluation of the kernel formula, for cross-checks.
pub fn cauchy_kernel_direct(q: Quat, s: Quat) -> Result<Quat> {
    let d = Quat::from_real(s.norm_sqr()) - q.scale(2.0 * s.w) + q * q;
    let inv = d.inverse().map_err(|_| Error::Pole(format!("q = {q} lies on the sphere of s = {s}")))?;
    Ok(-(inv * (q - s.conj())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stem::IntrinsicStem;
    use std::f64::consts::{E, PI};

    fn close(a: Quat, b: Quat, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quat {
        Quat::new(w, x, y, z)
    }

    #[test]
    fn ext_examples() {
        let e = ext(IntrinsicStem::exp()).unwrap();
        assert!(close(e.eval(q(1.0, 0.0, PI, 0.0)).unwrap(), Quat::from_real(-E), 1e-14));
        let p = q(0.3, -1.0, 2.0, 0.5);
        assert!(close(e.eval(p).unwrap(), p.exp(), 1e-13));
        let id = ext(IntrinsicStem::identity()).unwrap();
        assert_eq!(id.eval(p).unwrap(), p);
        let five = ext(IntrinsicStem::constant(5.0)).unwrap();
        assert_eq!(five.eval(p).unwrap(), Quat::from_real(5.0));
        // slice preserving and eta-fixed
        assert!(close(e.eta().eval(p).unwrap(), e.eval(p).unwrap(), 1e-14));
    }

    #[test]
    fn ext_rejects_asymmetric_stem() {
        let bad = IntrinsicStem::from_fn("z+i", Region::Entire, |z| z + Complex64::i());
        assert!(matches!(ext(bad), Err(Error::InvalidStem(_))));
    }

    #[test]
    fn assemble_examples() {
        let z = IntrinsicStem::zero();
        let id = IntrinsicStem::identity();
        let one = IntrinsicStem::constant(1.0);
        let f = assemble([id.clone(), z.clone(), z.clone(), z.clone()], Side::Left).unwrap();
        let p = q(1.0, 2.0, -1.0, 0.5);
        assert_eq!(f.eval(p).unwrap(), p);
        let c = assemble([z.clone(), one.clone(), z.clone(), z.clone()], Side::Left).unwrap();
        assert_eq!(c.eval(p).unwrap(), Quat::i());
        let g = assemble([id, one, z.clone(), z], Side::Left).unwrap();
        assert_eq!(g.eval(Quat::j()).unwrap(), Quat::j() + Quat::i());
        assert_eq!(g.eval(Quat::from_real(2.0)).unwrap(), q(2.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn assemble_rejects_disjoint_domains() {
        let a = IntrinsicStem::constant(1.0).with_region(Region::half_plane(5.0));
        let b = IntrinsicStem::constant(1.0).with_region(Region::disk(1.0));
        let z = IntrinsicStem::zero();
        assert!(matches!(assemble([a, b, z.clone(), z], Side::Left), Err(Error::Usage(_))));
    }

    #[test]
    fn eval_outside_domain_is_a_domain_error() {
        let f = SliceRegularFunction::constant(Side::Left, Quat::one()).restrict(&Region::half_plane(1.0)).unwrap();
        assert!(matches!(f.eval(Quat::from_real(0.5)), Err(Error::Domain(_))));
    }

    #[test]
    fn star_examples() {
        let ci = SliceRegularFunction::constant(Side::Left, Quat::i());
        let cj = SliceRegularFunction::constant(Side::Left, Quat::j());
        let p = q(0.2, 0.4, -0.3, 0.9);
        assert_eq!(ci.star(&cj).unwrap().eval(p).unwrap(), Quat::k());
        assert_eq!(cj.star(&ci).unwrap().eval(p).unwrap(), -Quat::k());

        // intrinsic factor: pointwise everywhere
        let e = ext(IntrinsicStem::exp()).unwrap();
        let g = SliceRegularFunction::from_series(&Series::left(vec![Quat::i(), Quat::k(), Quat::j()]));
        let lhs = e.star(&g).unwrap().eval(p).unwrap();
        assert!(close(lhs, e.eval(p).unwrap() * g.eval(p).unwrap(), 1e-14));
        let rhs = g.star(&e).unwrap().eval(p).unwrap();
        assert!(close(lhs, rhs, 1e-14));

        // (q - i) * (q + i) = q^2 + 1 vanishes at q = j
        let a = SliceRegularFunction::from_series(&Series::left(vec![-Quat::i(), Quat::one()]));
        let b = SliceRegularFunction::from_series(&Series::left(vec![Quat::i(), Quat::one()]));
        assert!(close(a.star(&b).unwrap().eval(Quat::j()).unwrap(), Quat::zero(), 1e-15));

        let r = SliceRegularFunction::constant(Side::Right, Quat::one());
        assert!(matches!(ci.star(&r), Err(Error::Usage(_))));
    }

    #[test]
    fn eta_examples() {
        let ci = SliceRegularFunction::constant(Side::Left, Quat::i());
        let e = ci.eta();
        assert_eq!(e.side(), Side::Right);
        assert_eq!(e.eval(Quat::j()).unwrap(), -Quat::i());
        let g = SliceRegularFunction::from_series(&Series::left(vec![Quat::i(), Quat::k(), Quat::j()]));
        let p = q(0.5, -0.2, 0.7, 0.1);
        assert!(close(g.eta().eval(p).unwrap(), g.eval(p.conj()).unwrap().conj(), 1e-14));
        assert!(close(g.eta().eta().eval(p).unwrap(), g.eval(p).unwrap(), 1e-15));
    }

    #[test]
    fn conjugate_examples() {
        let z = IntrinsicStem::zero();
        let f = assemble([IntrinsicStem::identity(), IntrinsicStem::constant(1.0), z.clone(), z.clone()], Side::Left).unwrap();
        let c = f.regular_conjugate();
        let p = q(0.3, 0.1, 0.8, -0.4);
        assert_eq!(c.eval(p).unwrap(), p - Quat::i());
        assert_eq!(c.eval(Quat::from_real(2.0)).unwrap(), f.eval(Quat::from_real(2.0)).unwrap().conj());
        let e = ext(IntrinsicStem::exp()).unwrap();
        assert_eq!(e.regular_conjugate().eval(p).unwrap(), e.eval(p).unwrap());
        // series route
        let s = Series::left(vec![q(1.0, 2.0, 0.0, -1.0), q(0.0, 0.5, 1.0, 0.0)]);
        let lhs = SliceRegularFunction::from_series(&s).regular_conjugate().eval(p).unwrap();
        assert!(close(lhs, s.regular_conjugate().eval(p), 1e-15));
    }

    #[test]
    fn derivative_examples() {
        let e = ext(IntrinsicStem::exp()).unwrap();
        let p = q(0.3, 0.1, 0.8, -0.4);
        assert!(close(e.slice_derivative(false).unwrap().eval(p).unwrap(), p.exp(), 1e-14));
        let sq = ext(IntrinsicStem::polynomial(vec![0.0, 0.0, 1.0])).unwrap();
        assert!(close(sq.slice_derivative(false).unwrap().eval(p).unwrap(), p.scale(2.0), 1e-15));
        let no_d = ext(IntrinsicStem::from_fn("sin", Region::Entire, |z| z.sin())).unwrap();
        assert!(matches!(no_d.slice_derivative(false), Err(Error::Capability(_))));
        assert!(no_d.slice_derivative(true).is_ok());
    }

    #[test]
    fn reciprocal_and_symmetrization() {
        let s = Series::left(vec![q(1.0, 0.5, -0.5, 0.2), q(0.3, 0.0, 1.0, 0.0)]);
        let f = SliceRegularFunction::from_series(&s);
        let r = f.regular_reciprocal();
        let p = q(0.1, 0.2, -0.3, 0.1);
        let prod = f.star(&r).unwrap().eval(p).unwrap();
        assert!(close(prod, Quat::one(), 1e-13));
        let x = Quat::from_real(0.4);
        assert!(close(r.eval(x).unwrap(), f.eval(x).unwrap().inverse().unwrap(), 1e-14));
        assert!(f.symmetrization().is_structurally_intrinsic());
    }

    #[test]
    fn kernel_examples() {
        let k = cauchy_kernel(Quat::from_real(3.0));
        assert!(close(k.eval(Quat::from_real(1.0)).unwrap(), Quat::from_real(0.5), 1e-15));
        let k = cauchy_kernel(Quat::i());
        let v = k.eval(Quat::from_real(2.0)).unwrap();
        assert!(close(v, q(-0.4, -0.2, 0.0, 0.0), 1e-15));
        assert!(matches!(k.eval(Quat::j()), Err(Error::Pole(_))));

        let s = q(1.0, 0.0, 2.0, 0.0);
        for p in [q(0.3, 1.0, -0.5, 0.2), q(-1.0, 0.0, 0.4, 2.0)] {
            let a = cauchy_kernel(s).eval(p).unwrap();
            let b = cauchy_kernel_direct(p, s).unwrap();
            let c = cauchy_kernel_right(p).eval(s).unwrap();
            assert!(close(a, b, 1e-14), "{a} vs {b}");
            assert!(close(c, b, 1e-14), "{c} vs {b}");
        }
    }

    #[test]
    fn scale_outer_matches_pointwise() {
        let s = Series::left(vec![q(1.0, 0.5, -0.5, 0.2), q(0.3, 0.0, 1.0, 0.0)]);
        let l = q(0.2, -1.0, 0.5, 0.3);
        let p = q(0.1, 0.7, -0.3, 0.4);
        let f = SliceRegularFunction::from_series(&s);
        assert!(close(f.scale_outer(l).eval(p).unwrap(), f.eval(p).unwrap() * l, 1e-14));
        let r = SliceRegularFunction::from_series(&s.eta());
        assert!(close(r.scale_outer(l).eval(p).unwrap(), l * r.eval(p).unwrap(), 1e-14));
    }

    #[test]
    fn real_points_do_not_depend_on_unit() {
        let f = SliceRegularFunction::from_series(&Series::left(vec![q(1.0, 0.5, -0.5, 0.2), q(0.3, 0.0, 1.0, 0.0)]));
        for side_f in [f.clone(), f.eta()] {
            let a = side_f.eval_slice(0.7, 0.0, ImaginaryUnit::i()).unwrap();
            let b = side_f.eval_slice(0.7, 0.0, ImaginaryUnit::j()).unwrap();
            assert_eq!(a, b);
        }
    }
}
