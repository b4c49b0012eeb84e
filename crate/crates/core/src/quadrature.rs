//! Adaptive Gauss–Kronrod quadrature for vector-valued integrands.
//!
//! Every component is integrated on the same panels, so one evaluation of
//! the integrand feeds all of them. The panel with the largest error is
//! bisected until the summed error meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae (non-negative half, descending) and weights,
// with the weights of the embedded 10-point Gauss rule on the odd nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of one panel: the Kronrod estimate and the Gauss/Kronrod gap.
#[derive(Debug, Clone, Copy)]
pub struct Panel<const N: usize> {
    pub a: f64,
    pub b: f64,
    pub value: [f64; N],
    pub error: f64,
}

fn euclid<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One 21-point Kronrod panel on `[a, b]`. The error is the Euclidean norm
/// of the componentwise difference to the embedded Gauss rule.
pub fn gk21<const N: usize, F>(f: &F, a: f64, b: f64) -> Panel<N>
where
    F: Fn(f64) -> [f64; N] + ?Sized,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let fc = f(c);
    for n in 0..N {
        kron[n] = WGK[10] * fc[n];
    }
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        for n in 0..N {
            let s = f1[n] + f2[n];
            kron[n] += w * s;
            if i % 2 == 1 {
                gauss[n] += WG[i / 2] * s;
            }
        }
    }
    let mut diff = [0.0; N];
    for n in 0..N {
        kron[n] *= h;
        gauss[n] *= h;
        diff[n] = kron[n] - gauss[n];
    }
    Panel { a, b, value: kron, error: euclid(&diff) }
}

/// Integral over a union of panels.
#[derive(Debug, Clone)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    /// Sorted panel endpoints, usable as the starting partition of a later run.
    pub points: Vec<f64>,
}

struct Ranked<const N: usize>(Panel<N>);

impl<const N: usize> PartialEq for Ranked<N> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<const N: usize> Eq for Ranked<N> {}
impl<const N: usize> PartialOrd for Ranked<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Ranked<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.total_cmp(&other.0.error)
    }
}

/// Integrates `f` over `[points[0], points.last()]` starting from the
/// partition `points` (which must be sorted, with at least two entries).
/// Panels are bisected, largest error first, until the total error is at
/// most `abs_tol` or the partition holds `max_panels` panels.
pub fn integrate<const N: usize, F>(f: &F, points: &[f64], abs_tol: f64, max_panels: usize) -> Result<Integral<N>>
where
    F: Fn(f64) -> [f64; N] + ?Sized,
{
    if points.len() < 2 {
        return Ok(Integral { value: [0.0; N], error: 0.0, points: points.to_vec() });
    }
    let mut heap: BinaryHeap<Ranked<N>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Ranked(gk21(f, w[0], w[1])))
        .collect();
    let total_error = |h: &BinaryHeap<Ranked<N>>| h.iter().map(|p| p.0.error).sum::<f64>();
    let mut err = total_error(&heap);
    loop {
        if !err.is_finite() {
            return Err(Error::Accuracy { achieved: f64::INFINITY, requested: abs_tol });
        }
        if err <= abs_tol {
            break;
        }
        if heap.len() >= max_panels.max(1) {
            return Err(Error::Accuracy { achieved: err, requested: abs_tol });
        }
        let Ranked(worst) = heap.pop().expect("nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further in floating point
            return Err(Error::Accuracy { achieved: err, requested: abs_tol });
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        err += left.error + right.error - worst.error;
        heap.push(Ranked(left));
        heap.push(Ranked(right));
        // resum now and then so cancellation in the running total cannot drift
        if heap.len().is_multiple_of(64) {
            err = total_error(&heap);
        }
    }
    let mut panels: Vec<Panel<N>> = heap.into_iter().map(|r| r.0).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = [0.0; N];
    let mut error = 0.0;
    for p in &panels {
        for n in 0..N {
            value[n] += p.value[n];
        }
        error += p.error;
    }
    let mut pts: Vec<f64> = panels.iter().map(|p| p.a).collect();
    pts.push(panels.last().map_or(points[0], |p| p.b));
    Ok(Integral { value, error, points: pts })
}

/// Initial partition of `[a, b]`: the endpoints plus every breakpoint strictly inside.
pub fn partition(a: f64, b: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&t| t > a && t < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}
