//! Axially symmetric domains described through their slice coordinates.
//!
//! Every region is invariant under `x + I y -> x + J y` for all units `I, J`,
//! so membership only depends on `(x, |y|)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::slice_decompose;
use crate::Quat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `Re(q) > re_min`.
    HalfPlane { re_min: f64 },
    /// `|q| < radius`.
    Disk { radius: f64 },
    /// `inner < |q| < outer`.
    Annulus { inner: f64, outer: f64 },
    /// All of H.
    Entire,
    /// Points lying in every part.
    Intersection { parts: Vec<Region> },
}

impl Region {
    pub fn half_plane(re_min: f64) -> Self {
        Region::HalfPlane { re_min }
    }

    pub fn disk(radius: f64) -> Self {
        Region::Disk { radius }
    }

    /// Membership of `x + I y` (for any unit `I`).
    pub fn contains_slice(&self, x: f64, y: f64) -> bool {
        let r = x.hypot(y);
        match self {
            Region::HalfPlane { re_min } => x > *re_min,
            Region::Disk { radius } => r < *radius,
            Region::Annulus { inner, outer } => r > *inner && r < *outer,
            Region::Entire => true,
            Region::Intersection { parts } => parts.iter().all(|p| p.contains_slice(x, y)),
        }
    }

    pub fn contains(&self, q: Quat) -> bool {
        let c = slice_decompose(q);
        self.contains_slice(c.x, c.y)
    }

    /// Whether the closed ball of radius `margin` around `x + I y` (inside
    /// the slice) lies in the region; checked on the four axis offsets.
    pub fn contains_with_margin(&self, x: f64, y: f64, margin: f64) -> bool {
        self.contains_slice(x, y)
            && [(margin, 0.0), (-margin, 0.0), (0.0, margin), (0.0, -margin)]
                .iter()
                .all(|&(dx, dy)| self.contains_slice(x + dx, y + dy))
    }

    /// Intersection, simplified when both sides are of the same kind.
    pub fn intersect(&self, other: &Region) -> Region {
        use Region::*;
        match (self, other) {
            (Entire, r) | (r, Entire) => r.clone(),
            (HalfPlane { re_min: a }, HalfPlane { re_min: b }) => HalfPlane { re_min: a.max(*b) },
            (Disk { radius: a }, Disk { radius: b }) => Disk { radius: a.min(*b) },
            (Annulus { inner: a0, outer: a1 }, Annulus { inner: b0, outer: b1 }) => Annulus {
                inner: a0.max(*b0),
                outer: a1.min(*b1),
            },
            (a, b) if a == b => a.clone(),
            (a, b) => {
                let mut parts = Vec::new();
                for r in [a, b] {
                    match r {
                        Intersection { parts: p } => parts.extend(p.iter().cloned()),
                        r => parts.push(r.clone()),
                    }
                }
                Intersection { parts }
            }
        }
    }

    /// The open real intervals making up `region ∩ R`.
    pub fn real_intervals(&self) -> Vec<(f64, f64)> {
        match self {
            Region::HalfPlane { re_min } => vec![(*re_min, f64::INFINITY)],
            Region::Disk { radius } => vec![(-radius, *radius)],
            Region::Annulus { inner, outer } => vec![(-outer, -inner), (*inner, *outer)],
            Region::Entire => vec![(f64::NEG_INFINITY, f64::INFINITY)],
            Region::Intersection { parts } => {
                let mut acc = vec![(f64::NEG_INFINITY, f64::INFINITY)];
                for p in parts {
                    let mut next = Vec::new();
                    for &(a, b) in &acc {
                        for (c, d) in p.real_intervals() {
                            let (lo, hi) = (a.max(c), b.min(d));
                            if lo < hi {
                                next.push((lo, hi));
                            }
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    pub fn meets_real_axis(&self) -> bool {
        self.real_intervals().iter().any(|(a, b)| a < b)
    }

    /// A bounded real interval well inside the region, used to place probes.
    pub fn real_probe_interval(&self) -> Result<(f64, f64)> {
        let (a, b) = self
            .real_intervals()
            .into_iter()
            .find(|(a, b)| a < b)
            .ok_or_else(|| Error::Usage("region does not meet the real axis".into()))?;
        Ok(match (a.is_finite(), b.is_finite()) {
            (true, true) => {
                let w = b - a;
                (a + 0.1 * w, b - 0.1 * w)
            }
            (true, false) => (a + 0.5, a + 3.0),
            (false, true) => (b - 3.0, b - 0.5),
            (false, false) => (-2.0, 2.0),
        })
    }

    /// `n` Chebyshev points of the first kind on [`Region::real_probe_interval`].
    pub fn chebyshev_real_probes(&self, n: usize) -> Result<Vec<f64>> {
        let (a, b) = self.real_probe_interval()?;
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        Ok((0..n)
            .rev()
            .map(|k| {
                let t = std::f64::consts::PI * (2 * k + 1) as f64 / (2 * n) as f64;
                mid + half * t.cos()
            })
            .collect())
    }

    /// A few off-axis points `(x, y)` with `y > 0` inside the region.
    pub fn slice_probes(&self) -> Vec<(f64, f64)> {
        let Ok((a, b)) = self.real_probe_interval() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for fx in [0.25, 0.5, 0.75] {
            let x = a + fx * (b - a);
            for y in [0.05, 0.3, 0.7] {
                let y = y * (b - a).max(1.0);
                if self.contains_slice(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}
