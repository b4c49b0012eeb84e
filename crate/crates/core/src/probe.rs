//! Probe sets: grids over slices or explicit point lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::ImaginaryUnit;
use crate::Quat;

/// `count` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Real range × slice units × imaginary range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    pub real: Range,
    pub units: Vec<ImaginaryUnit<f64>>,
    pub imag: Range,
}

impl ProbeGrid {
    /// Points in canonical order: real part ascending, then units in the
    /// declared order, then imaginary part ascending.
    pub fn points(&self) -> Vec<Quat> {
        let mut xs = self.real.values();
        let mut ys = self.imag.values();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let mut out = Vec::with_capacity(xs.len() * ys.len() * self.units.len());
        for &x in &xs {
            for u in &self.units {
                for &y in &ys {
                    out.push(u.embed(x, y));
                }
            }
        }
        out
    }
}

/// Either a grid or an explicit list of quaternions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbeSet {
    Grid(ProbeGrid),
    Points(Vec<Quat>),
    Listed { points: Vec<Quat> },
}

impl ProbeSet {
    pub fn points(&self) -> Vec<Quat> {
        match self {
            ProbeSet::Grid(g) => g.points(),
            ProbeSet::Points(p) | ProbeSet::Listed { points: p } => p.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Usage(format!("probes: {e} (expected a grid {{real, units, imag}} or a list of [w,x,y,z])"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_order_is_canonical() {
        let json = r#"{"real":{"start":2,"stop":1,"count":2},"units":[[0,1,0],[1,0,0]],"imag":{"start":1,"stop":0,"count":2}}"#;
        let p = ProbeSet::from_json(json).unwrap().points();
        let expect = [
            Quat::new(1.0, 0.0, 0.0, 0.0),
            Quat::new(1.0, 0.0, 1.0, 0.0),
            Quat::new(1.0, 0.0, 0.0, 0.0),
            Quat::new(1.0, 1.0, 0.0, 0.0),
            Quat::new(2.0, 0.0, 0.0, 0.0),
            Quat::new(2.0, 0.0, 1.0, 0.0),
            Quat::new(2.0, 0.0, 0.0, 0.0),
            Quat::new(2.0, 1.0, 0.0, 0.0),
        ];
        assert_eq!(p, expect);
    }

    #[test]
    fn explicit_lists() {
        let p = ProbeSet::from_json("[[2,0,0,0],[1,1,0,0]]").unwrap().points();
        assert_eq!(p, vec![Quat::from_real(2.0), Quat::new(1.0, 1.0, 0.0, 0.0)]);
        let p = ProbeSet::from_json(r#"{"points":[[0,0,0,1]]}"#).unwrap().points();
        assert_eq!(p, vec![Quat::k()]);
        assert!(ProbeSet::from_json("[]").unwrap().points().is_empty());
        assert!(ProbeSet::from_json(r#"{"real":1}"#).is_err());
    }
}
