//! JSON and CSV emission with one shared number format.

use std::io::{self, Write};

use quatslice::Quat;
use serde::Serialize;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

struct Sci;

impl serde_json::ser::Formatter for Sci {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(num(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

pub fn json<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    Ok(buf)
}

/// A CSV table built from string cells.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

/// Header names `prefix_w .. prefix_z`.
pub fn quat_header(prefix: &str) -> [String; 4] {
    ["w", "x", "y", "z"].map(|c| format!("{prefix}_{c}"))
}

pub fn quat_cells(q: Quat) -> [String; 4] {
    [q.w, q.x, q.y, q.z].map(num)
}

pub fn opt_quat_cells(q: Option<Quat>) -> [String; 4] {
    q.map_or_else(|| std::array::from_fn(|_| String::new()), quat_cells)
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(String::new, num)
}
