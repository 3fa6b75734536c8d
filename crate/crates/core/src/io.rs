//! JSON schemas for surfaces, traces and parallelism verdicts.
//!
//! Floating point numbers are written with 17 significant digits (`%.17g` style)
//! so that every `f64` survives a text round trip bit for bit.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};
use thiserror::Error;

use crate::surface::{EdgeRef, FlatSurface, Gluing, SurfaceError, Triangle};
use crate::Vec2;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

impl IoError {
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Io(_) => "Io",
            IoError::Json(_) => "Json",
            IoError::Surface(e) => e.kind(),
        }
    }
}

/// Format like C's `%.17g`, except that negative zero is written `-0.0` so JSON
/// parsers keep its sign.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-5..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mant), sign, exp.abs())
    } else {
        let prec = (16 - exp) as usize;
        strip_zeros(&format!("{:.*}", prec, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Compact JSON formatter writing floats with [`format_g17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct G17Formatter;

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

/// Serialize any value as compact JSON with 17-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("json is utf-8")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub id: usize,
    pub corners: [[f64; 2]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingRecord {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub reversed: bool,
}

/// On-disk surface description: `{"triangles": [...], "gluings": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub triangles: Vec<TriangleRecord>,
    pub gluings: Vec<GluingRecord>,
}

impl SurfaceFile {
    pub fn from_parts(triangles: &[Triangle], gluings: &[Gluing]) -> Self {
        SurfaceFile {
            triangles: triangles
                .iter()
                .map(|t| TriangleRecord { id: t.id, corners: t.corners.map(<[f64; 2]>::from) })
                .collect(),
            gluings: gluings
                .iter()
                .map(|g| GluingRecord {
                    a: [g.a.triangle, g.a.edge],
                    b: [g.b.triangle, g.b.edge],
                    reversed: g.reversed,
                })
                .collect(),
        }
    }

    pub fn into_parts(self) -> (Vec<Triangle>, Vec<Gluing>) {
        let triangles = self.triangles.into_iter().map(|t| Triangle::new(t.id, t.corners.map(Vec2::from))).collect();
        let gluings = self
            .gluings
            .into_iter()
            .map(|g| Gluing::new(EdgeRef::new(g.a[0], g.a[1]), EdgeRef::new(g.b[0], g.b[1]), g.reversed))
            .collect();
        (triangles, gluings)
    }

    pub fn build(self, tolerance: f64) -> Result<FlatSurface, SurfaceError> {
        let (t, g) = self.into_parts();
        FlatSurface::build(t, g, tolerance)
    }
}

impl From<&FlatSurface> for SurfaceFile {
    fn from(s: &FlatSurface) -> Self {
        SurfaceFile::from_parts(s.triangles(), s.gluings())
    }
}

pub fn surface_to_json(surface: &FlatSurface) -> String {
    to_json(&SurfaceFile::from(surface))
}

pub fn surface_from_json(text: &str, tolerance: f64) -> Result<FlatSurface, IoError> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    Ok(file.build(tolerance)?)
}

pub fn read_surface(path: &std::path::Path, tolerance: f64) -> Result<FlatSurface, IoError> {
    let text = std::fs::read_to_string(path)?;
    surface_from_json(&text, tolerance)
}

pub fn write_surface(path: &std::path::Path, surface: &FlatSurface) -> Result<(), IoError> {
    std::fs::write(path, surface_to_json(surface))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn g17_matches_c_printf() {
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(0.5), "0.5");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(std::f64::consts::FRAC_1_SQRT_2), "0.70710678118654757");
    }

    #[test]
    fn float_records_round_trip() {
        let file = SurfaceFile {
            triangles: vec![TriangleRecord { id: 0, corners: [[0.1, 0.2], [1.0 / 3.0, -0.0], [1e-300, 2.0]] }],
            gluings: vec![GluingRecord { a: [0, 0], b: [0, 1], reversed: true }],
        };
        let text = to_json(&file);
        let back: SurfaceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(to_json(&back), text);
    }

    proptest! {
        #[test]
        fn g17_is_lossless(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let s = format_g17(x);
            let y: f64 = s.parse().unwrap();
            prop_assert_eq!(x.to_bits(), y.to_bits());
            let v: f64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(x.to_bits(), v.to_bits());
        }
    }
}
