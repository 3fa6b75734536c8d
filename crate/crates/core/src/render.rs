//! Deterministic SVG drawings of surfaces and traces.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::Vec2;
use crate::surface::FlatSurface;
use crate::tracer::{unfold, GeodesicTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    /// Develop the visited triangles into one plane; the trace is a straight segment.
    Unfolded,
    /// Draw every triangle in its own chart, side by side.
    PerChart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub face_stroke: f64,
    pub trace_stroke: f64,
    pub vertex_radius: f64,
    pub face_fill: String,
    pub face_color: String,
    pub trace_color: String,
    pub vertex_color: String,
    pub mode: RenderMode,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 800,
            height: 600,
            face_stroke: 1.0,
            trace_stroke: 1.5,
            vertex_radius: 3.0,
            face_fill: "#eef2f7".into(),
            face_color: "#44546a".into(),
            trace_color: "#c0392b".into(),
            vertex_color: "#1f2d3d".into(),
            mode: RenderMode::Unfolded,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("image dimensions must be positive")]
    EmptyCanvas,
}

struct Scene {
    faces: Vec<([Vec2; 3], String)>,
    lines: Vec<(Vec2, Vec2)>,
    dots: Vec<Vec2>,
}

impl Scene {
    fn bounds(&self) -> (Vec2, Vec2) {
        let pts =
            self.faces.iter().flat_map(|(f, _)| f.iter().copied()).chain(self.lines.iter().flat_map(|(a, b)| [*a, *b]));
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.x.is_finite() {
            return (Vec2::ZERO, Vec2::new(1.0, 1.0));
        }
        (lo, hi)
    }

    fn to_svg(&self, spec: &RenderSpec) -> String {
        let (lo, hi) = self.bounds();
        let margin = 10.0;
        let (w, h) = (f64::from(spec.width), f64::from(spec.height));
        let span = Vec2::new((hi.x - lo.x).max(1e-12), (hi.y - lo.y).max(1e-12));
        let scale = ((w - 2.0 * margin) / span.x).min((h - 2.0 * margin) / span.y);
        let off = Vec2::new((w - scale * span.x) / 2.0, (h - scale * span.y) / 2.0);
        // chart y grows upward, SVG y grows downward
        let map = |p: Vec2| Vec2::new(off.x + (p.x - lo.x) * scale, h - off.y - (p.y - lo.y) * scale);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            spec.width, spec.height, spec.width, spec.height
        );
        for (f, label) in &self.faces {
            let pts: Vec<String> = f.iter().map(|&p| fmt_pt(map(p))).collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{}" stroke="{}" stroke-width="{}"><title>{}</title></polygon>"#,
                pts.join(" "),
                spec.face_fill,
                spec.face_color,
                spec.face_stroke,
                label
            );
        }
        for (a, b) in &self.lines {
            let (a, b) = (map(*a), map(*b));
            let _ = writeln!(
                s,
                r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{}" stroke-width="{}"/>"#,
                a.x, a.y, b.x, b.y, spec.trace_color, spec.trace_stroke
            );
        }
        for p in &self.dots {
            let p = map(*p);
            let _ = writeln!(
                s,
                r#"<circle cx="{:.3}" cy="{:.3}" r="{}" fill="{}"/>"#,
                p.x, p.y, spec.vertex_radius, spec.vertex_color
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn fmt_pt(p: Vec2) -> String {
    format!("{:.3},{:.3}", p.x, p.y)
}

/// Corners of triangle `t` that are cone points.
fn cone_corners(surface: &FlatSurface, t: usize) -> Vec<usize> {
    let tol = surface.angular_tolerance();
    (0..3).filter(|&c| surface.vertices()[surface.vertex_at(t, c)].is_cone_point(tol)).collect()
}

/// Side-by-side layout of all charts: each triangle translated so its bounding box
/// starts at a grid cell corner.
fn chart_layout(surface: &FlatSurface) -> Vec<Vec2> {
    let n = surface.triangles().len();
    let cols = (n as f64).sqrt().ceil().max(1.0) as usize;
    let cell = surface.triangles().iter().map(|t| t.diameter()).fold(0.0, f64::max) * 1.2;
    surface
        .triangles()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let lo = t
                .corners
                .iter()
                .fold(Vec2::new(f64::INFINITY, f64::INFINITY), |m, c| Vec2::new(m.x.min(c.x), m.y.min(c.y)));
            let slot = Vec2::new((i % cols) as f64 * cell, -((i / cols) as f64) * cell);
            slot - lo
        })
        .collect()
}

/// Draw the surface's charts, with `trace` overlaid when given.
pub fn render(surface: &FlatSurface, trace: Option<&GeodesicTrace>, spec: &RenderSpec) -> Result<String, RenderError> {
    if spec.width == 0 || spec.height == 0 {
        return Err(RenderError::EmptyCanvas);
    }
    let mut scene = Scene { faces: Vec::new(), lines: Vec::new(), dots: Vec::new() };
    match (spec.mode, trace) {
        (RenderMode::Unfolded, Some(tr)) if !tr.segments.is_empty() => {
            let u = unfold(surface, tr);
            for (k, p) in u.placements.iter().enumerate() {
                let corners = u.placed_corners(surface, k);
                scene.faces.push((corners, format!("triangle {} (segment {k})", p.triangle)));
                for c in cone_corners(surface, p.triangle) {
                    scene.dots.push(corners[c]);
                }
            }
            scene.lines.push((u.start, u.end));
        }
        _ => {
            let shift = chart_layout(surface);
            for (t, tri) in surface.triangles().iter().enumerate() {
                let corners = tri.corners.map(|c| c + shift[t]);
                scene.faces.push((corners, format!("triangle {t}")));
                for c in cone_corners(surface, t) {
                    scene.dots.push(corners[c]);
                }
            }
            if let Some(tr) = trace {
                for s in &tr.segments {
                    scene.lines.push((s.entry + shift[s.triangle], s.exit + shift[s.triangle]));
                }
            }
        }
    }
    Ok(scene.to_svg(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::flat_torus;
    use crate::tracer::{trace, TangentDirection};

    #[test]
    fn deterministic_svg() {
        let s = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let tr =
            trace(&s, TangentDirection::new(0, Vec2::new(0.6, 0.2), Vec2::new(2.0, 1.0)), 5f64.sqrt(), 1e-7).unwrap();
        let spec = RenderSpec::default();
        let a = render(&s, Some(&tr), &spec).unwrap();
        assert_eq!(a, render(&s, Some(&tr), &spec).unwrap());
        assert_eq!(a.matches("<line").count(), 1);
        assert_eq!(a.matches("<polygon").count(), tr.segments.len());
        let per = RenderSpec { mode: RenderMode::PerChart, ..RenderSpec::default() };
        let b = render(&s, Some(&tr), &per).unwrap();
        assert_eq!(b.matches("<polygon").count(), 2);
        assert_eq!(b.matches("<line").count(), tr.segments.len());
        let zero = RenderSpec { width: 0, ..RenderSpec::default() };
        assert_eq!(render(&s, None, &zero), Err(RenderError::EmptyCanvas));
    }
}
