use crate::geometry::Vec2;
use crate::surface::{EdgeRef, FlatSurface, TriangleId};
use crate::tracer::GeodesicTrace;

/// Arc-length parameters `t > 0` at which the trace returns to its start point with
/// its start direction, within `tol` (in position and in direction).
///
/// The start is compared in each segment's chart; a start lying on an edge is also
/// transferred across that edge, so returns through the neighbouring triangle count.
pub fn recurrences(surface: &FlatSurface, trace: &GeodesicTrace, tol: f64) -> Vec<f64> {
    let start = trace.start;
    let mut charts: Vec<(TriangleId, Vec2, Vec2)> = vec![(start.at.triangle, start.at.coords, start.unit)];
    let tri = surface.triangle(start.at.triangle);
    for e in 0..3 {
        if tri.edge_height(e, start.at.coords).abs() <= tol {
            let he = surface.half_edge(EdgeRef::new(start.at.triangle, e));
            charts.push((
                he.twin.triangle,
                he.transition.apply(start.at.coords),
                he.transition.apply_linear(start.unit),
            ));
        }
    }
    let min_t = tol.max(1e-9);
    let mut out: Vec<f64> = Vec::new();
    for s in &trace.segments {
        let len = s.length();
        for &(t, p, d) in &charts {
            if s.triangle != t || s.direction.dist(d) > tol {
                continue;
            }
            let rel = p - s.entry;
            let along = rel.dot(s.direction);
            let off = rel.cross(s.direction).abs();
            if off <= tol && along >= -tol && along <= len + tol {
                let param = s.start_param + along.clamp(0.0, len);
                if param > min_t && out.last().is_none_or(|&l| param - l > 10.0 * tol) {
                    out.push(param);
                }
            }
        }
    }
    out
}

/// Smallest positive period of the trace, if it closes up within its length.
pub fn closed_geodesic_detect(surface: &FlatSurface, trace: &GeodesicTrace, tol: f64) -> Option<f64> {
    recurrences(surface, trace, tol).first().copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::flat_torus;
    use crate::tracer::{trace, TangentDirection};

    #[test]
    fn torus_periods() {
        let s = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let p = Vec2::new(0.5, 0.5);
        let tri = s.triangles_containing(p, None)[0];
        let h = trace(&s, TangentDirection::new(tri, p, Vec2::new(1.0, 0.0)), 3.5, 1e-7).unwrap();
        let rec = recurrences(&s, &h, 1e-7);
        assert_eq!(rec.len(), 3);
        for (k, r) in rec.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-9);
        }
        let d = trace(&s, TangentDirection::new(tri, p, Vec2::new(2.0, 1.0)), 3.0, 1e-7).unwrap();
        let period = closed_geodesic_detect(&s, &d, 1e-7).unwrap();
        assert!((period - 5f64.sqrt()).abs() < 1e-9);
        let irr = trace(&s, TangentDirection::new(tri, p, Vec2::new(1.0, 2f64.sqrt())), 20.0, 1e-7).unwrap();
        assert_eq!(closed_geodesic_detect(&s, &irr, 1e-7), None);
    }
}
