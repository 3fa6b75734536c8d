use std::collections::HashSet;
use std::f64::consts::PI;

use crate::geometry::{wrap_pi, Vec2};
use crate::surface::FlatSurface;
use crate::tracer::{GeodesicTrace, SurfacePoint, TraceSegment};

use super::grid::SegmentGrid;

/// Directions closer than this (modulo π) count as the same pass direction.
pub const PROPER_ANGLE: f64 = 1e-6;

/// A proper self-intersection `G(t1) = G(t2)` with `G′(t1) ≠ G′(t2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionEvent {
    pub t1: f64,
    pub t2: f64,
    pub point: SurfacePoint,
    /// Angle in `(0, π)` between the two passes.
    pub angle: f64,
}

/// All proper self-intersections of `trace`, sorted by `(t1, t2)`.
///
/// Segments are compared only within a triangle chart. Segments whose directions
/// agree modulo π cannot cross properly, so each triangle first groups its segments
/// by direction; a triangle whose segments all share one direction is skipped. The
/// remaining candidate pairs are those sharing a cell of a uniform grid. Segment parameters are taken half-open, `[0, 1)`, so
/// crossings on a shared edge are counted once.
pub fn self_intersections(surface: &FlatSurface, trace: &GeodesicTrace) -> Vec<IntersectionEvent> {
    let mut per_tri: Vec<Vec<u32>> = vec![Vec::new(); surface.triangles().len()];
    for (k, s) in trace.segments.iter().enumerate() {
        if s.length() > 0.0 {
            per_tri[s.triangle].push(k as u32);
        }
    }
    let mut events = Vec::new();
    for (t, ids) in per_tri.iter().enumerate() {
        if ids.len() < 2 {
            continue;
        }
        let segs: Vec<&TraceSegment> = ids.iter().map(|&k| &trace.segments[k as usize]).collect();
        let class = direction_classes(&segs);
        if class.iter().all(|&c| c == class[0]) && spread(&segs) <= PROPER_ANGLE {
            continue;
        }
        let tri = surface.triangle(t);
        let (lo, hi) = bbox(&tri.corners);
        let diam = tri.diameter();
        let mut lens: Vec<f64> = segs.iter().map(|s| s.length()).collect();
        lens.sort_by(f64::total_cmp);
        let median = lens[lens.len() / 2];
        let cell = median.clamp(diam / 1000.0, diam / 10.0);
        let mut grid = SegmentGrid::new(lo, hi, cell, 1024);
        for (i, s) in segs.iter().enumerate() {
            grid.insert_segment(i as u32, s.entry, s.exit);
        }
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        for b in grid.buckets() {
            for (x, &i) in b.iter().enumerate() {
                for &j in &b[x + 1..] {
                    let (si, sj) = (segs[i as usize], segs[j as usize]);
                    if class[i as usize] == class[j as usize] && pair_angle(si, sj) <= PROPER_ANGLE {
                        continue;
                    }
                    if !seen.insert((i.min(j), i.max(j))) {
                        continue;
                    }
                    if let Some(ev) = crossing(t, si, sj) {
                        events.push(ev);
                    }
                }
            }
        }
    }
    events.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
    events
}

fn bbox(pts: &[Vec2]) -> (Vec2, Vec2) {
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// Angle between two segment directions, modulo π, in `[0, π/2]`.
fn pair_angle(a: &TraceSegment, b: &TraceSegment) -> f64 {
    let d = wrap_pi(a.direction.angle() - b.direction.angle());
    d.min(PI - d)
}

fn spread(segs: &[&TraceSegment]) -> f64 {
    segs.iter().map(|s| pair_angle(segs[0], s)).fold(0.0, f64::max)
}

/// Cluster segment directions modulo π; a new class starts at every gap wider than
/// the proper-angle threshold.
fn direction_classes(segs: &[&TraceSegment]) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> =
        segs.iter().enumerate().map(|(i, s)| (wrap_pi(s.direction.angle()), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut class = vec![0; segs.len()];
    let mut c = 0;
    for w in 0..order.len() {
        if w > 0 && order[w].0 - order[w - 1].0 > PROPER_ANGLE {
            c += 1;
        }
        class[order[w].1] = c;
    }
    // the circle of directions wraps at π
    if c > 0 && order[0].0 + PI - order[order.len() - 1].0 <= PROPER_ANGLE {
        for x in class.iter_mut() {
            if *x == c {
                *x = 0;
            }
        }
    }
    class
}

fn crossing(t: usize, a: &TraceSegment, b: &TraceSegment) -> Option<IntersectionEvent> {
    let r = a.exit - a.entry;
    let s = b.exit - b.entry;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = b.entry - a.entry;
    let u = qp.cross(s) / denom;
    let v = qp.cross(r) / denom;
    if !((0.0..1.0).contains(&u) && (0.0..1.0).contains(&v)) {
        return None;
    }
    let ta = a.start_param + u * a.length();
    let tb = b.start_param + v * b.length();
    if (ta - tb).abs() <= 1e-12 * (1.0 + ta.abs()) {
        return None;
    }
    let angle = a.direction.dot(b.direction).clamp(-1.0, 1.0).acos();
    if !(angle > PROPER_ANGLE && angle < PI - PROPER_ANGLE) {
        return None;
    }
    let point = a.entry + r * u;
    let (t1, t2) = if ta < tb { (ta, tb) } else { (tb, ta) };
    Some(IntersectionEvent { t1, t2, point: SurfacePoint::new(t, point), angle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cube_surface, flat_torus, isosceles_tetrahedron};
    use crate::tracer::{trace, TangentDirection};
    use crate::DEFAULT_VERTEX_CLEARANCE;

    fn brute(surface: &FlatSurface, tr: &GeodesicTrace) -> usize {
        let mut n = 0;
        for i in 0..tr.segments.len() {
            for j in i + 1..tr.segments.len() {
                let (a, b) = (&tr.segments[i], &tr.segments[j]);
                if a.triangle == b.triangle
                    && a.length() > 0.0
                    && b.length() > 0.0
                    && crossing(a.triangle, a, b).is_some()
                {
                    n += 1;
                }
            }
        }
        let _ = surface;
        n
    }

    #[test]
    fn torus_lines_are_simple() {
        let s = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let tr = trace(&s, TangentDirection::from_angle(0, Vec2::new(0.6, 0.3), 0.37), 80.0, DEFAULT_VERTEX_CLEARANCE)
            .unwrap();
        assert!(self_intersections(&s, &tr).is_empty());
    }

    #[test]
    fn tetrahedron_lines_are_simple() {
        let s = isosceles_tetrahedron(1.0, 1.0, 1.0).unwrap();
        let c = s.triangle(0).centroid() + Vec2::new(0.01, 0.003);
        let tr = trace(&s, TangentDirection::from_angle(0, c, 0.2345), 200.0, DEFAULT_VERTEX_CLEARANCE).unwrap();
        assert_eq!(tr.termination.name(), "LengthReached");
        assert!(self_intersections(&s, &tr).is_empty());
    }

    #[test]
    fn cube_lines_cross_and_grid_matches_brute_force() {
        let s = cube_surface().unwrap();
        let c = Vec2::new(0.6, 0.3);
        let tr = trace(&s, TangentDirection::from_angle(0, c, 0.3), 50.0, DEFAULT_VERTEX_CLEARANCE).unwrap();
        let ev = self_intersections(&s, &tr);
        assert!(!ev.is_empty());
        assert_eq!(ev.len(), brute(&s, &tr));
        for e in &ev {
            assert!(e.t1 < e.t2);
            let p = tr.locate(e.t1).unwrap();
            let q = tr.locate(e.t2).unwrap();
            assert!(crate::tracer::chart_distance(&s, p, q) < 1e-7);
            assert!(e.angle > PROPER_ANGLE && e.angle < PI - PROPER_ANGLE);
        }
    }
}
