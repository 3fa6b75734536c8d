use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{point_segment_dist, Vec2};
use crate::surface::{EdgeRef, FlatSurface, TriangleId};
use crate::tracer::GeodesicTrace;

use super::grid::SegmentGrid;
use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub epsilon: f64,
    pub sample_count: usize,
    pub covered_fraction: f64,
}

/// Area-weighted uniform sample points, deterministic in `seed`.
pub(crate) fn sample_points(surface: &FlatSurface, samples: usize, seed: u64) -> Vec<(TriangleId, Vec2)> {
    let areas: Vec<f64> = surface.triangles().iter().map(|t| t.signed_area()).collect();
    let pick = WeightedIndex::new(&areas).expect("triangles have positive area");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let t = pick.sample(&mut rng);
            let (mut r1, mut r2): (f64, f64) = (rng.gen(), rng.gen());
            if r1 + r2 > 1.0 {
                r1 = 1.0 - r1;
                r2 = 1.0 - r2;
            }
            let [a, b, c] = surface.triangle(t).corners;
            (t, a + (b - a) * r1 + (c - a) * r2)
        })
        .collect()
}

/// Fraction of `samples` random points lying within `epsilon` of the trace.
///
/// Distances are measured in the sample's own chart, against trace segments in the
/// same triangle and in the triangles glued to it (developed one transition deep).
/// Points whose nearest trace point is further away in the dual graph are not
/// counted, so the estimate never overstates coverage. When `epsilon` exceeds a
/// bound on the surface diameter every point is covered.
pub fn density_estimate(
    surface: &FlatSurface,
    trace: &GeodesicTrace,
    epsilon: f64,
    samples: usize,
    seed: u64,
) -> Result<DensityReport, AnalysisError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(AnalysisError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if samples == 0 {
        return Err(AnalysisError::InvalidArgument("samples must be positive".into()));
    }
    let report = |covered: usize| DensityReport {
        epsilon,
        sample_count: samples,
        covered_fraction: covered as f64 / samples as f64,
    };
    if trace.segments.is_empty() {
        return Ok(report(0));
    }
    let max_tri = surface.triangles().iter().map(|t| t.diameter()).fold(0.0, f64::max);
    if epsilon > surface.diameter_estimate() + max_tri {
        return Ok(report(samples));
    }

    let n = surface.triangles().len();
    let mut own: Vec<Vec<(Vec2, Vec2)>> = vec![Vec::new(); n];
    for s in &trace.segments {
        own[s.triangle].push((s.entry, s.exit));
    }
    let points = sample_points(surface, samples, seed);
    let mut by_tri: Vec<Vec<Vec2>> = vec![Vec::new(); n];
    for (t, p) in points {
        by_tri[t].push(p);
    }

    let mut covered = 0;
    for t in 0..n {
        if by_tri[t].is_empty() {
            continue;
        }
        let tri = surface.triangle(t);
        let lo = tri
            .corners
            .iter()
            .fold(Vec2::new(f64::INFINITY, f64::INFINITY), |m, c| Vec2::new(m.x.min(c.x), m.y.min(c.y)))
            - Vec2::new(epsilon, epsilon);
        let hi = tri
            .corners
            .iter()
            .fold(Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, c| Vec2::new(m.x.max(c.x), m.y.max(c.y)))
            + Vec2::new(epsilon, epsilon);
        let mut segs: Vec<(Vec2, Vec2)> = own[t].clone();
        let mut seen = vec![t];
        for e in 0..3 {
            let he = surface.half_edge(EdgeRef::new(t, e));
            let nb = he.twin.triangle;
            if seen.contains(&nb) {
                continue;
            }
            seen.push(nb);
            let back = surface.half_edge(he.twin).transition;
            segs.extend(own[nb].iter().map(|&(a, b)| (back.apply(a), back.apply(b))));
        }
        let segs: Vec<(Vec2, Vec2)> = segs.into_iter().filter_map(|(a, b)| clip(a, b, lo, hi)).collect();
        if segs.is_empty() {
            continue;
        }
        let cell = epsilon.max(tri.diameter() / 256.0);
        let mut grid = SegmentGrid::new(lo, hi, cell, 512);
        for (i, &(a, b)) in segs.iter().enumerate() {
            grid.insert_segment(i as u32, a, b);
        }
        let (nx, ny) = grid.dims();
        for &p in &by_tri[t] {
            let (cx, cy) = grid.cell_of(p);
            let hit = (cy.saturating_sub(1)..=(cy + 1).min(ny - 1)).any(|y| {
                (cx.saturating_sub(1)..=(cx + 1).min(nx - 1)).any(|x| {
                    grid.bucket(x, y).iter().any(|&i| {
                        let (a, b) = segs[i as usize];
                        point_segment_dist(p, a, b) < epsilon
                    })
                })
            });
            if hit {
                covered += 1;
            }
        }
    }
    Ok(report(covered))
}

/// Clip segment `ab` to the rectangle `[lo, hi]` (Liang–Barsky).
fn clip(a: Vec2, b: Vec2, lo: Vec2, hi: Vec2) -> Option<(Vec2, Vec2)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-d.x, a.x - lo.x), (d.x, hi.x - a.x), (-d.y, a.y - lo.y), (d.y, hi.y - a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then(|| (a + d * t0, a + d * t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::flat_torus;
    use crate::tracer::{trace, TangentDirection};

    fn torus() -> FlatSurface {
        flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap()
    }

    #[test]
    fn horizontal_circle_covers_a_strip() {
        let s = torus();
        let tr = trace(&s, TangentDirection::from_angle(1, Vec2::new(0.25, 0.5), 0.0), 5.0, 1e-7).unwrap();
        let r = density_estimate(&s, &tr, 0.05, 4000, 1).unwrap();
        // exact fraction of the 0.05-neighbourhood of one circle: 0.1
        assert!((r.covered_fraction - 0.1).abs() < 0.02, "{}", r.covered_fraction);
    }

    #[test]
    fn huge_epsilon_covers_everything() {
        let s = torus();
        let tr = trace(&s, TangentDirection::from_angle(0, Vec2::new(0.6, 0.2), 0.0), 0.1, 1e-7).unwrap();
        assert_eq!(density_estimate(&s, &tr, 10.0, 100, 0).unwrap().covered_fraction, 1.0);
    }

    #[test]
    fn clipping() {
        let lo = Vec2::new(0.0, 0.0);
        let hi = Vec2::new(1.0, 1.0);
        assert!(clip(Vec2::new(2.0, 2.0), Vec2::new(3.0, 2.0), lo, hi).is_none());
        let (a, b) = clip(Vec2::new(-1.0, 0.5), Vec2::new(2.0, 0.5), lo, hi).unwrap();
        assert_eq!((a, b), (Vec2::new(0.0, 0.5), Vec2::new(1.0, 0.5)));
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = torus();
        let tr = trace(&s, TangentDirection::from_angle(0, Vec2::new(0.6, 0.2), 0.0), 1.0, 1e-7).unwrap();
        assert!(density_estimate(&s, &tr, 0.0, 10, 0).is_err());
        assert!(density_estimate(&s, &tr, 0.1, 0, 0).is_err());
    }
}
