use std::collections::{HashMap, VecDeque};
use std::f64::consts::TAU;

use crate::geometry::{fold_angle, wrap_tau, PlaneIsometry};
use crate::surface::{EdgeRef, FlatSurface, TriangleId};
use crate::tracer::GeodesicTrace;

use super::AnalysisError;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpectrum {
    /// Distinct folded angles in `[0, π]` between co-face segment directions.
    pub angles: Vec<f64>,
    /// Subset sums of vertex curvatures, folded to `[0, π]`.
    pub allowed: Vec<f64>,
    /// Largest distance from an observed angle to the nearest allowed value.
    pub max_deviation: f64,
}

impl AngleSpectrum {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// All subset sums of `values` modulo 2π, folded to `[0, π]`, with values closer
/// than `merge` identified.
pub fn subset_sum_angles(values: &[f64], merge: f64) -> Vec<f64> {
    let mut sums: Vec<f64> = vec![0.0];
    for &w in values {
        let mut next = sums.clone();
        next.extend(sums.iter().map(|s| wrap_tau(s + w)));
        next.sort_by(f64::total_cmp);
        next.dedup_by(|a, b| (*a - *b).abs() <= merge);
        sums = next;
    }
    let mut folded: Vec<f64> = sums.into_iter().map(fold_angle).collect();
    folded.sort_by(f64::total_cmp);
    folded.dedup_by(|a, b| (*a - *b).abs() <= merge);
    folded
}

/// Develop each face group into the chart of its first triangle: chart maps for
/// each member, found by a breadth-first walk over gluings inside the group.
fn develop(surface: &FlatSurface, group: &[TriangleId]) -> HashMap<TriangleId, PlaneIsometry> {
    let mut maps = HashMap::new();
    let Some(&root) = group.first() else {
        return maps;
    };
    maps.insert(root, PlaneIsometry::IDENTITY);
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        let to_root = maps[&t];
        for e in 0..3 {
            let he = surface.half_edge(EdgeRef::new(t, e));
            let nb = he.twin.triangle;
            if group.contains(&nb) && !maps.contains_key(&nb) {
                // chart(nb) → chart(t) → root chart
                let back = surface.half_edge(he.twin).transition;
                maps.insert(nb, to_root.compose(&back));
                queue.push_back(nb);
            }
        }
    }
    maps
}

/// Angles between trace segments that lie on a common face, measured after
/// developing each face into one chart, compared with the subset sums of the
/// vertex curvatures.
pub fn coface_angle_spectrum(
    surface: &FlatSurface,
    trace: &GeodesicTrace,
    face_partition: &[Vec<TriangleId>],
) -> Result<AngleSpectrum, AnalysisError> {
    if surface.euler_characteristic() != 2 {
        return Err(AnalysisError::NotConvex(format!("Euler characteristic is {}", surface.euler_characteristic())));
    }
    let curvatures: Vec<f64> = surface.cone_points().map(|v| v.curvature).collect();
    if let Some(w) = curvatures.iter().find(|&&w| w <= 0.0) {
        return Err(AnalysisError::NotConvex(format!("vertex of curvature {w}")));
    }
    let merge = 1e-9;
    let allowed = subset_sum_angles(&curvatures, merge);
    let mut angles: Vec<f64> = Vec::new();
    for group in face_partition {
        let maps = develop(surface, group);
        let mut dirs: Vec<f64> = trace
            .segments
            .iter()
            .filter(|s| s.length() > 0.0)
            .filter_map(|s| maps.get(&s.triangle).map(|m| wrap_tau(m.apply_linear(s.direction).angle())))
            .collect();
        dirs.sort_by(f64::total_cmp);
        dirs.dedup_by(|a, b| (*a - *b).abs() <= merge);
        if dirs.len() >= 2 && (dirs[0] + TAU - dirs[dirs.len() - 1]) <= merge {
            dirs.pop();
        }
        let count = trace.segments.iter().filter(|s| maps.contains_key(&s.triangle)).count();
        if count < 2 {
            continue;
        }
        for i in 0..dirs.len() {
            angles.push(0.0);
            for j in i + 1..dirs.len() {
                angles.push(fold_angle(dirs[j] - dirs[i]));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= merge);
    let max_deviation =
        angles.iter().map(|a| allowed.iter().map(|w| (a - w).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    Ok(AngleSpectrum { angles, allowed, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cube_faces, cube_surface, flat_torus, isosceles_tetrahedron};
    use crate::geometry::Vec2;
    use crate::tracer::{trace, TangentDirection};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn subset_sums_of_quarter_turns() {
        let s = subset_sum_angles(&[FRAC_PI_2; 8], 1e-9);
        assert_eq!(s.len(), 3);
        assert!(s[0].abs() < 1e-12 && (s[1] - FRAC_PI_2).abs() < 1e-12 && (s[2] - PI).abs() < 1e-12);
    }

    #[test]
    fn cube_spectrum_in_quarter_turns() {
        let s = cube_surface().unwrap();
        let tr = trace(&s, TangentDirection::from_angle(0, Vec2::new(0.6, 0.3), 0.3), 100.0, 1e-7).unwrap();
        let sp = coface_angle_spectrum(&s, &tr, &cube_faces()).unwrap();
        assert!(sp.angles.len() > 1);
        assert!(sp.passes(1e-6), "{:?}", sp);
    }

    #[test]
    fn tetrahedron_spectrum_is_parallel() {
        let s = isosceles_tetrahedron(1.0, 1.0, 1.0).unwrap();
        let tr = trace(&s, TangentDirection::from_angle(0, s.triangle(0).centroid(), 0.41), 100.0, 1e-7).unwrap();
        let faces: Vec<Vec<usize>> = (0..4).map(|t| vec![t]).collect();
        let sp = coface_angle_spectrum(&s, &tr, &faces).unwrap();
        assert!(sp.angles.iter().all(|a| a.abs() < 1e-6 || (a - PI).abs() < 1e-6));
    }

    #[test]
    fn torus_is_not_convex() {
        let s = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let tr = trace(&s, TangentDirection::from_angle(0, Vec2::new(0.6, 0.2), 0.3), 1.0, 1e-7).unwrap();
        assert!(matches!(coface_angle_spectrum(&s, &tr, &[vec![0, 1]]), Err(AnalysisError::NotConvex(_))));
    }
}
