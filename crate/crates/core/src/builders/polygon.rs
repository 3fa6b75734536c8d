use std::f64::consts::TAU;

use crate::geometry::{orient, segment_crossing, Vec2};

use super::BuilderError;

/// A simple polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonSpec {
    vertices: Vec<Vec2>,
}

impl PolygonSpec {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, BuilderError> {
        let n = vertices.len();
        if n < 3 || vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(BuilderError::NonSimplePolygon);
        }
        let scale = vertices.iter().map(|v| v.x.abs().max(v.y.abs())).fold(1.0, f64::max);
        let eps = 1e-12 * scale;
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) <= eps {
                return Err(BuilderError::NonSimplePolygon);
            }
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    // consecutive edges may only share their common vertex
                    let (shared, far_a, far_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    let u = far_a - shared;
                    let v = far_b - shared;
                    if u.cross(v).abs() <= eps * (u.norm() + v.norm()) && u.dot(v) > 0.0 {
                        return Err(BuilderError::NonSimplePolygon);
                    }
                } else if segments_touch(a, b, c, d, eps) {
                    return Err(BuilderError::NonSimplePolygon);
                }
            }
        }
        let spec = PolygonSpec { vertices };
        let area = spec.signed_area();
        if area.abs() <= eps * eps {
            return Err(BuilderError::NonSimplePolygon);
        }
        if area < 0.0 {
            return Err(BuilderError::ClockwisePolygon);
        }
        Ok(spec)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n).map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n])).sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.vertices.len();
        (0..n).map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n])).sum()
    }

    /// Interior angle at vertex `i`, in `(0, 2π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let cur = self.vertices[i];
        let next = self.vertices[(i + 1) % n] - cur;
        let prev = self.vertices[(i + n - 1) % n] - cur;
        let a = (prev.angle() - next.angle()).rem_euclid(TAU);
        if a == 0.0 {
            TAU
        } else {
            a
        }
    }

    /// Ear-clipping triangulation; see [`ear_clip`].
    pub fn triangulate(&self) -> Result<Vec<[usize; 3]>, BuilderError> {
        ear_clip(&self.vertices)
    }
}

fn segments_touch(a: Vec2, b: Vec2, c: Vec2, d: Vec2, eps: f64) -> bool {
    if segment_crossing(a, b, c, d).is_some() {
        return true;
    }
    let near = |p: Vec2, q0: Vec2, q1: Vec2| crate::geometry::point_segment_dist(p, q0, q1) <= eps;
    near(a, c, d) || near(b, c, d) || near(c, a, b) || near(d, a, b)
}

/// Triangulate a counterclockwise simple polygon by ear clipping.
///
/// Ears are taken lowest vertex index first. Vertices lying on a straight boundary
/// run (interior angle π) are allowed; they never become ear tips.
pub fn ear_clip(points: &[Vec2]) -> Result<Vec<[usize; 3]>, BuilderError> {
    let n = points.len();
    if n < 3 {
        return Err(BuilderError::EarClippingFailed);
    }
    let scale = points.iter().map(|v| v.x.abs().max(v.y.abs())).fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let mut idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = None;
        for pos in 0..m {
            let prev = idx[(pos + m - 1) % m];
            let cur = idx[pos];
            let next = idx[(pos + 1) % m];
            let (a, b, c) = (points[prev], points[cur], points[next]);
            if orient(a, b, c) <= eps {
                continue;
            }
            let blocked = idx.iter().any(|&k| {
                k != prev
                    && k != cur
                    && k != next
                    && orient(a, b, points[k]) >= -eps
                    && orient(b, c, points[k]) >= -eps
                    && orient(c, a, points[k]) >= -eps
            });
            if !blocked {
                clipped = Some(pos);
                out.push([prev, cur, next]);
                break;
            }
        }
        match clipped {
            Some(pos) => {
                idx.remove(pos);
            }
            None => return Err(BuilderError::EarClippingFailed),
        }
    }
    let (a, b, c) = (idx[0], idx[1], idx[2]);
    if orient(points[a], points[b], points[c]) <= eps {
        return Err(BuilderError::EarClippingFailed);
    }
    out.push([a, b, c]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pts(v: &[(f64, f64)]) -> Vec<Vec2> {
        v.iter().map(|&(x, y)| Vec2::new(x, y)).collect()
    }

    #[test]
    fn l_shape_angles_and_triangulation() {
        let l = PolygonSpec::new(pts(&[(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)])).unwrap();
        let angles: Vec<f64> = (0..6).map(|i| l.interior_angle(i)).collect();
        assert!((angles[3] - 1.5 * PI).abs() < 1e-12);
        assert!(angles.iter().enumerate().all(|(i, a)| i == 3 || (a - 0.5 * PI).abs() < 1e-12));
        let tris = l.triangulate().unwrap();
        assert_eq!(tris.len(), 4);
        let area: f64 =
            tris.iter().map(|t| 0.5 * orient(l.vertices()[t[0]], l.vertices()[t[1]], l.vertices()[t[2]])).sum();
        assert!((area - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lowest_index_ear_first() {
        let sq = PolygonSpec::new(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert_eq!(sq.triangulate().unwrap(), vec![[3, 0, 1], [1, 2, 3]]);
    }

    #[test]
    fn collinear_boundary_points() {
        let p = pts(&[(0., 0.), (0.5, 0.), (1., 0.), (1., 0.5), (1., 1.), (0., 1.), (0., 0.5)]);
        let tris = ear_clip(&p).unwrap();
        assert_eq!(tris.len(), 5);
        for t in tris {
            assert!(orient(p[t[0]], p[t[1]], p[t[2]]) > 0.0);
        }
    }

    #[test]
    fn rejects_bad_polygons() {
        let bowtie = pts(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)]);
        assert_eq!(PolygonSpec::new(bowtie), Err(BuilderError::NonSimplePolygon));
        let cw = pts(&[(0., 0.), (0., 1.), (1., 1.), (1., 0.)]);
        assert_eq!(PolygonSpec::new(cw), Err(BuilderError::ClockwisePolygon));
        let spike = pts(&[(0., 0.), (2., 0.), (1., 0.), (1., 1.)]);
        assert_eq!(PolygonSpec::new(spike), Err(BuilderError::NonSimplePolygon));
    }
}
