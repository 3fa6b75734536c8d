//! Constructors for the surface families used throughout the crate: isosceles
//! tetrahedra, flat tori, doubles of polygons, the cube, slit-and-patch surgery and
//! quotients of the unit square.

use std::collections::HashMap;

use thiserror::Error;

use crate::geometry::{orient, Vec2};
use crate::surface::{EdgeRef, FlatSurface, Gluing, SurfaceError, Triangle, TriangleId};
use crate::DEFAULT_TOLERANCE;

mod catalog;
mod cut;
mod polygon;
pub mod random;
mod square;

pub use catalog::{catalog, example_one, CatalogEntry, ExampleOne, EXAMPLE_ONE_A};
pub use cut::{cut_and_glue, CutAndGlue, CutSegment, PatchAnchor};
pub use polygon::{ear_clip, PolygonSpec};
pub use square::{
    square_boundary_point, square_identification_surface, three_pair_candidates, three_pair_surface, ArcPairing,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuilderError {
    #[error("side lengths do not form a non-degenerate triangle")]
    NotAcute,
    #[error("lattice vectors are linearly dependent")]
    DegenerateLattice,
    #[error("polygon is not simple")]
    NonSimplePolygon,
    #[error("polygon is listed clockwise")]
    ClockwisePolygon,
    #[error("ear clipping found no valid ear")]
    EarClippingFailed,
    #[error("patch perimeter {perimeter} differs from twice the cut length {expected}")]
    PerimeterMismatch { perimeter: f64, expected: f64 },
    #[error("cut passes through a vertex")]
    CutThroughVertex,
    #[error("cut must lie in the interior of a single triangle")]
    CutNotInTriangle,
    #[error("patch anchor vertex {0} does not exist")]
    BadPatchAnchor(usize),
    #[error("paired arcs have lengths {0} and {1}")]
    ArcLengthMismatch(f64, f64),
    #[error("arcs do not tile the square boundary exactly once")]
    UncoveredBoundary,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Triangles with vertex labels; edges with equal label pairs in the same scope are glued.
pub(crate) struct LabeledTriangles {
    pub corners: Vec<[Vec2; 3]>,
    pub labels: Vec<[usize; 3]>,
}

impl LabeledTriangles {
    /// Glue every edge to the unique other edge with the same `(scope, {u, v})` key.
    /// Opposite label order gives an orientation-compatible gluing, equal order a
    /// reversed one.
    pub fn glue(self, scope: impl Fn(TriangleId, usize) -> u32, tolerance: f64) -> Result<FlatSurface, BuilderError> {
        let mut open: HashMap<(u32, usize, usize), (EdgeRef, usize)> = HashMap::new();
        let mut gluings = Vec::new();
        for (t, lab) in self.labels.iter().enumerate() {
            for e in 0..3 {
                let (u, v) = (lab[e], lab[(e + 1) % 3]);
                let key = (scope(t, e), u.min(v), u.max(v));
                match open.remove(&key) {
                    Some((other, ou)) => {
                        gluings.push(Gluing::new(other, EdgeRef::new(t, e), ou == u));
                    }
                    None => {
                        open.insert(key, (EdgeRef::new(t, e), u));
                    }
                }
            }
        }
        if let Some((edge, _)) = open.values().min_by_key(|(e, _)| *e) {
            return Err(SurfaceError::UnmatchedEdge { edge: *edge, count: 1 }.into());
        }
        let triangles = self.corners.into_iter().enumerate().map(|(i, c)| Triangle::new(i, c)).collect();
        Ok(FlatSurface::build(triangles, gluings, tolerance)?)
    }
}

/// Tetrahedron with four congruent faces of side lengths `a`, `b`, `c`, glued from
/// the standard unfolding: a triangle with sides `2a, 2b, 2c` cut along its medial
/// triangle, with the halves of each outer side folded together. Triangle 0 is the
/// central face.
///
/// Only acute sides give a tetrahedron in space, but the glued surface is a valid
/// flat sphere with four vertices of curvature π for any non-degenerate triangle, so
/// obtuse and right triangles are accepted. Sides violating the strict triangle
/// inequality give [`BuilderError::NotAcute`].
pub fn isosceles_tetrahedron(a: f64, b: f64, c: f64) -> Result<FlatSurface, BuilderError> {
    let ok = [a, b, c].iter().all(|x| x.is_finite() && *x > 0.0);
    if !ok || a >= b + c || b >= a + c || c >= a + b {
        return Err(BuilderError::NotAcute);
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    // outer triangle X Y Z with |XY| = 2c, |YZ| = 2a, |ZX| = 2b
    let x = Vec2::new(0.0, 0.0);
    let y = Vec2::new(2.0 * c, 0.0);
    let zx = (b2 + c2 - a2) / c;
    let z = Vec2::new(zx, (4.0 * b2 - zx * zx).sqrt());
    let mxy = x.lerp(y, 0.5);
    let myz = y.lerp(z, 0.5);
    let mzx = z.lerp(x, 0.5);
    // labels: X = Y = Z -> 0, Mxy -> 1, Myz -> 2, Mzx -> 3
    let lt = LabeledTriangles {
        corners: vec![[mxy, myz, mzx], [x, mxy, mzx], [mxy, y, myz], [mzx, myz, z]],
        labels: vec![[1, 2, 3], [0, 1, 3], [1, 0, 2], [3, 2, 0]],
    };
    lt.glue(|_, _| 0, DEFAULT_TOLERANCE)
}

/// Flat torus `ℝ² / (ℤu + ℤv)`: the fundamental parallelogram split along a diagonal.
pub fn flat_torus(u: Vec2, v: Vec2) -> Result<FlatSurface, BuilderError> {
    let cross = u.cross(v);
    let scale = u.norm().max(v.norm());
    if !cross.is_finite() || cross.abs() <= 1e-12 * scale * scale {
        return Err(BuilderError::DegenerateLattice);
    }
    let (u, v) = if cross > 0.0 { (u, v) } else { (v, u) };
    let o = Vec2::ZERO;
    let triangles = vec![Triangle::new(0, [o, u, u + v]), Triangle::new(1, [o, u + v, v])];
    let gluings = vec![
        Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 1), false),
        Gluing::new(EdgeRef::new(0, 1), EdgeRef::new(1, 2), false),
        Gluing::new(EdgeRef::new(0, 2), EdgeRef::new(1, 0), false),
    ];
    Ok(FlatSurface::build(triangles, gluings, DEFAULT_TOLERANCE)?)
}

/// Double of a triangulated planar domain (possibly with holes): the domain is
/// glued to its mirror image along every boundary edge. Triangles `0..m` are the
/// upper copy in the domain's own coordinates, `m..2m` the mirror copy in
/// coordinates `(x, -y)`.
pub fn double_of_triangulated_domain(points: &[Vec2], triangles: &[[usize; 3]]) -> Result<FlatSurface, BuilderError> {
    for t in triangles {
        if orient(points[t[0]], points[t[1]], points[t[2]]) <= 0.0 {
            return Err(BuilderError::NonSimplePolygon);
        }
    }
    let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in triangles {
        for e in 0..3 {
            let (u, v) = (t[e], t[(e + 1) % 3]);
            *edge_count.entry((u.min(v), u.max(v))).or_default() += 1;
        }
    }
    let m = triangles.len();
    let mirror = |p: Vec2| Vec2::new(p.x, -p.y);
    let mut corners = Vec::with_capacity(2 * m);
    let mut labels = Vec::with_capacity(2 * m);
    for t in triangles {
        corners.push(t.map(|i| points[i]));
        labels.push(*t);
    }
    for t in triangles {
        corners.push([mirror(points[t[0]]), mirror(points[t[2]]), mirror(points[t[1]])]);
        labels.push([t[0], t[2], t[1]]);
    }
    let lt = LabeledTriangles { corners, labels };
    let lab = lt.labels.clone();
    lt.glue(
        |t, e| {
            let (u, v) = (lab[t][e], lab[t][(e + 1) % 3]);
            if edge_count[&(u.min(v), u.max(v))] == 1 {
                0
            } else if t < m {
                1
            } else {
                2
            }
        },
        DEFAULT_TOLERANCE,
    )
}

/// Double of a simple polygon. A corner of interior angle `β` becomes a vertex of
/// curvature `2π − 2β`.
pub fn double_of_polygon(spec: &PolygonSpec) -> Result<FlatSurface, BuilderError> {
    let tris = spec.triangulate()?;
    double_of_triangulated_domain(spec.vertices(), &tris)
}

/// Surface of the unit cube, each face split into two triangles along a diagonal.
/// Triangles `2f` and `2f + 1` form face `f`, in the face's own unit-square chart.
pub fn cube_surface() -> Result<FlatSurface, BuilderError> {
    // vertex (x, y, z) in {0,1}^3 has label x + 2y + 4z; faces counterclockwise seen from outside
    const FACES: [[usize; 4]; 6] = [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]];
    let sq = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
    let mut corners = Vec::new();
    let mut labels = Vec::new();
    for f in FACES {
        corners.push([sq[0], sq[1], sq[2]]);
        labels.push([f[0], f[1], f[2]]);
        corners.push([sq[0], sq[2], sq[3]]);
        labels.push([f[0], f[2], f[3]]);
    }
    LabeledTriangles { corners, labels }.glue(|_, _| 0, DEFAULT_TOLERANCE)
}

/// Face groups of [`cube_surface`].
pub fn cube_faces() -> Vec<Vec<TriangleId>> {
    (0..6).map(|f| vec![2 * f, 2 * f + 1]).collect()
}

/// Double of the square annulus `[-2, 2]² \ {|x| + |y| < 1}`: every vertex has
/// curvature `±π`, yet a loop crossing the outer and inner boundaries picks up a
/// quarter turn, so the surface (a torus) is not parallel.
pub fn rotated_hole_double() -> Result<FlatSurface, BuilderError> {
    let points = [
        Vec2::new(-2.0, -2.0),
        Vec2::new(2.0, -2.0),
        Vec2::new(2.0, 2.0),
        Vec2::new(-2.0, 2.0),
        Vec2::new(0.0, -1.0),
        Vec2::new(1.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(-1.0, 0.0),
    ];
    let tris = [[0, 1, 4], [1, 5, 4], [1, 2, 5], [2, 6, 5], [2, 3, 6], [3, 7, 6], [3, 0, 7], [0, 4, 7]];
    double_of_triangulated_domain(&points, &tris)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{curvature_test, is_parallel};
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn curvatures(s: &FlatSurface) -> Vec<f64> {
        s.vertices().iter().map(|v| v.curvature).collect()
    }

    #[test]
    fn regular_tetrahedron() {
        let s = isosceles_tetrahedron(1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert!(curvatures(&s).iter().all(|w| (w - PI).abs() < 1e-12));
        assert_eq!(s.euler_characteristic(), 2);
        assert!(is_parallel(&s).is_parallel());
        for t in s.triangles() {
            for k in 0..3 {
                assert!((t.edge_length(k) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn isosceles_variants() {
        let s = isosceles_tetrahedron(1.0, 1.0, 1.5).unwrap();
        assert!(curvatures(&s).iter().all(|w| (w - PI).abs() < 1e-12));
        assert_eq!(isosceles_tetrahedron(1.0, 1.0, 2.1).unwrap_err(), BuilderError::NotAcute);
        assert_eq!(isosceles_tetrahedron(1.0, 2.0, 3.0).unwrap_err(), BuilderError::NotAcute);
        assert!(isosceles_tetrahedron(3.0, 4.0, 5.0).is_ok());
    }

    #[test]
    fn tori() {
        let s = flat_torus(Vec2::new(2.0, 0.0), Vec2::new(1.0, 1.0)).unwrap();
        assert!((s.area() - 2.0).abs() < 1e-12);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.vertices()[0].curvature.abs() < 1e-12);
        assert_eq!(flat_torus(Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)).unwrap_err(), BuilderError::DegenerateLattice);
        // clockwise basis is accepted
        assert!(flat_torus(Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn cube() {
        let s = cube_surface().unwrap();
        assert_eq!(s.vertices().len(), 8);
        assert!(curvatures(&s).iter().all(|w| (w - FRAC_PI_2).abs() < 1e-12));
        assert_eq!(s.euler_characteristic(), 2);
        assert!(s.is_orientable());
        assert!(!curvature_test(&s).pass);
    }

    #[test]
    fn square_and_l_doubles() {
        let sq =
            PolygonSpec::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)])
                .unwrap();
        let d = double_of_polygon(&sq).unwrap();
        assert_eq!(d.vertices().len(), 4);
        assert!(curvatures(&d).iter().all(|w| (w - PI).abs() < 1e-12));
        assert!(is_parallel(&d).is_parallel());

        let l = PolygonSpec::new(
            [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)]
                .iter()
                .map(|&(x, y)| Vec2::new(x, y))
                .collect(),
        )
        .unwrap();
        let d = double_of_polygon(&l).unwrap();
        let mut w = d.curvature_multiset();
        w.sort_by(f64::total_cmp);
        assert!((w[0] + PI).abs() < 1e-12);
        assert!(w[1..].iter().all(|x| (x - PI).abs() < 1e-12));
        assert!(d.gauss_bonnet_residual() < 1e-12);
        assert!(is_parallel(&d).is_parallel());
    }

    #[test]
    fn right_triangle_double() {
        let t = PolygonSpec::new(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]).unwrap();
        let d = double_of_polygon(&t).unwrap();
        let w = d.curvature_multiset();
        assert_eq!(w.len(), 3);
        assert!((w[0] - PI).abs() < 1e-12);
        assert!((w[1] - 1.5 * PI).abs() < 1e-12 && (w[2] - 1.5 * PI).abs() < 1e-12);
        assert!(!curvature_test(&d).pass);
    }

    #[test]
    fn annulus_double_is_a_non_parallel_torus() {
        let s = rotated_hole_double().unwrap();
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.is_orientable());
        assert!(curvature_test(&s).pass);
        assert!(curvatures(&s).iter().all(|w| (w.abs() - PI).abs() < 1e-12));
        let total: f64 = curvatures(&s).iter().sum();
        assert!(total.abs() < 1e-12);
        let v = is_parallel(&s);
        assert!(!v.is_parallel());
        let h = v.witness().unwrap().1;
        assert!((crate::geometry::dist_to_multiple(h.angle, PI) - FRAC_PI_2).abs() < 1e-9);
        let _ = TAU;
    }
}
