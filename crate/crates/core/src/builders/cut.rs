//! Slit a surface along a short straight segment and glue a polygon into the hole.

use std::collections::HashMap;

use crate::geometry::{orient, Vec2};
use crate::surface::{EdgeRef, FlatSurface, Gluing, Triangle, TriangleId};

use super::{BuilderError, PolygonSpec};

/// Straight segment `p → q` inside the chart of `triangle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSegment {
    pub triangle: TriangleId,
    pub p: Vec2,
    pub q: Vec2,
}

impl CutSegment {
    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }
}

/// How the patch boundary is laid onto the slit.
///
/// The slit boundary is a circle of length `2ℓ`, parametrized by `u`: `u ∈ [0, ℓ]`
/// runs from `p` to `q` along the right-hand side of the cut, `u ∈ [ℓ, 2ℓ]` runs
/// back from `q` to `p` along the left-hand side. Patch vertex `vertex` is placed at
/// `u = offset`, and the patch boundary, walked counterclockwise, advances `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchAnchor {
    pub vertex: usize,
    pub offset: f64,
}

impl Default for PatchAnchor {
    fn default() -> Self {
        PatchAnchor { vertex: 0, offset: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct CutAndGlue {
    pub surface: FlatSurface,
    /// Original triangle of each new triangle; `None` for patch triangles.
    pub origin: Vec<Option<TriangleId>>,
    pub patch_triangles: Vec<TriangleId>,
    /// Vertex classes of the two slit endpoints `p` and `q`.
    pub slit_vertices: (usize, usize),
}

impl CutAndGlue {
    pub fn is_patch(&self, t: TriangleId) -> bool {
        self.origin[t].is_none()
    }
}

// local point ids inside the cut triangle
const P: usize = 3;
const Q: usize = 4;

/// Cut `surface` along `cut` and glue `patch` (perimeter `2·|cut|`) into the hole.
///
/// The cut triangle keeps its id for one of its pieces; the other pieces and then
/// the patch triangles are appended, so every other triangle keeps its id.
pub fn cut_and_glue(
    surface: &FlatSurface,
    cut: CutSegment,
    patch: &PolygonSpec,
    anchor: PatchAnchor,
) -> Result<CutAndGlue, BuilderError> {
    let tol = surface.tolerance();
    if cut.triangle >= surface.triangles().len() {
        return Err(BuilderError::CutNotInTriangle);
    }
    let tri = surface.triangle(cut.triangle);
    let ell = cut.length();
    if ell.is_nan() || ell <= tol {
        return Err(BuilderError::CutNotInTriangle);
    }
    for c in tri.corners {
        if c.dist(cut.p) <= tol || c.dist(cut.q) <= tol {
            return Err(BuilderError::CutThroughVertex);
        }
    }
    for e in 0..3 {
        if tri.edge_height(e, cut.p) <= tol || tri.edge_height(e, cut.q) <= tol {
            return Err(BuilderError::CutNotInTriangle);
        }
    }
    let perimeter = patch.perimeter();
    if (perimeter - 2.0 * ell).abs() > tol.max(1e-12 * perimeter) {
        return Err(BuilderError::PerimeterMismatch { perimeter, expected: 2.0 * ell });
    }
    let n = patch.len();
    if anchor.vertex >= n {
        return Err(BuilderError::BadPatchAnchor(anchor.vertex));
    }

    // patch boundary arc length from the anchor vertex
    let verts: Vec<Vec2> = (0..n).map(|i| patch.vertices()[(anchor.vertex + i) % n]).collect();
    let mut s_vertex = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        s_vertex.push(acc);
        acc += verts[i].dist(verts[(i + 1) % n]);
    }
    let circ = 2.0 * ell;
    let scale = circ / acc;
    let offset = anchor.offset.rem_euclid(circ);
    // breakpoints in patch arc length: patch vertices plus the preimages of p and q
    let mut marks: Vec<(f64, Option<usize>)> = s_vertex.iter().map(|&s| (s * scale, None)).collect();
    for (i, m) in marks.iter_mut().enumerate() {
        m.1 = Some(i);
    }
    let snap = tol.max(1e-12 * circ);
    for u in [0.0, ell] {
        let s = (u - offset).rem_euclid(circ);
        let near = marks.iter().any(|&(t, _)| circ_dist(t, s, circ) <= snap);
        if !near {
            marks.push((s, None));
        }
    }
    marks.sort_by(|a, b| a.0.total_cmp(&b.0));

    // slit position of each mark and the patch point it corresponds to
    let dir = (cut.q - cut.p) * (1.0 / ell);
    struct Mark {
        u: f64,
        patch_point: Vec2,
    }
    let mut ring: Vec<Mark> = Vec::with_capacity(marks.len());
    for &(s, vi) in &marks {
        let mut u = (offset + s).rem_euclid(circ);
        for target in [0.0, ell, circ] {
            if (u - target).abs() <= snap {
                u = target % circ;
            }
        }
        let patch_point = match vi {
            Some(i) => verts[i],
            None => point_on_boundary(&verts, &s_vertex, s / scale),
        };
        ring.push(Mark { u, patch_point });
    }

    // local ids: 0..3 corners, P, Q, then interior slit points on each side
    let mut local_pts: Vec<Vec2> = vec![tri.corners[0], tri.corners[1], tri.corners[2], cut.p, cut.q];
    let mut right: Vec<(f64, usize)> = vec![(0.0, P), (ell, Q)];
    let mut left: Vec<(f64, usize)> = vec![(ell, Q), (circ, P)];
    let mut ring_ids = Vec::with_capacity(ring.len());
    for m in &ring {
        let id = if m.u == 0.0 {
            P
        } else if m.u == ell {
            Q
        } else if m.u < ell {
            local_pts.push(cut.p + dir * m.u);
            right.push((m.u, local_pts.len() - 1));
            local_pts.len() - 1
        } else {
            local_pts.push(cut.q - dir * (m.u - ell));
            left.push((m.u, local_pts.len() - 1));
            local_pts.len() - 1
        };
        ring_ids.push(id);
    }
    right.sort_by(|a, b| a.0.total_cmp(&b.0));
    left.sort_by(|a, b| a.0.total_cmp(&b.0));

    // triangulate the cut triangle with p and q inserted, so that pq is an edge
    let mut local_tris: Vec<[usize; 3]> = vec![[0, 1, P], [1, 2, P], [2, 0, P]];
    insert_point(&mut local_tris, &local_pts, Q, tol)?;
    let mut sub: Vec<[usize; 3]> = Vec::new();
    for t in local_tris {
        let k = (0..3).find(|&k| {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            (a == P && b == Q) || (a == Q && b == P)
        });
        match k {
            Some(k) => {
                let x = t[(k + 2) % 3];
                // the side whose edge runs p → q is the left side of the cut
                let chain: Vec<usize> = if t[k] == P {
                    left.iter().rev().map(|&(_, id)| id).collect()
                } else {
                    right.iter().rev().map(|&(_, id)| id).collect()
                };
                for w in chain.windows(2) {
                    sub.push([w[0], w[1], x]);
                }
            }
            None => sub.push(t),
        }
    }

    // patch triangulation over the refined boundary
    let patch_pts: Vec<Vec2> = ring.iter().map(|m| m.patch_point).collect();
    let patch_tris = super::ear_clip(&patch_pts)?;

    // assemble
    let old = surface.triangles();
    let nt_old = old.len();
    let mut triangles: Vec<Triangle> = old.to_vec();
    let mut origin: Vec<Option<TriangleId>> = (0..nt_old).map(Some).collect();
    let mut sub_ids = Vec::with_capacity(sub.len());
    for (k, t) in sub.iter().enumerate() {
        let corners = t.map(|i| local_pts[i]);
        let id = if k == 0 { cut.triangle } else { triangles.len() };
        if k == 0 {
            triangles[id] = Triangle::new(id, corners);
        } else {
            triangles.push(Triangle::new(id, corners));
            origin.push(Some(cut.triangle));
        }
        sub_ids.push(id);
    }
    let mut patch_ids = Vec::with_capacity(patch_tris.len());
    for t in &patch_tris {
        let id = triangles.len();
        triangles.push(Triangle::new(id, t.map(|i| patch_pts[i])));
        origin.push(None);
        patch_ids.push(id);
    }

    // where each original edge of the cut triangle went
    let mut moved: HashMap<usize, EdgeRef> = HashMap::new();
    // edges matched by local labels: (scope, lo, hi) -> (edge, first label)
    let mut open: HashMap<(u8, usize, usize), (EdgeRef, usize)> = HashMap::new();
    let mut gluings: Vec<Gluing> = Vec::new();
    let mut link = |scope: u8, u: usize, v: usize, e: EdgeRef, gl: &mut Vec<Gluing>| {
        let key = (scope, u.min(v), u.max(v));
        match open.remove(&key) {
            Some((other, ou)) => gl.push(Gluing::new(other, e, ou == u)),
            None => {
                open.insert(key, (e, u));
            }
        }
    };
    let on_slit = |u: usize, v: usize| {
        let consecutive = |side: &[(f64, usize)]| {
            side.windows(2).any(|w| (w[0].1 == u && w[1].1 == v) || (w[0].1 == v && w[1].1 == u))
        };
        consecutive(&right) || consecutive(&left)
    };
    for (k, t) in sub.iter().enumerate() {
        for e in 0..3 {
            let (u, v) = (t[e], t[(e + 1) % 3]);
            let er = EdgeRef::new(sub_ids[k], e);
            if u < 3 && v < 3 {
                // u -> v is original edge u when v = u + 1 mod 3
                debug_assert_eq!(v, (u + 1) % 3);
                moved.insert(u, er);
            } else if on_slit(u, v) {
                link(0, u, v, er, &mut gluings);
            } else {
                link(2, u, v, er, &mut gluings);
            }
        }
    }
    let m = ring_ids.len();
    for (k, t) in patch_tris.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            let er = EdgeRef::new(patch_ids[k], e);
            let boundary = (a + 1) % m == b || (b + 1) % m == a;
            let scope = if boundary { 0 } else { 1 };
            // patch diagonals are matched by patch-local index
            let (u, v) = if boundary { (ring_ids[a], ring_ids[b]) } else { (a, b) };
            link(scope, u, v, er, &mut gluings);
        }
    }
    if let Some((_, (edge, _))) = open.iter().min_by_key(|(k, _)| **k) {
        return Err(crate::surface::SurfaceError::UnmatchedEdge { edge: *edge, count: 1 }.into());
    }
    let remap = |e: EdgeRef| {
        if e.triangle == cut.triangle {
            moved[&e.edge]
        } else {
            e
        }
    };
    for g in surface.gluings() {
        gluings.push(Gluing::new(remap(g.a), remap(g.b), g.reversed));
    }

    let out = FlatSurface::build(triangles, gluings, tol)?;
    let k = sub.iter().position(|t| t.contains(&P)).expect("p is used");
    let c = sub[k].iter().position(|&i| i == P).expect("p corner");
    let vp = out.vertex_at(sub_ids[k], c);
    let k = sub.iter().position(|t| t.contains(&Q)).expect("q is used");
    let c = sub[k].iter().position(|&i| i == Q).expect("q corner");
    let vq = out.vertex_at(sub_ids[k], c);
    Ok(CutAndGlue { surface: out, origin, patch_triangles: patch_ids, slit_vertices: (vp, vq) })
}

fn circ_dist(a: f64, b: f64, circ: f64) -> f64 {
    let d = (a - b).rem_euclid(circ);
    d.min(circ - d)
}

/// Point at arc length `s` along the closed polyline through `verts`.
fn point_on_boundary(verts: &[Vec2], s_vertex: &[f64], s: f64) -> Vec2 {
    let n = verts.len();
    let i = s_vertex.partition_point(|&v| v <= s).saturating_sub(1);
    let (a, b) = (verts[i], verts[(i + 1) % n]);
    let len = a.dist(b);
    a.lerp(b, ((s - s_vertex[i]) / len).clamp(0.0, 1.0))
}

/// Insert point `q` into a triangulation: split the triangle containing it, or
/// the two triangles sharing the edge it lies on.
fn insert_point(tris: &mut Vec<[usize; 3]>, pts: &[Vec2], q: usize, tol: f64) -> Result<(), BuilderError> {
    let x = pts[q];
    for i in 0..tris.len() {
        let t = tris[i];
        let o: Vec<f64> = (0..3)
            .map(|k| {
                let (a, b) = (pts[t[k]], pts[t[(k + 1) % 3]]);
                orient(a, b, x) / a.dist(b)
            })
            .collect();
        if o.iter().any(|&h| h < -tol) {
            continue;
        }
        match o.iter().position(|&h| h <= tol) {
            None => {
                tris.swap_remove(i);
                tris.push([t[0], t[1], q]);
                tris.push([t[1], t[2], q]);
                tris.push([t[2], t[0], q]);
                return Ok(());
            }
            Some(k) => {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if a < 3 && b < 3 {
                    return Err(BuilderError::CutNotInTriangle);
                }
                let mut split = Vec::new();
                for (j, s) in tris.iter().enumerate() {
                    for e in 0..3 {
                        let (u, v) = (s[e], s[(e + 1) % 3]);
                        if (u, v) == (a, b) || (u, v) == (b, a) {
                            split.push((j, e));
                        }
                    }
                }
                let mut keep: Vec<[usize; 3]> = tris
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !split.iter().any(|(s, _)| s == j))
                    .map(|(_, t)| *t)
                    .collect();
                for (j, e) in split {
                    let s = tris[j];
                    let (u, v, w) = (s[e], s[(e + 1) % 3], s[(e + 2) % 3]);
                    keep.push([u, q, w]);
                    keep.push([q, v, w]);
                }
                *tris = keep;
                return Ok(());
            }
        }
    }
    Err(BuilderError::CutNotInTriangle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{double_of_polygon, flat_torus};
    use crate::holonomy::curvature_test;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn square(side: f64) -> PolygonSpec {
        PolygonSpec::new(vec![Vec2::new(0.0, 0.0), Vec2::new(side, 0.0), Vec2::new(side, side), Vec2::new(0.0, side)])
            .unwrap()
    }

    #[test]
    fn square_patch_on_square_double() {
        let d = double_of_polygon(&square(1.0)).unwrap();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let cut = CutSegment { triangle: 1, p: Vec2::new(a, 1.0 / 3.0), q: Vec2::new(a, 2.0 / 3.0) };
        let out = cut_and_glue(&d, cut, &square(1.0 / 6.0), PatchAnchor::default()).unwrap();
        let s = &out.surface;
        assert!((s.area() - d.area() - 1.0 / 36.0).abs() < 1e-12);
        assert_eq!(s.euler_characteristic(), 2);
        assert!(s.gauss_bonnet_residual() < 1e-9);
        let (vp, vq) = out.slit_vertices;
        assert!((s.curvature(vp) + FRAC_PI_2).abs() < 1e-9);
        assert!((s.curvature(vq) + FRAC_PI_2).abs() < 1e-9);
        assert!(!curvature_test(s).pass);
        assert_eq!(out.patch_triangles.len(), 2);
        assert_eq!(s.triangle(0), d.triangle(0));
    }

    #[test]
    fn anchor_offset_and_collinear_cut() {
        let t = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        // cut aimed at a corner: q lies on the segment from p to (1,1)
        let cut = CutSegment { triangle: 0, p: Vec2::new(0.6, 0.2), q: Vec2::new(0.7, 0.4) };
        let ell = cut.length();
        let tri = PolygonSpec::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(ell, 0.0),
            Vec2::new(0.5 * ell, 0.5 * 3f64.sqrt() * ell),
        ]);
        // equilateral with perimeter 3ℓ does not fit
        assert!(matches!(
            cut_and_glue(&t, cut, &tri.unwrap(), PatchAnchor::default()),
            Err(BuilderError::PerimeterMismatch { .. })
        ));
        let side = 0.5 * ell;
        let out = cut_and_glue(&t, cut, &square(side), PatchAnchor { vertex: 2, offset: 0.3 * ell }).unwrap();
        let s = &out.surface;
        assert!((s.area() - 1.0 - side * side).abs() < 1e-12);
        assert!(s.gauss_bonnet_residual() < 1e-9);
        assert_eq!(s.euler_characteristic(), 0);
        let total: f64 = s.vertices().iter().map(|v| v.curvature).sum();
        assert!(total.abs() < 1e-9);
        let _ = PI;
    }

    #[test]
    fn rejects_bad_cuts() {
        let t = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let bad = CutSegment { triangle: 0, p: Vec2::new(0.5, -0.1), q: Vec2::new(0.5, 0.2) };
        assert_eq!(
            cut_and_glue(&t, bad, &square(0.15), PatchAnchor::default()).unwrap_err(),
            BuilderError::CutNotInTriangle
        );
        let corner = CutSegment { triangle: 0, p: Vec2::new(1.0, 0.0), q: Vec2::new(0.9, 0.3) };
        assert_eq!(
            cut_and_glue(&t, corner, &square(0.1), PatchAnchor::default()).unwrap_err(),
            BuilderError::CutThroughVertex
        );
        let ok = CutSegment { triangle: 0, p: Vec2::new(0.6, 0.1), q: Vec2::new(0.6, 0.3) };
        assert_eq!(
            cut_and_glue(&t, ok, &square(0.1), PatchAnchor { vertex: 9, offset: 0.0 }).unwrap_err(),
            BuilderError::BadPatchAnchor(9)
        );
    }
}
