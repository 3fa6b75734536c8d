//! Parallel transport, holonomy generators and the parallel-surface classifier.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist_to_multiple, wrap_pi, HolonomyElement, PlaneIsometry, Vec2};
use crate::surface::{DualLoop, EdgeRef, FlatSurface, TriangleId};
use crate::tracer::{SurfacePoint, TangentDirection};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HolonomyError {
    #[error("gluing {0} does not exist")]
    NoSuchGluing(usize),
    #[error("point is not on either edge of gluing {gluing}")]
    PointNotOnEdge { gluing: usize },
}

impl HolonomyError {
    pub fn kind(&self) -> &'static str {
        match self {
            HolonomyError::NoSuchGluing(_) => "NoSuchGluing",
            HolonomyError::PointNotOnEdge { .. } => "PointNotOnEdge",
        }
    }
}

/// Move a tangent direction based on one side of `gluing` to the other side.
pub fn transport_across(
    surface: &FlatSurface,
    direction: TangentDirection,
    gluing: usize,
) -> Result<TangentDirection, HolonomyError> {
    let g = surface.gluings().get(gluing).ok_or(HolonomyError::NoSuchGluing(gluing))?;
    let tol = surface.tolerance() * 10.0;
    let on_edge = |e: EdgeRef| {
        let (a, b) = surface.triangle(e.triangle).edge(e.edge);
        e.triangle == direction.at.triangle && crate::geometry::point_segment_dist(direction.at.coords, a, b) <= tol
    };
    let side = [g.a, g.b].into_iter().find(|&e| on_edge(e)).ok_or(HolonomyError::PointNotOnEdge { gluing })?;
    let he = surface.half_edge(side);
    Ok(TangentDirection {
        at: SurfacePoint::new(he.twin.triangle, he.transition.apply(direction.at.coords)),
        unit: he.transition.apply_linear(direction.unit),
    })
}

/// One holonomy generator per non-tree gluing, in gluing order. Each loop runs from
/// the root along the dual spanning tree, across the gluing (from its `a` side) and
/// back along the tree.
pub fn holonomy_generators(surface: &FlatSurface) -> Vec<(DualLoop, HolonomyElement)> {
    let tree = surface.dual_tree();
    surface
        .gluings()
        .iter()
        .enumerate()
        .filter(|(g, _)| !tree.is_tree_gluing[*g])
        .map(|(_, g)| {
            let lp = surface.tree_loop_through(g.a);
            let h = surface.loop_transition(&lp).linear_part();
            (lp, h)
        })
        .collect()
}

/// Holonomy of a small loop around vertex class `v`, in the chart of its first corner.
/// Equals rotation by `−ω(v)`.
pub fn vertex_holonomy(surface: &FlatSurface, v: usize) -> HolonomyElement {
    let (t, c) = surface.vertices()[v].corners[0];
    let mut acc = PlaneIsometry::IDENTITY;
    for (_, leave) in surface.corner_cycle(t, c) {
        acc = surface.half_edge(leave).transition.compose(&acc);
    }
    acc.linear_part()
}

/// Holonomy of an arbitrary dual loop.
pub fn loop_holonomy(surface: &FlatSurface, lp: &DualLoop) -> HolonomyElement {
    surface.loop_transition(lp).linear_part()
}

/// Unoriented line direction (angle modulo π) in each triangle chart.
#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    pub angles: Vec<f64>,
}

impl LineField {
    pub fn direction(&self, t: TriangleId) -> Vec2 {
        Vec2::from_angle(self.angles[t])
    }

    /// Largest angular mismatch (modulo π) of the field across any gluing.
    pub fn max_mismatch(&self, surface: &FlatSurface) -> f64 {
        surface
            .gluings()
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let mapped = surface.transition(gi).apply_linear(self.direction(g.a.triangle));
                dist_to_multiple(mapped.angle() - self.angles[g.b.triangle], PI)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParallelVerdict {
    Parallel { field: LineField },
    NotParallel { witness: DualLoop, holonomy: HolonomyElement },
}

impl ParallelVerdict {
    pub fn is_parallel(&self) -> bool {
        matches!(self, ParallelVerdict::Parallel { .. })
    }

    pub fn witness(&self) -> Option<(&DualLoop, HolonomyElement)> {
        match self {
            ParallelVerdict::NotParallel { witness, holonomy } => Some((witness, *holonomy)),
            ParallelVerdict::Parallel { .. } => None,
        }
    }

    pub fn line_field(&self) -> Option<&LineField> {
        match self {
            ParallelVerdict::Parallel { field } => Some(field),
            ParallelVerdict::NotParallel { .. } => None,
        }
    }
}

/// Decide whether the holonomy group lies in `{id, −id}` by checking the generators
/// from [`holonomy_generators`] at the surface's angular tolerance.
pub fn is_parallel(surface: &FlatSurface) -> ParallelVerdict {
    let tol = surface.angular_tolerance();
    for (lp, h) in holonomy_generators(surface) {
        if !h.is_plus_minus_identity(tol) {
            return ParallelVerdict::NotParallel { witness: lp, holonomy: h };
        }
    }
    let tree = surface.dual_tree();
    let angles = tree.chart_from_root.iter().map(|f| wrap_pi(f.apply_linear(Vec2::new(1.0, 0.0)).angle())).collect();
    ParallelVerdict::Parallel { field: LineField { angles } }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTest {
    pub pass: bool,
    /// Vertex classes whose curvature is not a multiple of π.
    pub offending: Vec<usize>,
}

/// Check that every vertex curvature is an integer multiple of π.
pub fn curvature_test(surface: &FlatSurface) -> CurvatureTest {
    let tol = surface.angular_tolerance();
    let offending: Vec<usize> =
        surface.vertices().iter().filter(|v| dist_to_multiple(v.curvature, PI) > tol).map(|v| v.id).collect();
    CurvatureTest { pass: offending.is_empty(), offending }
}

/// Serialized verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub parallel: bool,
    pub witness_loop: Option<Vec<usize>>,
    pub witness_angle: Option<f64>,
    pub witness_reflect: Option<bool>,
    pub line_field: Option<BTreeMap<usize, f64>>,
}

impl VerdictRecord {
    pub fn new(surface: &FlatSurface, verdict: &ParallelVerdict) -> Self {
        match verdict {
            ParallelVerdict::Parallel { field } => VerdictRecord {
                parallel: true,
                witness_loop: None,
                witness_angle: None,
                witness_reflect: None,
                line_field: Some(field.angles.iter().copied().enumerate().collect()),
            },
            ParallelVerdict::NotParallel { witness, holonomy } => VerdictRecord {
                parallel: false,
                witness_loop: Some(witness.gluing_ids(surface)),
                witness_angle: Some(holonomy.angle),
                witness_reflect: Some(holonomy.reflect),
                line_field: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{cube_surface, flat_torus, isosceles_tetrahedron, square_identification_surface, ArcPairing};
    use crate::geometry::wrap_tau;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn torus_generators_trivial() {
        let t = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let gens = holonomy_generators(&t);
        assert_eq!(gens.len(), 2);
        assert!(gens.iter().all(|(_, h)| h.distance(&HolonomyElement::IDENTITY) < 1e-12));
        let v = is_parallel(&t);
        assert!(v.line_field().unwrap().max_mismatch(&t) < 1e-12);
    }

    #[test]
    fn tetrahedron_vertices_rotate_by_pi() {
        let s = isosceles_tetrahedron(1.0, 1.0, 1.0).unwrap();
        for v in 0..s.vertices().len() {
            let h = vertex_holonomy(&s, v);
            assert!(!h.reflect);
            assert!(dist_to_multiple(h.angle - PI, std::f64::consts::TAU) < 1e-9);
        }
        let verdict = is_parallel(&s);
        assert!(verdict.line_field().unwrap().max_mismatch(&s) < 1e-9);
    }

    #[test]
    fn cube_vertex_and_witness() {
        let s = cube_surface().unwrap();
        let h = vertex_holonomy(&s, 0);
        assert!((wrap_tau(h.angle) - 1.5 * PI).abs() < 1e-9);
        let (_, w) = is_parallel(&s).witness().map(|(l, h)| (l.clone(), h)).unwrap();
        assert!((dist_to_multiple(w.angle, PI) - FRAC_PI_2).abs() < 1e-9);
        let ct = curvature_test(&s);
        assert_eq!(ct.offending.len(), 8);
    }

    #[test]
    fn klein_transport_reflects() {
        let k = square_identification_surface(&ArcPairing::klein_bottle()).unwrap();
        let v = is_parallel(&k);
        assert!(v.witness().unwrap().1.reflect);
        let rec = VerdictRecord::new(&k, &v);
        assert_eq!(rec.witness_reflect, Some(true));
        // across a reversing gluing a direction comes out mirrored
        let (gi, g) = k.gluings().iter().enumerate().find(|(_, g)| g.reversed).unwrap();
        let (a, b) = k.triangle(g.a.triangle).edge(g.a.edge);
        let theta = 0.3;
        let d = TangentDirection::from_angle(g.a.triangle, a.lerp(b, 0.5), (b - a).angle() + theta);
        let out = transport_across(&k, d, gi).unwrap();
        let (c0, c1) = k.triangle(g.b.triangle).edge(g.b.edge);
        // reversed gluings send a to c0 and b to c1; the edge-relative angle flips sign
        let rel = out.unit.angle() - (c1 - c0).angle();
        assert!(dist_to_multiple(rel + theta, std::f64::consts::TAU) < 1e-9);
        let back = transport_across(&k, out, gi).unwrap();
        assert!(back.unit.dist(d.unit) < 1e-12);
        assert!(back.at.coords.dist(d.at.coords) < 1e-12);
    }

    #[test]
    fn not_on_edge() {
        let t = flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).unwrap();
        let d = TangentDirection::from_angle(0, Vec2::new(0.7, 0.2), 0.0);
        assert_eq!(transport_across(&t, d, 0).unwrap_err(), HolonomyError::PointNotOnEdge { gluing: 0 });
    }

    fn random_loop(s: &FlatSurface, steps: &[usize]) -> DualLoop {
        // random walk from the root, closed by the tree path back
        let mut cur = 0;
        let mut out = Vec::new();
        for &k in steps {
            let e = EdgeRef::new(cur, k % 3);
            out.push(e);
            cur = s.half_edge(e).twin.triangle;
        }
        let back = s.dual_tree().path_from_root(cur);
        out.extend(back.iter().rev().map(|e| s.half_edge(*e).twin));
        DualLoop { base: 0, steps: out }
    }

    proptest! {
        #[test]
        fn loop_holonomy_is_a_homomorphism(
            a in proptest::collection::vec(0usize..3, 0..12),
            b in proptest::collection::vec(0usize..3, 0..12),
        ) {
            let s = cube_surface().unwrap();
            let (la, lb) = (random_loop(&s, &a), random_loop(&s, &b));
            let ha = loop_holonomy(&s, &la);
            let hb = loop_holonomy(&s, &lb);
            // the loop `la` then `lb` acts as hb ∘ ha
            let hab = loop_holonomy(&s, &la.concat(&lb));
            prop_assert!(hab.distance(&hb.compose(&ha)) < 1e-9);
            let inv = loop_holonomy(&s, &la.reversed(&s));
            prop_assert!(inv.distance(&ha.inverse()) < 1e-9);
        }
    }
}
