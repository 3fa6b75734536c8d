//! The fixed catalog of named surfaces, and the slit-square-double construction.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::geometry::Vec2;
use crate::surface::{FlatSurface, TriangleId};
use crate::tracer::TangentDirection;

use super::{
    cube_surface, cut_and_glue, double_of_polygon, flat_torus, isosceles_tetrahedron, rotated_hole_double,
    square_identification_surface, ArcPairing, BuilderError, CutAndGlue, CutSegment, PatchAnchor, PolygonSpec,
};

/// Irrational abscissa of the slit used by the catalog.
pub const EXAMPLE_ONE_A: f64 = FRAC_1_SQRT_2;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub surface: FlatSurface,
    pub expected_parallel: bool,
}

fn unit_square(side: f64) -> PolygonSpec {
    PolygonSpec::new(vec![Vec2::new(0.0, 0.0), Vec2::new(side, 0.0), Vec2::new(side, side), Vec2::new(0.0, side)])
        .expect("squares are simple")
}

fn l_shape() -> PolygonSpec {
    PolygonSpec::new(
        [(0., 0.), (2., 0.), (2., 1.), (1., 1.), (1., 2.), (0., 2.)].iter().map(|&(x, y)| Vec2::new(x, y)).collect(),
    )
    .expect("L-shape is simple")
}

/// Double of the unit square, slit along `{a} × [1/3, 2/3]` on the upper face, with
/// a square of side 1/6 glued into the slit.
#[derive(Debug, Clone)]
pub struct ExampleOne {
    pub a: f64,
    pub cut: CutAndGlue,
    /// Upper-face triangle containing the bottom-edge point `(a, 0)`.
    pub start_triangle: TriangleId,
}

impl ExampleOne {
    pub fn surface(&self) -> &FlatSurface {
        &self.cut.surface
    }

    /// Start of the geodesic from `(a, 0)` on the upper face with direction `(1/n, 1)`.
    pub fn start(&self, n: u32) -> TangentDirection {
        TangentDirection::new(self.start_triangle, Vec2::new(self.a, 0.0), Vec2::new(1.0 / f64::from(n), 1.0))
    }

    /// Length `2n√(1 + 1/n²)` of the closed geodesic leaving along [`Self::start`].
    pub fn period(n: u32) -> f64 {
        let n = f64::from(n);
        2.0 * n * (1.0 + 1.0 / (n * n)).sqrt()
    }
}

pub fn example_one(a: f64) -> Result<ExampleOne, BuilderError> {
    let d = double_of_polygon(&unit_square(1.0))?;
    let (p, q) = (Vec2::new(a, 1.0 / 3.0), Vec2::new(a, 2.0 / 3.0));
    // the upper copy occupies triangles 0..2
    let tri = (0..2)
        .find(|&t| {
            let tr = d.triangle(t);
            (0..3).all(|e| tr.edge_height(e, p) > 0.0 && tr.edge_height(e, q) > 0.0)
        })
        .ok_or(BuilderError::CutNotInTriangle)?;
    let cut = cut_and_glue(&d, CutSegment { triangle: tri, p, q }, &unit_square(1.0 / 6.0), PatchAnchor::default())?;
    let start = Vec2::new(a, 0.0);
    let start_triangle = (0..2)
        .find(|&t| cut.surface.triangle(t).contains(start, 1e-12) && cut.origin[t] == Some(t))
        .ok_or(BuilderError::CutNotInTriangle)?;
    Ok(ExampleOne { a, cut, start_triangle })
}

/// The ten catalog surfaces, in a fixed order with stable names.
pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |name, surface: Result<FlatSurface, BuilderError>, expected_parallel| CatalogEntry {
        name,
        surface: surface.unwrap_or_else(|e| panic!("catalog surface {name}: {e}")),
        expected_parallel,
    };
    vec![
        entry("regular_tetrahedron", isosceles_tetrahedron(1.0, 1.0, 1.0), true),
        entry("isosceles_tetrahedron", isosceles_tetrahedron(1.0, 1.0, 1.2), true),
        entry("unit_torus", flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)), true),
        entry("sheared_torus", flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.5, 0.75)), true),
        entry("square_double", double_of_polygon(&unit_square(1.0)), true),
        entry("l_shape_double", double_of_polygon(&l_shape()), true),
        entry("cube", cube_surface(), false),
        entry("slit_square_double", example_one(EXAMPLE_ONE_A).map(|e| e.cut.surface), false),
        entry("klein_bottle", square_identification_surface(&ArcPairing::klein_bottle()), false),
        entry("annulus_double", rotated_hole_double(), false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::is_parallel;

    #[test]
    fn catalog_verdicts() {
        let cat = catalog();
        assert_eq!(cat.len(), 10);
        for e in &cat {
            assert_eq!(is_parallel(&e.surface).is_parallel(), e.expected_parallel, "{}", e.name);
            assert!(e.surface.gauss_bonnet_residual() < 1e-9, "{}", e.name);
        }
    }

    #[test]
    fn example_one_layout() {
        let ex = example_one(EXAMPLE_ONE_A).unwrap();
        assert_eq!(ex.start_triangle, 0);
        assert!((ExampleOne::period(3) - 6.0 * (1.0f64 + 1.0 / 9.0).sqrt()).abs() < 1e-15);
    }
}
