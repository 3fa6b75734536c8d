//! Intrinsic geometry of compact flat surfaces with conical singularities.
//!
//! A surface is a finite set of Euclidean triangles, each in its own chart, glued
//! along edges by isometries. On top of that representation the crate traces
//! strict geodesics, computes holonomy, decides whether a surface is parallel
//! (holonomy inside `{id, -id}`), detects proper self-intersections, estimates how
//! densely a geodesic fills the surface and builds the standard example surfaces.

pub mod analysis;
pub mod builders;
pub mod geometry;
pub mod holonomy;
pub mod io;
pub mod render;
pub mod surface;
pub mod tracer;

pub use geometry::{HolonomyElement, PlaneIsometry, Vec2};
pub use surface::{
    build_surface, DualLoop, EdgeRef, FlatSurface, Gluing, SurfaceError, Triangle, TriangleId, VertexClass,
};
pub use tracer::{GeodesicTrace, SurfacePoint, TangentDirection, Termination};

/// Default metric tolerance in chart length units.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default distance below which a geodesic is considered to hit a vertex.
pub const DEFAULT_VERTEX_CLEARANCE: f64 = 1e-7;

/// Environment variable overriding the global metric tolerance.
pub const TOLERANCE_ENV: &str = "FLATGEO_TOLERANCE";

/// Metric tolerance from `FLATGEO_TOLERANCE`, falling back to [`DEFAULT_TOLERANCE`]
/// when unset or not a positive number.
pub fn tolerance_from_env() -> f64 {
    std::env::var(TOLERANCE_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(DEFAULT_TOLERANCE)
}
