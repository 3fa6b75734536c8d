//! Python bindings: surfaces, traces, holonomy verdicts and scans.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use flatgeo_core::analysis::{
    closed_geodesic_detect, default_scan_start, density_estimate, direction_scan, scan_csv, self_intersections,
    ScanOptions,
};
use flatgeo_core::builders::{self, PolygonSpec};
use flatgeo_core::holonomy::{is_parallel, VerdictRecord};
use flatgeo_core::io::{self, to_json, IoError};
use flatgeo_core::render::{render, RenderMode, RenderSpec};
use flatgeo_core::tracer::{reverse_check, trace, TraceRecord};
use flatgeo_core::{
    tolerance_from_env, FlatSurface, GeodesicTrace, SurfacePoint, TangentDirection, Termination, Vec2,
    DEFAULT_VERTEX_CLEARANCE,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn io_err(e: IoError) -> PyErr {
    match e {
        IoError::Io(e) => PyIOError::new_err(e.to_string()),
        other => value_err(other),
    }
}

fn json_to_py(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// A compact flat surface with cone points, glued from triangles.
#[pyclass(module = "flatgeo", frozen)]
struct Surface {
    inner: FlatSurface,
}

#[pymethods]
impl Surface {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = io::surface_from_json(text, tolerance_from_env()).map_err(io_err)?;
        Ok(Surface { inner })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let inner = io::read_surface(path.as_ref(), tolerance_from_env()).map_err(io_err)?;
        Ok(Surface { inner })
    }

    fn to_json(&self) -> String {
        io::surface_to_json(&self.inner)
    }

    #[getter]
    fn triangle_count(&self) -> usize {
        self.inner.triangles().len()
    }

    #[getter]
    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    #[getter]
    fn orientable(&self) -> bool {
        self.inner.is_orientable()
    }

    #[getter]
    fn curvatures(&self) -> Vec<f64> {
        self.inner.curvature_multiset()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter_estimate()
    }

    fn gauss_bonnet_residual(&self) -> f64 {
        self.inner.gauss_bonnet_residual()
    }

    /// Triangle corners `[(x, y), ...]` in the triangle's own chart.
    fn corners(&self, tri: usize) -> PyResult<Vec<(f64, f64)>> {
        if tri >= self.inner.triangles().len() {
            return Err(value_err(format!("triangle {tri} does not exist")));
        }
        Ok(self.inner.triangle(tri).corners.iter().map(|c| (c.x, c.y)).collect())
    }

    fn is_parallel(&self) -> bool {
        is_parallel(&self.inner).is_parallel()
    }

    /// Verdict as a dict: `parallel`, `witness_loop`, `witness_angle`,
    /// `witness_reflect`, `line_field`.
    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let v = is_parallel(&self.inner);
        json_to_py(py, &to_json(&VerdictRecord::new(&self.inner, &v)))
    }

    /// Trace the geodesic leaving `(x, y)` in triangle `tri` at `angle` radians.
    #[pyo3(signature = (tri, x, y, angle, length, clearance = DEFAULT_VERTEX_CLEARANCE))]
    fn trace(&self, tri: usize, x: f64, y: f64, angle: f64, length: f64, clearance: f64) -> PyResult<Trace> {
        let start = TangentDirection::from_angle(tri, Vec2::new(x, y), angle);
        let inner = trace(&self.inner, start, length, clearance).map_err(value_err)?;
        Ok(Trace { inner })
    }

    /// Round-trip distance after tracing forward and back.
    #[pyo3(signature = (tri, x, y, angle, length, clearance = DEFAULT_VERTEX_CLEARANCE))]
    fn reverse_check(&self, tri: usize, x: f64, y: f64, angle: f64, length: f64, clearance: f64) -> PyResult<f64> {
        let start = TangentDirection::from_angle(tri, Vec2::new(x, y), angle);
        reverse_check(&self.inner, start, length, clearance).map_err(value_err)
    }

    fn closed_period(&self, t: &Trace) -> Option<f64> {
        closed_geodesic_detect(&self.inner, &t.inner, 1e-7)
    }

    /// Proper self-intersections as `(t1, t2, angle)` triples.
    fn self_intersections(&self, t: &Trace) -> Vec<(f64, f64, f64)> {
        self_intersections(&self.inner, &t.inner).iter().map(|e| (e.t1, e.t2, e.angle)).collect()
    }

    #[pyo3(signature = (t, epsilon = 0.05, samples = 2000, seed = 0))]
    fn density(&self, t: &Trace, epsilon: f64, samples: usize, seed: u64) -> PyResult<f64> {
        density_estimate(&self.inner, &t.inner, epsilon, samples, seed).map(|r| r.covered_fraction).map_err(value_err)
    }

    /// Direction scan from `(tri, x, y)` (default: incenter of the largest triangle);
    /// returns the CSV table.
    #[pyo3(signature = (n, length, epsilon = 0.05, seed = 0, samples = 2000, tri = None, x = None, y = None))]
    #[allow(clippy::too_many_arguments)]
    fn scan(
        &self,
        py: Python<'_>,
        n: usize,
        length: f64,
        epsilon: f64,
        seed: u64,
        samples: usize,
        tri: Option<usize>,
        x: Option<f64>,
        y: Option<f64>,
    ) -> PyResult<String> {
        let p = match (tri, x, y) {
            (Some(t), Some(x), Some(y)) => SurfacePoint::new(t, Vec2::new(x, y)),
            (None, None, None) => default_scan_start(&self.inner),
            _ => return Err(value_err("tri, x and y must be given together")),
        };
        if p.triangle >= self.inner.triangles().len() {
            return Err(value_err(format!("triangle {} does not exist", p.triangle)));
        }
        let options = ScanOptions { vertex_clearance: DEFAULT_VERTEX_CLEARANCE, density_samples: samples };
        let s = &self.inner;
        let rows = py.detach(|| direction_scan(s, p, n, length, epsilon, seed, options));
        Ok(scan_csv(&rows))
    }

    /// SVG drawing; unfolded along `trace` when one is given.
    #[pyo3(signature = (trace = None, width = 800, height = 600))]
    fn svg(&self, trace: Option<&Trace>, width: u32, height: u32) -> PyResult<String> {
        let spec = RenderSpec {
            width,
            height,
            mode: if trace.is_some() { RenderMode::Unfolded } else { RenderMode::PerChart },
            ..RenderSpec::default()
        };
        render(&self.inner, trace.map(|t| &t.inner), &spec).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Surface(triangles={}, chi={}, orientable={})",
            self.inner.triangles().len(),
            self.inner.euler_characteristic(),
            if self.inner.is_orientable() { "True" } else { "False" }
        )
    }
}

type SegmentTuple = (usize, (f64, f64), (f64, f64));

/// A traced geodesic.
#[pyclass(module = "flatgeo", frozen)]
struct Trace {
    inner: GeodesicTrace,
}

#[pymethods]
impl Trace {
    #[getter]
    fn length(&self) -> f64 {
        self.inner.length
    }

    #[getter]
    fn termination(&self) -> &'static str {
        self.inner.termination.name()
    }

    /// Arc length at which a vertex was hit, if any.
    #[getter]
    fn vertex_param(&self) -> Option<f64> {
        match self.inner.termination {
            Termination::VertexHit { param, .. } => Some(param),
            Termination::LengthReached => None,
        }
    }

    /// Segments as `(triangle, (x_in, y_in), (x_out, y_out))`.
    fn segments(&self) -> Vec<SegmentTuple> {
        self.inner.segments.iter().map(|s| (s.triangle, (s.entry.x, s.entry.y), (s.exit.x, s.exit.y))).collect()
    }

    fn to_json(&self) -> String {
        to_json(&TraceRecord::from(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.segments.len()
    }
}

fn wrap(r: Result<FlatSurface, builders::BuilderError>) -> PyResult<Surface> {
    r.map(|inner| Surface { inner }).map_err(value_err)
}

#[pyfunction]
fn isosceles_tetrahedron(a: f64, b: f64, c: f64) -> PyResult<Surface> {
    wrap(builders::isosceles_tetrahedron(a, b, c))
}

#[pyfunction]
fn flat_torus(u: (f64, f64), v: (f64, f64)) -> PyResult<Surface> {
    wrap(builders::flat_torus(Vec2::new(u.0, u.1), Vec2::new(v.0, v.1)))
}

#[pyfunction]
fn cube() -> PyResult<Surface> {
    wrap(builders::cube_surface())
}

/// Double of a simple counterclockwise polygon.
#[pyfunction]
fn double_of_polygon(vertices: Vec<(f64, f64)>) -> PyResult<Surface> {
    let poly = PolygonSpec::new(vertices.into_iter().map(|(x, y)| Vec2::new(x, y)).collect()).map_err(value_err)?;
    wrap(builders::double_of_polygon(&poly))
}

/// Names of the catalog surfaces.
#[pyfunction]
fn catalog_names() -> Vec<&'static str> {
    builders::catalog().iter().map(|e| e.name).collect()
}

#[pyfunction]
fn catalog_surface(name: &str) -> PyResult<Surface> {
    builders::catalog()
        .into_iter()
        .find(|e| e.name == name)
        .map(|e| Surface { inner: e.surface })
        .ok_or_else(|| value_err(format!("no catalog surface named {name:?}")))
}

#[pymodule]
fn flatgeo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_class::<Trace>()?;
    m.add_function(wrap_pyfunction!(isosceles_tetrahedron, m)?)?;
    m.add_function(wrap_pyfunction!(flat_torus, m)?)?;
    m.add_function(wrap_pyfunction!(cube, m)?)?;
    m.add_function(wrap_pyfunction!(double_of_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_surface, m)?)?;
    Ok(())
}
