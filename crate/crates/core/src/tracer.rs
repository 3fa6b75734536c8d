//! Strict geodesics traced by straight-line motion inside charts and edge transitions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{project_on_segment, PlaneIsometry, Vec2};
use crate::surface::{EdgeRef, FlatSurface, TriangleId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub triangle: TriangleId,
    pub coords: Vec2,
}

impl SurfacePoint {
    pub fn new(triangle: TriangleId, coords: Vec2) -> Self {
        SurfacePoint { triangle, coords }
    }
}

/// A unit tangent vector, expressed in the chart of `at.triangle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentDirection {
    pub at: SurfacePoint,
    pub unit: Vec2,
}

impl TangentDirection {
    /// Normalizes `dir`.
    pub fn new(triangle: TriangleId, coords: Vec2, dir: Vec2) -> Self {
        TangentDirection { at: SurfacePoint::new(triangle, coords), unit: dir.normalized() }
    }

    pub fn from_angle(triangle: TriangleId, coords: Vec2, angle: f64) -> Self {
        Self::new(triangle, coords, Vec2::from_angle(angle))
    }

    pub fn reversed(&self) -> Self {
        TangentDirection { at: self.at, unit: -self.unit }
    }
}

/// Straight piece of a trace inside one triangle chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSegment {
    pub triangle: TriangleId,
    pub entry: Vec2,
    pub exit: Vec2,
    pub direction: Vec2,
    /// Arc-length parameter of `entry`.
    pub start_param: f64,
    /// Edge through which the trace leaves, when it continues past `exit`.
    pub exit_edge: Option<usize>,
}

impl TraceSegment {
    pub fn length(&self) -> f64 {
        self.entry.dist(self.exit)
    }

    pub fn end_param(&self) -> f64 {
        self.start_param + self.length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    LengthReached,
    /// The trace came within the clearance of vertex class `vertex` at arc length `param`.
    VertexHit {
        vertex: usize,
        param: f64,
    },
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Termination::LengthReached => "LengthReached",
            Termination::VertexHit { .. } => "VertexHit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrace {
    pub start: TangentDirection,
    pub segments: Vec<TraceSegment>,
    pub length: f64,
    pub termination: Termination,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("triangle {0} does not exist")]
    NoSuchTriangle(TriangleId),
    #[error("start point ({}, {}) lies outside triangle {triangle}", point.x, point.y)]
    StartOutsideTriangle { triangle: TriangleId, point: Vec2 },
    #[error("direction must be a non-zero finite vector")]
    BadDirection,
    #[error("length must be finite and non-negative, got {0}")]
    BadLength(f64),
    #[error("vertex clearance {clearance} is below the surface tolerance {tolerance}")]
    ClearanceTooSmall { clearance: f64, tolerance: f64 },
    #[error("trace left the domain in triangle {triangle} at ({}, {})", point.x, point.y)]
    LeftDomain { triangle: TriangleId, point: Vec2 },
    #[error("parameter {t} outside [0, {length}]")]
    ParameterOutOfRange { t: f64, length: f64 },
    #[error("forward trace hit vertex {vertex} at {param} before the requested length")]
    VertexHitBeforeLength { vertex: usize, param: f64 },
}

impl TraceError {
    pub fn kind(&self) -> &'static str {
        match self {
            TraceError::NoSuchTriangle(_) => "NoSuchTriangle",
            TraceError::StartOutsideTriangle { .. } => "StartOutsideTriangle",
            TraceError::BadDirection => "BadDirection",
            TraceError::BadLength(_) => "BadLength",
            TraceError::ClearanceTooSmall { .. } => "ClearanceTooSmall",
            TraceError::LeftDomain { .. } => "LeftDomain",
            TraceError::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            TraceError::VertexHitBeforeLength { .. } => "VertexHitBeforeLength",
        }
    }
}

/// Maximal number of consecutive zero-length edge crossings before giving up.
const MAX_STALLS: usize = 8;

/// Trace the strict geodesic leaving `start` up to arc length `max_length`.
///
/// The trace stops with [`Termination::VertexHit`] as soon as it passes within
/// `vertex_clearance` of any triangle corner. Corners with cone angle 2π are
/// treated the same way as genuine cone points: a trace through them would have
/// to pick a continuation at a point where every edge meets.
pub fn trace(
    surface: &FlatSurface,
    start: TangentDirection,
    max_length: f64,
    vertex_clearance: f64,
) -> Result<GeodesicTrace, TraceError> {
    let tol = surface.tolerance();
    if start.at.triangle >= surface.triangles().len() {
        return Err(TraceError::NoSuchTriangle(start.at.triangle));
    }
    if !(max_length.is_finite() && max_length >= 0.0) {
        return Err(TraceError::BadLength(max_length));
    }
    if vertex_clearance < tol {
        return Err(TraceError::ClearanceTooSmall { clearance: vertex_clearance, tolerance: tol });
    }
    let n = start.unit.norm();
    if !(n.is_finite() && n > 0.0) {
        return Err(TraceError::BadDirection);
    }
    let start = TangentDirection { at: start.at, unit: start.unit * (1.0 / n) };
    let first = surface.triangle(start.at.triangle);
    let drift = drift_tolerance(surface, start.at.triangle);
    if !first.contains(start.at.coords, drift) {
        return Err(TraceError::StartOutsideTriangle { triangle: start.at.triangle, point: start.at.coords });
    }

    let mut segments = Vec::new();
    let mut t = start.at.triangle;
    let mut p = start.at.coords;
    let mut d = start.unit;
    let mut travelled = 0.0;
    let mut stalls = 0;

    let termination = loop {
        let tri = surface.triangle(t);

        let mut best: Option<(f64, usize)> = None;
        for e in 0..3 {
            let (a, b) = tri.edge(e);
            let ev = b - a;
            let rate = ev.cross(d) / ev.norm();
            if rate < 0.0 {
                let h = tri.edge_height(e, p).max(0.0);
                let s = h / -rate;
                if best.is_none_or(|(bs, _)| s < bs) {
                    best = Some((s, e));
                }
            }
        }
        let Some((exit_s, exit_e)) = best else {
            return Err(TraceError::LeftDomain { triangle: t, point: p });
        };

        let remaining = (max_length - travelled).max(0.0);
        let seg_len = exit_s.min(remaining);

        // closest approach to each corner along [p, p + d·seg_len]
        let q = p + d * seg_len;
        let mut hit: Option<(f64, usize)> = None;
        for c in 0..3 {
            let corner = tri.corners[c];
            let u = project_on_segment(corner, p, q) * seg_len;
            if (p + d * u).dist(corner) < vertex_clearance && hit.is_none_or(|(hu, _)| u < hu) {
                hit = Some((u, c));
            }
        }
        if let Some((u, c)) = hit {
            if u > 0.0 || segments.is_empty() {
                segments.push(TraceSegment {
                    triangle: t,
                    entry: p,
                    exit: p + d * u,
                    direction: d,
                    start_param: travelled,
                    exit_edge: None,
                });
            }
            travelled += u;
            break Termination::VertexHit { vertex: surface.vertex_at(t, c), param: travelled };
        }

        if exit_s >= remaining {
            if seg_len > 0.0 || segments.is_empty() {
                segments.push(TraceSegment {
                    triangle: t,
                    entry: p,
                    exit: q,
                    direction: d,
                    start_param: travelled,
                    exit_edge: None,
                });
            }
            break Termination::LengthReached;
        }

        if seg_len > 0.0 {
            segments.push(TraceSegment {
                triangle: t,
                entry: p,
                exit: q,
                direction: d,
                start_param: travelled,
                exit_edge: Some(exit_e),
            });
            travelled += seg_len;
            stalls = 0;
        } else {
            stalls += 1;
            if stalls > MAX_STALLS {
                return Err(TraceError::LeftDomain { triangle: t, point: p });
            }
        }

        let he = surface.half_edge(EdgeRef::new(t, exit_e));
        let (a0, a1) = tri.edge(exit_e);
        let lambda = project_on_segment(q, a0, a1);
        let twin = surface.triangle(he.twin.triangle);
        let (b0, b1) = twin.edge(he.twin.edge);
        // snap the crossing onto the partner edge to stop drift from accumulating
        let np = if he.reversed { b0.lerp(b1, lambda) } else { b1.lerp(b0, lambda) };
        let nd = he.transition.apply_linear(d).normalized();
        let mapped = he.transition.apply(q);
        if mapped.dist(np) > drift_tolerance(surface, he.twin.triangle) {
            return Err(TraceError::LeftDomain { triangle: he.twin.triangle, point: mapped });
        }
        t = he.twin.triangle;
        p = np;
        d = nd;
    };

    let length = match termination {
        Termination::LengthReached => max_length,
        Termination::VertexHit { param, .. } => param,
    };
    Ok(GeodesicTrace { start, segments, length, termination })
}

fn drift_tolerance(surface: &FlatSurface, t: TriangleId) -> f64 {
    (surface.tolerance() * 1e3).max(1e-12 * surface.triangle(t).diameter())
}

impl GeodesicTrace {
    fn segment_index(&self, t: f64) -> Result<usize, TraceError> {
        if !(0.0..=self.length).contains(&t) || self.segments.is_empty() {
            return Err(TraceError::ParameterOutOfRange { t, length: self.length });
        }
        let idx = self.segments.partition_point(|s| s.start_param <= t);
        Ok(idx.saturating_sub(1))
    }

    /// Point at arc length `t`.
    pub fn locate(&self, t: f64) -> Result<SurfacePoint, TraceError> {
        let i = self.segment_index(t)?;
        let s = &self.segments[i];
        let u = (t - s.start_param).clamp(0.0, s.length());
        Ok(SurfacePoint::new(s.triangle, s.entry + s.direction * u))
    }

    /// Unit tangent at arc length `t`, in the chart of the owning segment.
    pub fn tangent(&self, t: f64) -> Result<TangentDirection, TraceError> {
        let i = self.segment_index(t)?;
        let s = &self.segments[i];
        let p = self.locate(t)?;
        Ok(TangentDirection { at: p, unit: s.direction })
    }

    /// Final point and tangent.
    pub fn end(&self) -> TangentDirection {
        match self.segments.last() {
            Some(s) => TangentDirection { at: SurfacePoint::new(s.triangle, s.exit), unit: s.direction },
            None => self.start,
        }
    }

    /// Prefix of the trace of arc length `min(len, self.length)`.
    pub fn truncated(&self, len: f64) -> GeodesicTrace {
        if len >= self.length {
            return self.clone();
        }
        let len = len.max(0.0);
        let mut segments = Vec::new();
        for s in &self.segments {
            if s.start_param > len || (s.start_param == len && !segments.is_empty()) {
                break;
            }
            let mut s = *s;
            if s.end_param() > len {
                s.exit = s.entry + s.direction * (len - s.start_param);
                s.exit_edge = None;
            }
            segments.push(s);
        }
        if let Some(last) = segments.last_mut() {
            last.exit_edge = None;
        }
        GeodesicTrace { start: self.start, segments, length: len, termination: Termination::LengthReached }
    }

    pub fn visited_triangles(&self) -> impl Iterator<Item = TriangleId> + '_ {
        self.segments.iter().map(|s| s.triangle)
    }

    /// Check segment chaining, direction transport and total length; returns the
    /// first violation found.
    pub fn check_invariants(&self, surface: &FlatSurface, tol: f64) -> Result<(), String> {
        let mut total = 0.0;
        for (k, s) in self.segments.iter().enumerate() {
            total += s.length();
            if (s.start_param - (total - s.length())).abs() > tol * (1.0 + total) {
                return Err(format!("segment {k}: start parameter out of sync"));
            }
            if let Some(next) = self.segments.get(k + 1) {
                let Some(e) = s.exit_edge else {
                    return Err(format!("segment {k} has a successor but no exit edge"));
                };
                let he = surface.half_edge(EdgeRef::new(s.triangle, e));
                if he.twin.triangle != next.triangle {
                    return Err(format!("segment {k} crosses into the wrong triangle"));
                }
                if he.transition.apply(s.exit).dist(next.entry) > tol {
                    return Err(format!("segment {k}: exit does not map to next entry"));
                }
                if he.transition.apply_linear(s.direction).dist(next.direction) > tol {
                    return Err(format!("segment {k}: direction not transported"));
                }
            }
        }
        if (total - self.length).abs() > tol * (1.0 + self.length) {
            return Err(format!("segment lengths {total} differ from length {}", self.length));
        }
        Ok(())
    }
}

/// A triangle placed in the development plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub triangle: TriangleId,
    /// Maps the triangle's chart into the development plane.
    pub isometry: PlaneIsometry,
}

/// Development of a trace into one plane, where it becomes a single straight segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Unfolding {
    /// One placement per trace segment, in order.
    pub placements: Vec<Placement>,
    pub start: Vec2,
    pub end: Vec2,
}

impl Unfolding {
    /// Placed corners of placement `k`.
    pub fn placed_corners(&self, surface: &FlatSurface, k: usize) -> [Vec2; 3] {
        let p = &self.placements[k];
        surface.triangle(p.triangle).corners.map(|c| p.isometry.apply(c))
    }
}

/// Develop the visited triangles isometrically into the chart of the first segment.
pub fn unfold(surface: &FlatSurface, trace: &GeodesicTrace) -> Unfolding {
    let mut placements = Vec::with_capacity(trace.segments.len());
    let mut iso = PlaneIsometry::IDENTITY;
    for (k, s) in trace.segments.iter().enumerate() {
        placements.push(Placement { triangle: s.triangle, isometry: iso });
        if k + 1 < trace.segments.len() {
            if let Some(e) = s.exit_edge {
                let he = surface.half_edge(EdgeRef::new(s.triangle, e));
                iso = iso.compose(&he.transition.inverse());
            }
        }
    }
    let (start, end) = match (trace.segments.first(), placements.last(), trace.segments.last()) {
        (Some(f), Some(pl), Some(l)) => (f.entry, pl.isometry.apply(l.exit)),
        _ => (trace.start.at.coords, trace.start.at.coords),
    };
    Unfolding { placements, start, end }
}

/// Trace forward for `length`, then back along the reversed tangent for the same
/// length, and report how far the round trip lands from the start (measured in
/// the start chart).
pub fn reverse_check(
    surface: &FlatSurface,
    start: TangentDirection,
    length: f64,
    vertex_clearance: f64,
) -> Result<f64, TraceError> {
    let fwd = trace(surface, start, length, vertex_clearance)?;
    if let Termination::VertexHit { vertex, param } = fwd.termination {
        return Err(TraceError::VertexHitBeforeLength { vertex, param });
    }
    let back = trace(surface, fwd.end().reversed(), length, vertex_clearance)?;
    let end = back.end().at;
    Ok(chart_distance(surface, start.at, end))
}

/// Distance between two surface points measured in the chart of `a`, allowing `b`
/// to sit in a neighbouring triangle.
pub fn chart_distance(surface: &FlatSurface, a: SurfacePoint, b: SurfacePoint) -> f64 {
    if a.triangle == b.triangle {
        return a.coords.dist(b.coords);
    }
    (0..3)
        .map(|e| surface.half_edge(EdgeRef::new(b.triangle, e)))
        .filter(|he| he.twin.triangle == a.triangle)
        .map(|he| he.transition.apply(b.coords).dist(a.coords))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub tri: TriangleId,
    #[serde(rename = "in")]
    pub entry: [f64; 2],
    #[serde(rename = "out")]
    pub exit: [f64; 2],
}

/// Serialized trace: `{"segments": [{"tri", "in", "out"}], "length", "termination"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub segments: Vec<SegmentRecord>,
    pub length: f64,
    pub termination: String,
}

impl From<&GeodesicTrace> for TraceRecord {
    fn from(t: &GeodesicTrace) -> Self {
        TraceRecord {
            segments: t
                .segments
                .iter()
                .map(|s| SegmentRecord { tri: s.triangle, entry: s.entry.into(), exit: s.exit.into() })
                .collect(),
            length: t.length,
            termination: t.termination.name().to_string(),
        }
    }
}

impl TraceRecord {
    /// Rebuild a trace on `surface`. Directions come from the segment endpoints and
    /// crossing edges from the triangle edge nearest to each exit point.
    pub fn to_trace(&self, surface: &FlatSurface) -> Result<GeodesicTrace, TraceError> {
        if self.segments.is_empty() {
            return Err(TraceError::ParameterOutOfRange { t: 0.0, length: self.length });
        }
        let mut segments: Vec<TraceSegment> = Vec::with_capacity(self.segments.len());
        let mut param = 0.0;
        for (k, r) in self.segments.iter().enumerate() {
            if r.tri >= surface.triangles().len() {
                return Err(TraceError::NoSuchTriangle(r.tri));
            }
            let entry = Vec2::from(r.entry);
            let exit = Vec2::from(r.exit);
            let v = exit - entry;
            let direction = if v.norm() > 0.0 {
                v.normalized()
            } else if let Some(prev) = segments.last() {
                let e = prev.exit_edge.unwrap_or(0);
                surface.half_edge(EdgeRef::new(prev.triangle, e)).transition.apply_linear(prev.direction)
            } else {
                return Err(TraceError::BadDirection);
            };
            let tri = surface.triangle(r.tri);
            let exit_edge = (k + 1 < self.segments.len()).then(|| {
                (0..3)
                    .min_by(|&a, &b| tri.edge_height(a, exit).abs().total_cmp(&tri.edge_height(b, exit).abs()))
                    .unwrap()
            });
            segments.push(TraceSegment { triangle: r.tri, entry, exit, direction, start_param: param, exit_edge });
            param += v.norm();
        }
        let first = segments[0];
        let last = *segments.last().unwrap();
        let termination = if self.termination == "VertexHit" {
            let tri = surface.triangle(last.triangle);
            let c = (0..3)
                .min_by(|&a, &b| tri.corners[a].dist(last.exit).total_cmp(&tri.corners[b].dist(last.exit)))
                .unwrap();
            Termination::VertexHit { vertex: surface.vertex_at(last.triangle, c), param: self.length }
        } else {
            Termination::LengthReached
        };
        Ok(GeodesicTrace {
            start: TangentDirection { at: SurfacePoint::new(first.triangle, first.entry), unit: first.direction },
            segments,
            length: self.length,
            termination,
        })
    }
}
