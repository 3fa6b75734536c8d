//! Compact flat surfaces assembled from Euclidean triangles glued along edges.
//!
//! Each triangle lives in its own chart. All global structure is carried by the
//! transition isometries attached to the gluings: the transition of a gluing maps
//! the chart of triangle `a` onto the chart of triangle `b` so that the image of
//! triangle `a` lies across edge `b`, on the side opposite to triangle `b`.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::geometry::{orient, PlaneIsometry, Vec2};
use crate::DEFAULT_TOLERANCE;

pub type TriangleId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    pub id: TriangleId,
    /// Counterclockwise in the chart. Edge `k` runs from corner `k` to corner `k + 1`.
    pub corners: [Vec2; 3],
}

impl Triangle {
    pub fn new(id: TriangleId, corners: [Vec2; 3]) -> Self {
        Triangle { id, corners }
    }

    pub fn edge(&self, k: usize) -> (Vec2, Vec2) {
        (self.corners[k % 3], self.corners[(k + 1) % 3])
    }

    pub fn edge_length(&self, k: usize) -> f64 {
        let (p, q) = self.edge(k);
        p.dist(q)
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * orient(self.corners[0], self.corners[1], self.corners[2])
    }

    /// Interior angle at corner `k`.
    pub fn angle(&self, k: usize) -> f64 {
        let c = self.corners[k % 3];
        let u = self.corners[(k + 1) % 3] - c;
        let v = self.corners[(k + 2) % 3] - c;
        u.cross(v).abs().atan2(u.dot(v))
    }

    /// Signed distance from `p` to the line of edge `k`; positive on the interior side.
    pub fn edge_height(&self, k: usize, p: Vec2) -> f64 {
        let (a, b) = self.edge(k);
        let e = b - a;
        e.cross(p - a) / e.norm()
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        (0..3).all(|k| self.edge_height(k, p) >= -tol)
    }

    pub fn centroid(&self) -> Vec2 {
        (self.corners[0] + self.corners[1] + self.corners[2]) * (1.0 / 3.0)
    }

    pub fn incenter(&self) -> Vec2 {
        let a = self.edge_length(1);
        let b = self.edge_length(2);
        let c = self.edge_length(0);
        let s = a + b + c;
        (self.corners[0] * a + self.corners[1] * b + self.corners[2] * c) * (1.0 / s)
    }

    pub fn diameter(&self) -> f64 {
        (0..3).map(|k| self.edge_length(k)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub triangle: TriangleId,
    pub edge: usize,
}

impl EdgeRef {
    pub const fn new(triangle: TriangleId, edge: usize) -> Self {
        EdgeRef { triangle, edge }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    /// `false`: the two counterclockwise triangles induce opposite orientations on
    /// the shared edge (start of `a` meets end of `b`). `true` composes with a reflection.
    pub reversed: bool,
}

impl Gluing {
    pub fn new(a: EdgeRef, b: EdgeRef, reversed: bool) -> Self {
        Gluing { a, b, reversed }
    }
}

/// An equivalence class of triangle corners that are identified to one point.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexClass {
    pub id: usize,
    /// Member corners as `(triangle, corner)`, in the order met when walking around
    /// the vertex starting from the smallest member.
    pub corners: Vec<(TriangleId, usize)>,
    pub cone_angle: f64,
    pub curvature: f64,
}

impl VertexClass {
    /// Cone points are the vertices whose cone angle differs from 2π.
    pub fn is_cone_point(&self, angular_tol: f64) -> bool {
        (self.cone_angle - TAU).abs() > angular_tol
    }
}

/// A closed walk in the dual graph: starting in `base`, leave the current triangle
/// through each listed edge in turn.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualLoop {
    pub base: TriangleId,
    pub steps: Vec<EdgeRef>,
}

impl DualLoop {
    pub fn gluing_ids(&self, surface: &FlatSurface) -> Vec<usize> {
        self.steps.iter().map(|e| surface.half_edge(*e).gluing).collect()
    }

    pub fn reversed(&self, surface: &FlatSurface) -> DualLoop {
        DualLoop { base: self.base, steps: self.steps.iter().rev().map(|e| surface.half_edge(*e).twin).collect() }
    }

    pub fn concat(&self, other: &DualLoop) -> DualLoop {
        debug_assert_eq!(self.base, other.base);
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        DualLoop { base: self.base, steps }
    }
}

/// One side of a gluing as seen from its own triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfEdge {
    pub gluing: usize,
    pub twin: EdgeRef,
    pub reversed: bool,
    /// Maps this triangle's chart to the twin triangle's chart.
    pub transition: PlaneIsometry,
}

/// Breadth-first spanning tree of the dual graph rooted at triangle 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DualTree {
    /// For every non-root triangle, the half-edge of its parent through which it is reached.
    pub parent: Vec<Option<EdgeRef>>,
    /// Triangles in visiting order.
    pub order: Vec<TriangleId>,
    pub is_tree_gluing: Vec<bool>,
    /// Map from the root chart to each triangle's chart along the tree.
    pub chart_from_root: Vec<PlaneIsometry>,
}

impl DualTree {
    /// Tree path from the root to `t`, as a list of exit half-edges.
    pub fn path_from_root(&self, t: TriangleId) -> Vec<EdgeRef> {
        let mut path = Vec::new();
        let mut cur = t;
        while let Some(e) = self.parent[cur] {
            path.push(e);
            cur = e.triangle;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("surface needs at least one triangle and one gluing")]
    Empty,
    #[error("triangle at position {position} has id {id}; ids must be 0..n in order")]
    InvalidTriangleId { position: usize, id: TriangleId },
    #[error("gluing {gluing} references missing edge ({}, {})", edge.triangle, edge.edge)]
    InvalidEdgeRef { gluing: usize, edge: EdgeRef },
    #[error("edge ({}, {}) is glued {count} times", edge.triangle, edge.edge)]
    UnmatchedEdge { edge: EdgeRef, count: usize },
    #[error("gluing {gluing} joins edges of length {len_a} and {len_b}")]
    LengthMismatch { gluing: usize, len_a: f64, len_b: f64 },
    #[error("the gluing graph is disconnected")]
    Disconnected,
    #[error("triangle {id} is degenerate (signed area {area})")]
    DegenerateTriangle { id: TriangleId, area: f64 },
    #[error("triangle {id} is listed clockwise")]
    Clockwise { id: TriangleId },
    #[error("Gauss-Bonnet residual {residual} exceeds tolerance")]
    GaussBonnet { residual: f64 },
}

impl SurfaceError {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            SurfaceError::Empty => "Empty",
            SurfaceError::InvalidTriangleId { .. } => "InvalidTriangleId",
            SurfaceError::InvalidEdgeRef { .. } => "InvalidEdgeRef",
            SurfaceError::UnmatchedEdge { .. } => "UnmatchedEdge",
            SurfaceError::LengthMismatch { .. } => "LengthMismatch",
            SurfaceError::Disconnected => "Disconnected",
            SurfaceError::DegenerateTriangle { .. } => "DegenerateTriangle",
            SurfaceError::Clockwise { .. } => "Clockwise",
            SurfaceError::GaussBonnet { .. } => "GaussBonnet",
        }
    }
}

/// Orientability verdict with a witness when the surface is one-sided.
#[derive(Debug, Clone, PartialEq)]
pub struct Orientability {
    pub orientable: bool,
    /// Closed dual walk whose composed transition reverses orientation.
    pub witness: Option<DualLoop>,
    /// One sign per triangle when orientable: `+1` keeps the chart orientation, `-1` flips it.
    pub signs: Option<Vec<i8>>,
}

/// A validated closed flat surface with cone points.
#[derive(Debug, Clone)]
pub struct FlatSurface {
    triangles: Vec<Triangle>,
    gluings: Vec<Gluing>,
    half_edges: Vec<[HalfEdge; 3]>,
    vertices: Vec<VertexClass>,
    corner_vertex: Vec<[usize; 3]>,
    tree: DualTree,
    orientability: Orientability,
    euler: i64,
    tolerance: f64,
}

/// Build with the default metric tolerance.
pub fn build_surface(triangles: Vec<Triangle>, gluings: Vec<Gluing>) -> Result<FlatSurface, SurfaceError> {
    FlatSurface::build(triangles, gluings, DEFAULT_TOLERANCE)
}

impl FlatSurface {
    pub fn build(triangles: Vec<Triangle>, gluings: Vec<Gluing>, tolerance: f64) -> Result<FlatSurface, SurfaceError> {
        if triangles.is_empty() || gluings.is_empty() {
            return Err(SurfaceError::Empty);
        }
        for (i, t) in triangles.iter().enumerate() {
            if t.id != i {
                return Err(SurfaceError::InvalidTriangleId { position: i, id: t.id });
            }
            let area = t.signed_area();
            if area.abs() <= tolerance || !area.is_finite() {
                return Err(SurfaceError::DegenerateTriangle { id: t.id, area });
            }
            if area < 0.0 {
                return Err(SurfaceError::Clockwise { id: t.id });
            }
        }

        let n = triangles.len();
        let mut slots: Vec<[Option<HalfEdge>; 3]> = vec![[None; 3]; n];
        let mut counts = vec![[0usize; 3]; n];
        for (gi, g) in gluings.iter().enumerate() {
            for e in [g.a, g.b] {
                if e.triangle >= n || e.edge > 2 {
                    return Err(SurfaceError::InvalidEdgeRef { gluing: gi, edge: e });
                }
                counts[e.triangle][e.edge] += 1;
            }
        }
        for (t, c) in counts.iter().enumerate() {
            for (k, &count) in c.iter().enumerate() {
                if count != 1 {
                    return Err(SurfaceError::UnmatchedEdge { edge: EdgeRef::new(t, k), count });
                }
            }
        }

        for (gi, g) in gluings.iter().enumerate() {
            let ta = &triangles[g.a.triangle];
            let tb = &triangles[g.b.triangle];
            let len_a = ta.edge_length(g.a.edge);
            let len_b = tb.edge_length(g.b.edge);
            if (len_a - len_b).abs() > tolerance {
                return Err(SurfaceError::LengthMismatch { gluing: gi, len_a, len_b });
            }
            let (p0, p1) = ta.edge(g.a.edge);
            let (q0, q1) = tb.edge(g.b.edge);
            let forward = if g.reversed {
                PlaneIsometry::from_segments(p0, p1, q0, q1, true)
            } else {
                PlaneIsometry::from_segments(p0, p1, q1, q0, false)
            };
            slots[g.a.triangle][g.a.edge] =
                Some(HalfEdge { gluing: gi, twin: g.b, reversed: g.reversed, transition: forward });
            slots[g.b.triangle][g.b.edge] =
                Some(HalfEdge { gluing: gi, twin: g.a, reversed: g.reversed, transition: forward.inverse() });
        }
        let half_edges: Vec<[HalfEdge; 3]> =
            slots.into_iter().map(|s| [s[0].unwrap(), s[1].unwrap(), s[2].unwrap()]).collect();

        let tree = spanning_tree(&half_edges, gluings.len());
        if tree.order.len() != n {
            return Err(SurfaceError::Disconnected);
        }

        let mut surface = FlatSurface {
            triangles,
            gluings,
            half_edges,
            vertices: Vec::new(),
            corner_vertex: vec![[usize::MAX; 3]; n],
            orientability: Orientability { orientable: true, witness: None, signs: None },
            tree,
            euler: 0,
            tolerance,
        };
        surface.classify_vertices();
        surface.euler = surface.vertices.len() as i64 - surface.gluings.len() as i64 + n as i64;
        surface.orientability = surface.compute_orientability();

        let residual = surface.gauss_bonnet_residual();
        if residual > 1e-9_f64.max(tolerance) * (n as f64).max(1.0) {
            return Err(SurfaceError::GaussBonnet { residual });
        }
        Ok(surface)
    }

    fn classify_vertices(&mut self) {
        let n = self.triangles.len();
        for t in 0..n {
            for c in 0..3 {
                if self.corner_vertex[t][c] != usize::MAX {
                    continue;
                }
                let id = self.vertices.len();
                let walk = self.corner_walk(t, c);
                let mut corners = Vec::with_capacity(walk.len());
                let mut cone_angle = 0.0;
                for &(tt, cc) in &walk {
                    self.corner_vertex[tt][cc] = id;
                    cone_angle += self.triangles[tt].angle(cc);
                    corners.push((tt, cc));
                }
                self.vertices.push(VertexClass { id, corners, cone_angle, curvature: TAU - cone_angle });
            }
        }
    }

    /// Corners met walking around the vertex at corner `c` of triangle `t`,
    /// starting with `(t, c)` and leaving each triangle through the edge that starts
    /// at the current corner in the chart orientation of the first triangle.
    fn corner_walk(&self, t: TriangleId, c: usize) -> Vec<(TriangleId, usize)> {
        self.corner_cycle(t, c).into_iter().map(|(corner, _)| corner).collect()
    }

    /// Walk around a vertex: each entry is a corner together with the half-edge
    /// through which the walk leaves it.
    pub fn corner_cycle(&self, t: TriangleId, c: usize) -> Vec<((TriangleId, usize), EdgeRef)> {
        let limit = 3 * self.triangles.len() + 1;
        let mut out = Vec::new();
        let (mut ct, mut cc, mut leave) = (t, c, c);
        loop {
            out.push(((ct, cc), EdgeRef::new(ct, leave)));
            let he = self.half_edges[ct][leave];
            let s = usize::from(leave != cc);
            let idx = if he.reversed { s } else { 1 - s };
            let nt = he.twin.triangle;
            let nc = (he.twin.edge + idx) % 3;
            let next_leave = if he.twin.edge == nc { (nc + 2) % 3 } else { nc };
            if (nt, nc) == (t, c) || out.len() > limit {
                debug_assert_eq!(next_leave, c, "vertex link traversed inconsistently");
                break;
            }
            ct = nt;
            cc = nc;
            leave = next_leave;
        }
        out
    }

    fn compute_orientability(&self) -> Orientability {
        let n = self.triangles.len();
        let mut sign = vec![0i8; n];
        sign[0] = 1;
        for &t in &self.tree.order {
            if let Some(pe) = self.tree.parent[t] {
                let he = self.half_edges[pe.triangle][pe.edge];
                sign[t] = if he.reversed { -sign[pe.triangle] } else { sign[pe.triangle] };
            }
        }
        for (gi, g) in self.gluings.iter().enumerate() {
            if self.tree.is_tree_gluing[gi] {
                continue;
            }
            let expected = if g.reversed { -sign[g.a.triangle] } else { sign[g.a.triangle] };
            if expected != sign[g.b.triangle] {
                let witness = self.tree_loop_through(g.a);
                return Orientability { orientable: false, witness: Some(witness), signs: None };
            }
        }
        Orientability { orientable: true, witness: None, signs: Some(sign) }
    }

    /// Loop based at the root: tree path to the triangle of `exit`, across `exit`,
    /// then tree path back to the root.
    pub fn tree_loop_through(&self, exit: EdgeRef) -> DualLoop {
        let mut steps = self.tree.path_from_root(exit.triangle);
        steps.push(exit);
        let back = self.half_edges[exit.triangle][exit.edge].twin.triangle;
        let down = self.tree.path_from_root(back);
        steps.extend(down.iter().rev().map(|e| self.half_edges[e.triangle][e.edge].twin));
        DualLoop { base: 0, steps }
    }

    /// Composite transition along a dual loop; maps the base chart to itself.
    pub fn loop_transition(&self, lp: &DualLoop) -> PlaneIsometry {
        let mut acc = PlaneIsometry::IDENTITY;
        let mut cur = lp.base;
        for e in &lp.steps {
            debug_assert_eq!(e.triangle, cur, "dual loop is not connected");
            let he = self.half_edges[e.triangle][e.edge];
            acc = he.transition.compose(&acc);
            cur = he.twin.triangle;
        }
        debug_assert_eq!(cur, lp.base, "dual loop is not closed");
        acc
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: TriangleId) -> &Triangle {
        &self.triangles[t]
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn half_edge(&self, e: EdgeRef) -> &HalfEdge {
        &self.half_edges[e.triangle][e.edge]
    }

    /// Transition isometry of gluing `g`, from the chart of `a` to the chart of `b`.
    pub fn transition(&self, g: usize) -> PlaneIsometry {
        let a = self.gluings[g].a;
        self.half_edges[a.triangle][a.edge].transition
    }

    pub fn vertices(&self) -> &[VertexClass] {
        &self.vertices
    }

    /// Vertex class of a triangle corner.
    pub fn vertex_at(&self, t: TriangleId, corner: usize) -> usize {
        self.corner_vertex[t][corner]
    }

    /// Vertices with cone angle different from 2π.
    pub fn cone_points(&self) -> impl Iterator<Item = &VertexClass> {
        let tol = self.angular_tolerance();
        self.vertices.iter().filter(move |v| v.is_cone_point(tol))
    }

    pub fn curvature(&self, v: usize) -> f64 {
        TAU - self.vertices[v].cone_angle
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn orientability(&self) -> &Orientability {
        &self.orientability
    }

    pub fn is_orientable(&self) -> bool {
        self.orientability.orientable
    }

    pub fn dual_tree(&self) -> &DualTree {
        &self.tree
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Angular tolerance used for cone-point and holonomy decisions.
    pub fn angular_tolerance(&self) -> f64 {
        1e-9_f64.max(self.tolerance)
    }

    /// `|Σ ω(v) − 2πχ|`.
    pub fn gauss_bonnet_residual(&self) -> f64 {
        let total: f64 = self.vertices.iter().map(|v| v.curvature).sum();
        (total - TAU * self.euler as f64).abs()
    }

    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| t.signed_area()).sum()
    }

    /// Sorted curvatures of the cone points.
    pub fn curvature_multiset(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.cone_points().map(|v| v.curvature).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Triangles whose chart contains `p` within tolerance, among `candidates`
    /// (all triangles when `None`).
    pub fn triangles_containing(&self, p: Vec2, candidates: Option<&[TriangleId]>) -> Vec<TriangleId> {
        let tol = self.tolerance * 10.0;
        let all: Vec<TriangleId>;
        let list = match candidates {
            Some(c) => c,
            None => {
                all = (0..self.triangles.len()).collect();
                &all
            }
        };
        list.iter().copied().filter(|&t| self.triangles[t].contains(p, tol)).collect()
    }

    /// Estimate of the intrinsic diameter: the largest shortest-path distance among
    /// the corners, edge midpoints and centroids of all triangles, where paths move
    /// straight inside single triangles. It bounds the true distance between those
    /// sample points from above.
    pub fn diameter_estimate(&self) -> f64 {
        // node ids: vertex classes, then one per gluing (edge midpoint), then centroids
        let nv = self.vertices.len();
        let ng = self.gluings.len();
        let nt = self.triangles.len();
        let total = nv + ng + nt;
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
        for (t, tri) in self.triangles.iter().enumerate() {
            let mut local: Vec<(usize, Vec2)> = Vec::with_capacity(7);
            for c in 0..3 {
                local.push((self.corner_vertex[t][c], tri.corners[c]));
                let (p, q) = tri.edge(c);
                local.push((nv + self.half_edges[t][c].gluing, p.lerp(q, 0.5)));
            }
            local.push((nv + ng + t, tri.centroid()));
            for i in 0..local.len() {
                for j in (i + 1)..local.len() {
                    let d = local[i].1.dist(local[j].1);
                    adj[local[i].0].push((local[j].0, d));
                    adj[local[j].0].push((local[i].0, d));
                }
            }
        }
        let mut best = 0.0f64;
        for src in 0..total {
            let dist = dijkstra(&adj, src);
            best = best.max(dist.into_iter().filter(|d| d.is_finite()).fold(0.0, f64::max));
        }
        best
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[src] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for i in 0..n {
            if !done[i] && dist[i] < best {
                best = dist[i];
                u = i;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        for &(v, w) in &adj[u] {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
            }
        }
    }
    dist
}

fn spanning_tree(half_edges: &[[HalfEdge; 3]], n_gluings: usize) -> DualTree {
    let n = half_edges.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut is_tree_gluing = vec![false; n_gluings];
    let mut chart_from_root = vec![PlaneIsometry::IDENTITY; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0);
    while let Some(t) = queue.pop_front() {
        order.push(t);
        let mut nbrs: Vec<(TriangleId, usize)> = (0..3).map(|k| (half_edges[t][k].twin.triangle, k)).collect();
        nbrs.sort();
        for (nt, k) in nbrs {
            if seen[nt] {
                continue;
            }
            seen[nt] = true;
            let he = half_edges[t][k];
            parent[nt] = Some(EdgeRef::new(t, k));
            is_tree_gluing[he.gluing] = true;
            chart_from_root[nt] = he.transition.compose(&chart_from_root[t]);
            queue.push_back(nt);
        }
    }
    DualTree { parent, order, is_tree_gluing, chart_from_root }
}

/// `2π − cone angle` of a vertex class.
pub fn curvature(surface: &FlatSurface, v: &VertexClass) -> f64 {
    surface.curvature(v.id)
}

pub fn orientability(surface: &FlatSurface) -> (bool, Option<DualLoop>) {
    let o = surface.orientability();
    (o.orientable, o.witness.clone())
}

pub fn gauss_bonnet_check(surface: &FlatSurface) -> f64 {
    surface.gauss_bonnet_residual()
}

/// Nearest integer multiple of π, in units of π.
pub fn curvature_in_pi_units(omega: f64) -> f64 {
    (omega / PI).round()
}

#[cfg(test)]
fn corner_angle_total(surface: &FlatSurface) -> f64 {
    surface.triangles.iter().map(|t| t.angle(0) + t.angle(1) + t.angle(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_torus() -> FlatSurface {
        let t0 = Triangle::new(0, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)]);
        let t1 = Triangle::new(1, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]);
        build_surface(
            vec![t0, t1],
            vec![
                Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 1), false),
                Gluing::new(EdgeRef::new(0, 1), EdgeRef::new(1, 2), false),
                Gluing::new(EdgeRef::new(0, 2), EdgeRef::new(1, 0), false),
            ],
        )
        .unwrap()
    }

    fn klein_square() -> FlatSurface {
        let t0 = Triangle::new(0, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)]);
        let t1 = Triangle::new(1, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]);
        build_surface(
            vec![t0, t1],
            vec![
                // bottom (x,0) ~ top (1-x,1)
                Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 1), true),
                Gluing::new(EdgeRef::new(0, 1), EdgeRef::new(1, 2), false),
                Gluing::new(EdgeRef::new(0, 2), EdgeRef::new(1, 0), false),
            ],
        )
        .unwrap()
    }

    #[test]
    fn torus_invariants() {
        let s = unit_torus();
        assert_eq!(s.vertices().len(), 1);
        assert!((s.vertices()[0].cone_angle - TAU).abs() < 1e-12);
        assert!(s.vertices()[0].curvature.abs() < 1e-12);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.is_orientable());
        assert_eq!(s.cone_points().count(), 0);
        assert!(gauss_bonnet_check(&s) < 1e-12);
    }

    #[test]
    fn transitions_map_edges_onto_partners() {
        for s in [unit_torus(), klein_square()] {
            for (gi, g) in s.gluings().iter().enumerate() {
                let m = s.transition(gi);
                let (p0, p1) = s.triangle(g.a.triangle).edge(g.a.edge);
                let (q0, q1) = s.triangle(g.b.triangle).edge(g.b.edge);
                let (i0, i1) = if g.reversed { (q0, q1) } else { (q1, q0) };
                assert!(m.apply(p0).dist(i0) < 1e-9);
                assert!(m.apply(p1).dist(i1) < 1e-9);
                // triangle a lands on the far side of edge b
                let c = s.triangle(g.a.triangle).centroid();
                assert!(s.triangle(g.b.triangle).edge_height(g.b.edge, m.apply(c)) < 0.0);
            }
        }
    }

    #[test]
    fn klein_bottle_is_one_sided() {
        let s = klein_square();
        let o = s.orientability();
        assert!(!o.orientable);
        let w = o.witness.as_ref().unwrap();
        assert!(s.loop_transition(w).reflect);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(s.vertices().iter().all(|v| v.curvature.abs() < 1e-9));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let t0 = Triangle::new(0, [Vec2::new(0.0, 0.0), Vec2::new(0.9, 0.0), Vec2::new(0.0, 1.0)]);
        let t1 = Triangle::new(1, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        let err = build_surface(
            vec![t0, t1],
            vec![
                Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 0), false),
                Gluing::new(EdgeRef::new(0, 1), EdgeRef::new(1, 1), false),
                Gluing::new(EdgeRef::new(0, 2), EdgeRef::new(1, 2), false),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, SurfaceError::LengthMismatch { gluing: 0, .. }));
    }

    #[test]
    fn unmatched_and_degenerate_edges() {
        let t0 = Triangle::new(0, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0)]);
        let t1 = Triangle::new(1, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)]);
        let err = build_surface(
            vec![t0.clone(), t1.clone()],
            vec![
                Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 1), false),
                Gluing::new(EdgeRef::new(0, 1), EdgeRef::new(1, 2), false),
            ],
        )
        .unwrap_err();
        assert_eq!(err.kind(), "UnmatchedEdge");

        let flat = Triangle::new(0, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)]);
        let err = build_surface(vec![flat, t1], vec![Gluing::new(EdgeRef::new(0, 0), EdgeRef::new(1, 1), false)])
            .unwrap_err();
        assert_eq!(err.kind(), "DegenerateTriangle");
    }

    #[test]
    fn disconnected_surface_is_rejected() {
        let mk = |id| Triangle::new(id, [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        let mut gl = Vec::new();
        for pair in [(0, 1), (2, 3)] {
            for k in 0..3 {
                gl.push(Gluing::new(EdgeRef::new(pair.0, k), EdgeRef::new(pair.1, k), true));
            }
        }
        let err = build_surface(vec![mk(0), mk(1), mk(2), mk(3)], gl).unwrap_err();
        assert_eq!(err, SurfaceError::Disconnected);
    }

    #[test]
    fn corner_cycles_partition_corners() {
        let s = klein_square();
        let total: usize = s.vertices().iter().map(|v| v.corners.len()).sum();
        assert_eq!(total, 6);
        let cone: f64 = s.vertices().iter().map(|v| v.cone_angle).sum();
        assert!((cone - corner_angle_total(&s)).abs() < 1e-12);
    }
}
