//! Planar vectors and isometries of the Euclidean plane.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta` from the positive x-axis.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }

    /// Counterclockwise rotation by `theta`.
    pub fn rotated(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2::new(a[0], a[1])
    }
}

impl From<Vec2> for [f64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `abc` (positive when counterclockwise).
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_tau(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `[0, π)`.
pub fn wrap_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Distance from `theta` to the nearest integer multiple of `period`.
pub fn dist_to_multiple(theta: f64, period: f64) -> f64 {
    let r = theta.rem_euclid(period);
    r.min(period - r).abs()
}

/// Fold an angle modulo 2π onto `[0, π]`.
pub fn fold_angle(theta: f64) -> f64 {
    let r = wrap_tau(theta);
    r.min(TAU - r)
}

/// Closest point parameter of `p` on segment `ab`, clamped to `[0, 1]`.
pub fn project_on_segment(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 == 0.0 {
        return 0.0;
    }
    ((p - a).dot(d) / len2).clamp(0.0, 1.0)
}

pub fn point_segment_dist(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let t = project_on_segment(p, a, b);
    p.dist(a.lerp(b, t))
}

/// Proper crossing point of segments `ab` and `cd` as parameters `(s, t)` along each,
/// or `None` when they are parallel or disjoint.
pub fn segment_crossing(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = c - a;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

/// An isometry of the plane: `p ↦ R(angle)·S(p) + translation`, where `S` is the
/// reflection across the x-axis when `reflect` is set and the identity otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneIsometry {
    pub reflect: bool,
    pub angle: f64,
    pub translation: Vec2,
}

impl Default for PlaneIsometry {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl PlaneIsometry {
    pub const IDENTITY: PlaneIsometry = PlaneIsometry { reflect: false, angle: 0.0, translation: Vec2::ZERO };

    pub fn new(reflect: bool, angle: f64, translation: Vec2) -> Self {
        PlaneIsometry { reflect, angle: wrap_tau(angle), translation }
    }

    pub fn rotation(angle: f64) -> Self {
        Self::new(false, angle, Vec2::ZERO)
    }

    pub fn translation(t: Vec2) -> Self {
        Self::new(false, 0.0, t)
    }

    /// The unique isometry sending `p0 ↦ q0` and `p1 ↦ q1` with the given
    /// orientation behaviour. The two segments must have (nearly) equal length;
    /// the direction of `q1 - q0` is matched exactly.
    pub fn from_segments(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2, reflect: bool) -> Self {
        let dp = p1 - p0;
        let dp = if reflect { Vec2::new(dp.x, -dp.y) } else { dp };
        let angle = (q1 - q0).angle() - dp.angle();
        let linear = PlaneIsometry::new(reflect, angle, Vec2::ZERO);
        let t = q0 - linear.apply_linear(p0);
        PlaneIsometry::new(reflect, angle, t)
    }

    pub fn apply_linear(&self, v: Vec2) -> Vec2 {
        let v = if self.reflect { Vec2::new(v.x, -v.y) } else { v };
        v.rotated(self.angle)
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        self.apply_linear(p) + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PlaneIsometry) -> PlaneIsometry {
        let angle = if self.reflect { self.angle - other.angle } else { self.angle + other.angle };
        PlaneIsometry::new(self.reflect ^ other.reflect, angle, self.apply_linear(other.translation) + self.translation)
    }

    pub fn inverse(&self) -> PlaneIsometry {
        let angle = if self.reflect { self.angle } else { -self.angle };
        let lin = PlaneIsometry::new(self.reflect, angle, Vec2::ZERO);
        let t = -lin.apply_linear(self.translation);
        PlaneIsometry::new(self.reflect, angle, t)
    }

    pub fn linear_part(&self) -> HolonomyElement {
        HolonomyElement::new(self.reflect, self.angle)
    }

    /// True when `self` and `other` agree on the unit square corners within `tol`.
    pub fn approx_eq(&self, other: &PlaneIsometry, tol: f64) -> bool {
        [Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]
            .iter()
            .all(|&p| self.apply(p).dist(other.apply(p)) <= tol)
    }
}

/// Linear part of a plane isometry: a rotation, or a reflection composed with one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyElement {
    pub reflect: bool,
    pub angle: f64,
}

impl HolonomyElement {
    pub const IDENTITY: HolonomyElement = HolonomyElement { reflect: false, angle: 0.0 };

    pub fn new(reflect: bool, angle: f64) -> Self {
        HolonomyElement { reflect, angle: wrap_tau(angle) }
    }

    pub fn rotation(angle: f64) -> Self {
        Self::new(false, angle)
    }

    fn as_isometry(&self) -> PlaneIsometry {
        PlaneIsometry::new(self.reflect, self.angle, Vec2::ZERO)
    }

    pub fn compose(&self, other: &HolonomyElement) -> HolonomyElement {
        self.as_isometry().compose(&other.as_isometry()).linear_part()
    }

    pub fn inverse(&self) -> HolonomyElement {
        self.as_isometry().inverse().linear_part()
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        self.as_isometry().apply_linear(v)
    }

    /// Angular distance to another element of the same kind; `∞` if one reflects
    /// and the other does not.
    pub fn distance(&self, other: &HolonomyElement) -> f64 {
        if self.reflect != other.reflect {
            return f64::INFINITY;
        }
        dist_to_multiple(self.angle - other.angle, TAU)
    }

    /// Whether this element is `±id` within `tol` radians.
    pub fn is_plus_minus_identity(&self, tol: f64) -> bool {
        !self.reflect && dist_to_multiple(self.angle, PI) <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iso() -> impl Strategy<Value = PlaneIsometry> {
        (any::<bool>(), 0.0..TAU, -10.0..10.0f64, -10.0..10.0f64)
            .prop_map(|(r, a, x, y)| PlaneIsometry::new(r, a, Vec2::new(x, y)))
    }

    fn pt() -> impl Strategy<Value = Vec2> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| Vec2::new(x, y))
    }

    #[test]
    fn from_segments_maps_endpoints() {
        let p0 = Vec2::new(0.0, 0.0);
        let p1 = Vec2::new(1.0, 0.0);
        let q0 = Vec2::new(2.0, 3.0);
        let q1 = Vec2::new(2.0, 4.0);
        for reflect in [false, true] {
            let m = PlaneIsometry::from_segments(p0, p1, q0, q1, reflect);
            assert!(m.apply(p0).dist(q0) < 1e-12);
            assert!(m.apply(p1).dist(q1) < 1e-12);
            assert_eq!(m.reflect, reflect);
        }
    }

    #[test]
    fn fold_and_wrap() {
        assert!((fold_angle(1.5 * PI) - 0.5 * PI).abs() < 1e-15);
        assert!((wrap_pi(-0.25 * PI) - 0.75 * PI).abs() < 1e-15);
        assert!(dist_to_multiple(PI - 1e-12, PI) < 1e-11);
    }

    #[test]
    fn crossing_of_diagonals() {
        let (s, t) =
            segment_crossing(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
                .unwrap();
        assert!((s - 0.5).abs() < 1e-15 && (t - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn group_laws(a in iso(), b in iso(), c in iso(), p in pt()) {
            let ab_c = a.compose(&b).compose(&c);
            let a_bc = a.compose(&b.compose(&c));
            prop_assert!(ab_c.apply(p).dist(a_bc.apply(p)) < 1e-9);
            prop_assert!(a.compose(&a.inverse()).approx_eq(&PlaneIsometry::IDENTITY, 1e-9));
            prop_assert!(a.inverse().compose(&a).approx_eq(&PlaneIsometry::IDENTITY, 1e-9));
            prop_assert!(a.compose(&b).apply(p).dist(a.apply(b.apply(p))) < 1e-9);
        }

        #[test]
        fn preserves_lengths(a in iso(), p in pt(), q in pt()) {
            prop_assert!((a.apply(p).dist(a.apply(q)) - p.dist(q)).abs() < 1e-9);
        }
    }
}
