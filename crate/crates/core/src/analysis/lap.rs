use rand::Rng;

use crate::geometry::{segment_crossing, Vec2};

use super::AnalysisError;

/// Two segments of half-length `l`, given by their midpoints and their angles to
/// the direction `m1 → m2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPair {
    pub m1: Vec2,
    pub m2: Vec2,
    pub alpha1: f64,
    pub alpha2: f64,
    pub l: f64,
}

impl SegmentPair {
    /// Endpoints `(a_i, b_i)`, where `b_i − a_i` points along angle `alpha_i`.
    pub fn endpoints(&self) -> [(Vec2, Vec2); 2] {
        let base = (self.m2 - self.m1).angle();
        let seg = |m: Vec2, alpha: f64| {
            let u = Vec2::from_angle(base + alpha) * self.l;
            (m - u, m + u)
        };
        [seg(self.m1, self.alpha1), seg(self.m2, self.alpha2)]
    }

    /// The two sides of the criterion: `(d·max|sin αi|, l·|sin δ|)`.
    pub fn sides(&self) -> Result<(f64, f64), AnalysisError> {
        let d = self.m1.dist(self.m2);
        if d == 0.0 {
            return Err(AnalysisError::CoincidentMidpoints);
        }
        let lhs = d * self.alpha1.sin().abs().max(self.alpha2.sin().abs());
        let rhs = self.l * (self.alpha2 - self.alpha1).sin().abs();
        Ok((lhs, rhs))
    }
}

/// Intersection criterion for two equal-length segments whose starting points lie on
/// the same side of the line through their midpoints:
/// `d(m1, m2)·max(|sin α1|, |sin α2|) ≤ l·|sin(α2 − α1)|`.
pub fn lap_criterion(pair: &SegmentPair) -> Result<bool, AnalysisError> {
    let (lhs, rhs) = pair.sides()?;
    Ok(lhs <= rhs)
}

/// Direct parametric test of whether the two closed segments meet.
pub fn segments_intersect(pair: &SegmentPair) -> bool {
    let [(a1, b1), (a2, b2)] = pair.endpoints();
    segment_crossing(a1, b1, a2, b2).is_some()
}

/// Random pair satisfying the same-side hypothesis: both starting points lie
/// strictly on one side of the midpoint line.
pub fn random_conforming_pair<R: Rng>(rng: &mut R) -> SegmentPair {
    let m1 = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let d = rng.gen_range(0.05..2.0);
    let m2 = m1 + Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * d;
    // a_i = m_i − l·u(α_i) lies below the line iff sin α_i > 0; flip both for above
    let flip = rng.gen_bool(0.5);
    let mut alpha = || {
        let a = rng.gen_range(1e-3..std::f64::consts::PI - 1e-3);
        if flip {
            -a
        } else {
            a
        }
    };
    let (alpha1, alpha2) = (alpha(), alpha());
    SegmentPair { m1, m2, alpha1, alpha2, l: rng.gen_range(0.05..2.0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn parallel_segments_do_not_meet() {
        let p = SegmentPair {
            m1: Vec2::new(0.0, 0.0),
            m2: Vec2::new(1.0, 0.0),
            alpha1: FRAC_PI_2,
            alpha2: FRAC_PI_2,
            l: 0.4,
        };
        assert!(!lap_criterion(&p).unwrap());
        assert!(!segments_intersect(&p));
    }

    #[test]
    fn boundary_case_meets() {
        let p = SegmentPair {
            m1: Vec2::new(0.0, 0.0),
            m2: Vec2::new(1.0, 0.0),
            alpha1: FRAC_PI_4,
            alpha2: 3.0 * FRAC_PI_4,
            l: FRAC_1_SQRT_2,
        };
        let (lhs, rhs) = p.sides().unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
        // the segments share the point (1/2, 1/2) up to rounding
        let [(_, b1), (_, b2)] = p.endpoints();
        assert!(b1.dist(Vec2::new(0.5, 0.5)) < 1e-15);
        assert!(b2.dist(Vec2::new(0.5, 0.5)) < 1e-15);
    }

    #[test]
    fn coincident_midpoints() {
        let p = SegmentPair { m1: Vec2::new(1.0, 1.0), m2: Vec2::new(1.0, 1.0), alpha1: 0.1, alpha2: 0.2, l: 1.0 };
        assert_eq!(lap_criterion(&p), Err(AnalysisError::CoincidentMidpoints));
    }
}
