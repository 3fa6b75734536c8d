//! Quotients of the unit square by pairwise identifications of boundary arcs.

use std::collections::HashMap;

use crate::geometry::Vec2;
use crate::surface::{EdgeRef, FlatSurface, Gluing, Triangle};
use crate::DEFAULT_TOLERANCE;

use super::BuilderError;

/// Identification of two boundary arcs of the unit square.
///
/// Boundary positions are arc lengths `s ∈ [0, 4]` measured counterclockwise from
/// the origin: `[0,1]` bottom, `[1,2]` right, `[2,3]` top, `[3,4]` left. An arc
/// `(s0, s1)` runs from `s0` to `s1` and may run clockwise (`s1 < s0`); the point at
/// fraction `λ` of `first` is glued to the point at fraction `λ` of `second`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPairing {
    pub first: (f64, f64),
    pub second: (f64, f64),
}

impl ArcPairing {
    pub fn new(first: (f64, f64), second: (f64, f64)) -> Self {
        ArcPairing { first, second }
    }

    /// Opposite sides glued by translations.
    pub fn torus() -> Vec<ArcPairing> {
        vec![ArcPairing::new((0.0, 1.0), (3.0, 2.0)), ArcPairing::new((1.0, 2.0), (4.0, 3.0))]
    }

    /// Left and right glued by a translation, bottom and top by a flip.
    pub fn klein_bottle() -> Vec<ArcPairing> {
        vec![ArcPairing::new((0.0, 1.0), (2.0, 3.0)), ArcPairing::new((1.0, 2.0), (4.0, 3.0))]
    }
}

/// Point of the square boundary at arc length `s` (taken modulo 4).
pub fn square_boundary_point(s: f64) -> Vec2 {
    let s = s.rem_euclid(4.0);
    match s {
        s if s <= 1.0 => Vec2::new(s, 0.0),
        s if s <= 2.0 => Vec2::new(1.0, s - 1.0),
        s if s <= 3.0 => Vec2::new(3.0 - s, 1.0),
        s => Vec2::new(0.0, 4.0 - s),
    }
}

fn lo_hi(arc: (f64, f64)) -> (f64, f64) {
    (arc.0.min(arc.1), arc.0.max(arc.1))
}

/// Map position `s` on arc `from` to the corresponding position on arc `to`.
fn transfer(s: f64, from: (f64, f64), to: (f64, f64)) -> f64 {
    let lambda = (s - from.0) / (from.1 - from.0);
    to.0 + lambda * (to.1 - to.0)
}

/// Quotient of `[0,1]²` by the given arc identifications.
///
/// The arcs must tile the boundary exactly once. Breakpoints (square corners, arc
/// ends and all their images under the identifications) become polygon vertices;
/// the refined square is ear-clipped and its boundary pieces glued in pairs.
pub fn square_identification_surface(pairings: &[ArcPairing]) -> Result<FlatSurface, BuilderError> {
    let eps = 1e-12;
    let mut arcs: Vec<((f64, f64), usize, bool)> = Vec::new();
    for (i, p) in pairings.iter().enumerate() {
        let l1 = (p.first.1 - p.first.0).abs();
        let l2 = (p.second.1 - p.second.0).abs();
        if (l1 - l2).abs() > DEFAULT_TOLERANCE {
            return Err(BuilderError::ArcLengthMismatch(l1, l2));
        }
        for (arc, is_first) in [(p.first, true), (p.second, false)] {
            if !(arc.0.is_finite() && arc.1.is_finite()) || (arc.1 - arc.0).abs() <= eps {
                return Err(BuilderError::UncoveredBoundary);
            }
            arcs.push((arc, i, is_first));
        }
    }
    let mut spans: Vec<(f64, f64)> = arcs.iter().map(|(a, _, _)| lo_hi(*a)).collect();
    spans.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cursor = 0.0;
    for (lo, hi) in &spans {
        if (lo - cursor).abs() > eps {
            return Err(BuilderError::UncoveredBoundary);
        }
        cursor = *hi;
    }
    if spans.is_empty() || (cursor - 4.0).abs() > eps {
        return Err(BuilderError::UncoveredBoundary);
    }

    // close the breakpoint set under the identifications
    let mut breaks: Vec<f64> = vec![0.0, 1.0, 2.0, 3.0];
    for (a, _, _) in &arcs {
        breaks.push(a.0.rem_euclid(4.0));
        breaks.push(a.1.rem_euclid(4.0));
    }
    let partner = |k: usize| -> usize {
        let (_, i, first) = arcs[k];
        arcs.iter().position(|&(_, j, f)| j == i && f != first).expect("every arc has a partner")
    };
    for _ in 0..64 {
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() <= eps);
        if breaks.len() > 4096 {
            return Err(BuilderError::UncoveredBoundary);
        }
        let mut added = false;
        let snapshot = breaks.clone();
        for &s in &snapshot {
            for (k, (arc, _, _)) in arcs.iter().enumerate() {
                let (lo, hi) = lo_hi(*arc);
                if s > lo + eps && s < hi - eps {
                    let image = transfer(s, *arc, arcs[partner(k)].0);
                    if !breaks.iter().any(|b| (b - image).abs() <= eps) {
                        breaks.push(image);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= eps);

    let points: Vec<Vec2> = breaks.iter().map(|&s| square_boundary_point(s)).collect();
    let tris = super::ear_clip(&points)?;
    let m = points.len();
    let position = |s: f64| -> usize {
        let s = if (s - 4.0).abs() <= eps { 0.0 } else { s };
        breaks.iter().position(|b| (b - s).abs() <= 1e-9).expect("image breakpoint present")
    };

    // boundary piece j runs from breaks[j] to breaks[j+1]
    let mut piece_edge: HashMap<usize, EdgeRef> = HashMap::new();
    let mut open: HashMap<(usize, usize), EdgeRef> = HashMap::new();
    let mut gluings = Vec::new();
    for (t, tri) in tris.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (tri[e], tri[(e + 1) % 3]);
            let er = EdgeRef::new(t, e);
            if b == (a + 1) % m {
                piece_edge.insert(a, er);
            } else {
                match open.remove(&(a.min(b), a.max(b))) {
                    Some(other) => gluings.push(Gluing::new(other, er, false)),
                    None => {
                        open.insert((a.min(b), a.max(b)), er);
                    }
                }
            }
        }
    }
    debug_assert!(open.is_empty());
    let mut done = vec![false; m];
    for j in 0..m {
        if done[j] {
            continue;
        }
        let s0 = breaks[j];
        let s1 = if j + 1 < m { breaks[j + 1] } else { 4.0 };
        let mid = 0.5 * (s0 + s1);
        let k = arcs
            .iter()
            .position(|(arc, _, _)| {
                let (lo, hi) = lo_hi(*arc);
                mid > lo && mid < hi
            })
            .ok_or(BuilderError::UncoveredBoundary)?;
        let other = arcs[partner(k)].0;
        let i0 = transfer(s0, arcs[k].0, other);
        let i1 = transfer(s1, arcs[k].0, other);
        let (a, b) = (position(i0), position(i1));
        // the image piece is the one between a and b
        let (jj, increasing) = if (a + 1) % m == b {
            (a, true)
        } else if (b + 1) % m == a {
            (b, false)
        } else {
            return Err(BuilderError::UncoveredBoundary);
        };
        if jj == j {
            return Err(BuilderError::UncoveredBoundary);
        }
        done[j] = true;
        done[jj] = true;
        gluings.push(Gluing::new(piece_edge[&j], piece_edge[&jj], increasing));
    }

    let triangles = tris.iter().enumerate().map(|(i, t)| Triangle::new(i, t.map(|k| points[k]))).collect();
    Ok(FlatSurface::build(triangles, gluings, DEFAULT_TOLERANCE)?)
}

/// Candidate identifications for a unit square with three arc pairs: the bottom
/// split at `a` into `A = [0, a]` and `B = [a, 1]`, the top split at abscissa
/// `1 − a` or `a`, and the vertical sides paired as `C`; each pair is glued either
/// way round. Sixteen layouts in all.
pub fn three_pair_candidates(a: f64) -> Vec<Vec<ArcPairing>> {
    let mut out = Vec::new();
    for top_split in [2.0 + a, 3.0 - a] {
        // top pieces as increasing-s intervals, with their lengths
        let t1 = (2.0, top_split);
        let t2 = (top_split, 3.0);
        let (ta, tb) = if ((t1.1 - t1.0) - a).abs() < 1e-12 { (t1, t2) } else { (t2, t1) };
        for flags in 0..8u8 {
            let orient = |arc: (f64, f64), flip: bool| if flip { (arc.1, arc.0) } else { arc };
            out.push(vec![
                ArcPairing::new((0.0, a), orient(ta, flags & 1 == 0)),
                ArcPairing::new((a, 1.0), orient(tb, flags & 2 == 0)),
                ArcPairing::new((1.0, 2.0), orient((3.0, 4.0), flags & 4 == 0)),
            ]);
        }
    }
    out
}

/// First candidate from [`three_pair_candidates`] giving a non-orientable surface
/// of Euler characteristic −1 with a single vertex of curvature −2π.
pub fn three_pair_surface(a: f64) -> Result<(FlatSurface, Vec<ArcPairing>), BuilderError> {
    let mut last_err = BuilderError::UncoveredBoundary;
    for cand in three_pair_candidates(a) {
        match square_identification_surface(&cand) {
            Ok(s) => {
                let w = s.curvature_multiset();
                let single = s.vertices().len() == 1 && w.len() == 1 && (w[0] + std::f64::consts::TAU).abs() < 1e-9;
                if s.euler_characteristic() == -1 && !s.is_orientable() && single {
                    return Ok((s, cand));
                }
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}
