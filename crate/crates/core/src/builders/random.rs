//! Seeded random polygons for property tests and experiments.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Vec2;

use super::PolygonSpec;

/// Random star-shaped polygon with `n ≥ 3` vertices around the origin: jittered
/// angles and radii in `[0.5, 1.5]`. Star-shapedness makes it simple.
pub fn star_polygon(n: usize, seed: u64) -> PolygonSpec {
    let n = n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts = (0..n)
        .map(|i| {
            let theta = (i as f64 + rng.gen_range(0.1..0.9)) * TAU / n as f64;
            Vec2::from_angle(theta) * rng.gen_range(0.5..1.5)
        })
        .collect();
    PolygonSpec::new(verts).expect("star polygons are simple")
}

/// Random axis-aligned histogram polygon: `columns` unit-width columns with integer
/// heights in `1..=max_height` standing on the x-axis. Equal neighbouring heights
/// are merged, so every vertex is a genuine corner.
pub fn rectilinear_polygon(columns: usize, max_height: u32, seed: u64) -> PolygonSpec {
    let columns = columns.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights: Vec<f64> = (0..columns).map(|_| f64::from(rng.gen_range(1..=max_height.max(1)))).collect();
    let w = columns as f64;
    let mut verts = vec![Vec2::new(0.0, 0.0), Vec2::new(w, 0.0)];
    // walk the top profile from right to left
    let mut x = w;
    let mut h = heights[columns - 1];
    verts.push(Vec2::new(x, h));
    for i in (0..columns).rev() {
        x = i as f64;
        let next = if i > 0 { heights[i - 1] } else { 0.0 };
        if next != h {
            verts.push(Vec2::new(x, h));
            if i > 0 {
                verts.push(Vec2::new(x, next));
            }
            h = next;
        }
    }
    PolygonSpec::new(verts).expect("histogram polygons are simple")
}

/// Random strictly acute triangle side lengths, scaled so the longest side is 1.
pub fn acute_triangle(seed: u64) -> (f64, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a: f64 = rng.gen_range(0.2..1.0);
        let b: f64 = rng.gen_range(0.2..1.0);
        let c = 1.0;
        if a * a + b * b > c * c * (1.0 + 1e-3) && a + b > c {
            return (a, b, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rectilinear_angles() {
        for seed in 0..20 {
            let p = rectilinear_polygon(6, 4, seed);
            for i in 0..p.len() {
                let a = p.interior_angle(i);
                assert!(
                    (a - PI / 2.0).abs() < 1e-12 || (a - 1.5 * PI).abs() < 1e-12,
                    "seed {seed} vertex {i} angle {a}"
                );
            }
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(star_polygon(7, 3), star_polygon(7, 3));
        assert_eq!(acute_triangle(5), acute_triangle(5));
    }
}
