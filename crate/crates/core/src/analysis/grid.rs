//! Uniform bucket grid over a rectangle, with segments registered in every cell
//! they pass through.

use crate::geometry::Vec2;

pub(crate) struct SegmentGrid {
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl SegmentGrid {
    /// Grid covering `[lo, hi]` with square cells of side about `cell` (at most
    /// `max_cells` per axis).
    pub fn new(lo: Vec2, hi: Vec2, cell: f64, max_cells: usize) -> Self {
        let w = (hi.x - lo.x).max(0.0);
        let h = (hi.y - lo.y).max(0.0);
        let mut cell = cell.max(f64::MIN_POSITIVE);
        let span = w.max(h);
        if span / cell > max_cells as f64 {
            cell = span / max_cells as f64;
        }
        let nx = ((w / cell).floor() as usize + 1).max(1);
        let ny = ((h / cell).floor() as usize + 1).max(1);
        SegmentGrid { origin: lo, cell, nx, ny, buckets: vec![Vec::new(); nx * ny] }
    }

    /// Cell coordinates of `p`, clamped into the grid.
    pub fn cell_of(&self, p: Vec2) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.cell).floor();
        let fy = ((p.y - self.origin.y) / self.cell).floor();
        let cx = if fx.is_finite() { fx.clamp(0.0, (self.nx - 1) as f64) as usize } else { 0 };
        let cy = if fy.is_finite() { fy.clamp(0.0, (self.ny - 1) as f64) as usize } else { 0 };
        (cx, cy)
    }

    pub fn bucket(&self, cx: usize, cy: usize) -> &[u32] {
        &self.buckets[cy * self.nx + cx]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn buckets(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.buckets.iter()
    }

    /// Register `id` in every cell crossed by segment `ab` (grid traversal), plus
    /// the 4-neighbours of each traversed cell when the segment passes near a
    /// cell corner, so that rounding never drops a cell.
    pub fn insert_segment(&mut self, id: u32, a: Vec2, b: Vec2) {
        let (mut cx, mut cy) = self.cell_of(a);
        let (ex, ey) = self.cell_of(b);
        let d = b - a;
        let step_x: i64 = if d.x > 0.0 { 1 } else { -1 };
        let step_y: i64 = if d.y > 0.0 { 1 } else { -1 };
        let next_boundary = |c: usize, step: i64, o: f64| {
            let k = if step > 0 { c as f64 + 1.0 } else { c as f64 };
            o + k * self.cell
        };
        let mut t_max_x =
            if d.x != 0.0 { (next_boundary(cx, step_x, self.origin.x) - a.x) / d.x } else { f64::INFINITY };
        let mut t_max_y =
            if d.y != 0.0 { (next_boundary(cy, step_y, self.origin.y) - a.y) / d.y } else { f64::INFINITY };
        let dt_x = if d.x != 0.0 { self.cell / d.x.abs() } else { f64::INFINITY };
        let dt_y = if d.y != 0.0 { self.cell / d.y.abs() } else { f64::INFINITY };
        let limit = self.nx + self.ny + 4;
        for _ in 0..limit {
            self.push(cx, cy, id);
            if (cx, cy) == (ex, ey) {
                break;
            }
            // near-simultaneous crossings: cover both candidate cells
            if (t_max_x - t_max_y).abs() <= 1e-12 * (1.0 + t_max_x.abs()) {
                self.push_offset(cx, cy, step_x, 0, id);
                self.push_offset(cx, cy, 0, step_y, id);
            }
            if t_max_x < t_max_y {
                if !self.advance(&mut cx, step_x, self.nx) {
                    break;
                }
                t_max_x += dt_x;
            } else {
                if !self.advance(&mut cy, step_y, self.ny) {
                    break;
                }
                t_max_y += dt_y;
            }
        }
        self.push(ex, ey, id);
    }

    fn advance(&self, c: &mut usize, step: i64, n: usize) -> bool {
        let next = *c as i64 + step;
        if next < 0 || next >= n as i64 {
            return false;
        }
        *c = next as usize;
        true
    }

    fn push_offset(&mut self, cx: usize, cy: usize, dx: i64, dy: i64, id: u32) {
        let x = cx as i64 + dx;
        let y = cy as i64 + dy;
        if x >= 0 && y >= 0 && (x as usize) < self.nx && (y as usize) < self.ny {
            self.push(x as usize, y as usize, id);
        }
    }

    fn push(&mut self, cx: usize, cy: usize, id: u32) {
        let b = &mut self.buckets[cy * self.nx + cx];
        // all pushes of one id happen within a single insertion, so the last entry suffices
        if b.last() != Some(&id) {
            b.push(id);
        }
    }
}
