//! Edge-function triangle coverage with the top-left fill rule.
//!
//! The pipeline rasterizer and the reference renderer decide pixel coverage
//! through this one implementation, so a pixel on a shared OBB diagonal is
//! claimed by exactly one of the two triangles in both renderers.

use crate::math::Vec2;

/// Edge equations of a triangle, normalized to positive signed area in
/// screen coordinates (y down). Interior is E >= 0 on all three edges,
/// with E == 0 accepted only on top or left edges.
#[derive(Debug, Clone)]
pub struct TriangleSetup {
    /// E_i(p) = a*px + b*py + c, evaluated in f64.
    edges: [(f64, f64, f64); 3],
    top_left: [bool; 3],
    pub min: Vec2,
    pub max: Vec2,
}

impl TriangleSetup {
    /// None for degenerate (zero-area) triangles.
    pub fn new(tri: &[Vec2; 3]) -> Option<TriangleSetup> {
        let v: Vec<(f64, f64)> = tri.iter().map(|p| (p.x as f64, p.y as f64)).collect();
        let area = (v[1].0 - v[0].0) * (v[2].1 - v[0].1) - (v[1].1 - v[0].1) * (v[2].0 - v[0].0);
        if area == 0.0 {
            return None;
        }
        // Normalize winding so the interior is the positive side.
        let order: [usize; 3] = if area > 0.0 { [0, 1, 2] } else { [0, 2, 1] };

        let mut edges = [(0.0, 0.0, 0.0); 3];
        let mut top_left = [false; 3];
        for i in 0..3 {
            let a = v[order[i]];
            let b = v[order[(i + 1) % 3]];
            let ex = b.0 - a.0;
            let ey = b.1 - a.1;
            // E(p) = ex*(py - ay) - ey*(px - ax)
            edges[i] = (-ey, ex, ey * a.0 - ex * a.1);
            // Top edge: horizontal with interior below (y down); left edge:
            // walks upward.
            top_left[i] = if ey == 0.0 { ex > 0.0 } else { ey < 0.0 };
        }

        let min = Vec2::new(
            tri[0].x.min(tri[1].x).min(tri[2].x),
            tri[0].y.min(tri[1].y).min(tri[2].y),
        );
        let max = Vec2::new(
            tri[0].x.max(tri[1].x).max(tri[2].x),
            tri[0].y.max(tri[1].y).max(tri[2].y),
        );
        Some(TriangleSetup {
            edges,
            top_left,
            min,
            max,
        })
    }

    /// Coverage test at an arbitrary point (use pixel centers x+0.5, y+0.5).
    pub fn covers(&self, px: f32, py: f32) -> bool {
        let (px, py) = (px as f64, py as f64);
        for (i, &(a, b, c)) in self.edges.iter().enumerate() {
            let e = a * px + b * py + c;
            if e < 0.0 || (e == 0.0 && !self.top_left[i]) {
                return false;
            }
        }
        true
    }

    /// Pixel-index AABB clipped to a viewport, inclusive bounds;
    /// None when empty.
    pub fn pixel_bounds(&self, width: u32, height: u32) -> Option<(u32, u32, u32, u32)> {
        let x0 = self.min.x.floor().max(0.0) as i64;
        let y0 = self.min.y.floor().max(0.0) as i64;
        let x1 = (self.max.x.ceil() as i64).min(width as i64) - 1;
        let y1 = (self.max.y.ceil() as i64).min(height as i64) - 1;
        if x1 < x0 || y1 < y0 || x0 >= width as i64 || y0 >= height as i64 {
            return None;
        }
        Some((x0 as u32, y0 as u32, x1 as u32, y1 as u32))
    }
}
