//! Front-to-back alpha compositing primitives.
//!
//! The oracle renderer and the pipeline simulator both evaluate fragments
//! through these functions, so a feature-off simulation reproduces the
//! oracle image bit for bit.

use crate::math::Vec2;
use crate::preprocess::Splat2D;

/// Premultiplied RGBA color: (a*r, a*g, a*b, a).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rgba {
    pub r: f32,
    pub g: f32,
    pub b: f32,
    pub a: f32,
}

impl Rgba {
    pub const ZERO: Rgba = Rgba {
        r: 0.0,
        g: 0.0,
        b: 0.0,
        a: 0.0,
    };

    pub const fn new(r: f32, g: f32, b: f32, a: f32) -> Self {
        Rgba { r, g, b, a }
    }
}

/// Gaussian alpha at a pixel center: o * exp(-1/2 d^T Sigma'^-1 d),
/// clamped to [0, alpha_clamp].
pub fn eval_alpha(splat: &Splat2D, pixel_center: Vec2, alpha_clamp: f32) -> f32 {
    let d = pixel_center - splat.mean2d;
    let power = -0.5 * splat.inv_cov2d.quad_form(d);
    if power > 0.0 {
        // Numerical noise outside the valid domain; never amplify opacity.
        return splat.opacity.min(alpha_clamp);
    }
    (splat.opacity * power.exp()).min(alpha_clamp).max(0.0)
}

/// Premultiplied source color for a fragment: (a*r, a*g, a*b, a).
pub fn premultiply(rgb: [f32; 3], alpha: f32) -> Rgba {
    Rgba::new(alpha * rgb[0], alpha * rgb[1], alpha * rgb[2], alpha)
}

/// One front-to-back blend: dst + (1 - dst.a) * src on all four channels.
/// dst holds the already-composited front fragments, src is behind them.
pub fn blend_step(dst: Rgba, src: Rgba) -> Rgba {
    let t = 1.0 - dst.a;
    Rgba::new(
        dst.r + t * src.r,
        dst.g + t * src.g,
        dst.b + t * src.b,
        dst.a + t * src.a,
    )
}

/// Double-precision variant for associativity property tests.
pub fn blend_step_f64(dst: [f64; 4], src: [f64; 4]) -> [f64; 4] {
    let t = 1.0 - dst[3];
    [
        dst[0] + t * src[0],
        dst[1] + t * src[1],
        dst[2] + t * src[2],
        dst[3] + t * src[3],
    ]
}
