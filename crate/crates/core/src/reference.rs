//! Exact per-pixel software oracle: front-to-back compositing over the
//! depth-sorted splat list, with alpha pruning and optional ideal early
//! termination. Ground truth for the pipeline simulator.

use crate::compositing::{blend_step, eval_alpha, premultiply, Rgba};
use crate::error::{Error, Result};
use crate::preprocess::SplatPrimitiveSet;
use crate::raster::TriangleSetup;
use crate::scene::Camera;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Fragments below this alpha are shaded but excluded from blending.
    pub prune_epsilon: f32,
    pub et_enabled: bool,
    /// Accumulated-alpha threshold at which a pixel stops accepting work.
    pub et_threshold: f32,
    /// Upper clamp applied to per-fragment alpha (1.0 disables).
    pub alpha_clamp: f32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            prune_epsilon: 1.0 / 255.0,
            et_enabled: false,
            et_threshold: 0.996,
            alpha_clamp: 0.99,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.prune_epsilon
            && self.prune_epsilon < self.et_threshold
            && self.et_threshold <= 1.0)
        {
            return Err(Error::InvalidConfig(format!(
                "need 0 <= prune_epsilon < et_threshold <= 1, got {} and {}",
                self.prune_epsilon, self.et_threshold
            )));
        }
        if !(0.0 < self.alpha_clamp && self.alpha_clamp <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha_clamp {} outside (0, 1]",
                self.alpha_clamp
            )));
        }
        Ok(())
    }
}

/// Rendered frame plus per-pixel fragment counters.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub width: u32,
    pub height: u32,
    /// Premultiplied RGB + accumulated alpha.
    pub color: Vec<Rgba>,
    pub stencil: Vec<u8>,
    pub shaded_count: Vec<u32>,
    pub blended_count: Vec<u32>,
    pub dropped_pruned: u64,
    pub dropped_terminated: u64,
}

impl FrameOutput {
    pub fn new(width: u32, height: u32) -> Self {
        let n = (width as usize) * (height as usize);
        FrameOutput {
            width,
            height,
            color: vec![Rgba::ZERO; n],
            stencil: vec![0; n],
            shaded_count: vec![0; n],
            blended_count: vec![0; n],
            dropped_pruned: 0,
            dropped_terminated: 0,
        }
    }

    #[inline]
    pub fn idx(&self, x: u32, y: u32) -> usize {
        (y as usize) * (self.width as usize) + (x as usize)
    }

    pub fn total_blended(&self) -> u64 {
        self.blended_count.iter().map(|&c| c as u64).sum()
    }

    pub fn total_shaded(&self) -> u64 {
        self.shaded_count.iter().map(|&c| c as u64).sum()
    }
}

/// Front-to-back composite of the sorted splat list at every covered pixel.
pub fn render_reference(
    primitives: &SplatPrimitiveSet,
    camera: &Camera,
    options: &RenderOptions,
) -> Result<FrameOutput> {
    options.validate()?;
    camera.validate()?;
    for (i, pair) in primitives.splats.windows(2).enumerate() {
        if pair[0].depth > pair[1].depth {
            return Err(Error::UnsortedInput(i + 1));
        }
    }

    let mut frame = FrameOutput::new(camera.width, camera.height);
    for (splat, tris) in primitives.splats.iter().zip(&primitives.triangles) {
        for tri in tris {
            let Some(setup) = TriangleSetup::new(tri) else {
                continue;
            };
            let Some((x0, y0, x1, y1)) = setup.pixel_bounds(camera.width, camera.height) else {
                continue;
            };
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let (px, py) = (x as f32 + 0.5, y as f32 + 0.5);
                    if !setup.covers(px, py) {
                        continue;
                    }
                    let i = frame.idx(x, y);
                    if options.et_enabled && frame.color[i].a >= options.et_threshold {
                        frame.dropped_terminated += 1;
                        continue;
                    }
                    frame.shaded_count[i] += 1;
                    let alpha =
                        eval_alpha(splat, crate::math::Vec2::new(px, py), options.alpha_clamp);
                    if alpha < options.prune_epsilon {
                        frame.dropped_pruned += 1;
                        continue;
                    }
                    frame.color[i] = blend_step(frame.color[i], premultiply(splat.rgb, alpha));
                    frame.blended_count[i] += 1;
                }
            }
        }
    }
    Ok(frame)
}

/// Ratio of blended fragments without early termination to blended
/// fragments with it; 1.0 when both totals are zero.
pub fn et_reduction_ratio(frame_no_et: &FrameOutput, frame_et: &FrameOutput) -> Result<f64> {
    if (frame_no_et.width, frame_no_et.height) != (frame_et.width, frame_et.height) {
        return Err(Error::ResolutionMismatch(
            frame_no_et.width,
            frame_no_et.height,
            frame_et.width,
            frame_et.height,
        ));
    }
    let num = frame_no_et.total_blended();
    let den = frame_et.total_blended();
    if den == 0 {
        return Ok(if num == 0 { 1.0 } else { f64::INFINITY });
    }
    Ok(num as f64 / den as f64)
}
