//! Deterministic synthetic scenes for controlled overdraw experiments.
//!
//! Scenes are laid out for [`Camera::canonical`]: the camera sits at the
//! origin looking down +z, so a sheet at depth z must span roughly
//! +-0.5*z in x/y to fill the view.

use super::{Gaussian3D, Scene};
use crate::math::Vec3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Y00; DC coefficients in +-0.5/SH_C0 keep colors inside [0, 1].
const SH_C0: f32 = 0.282_094_79;

fn dc_for_rgb(r: f32, g: f32, b: f32) -> Vec3 {
    Vec3::new((r - 0.5) / SH_C0, (g - 0.5) / SH_C0, (b - 0.5) / SH_C0)
}

/// `layers` depth-separated sheets of Gaussians, each sheet a jittered grid
/// covering the canonical camera's view cross-section at its depth, so
/// per-pixel depth complexity is roughly `layers`.
pub fn synth_layered(layers: u32, splats_per_layer: u32, opacity: f32, seed: u64) -> Scene {
    assert!(layers >= 1, "layers must be >= 1");
    let opacity = opacity.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gaussians = Vec::with_capacity((layers * splats_per_layer) as usize);

    let z0 = 4.0f32;
    let dz = 20.0 / layers as f32;
    let grid = (splats_per_layer as f32).sqrt().ceil().max(1.0) as u32;

    for layer in 0..layers {
        let z = z0 + layer as f32 * dz;
        let extent = 0.62 * z;
        let spacing = 2.0 * extent / grid as f32;
        let sigma = 0.55 * spacing;
        // One color per sheet makes layer boundaries visible in renders.
        let color = dc_for_rgb(rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9), rng.gen_range(0.1..0.9));

        let mut placed = 0;
        'grid: for gy in 0..grid {
            for gx in 0..grid {
                if placed == splats_per_layer {
                    break 'grid;
                }
                let jx = rng.gen_range(-0.15..0.15) * spacing;
                let jy = rng.gen_range(-0.15..0.15) * spacing;
                let x = -extent + (gx as f32 + 0.5) * spacing + jx;
                let y = -extent + (gy as f32 + 0.5) * spacing + jy;
                gaussians.push(Gaussian3D {
                    position: Vec3::new(x, y, z),
                    scale: Vec3::new(sigma, sigma, 1e-3),
                    rotation: [1.0, 0.0, 0.0, 0.0],
                    opacity,
                    sh: vec![color],
                });
                placed += 1;
            }
        }
    }

    Scene::new(
        format!("layered-{layers}x{splats_per_layer}-s{seed}"),
        gaussians,
    )
}

/// `count` Gaussians with uniform positions in a cube of half-extent
/// `bounds`, log-uniform scales, uniform opacities and random orientation.
pub fn synth_random(count: u32, bounds: f32, seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = bounds.max(1e-3);
    let scale_lo = (0.004 * bounds).ln();
    let scale_hi = (0.04 * bounds).ln();
    let mut gaussians = Vec::with_capacity(count as usize);

    for _ in 0..count {
        let position = Vec3::new(
            rng.gen_range(-bounds..bounds),
            rng.gen_range(-bounds..bounds),
            rng.gen_range(-bounds..bounds),
        );
        let scale = Vec3::new(
            rng.gen_range(scale_lo..scale_hi).exp(),
            rng.gen_range(scale_lo..scale_hi).exp(),
            rng.gen_range(scale_lo..scale_hi).exp(),
        );
        // Uniform rotation: normalized 4-vector of normals (Marsaglia).
        let mut q = [0.0f32; 4];
        loop {
            let mut norm2 = 0.0;
            for c in &mut q {
                *c = rng.gen_range(-1.0..1.0f32);
                norm2 += *c * *c;
            }
            if norm2 > 1e-4 {
                let inv = 1.0 / norm2.sqrt();
                for c in &mut q {
                    *c *= inv;
                }
                break;
            }
        }
        let opacity = rng.gen_range(0.0..1.0f32);
        let color = dc_for_rgb(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..1.0),
        );
        gaussians.push(Gaussian3D {
            position,
            scale,
            rotation: q,
            opacity,
            sh: vec![color],
        });
    }

    Scene::new(format!("random-{count}-s{seed}"), gaussians)
}
