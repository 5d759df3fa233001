//! Per-viewpoint CPU steps that precede a draw call: frustum culling,
//! covariance projection, SH color evaluation, global depth sort, and
//! tight oriented-bounding-box triangle generation.

use crate::error::{Error, Result};
use crate::math::{Mat3, Sym2, Vec2, Vec3};
use crate::scene::{Camera, Gaussian3D, Scene};

/// Alpha level defining the splat boundary: the OBB encloses the region
/// where the Gaussian's alpha still reaches 1/255.
pub const BOUNDARY_ALPHA: f32 = 1.0 / 255.0;

const SH_C0: f32 = 0.282_094_791_773_878_14;
const SH_C1: f32 = 0.488_602_511_902_919_9;
const SH_C2: [f32; 5] = [
    1.092_548_430_592_079_2,
    -1.092_548_430_592_079_2,
    0.315_391_565_252_520_05,
    -1.092_548_430_592_079_2,
    0.546_274_215_296_039_6,
];
const SH_C3: [f32; 7] = [
    -0.590_043_589_926_643_5,
    2.890_611_442_640_554,
    -0.457_045_799_464_465_8,
    0.373_176_332_590_115_4,
    -0.457_045_799_464_465_8,
    1.445_305_721_320_277,
    -0.590_043_589_926_643_5,
];

/// Screen-space projection of a Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct Splat2D {
    /// Projected center in pixels.
    pub mean2d: Vec2,
    /// Inverse of the 2D covariance (pixel^-2).
    pub inv_cov2d: Sym2,
    /// Camera-space z of the Gaussian center.
    pub depth: f32,
    pub rgb: [f32; 3],
    pub opacity: f32,
    /// Semi-axes of the 1/255-alpha boundary ellipse.
    pub axes: [Vec2; 2],
    /// Index into the source scene.
    pub source_id: u32,
}

/// Depth-sorted splats plus their OBB triangles; `triangles[i]` carries the
/// two triangles bounding `splats[i]`.
#[derive(Debug, Clone, Default)]
pub struct SplatPrimitiveSet {
    pub splats: Vec<Splat2D>,
    pub triangles: Vec<[[Vec2; 3]; 2]>,
}

impl SplatPrimitiveSet {
    pub fn len(&self) -> usize {
        self.splats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splats.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PreprocessStats {
    /// Center depth outside (znear, zfar) or boundary AABB off-screen.
    pub culled: u32,
    /// Opacity below 1/255; no boundary ellipse exists.
    pub dropped_low_alpha: u32,
    /// 2D covariance not invertible.
    pub dropped_degenerate: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct PreprocessOptions {
    /// Diagonal low-pass added to the projected covariance, in pixel^2.
    pub low_pass: f32,
    /// Cap on the SH degree evaluated at render time (None = stored degree).
    pub sh_degree_override: Option<usize>,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions {
            low_pass: 0.3,
            sh_degree_override: None,
        }
    }
}

/// 3D covariance from the scale/rotation factorization: R S S^T R^T.
pub fn compute_cov3d(scale: Vec3, rotation: [f32; 4]) -> Mat3 {
    let [w, x, y, z] = rotation;
    let r = Mat3::from_quaternion(w, x, y, z);
    let mut m = r;
    for (i, row) in m.m.iter_mut().enumerate() {
        row[0] = r.m[i][0] * scale.x;
        row[1] = r.m[i][1] * scale.y;
        row[2] = r.m[i][2] * scale.z;
    }
    m * m.transpose()
}

/// Real SH basis evaluated up to `degree`, plus the 0.5 offset, clamped at 0.
pub fn eval_color(sh: &[Vec3], view_direction: Vec3, degree_cap: Option<usize>) -> [f32; 3] {
    let stored_degree = match sh.len() {
        1 => 0,
        4 => 1,
        9 => 2,
        16 => 3,
        n => panic!("invalid sh length {n}"),
    };
    let degree = degree_cap.map_or(stored_degree, |cap| cap.min(stored_degree));
    let d = view_direction;
    let mut c = sh[0] * SH_C0;
    if degree >= 1 {
        c = c + sh[1] * (-SH_C1 * d.y) + sh[2] * (SH_C1 * d.z) + sh[3] * (-SH_C1 * d.x);
    }
    if degree >= 2 {
        let (xx, yy, zz) = (d.x * d.x, d.y * d.y, d.z * d.z);
        let (xy, yz, xz) = (d.x * d.y, d.y * d.z, d.x * d.z);
        c = c
            + sh[4] * (SH_C2[0] * xy)
            + sh[5] * (SH_C2[1] * yz)
            + sh[6] * (SH_C2[2] * (2.0 * zz - xx - yy))
            + sh[7] * (SH_C2[3] * xz)
            + sh[8] * (SH_C2[4] * (xx - yy));
        if degree >= 3 {
            c = c
                + sh[9] * (SH_C3[0] * d.y * (3.0 * xx - yy))
                + sh[10] * (SH_C3[1] * xy * d.z)
                + sh[11] * (SH_C3[2] * d.y * (4.0 * zz - xx - yy))
                + sh[12] * (SH_C3[3] * d.z * (2.0 * zz - 3.0 * xx - 3.0 * yy))
                + sh[13] * (SH_C3[4] * d.x * (4.0 * zz - xx - yy))
                + sh[14] * (SH_C3[5] * d.z * (xx - yy))
                + sh[15] * (SH_C3[6] * d.x * (xx - 3.0 * yy));
        }
    }
    [
        (c.x + 0.5).max(0.0),
        (c.y + 0.5).max(0.0),
        (c.z + 0.5).max(0.0),
    ]
}

/// Mahalanobis radius of the 1/255-alpha boundary: alpha(r) = o e^{-r^2/2}
/// crosses 1/255 at r = sqrt(2 ln(255 o)). None when o <= 1/255.
pub fn boundary_radius(opacity: f32) -> Option<f32> {
    let scaled = 255.0 * opacity;
    if scaled <= 1.0 {
        return None;
    }
    Some((2.0 * scaled.ln()).sqrt())
}

/// EWA projection of one Gaussian. `None` means the 2D covariance was not
/// invertible and the splat must be dropped (counted by the caller).
pub fn project_to_splat(
    gaussian: &Gaussian3D,
    camera: &Camera,
    opts: &PreprocessOptions,
    source_id: u32,
) -> Option<Splat2D> {
    let t = camera.view.transform_point(gaussian.position);
    let (cx, cy) = camera.principal_point();

    // Clamp the off-axis ratios like the reference EWA implementation so the
    // affine Jacobian stays bounded at the frustum edge.
    let lim_x = 1.3 * (camera.width as f32 * 0.5) / camera.fx;
    let lim_y = 1.3 * (camera.height as f32 * 0.5) / camera.fy;
    let txz = (t.x / t.z).clamp(-lim_x, lim_x);
    let tyz = (t.y / t.z).clamp(-lim_y, lim_y);

    let cov3d = compute_cov3d(gaussian.scale, gaussian.rotation);
    let w = camera.view.rotation();
    // T = J * W, with J the 2x3 affine Jacobian of the projection.
    let j = [
        [camera.fx / t.z, 0.0, -camera.fx * txz / t.z],
        [0.0, camera.fy / t.z, -camera.fy * tyz / t.z],
    ];
    let mut tj = [[0.0f32; 3]; 2];
    for (r, j_row) in j.iter().enumerate() {
        for c in 0..3 {
            tj[r][c] = (0..3).map(|k| j_row[k] * w.m[k][c]).sum();
        }
    }
    // cov2d = T cov3d T^T
    let mut tc = [[0.0f32; 3]; 2];
    for (r, tj_row) in tj.iter().enumerate() {
        for c in 0..3 {
            tc[r][c] = (0..3).map(|k| tj_row[k] * cov3d.m[k][c]).sum();
        }
    }
    let dot = |a: &[f32; 3], b: &[f32; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut cov2d = Sym2::new(dot(&tc[0], &tj[0]), dot(&tc[0], &tj[1]), dot(&tc[1], &tj[1]));
    cov2d.a += opts.low_pass;
    cov2d.c += opts.low_pass;

    let inv_cov2d = cov2d.inverse()?;

    let mean2d = Vec2::new(
        camera.fx * t.x / t.z + cx,
        camera.fy * t.y / t.z + cy,
    );

    let axes = match boundary_radius(gaussian.opacity) {
        Some(r) => {
            let ((l1, e1), (l2, e2)) = cov2d.eigen();
            [e1 * (r * l1.max(0.0).sqrt()), e2 * (r * l2.max(0.0).sqrt())]
        }
        None => [Vec2::new(0.0, 0.0), Vec2::new(0.0, 0.0)],
    };

    let view_dir = (gaussian.position - camera.position()).normalized();
    let rgb = eval_color(&gaussian.sh, view_dir, opts.sh_degree_override);

    Some(Splat2D {
        mean2d,
        inv_cov2d,
        depth: t.z,
        rgb,
        opacity: gaussian.opacity,
        axes,
        source_id,
    })
}

/// Screen-space AABB of the boundary ellipse: half-extents are
/// r * sqrt(Sigma'_xx) and r * sqrt(Sigma'_yy).
fn boundary_aabb(mean2d: Vec2, cov2d_diag: (f32, f32), r: f32) -> (Vec2, Vec2) {
    let hx = r * cov2d_diag.0.max(0.0).sqrt();
    let hy = r * cov2d_diag.1.max(0.0).sqrt();
    (
        Vec2::new(mean2d.x - hx, mean2d.y - hy),
        Vec2::new(mean2d.x + hx, mean2d.y + hy),
    )
}

/// Indices of Gaussians that survive view-frustum culling: center depth in
/// (znear, zfar) and the 1/255-boundary ellipse AABB overlapping the image.
pub fn frustum_cull(scene: &Scene, camera: &Camera) -> Vec<u32> {
    let opts = PreprocessOptions::default();
    let mut survivors = Vec::new();
    for (i, g) in scene.gaussians.iter().enumerate() {
        let t = camera.view.transform_point(g.position);
        if !(t.z > camera.znear && t.z < camera.zfar) {
            continue;
        }
        let Some(r) = boundary_radius(g.opacity) else {
            continue;
        };
        let Some(splat) = project_to_splat(g, camera, &opts, i as u32) else {
            // Degenerate covariance: keep; the projection pass counts it.
            survivors.push(i as u32);
            continue;
        };
        // Recover the covariance diagonal from the stored axes:
        // Sigma'_xx = sum_i axis_i.x^2 / r^2 (axes are r sqrt(l) e).
        let sxx = (splat.axes[0].x * splat.axes[0].x + splat.axes[1].x * splat.axes[1].x) / (r * r);
        let syy = (splat.axes[0].y * splat.axes[0].y + splat.axes[1].y * splat.axes[1].y) / (r * r);
        let (lo, hi) = boundary_aabb(splat.mean2d, (sxx, syy), r);
        if hi.x >= 0.0 && lo.x <= camera.width as f32 && hi.y >= 0.0 && lo.y <= camera.height as f32
        {
            survivors.push(i as u32);
        }
    }
    survivors
}

/// Stable ascending sort by depth; returns the permutation (indices into the
/// input). NaN depths are an error.
pub fn depth_sort(depths: &[f32]) -> Result<Vec<u32>> {
    for (i, d) in depths.iter().enumerate() {
        if d.is_nan() {
            return Err(Error::NanDepth(i));
        }
    }
    let mut perm: Vec<u32> = (0..depths.len() as u32).collect();
    perm.sort_by(|&a, &b| {
        depths[a as usize]
            .partial_cmp(&depths[b as usize])
            .expect("NaN checked above")
    });
    Ok(perm)
}

/// The two triangles of the splat's oriented bounding box, or None when the
/// opacity never reaches 1/255.
pub fn build_obb(splat: &Splat2D) -> Option<[[Vec2; 3]; 2]> {
    boundary_radius(splat.opacity)?;
    let m = splat.mean2d;
    let (a1, a2) = (splat.axes[0], splat.axes[1]);
    let c0 = m - a1 - a2;
    let c1 = m + a1 - a2;
    let c2 = m - a1 + a2;
    let c3 = m + a1 + a2;
    Some([[c0, c1, c2], [c2, c1, c3]])
}

/// Full preprocessing pass: cull, project, sort by depth, build OBBs.
pub fn preprocess(
    scene: &Scene,
    camera: &Camera,
    opts: &PreprocessOptions,
) -> Result<(SplatPrimitiveSet, PreprocessStats)> {
    camera.validate()?;
    let mut stats = PreprocessStats::default();
    let mut splats = Vec::new();

    for (i, g) in scene.gaussians.iter().enumerate() {
        let t = camera.view.transform_point(g.position);
        if !(t.z > camera.znear && t.z < camera.zfar) {
            stats.culled += 1;
            continue;
        }
        let Some(r) = boundary_radius(g.opacity) else {
            stats.dropped_low_alpha += 1;
            continue;
        };
        let Some(splat) = project_to_splat(g, camera, opts, i as u32) else {
            stats.dropped_degenerate += 1;
            continue;
        };
        let sxx = (splat.axes[0].x * splat.axes[0].x + splat.axes[1].x * splat.axes[1].x) / (r * r);
        let syy = (splat.axes[0].y * splat.axes[0].y + splat.axes[1].y * splat.axes[1].y) / (r * r);
        let (lo, hi) = boundary_aabb(splat.mean2d, (sxx, syy), r);
        if !(hi.x >= 0.0
            && lo.x <= camera.width as f32
            && hi.y >= 0.0
            && lo.y <= camera.height as f32)
        {
            stats.culled += 1;
            continue;
        }
        splats.push(splat);
    }

    let depths: Vec<f32> = splats.iter().map(|s| s.depth).collect();
    let perm = depth_sort(&depths)?;
    let sorted: Vec<Splat2D> = perm.iter().map(|&i| splats[i as usize].clone()).collect();
    let triangles = sorted
        .iter()
        .map(|s| build_obb(s).expect("low-alpha splats dropped above"))
        .collect();

    Ok((
        SplatPrimitiveSet {
            splats: sorted,
            triangles,
        },
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compositing::eval_alpha;
    use crate::scene::synth_random;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plain_gaussian(position: Vec3, scale: Vec3, opacity: f32) -> Gaussian3D {
        Gaussian3D {
            position,
            scale,
            rotation: [1.0, 0.0, 0.0, 0.0],
            opacity,
            sh: vec![Vec3::splat(0.0)],
        }
    }

    #[test]
    fn cov3d_identity_and_diagonal() {
        let c = compute_cov3d(Vec3::splat(1.0), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c, Mat3::identity());
        let c = compute_cov3d(Vec3::new(2.0, 1.0, 1.0), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.m[0][0], 4.0);
        assert_eq!(c.m[1][1], 1.0);
        assert_eq!(c.m[2][2], 1.0);
        assert_eq!(c.m[0][1], 0.0);
    }

    #[test]
    fn cov3d_matches_direct_product_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let scale = Vec3::new(
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
                rng.gen_range(0.1..3.0),
            );
            let mut q = [0.0f32; 4];
            for c in &mut q {
                *c = rng.gen_range(-1.0..1.0);
            }
            let norm = q.iter().map(|c| c * c).sum::<f32>().sqrt().max(1e-3);
            for c in &mut q {
                *c /= norm;
            }
            let got = compute_cov3d(scale, q);
            // Oracle: R diag(s^2) R^T assembled element by element.
            let r = Mat3::from_quaternion(q[0], q[1], q[2], q[3]);
            let s2 = [scale.x * scale.x, scale.y * scale.y, scale.z * scale.z];
            for i in 0..3 {
                for j in 0..3 {
                    let expect: f32 = (0..3).map(|k| r.m[i][k] * s2[k] * r.m[j][k]).sum();
                    assert!((got.m[i][j] - expect).abs() < 1e-5);
                }
            }
            // Symmetric positive semi-definite with eigenvalues = scale^2:
            // trace equals the sum of squared scales.
            let trace = got.m[0][0] + got.m[1][1] + got.m[2][2];
            assert!((trace - (s2[0] + s2[1] + s2[2])).abs() < 1e-4);
        }
    }

    #[test]
    fn projection_matches_pinhole_oracle_on_axis() {
        let cam = Camera::canonical(256, 256);
        let (s, z) = (0.05f32, 5.0f32);
        let g = plain_gaussian(Vec3::new(0.0, 0.0, z), Vec3::splat(s), 0.8);
        let splat = project_to_splat(&g, &cam, &PreprocessOptions::default(), 0).unwrap();
        assert_eq!(splat.depth, z);
        let expect = (cam.fx * s / z) * (cam.fx * s / z) + 0.3;
        let cov = splat.inv_cov2d.inverse().unwrap();
        assert!((cov.a - expect).abs() / expect < 1e-4, "{} vs {expect}", cov.a);
        assert!((cov.c - expect).abs() / expect < 1e-4);
        assert!(cov.b.abs() < 1e-4);
        assert_eq!(splat.mean2d, Vec2::new(128.0, 128.0));
    }

    #[test]
    fn doubling_fx_doubles_offset_from_principal_point() {
        let mut cam = Camera::canonical(256, 256);
        let g = plain_gaussian(Vec3::new(0.4, 0.0, 8.0), Vec3::splat(0.05), 0.8);
        let a = project_to_splat(&g, &cam, &PreprocessOptions::default(), 0).unwrap();
        cam.fx *= 2.0;
        let b = project_to_splat(&g, &cam, &PreprocessOptions::default(), 0).unwrap();
        assert!(((b.mean2d.x - 128.0) - 2.0 * (a.mean2d.x - 128.0)).abs() < 1e-4);
    }

    #[test]
    fn alpha_at_projected_mean_is_opacity() {
        let cam = Camera::canonical(128, 128);
        let g = plain_gaussian(Vec3::new(0.2, -0.1, 6.0), Vec3::splat(0.1), 0.73);
        let splat = project_to_splat(&g, &cam, &PreprocessOptions::default(), 0).unwrap();
        assert_eq!(eval_alpha(&splat, splat.mean2d, 0.99), 0.73);
    }

    #[test]
    fn eval_color_degree0_and_parity() {
        let c = 0.4f32;
        let rgb = eval_color(&[Vec3::splat(c)], Vec3::new(0.0, 0.0, 1.0), None);
        for ch in rgb {
            assert!((ch - (c * 0.28209479 + 0.5)).abs() < 1e-6);
        }
        let zeros = eval_color(&[Vec3::splat(0.0)], Vec3::new(1.0, 0.0, 0.0), None);
        assert_eq!(zeros, [0.5, 0.5, 0.5]);

        // Degree-1 basis is odd: opposite directions give different colors
        // unless the degree-1 coefficients vanish.
        let sh: Vec<Vec3> = vec![
            Vec3::splat(0.1),
            Vec3::splat(0.3),
            Vec3::splat(-0.2),
            Vec3::splat(0.05),
        ];
        let dir = Vec3::new(0.6, -0.48, 0.64).normalized();
        let a = eval_color(&sh, dir, None);
        let b = eval_color(&sh, dir * -1.0, None);
        assert_ne!(a, b);
        let dc_only: Vec<Vec3> = vec![Vec3::splat(0.1), Vec3::splat(0.0), Vec3::splat(0.0), Vec3::splat(0.0)];
        assert_eq!(
            eval_color(&dc_only, dir, None),
            eval_color(&dc_only, dir * -1.0, None)
        );
    }

    #[test]
    fn depth_sort_is_stable_and_matches_oracle() {
        assert_eq!(depth_sort(&[1.0, 2.0, 3.0]).unwrap(), vec![0, 1, 2]);
        // Equal keys keep source order.
        assert_eq!(depth_sort(&[2.0, 1.0, 1.0]).unwrap(), vec![1, 2, 0]);
        assert!(depth_sort(&[1.0, f32::NAN]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let depths: Vec<f32> = (0..500).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let perm = depth_sort(&depths).unwrap();
        // Independent comparison-sort oracle over (key, index) pairs.
        let mut oracle: Vec<(f32, u32)> =
            depths.iter().copied().zip(0..depths.len() as u32).collect();
        oracle.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let expect: Vec<u32> = oracle.into_iter().map(|(_, i)| i).collect();
        assert_eq!(perm, expect);
    }

    #[test]
    fn obb_radius_closed_form() {
        // alpha(r) = o exp(-r^2/2) = 1/255 at r = sqrt(2 ln(255 o)).
        let r = boundary_radius(1.0).unwrap();
        assert!((r - (2.0f32 * 255.0f32.ln()).sqrt()).abs() < 1e-6);
        assert!((r - 3.3290429).abs() < 1e-4);
        assert!(boundary_radius(1.0 / 255.0).is_none());
        assert!(boundary_radius(0.0).is_none());
    }

    #[test]
    fn obb_axes_follow_eigenvectors() {
        // Sigma' = diag(4, 1), o = 1: axes along x/y with half-lengths 2r, r.
        let cov = Sym2::new(4.0, 0.0, 1.0);
        let r = boundary_radius(1.0).unwrap();
        let ((l1, e1), (l2, e2)) = cov.eigen();
        let a1 = e1 * (r * l1.sqrt());
        let a2 = e2 * (r * l2.sqrt());
        assert!((a1.x.abs() - 2.0 * r).abs() < 1e-5 && a1.y.abs() < 1e-5);
        assert!((a2.y.abs() - r).abs() < 1e-5 && a2.x.abs() < 1e-5);
    }

    #[test]
    fn obb_contains_all_boundary_alpha_pixels() {
        // Sampling check of OBB conservativeness: every point with
        // alpha >= 1/255 lies inside the parallelogram.
        let cam = Camera::canonical(128, 128);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let g = Gaussian3D {
                position: Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 6.0),
                scale: Vec3::new(
                    rng.gen_range(0.02..0.3),
                    rng.gen_range(0.02..0.3),
                    rng.gen_range(0.02..0.3),
                ),
                rotation: [1.0, 0.0, 0.0, 0.0],
                opacity: rng.gen_range(0.05..1.0),
                sh: vec![Vec3::splat(0.0)],
            };
            let splat = project_to_splat(&g, &cam, &PreprocessOptions::default(), 0).unwrap();
            let (a1, a2) = (splat.axes[0], splat.axes[1]);
            // Orthogonality invariant.
            assert!(a1.dot(a2).abs() / (a1.length() * a2.length()).max(1e-6) < 1e-4);
            let det = a1.x * a2.y - a1.y * a2.x;
            for _ in 0..200 {
                let p = Vec2::new(rng.gen_range(0.0..128.0), rng.gen_range(0.0..128.0));
                if eval_alpha(&splat, p, 1.0) >= BOUNDARY_ALPHA {
                    // Solve p - mean = u a1 + v a2; inside iff |u|,|v| <= 1.
                    let d = p - splat.mean2d;
                    let u = (d.x * a2.y - d.y * a2.x) / det;
                    let v = (a1.x * d.y - a1.y * d.x) / det;
                    assert!(
                        u.abs() <= 1.0 + 1e-3 && v.abs() <= 1.0 + 1e-3,
                        "point {p:?} outside OBB (u={u}, v={v})"
                    );
                }
            }
        }
    }

    #[test]
    fn cull_keeps_contributors() {
        // Survivor set must contain every Gaussian with nonzero on-screen
        // alpha; extras are allowed (conservative cull).
        let cam = Camera::canonical(64, 64);
        let scene = synth_random(1000, 6.0, 17);
        let survivors = frustum_cull(&scene, &cam);
        let set: std::collections::HashSet<u32> = survivors.iter().copied().collect();
        let opts = PreprocessOptions::default();
        for (i, g) in scene.gaussians.iter().enumerate() {
            let t = cam.view.transform_point(g.position);
            if !(t.z > cam.znear && t.z < cam.zfar) {
                continue;
            }
            let Some(splat) = project_to_splat(g, &cam, &opts, i as u32) else {
                continue;
            };
            let mut contributes = false;
            'scan: for y in 0..cam.height {
                for x in 0..cam.width {
                    let p = Vec2::new(x as f32 + 0.5, y as f32 + 0.5);
                    if eval_alpha(&splat, p, 0.99) >= BOUNDARY_ALPHA {
                        contributes = true;
                        break 'scan;
                    }
                }
            }
            if contributes {
                assert!(set.contains(&(i as u32)), "culled contributor {i}");
            }
        }
        assert!(!survivors.is_empty());
    }

    #[test]
    fn behind_camera_is_culled_and_centered_is_kept() {
        let cam = Camera::canonical(64, 64);
        let behind = plain_gaussian(Vec3::new(0.0, 0.0, -5.0), Vec3::splat(0.1), 0.9);
        let centered = plain_gaussian(Vec3::new(0.0, 0.0, 10.0), Vec3::splat(0.1), 0.9);
        let scene = Scene::new("two", vec![behind, centered]);
        assert_eq!(frustum_cull(&scene, &cam), vec![1]);
    }

    #[test]
    fn preprocess_sorts_and_counts() {
        let cam = Camera::canonical(64, 64);
        let scene = synth_random(500, 6.0, 2);
        let (set, stats) = preprocess(&scene, &cam, &PreprocessOptions::default()).unwrap();
        assert_eq!(set.splats.len(), set.triangles.len());
        for pair in set.splats.windows(2) {
            assert!(pair[0].depth <= pair[1].depth);
        }
        let total = set.splats.len() as u32
            + stats.culled
            + stats.dropped_low_alpha
            + stats.dropped_degenerate;
        assert_eq!(total, scene.len() as u32);
    }
}
