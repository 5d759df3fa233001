//! Scene representation: trained Gaussians, cameras, and scene containers.

mod ply;
mod synth;
mod vrsc;

pub use ply::load_gaussian_ply;
pub use synth::{synth_layered, synth_random};
pub use vrsc::{read_splat_file, write_splat_file};

use crate::error::{Error, Result};
use crate::math::{Mat4, Vec3};
use serde::{Deserialize, Serialize};

/// A trained scene primitive: anisotropic 3D Gaussian with view-dependent color.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian3D {
    pub position: Vec3,
    /// Per-axis standard deviation in world units; strictly positive.
    pub scale: Vec3,
    /// Unit quaternion (w, x, y, z).
    pub rotation: [f32; 4],
    /// Opacity in [0, 1].
    pub opacity: f32,
    /// RGB spherical-harmonic coefficients, DC first; 1, 4, 9 or 16 triples.
    pub sh: Vec<Vec3>,
}

impl Gaussian3D {
    pub fn sh_degree(&self) -> usize {
        match self.sh.len() {
            1 => 0,
            4 => 1,
            9 => 2,
            16 => 3,
            n => panic!("invalid sh coefficient count {n}"),
        }
    }

    pub fn validate(&self, index: usize) -> Result<()> {
        let err = |detail: String| Err(Error::InvalidScene(format!("gaussian {index}: {detail}")));
        if !(0.0..=1.0).contains(&self.opacity) || !self.opacity.is_finite() {
            return err(format!("opacity {} outside [0,1]", self.opacity));
        }
        for s in [self.scale.x, self.scale.y, self.scale.z] {
            if !(s > 0.0) || !s.is_finite() {
                return err(format!("non-positive scale component {s}"));
            }
        }
        let norm = self.rotation.iter().map(|c| c * c).sum::<f32>().sqrt();
        if (norm - 1.0).abs() > 1e-6 {
            return err(format!("quaternion norm {norm} not 1"));
        }
        if !matches!(self.sh.len(), 1 | 4 | 9 | 16) {
            return err(format!("sh coefficient count {} not in {{1,4,9,16}}", self.sh.len()));
        }
        for v in [self.position]
            .into_iter()
            .chain(self.sh.iter().copied())
        {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return err("non-finite field".to_string());
            }
        }
        Ok(())
    }
}

/// A pinhole camera with a rigid world-to-camera transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Camera {
    /// World-to-camera matrix, row-major.
    pub view: Mat4,
    pub fx: f32,
    pub fy: f32,
    pub width: u32,
    pub height: u32,
    pub znear: f32,
    pub zfar: f32,
}

impl Camera {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidCamera("zero resolution".into()));
        }
        if !(self.znear > 0.0 && self.znear < self.zfar) {
            return Err(Error::InvalidCamera(format!(
                "need 0 < znear < zfar, got {} and {}",
                self.znear, self.zfar
            )));
        }
        if !(self.fx > 0.0 && self.fy > 0.0) {
            return Err(Error::InvalidCamera("non-positive focal length".into()));
        }
        let r = self.view.rotation();
        let rtr = r.transpose() * r;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (rtr.m[i][j] - expect).abs() > 1e-5 {
                    return Err(Error::InvalidCamera(
                        "view upper-left 3x3 is not a rotation".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Camera position in world space: -R^T t.
    pub fn position(&self) -> Vec3 {
        let r = self.view.rotation().transpose();
        let t = self.view.translation();
        r.mul_vec(t) * -1.0
    }

    /// Principal point (image center).
    pub fn principal_point(&self) -> (f32, f32) {
        (self.width as f32 * 0.5, self.height as f32 * 0.5)
    }

    /// The camera used by the synthetic scene generators: identity view
    /// (origin, looking down +z), focal length = max image dimension.
    pub fn canonical(width: u32, height: u32) -> Camera {
        let f = width.max(height) as f32;
        Camera {
            view: Mat4::identity(),
            fx: f,
            fy: f,
            width,
            height,
            znear: 0.1,
            zfar: 1000.0,
        }
    }

    pub fn load(path: &str) -> Result<Camera> {
        let text = std::fs::read_to_string(path)?;
        let file: CameraFile =
            toml::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        let cam = Camera {
            view: Mat4::from_row_major(&file.view),
            fx: file.fx,
            fy: file.fy,
            width: file.width,
            height: file.height,
            znear: file.znear,
            zfar: file.zfar,
        };
        cam.validate()?;
        Ok(cam)
    }

    pub fn save(&self, path: &str) -> Result<()> {
        let file = CameraFile {
            view: self.view.to_row_major(),
            fx: self.fx,
            fy: self.fy,
            width: self.width,
            height: self.height,
            znear: self.znear,
            zfar: self.zfar,
        };
        let text = toml::to_string(&file).map_err(|e| Error::parse(path, e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// On-disk camera layout: 16 row-major floats plus intrinsics.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraFile {
    view: [f32; 16],
    fx: f32,
    fy: f32,
    width: u32,
    height: u32,
    znear: f32,
    zfar: f32,
}

/// An ordered set of Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub gaussians: Vec<Gaussian3D>,
    pub name: String,
}

impl Scene {
    pub fn new(name: impl Into<String>, gaussians: Vec<Gaussian3D>) -> Self {
        Scene {
            gaussians,
            name: name.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.gaussians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaussians.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gaussians.iter().enumerate() {
            g.validate(i)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn unit_gaussian(position: Vec3, opacity: f32) -> Gaussian3D {
        Gaussian3D {
            position,
            scale: Vec3::splat(1.0),
            rotation: [1.0, 0.0, 0.0, 0.0],
            opacity,
            sh: vec![Vec3::splat(0.0)],
        }
    }

    #[test]
    fn gaussian_validation_rejects_bad_fields() {
        let mut g = unit_gaussian(Vec3::splat(0.0), 0.5);
        assert!(g.validate(0).is_ok());
        g.opacity = 1.5;
        assert!(g.validate(0).is_err());
        g.opacity = 0.5;
        g.scale.y = 0.0;
        assert!(g.validate(0).is_err());
        g.scale.y = 1.0;
        g.rotation = [0.9, 0.0, 0.0, 0.0];
        assert!(g.validate(0).is_err());
        g.rotation = [1.0, 0.0, 0.0, 0.0];
        g.sh = vec![Vec3::splat(0.0); 5];
        assert!(g.validate(0).is_err());
    }

    #[test]
    fn camera_validation() {
        let cam = Camera::canonical(64, 64);
        assert!(cam.validate().is_ok());
        let mut bad = cam.clone();
        bad.znear = 2000.0;
        assert!(bad.validate().is_err());
        let mut skew = cam;
        skew.view.m[0][0] = 2.0;
        assert!(skew.validate().is_err());
    }

    #[test]
    fn camera_file_roundtrip_and_bad_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cam.toml");
        let path = path.to_str().unwrap();
        let cam = Camera::canonical(128, 96);
        cam.save(path).unwrap();
        let loaded = Camera::load(path).unwrap();
        assert_eq!(cam, loaded);

        std::fs::write(path, "view = [1.0]\nfexx = 3\n").unwrap();
        let err = Camera::load(path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("view") || msg.contains("fexx"), "{msg}");
    }
}
