//! Canonical binary splat-scene format:
//! magic "VRSC" | u32 version=1 | u32 count | u32 reserved, then per record
//! position f32x3, scale f32x3, quat f32x4, opacity f32, sh_degree u32,
//! sh f32x3x(degree+1)^2. All little-endian.

use super::{Gaussian3D, Scene};
use crate::error::{Error, Result};
use crate::math::Vec3;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"VRSC";
const VERSION: u32 = 1;

pub fn write_splat_file(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(scene.gaussians.len() as u32).to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    for g in &scene.gaussians {
        for v in [g.position, g.scale] {
            for c in [v.x, v.y, v.z] {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        for c in g.rotation {
            w.write_all(&c.to_le_bytes())?;
        }
        w.write_all(&g.opacity.to_le_bytes())?;
        w.write_all(&(g.sh_degree() as u32).to_le_bytes())?;
        for v in &g.sh {
            for c in [v.x, v.y, v.z] {
                w.write_all(&c.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_splat_file(path: impl AsRef<Path>) -> Result<Scene> {
    let path_ref = path.as_ref();
    let path_str = path_ref.display().to_string();
    let file = std::fs::File::open(path_ref)?;
    let mut r = BufReader::new(file);

    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| Error::parse(&path_str, "truncated header"))?;
    if &header[0..4] != MAGIC {
        return Err(Error::parse(
            &path_str,
            format!("bad magic {:?}", &header[0..4]),
        ));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(Error::parse(&path_str, format!("unsupported version {version}")));
    }
    let count = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;

    let read_f32 = |r: &mut BufReader<std::fs::File>| -> Result<f32> {
        let mut b = [0u8; 4];
        r.read_exact(&mut b)
            .map_err(|_| Error::parse(&path_str, "truncated payload"))?;
        Ok(f32::from_le_bytes(b))
    };

    let mut gaussians = Vec::with_capacity(count);
    for _ in 0..count {
        let position = Vec3::new(read_f32(&mut r)?, read_f32(&mut r)?, read_f32(&mut r)?);
        let scale = Vec3::new(read_f32(&mut r)?, read_f32(&mut r)?, read_f32(&mut r)?);
        let rotation = [
            read_f32(&mut r)?,
            read_f32(&mut r)?,
            read_f32(&mut r)?,
            read_f32(&mut r)?,
        ];
        let opacity = read_f32(&mut r)?;
        let mut deg_bytes = [0u8; 4];
        r.read_exact(&mut deg_bytes)
            .map_err(|_| Error::parse(&path_str, "truncated payload"))?;
        let degree = u32::from_le_bytes(deg_bytes) as usize;
        if degree > 3 {
            return Err(Error::parse(
                &path_str,
                format!("sh_degree {degree} out of range"),
            ));
        }
        let coeffs = (degree + 1) * (degree + 1);
        let mut sh = Vec::with_capacity(coeffs);
        for _ in 0..coeffs {
            sh.push(Vec3::new(read_f32(&mut r)?, read_f32(&mut r)?, read_f32(&mut r)?));
        }
        gaussians.push(Gaussian3D {
            position,
            scale,
            rotation,
            opacity,
            sh,
        });
    }

    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(Error::parse(
            &path_str,
            format!("count mismatch: trailing bytes after {count} records"),
        ));
    }

    let name = path_ref
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scene".to_string());
    Ok(Scene::new(name, gaussians))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::synth_random;

    #[test]
    fn empty_scene_is_sixteen_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.vrsc");
        write_splat_file(&Scene::new("empty", vec![]), &path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 16);
        let scene = read_splat_file(&path).unwrap();
        assert!(scene.is_empty());
    }

    #[test]
    fn random_scene_roundtrips_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.vrsc");
        let scene = synth_random(1000, 10.0, 42);
        write_splat_file(&scene, &path).unwrap();
        let back = read_splat_file(&path).unwrap();
        assert_eq!(scene.gaussians.len(), back.gaussians.len());
        for (a, b) in scene.gaussians.iter().zip(&back.gaussians) {
            // Bit-level equality on every field.
            assert_eq!(a.position.x.to_bits(), b.position.x.to_bits());
            assert_eq!(a.position.y.to_bits(), b.position.y.to_bits());
            assert_eq!(a.position.z.to_bits(), b.position.z.to_bits());
            assert_eq!(a.scale.x.to_bits(), b.scale.x.to_bits());
            assert_eq!(a.opacity.to_bits(), b.opacity.to_bits());
            assert_eq!(a.rotation.map(f32::to_bits), b.rotation.map(f32::to_bits));
            assert_eq!(a.sh.len(), b.sh.len());
            for (u, v) in a.sh.iter().zip(&b.sh) {
                assert_eq!(u.x.to_bits(), v.x.to_bits());
                assert_eq!(u.y.to_bits(), v.y.to_bits());
                assert_eq!(u.z.to_bits(), v.z.to_bits());
            }
        }
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.vrsc");
        std::fs::write(&path, b"XXXX\x01\0\0\0\0\0\0\0\0\0\0\0").unwrap();
        let err = read_splat_file(&path).unwrap_err();
        assert!(err.to_string().contains("bad magic"), "{err}");
    }

    #[test]
    fn truncated_payload_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trunc.vrsc");
        let scene = synth_random(3, 5.0, 1);
        write_splat_file(&scene, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 7]).unwrap();
        let err = read_splat_file(&path).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
    }
}
