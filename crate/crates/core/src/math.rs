//! Minimal fixed-size vector/matrix helpers used by projection and raster code.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f32,
    pub y: f32,
}

impl Vec2 {
    pub const fn new(x: f32, y: f32) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f32 {
        self.x * o.x + self.y * o.y
    }

    pub fn length(self) -> f32 {
        self.dot(self).sqrt()
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f32> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f32) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f32,
    pub y: f32,
    pub z: f32,
}

impl Vec3 {
    pub const fn new(x: f32, y: f32, z: f32) -> Self {
        Vec3 { x, y, z }
    }

    pub const fn splat(v: f32) -> Self {
        Vec3::new(v, v, v)
    }

    pub fn dot(self, o: Vec3) -> f32 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn length(self) -> f32 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let len = self.length();
        if len > 0.0 {
            self * (1.0 / len)
        } else {
            self
        }
    }
}

impl std::ops::Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl std::ops::Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl std::ops::Mul<f32> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f32) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Symmetric 2x2 matrix stored as (a, b; b, c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub a: f32,
    pub b: f32,
    pub c: f32,
}

impl Sym2 {
    pub const fn new(a: f32, b: f32, c: f32) -> Self {
        Sym2 { a, b, c }
    }

    pub fn det(self) -> f32 {
        self.a * self.c - self.b * self.b
    }

    pub fn inverse(self) -> Option<Sym2> {
        let det = self.det();
        if det.abs() <= 1e-12 {
            return None;
        }
        let inv = 1.0 / det;
        Some(Sym2::new(self.c * inv, -self.b * inv, self.a * inv))
    }

    /// Quadratic form d^T M d.
    pub fn quad_form(self, d: Vec2) -> f32 {
        self.a * d.x * d.x + 2.0 * self.b * d.x * d.y + self.c * d.y * d.y
    }

    /// Closed-form eigendecomposition via trace/determinant.
    /// Returns ((lambda_max, e_max), (lambda_min, e_min)) with unit eigenvectors.
    pub fn eigen(self) -> ((f32, Vec2), (f32, Vec2)) {
        let mid = 0.5 * (self.a + self.c);
        let half_diff = 0.5 * (self.a - self.c);
        let disc = (half_diff * half_diff + self.b * self.b).max(0.0).sqrt();
        let l1 = mid + disc;
        let l2 = mid - disc;
        let e1 = if self.b.abs() > 1e-12 {
            Vec2::new(l1 - self.c, self.b)
        } else if self.a >= self.c {
            Vec2::new(1.0, 0.0)
        } else {
            Vec2::new(0.0, 1.0)
        };
        let len = e1.length();
        let e1 = if len > 0.0 { e1 * (1.0 / len) } else { Vec2::new(1.0, 0.0) };
        let e2 = Vec2::new(-e1.y, e1.x);
        ((l1, e1), (l2, e2))
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    pub m: [[f32; 3]; 3],
}

impl Mat3 {
    pub const fn identity() -> Self {
        Mat3 {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn from_rows(r0: [f32; 3], r1: [f32; 3], r2: [f32; 3]) -> Self {
        Mat3 { m: [r0, r1, r2] }
    }

    /// Rotation matrix from a unit quaternion (w, x, y, z).
    pub fn from_quaternion(w: f32, x: f32, y: f32, z: f32) -> Self {
        Mat3 {
            m: [
                [
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                ],
                [
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                ],
                [
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ],
            ],
        }
    }

    pub fn transpose(self) -> Mat3 {
        let m = self.m;
        Mat3 {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn mul_vec(self, v: Vec3) -> Vec3 {
        let m = self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl std::ops::Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut out = [[0.0f32; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Mat3 { m: out }
    }
}

/// Row-major 4x4 matrix; used only as a rigid world-to-camera transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat4 {
    pub m: [[f32; 4]; 4],
}

impl Mat4 {
    pub const fn identity() -> Self {
        Mat4 {
            m: [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
        }
    }

    pub fn from_row_major(vals: &[f32; 16]) -> Self {
        let mut m = [[0.0f32; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = vals[i * 4 + j];
            }
        }
        Mat4 { m }
    }

    pub fn to_row_major(self) -> [f32; 16] {
        let mut out = [0.0f32; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[i * 4 + j] = self.m[i][j];
            }
        }
        out
    }

    pub fn rotation(self) -> Mat3 {
        Mat3::from_rows(
            [self.m[0][0], self.m[0][1], self.m[0][2]],
            [self.m[1][0], self.m[1][1], self.m[1][2]],
            [self.m[2][0], self.m[2][1], self.m[2][2]],
        )
    }

    pub fn translation(self) -> Vec3 {
        Vec3::new(self.m[0][3], self.m[1][3], self.m[2][3])
    }

    /// Transform a point (w = 1).
    pub fn transform_point(self, p: Vec3) -> Vec3 {
        self.rotation().mul_vec(p) + self.translation()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym2_eigen_diagonal() {
        let ((l1, e1), (l2, e2)) = Sym2::new(4.0, 0.0, 1.0).eigen();
        assert_eq!(l1, 4.0);
        assert_eq!(l2, 1.0);
        assert!((e1.x.abs() - 1.0).abs() < 1e-6 && e1.y.abs() < 1e-6);
        assert!((e2.y.abs() - 1.0).abs() < 1e-6 && e2.x.abs() < 1e-6);
    }

    #[test]
    fn sym2_eigen_reconstructs() {
        let m = Sym2::new(2.5, -0.8, 1.2);
        let ((l1, e1), (l2, e2)) = m.eigen();
        // M == l1 e1 e1^T + l2 e2 e2^T
        let a = l1 * e1.x * e1.x + l2 * e2.x * e2.x;
        let b = l1 * e1.x * e1.y + l2 * e2.x * e2.y;
        let c = l1 * e1.y * e1.y + l2 * e2.y * e2.y;
        assert!((a - m.a).abs() < 1e-5);
        assert!((b - m.b).abs() < 1e-5);
        assert!((c - m.c).abs() < 1e-5);
    }

    #[test]
    fn sym2_inverse_roundtrip() {
        let m = Sym2::new(3.0, 0.5, 2.0);
        let inv = m.inverse().unwrap();
        // M * M^-1 == I
        assert!((m.a * inv.a + m.b * inv.b - 1.0).abs() < 1e-6);
        assert!((m.a * inv.b + m.b * inv.c).abs() < 1e-6);
        assert!((m.b * inv.b + m.c * inv.c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quat_identity_is_identity_matrix() {
        let r = Mat3::from_quaternion(1.0, 0.0, 0.0, 0.0);
        assert_eq!(r, Mat3::identity());
    }

    #[test]
    fn quat_rotation_is_orthonormal() {
        // 120-degree rotation about (1,1,1)/sqrt(3)
        let half = std::f32::consts::FRAC_PI_3;
        let s = half.sin() / 3.0f32.sqrt();
        let r = Mat3::from_quaternion(half.cos(), s, s, s);
        let rtr = r.transpose() * r;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((rtr.m[i][j] - expect).abs() < 1e-6);
            }
        }
    }
}
