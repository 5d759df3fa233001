//! Loader for the community-standard Gaussian-splat PLY export:
//! ASCII header, binary little-endian body, one `vertex` element carrying
//! x/y/z, opacity (logit), scale_0..2 (log), rot_0..3, f_dc_0..2 and
//! optional f_rest_* coefficients.

use super::{Gaussian3D, Scene};
use crate::error::{Error, Result};
use crate::math::Vec3;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

#[derive(Clone, Copy, PartialEq)]
enum ScalarType {
    F32,
    F64,
}

impl ScalarType {
    fn size(self) -> usize {
        match self {
            ScalarType::F32 => 4,
            ScalarType::F64 => 8,
        }
    }

    fn read(self, bytes: &[u8]) -> f32 {
        match self {
            ScalarType::F32 => f32::from_le_bytes(bytes[..4].try_into().unwrap()),
            ScalarType::F64 => f64::from_le_bytes(bytes[..8].try_into().unwrap()) as f32,
        }
    }
}

struct VertexLayout {
    /// (name, type, byte offset) per declared property, in declaration order.
    properties: Vec<(String, ScalarType, usize)>,
    stride: usize,
    count: usize,
}

impl VertexLayout {
    fn offset_of(&self, name: &str, path: &str) -> Result<(ScalarType, usize)> {
        self.properties
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|&(_, ty, off)| (ty, off))
            .ok_or_else(|| Error::parse(path, format!("missing required property '{name}'")))
    }
}

fn parse_header<R: BufRead>(reader: &mut R, path: &str) -> Result<VertexLayout> {
    let mut line = String::new();
    reader.read_line(&mut line)?;
    if line.trim_end() != "ply" {
        return Err(Error::parse(path, "not a PLY file (missing 'ply' magic)"));
    }

    let mut format_seen = false;
    let mut in_vertex_element = false;
    let mut layout = VertexLayout {
        properties: Vec::new(),
        stride: 0,
        count: 0,
    };
    let mut vertex_seen = false;

    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            return Err(Error::parse(path, "header truncated before end_header"));
        }
        let trimmed = line.trim_end();
        let mut fields = trimmed.split_whitespace();
        match fields.next() {
            Some("comment") => {}
            Some("format") => {
                let spec: Vec<&str> = fields.collect();
                if spec.first() != Some(&"binary_little_endian") {
                    return Err(Error::parse(
                        path,
                        format!("unsupported format '{}', need binary_little_endian", spec.join(" ")),
                    ));
                }
                format_seen = true;
            }
            Some("element") => {
                let name = fields.next().unwrap_or("");
                let count: usize = fields
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| Error::parse(path, "malformed element line"))?;
                if name == "vertex" {
                    if vertex_seen {
                        return Err(Error::parse(path, "duplicate vertex element"));
                    }
                    vertex_seen = true;
                    in_vertex_element = true;
                    layout.count = count;
                } else {
                    in_vertex_element = false;
                }
            }
            Some("property") => {
                if !in_vertex_element {
                    continue;
                }
                let ty = match fields.next() {
                    Some("float") | Some("float32") => ScalarType::F32,
                    Some("double") | Some("float64") => ScalarType::F64,
                    Some(other) => {
                        return Err(Error::parse(
                            path,
                            format!("unsupported vertex property type '{other}'"),
                        ))
                    }
                    None => return Err(Error::parse(path, "malformed property line")),
                };
                let name = fields
                    .next()
                    .ok_or_else(|| Error::parse(path, "property missing name"))?;
                layout.properties.push((name.to_string(), ty, layout.stride));
                layout.stride += ty.size();
            }
            Some("end_header") => break,
            Some(other) => {
                return Err(Error::parse(path, format!("unrecognized header line '{other}'")))
            }
            None => {}
        }
    }

    if !format_seen {
        return Err(Error::parse(path, "header missing format line"));
    }
    if !vertex_seen {
        return Err(Error::parse(path, "header missing vertex element"));
    }
    Ok(layout)
}

fn logistic(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

pub fn load_gaussian_ply(path: impl AsRef<Path>) -> Result<Scene> {
    let path_ref = path.as_ref();
    let path_str = path_ref.display().to_string();
    let file = std::fs::File::open(path_ref)?;
    let mut reader = BufReader::new(file);
    let layout = parse_header(&mut reader, &path_str)?;

    const REQUIRED: [&str; 14] = [
        "x", "y", "z", "opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2",
        "rot_3", "f_dc_0", "f_dc_1", "f_dc_2",
    ];
    let mut required = Vec::with_capacity(REQUIRED.len());
    for name in REQUIRED {
        required.push(layout.offset_of(name, &path_str)?);
    }

    // f_rest_k coefficients are optional; the count fixes the SH degree.
    let mut rest = Vec::new();
    loop {
        let name = format!("f_rest_{}", rest.len());
        match layout.offset_of(&name, &path_str) {
            Ok(entry) => rest.push(entry),
            Err(_) => break,
        }
    }
    let per_channel = rest.len() / 3;
    let extra_degree_coeffs = match rest.len() {
        0 => 0,
        9 => 3,
        24 => 8,
        45 => 15,
        n => {
            return Err(Error::parse(
                &path_str,
                format!("f_rest property count {n} does not match SH degree 1..3"),
            ))
        }
    };

    let mut body = Vec::new();
    reader.read_to_end(&mut body)?;
    let needed = layout.stride * layout.count;
    if body.len() < needed {
        return Err(Error::parse(
            &path_str,
            format!(
                "element count mismatch: header declares {} vertices ({} bytes), body has {}",
                layout.count,
                needed,
                body.len()
            ),
        ));
    }

    let mut gaussians = Vec::with_capacity(layout.count);
    for rec in 0..layout.count {
        let base = rec * layout.stride;
        let get = |(ty, off): (ScalarType, usize)| ty.read(&body[base + off..]);

        let position = Vec3::new(get(required[0]), get(required[1]), get(required[2]));
        let opacity = logistic(get(required[3]));
        let scale = Vec3::new(
            get(required[4]).exp(),
            get(required[5]).exp(),
            get(required[6]).exp(),
        );
        let mut q = [
            get(required[7]),
            get(required[8]),
            get(required[9]),
            get(required[10]),
        ];
        let norm = q.iter().map(|c| c * c).sum::<f32>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::parse(
                &path_str,
                format!("vertex {rec}: quaternion cannot be normalized (norm {norm})"),
            ));
        }
        for c in &mut q {
            *c /= norm;
        }

        let mut sh = Vec::with_capacity(1 + extra_degree_coeffs);
        sh.push(Vec3::new(get(required[11]), get(required[12]), get(required[13])));
        // f_rest is stored channel-major: all R coefficients, then G, then B.
        for k in 0..extra_degree_coeffs {
            sh.push(Vec3::new(
                get(rest[k]),
                get(rest[per_channel + k]),
                get(rest[2 * per_channel + k]),
            ));
        }

        gaussians.push(Gaussian3D {
            position,
            scale,
            rotation: q,
            opacity,
            sh,
        });
    }

    let name = path_ref
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scene".to_string());
    let scene = Scene::new(name, gaussians);
    scene.validate()?;
    Ok(scene)
}
