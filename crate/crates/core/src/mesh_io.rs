//! Triangulation of sampled surfaces and export to OBJ, ASCII PLY and CSV.
//!
//! Each grid cell `(i, j)` is split along the diagonal `(i, j)-(i+1, j+1)`
//! into two triangles with vertex index `i * q_count + j`. Minimal readers for
//! the OBJ and PLY output are provided for round-trip checks.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::legendre::SurfaceSample;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh '{0}' has no triangles")]
    Empty(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: line {line}: {message}")]
    Format { path: PathBuf, line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshData {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    /// Mean curvature per vertex, `NaN` at singular nodes.
    pub per_vertex_h: Option<Vec<f64>>,
}

/// Triangulates the full grid. With `drop_singular`, triangles touching a
/// singular node are omitted; vertices are kept so indices stay `i * q_count + j`.
pub fn triangulate(sample: &SurfaceSample, drop_singular: bool) -> Result<MeshData, MeshError> {
    let spec = &sample.spec;
    let v = |i: usize, j: usize| i * spec.q_count + j;
    let vertices: Vec<[f64; 3]> = sample.points.iter().map(|pt| [pt.x, pt.y, pt.z]).collect();
    let mut triangles = Vec::with_capacity(2 * (spec.p_count - 1) * (spec.q_count - 1));
    for i in 0..spec.p_count - 1 {
        for j in 0..spec.q_count - 1 {
            for tri in [[v(i, j), v(i + 1, j), v(i + 1, j + 1)], [v(i, j), v(i + 1, j + 1), v(i, j + 1)]] {
                if drop_singular && tri.iter().any(|&k| sample.points[k].singular) {
                    continue;
                }
                triangles.push(tri);
            }
        }
    }
    if triangles.is_empty() {
        return Err(MeshError::Empty(sample.generator_name.clone()));
    }
    let per_vertex_h = sample.points.iter().map(|pt| pt.mean_curvature.unwrap_or(f64::NAN)).collect();
    Ok(MeshData { name: sample.generator_name.clone(), vertices, triangles, per_vertex_h: Some(per_vertex_h) })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> MeshError + '_ {
    move |source| MeshError::Io { path: path.to_path_buf(), source }
}

fn write_with<F>(path: &Path, body: F) -> Result<(), MeshError>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// Wavefront OBJ: `v` lines in scientific notation, 1-based `f` lines.
pub fn write_obj(mesh: &MeshData, path: &Path) -> Result<(), MeshError> {
    write_with(path, |w| {
        writeln!(w, "# {}", mesh.name)?;
        writeln!(w, "o {}", mesh.name)?;
        for [x, y, z] in &mesh.vertices {
            writeln!(w, "v {x:.16e} {y:.16e} {z:.16e}")?;
        }
        for [a, b, c] in &mesh.triangles {
            writeln!(w, "f {} {} {}", a + 1, b + 1, c + 1)?;
        }
        Ok(())
    })
}

/// ASCII PLY 1.0 with double coordinates and, when available, a double `H`
/// vertex property.
pub fn write_ply(mesh: &MeshData, path: &Path) -> Result<(), MeshError> {
    write_with(path, |w| {
        writeln!(w, "ply")?;
        writeln!(w, "format ascii 1.0")?;
        writeln!(w, "comment {}", mesh.name)?;
        writeln!(w, "element vertex {}", mesh.vertices.len())?;
        for axis in ["x", "y", "z"] {
            writeln!(w, "property double {axis}")?;
        }
        if mesh.per_vertex_h.is_some() {
            writeln!(w, "property double H")?;
        }
        writeln!(w, "element face {}", mesh.triangles.len())?;
        writeln!(w, "property list uchar int vertex_indices")?;
        writeln!(w, "end_header")?;
        for (k, [x, y, z]) in mesh.vertices.iter().enumerate() {
            write!(w, "{x:.16e} {y:.16e} {z:.16e}")?;
            if let Some(h) = &mesh.per_vertex_h {
                write!(w, " {:.16e}", h[k])?;
            }
            writeln!(w)?;
        }
        for [a, b, c] in &mesh.triangles {
            writeln!(w, "3 {a} {b} {c}")?;
        }
        Ok(())
    })
}

/// One row per grid node: `p,q,x,y,z,H,singular`, `H` empty when singular.
pub fn write_csv(sample: &SurfaceSample, path: &Path) -> Result<(), MeshError> {
    write_with(path, |w| {
        writeln!(w, "p,q,x,y,z,H,singular")?;
        for pt in &sample.points {
            let h = pt.mean_curvature.map(|h| format!("{h:.16e}")).unwrap_or_default();
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{h},{}",
                pt.p, pt.q, pt.x, pt.y, pt.z, pt.singular
            )?;
        }
        Ok(())
    })
}

fn read_lines(path: &Path) -> Result<Vec<String>, MeshError> {
    let file = File::open(path).map_err(io_err(path))?;
    BufReader::new(file).lines().collect::<io::Result<_>>().map_err(io_err(path))
}

fn format_err(path: &Path, line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Format { path: path.to_path_buf(), line, message: message.into() }
}

fn parse_fields<T: std::str::FromStr>(path: &Path, line: usize, fields: &[&str]) -> Result<Vec<T>, MeshError> {
    fields
        .iter()
        .map(|f| f.parse().map_err(|_| format_err(path, line, format!("bad number '{f}'"))))
        .collect()
}

/// Reads `v` and triangular `f` records; other records are ignored.
pub fn read_obj(path: &Path) -> Result<MeshData, MeshError> {
    let mut mesh = MeshData { name: String::new(), vertices: Vec::new(), triangles: Vec::new(), per_vertex_h: None };
    for (k, text) in read_lines(path)?.iter().enumerate() {
        let line = k + 1;
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields.first() {
            Some(&"o") => mesh.name = fields[1..].join(" "),
            Some(&"v") => {
                let c: Vec<f64> = parse_fields(path, line, &fields[1..])?;
                let [x, y, z] = c[..] else { return Err(format_err(path, line, "vertex needs 3 coordinates")) };
                mesh.vertices.push([x, y, z]);
            }
            Some(&"f") => {
                let idx: Vec<usize> = parse_fields(path, line, &fields[1..])?;
                let [a, b, c] = idx[..] else { return Err(format_err(path, line, "face needs 3 indices")) };
                if [a, b, c].iter().any(|&i| i == 0 || i > mesh.vertices.len()) {
                    return Err(format_err(path, line, "face index out of range"));
                }
                mesh.triangles.push([a - 1, b - 1, c - 1]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// Reads the ASCII PLY layout produced by [`write_ply`].
pub fn read_ply(path: &Path) -> Result<MeshData, MeshError> {
    let lines = read_lines(path)?;
    if lines.first().map(String::as_str) != Some("ply") {
        return Err(format_err(path, 1, "missing 'ply' magic"));
    }
    let mut name = String::new();
    let (mut n_vertices, mut n_faces, mut vertex_props) = (0usize, 0usize, 0usize);
    let mut in_vertex = false;
    let mut body = None;
    for (k, text) in lines.iter().enumerate().skip(1) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        match fields.as_slice() {
            ["format", fmt, _] if *fmt != "ascii" => return Err(format_err(path, k + 1, "only ascii PLY is supported")),
            ["comment", rest @ ..] => name = rest.join(" "),
            ["element", "vertex", n] => {
                n_vertices = parse_fields(path, k + 1, &[n])?[0];
                in_vertex = true;
            }
            ["element", "face", n] => {
                n_faces = parse_fields(path, k + 1, &[n])?[0];
                in_vertex = false;
            }
            ["property", "double", _] if in_vertex => vertex_props += 1,
            ["end_header"] => {
                body = Some(k + 1);
                break;
            }
            _ => {}
        }
    }
    let start = body.ok_or_else(|| format_err(path, lines.len(), "missing end_header"))?;
    if lines.len() < start + n_vertices + n_faces {
        return Err(format_err(path, lines.len(), "truncated body"));
    }
    let mut vertices = Vec::with_capacity(n_vertices);
    let mut h = Vec::new();
    for (k, text) in lines.iter().enumerate().skip(start).take(n_vertices) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let c: Vec<f64> = parse_fields(path, k + 1, &fields)?;
        if c.len() != vertex_props || c.len() < 3 {
            return Err(format_err(path, k + 1, "wrong vertex property count"));
        }
        vertices.push([c[0], c[1], c[2]]);
        if vertex_props > 3 {
            h.push(c[3]);
        }
    }
    let mut triangles = Vec::with_capacity(n_faces);
    for (k, text) in lines.iter().enumerate().skip(start + n_vertices).take(n_faces) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let idx: Vec<usize> = parse_fields(path, k + 1, &fields)?;
        let [3, a, b, c] = idx[..] else { return Err(format_err(path, k + 1, "expected a triangle")) };
        if [a, b, c].iter().any(|&i| i >= n_vertices) {
            return Err(format_err(path, k + 1, "face index out of range"));
        }
        triangles.push([a, b, c]);
    }
    let per_vertex_h = (vertex_props > 3).then_some(h);
    Ok(MeshData { name, vertices, triangles, per_vertex_h })
}
