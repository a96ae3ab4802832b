//! ASCII PLY point clouds: one `vertex` element with float x, y, z and
//! uchar red, green, blue. Reals are written with 9 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use partfuse_core::pointcloud::{Point, PointCloud};

use crate::error::{read_file, write_file, Error, Result};

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed,
/// exponent form outside `1e-5 ..= 1e9`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-5..9).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            out.push_str(&digits[..split]);
            let frac = digits[split..].trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        } else {
            out.push_str("0.");
            out.push_str(&"0".repeat((-exp - 1) as usize));
            out.push_str(digits.trim_end_matches('0'));
        }
    } else {
        out.push_str(&digits[..1]);
        let frac = digits[1..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs()).expect("string write");
    }
    out
}

pub fn encode_ply(cloud: &PointCloud) -> String {
    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    writeln!(out, "element vertex {}", cloud.len()).expect("string write");
    for p in ["x", "y", "z"] {
        writeln!(out, "property float {p}").expect("string write");
    }
    for c in ["red", "green", "blue"] {
        writeln!(out, "property uchar {c}").expect("string write");
    }
    out.push_str("end_header\n");
    for p in &cloud.points {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            format_sig9(p.x),
            format_sig9(p.y),
            format_sig9(p.z),
            p.r,
            p.g,
            p.b
        )
        .expect("string write");
    }
    out
}

const REAL_TYPES: [&str; 4] = ["float", "float32", "double", "float64"];
const BYTE_TYPES: [&str; 2] = ["uchar", "uint8"];

pub fn decode_ply(text: &str) -> Result<PointCloud, String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err("malformed header: missing `ply` signature".into());
    }
    let mut vertex_count: Option<usize> = None;
    let mut in_vertex = false;
    let mut props: Vec<(String, String)> = Vec::new();
    let mut saw_format = false;
    loop {
        let line = lines.next().ok_or("malformed header: missing end_header")?.trim();
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["end_header"] => break,
            ["format", "ascii", _] => saw_format = true,
            ["format", other, ..] => return Err(format!("unsupported PLY format `{other}`")),
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", name, count] => {
                let count: usize = count
                    .parse()
                    .map_err(|_| format!("bad element count `{count}`"))?;
                if *name == "vertex" {
                    if vertex_count.is_some() {
                        return Err("duplicate vertex element".into());
                    }
                    vertex_count = Some(count);
                    in_vertex = true;
                } else {
                    if vertex_count.is_none() && count > 0 {
                        return Err(format!("element `{name}` before vertex is not supported"));
                    }
                    in_vertex = false;
                }
            }
            ["property", "list", ..] if in_vertex => {
                return Err("list properties on vertices are not supported".into())
            }
            ["property", ty, name] => {
                if in_vertex {
                    props.push((ty.to_string(), name.to_string()));
                }
            }
            ["property", ..] => {}
            _ => return Err(format!("malformed header line `{line}`")),
        }
    }
    if !saw_format {
        return Err("malformed header: missing format line".into());
    }
    let n = vertex_count.ok_or("missing vertex element")?;
    let column = |name: &str, types: &[&str]| -> Result<usize, String> {
        let i = props
            .iter()
            .position(|(_, n)| n == name)
            .ok_or_else(|| format!("missing property `{name}`"))?;
        if !types.contains(&props[i].0.as_str()) {
            return Err(format!("property `{name}` has unsupported type `{}`", props[i].0));
        }
        Ok(i)
    };
    let xyz = [
        column("x", &REAL_TYPES)?,
        column("y", &REAL_TYPES)?,
        column("z", &REAL_TYPES)?,
    ];
    let rgb = [
        column("red", &BYTE_TYPES)?,
        column("green", &BYTE_TYPES)?,
        column("blue", &BYTE_TYPES)?,
    ];
    let mut points = Vec::with_capacity(n);
    let mut rows = lines.filter(|l| !l.trim().is_empty());
    for i in 0..n {
        let row = rows
            .next()
            .ok_or_else(|| format!("count mismatch: header declares {n} vertices, found {i}"))?;
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != props.len() {
            return Err(format!(
                "vertex {i}: expected {} values, found {}",
                props.len(),
                fields.len()
            ));
        }
        let real = |c: usize| -> Result<f64, String> {
            let v: f64 = fields[c]
                .parse()
                .map_err(|_| format!("vertex {i}: bad number `{}`", fields[c]))?;
            if !v.is_finite() {
                return Err(format!("vertex {i}: non-finite coordinate"));
            }
            Ok(v)
        };
        let byte = |c: usize| -> Result<u8, String> {
            fields[c]
                .parse()
                .map_err(|_| format!("vertex {i}: bad colour `{}`", fields[c]))
        };
        points.push(Point::new(
            real(xyz[0])?,
            real(xyz[1])?,
            real(xyz[2])?,
            [byte(rgb[0])?, byte(rgb[1])?, byte(rgb[2])?],
        ));
    }
    Ok(PointCloud::new(points))
}

pub fn read_ply(path: &Path) -> Result<PointCloud> {
    let bytes = read_file(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| Error::format(path, "PLY file is not ASCII"))?;
    decode_ply(text).map_err(|e| Error::format(path, e))
}

pub fn write_ply(cloud: &PointCloud, path: &Path) -> Result<()> {
    write_file(path, encode_ply(cloud).as_bytes())
}
