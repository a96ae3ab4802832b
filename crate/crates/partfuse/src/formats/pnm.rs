//! Binary PNM: 8-bit P5/P6 images and 16-bit P5 label maps (samples most
//! significant byte first).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use partfuse_core::imaging::{BitMask, Image};
use partfuse_core::{Grid, LabelTriple};

use crate::error::{read_file, write_file, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Header {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: u32,
    /// Offset of the first payload byte.
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header, String> {
    if bytes.len() < 2 || bytes[0] != b'P' || !(bytes[1] == b'5' || bytes[1] == b'6') {
        return Err("bad magic, expected P5 or P6".into());
    }
    let mut pos = 2;
    let mut fields = [0u64; 3];
    for field in &mut fields {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err("truncated header".into()),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err("malformed header: expected a number".into());
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| format!("header value {text} too large"))?;
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err("malformed header: missing separator before payload".into()),
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} out of range"));
    }
    Ok(Header {
        magic: [bytes[0], bytes[1]],
        width: usize::try_from(width).map_err(|_| "width too large")?,
        height: usize::try_from(height).map_err(|_| "height too large")?,
        maxval: maxval as u32,
        data_start: pos,
    })
}

fn payload<'a>(bytes: &'a [u8], header: &Header, sample_bytes: usize) -> Result<&'a [u8], String> {
    let channels = if header.magic[1] == b'6' { 3 } else { 1 };
    let len = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels * sample_bytes))
        .ok_or("image dimensions overflow")?;
    let body = &bytes[header.data_start..];
    if body.len() < len {
        return Err(format!(
            "truncated payload: need {len} bytes, have {}",
            body.len()
        ));
    }
    if body.len() > len {
        return Err(format!("{} trailing bytes after payload", body.len() - len));
    }
    Ok(body)
}

pub fn decode_image(bytes: &[u8]) -> Result<Image, String> {
    let h = parse_header(bytes)?;
    if h.maxval != 255 {
        return Err(format!(
            "maxval {} unsupported for images, expected 255",
            h.maxval
        ));
    }
    let body = payload(bytes, &h, 1)?;
    let channels = if h.magic[1] == b'6' { 3 } else { 1 };
    Image::new(h.width, h.height, channels, body.to_vec()).map_err(|e| e.to_string())
}

pub fn encode_image(image: &Image) -> Vec<u8> {
    let magic = if image.channels() == 3 { "P6" } else { "P5" };
    let mut out = format!("{magic}\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.data());
    out
}

pub fn decode_label_map(bytes: &[u8]) -> Result<Grid<u16>, String> {
    let h = parse_header(bytes)?;
    if h.magic != *b"P5" {
        return Err("label maps must be P5".into());
    }
    if h.maxval != 65535 {
        return Err(format!(
            "maxval {} unsupported for label maps, expected 65535",
            h.maxval
        ));
    }
    let body = payload(bytes, &h, 2)?;
    let data = body
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Grid::from_vec(h.width, h.height, data).map_err(|e| e.to_string())
}

pub fn encode_label_map(map: &Grid<u16>) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", map.width(), map.height()).into_bytes();
    for v in map.as_slice() {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

/// Masks are stored as 8-bit P5 with values 0 and 255.
pub fn encode_mask(mask: &BitMask) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    out.extend(mask.as_slice().iter().map(|&b| if b { 255 } else { 0 }));
    out
}

pub fn read_pnm(path: &Path) -> Result<Image> {
    decode_image(&read_file(path)?).map_err(|e| Error::format(path, e))
}

pub fn write_pnm(image: &Image, path: &Path) -> Result<()> {
    write_file(path, &encode_image(image))
}

pub fn write_mask(mask: &BitMask, path: &Path) -> Result<()> {
    write_file(path, &encode_mask(mask))
}

/// `<stem><suffix>`, appending to the final component rather than
/// replacing an extension.
pub fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(stem.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

pub const TRIPLE_SUFFIXES: [&str; 3] = [".sem.pgm", ".inst.pgm", ".part.pgm"];

pub fn triple_paths(stem: &Path) -> [PathBuf; 3] {
    TRIPLE_SUFFIXES.map(|s| with_suffix(stem, s))
}

pub fn read_label_triple(stem: &Path) -> Result<LabelTriple> {
    let [sem, inst, part] = triple_paths(stem);
    let load = |p: &PathBuf| decode_label_map(&read_file(p)?).map_err(|e| Error::format(p, e));
    let (s, i, p) = (load(&sem)?, load(&inst)?, load(&part)?);
    LabelTriple::new(s, i, p).map_err(|e| Error::format(stem, e.to_string()))
}

pub fn write_label_triple(triple: &LabelTriple, stem: &Path) -> Result<()> {
    let [sem, inst, part] = triple_paths(stem);
    write_file(&sem, &encode_label_map(&triple.semantic))?;
    write_file(&inst, &encode_label_map(&triple.instance))?;
    write_file(&part, &encode_label_map(&triple.part))
}
