//! PLY reading and writing (ASCII and binary little-endian).
//!
//! Only the `vertex` element is consumed. Other elements and extra vertex
//! properties are skipped and counted.

use std::fs;
use std::path::{Path, PathBuf};

use super::{PointCloud, DEFAULT_COLOR};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlyEncoding {
    Ascii,
    BinaryLittleEndian,
}

/// A parsed cloud plus bookkeeping about what was ignored.
#[derive(Debug, Clone)]
pub struct PlyRead<T> {
    pub cloud: PointCloud<T>,
    /// Vertex properties other than x, y, z, red, green, blue.
    pub skipped_properties: usize,
    /// Element instances of non-vertex elements (faces, edges, ...).
    pub skipped_elements: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn is_float(self) -> bool {
        matches!(self, Scalar::F32 | Scalar::F64)
    }

    fn decode_le(self, b: &[u8]) -> f64 {
        match self {
            Scalar::I8 => f64::from(b[0] as i8),
            Scalar::U8 => f64::from(b[0]),
            Scalar::I16 => f64::from(i16::from_le_bytes([b[0], b[1]])),
            Scalar::U16 => f64::from(u16::from_le_bytes([b[0], b[1]])),
            Scalar::I32 => f64::from(i32::from_le_bytes([b[0], b[1], b[2], b[3]])),
            Scalar::U32 => f64::from(u32::from_le_bytes([b[0], b[1], b[2], b[3]])),
            Scalar::F32 => f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])),
            Scalar::F64 => f64::from_le_bytes(b[..8].try_into().expect("8 bytes")),
        }
    }

    /// Parses an ASCII token with the precision of the declared type.
    fn decode_text(self, tok: &str) -> Option<f64> {
        match self {
            Scalar::F32 => tok.parse::<f32>().ok().map(f64::from),
            Scalar::F64 => tok.parse::<f64>().ok(),
            _ => {
                let v = tok.parse::<i64>().ok()?;
                let (lo, hi) = match self {
                    Scalar::I8 => (i8::MIN as i64, i8::MAX as i64),
                    Scalar::U8 => (0, u8::MAX as i64),
                    Scalar::I16 => (i16::MIN as i64, i16::MAX as i64),
                    Scalar::U16 => (0, u16::MAX as i64),
                    Scalar::I32 => (i32::MIN as i64, i32::MAX as i64),
                    _ => (0, u32::MAX as i64),
                };
                (lo..=hi).contains(&v).then_some(v as f64)
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { name: String, count: Scalar, item: Scalar },
}

impl Property {
    fn name(&self) -> &str {
        match self {
            Property::Scalar { name, .. } | Property::List { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

#[derive(Debug)]
struct Header {
    encoding: PlyEncoding,
    elements: Vec<Element>,
    body_offset: usize,
}

/// Which vertex property feeds which output slot.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Coord(usize),
    Color(usize),
    Skip,
}

struct Ctx<'a> {
    path: &'a Path,
}

impl Ctx<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Ply {
            path: self.path.to_path_buf(),
            offset: offset as u64,
            message: message.into(),
        }
    }
}

fn parse_header(bytes: &[u8], ctx: &Ctx) -> Result<Header> {
    let mut offset = 0usize;
    let next_line = |offset: &mut usize| -> Option<(usize, String)> {
        if *offset >= bytes.len() {
            return None;
        }
        let start = *offset;
        let end = bytes[start..].iter().position(|&b| b == b'\n').map(|p| start + p);
        let (line_end, next) = match end {
            Some(e) => (e, e + 1),
            None => (bytes.len(), bytes.len()),
        };
        *offset = next;
        let line = String::from_utf8_lossy(&bytes[start..line_end]);
        Some((start, line.trim_end_matches('\r').to_string()))
    };

    match next_line(&mut offset) {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(ctx.err(0, "missing 'ply' magic line")),
    }

    let mut encoding = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let Some((at, line)) = next_line(&mut offset) else {
            return Err(ctx.err(bytes.len(), "header ended without 'end_header'"));
        };
        let mut tok = line.split_whitespace();
        match tok.next() {
            None | Some("comment") | Some("obj_info") => {}
            Some("format") => {
                let fmt = tok.next().unwrap_or("");
                encoding = Some(match fmt {
                    "ascii" => PlyEncoding::Ascii,
                    "binary_little_endian" => PlyEncoding::BinaryLittleEndian,
                    "binary_big_endian" => {
                        return Err(ctx.err(at, "unsupported format binary_big_endian"))
                    }
                    other => return Err(ctx.err(at, format!("unknown format '{other}'"))),
                });
                if tok.next() != Some("1.0") {
                    return Err(ctx.err(at, "unsupported PLY version (expected 1.0)"));
                }
            }
            Some("element") => {
                let (Some(name), Some(count)) = (tok.next(), tok.next()) else {
                    return Err(ctx.err(at, "element line needs a name and a count"));
                };
                let count = count
                    .parse::<usize>()
                    .map_err(|_| ctx.err(at, format!("bad element count '{count}'")))?;
                elements.push(Element {
                    name: name.to_string(),
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| ctx.err(at, "property declared before any element"))?;
                let words: Vec<&str> = tok.collect();
                let prop = match words.as_slice() {
                    ["list", count, item, name] => Property::List {
                        name: name.to_string(),
                        count: Scalar::parse(count)
                            .filter(|s| !s.is_float())
                            .ok_or_else(|| ctx.err(at, format!("bad list count type '{count}'")))?,
                        item: Scalar::parse(item)
                            .ok_or_else(|| ctx.err(at, format!("unknown type '{item}'")))?,
                    },
                    [ty, name] => Property::Scalar {
                        name: name.to_string(),
                        ty: Scalar::parse(ty).ok_or_else(|| ctx.err(at, format!("unknown type '{ty}'")))?,
                    },
                    _ => return Err(ctx.err(at, format!("malformed property line '{line}'"))),
                };
                el.properties.push(prop);
            }
            Some("end_header") => break,
            Some(other) => return Err(ctx.err(at, format!("unexpected header keyword '{other}'"))),
        }
    }
    let encoding = encoding.ok_or_else(|| ctx.err(0, "header has no format line"))?;
    Ok(Header {
        encoding,
        elements,
        body_offset: offset,
    })
}

fn vertex_slots(el: &Element, ctx: &Ctx, at: usize) -> Result<(Vec<Slot>, usize)> {
    let mut slots = Vec::with_capacity(el.properties.len());
    let mut seen = [false; 3];
    let mut skipped = 0;
    for p in &el.properties {
        let slot = match (p, p.name()) {
            (Property::Scalar { .. }, "x") => Slot::Coord(0),
            (Property::Scalar { .. }, "y") => Slot::Coord(1),
            (Property::Scalar { .. }, "z") => Slot::Coord(2),
            (Property::Scalar { .. }, "red") => Slot::Color(0),
            (Property::Scalar { .. }, "green") => Slot::Color(1),
            (Property::Scalar { .. }, "blue") => Slot::Color(2),
            _ => {
                skipped += 1;
                Slot::Skip
            }
        };
        if let Slot::Coord(k) = slot {
            seen[k] = true;
        }
        slots.push(slot);
    }
    if seen.iter().any(|s| !s) {
        return Err(ctx.err(at, "vertex element lacks x, y and z properties"));
    }
    Ok((slots, skipped))
}

fn color_channel(v: f64, ty: Scalar) -> u8 {
    let v = if ty.is_float() { v * 255.0 } else { v };
    v.round().clamp(0.0, 255.0) as u8
}

/// Sequential reader over the body, in either encoding.
trait BodyReader {
    fn scalar(&mut self, ty: Scalar, what: &dyn Fn() -> String) -> Result<f64>;
}

struct BinaryReader<'a, 'c> {
    bytes: &'a [u8],
    pos: usize,
    ctx: &'c Ctx<'c>,
}

impl BodyReader for BinaryReader<'_, '_> {
    #[inline]
    fn scalar(&mut self, ty: Scalar, what: &dyn Fn() -> String) -> Result<f64> {
        let n = ty.size();
        if self.pos + n > self.bytes.len() {
            return Err(self.ctx.err(
                self.pos,
                format!("truncated body: unexpected end of data reading {}", what()),
            ));
        }
        let v = ty.decode_le(&self.bytes[self.pos..self.pos + n]);
        self.pos += n;
        Ok(v)
    }
}

struct AsciiReader<'a, 'c> {
    bytes: &'a [u8],
    pos: usize,
    ctx: &'c Ctx<'c>,
}

impl AsciiReader<'_, '_> {
    fn token(&mut self) -> Option<(usize, &str)> {
        let b = self.bytes;
        while self.pos < b.len() && b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= b.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < b.len() && !b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        std::str::from_utf8(&b[start..self.pos]).ok().map(|s| (start, s))
    }
}

impl BodyReader for AsciiReader<'_, '_> {
    fn scalar(&mut self, ty: Scalar, what: &dyn Fn() -> String) -> Result<f64> {
        let end = self.bytes.len();
        let ctx = self.ctx;
        let (at, tok) = self.token().ok_or_else(|| {
            ctx.err(end, format!("truncated body: unexpected end of data reading {}", what()))
        })?;
        ty.decode_text(tok)
            .ok_or_else(|| ctx.err(at, format!("invalid value '{tok}' for {}", what())))
    }
}

fn read_body<T: Real, R: BodyReader>(
    header: &Header,
    reader: &mut R,
    ctx: &Ctx,
) -> Result<PlyRead<T>> {
    let mut cloud = PointCloud::new();
    let mut skipped_properties = 0;
    let mut skipped_elements = 0;
    let mut saw_vertex = false;

    for el in &header.elements {
        if el.name == "vertex" && !saw_vertex {
            saw_vertex = true;
            let (slots, skipped) = vertex_slots(el, ctx, header.body_offset)?;
            skipped_properties = skipped;
            cloud = PointCloud::with_capacity(el.count);
            for i in 0..el.count {
                let mut xyz = [0.0f64; 3];
                let mut rgb = DEFAULT_COLOR;
                for (prop, slot) in el.properties.iter().zip(&slots) {
                    let what = || format!("vertex {i} property '{}'", prop.name());
                    match (prop, slot) {
                        (Property::Scalar { ty, .. }, Slot::Coord(k)) => xyz[*k] = reader.scalar(*ty, &what)?,
                        (Property::Scalar { ty, .. }, Slot::Color(k)) => {
                            rgb[*k] = color_channel(reader.scalar(*ty, &what)?, *ty)
                        }
                        _ => skip_property(prop, reader, &what)?,
                    }
                }
                let p = Vec3::new(T::lit(xyz[0]), T::lit(xyz[1]), T::lit(xyz[2]));
                if !p.is_finite() {
                    return Err(ctx.err(header.body_offset, format!("vertex {i} has non-finite coordinates")));
                }
                cloud.push(p, rgb);
            }
        } else {
            skipped_elements += el.count;
            for i in 0..el.count {
                for prop in &el.properties {
                    let what = || format!("{} {i} property '{}'", el.name, prop.name());
                    skip_property(prop, reader, &what)?;
                }
            }
        }
    }
    if !saw_vertex {
        return Err(ctx.err(header.body_offset, "no vertex element declared"));
    }
    Ok(PlyRead {
        cloud,
        skipped_properties,
        skipped_elements,
    })
}

fn skip_property<R: BodyReader>(prop: &Property, reader: &mut R, what: &dyn Fn() -> String) -> Result<()> {
    match prop {
        Property::Scalar { ty, .. } => {
            reader.scalar(*ty, what)?;
        }
        Property::List { count, item, .. } => {
            let n = reader.scalar(*count, what)?;
            for _ in 0..n as usize {
                reader.scalar(*item, what)?;
            }
        }
    }
    Ok(())
}

/// Parses an in-memory PLY document. `source` only labels errors.
pub fn read_ply<T: Real>(bytes: &[u8], source: &Path) -> Result<PlyRead<T>> {
    let ctx = Ctx { path: source };
    let header = parse_header(bytes, &ctx)?;
    match header.encoding {
        PlyEncoding::Ascii => {
            let mut r = AsciiReader {
                bytes,
                pos: header.body_offset,
                ctx: &ctx,
            };
            read_body(&header, &mut r, &ctx)
        }
        PlyEncoding::BinaryLittleEndian => {
            let mut r = BinaryReader {
                bytes,
                pos: header.body_offset,
                ctx: &ctx,
            };
            read_body(&header, &mut r, &ctx)
        }
    }
}

/// Loads the vertices of a PLY file, warning about anything skipped.
pub fn load_ply<T: Real>(path: impl AsRef<Path>) -> Result<PointCloud<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let read = read_ply(&bytes, path)?;
    if read.skipped_properties > 0 || read.skipped_elements > 0 {
        log::warn!(
            "{}: skipped {} extra vertex properties and {} non-vertex element instances",
            path.display(),
            read.skipped_properties,
            read.skipped_elements
        );
    }
    Ok(read.cloud)
}

/// Serializes positions (as `float` or `double` per `T`) and uchar colors.
pub fn encode_ply<T: Real>(cloud: &PointCloud<T>, encoding: PlyEncoding) -> Vec<u8> {
    let fmt = match encoding {
        PlyEncoding::Ascii => "ascii",
        PlyEncoding::BinaryLittleEndian => "binary_little_endian",
    };
    let ty = T::PLY_TYPE;
    let mut out = format!(
        "ply\nformat {fmt} 1.0\nelement vertex {}\nproperty {ty} x\nproperty {ty} y\nproperty {ty} z\n\
         property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n",
        cloud.len()
    )
    .into_bytes();
    match encoding {
        PlyEncoding::Ascii => {
            use std::fmt::Write;
            let mut s = String::new();
            for (p, c) in cloud.iter() {
                writeln!(s, "{} {} {} {} {} {}", p.x, p.y, p.z, c[0], c[1], c[2]).expect("string write");
            }
            out.extend_from_slice(s.as_bytes());
        }
        PlyEncoding::BinaryLittleEndian => {
            out.reserve(cloud.len() * (3 * std::mem::size_of::<T>() + 3));
            for (p, c) in cloud.iter() {
                p.x.write_le(&mut out);
                p.y.write_le(&mut out);
                p.z.write_le(&mut out);
                out.extend_from_slice(c);
            }
        }
    }
    out
}

pub fn write_ply<T: Real>(cloud: &PointCloud<T>, path: impl AsRef<Path>, encoding: PlyEncoding) -> Result<()> {
    let path: PathBuf = path.as_ref().to_path_buf();
    fs::write(&path, encode_ply(cloud, encoding)).map_err(|e| Error::io(path, e))
}
