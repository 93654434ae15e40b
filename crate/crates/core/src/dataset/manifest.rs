//! The CSV manifest binding image files to ground-truth poses.
//!
//! ```text
//! # posesynth-manifest v1
//! image,x,y,z,pitch,yaw,roll
//! images/train/0000000.png,-4.500000,1.600000,-4.500000,0.000000,0.000000,0.000000
//! ```
//!
//! Floats carry six decimals. Image paths are relative to the directory
//! holding the manifest and may not contain commas or line breaks.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::Pose;

pub const MANIFEST_MAGIC: &str = "# posesynth-manifest v1";
pub const MANIFEST_HEADER: &str = "image,x,y,z,pitch,yaw,roll";

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRecord {
    pub image_path: String,
    pub pose: Pose,
}

impl ManifestRecord {
    pub fn new(image_path: impl Into<String>, pose: Pose) -> Self {
        Self {
            image_path: image_path.into(),
            pose,
        }
    }
}

fn check_path(p: &str) -> std::result::Result<(), String> {
    if p.is_empty() {
        return Err("empty image path".into());
    }
    if p.contains([',', '\n', '\r']) {
        return Err(format!("image path {p:?} contains a comma or line break"));
    }
    Ok(())
}

/// Renders records as manifest text.
pub fn format_manifest(records: &[ManifestRecord]) -> Result<String> {
    let mut out = String::with_capacity(64 + records.len() * 80);
    out.push_str(MANIFEST_MAGIC);
    out.push('\n');
    out.push_str(MANIFEST_HEADER);
    out.push('\n');
    let mut seen = HashMap::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        check_path(&r.image_path).map_err(|m| Error::invalid(format!("record {i}: {m}")))?;
        if let Some(prev) = seen.insert(r.image_path.as_str(), i) {
            return Err(Error::invalid(format!(
                "records {prev} and {i} share image path {:?}",
                r.image_path
            )));
        }
        if !r.pose.is_finite() {
            return Err(Error::invalid(format!("record {i} has a non-finite pose")));
        }
        let [x, y, z, p, yw, rl] = r.pose.to_array();
        writeln!(out, "{},{x:.6},{y:.6},{z:.6},{p:.6},{yw:.6},{rl:.6}", r.image_path).expect("string write");
    }
    Ok(out)
}

/// Writes via a temporary sibling and a rename, so readers never observe
/// a partially written manifest.
pub fn write_manifest(records: &[ManifestRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = format_manifest(records)?;
    write_atomic(path, text.as_bytes())
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Parses manifest text. The magic comment line is optional on input; the
/// column header is not. `source` only labels errors.
pub fn parse_manifest(text: &str, source: &Path) -> Result<Vec<ManifestRecord>> {
    let err = |line: usize, message: String| Error::Manifest {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let mut header = lines.next();
    if let Some((_, l)) = header {
        if l.starts_with('#') {
            if l.trim() != MANIFEST_MAGIC {
                return Err(err(1, format!("unrecognized manifest version line {l:?}")));
            }
            header = lines.next();
        }
    }
    match header {
        Some((_, l)) if l.trim() == MANIFEST_HEADER => {}
        Some((n, l)) => {
            return Err(err(n, format!("bad header {l:?}, expected {MANIFEST_HEADER:?}")));
        }
        None => return Err(err(1, "missing header".into())),
    }

    let mut records = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(err(n, format!("expected 7 fields, found {}", fields.len())));
        }
        let image_path = fields[0].trim();
        check_path(image_path).map_err(|m| err(n, m))?;
        let mut v = [0.0f64; 6];
        for (k, f) in fields[1..].iter().enumerate() {
            let name = MANIFEST_HEADER.split(',').nth(k + 1).unwrap_or("?");
            let x: f64 = f
                .trim()
                .parse()
                .map_err(|_| err(n, format!("field '{name}': cannot parse {f:?} as a number")))?;
            if !x.is_finite() {
                return Err(err(n, format!("field '{name}': non-finite value {f:?}")));
            }
            v[k] = x;
        }
        if let Some(prev) = seen.insert(image_path.to_string(), n) {
            return Err(err(n, format!("duplicate image path {image_path:?} (first on line {prev})")));
        }
        records.push(ManifestRecord::new(image_path, Pose::from_array(v)));
    }
    Ok(records)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text, path)
}

/// Directory that manifest-relative image paths resolve against.
pub fn manifest_dir(manifest: &Path) -> PathBuf {
    manifest
        .parent()
        .map(Path::to_path_buf)
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| PathBuf::from("."))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Orientation, Vec3};

    fn rec(p: &str, a: [f64; 6]) -> ManifestRecord {
        ManifestRecord::new(p, Pose::from_array(a))
    }

    fn src() -> &'static Path {
        Path::new("m.csv")
    }

    #[test]
    fn round_trip() {
        let recs = vec![
            rec("images/a.png", [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            rec("images/b.png", [-4.5, 1.6, 0.25, -10.0, 135.0, 0.0]),
            rec("c.png", [0.000001, -123456.789012, 0.0, 89.999999, -179.999999, 180.0]),
        ];
        let text = format_manifest(&recs).unwrap();
        let back = parse_manifest(&text, src()).unwrap();
        assert_eq!(back, recs);
        assert_eq!(format_manifest(&back).unwrap(), text);
    }

    #[test]
    fn header_only() {
        let text = format!("{MANIFEST_MAGIC}\n{MANIFEST_HEADER}\n");
        assert!(parse_manifest(&text, src()).unwrap().is_empty());
    }

    #[test]
    fn wrong_field_count_names_line() {
        let text = format!("{MANIFEST_HEADER}\nimg/a.png,1,2\n");
        match parse_manifest(&text, src()).unwrap_err() {
            Error::Manifest { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("expected 7 fields"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = format!("{MANIFEST_MAGIC}\n{MANIFEST_HEADER}\nimg/a.png,1,2,3,4,5,6\nimg/b.png,1,2,3,4,5\n");
        assert!(matches!(parse_manifest(&text, src()), Err(Error::Manifest { line: 4, .. })));
    }

    #[test]
    fn rejects_bad_input() {
        let h = format!("{MANIFEST_MAGIC}\n{MANIFEST_HEADER}\n");
        for (body, line) in [
            ("a.png,1,2,3,4,5,6\na.png,1,2,3,4,5,6\n", 4),
            ("a.png,1,2,NaN,4,5,6\n", 3),
            ("a.png,1,2,inf,4,5,6\n", 3),
            ("a.png,1,2,x,4,5,6\n", 3),
            (",1,2,3,4,5,6\n", 3),
        ] {
            let text = format!("{h}{body}");
            match parse_manifest(&text, src()) {
                Err(Error::Manifest { line: l, .. }) => assert_eq!(l, line, "{body}"),
                other => panic!("{body}: {other:?}"),
            }
        }
        assert!(matches!(
            parse_manifest("image,x,y\n", src()),
            Err(Error::Manifest { line: 1, .. })
        ));
        assert!(matches!(
            parse_manifest("# other v9\nimage,x,y,z,pitch,yaw,roll\n", src()),
            Err(Error::Manifest { line: 1, .. })
        ));
        assert!(parse_manifest("", src()).is_err());
    }

    #[test]
    fn write_rejects_unrepresentable() {
        let p = Pose::new(Vec3::zeros(), Orientation::zero()).unwrap();
        assert!(format_manifest(&[ManifestRecord::new("a,b.png", p)]).is_err());
        assert!(format_manifest(&[ManifestRecord::new("a.png", p), ManifestRecord::new("a.png", p)]).is_err());
    }

    #[test]
    fn crlf_tolerated() {
        let text = format!("{MANIFEST_MAGIC}\r\n{MANIFEST_HEADER}\r\na.png,1,2,3,4,5,6\r\n");
        assert_eq!(parse_manifest(&text, src()).unwrap().len(), 1);
    }
}
