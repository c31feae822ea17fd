//! Certificate, loop and report files.
//!
//! Every real is written with 17 significant digits, so a file read back and
//! written again is byte-identical and reproduces the in-memory values exactly.
//! Points are flat coordinate arrays:
//!
//! | space | coordinates |
//! |-------|-------------|
//! | `s1` | `[re, im]` |
//! | `s2`, `rp2` | `[re α, im α, t]` |
//! | `wedge` | `[branch, angle]`, branch `0` for A and `1` for B |

use std::io;

use qnull::constructor::{Certificate, LayerRecord};
use qnull::homspace::HomParam;
use qnull::spaces::{Branch, DiskGrid, SampledLoop, SpacePoint, SpaceTag, SpherePoint, WedgePoint};
use qnull::{Complex64, Tolerances};
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] qnull::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

/// Wraps a JSON formatter so that floats print as `{:.16e}`.
pub struct SigDigits<F>(pub F);

macro_rules! forward {
    ($($name:ident),*) => {$(
        fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.0.$name(w)
        }
    )*};
}

macro_rules! forward_first {
    ($($name:ident),*) => {$(
        fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
            self.0.$name(w, first)
        }
    )*};
}

impl<F: Formatter> Formatter for SigDigits<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
    forward_first!(begin_array_value, begin_object_key);
}

fn with_formatter<T: Serialize + ?Sized, F: Formatter>(value: &T, f: F) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits(f));
    value
        .serialize(&mut ser)
        .expect("in-memory serialization of plain data cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Single-line JSON with 17-digit reals.
pub fn to_compact<T: Serialize + ?Sized>(value: &T) -> String {
    with_formatter(value, CompactFormatter)
}

/// Indented JSON with 17-digit reals.
pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = with_formatter(value, PrettyFormatter::new());
    s.push('\n');
    s
}

pub fn encode_point(p: &SpacePoint) -> Vec<f64> {
    match p {
        SpacePoint::S1(z) => vec![z.re, z.im],
        SpacePoint::S2(x) | SpacePoint::Rp2(x) => encode_sphere(x).to_vec(),
        SpacePoint::Wedge(w) => vec![
            match w.branch {
                Branch::A => 0.0,
                Branch::B => 1.0,
            },
            w.angle,
        ],
    }
}

fn encode_sphere(x: &SpherePoint) -> [f64; 3] {
    [x.alpha.re, x.alpha.im, x.t]
}

fn decode_sphere(c: [f64; 3]) -> SpherePoint {
    SpherePoint {
        alpha: Complex64::new(c[0], c[1]),
        t: c[2],
    }
}

/// Inverse of [`encode_point`]. No projection is applied, so values come back
/// bit for bit; whether they lie on the space is the verifier's business.
pub fn decode_point(space: SpaceTag, c: &[f64]) -> Result<SpacePoint> {
    let want = match space {
        SpaceTag::S1 | SpaceTag::Wedge => 2,
        SpaceTag::S2 | SpaceTag::Rp2 => 3,
    };
    if c.len() != want {
        return Err(FormatError::Schema(format!(
            "a point of {space} has {want} coordinates, got {}",
            c.len()
        )));
    }
    Ok(match space {
        SpaceTag::S1 => SpacePoint::S1(Complex64::new(c[0], c[1])),
        SpaceTag::S2 => SpacePoint::S2(decode_sphere([c[0], c[1], c[2]])),
        SpaceTag::Rp2 => SpacePoint::Rp2(decode_sphere([c[0], c[1], c[2]])),
        SpaceTag::Wedge => {
            let branch = if c[0] == 0.0 {
                Branch::A
            } else if c[0] == 1.0 {
                Branch::B
            } else {
                return Err(FormatError::Schema(format!("wedge branch must be 0 or 1, got {}", c[0])));
            };
            SpacePoint::Wedge(WedgePoint { branch, angle: c[1] })
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellRecord {
    x: [f64; 3],
    t1: Vec<f64>,
    t2: Vec<f64>,
}

impl CellRecord {
    fn encode(p: &HomParam) -> Self {
        CellRecord {
            x: encode_sphere(&p.x),
            t1: encode_point(&p.t1),
            t2: encode_point(&p.t2),
        }
    }

    fn decode(&self, space: SpaceTag) -> Result<HomParam> {
        Ok(HomParam::new(
            decode_sphere(self.x),
            decode_point(space, &self.t1)?,
            decode_point(space, &self.t2)?,
        ))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridRecord {
    center: CellRecord,
    rings: Vec<Vec<CellRecord>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateRecord {
    version: u32,
    space: SpaceTag,
    n: usize,
    tolerances: Tolerances,
    mesh_bound: f64,
    construction_log: Vec<LayerRecord>,
    boundary_loop: Vec<Vec<f64>>,
    grid: GridRecord,
}

/// Certificate document. One boundary point and one grid cell per line.
pub fn certificate_to_string(c: &Certificate) -> String {
    let mut s = String::new();
    let field = |s: &mut String, name: &str, value: String| {
        s.push_str(&format!("  \"{name}\": {value},\n"));
    };
    s.push_str("{\n");
    field(&mut s, "version", FORMAT_VERSION.to_string());
    field(&mut s, "space", to_compact(&c.space));
    field(&mut s, "n", "2".into());
    field(&mut s, "tolerances", to_compact(&c.tolerances));
    field(&mut s, "mesh_bound", to_compact(&c.mesh_bound));
    s.push_str("  \"construction_log\": [");
    let log: Vec<String> = c.construction_log.iter().map(|r| format!("\n    {}", to_compact(r))).collect();
    s.push_str(&log.join(","));
    s.push_str(if log.is_empty() { "],\n" } else { "\n  ],\n" });

    s.push_str("  \"boundary_loop\": [\n");
    let pts: Vec<String> = c
        .boundary_loop
        .samples()
        .iter()
        .map(|p| format!("    {}", to_compact(&encode_point(p))))
        .collect();
    s.push_str(&pts.join(",\n"));
    s.push_str("\n  ],\n");

    s.push_str("  \"grid\": {\n");
    s.push_str(&format!("    \"center\": {},\n", to_compact(&CellRecord::encode(&c.grid.center))));
    s.push_str("    \"rings\": [\n");
    let rings: Vec<String> = c
        .grid
        .rings
        .iter()
        .map(|ring| {
            let cells: Vec<String> = ring
                .iter()
                .map(|p| format!("        {}", to_compact(&CellRecord::encode(p))))
                .collect();
            format!("      [\n{}\n      ]", cells.join(",\n"))
        })
        .collect();
    s.push_str(&rings.join(",\n"));
    s.push_str("\n    ]\n  }\n}\n");
    s
}

pub fn certificate_from_str(text: &str) -> Result<Certificate> {
    let rec: CertificateRecord = serde_json::from_str(text)?;
    if rec.version != FORMAT_VERSION {
        return Err(FormatError::Schema(format!(
            "unsupported version {} (expected {FORMAT_VERSION})",
            rec.version
        )));
    }
    if rec.n != 2 {
        return Err(FormatError::Schema(format!("only n = 2 certificates exist, got n = {}", rec.n)));
    }
    let space = rec.space;
    let center = rec.grid.center.decode(space)?;
    let rings = rec
        .grid
        .rings
        .iter()
        .map(|ring| ring.iter().map(|c| c.decode(space)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let samples = rec
        .boundary_loop
        .iter()
        .map(|c| decode_point(space, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate {
        space,
        grid: DiskGrid::new(center, rings)?,
        boundary_loop: SampledLoop::new(space, samples)?,
        construction_log: rec.construction_log,
        tolerances: rec.tolerances,
        mesh_bound: rec.mesh_bound,
    })
}

/// A loop file is a JSON array of points. ℝP² points may be given by either
/// sphere representative.
pub fn loop_from_str(space: SpaceTag, text: &str) -> Result<SampledLoop> {
    let coords: Vec<Vec<f64>> = serde_json::from_str(text)?;
    let samples = coords
        .iter()
        .map(|c| {
            decode_point(space, c).map(|p| match p {
                SpacePoint::Rp2(x) => SpacePoint::rp2(x),
                p => p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledLoop::new(space, samples)?)
}

pub fn loop_to_string(lp: &SampledLoop) -> String {
    let pts: Vec<String> = lp.samples().iter().map(|p| format!("  {}", to_compact(&encode_point(p)))).collect();
    format!("[\n{}\n]\n", pts.join(",\n"))
}
