//! File formats: the native JSON net file, run configuration, Lax data files
//! and OBJ export.
//!
//! Floats go through serde_json's shortest round-trip formatting, so a file
//! read and written again is byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Point, QuadNet};
use crate::immersion::{NetR3, NetS3, SphereNet};
use crate::lax::{CauchyData, LatticeLax, UEdgeData, VEdgeData};
use crate::sample::{random_cauchy, RandomRanges};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    R3,
    S3,
    Sphere,
}

impl Ambient {
    pub fn dimension(self) -> usize {
        match self {
            Ambient::R3 => 3,
            Ambient::S3 | Ambient::Sphere => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Ambient::R3 => "r3",
            Ambient::S3 => "s3",
            Ambient::Sphere => "sphere",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UEdgeRecord {
    pub a: [f64; 2],
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VEdgeRecord {
    pub b: [f64; 2],
    pub v: f64,
}

impl From<&UEdgeData> for UEdgeRecord {
    fn from(e: &UEdgeData) -> Self {
        UEdgeRecord {
            a: [e.a().re, e.a().im],
            u: e.u(),
        }
    }
}

impl From<&VEdgeData> for VEdgeRecord {
    fn from(e: &VEdgeData) -> Self {
        VEdgeRecord {
            b: [e.b().re, e.b().im],
            v: e.v(),
        }
    }
}

impl UEdgeRecord {
    pub fn to_edge(&self) -> Result<UEdgeData> {
        UEdgeData::new(Complex64::new(self.a[0], self.a[1]), self.u)
    }
}

impl VEdgeRecord {
    pub fn to_edge(&self) -> Result<VEdgeData> {
        VEdgeData::new(Complex64::new(self.b[0], self.b[1]), self.v)
    }
}

/// Lax data on every edge; horizontal indexed `n·(M-1) + m`, vertical `n·M + m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaxRecord {
    pub width: usize,
    pub height: usize,
    pub horizontal: Vec<UEdgeRecord>,
    pub vertical: Vec<VEdgeRecord>,
}

impl From<&LatticeLax> for LaxRecord {
    fn from(lat: &LatticeLax) -> Self {
        LaxRecord {
            width: lat.width(),
            height: lat.height(),
            horizontal: lat.horizontal_edges().iter().map(Into::into).collect(),
            vertical: lat.vertical_edges().iter().map(Into::into).collect(),
        }
    }
}

impl LaxRecord {
    pub fn to_lattice(&self) -> Result<LatticeLax> {
        LatticeLax::from_parts(
            self.width,
            self.height,
            self.horizontal
                .iter()
                .map(UEdgeRecord::to_edge)
                .collect::<Result<_>>()?,
            self.vertical.iter().map(VEdgeRecord::to_edge).collect::<Result<_>>()?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileProvenance {
    /// SHA-256 of the canonical run configuration, if the net came from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub lattice_hash: String,
    pub gamma: f64,
    #[serde(default = "unit_scale")]
    pub scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

/// Native net file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetFile {
    pub format_version: u32,
    pub ambient: Ambient,
    pub width: usize,
    pub height: usize,
    /// Row-major over (m, n): vertex `n·M + m`.
    pub vertices: Vec<Vec<f64>>,
    /// `(F, F₁, F₁₂, F₂)`, 0-based.
    pub faces: Vec<[usize; 4]>,
    pub normals: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lax: Option<LaxRecord>,
    pub provenance: FileProvenance,
}

fn face_indices(width: usize, height: usize) -> Vec<[usize; 4]> {
    let mut faces = Vec::new();
    for n in 0..height.saturating_sub(1) {
        for m in 0..width.saturating_sub(1) {
            let i = n * width + m;
            faces.push([i, i + 1, i + width + 1, i + width]);
        }
    }
    faces
}

impl NetFile {
    fn build<const D: usize>(
        ambient: Ambient,
        f: &QuadNet<D>,
        normal: &QuadNet<D>,
        lax: Option<&LatticeLax>,
        provenance: FileProvenance,
    ) -> Self {
        NetFile {
            format_version: FORMAT_VERSION,
            ambient,
            width: f.width(),
            height: f.height(),
            vertices: f.points().iter().map(|p| p.to_vec()).collect(),
            faces: face_indices(f.width(), f.height()),
            normals: normal.points().iter().map(|p| p.to_vec()).collect(),
            lax: lax.map(Into::into),
            provenance,
        }
    }

    pub fn from_r3(net: &NetR3, lax: Option<&LatticeLax>, config_hash: Option<String>) -> Self {
        let prov = FileProvenance {
            config_hash,
            lattice_hash: net.provenance.lattice_hash.clone(),
            gamma: 0.0,
            scale: 1.0,
        };
        Self::build(Ambient::R3, &net.f, &net.normal, lax, prov)
    }

    pub fn from_s3(net: &NetS3, lax: Option<&LatticeLax>, config_hash: Option<String>) -> Self {
        let prov = FileProvenance {
            config_hash,
            lattice_hash: net.provenance.lattice_hash.clone(),
            gamma: net.gamma1,
            scale: 1.0,
        };
        Self::build(Ambient::S3, &net.f, &net.normal, lax, prov)
    }

    pub fn from_sphere(net: &SphereNet, lax: Option<&LatticeLax>, config_hash: Option<String>) -> Self {
        let prov = FileProvenance {
            config_hash,
            lattice_hash: net.provenance.lattice_hash.clone(),
            gamma: net.gamma1,
            scale: net.scale,
        };
        Self::build(Ambient::Sphere, &net.f, &net.normal, lax, prov)
    }

    /// Structural checks: version, dimensions, counts, face indices.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.format_version != FORMAT_VERSION {
            return bad(format!("unsupported format version {}", self.format_version));
        }
        let count = self.width * self.height;
        if self.width == 0 || self.height == 0 {
            return bad("empty window".into());
        }
        if self.vertices.len() != count || self.normals.len() != count {
            return bad(format!(
                "{} vertices and {} normals for a {}x{} window",
                self.vertices.len(),
                self.normals.len(),
                self.width,
                self.height
            ));
        }
        let dim = self.ambient.dimension();
        if let Some(p) = self.vertices.iter().chain(&self.normals).find(|p| p.len() != dim) {
            return bad(format!("{}-component point in a {} file", p.len(), self.ambient.tag()));
        }
        if self
            .vertices
            .iter()
            .chain(&self.normals)
            .flatten()
            .any(|x| !x.is_finite())
        {
            return bad("non-finite coordinate".into());
        }
        if self.faces != face_indices(self.width, self.height) {
            if let Some(i) = self.faces.iter().flatten().find(|&&i| i >= count) {
                return bad(format!("face index {i} out of bounds"));
            }
            return bad("face list does not match the window".into());
        }
        if let Some(lax) = &self.lax {
            if lax.width != self.width || lax.height != self.height {
                return bad("embedded Lax data has a different window".into());
            }
        }
        Ok(())
    }

    fn net<const D: usize>(&self, points: &[Vec<f64>]) -> Result<QuadNet<D>> {
        let pts = points
            .iter()
            .map(|p| {
                <Point<D>>::try_from(p.as_slice())
                    .map_err(|_| Error::InvalidInput(format!("expected {D} components, got {}", p.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        QuadNet::new(self.width, self.height, pts)
    }

    pub fn nets_r3(&self) -> Result<(QuadNet<3>, QuadNet<3>)> {
        self.validate()?;
        Ok((self.net(&self.vertices)?, self.net(&self.normals)?))
    }

    pub fn nets_r4(&self) -> Result<(QuadNet<4>, QuadNet<4>)> {
        self.validate()?;
        Ok((self.net(&self.vertices)?, self.net(&self.normals)?))
    }

    pub fn lattice(&self) -> Result<Option<LatticeLax>> {
        self.lax.as_ref().map(LaxRecord::to_lattice).transpose()
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed net file: {e}")))?;
        file.validate()?;
        Ok(file)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Stereographic projection from `(0,0,0,-1)`: `(X₁,X₂,X₃)/(1 + X₄)`.
pub fn stereographic(p: &Point<4>) -> Result<Point<3>> {
    let denom = 1.0 + p[3];
    if denom.abs() <= 1e-9 {
        return Err(Error::InvalidInput(format!("vertex {p:?} is at the projection pole")));
    }
    Ok([p[0] / denom, p[1] / denom, p[2] / denom])
}

fn fmt_coord(x: f64) -> String {
    // 17 significant digits
    let s = format!("{x:.16e}");
    let v: f64 = s.parse().expect("formatted float parses");
    if v == 0.0 {
        "0".into()
    } else {
        s
    }
}

/// OBJ text: `v` lines then 1-based quad `f` lines. S³ and sphere nets are
/// brought to the unit sphere and projected stereographically.
pub fn export_obj(file: &NetFile) -> Result<String> {
    file.validate()?;
    let points: Vec<Point<3>> = match file.ambient {
        Ambient::R3 => file.nets_r3()?.0.points().to_vec(),
        Ambient::S3 | Ambient::Sphere => {
            let radius = if file.ambient == Ambient::Sphere {
                file.provenance.scale / (2.0 * file.provenance.gamma).sin()
            } else {
                1.0
            };
            file.nets_r4()?
                .0
                .points()
                .iter()
                .map(|p| stereographic(&p.map(|x| x / radius)))
                .collect::<Result<_>>()?
        }
    };
    let mut out = String::new();
    writeln!(
        out,
        "# lawson-forge {} net {}x{}",
        file.ambient.tag(),
        file.width,
        file.height
    )
    .unwrap();
    for p in &points {
        writeln!(out, "v {} {} {}", fmt_coord(p[0]), fmt_coord(p[1]), fmt_coord(p[2])).unwrap();
    }
    for f in &file.faces {
        writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1).unwrap();
    }
    Ok(out)
}

/// How the Cauchy data of a run is produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "lowercase", deny_unknown_fields)]
pub enum CauchySpec {
    Constant {
        a: [f64; 2],
        u: f64,
        b: [f64; 2],
        v: f64,
    },
    Random {
        #[serde(default)]
        ranges: Option<RandomRanges>,
        seed: u64,
    },
    Explicit {
        row0: Vec<UEdgeRecord>,
        col0: Vec<VEdgeRecord>,
    },
}

fn default_gammas() -> Vec<f64> {
    vec![std::f64::consts::FRAC_PI_4]
}

fn default_ambients() -> Vec<Ambient> {
    vec![Ambient::R3, Ambient::S3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub width: usize,
    pub height: usize,
    pub cauchy: CauchySpec,
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    #[serde(default = "default_ambients")]
    pub ambients: Vec<Ambient>,
    /// Angles of the Euclidean-limit table (lawson only).
    #[serde(default)]
    pub limit_gammas: Vec<f64>,
    /// Per-check tolerance overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::InvalidInput(format!(
                "no faces to verify in a {}x{} window",
                self.width, self.height
            )));
        }
        if let CauchySpec::Explicit { row0, col0 } = &self.cauchy {
            if row0.len() + 1 != self.width || col0.len() + 1 != self.height {
                return Err(Error::InvalidInput(
                    "explicit Cauchy data does not match the window".into(),
                ));
            }
        }
        if self.ambients.is_empty() {
            return Err(Error::InvalidInput("no ambient targets".into()));
        }
        Ok(())
    }

    pub fn cauchy_data(&self) -> Result<CauchyData> {
        match &self.cauchy {
            CauchySpec::Constant { a, u, b, v } => CauchyData::constant(
                self.width,
                self.height,
                UEdgeData::new(Complex64::new(a[0], a[1]), *u)?,
                VEdgeData::new(Complex64::new(b[0], b[1]), *v)?,
            ),
            CauchySpec::Random { ranges, seed } => {
                random_cauchy(self.width, self.height, &ranges.clone().unwrap_or_default(), *seed)
            }
            CauchySpec::Explicit { row0, col0 } => Ok(CauchyData {
                row0: row0.iter().map(UEdgeRecord::to_edge).collect::<Result<_>>()?,
                col0: col0.iter().map(VEdgeRecord::to_edge).collect::<Result<_>>()?,
            }),
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
