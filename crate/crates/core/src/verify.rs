//! Verification reports for whole nets: per-face and per-edge numbers plus
//! the pass/fail summary derived from them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    curvatures, edge_labelings, extract_metric, face_cross_ratio_real_check, face_defects, metric_products, Embed,
    PlanarQuad, Point, QuadNet,
};
use crate::immersion::{
    christoffel_defect, face_defect_maxima, mean_curvature_defect, verify_r3, verify_s3, verify_sphere, NetR3, NetS3,
    Provenance, SphereNet,
};
use crate::io::{Ambient, NetFile};
use crate::lax::LatticeLax;
use crate::report::{Check, Report};
use crate::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub m: usize,
    pub n: usize,
    pub h: Option<f64>,
    pub k: Option<f64>,
    pub planarity: Option<f64>,
    pub circularity: Option<f64>,
    /// Scalar cross-ratio as `[real part, |imaginary part|]`.
    pub cross_ratio: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecords {
    /// `s·s₁` per horizontal edge against the Christoffel dual used for the net.
    pub metric_horizontal: Vec<f64>,
    pub metric_vertical: Vec<f64>,
    /// Edge labelings `A`, `B` for the metric normalized by `s(0,0) = 1`.
    pub labeling_a: Vec<f64>,
    pub labeling_b: Vec<f64>,
    pub labeling_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetReport {
    pub ambient: Ambient,
    pub gamma: f64,
    pub faces: Vec<FaceRecord>,
    pub edges: EdgeRecords,
    pub checks: Report,
    /// Errors that stopped a measurement; each also fails a check.
    pub errors: Vec<String>,
}

impl NetReport {
    pub fn passed(&self) -> bool {
        self.checks.all_passed()
    }
}

fn face_records<const D: usize>(f: &QuadNet<D>, normal: &QuadNet<D>) -> Vec<FaceRecord>
where
    Point<D>: Embed,
{
    f.faces()
        .map(|(m, n)| {
            let face = f.face(m, n);
            let defects = face_defects(&face).ok();
            let curv = PlanarQuad::new(face)
                .and_then(|q| curvatures(&q, &normal.face(m, n)))
                .ok();
            FaceRecord {
                m,
                n,
                h: curv.map(|c| c.0),
                k: curv.map(|c| c.1),
                planarity: defects.map(|d| d.0),
                circularity: defects.map(|d| d.1),
                cross_ratio: face_cross_ratio_real_check(&face).ok().map(|(c, _)| [c.re, c.im]),
            }
        })
        .collect()
}

fn edge_records<const D: usize>(f: &QuadNet<D>, dual: &QuadNet<D>, errors: &mut Vec<String>) -> EdgeRecords {
    let mp = match metric_products(f, dual) {
        Ok(mp) => mp,
        Err(e) => {
            errors.push(format!("metric products: {e}"));
            return EdgeRecords::default();
        }
    };
    let mut out = EdgeRecords {
        metric_horizontal: mp.horizontal.clone(),
        metric_vertical: mp.vertical.clone(),
        ..EdgeRecords::default()
    };
    match extract_metric(&mp, 1.0).and_then(|s| edge_labelings(f, &s)) {
        Ok(l) => {
            out.labeling_a = l.a;
            out.labeling_b = l.b;
            out.labeling_spread = Some(l.spread);
        }
        Err(e) => errors.push(format!("labelings: {e}")),
    }
    out
}

/// Run a measurement; an error becomes a failing check and a recorded message.
fn measure(report: &mut Report, errors: &mut Vec<String>, name: &str, tol: f64, value: Result<f64>) {
    match value {
        Ok(v) => report.push(name, v, tol),
        Err(e) => {
            errors.push(format!("{name}: {e}"));
            report.checks.push(Check::new(name, f64::INFINITY, tol));
        }
    }
}

fn unit_defect<const D: usize>(net: &QuadNet<D>, radius: f64) -> f64 {
    net.points()
        .iter()
        .map(|p| (crate::geometry::norm(p) - radius).abs() / radius)
        .fold(0.0, f64::max)
}

/// Geometric checks that need no Lax data.
fn geometric_checks<const D: usize>(
    f: &QuadNet<D>,
    normal: &QuadNet<D>,
    dual: &QuadNet<D>,
    h_target: f64,
    report: &mut Report,
    errors: &mut Vec<String>,
) {
    match face_defect_maxima(f) {
        Ok((p, c)) => {
            report.push("planarity", p, tolerance::FACE_DEFECT);
            report.push("circularity", c, tolerance::FACE_DEFECT);
        }
        Err(e) => {
            errors.push(format!("face defects: {e}"));
            report
                .checks
                .push(Check::new("planarity", f64::INFINITY, tolerance::FACE_DEFECT));
        }
    }
    measure(
        report,
        errors,
        "mean curvature",
        tolerance::MEAN_CURVATURE,
        mean_curvature_defect(f, normal, h_target),
    );
    measure(
        report,
        errors,
        "christoffel mixed area",
        1e-10,
        christoffel_defect(f, dual),
    );
}

fn finish<const D: usize>(
    ambient: Ambient,
    gamma: f64,
    f: &QuadNet<D>,
    normal: &QuadNet<D>,
    dual: &QuadNet<D>,
    checks: Report,
    mut errors: Vec<String>,
) -> NetReport
where
    Point<D>: Embed,
{
    let edges = edge_records(f, dual, &mut errors);
    NetReport {
        ambient,
        gamma,
        faces: face_records(f, normal),
        edges,
        checks,
        errors,
    }
}

/// Full report of an R³ net; with the lattice every Lax-dependent invariant is checked too.
pub fn report_r3(f: &QuadNet<3>, normal: &QuadNet<3>, lattice: Option<&LatticeLax>) -> NetReport {
    let dual = f.add_scaled(normal, 1.0);
    let mut checks = Report::default();
    let mut errors = Vec::new();
    match lattice {
        Some(lat) => {
            let net = NetR3 {
                f: f.clone(),
                dual: dual.clone(),
                normal: normal.clone(),
                provenance: Provenance {
                    lattice_hash: lat.content_hash(),
                    gamma: 0.0,
                },
            };
            match verify_r3(&net, lat) {
                Ok(r) => checks = r,
                Err(e) => {
                    errors.push(format!("lax-based checks: {e}"));
                    checks.push("lax-based checks", f64::INFINITY, 0.0);
                }
            }
        }
        None => {
            checks.push("unit normal", unit_defect(normal, 1.0), tolerance::UNIT_NORM);
            geometric_checks(f, normal, &dual, 1.0, &mut checks, &mut errors);
        }
    }
    finish(Ambient::R3, 0.0, f, normal, &dual, checks, errors)
}

/// Full report of a net in S³ built at `gamma1`.
pub fn report_s3(f: &QuadNet<4>, normal: &QuadNet<4>, gamma1: f64, lattice: Option<&LatticeLax>) -> NetReport {
    let (sin2, cos2) = (2.0 * gamma1).sin_cos();
    // H·F + N scaled by sin 2γ₁: the Christoffel dual up to scale, also at H = 0
    let dual = f.map(|p| p.map(|x| x * cos2)).add_scaled(normal, sin2);
    let mut checks = Report::default();
    let mut errors = Vec::new();
    match lattice {
        Some(lat) => {
            let net = NetS3 {
                f: f.clone(),
                normal: normal.clone(),
                gamma1,
                provenance: Provenance {
                    lattice_hash: lat.content_hash(),
                    gamma: gamma1,
                },
            };
            match verify_s3(&net, lat) {
                Ok(r) => checks = r,
                Err(e) => {
                    errors.push(format!("lax-based checks: {e}"));
                    checks.push("lax-based checks", f64::INFINITY, 0.0);
                }
            }
        }
        None => {
            checks.push("unit F", unit_defect(f, 1.0), tolerance::UNIT_NORM);
            checks.push("unit N", unit_defect(normal, 1.0), tolerance::UNIT_NORM);
            let ortho = f
                .points()
                .iter()
                .zip(normal.points())
                .map(|(p, q)| crate::geometry::dot(p, q).abs())
                .fold(0.0, f64::max);
            checks.push("<F,N> = 0", ortho, tolerance::UNIT_NORM);
            geometric_checks(f, normal, &dual, cos2 / sin2, &mut checks, &mut errors);
        }
    }
    finish(Ambient::S3, gamma1, f, normal, &dual, checks, errors)
}

/// Report of a sphere-family member.
pub fn report_sphere(f: &QuadNet<4>, normal: &QuadNet<4>, gamma1: f64, scale: f64) -> NetReport {
    let net = SphereNet {
        f: f.clone(),
        normal: normal.clone(),
        gamma1,
        scale,
        provenance: Provenance {
            lattice_hash: String::new(),
            gamma: gamma1,
        },
    };
    let h = net.mean_curvature();
    let dual = f.map(|p| p.map(|x| x * h)).add_scaled(normal, 1.0);
    let mut checks = Report::default();
    let mut errors = Vec::new();
    match verify_sphere(&net) {
        Ok(r) => checks = r,
        Err(e) => {
            errors.push(format!("sphere checks: {e}"));
            checks.push("sphere checks", f64::INFINITY, 0.0);
        }
    }
    finish(Ambient::Sphere, gamma1, f, normal, &dual, checks, errors)
}

/// Report for a net file; the embedded Lax data, if present, is used.
pub fn report_file(file: &NetFile) -> Result<NetReport> {
    let lattice = file.lattice()?;
    Ok(match file.ambient {
        Ambient::R3 => {
            let (f, n) = file.nets_r3()?;
            report_r3(&f, &n, lattice.as_ref())
        }
        Ambient::S3 => {
            let (f, n) = file.nets_r4()?;
            let g = file.provenance.gamma;
            if !(g > 0.0 && g < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidSpectralAngle { gamma: g });
            }
            report_s3(&f, &n, g, lattice.as_ref())
        }
        Ambient::Sphere => {
            let (f, n) = file.nets_r4()?;
            report_sphere(&f, &n, file.provenance.gamma, file.provenance.scale)
        }
    })
}

/// Replace tolerances by name, or all of them with `uniform`, and re-derive pass/fail.
pub fn apply_overrides(report: &mut Report, named: &BTreeMap<String, f64>, uniform: Option<f64>) {
    for c in &mut report.checks {
        if let Some(t) = named.get(&c.name).copied().or(uniform) {
            *c = Check::new(std::mem::take(&mut c.name), c.value, t);
        }
    }
}
