//! Nets read off the frame: the CMC-1 net in R³ with its Gauss map and
//! Christoffel dual, CMC nets in S³, and their rescalings onto round spheres.

use serde::{Deserialize, Serialize};

use crate::algebra::{project_r3, project_r4, Quaternion};
use crate::error::{Error, Location, Result};
use crate::frames::{integrate_frame, integrate_frame_with_derivative, FrameWithDerivative};
use crate::geometry::{
    add, curvatures, dot, edge_parallel_defect, face_cross_ratio_real_check, face_defects, mixed_area, norm, scale,
    signed_area, sub, wedge_norm, PlanarQuad, Point, QuadNet,
};
use crate::lax::{alpha, beta, LatticeLax, SpectralPoint};
use crate::report::Report;
use crate::tolerance;

/// Where a net came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `LatticeLax::content_hash` of the source lattice.
    pub lattice_hash: String,
    /// Spectral angle of the construction (0 for R³, γ₁ for S³).
    pub gamma: f64,
}

/// CMC-1 net `F̂` in R³, its dual `F̌ = F̂ + N̂` and the Gauss map `N̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetR3 {
    pub f: QuadNet<3>,
    pub dual: QuadNet<3>,
    pub normal: QuadNet<3>,
    pub provenance: Provenance,
}

/// Net `F` in S³ ⊂ R⁴ with tangent Gauss map `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetS3 {
    pub f: QuadNet<4>,
    pub normal: QuadNet<4>,
    pub gamma1: f64,
    pub provenance: Provenance,
}

/// `t·F/sin 2γ₁` on the sphere of radius `t/sin 2γ₁`; `t = 1` unless rescaled,
/// and then `H² + κ = 1/t²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereNet {
    pub f: QuadNet<4>,
    pub normal: QuadNet<4>,
    pub gamma1: f64,
    pub scale: f64,
    pub provenance: Provenance,
}

impl NetS3 {
    /// `H = cot 2γ₁`.
    pub fn mean_curvature(&self) -> f64 {
        let t = 2.0 * self.gamma1;
        t.cos() / t.sin()
    }
}

impl SphereNet {
    pub fn radius(&self) -> f64 {
        self.scale / (2.0 * self.gamma1).sin()
    }

    /// Sectional curvature of the ambient sphere, `sin² 2γ₁` at unit scale.
    pub fn kappa(&self) -> f64 {
        ((2.0 * self.gamma1).sin() / self.scale).powi(2)
    }

    /// `H = cos 2γ₁` at unit scale.
    pub fn mean_curvature(&self) -> f64 {
        (2.0 * self.gamma1).cos() / self.scale
    }

    /// Uniform rescaling, moving the family to `H² + κ = 1/t²`.
    pub fn scaled(&self, t: f64) -> Result<SphereNet> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("scale factor {t} must be positive")));
        }
        Ok(SphereNet {
            f: self.f.map(|p| scale(p, t)),
            scale: self.scale * t,
            ..self.clone()
        })
    }
}

/// Integrate the frame at γ = 0 with its derivative and immerse.
pub fn immerse_lattice_r3(lat: &LatticeLax) -> Result<NetR3> {
    let fd = integrate_frame_with_derivative(lat)?;
    immerse_r3(&fd, lat.content_hash())
}

/// `N̂ = -Φ⁻¹𝕜Φ`, `F̂ = -Φ⁻¹Φ̇ - ½N̂`, `F̌ = F̂ + N̂`.
pub fn immerse_r3(fd: &FrameWithDerivative, lattice_hash: String) -> Result<NetR3> {
    let (w, h) = (fd.frame.width(), fd.frame.height());
    let mut f = Vec::with_capacity(w * h);
    let mut dual = Vec::with_capacity(w * h);
    let mut normal = Vec::with_capacity(w * h);
    for n in 0..h {
        for m in 0..w {
            let phi = fd.frame.at(m, n);
            let inv = phi.adjoint();
            let nq = -(inv * Quaternion::k() * *phi);
            let fq = -(inv * *fd.derivative_at(m, n)) - nq.scale(0.5);
            let loc = Location::Vertex { m, n };
            let nv = project_r3(&nq).map_err(|e| e.at(loc))?;
            let fv = project_r3(&fq).map_err(|e| e.at(loc))?;
            f.push(fv);
            normal.push(nv);
            dual.push(add(&fv, &nv));
        }
    }
    Ok(NetR3 {
        f: QuadNet::new(w, h, f)?,
        dual: QuadNet::new(w, h, dual)?,
        normal: QuadNet::new(w, h, normal)?,
        provenance: Provenance {
            lattice_hash,
            gamma: 0.0,
        },
    })
}

/// `F = Φ(λ₁)⁻¹MΦ(λ₁⁻¹)`, `N = -Φ(λ₁)⁻¹𝕜MΦ(λ₁⁻¹)` with `M = exp(γ₁𝕜)`.
pub fn immerse_s3(lat: &LatticeLax, gamma1: f64) -> Result<NetS3> {
    if !(gamma1 > 0.0 && gamma1 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidSpectralAngle { gamma: gamma1 });
    }
    let phi1 = integrate_frame(lat, SpectralPoint::new(gamma1))?;
    let phi2 = integrate_frame(lat, SpectralPoint::new(-gamma1))?;
    let mm = Quaternion::exp_k(gamma1);
    let kmm = Quaternion::k() * mm;
    let (w, h) = (lat.width(), lat.height());
    let mut f = Vec::with_capacity(w * h);
    let mut normal = Vec::with_capacity(w * h);
    for n in 0..h {
        for m in 0..w {
            let inv = phi1.at(m, n).adjoint();
            let p2 = *phi2.at(m, n);
            let loc = Location::Vertex { m, n };
            f.push(project_r4(&(inv * mm * p2)).map_err(|e| e.at(loc))?);
            normal.push(project_r4(&(-(inv * kmm * p2))).map_err(|e| e.at(loc))?);
        }
    }
    Ok(NetS3 {
        f: QuadNet::new(w, h, f)?,
        normal: QuadNet::new(w, h, normal)?,
        gamma1,
        provenance: Provenance {
            lattice_hash: lat.content_hash(),
            gamma: gamma1,
        },
    })
}

pub fn scale_to_sphere(net: &NetS3) -> Result<SphereNet> {
    let sin2 = (2.0 * net.gamma1).sin();
    if !(sin2 > 1e-12) {
        return Err(Error::SphereRadiusOverflow { sin2 });
    }
    Ok(SphereNet {
        f: net.f.map(|p| scale(p, 1.0 / sin2)),
        normal: net.normal.clone(),
        gamma1: net.gamma1,
        scale: 1.0,
        provenance: net.provenance.clone(),
    })
}

// ---------------------------------------------------------------------------
// verification

fn rel(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs().max(1.0)
}

/// Worst `‖e_N ∧ e_F‖/(‖e_N‖‖e_F‖)` and worst relative mismatch of the
/// expected proportionality factor `e_N = k·e_F`, per edge.
fn edge_factor_defects<const D: usize>(
    f: &QuadNet<D>,
    g: &QuadNet<D>,
    horizontal: impl Fn(usize, usize) -> f64,
    vertical: impl Fn(usize, usize) -> f64,
) -> (f64, f64) {
    let (w, h) = (f.width(), f.height());
    let mut wedge: f64 = 0.0;
    let mut factor: f64 = 0.0;
    let mut visit = |ef: Point<D>, eg: Point<D>, k: f64| {
        let (nf, ng) = (norm(&ef), norm(&eg));
        if nf > 0.0 && ng > 0.0 {
            wedge = wedge.max(wedge_norm(&ef, &eg) / (nf * ng));
        }
        let miss = norm(&sub(&eg, &scale(&ef, k)));
        factor = factor.max(miss / (nf * k.abs()).max(f64::MIN_POSITIVE));
    };
    for n in 0..h {
        for m in 0..w {
            if m + 1 < w {
                visit(f.horizontal_edge(m, n), g.horizontal_edge(m, n), horizontal(m, n));
            }
            if n + 1 < h {
                visit(f.vertical_edge(m, n), g.vertical_edge(m, n), vertical(m, n));
            }
        }
    }
    (wedge, factor)
}

/// Worst relative mismatch of `‖dF₀₁‖²`, `‖dF₀₂‖²` against per-edge targets.
fn edge_length_defect<const D: usize>(
    f: &QuadNet<D>,
    horizontal: impl Fn(usize, usize) -> Result<f64>,
    vertical: impl Fn(usize, usize) -> Result<f64>,
) -> Result<f64> {
    let (w, h) = (f.width(), f.height());
    let mut worst: f64 = 0.0;
    for n in 0..h {
        for m in 0..w {
            if m + 1 < w {
                let e = f.horizontal_edge(m, n);
                worst = worst.max(rel(dot(&e, &e), horizontal(m, n)?));
            }
            if n + 1 < h {
                let e = f.vertical_edge(m, n);
                worst = worst.max(rel(dot(&e, &e), vertical(m, n)?));
            }
        }
    }
    Ok(worst)
}

/// Worst planarity and circularity defects over all faces.
pub fn face_defect_maxima<const D: usize>(net: &QuadNet<D>) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for (m, n) in net.faces() {
        let (p, c) = face_defects(&net.face(m, n)).map_err(|e| e.at(Location::Quad { m, n }))?;
        worst = (worst.0.max(p), worst.1.max(c));
    }
    Ok(worst)
}

/// Worst `|cr + β²/α²|` over faces, relative to `β²/α²`.
fn cross_ratio_defect<const D: usize>(net: &QuadNet<D>, lat: &LatticeLax, s: SpectralPoint) -> Result<f64>
where
    Point<D>: crate::geometry::Embed,
{
    let mut worst: f64 = 0.0;
    for (m, n) in net.faces() {
        let loc = Location::Quad { m, n };
        let (cr, _) = face_cross_ratio_real_check(&net.face(m, n)).map_err(|e| e.at(loc))?;
        let a = alpha(lat.u_edge(m, n), s).map_err(|e| e.at(loc))?;
        let b = beta(lat.v_edge(m, n), s).map_err(|e| e.at(loc))?;
        let target = -(b * b) / (a * a);
        worst = worst.max(rel(cr.re, target)).max(cr.im / target.abs().max(1.0));
    }
    Ok(worst)
}

/// Per-face Steiner mean curvature of `f` with Gauss map `normal`, oriented
/// so that the `f` face frame is used for both. Returns the worst deviation from `target`.
pub fn mean_curvature_defect<const D: usize>(f: &QuadNet<D>, normal: &QuadNet<D>, target: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, n) in f.faces() {
        let loc = Location::Quad { m, n };
        let quad = PlanarQuad::new(f.face(m, n)).map_err(|e| e.at(loc))?;
        let (hf, _) = curvatures(&quad, &normal.face(m, n)).map_err(|e| e.at(loc))?;
        worst = worst.max((hf - target).abs());
    }
    Ok(worst)
}

/// Worst `|A(f, g)|/|A(f)|` over faces.
pub fn christoffel_defect<const D: usize>(f: &QuadNet<D>, g: &QuadNet<D>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (m, n) in f.faces() {
        let loc = Location::Quad { m, n };
        let quad = PlanarQuad::new(f.face(m, n)).map_err(|e| e.at(loc))?;
        let area = signed_area(&quad).map_err(|e| e.at(loc))?;
        let mixed = mixed_area(&quad, &g.face(m, n)).map_err(|e| e.at(loc))?;
        worst = worst.max(mixed.abs() / area.abs());
    }
    Ok(worst)
}

fn max_over<const D: usize>(net: &QuadNet<D>, f: impl Fn(&Point<D>, usize) -> f64) -> f64 {
    net.points()
        .iter()
        .enumerate()
        .map(|(i, p)| f(p, i))
        .fold(0.0, f64::max)
}

/// Every invariant of an R³ net, measured against the lattice it came from.
pub fn verify_r3(net: &NetR3, lat: &LatticeLax) -> Result<Report> {
    let s = SpectralPoint::euclidean();
    let mut r = Report::default();
    let dual = max_over(&net.dual, |p, i| {
        norm(&sub(p, &add(&net.f.points()[i], &net.normal.points()[i])))
    });
    r.push("dual = F + N", dual, 1e-12);
    r.push(
        "unit normal",
        max_over(&net.normal, |p, _| (norm(p) - 1.0).abs()),
        tolerance::UNIT_NORM,
    );
    let (planar, circular) = face_defect_maxima(&net.f)?;
    r.push("planarity", planar, tolerance::FACE_DEFECT);
    r.push("circularity", circular, tolerance::FACE_DEFECT);
    let lengths = edge_length_defect(
        &net.f,
        |m, n| {
            let e = lat.u_edge(m, n);
            Ok(4.0 * e.u() * e.u() / alpha(e, s)?.powi(2))
        },
        |m, n| {
            let e = lat.v_edge(m, n);
            Ok(4.0 * e.v() * e.v() / beta(e, s)?.powi(2))
        },
    )?;
    r.push("edge lengths", lengths, tolerance::EDGE_LENGTH);
    let (wedge, factor) = edge_factor_defects(
        &net.f,
        &net.normal,
        |m, n| -(1.0 + lat.u_edge(m, n).u().powi(-2)),
        |m, n| lat.v_edge(m, n).v().powi(-2) - 1.0,
    );
    r.push("edge parallelism", wedge, 1e-10);
    r.push("normal edge factors", factor, 1e-10);
    r.push(
        "cross ratio",
        cross_ratio_defect(&net.f, lat, s)?,
        tolerance::CROSS_RATIO,
    );
    r.push("christoffel mixed area", christoffel_defect(&net.f, &net.dual)?, 1e-10);
    r.push(
        "mean curvature",
        mean_curvature_defect(&net.f, &net.normal, 1.0)?,
        tolerance::MEAN_CURVATURE,
    );
    Ok(r)
}

/// Every invariant of an S³ net.
pub fn verify_s3(net: &NetS3, lat: &LatticeLax) -> Result<Report> {
    let s = SpectralPoint::new(net.gamma1);
    let (sin2, cos2) = (2.0 * net.gamma1).sin_cos();
    let hm = net.mean_curvature();
    let mut r = Report::default();
    r.push(
        "unit F",
        max_over(&net.f, |p, _| (norm(p) - 1.0).abs()),
        tolerance::UNIT_NORM,
    );
    r.push(
        "unit N",
        max_over(&net.normal, |p, _| (norm(p) - 1.0).abs()),
        tolerance::UNIT_NORM,
    );
    r.push(
        "<F,N> = 0",
        max_over(&net.f, |p, i| dot(p, &net.normal.points()[i]).abs()),
        tolerance::UNIT_NORM,
    );
    let (planar, circular) = face_defect_maxima(&net.f)?;
    r.push("planarity", planar, tolerance::FACE_DEFECT);
    r.push("circularity", circular, tolerance::FACE_DEFECT);
    let lengths = edge_length_defect(
        &net.f,
        |m, n| {
            let e = lat.u_edge(m, n);
            Ok(4.0 * e.u() * e.u() * sin2 * sin2 / alpha(e, s)?.powi(2))
        },
        |m, n| {
            let e = lat.v_edge(m, n);
            Ok(4.0 * e.v() * e.v() * sin2 * sin2 / beta(e, s)?.powi(2))
        },
    )?;
    r.push("edge lengths", lengths, tolerance::EDGE_LENGTH);
    let (wedge, factor) = edge_factor_defects(
        &net.f,
        &net.normal,
        |m, n| -(lat.u_edge(m, n).u().powi(-2) + cos2) / sin2,
        |m, n| (lat.v_edge(m, n).v().powi(-2) - cos2) / sin2,
    );
    r.push("edge parallelism", wedge, 1e-10);
    r.push("normal edge factors", factor, 1e-10);
    // Christoffel dual: F* = F + N/H, or N when H = 0; in both cases the
    // combination H·F + N has edges -u⁻²·dF and v⁻²·dF up to the factor 1/sin 2γ₁
    let dual = net.f.map(|p| scale(p, cos2)).add_scaled(&net.normal, sin2);
    let (dual_wedge, dual_factor) = edge_factor_defects(
        &net.f,
        &dual,
        |m, n| -lat.u_edge(m, n).u().powi(-2),
        |m, n| lat.v_edge(m, n).v().powi(-2),
    );
    r.push("dual edge parallelism", dual_wedge, 1e-10);
    r.push("dual edge factors", dual_factor, 1e-10);
    r.push(
        "cross ratio",
        cross_ratio_defect(&net.f, lat, s)?,
        tolerance::CROSS_RATIO,
    );
    r.push(
        "mean curvature",
        mean_curvature_defect(&net.f, &net.normal, hm)?,
        tolerance::MEAN_CURVATURE,
    );
    Ok(r)
}

pub fn verify_sphere(net: &SphereNet) -> Result<Report> {
    let mut r = Report::default();
    let radius = net.radius();
    r.push(
        "radius",
        max_over(&net.f, |p, _| (norm(p) - radius).abs() / radius),
        1e-11,
    );
    r.push(
        "mean curvature",
        mean_curvature_defect(&net.f, &net.normal, net.mean_curvature())?,
        tolerance::MEAN_CURVATURE,
    );
    r.push(
        "H^2 + kappa = 1/scale^2",
        (net.mean_curvature().powi(2) + net.kappa() - net.scale.powi(-2)).abs(),
        tolerance::CONSERVATION,
    );
    Ok(r)
}

/// Edge-parallelism of two whole nets (max over faces).
pub fn nets_edge_parallel<const D: usize>(a: &QuadNet<D>, b: &QuadNet<D>) -> f64 {
    a.faces()
        .map(|(m, n)| edge_parallel_defect(&a.face(m, n), &b.face(m, n)))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::{propagate, CauchyData, UEdgeData, VEdgeData};
    use crate::sample::{random_cauchy, RandomRanges};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn constant(w: usize, h: usize) -> LatticeLax {
        let u = UEdgeData::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        let v = VEdgeData::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        propagate(&CauchyData::constant(w, h, u, v).unwrap()).unwrap()
    }

    fn close<const D: usize>(p: &Point<D>, q: &[f64]) -> bool {
        p.iter().zip(q).all(|(a, b)| (a - b).abs() < 1e-14)
    }

    #[test]
    fn r3_base_vertex_and_constant_example() {
        let net = immerse_lattice_r3(&constant(3, 3)).unwrap();
        assert!(close(net.f.at(0, 0), &[0.0, 0.0, 0.5]));
        assert!(close(net.normal.at(0, 0), &[0.0, 0.0, -1.0]));
        assert!(close(net.f.at(1, 0), &[-0.4, 0.0, -0.3]));
        assert!(close(net.normal.at(1, 0), &[0.8, 0.0, 0.6]));
        let df = net.f.horizontal_edge(0, 0);
        let dn = net.normal.horizontal_edge(0, 0);
        assert!((dot(&df, &df) - 0.8).abs() < 1e-14);
        assert!(close(&dn, &scale(&df, -2.0)));
    }

    #[test]
    fn s3_base_vertex_at_quarter_turn() {
        let net = immerse_s3(&constant(2, 2), FRAC_PI_4).unwrap();
        let r = 0.5f64.sqrt();
        assert!(close(net.f.at(0, 0), &[0.0, 0.0, r, r]));
        assert!(close(net.normal.at(0, 0), &[0.0, 0.0, -r, r]));
        let e = net.f.horizontal_edge(0, 0);
        assert!((dot(&e, &e) - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn invalid_spectral_angles() {
        let lat = constant(2, 2);
        for g in [0.0, FRAC_PI_2, -0.1, 2.0, f64::NAN] {
            assert!(matches!(immerse_s3(&lat, g), Err(Error::InvalidSpectralAngle { .. })));
        }
    }

    #[test]
    fn sphere_scaling_examples() {
        let lat = constant(3, 3);
        let sp = scale_to_sphere(&immerse_s3(&lat, FRAC_PI_4).unwrap()).unwrap();
        assert!((sp.radius() - 1.0).abs() < 1e-15 && sp.mean_curvature().abs() < 1e-15);
        let sp = scale_to_sphere(&immerse_s3(&lat, FRAC_PI_6).unwrap()).unwrap();
        assert!((sp.radius() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((sp.kappa() - 0.75).abs() < 1e-15 && (sp.mean_curvature() - 0.5).abs() < 1e-15);
        let sp = scale_to_sphere(&immerse_s3(&lat, std::f64::consts::PI / 12.0).unwrap()).unwrap();
        assert!((sp.kappa() - 0.25).abs() < 1e-15);
        assert!((sp.mean_curvature() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let big = sp.scaled(2.0).unwrap();
        assert!((big.mean_curvature().powi(2) + big.kappa() - 0.25).abs() < 1e-15);
        assert!(verify_sphere(&big).unwrap().all_passed());
        let mut tiny = immerse_s3(&lat, FRAC_PI_4).unwrap();
        tiny.gamma1 = 1e-14;
        assert!(matches!(
            scale_to_sphere(&tiny),
            Err(Error::SphereRadiusOverflow { .. })
        ));
    }

    fn random_lattice(seed: u64, size: usize) -> LatticeLax {
        let c = random_cauchy(size, size, &RandomRanges::default(), seed).unwrap();
        propagate(&c).unwrap()
    }

    fn assert_report(r: &Report) {
        for c in &r.checks {
            assert!(c.passed, "{} = {:e} > {:e}", c.name, c.value, c.tolerance);
        }
    }

    #[test]
    fn random_r3_nets_verify() {
        for seed in 0..4 {
            let lat = random_lattice(seed, 5);
            assert_report(&verify_r3(&immerse_lattice_r3(&lat).unwrap(), &lat).unwrap());
        }
    }

    #[test]
    fn random_s3_nets_verify() {
        for seed in 0..3 {
            let lat = random_lattice(seed, 5);
            for g in [FRAC_PI_4, FRAC_PI_6, 0.3, 1.1] {
                let net = immerse_s3(&lat, g).unwrap();
                assert_report(&verify_s3(&net, &lat).unwrap());
                assert_report(&verify_sphere(&scale_to_sphere(&net).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn trapezoids_and_normal_angles_in_r3() {
        use crate::geometry::{edge_labelings, extract_metric, metric_products};
        for seed in 0..3 {
            let net = immerse_lattice_r3(&random_lattice(seed, 5)).unwrap();
            let mp = metric_products(&net.f, &net.dual).unwrap();
            // crossing trapezoids along the first direction, embedded along the second
            assert!(mp.horizontal.iter().all(|&x| x < 0.0));
            assert!(mp.vertical.iter().all(|&x| x > 0.0));
            let l = edge_labelings(&net.f, &extract_metric(&mp, 1.0).unwrap()).unwrap();
            let w = net.f.width();
            for n in 0..net.f.height() {
                for m in 0..w - 1 {
                    let lhs = dot(&net.f.horizontal_edge(m, n), net.normal.at(m, n));
                    let rhs = 0.5 * l.a[n * (w - 1) + m] * (mp.h(m, n) - 1.0);
                    assert!((lhs - rhs).abs() < 1e-9, "{lhs} {rhs}");
                }
            }
            for n in 0..net.f.height() - 1 {
                for m in 0..w {
                    let lhs = dot(&net.f.vertical_edge(m, n), net.normal.at(m, n));
                    let rhs = 0.5 * l.b[n * w + m] * (mp.v(m, n) - 1.0);
                    assert!((lhs - rhs).abs() < 1e-9, "{lhs} {rhs}");
                }
            }
        }
    }

    #[test]
    fn edge_angles_in_s3() {
        let lat = random_lattice(6, 4);
        for g in [FRAC_PI_4, FRAC_PI_6, 0.3] {
            let net = immerse_s3(&lat, g).unwrap();
            let (sin2, cos2) = (2.0 * g).sin_cos();
            for n in 0..net.f.height() {
                for m in 0..net.f.width() - 1 {
                    let e = lat.u_edge(m, n);
                    let alpha = crate::lax::alpha(e, SpectralPoint::new(g)).unwrap();
                    let d = net.f.horizontal_edge(m, n);
                    let len = norm(&d);
                    let cos_theta = dot(&d, net.normal.at(m, n)) / len;
                    let cos_chi = dot(&d, net.f.at(m, n)) / len;
                    assert!((cos_theta - (1.0 / e.u() + cos2 * e.u()) / alpha).abs() < 1e-9);
                    assert!((cos_chi + e.u() * sin2 / alpha).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn euclidean_immersion_needs_nondegenerate_beta() {
        let u = UEdgeData::new(Complex64::new(0.3, 0.0), 1.2).unwrap();
        let v = VEdgeData::new(Complex64::new(0.0, 0.0), 1.0).unwrap();
        let lat = propagate(&CauchyData::constant(3, 3, u, v).unwrap()).unwrap();
        let err = immerse_lattice_r3(&lat).unwrap_err();
        assert_eq!(err.root(), &Error::EuclideanEvaluationImpossible);
        // the sphere construction is unaffected
        assert!(immerse_s3(&lat, FRAC_PI_4).is_ok());
    }
}
