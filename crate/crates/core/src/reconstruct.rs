//! Recovering Lax data from a net and its Gauss map.
//!
//! Both ambient cases reduce to one edge computation. With frames `φₗ`, `φᵣ`
//! at the start of an edge (`φₗ = φᵣ = Φ` in R³; `Φ(λ₁)`, `Φ(λ₁⁻¹)` in S³),
//! `X = φₗ·dF·φᵣ⁻¹` satisfies
//!
//! `𝒰(λ)⁻¹ = (α/(2u·s))·X·𝕚`, `𝒱(λ)⁻¹ = -(β/(2v·s))·X·𝕛`,
//!
//! with `(λ, s) = (1, 1)` in R³ and `(λ₁, sin 2γ₁)` in S³. `u²`, `v²` are minus
//! resp. plus the metric products of `F` against `cos 2γ·F + sin 2γ·N`
//! (just `F + N` in R³), and α, β follow from the edge lengths. Whatever is
//! left of the Lax matrix is checked, not assumed.

use num_complex::Complex64;

use crate::algebra::{embed_r3, Quaternion};
use crate::error::{Error, Location, Result};
use crate::geometry::{add, curvatures, edge_metric_product, norm, scale, sub, Embed, PlanarQuad, Point, QuadNet};
use crate::lax::{eval_u, eval_v, LatticeLax, QuadLax, SpectralPoint, UEdgeData, VEdgeData};
use crate::tolerance;

/// Which lemma is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Setting {
    gamma: f64,
    sin: f64,
    cos: f64,
}

impl Setting {
    fn r3() -> Self {
        Setting {
            gamma: 0.0,
            sin: 1.0,
            cos: 1.0,
        }
    }

    fn s3(gamma1: f64) -> Self {
        let (sin, cos) = (2.0 * gamma1).sin_cos();
        Setting {
            gamma: gamma1,
            sin,
            cos,
        }
    }

    fn left(&self) -> SpectralPoint {
        SpectralPoint::new(self.gamma)
    }

    fn right(&self) -> SpectralPoint {
        SpectralPoint::new(-self.gamma)
    }
}

/// Frames at one vertex: `(φₗ, φᵣ)`.
pub type FramePair = (Quaternion, Quaternion);

fn gauss_map_error(e: Error) -> Error {
    match e {
        Error::NotEdgeParallel { defect } => Error::InconsistentGaussMap { defect },
        other => other,
    }
}

fn recover_u<const D: usize>(df: &Point<D>, dn: &Point<D>, frames: &FramePair, st: Setting) -> Result<UEdgeData>
where
    Point<D>: Embed,
{
    let dual = add(&scale(df, st.cos), &scale(dn, st.sin));
    let product = edge_metric_product(df, &dual).map_err(gauss_map_error)?;
    if product >= 0.0 {
        return Err(Error::WrongTrapezoidOrientation);
    }
    let u = (-product).sqrt();
    let alpha = 2.0 * u * st.sin / norm(df);
    let x = frames.0 * df.to_quaternion() * frames.1.adjoint();
    let u_inv = (x * Quaternion::i()).scale(alpha / (2.0 * u * st.sin));
    let um = u_inv
        .inverse()
        .ok_or(Error::InconsistentGaussMap { defect: f64::INFINITY })?;
    let edge = UEdgeData::new(um.m[0][0] * alpha, u)?;
    let defect = um.dist(&eval_u(&edge, st.left())?);
    if !(defect <= tolerance::RECONSTRUCT_CONSISTENCY) {
        return Err(Error::InconsistentGaussMap { defect });
    }
    Ok(edge)
}

fn recover_v<const D: usize>(df: &Point<D>, dn: &Point<D>, frames: &FramePair, st: Setting) -> Result<VEdgeData>
where
    Point<D>: Embed,
{
    let dual = add(&scale(df, st.cos), &scale(dn, st.sin));
    let product = edge_metric_product(df, &dual).map_err(gauss_map_error)?;
    if product <= 0.0 {
        return Err(Error::WrongTrapezoidOrientation);
    }
    let v = product.sqrt();
    let beta = 2.0 * v * st.sin / norm(df);
    let x = frames.0 * df.to_quaternion() * frames.1.adjoint();
    let v_inv = (x * Quaternion::j()).scale(-beta / (2.0 * v * st.sin));
    let vm = v_inv
        .inverse()
        .ok_or(Error::InconsistentGaussMap { defect: f64::INFINITY })?;
    let edge = VEdgeData::new(vm.m[0][0] * beta, v)?;
    let defect = vm.dist(&eval_v(&edge, st.left())?);
    if !(defect <= tolerance::RECONSTRUCT_CONSISTENCY) {
        return Err(Error::InconsistentGaussMap { defect });
    }
    Ok(edge)
}

fn advance_u(e: &UEdgeData, frames: &FramePair, st: Setting) -> Result<FramePair> {
    Ok((eval_u(e, st.left())? * frames.0, eval_u(e, st.right())? * frames.1))
}

fn advance_v(e: &VEdgeData, frames: &FramePair, st: Setting) -> Result<FramePair> {
    Ok((eval_v(e, st.left())? * frames.0, eval_v(e, st.right())? * frames.1))
}

/// Quad lemma once the preconditions are settled; also returns the frames
/// at vertices 1 and 2.
fn quad_core<const D: usize>(
    f: &[Point<D>; 4],
    n: &[Point<D>; 4],
    frames: &FramePair,
    st: Setting,
) -> Result<(QuadLax, FramePair, FramePair)>
where
    Point<D>: Embed,
{
    let d = |i: usize, j: usize| (sub(&f[j], &f[i]), sub(&n[j], &n[i]));
    let (df, dn) = d(0, 1);
    let u = recover_u(&df, &dn, frames, st)?;
    let (df, dn) = d(0, 3);
    let v = recover_v(&df, &dn, frames, st)?;
    let f1 = advance_u(&u, frames, st)?;
    let f2 = advance_v(&v, frames, st)?;
    let (df, dn) = d(3, 2);
    let up = recover_u(&df, &dn, &f2, st)?;
    let (df, dn) = d(1, 2);
    let vp = recover_v(&df, &dn, &f1, st)?;
    Ok((QuadLax { u, v, up, vp }, f1, f2))
}

fn measured_h<const D: usize>(f: &[Point<D>; 4], n: &[Point<D>; 4]) -> Result<f64> {
    let quad = PlanarQuad::new(*f)?;
    let (h, _) = curvatures(&quad, n).map_err(gauss_map_error)?;
    Ok(h)
}

/// Frame `Φ` with `Φ⁻¹·𝕜·Φ = t` for a unit imaginary quaternion `t`: the
/// rotation of the 𝕜 axis onto `t`, unique up to the U(1) fixing 𝕜.
pub fn frame_rotating_k_to(t: &Quaternion) -> Quaternion {
    let k = Quaternion::k();
    // q k q⁻¹ = t for q = (1 - t·k)/‖·‖, and Φ = q⁻¹
    let q = Quaternion::one() - *t * k;
    let len = q.norm();
    let q = if len < 1e-8 {
        Quaternion::i()
    } else {
        q.scale(1.0 / len)
    };
    q.adjoint()
}

/// Base frame with `-Φ⁻¹𝕜Φ = N̂(0,0)`. Changing the base frame by `exp(θ𝕜)`
/// multiplies `a` and `b` on edges leaving even vertices (m + n even) by one
/// unit phase and those leaving odd vertices by its conjugate.
pub fn canonical_frame_r3(n0: &Point<3>) -> Quaternion {
    frame_rotating_k_to(&embed_r3(scale(n0, -1.0)))
}

/// Base frames `(φ′, φ)` with `F = φ′⁻¹Mφ`, `N = -φ′⁻¹𝕜Mφ` at the base vertex.
pub fn canonical_frames_s3(f0: &Point<4>, n0: &Point<4>, gamma1: f64) -> FramePair {
    let fq = f0.to_quaternion();
    let t = -(n0.to_quaternion() * fq.adjoint());
    let left = frame_rotating_k_to(&t);
    let right = Quaternion::exp_k(-gamma1) * left * fq;
    (left, right)
}

/// R³ quad lemma. `f`, `n` are `(F̂, F̂₁, F̂₁₂, F̂₂)` and the matching normals.
pub fn reconstruct_quad_r3(f: &[Point<3>; 4], n: &[Point<3>; 4], frame: &Quaternion) -> Result<QuadLax> {
    check_frame_r3(&n[0], frame)?;
    check_cmc_one(f, n)?;
    let (quad, ..) = quad_core(f, n, &(*frame, *frame), Setting::r3())?;
    check_quad(&quad, &[])?;
    Ok(quad)
}

fn check_frame_r3(n0: &Point<3>, frame: &Quaternion) -> Result<()> {
    let expected = -(frame.adjoint() * Quaternion::k() * *frame);
    let defect = expected.dist(&embed_r3(*n0)) / 2f64.sqrt();
    if !(defect <= tolerance::FRAME_COMPATIBILITY) {
        return Err(Error::InconsistentGaussMap { defect });
    }
    Ok(())
}

fn check_cmc_one(f: &[Point<3>; 4], n: &[Point<3>; 4]) -> Result<()> {
    let h = measured_h(f, n)?;
    if !((h - 1.0).abs() <= tolerance::RECONSTRUCT_H) {
        return Err(Error::NotCmcOneQuad { h });
    }
    Ok(())
}

fn check_quad(quad: &QuadLax, extra: &[SpectralPoint]) -> Result<f64> {
    let mut points: Vec<SpectralPoint> = crate::lax::CHECK_GAMMAS.map(SpectralPoint::new).to_vec();
    points.extend_from_slice(extra);
    let mismatch = quad.commutation_residual(&points)?.max(quad.uu_vv_defect());
    if !(mismatch <= tolerance::RECONSTRUCT_CONSISTENCY) {
        return Err(Error::NotIntegrable { mismatch });
    }
    Ok(mismatch)
}

/// `γ₁ = ½·arccot H` in (0, π/2), snapped to π/4 for |H| < 1e-9.
pub fn gamma_from_h(h: f64) -> f64 {
    if h.abs() < 1e-9 {
        std::f64::consts::FRAC_PI_4
    } else {
        0.5 * 1f64.atan2(h)
    }
}

fn check_unit_sphere(f: &[Point<4>]) -> Result<()> {
    let defect = f.iter().map(|p| (norm(p) - 1.0).abs()).fold(0.0, f64::max);
    if !(defect <= tolerance::FRAME_COMPATIBILITY) {
        return Err(Error::NotOnUnitSphere { defect });
    }
    Ok(())
}

fn check_frames_s3(f0: &Point<4>, n0: &Point<4>, frames: &FramePair, gamma1: f64) -> Result<()> {
    let mm = Quaternion::exp_k(gamma1);
    let inv = frames.0.adjoint();
    let ef = inv * mm * frames.1;
    let en = -(inv * Quaternion::k() * mm * frames.1);
    let defect = ef.dist(&f0.to_quaternion()).max(en.dist(&n0.to_quaternion())) / 2f64.sqrt();
    if !(defect <= tolerance::FRAME_COMPATIBILITY) {
        return Err(Error::InconsistentGaussMap { defect });
    }
    Ok(())
}

/// S³ quad lemma; γ₁ is read off the measured mean curvature.
pub fn reconstruct_quad_s3(f: &[Point<4>; 4], n: &[Point<4>; 4], frames: &FramePair) -> Result<(QuadLax, f64)> {
    check_unit_sphere(f)?;
    let h = measured_h(f, n)?;
    if !h.is_finite() {
        return Err(Error::NotCmcQuadS3 {
            reason: format!("mean curvature {h} out of range"),
        });
    }
    let gamma1 = gamma_from_h(h);
    check_frames_s3(&f[0], &n[0], frames, gamma1)?;
    let st = Setting::s3(gamma1);
    let (quad, ..) = quad_core(f, n, frames, st).map_err(s3_error)?;
    check_quad(&quad, &[st.left(), st.right()])?;
    Ok((quad, gamma1))
}

fn s3_error(e: Error) -> Error {
    match e {
        Error::InconsistentGaussMap { defect } => Error::NotCmcQuadS3 {
            reason: format!("Lax matrix read off the edge misses the expected form by {defect:e}"),
        },
        other => other,
    }
}

/// Per-quad diagnostics of a net reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResidual {
    pub m: usize,
    pub n: usize,
    /// Commutation residual at ±π/6 (and λ₁^{±1} in S³) together with `uu′ = vv′`.
    pub commutation: f64,
    /// `(|Δ label_U|, |Δ label_V|)` across the quad.
    pub labeling: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub lattice: LatticeLax,
    pub quads: Vec<QuadResidual>,
    /// Worst disagreement of edge data recovered from neighbouring quads.
    pub shared_edge_consistency: f64,
    /// Base frames used (equal in R³).
    pub gauge: FramePair,
    /// The net was given with the lattice directions swapped and was transposed.
    pub transposed: bool,
    /// γ₁ for S³ nets.
    pub gamma1: Option<f64>,
    /// Mean curvature measured on each face.
    pub mean_curvature: Vec<f64>,
}

impl ReconstructionReport {
    pub fn worst_commutation(&self) -> f64 {
        self.quads.iter().map(|q| q.commutation).fold(0.0, f64::max)
    }

    pub fn worst_labeling(&self) -> f64 {
        self.quads
            .iter()
            .map(|q| q.labeling.0.max(q.labeling.1))
            .fold(0.0, f64::max)
    }
}

fn edge_mismatch(a: Complex64, u: f64, b: Complex64, v: f64) -> f64 {
    ((a - b).norm() + (u - v).abs()) / (1.0 + a.norm() + u)
}

/// Horizontal products negative and vertical positive is the generator's
/// convention; the reverse means the net was given transposed.
fn is_transposed<const D: usize>(f: &QuadNet<D>, n: &QuadNet<D>, st: Setting) -> Result<bool> {
    let dual = |m: usize, k: usize, horizontal: bool| {
        let (df, dn) = if horizontal {
            (f.horizontal_edge(m, k), n.horizontal_edge(m, k))
        } else {
            (f.vertical_edge(m, k), n.vertical_edge(m, k))
        };
        edge_metric_product(&df, &add(&scale(&df, st.cos), &scale(&dn, st.sin))).map_err(gauss_map_error)
    };
    let h = dual(0, 0, true)?;
    let v = dual(0, 0, false)?;
    Ok(h > 0.0 && v < 0.0)
}

fn reconstruct_net_core<const D: usize>(
    f: &QuadNet<D>,
    n: &QuadNet<D>,
    base: FramePair,
    st: Setting,
    extra: &[SpectralPoint],
) -> Result<(LatticeLax, Vec<QuadResidual>, f64)>
where
    Point<D>: Embed,
{
    let (w, h) = (f.width(), f.height());
    let mut horizontal: Vec<Option<UEdgeData>> = vec![None; (w - 1) * h];
    let mut vertical: Vec<Option<VEdgeData>> = vec![None; w * (h - 1)];
    let mut frames: Vec<Option<FramePair>> = vec![None; w * h];
    frames[0] = Some(base);
    let mut residuals = Vec::new();
    let mut consistency: f64 = 0.0;
    for qn in 0..h - 1 {
        for qm in 0..w - 1 {
            let loc = Location::Quad { m: qm, n: qn };
            let fr = frames[qn * w + qm].expect("set by an earlier quad");
            let (quad, f1, f2) = quad_core(&f.face(qm, qn), &n.face(qm, qn), &fr, st).map_err(|e| e.at(loc))?;
            let commutation = check_quad(&quad, extra).map_err(|e| e.at(loc))?;
            residuals.push(QuadResidual {
                m: qm,
                n: qn,
                commutation,
                labeling: quad.labeling_defects(),
            });
            let mut worst: f64 = 0.0;
            for (idx, e) in [(qn * (w - 1) + qm, quad.u), ((qn + 1) * (w - 1) + qm, quad.up)] {
                match horizontal[idx] {
                    Some(old) => worst = worst.max(edge_mismatch(old.a(), old.u(), e.a(), e.u())),
                    None => horizontal[idx] = Some(e),
                }
            }
            for (idx, e) in [(qn * w + qm, quad.v), (qn * w + qm + 1, quad.vp)] {
                match vertical[idx] {
                    Some(old) => worst = worst.max(edge_mismatch(old.b(), old.v(), e.b(), e.v())),
                    None => vertical[idx] = Some(e),
                }
            }
            if worst > tolerance::RECONSTRUCT_CONSISTENCY {
                return Err(Error::NotIntegrable { mismatch: worst }.at(loc));
            }
            consistency = consistency.max(worst);
            frames[qn * w + qm + 1].get_or_insert(f1);
            frames[(qn + 1) * w + qm].get_or_insert(f2);
        }
    }
    let lattice = LatticeLax::from_parts(
        w,
        h,
        horizontal
            .into_iter()
            .map(|e| e.expect("every edge lies on a quad"))
            .collect(),
        vertical
            .into_iter()
            .map(|e| e.expect("every edge lies on a quad"))
            .collect(),
    )?;
    Ok((lattice, residuals, consistency))
}

fn require_faces<const D: usize>(f: &QuadNet<D>, n: &QuadNet<D>) -> Result<()> {
    if f.width() < 2 || f.height() < 2 {
        return Err(Error::InvalidInput("reconstruction needs at least one face".into()));
    }
    if f.width() != n.width() || f.height() != n.height() {
        return Err(Error::InvalidInput("net and Gauss map have different windows".into()));
    }
    Ok(())
}

fn face_curvatures<const D: usize>(f: &QuadNet<D>, n: &QuadNet<D>) -> Result<Vec<f64>> {
    f.faces()
        .map(|(m, k)| measured_h(&f.face(m, k), &n.face(m, k)).map_err(|e| e.at(Location::Quad { m, n: k })))
        .collect()
}

/// Reconstruct a whole CMC-1 net in R³. `frame` defaults to the canonical one
/// built from `N̂(0,0)`.
pub fn reconstruct_net_r3(f: &QuadNet<3>, n: &QuadNet<3>, frame: Option<Quaternion>) -> Result<ReconstructionReport> {
    require_faces(f, n)?;
    let st = Setting::r3();
    let transposed = is_transposed(f, n, st).map_err(|e| e.at(Location::Quad { m: 0, n: 0 }))?;
    let (f, n) = if transposed {
        log::info!("net uses the transposed convention; re-indexing");
        (f.transposed(), n.transposed())
    } else {
        (f.clone(), n.clone())
    };
    let frame = frame.unwrap_or_else(|| canonical_frame_r3(n.at(0, 0)));
    check_frame_r3(n.at(0, 0), &frame).map_err(|e| e.at(Location::Vertex { m: 0, n: 0 }))?;
    let hs = face_curvatures(&f, &n)?;
    for ((m, k), h) in f.faces().zip(&hs) {
        if !((h - 1.0).abs() <= tolerance::RECONSTRUCT_H) {
            return Err(Error::NotCmcOneQuad { h: *h }.at(Location::Quad { m, n: k }));
        }
    }
    let (lattice, quads, consistency) = reconstruct_net_core(&f, &n, (frame, frame), st, &[])?;
    Ok(ReconstructionReport {
        lattice,
        quads,
        shared_edge_consistency: consistency,
        gauge: (frame, frame),
        transposed,
        gamma1: None,
        mean_curvature: hs,
    })
}

/// Reconstruct a constant-H net in S³. `frames` default to the canonical
/// pair built from `F(0,0)`, `N(0,0)`.
pub fn reconstruct_net_s3(f: &QuadNet<4>, n: &QuadNet<4>, frames: Option<FramePair>) -> Result<ReconstructionReport> {
    require_faces(f, n)?;
    check_unit_sphere(f.points())?;
    let hs = face_curvatures(f, n)?;
    let mean = hs.iter().sum::<f64>() / hs.len() as f64;
    for ((m, k), h) in f.faces().zip(&hs) {
        if !((h - mean).abs() <= tolerance::RECONSTRUCT_H) {
            return Err(Error::NotCmcQuadS3 {
                reason: format!("face mean curvature {h} differs from the net average {mean}"),
            }
            .at(Location::Quad { m, n: k }));
        }
    }
    let gamma1 = gamma_from_h(mean);
    let st = Setting::s3(gamma1);
    let transposed = is_transposed(f, n, st).map_err(|e| e.at(Location::Quad { m: 0, n: 0 }))?;
    let (f, n) = if transposed {
        log::info!("net uses the transposed convention; re-indexing");
        (f.transposed(), n.transposed())
    } else {
        (f.clone(), n.clone())
    };
    let frames = frames.unwrap_or_else(|| canonical_frames_s3(f.at(0, 0), n.at(0, 0), gamma1));
    check_frames_s3(f.at(0, 0), n.at(0, 0), &frames, gamma1).map_err(|e| e.at(Location::Vertex { m: 0, n: 0 }))?;
    let (lattice, quads, consistency) =
        reconstruct_net_core(&f, &n, frames, st, &[st.left(), st.right()]).map_err(s3_error)?;
    Ok(ReconstructionReport {
        lattice,
        quads,
        shared_edge_consistency: consistency,
        gauge: frames,
        transposed,
        gamma1: Some(gamma1),
        mean_curvature: hs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot;
    use crate::immersion::{immerse_lattice_r3, immerse_s3};
    use crate::lax::{propagate, CauchyData};
    use crate::sample::{random_cauchy, RandomRanges};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(w: usize, h: usize) -> LatticeLax {
        let u = UEdgeData::new(c(1.0, 0.0), 1.0).unwrap();
        let v = VEdgeData::new(c(1.0, 0.0), 1.0).unwrap();
        propagate(&CauchyData::constant(w, h, u, v).unwrap()).unwrap()
    }

    fn assert_same(a: &LatticeLax, b: &LatticeLax, tol: f64) {
        for (x, y) in a.horizontal_edges().iter().zip(b.horizontal_edges()) {
            assert!(edge_mismatch(x.a(), x.u(), y.a(), y.u()) < tol, "{x:?} vs {y:?}");
        }
        for (x, y) in a.vertical_edges().iter().zip(b.vertical_edges()) {
            assert!(edge_mismatch(x.b(), x.v(), y.b(), y.v()) < tol, "{x:?} vs {y:?}");
        }
    }

    #[test]
    fn constant_quad_r3() {
        let net = immerse_lattice_r3(&constant(2, 2)).unwrap();
        let q = reconstruct_quad_r3(&net.f.face(0, 0), &net.normal.face(0, 0), &Quaternion::one()).unwrap();
        for e in [q.u, q.up] {
            assert!((e.a() - c(1.0, 0.0)).norm() < 1e-12 && (e.u() - 1.0).abs() < 1e-12);
        }
        for e in [q.v, q.vp] {
            assert!((e.b() - c(1.0, 0.0)).norm() < 1e-12 && (e.v() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn base_gauge_rotates_a_and_b_by_one_phase() {
        let net = immerse_lattice_r3(&constant(2, 2)).unwrap();
        let (f, n) = (net.f.face(0, 0), net.normal.face(0, 0));
        let base = reconstruct_quad_r3(&f, &n, &Quaternion::one()).unwrap();
        let d = Quaternion::exp_k(-0.4);
        let q = reconstruct_quad_r3(&f, &n, &d).unwrap();
        let phase = q.u.a() / base.u.a();
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!((phase - c(1.0, 0.0)).norm() > 0.1);
        // edges starting on even vertices pick up the phase, odd ones its conjugate
        assert!((q.v.b() - phase * base.v.b()).norm() < 1e-12);
        assert!((q.up.a() - phase.conj() * base.up.a()).norm() < 1e-12);
        assert!((q.vp.b() - phase.conj() * base.vp.b()).norm() < 1e-12);
        assert!((q.u.u() - base.u.u()).abs() < 1e-12 && (q.v.v() - base.v.v()).abs() < 1e-12);
        assert!(q.check_residual().unwrap() < 1e-12);
    }

    #[test]
    fn perturbed_normal_is_inconsistent() {
        let net = immerse_lattice_r3(&constant(2, 2)).unwrap();
        let mut n = net.normal.face(0, 0);
        let tangent = net.f.horizontal_edge(0, 0);
        let p = add(&n[0], &scale(&tangent, 0.01 / norm(&tangent)));
        n[0] = scale(&p, 1.0 / norm(&p));
        let err = reconstruct_quad_r3(&net.f.face(0, 0), &n, &Quaternion::one()).unwrap_err();
        assert!(matches!(err, Error::InconsistentGaussMap { .. }), "{err:?}");
    }

    #[test]
    fn constant_quad_s3() {
        let net = immerse_s3(&constant(2, 2), FRAC_PI_4).unwrap();
        let one = (Quaternion::one(), Quaternion::one());
        let (q, g) = reconstruct_quad_s3(&net.f.face(0, 0), &net.normal.face(0, 0), &one).unwrap();
        assert!((g - FRAC_PI_4).abs() < 1e-9);
        assert!((q.u.a() - c(1.0, 0.0)).norm() < 1e-10 && (q.vp.v() - 1.0).abs() < 1e-10);
        // H = 0 branch: the two expressions for the edge length agree
        let e = net.f.horizontal_edge(0, 0);
        assert!((dot(&e, &e) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn off_sphere_quad_is_rejected() {
        let net = immerse_s3(&constant(2, 2), FRAC_PI_4).unwrap();
        let f = net.f.face(0, 0).map(|p| scale(&p, 1.01));
        let one = (Quaternion::one(), Quaternion::one());
        assert!(matches!(
            reconstruct_quad_s3(&f, &net.normal.face(0, 0), &one),
            Err(Error::NotOnUnitSphere { .. })
        ));
    }

    fn random_lattice(seed: u64) -> LatticeLax {
        propagate(&random_cauchy(5, 5, &RandomRanges::default(), seed).unwrap()).unwrap()
    }

    #[test]
    fn r3_round_trip() {
        for seed in 0..3 {
            let lat = random_lattice(seed);
            let net = immerse_lattice_r3(&lat).unwrap();
            let rep = reconstruct_net_r3(&net.f, &net.normal, Some(Quaternion::one())).unwrap();
            assert_same(&rep.lattice, &lat, 1e-8);
            assert!(rep.shared_edge_consistency < 1e-8 && !rep.transposed);
            // the canonical frame differs from 1 by a U(1) rotation only
            let canon = reconstruct_net_r3(&net.f, &net.normal, None).unwrap();
            let phase = canon.lattice.u_edge(0, 0).a() / lat.u_edge(0, 0).a();
            assert!((phase.norm() - 1.0).abs() < 1e-8);
            assert!((canon.lattice.v_edge(2, 2).b() - phase * lat.v_edge(2, 2).b()).norm() < 1e-8);
        }
    }

    #[test]
    fn s3_round_trip() {
        for seed in 0..3 {
            let lat = random_lattice(seed);
            for g in [FRAC_PI_4, FRAC_PI_6, 1.0] {
                let net = immerse_s3(&lat, g).unwrap();
                let one = (Quaternion::one(), Quaternion::one());
                let rep = reconstruct_net_s3(&net.f, &net.normal, Some(one)).unwrap();
                assert!((rep.gamma1.unwrap() - g).abs() < 1e-9);
                assert_same(&rep.lattice, &lat, 1e-8);
                assert!(rep.shared_edge_consistency < 1e-8);
                assert!(reconstruct_net_s3(&net.f, &net.normal, None).is_ok());
            }
        }
    }

    #[test]
    fn transposed_net_is_detected() {
        let lat = random_lattice(11);
        let net = immerse_lattice_r3(&lat).unwrap();
        let rep = reconstruct_net_r3(&net.f.transposed(), &net.normal.transposed(), Some(Quaternion::one())).unwrap();
        assert!(rep.transposed);
        assert_same(&rep.lattice, &lat, 1e-8);
    }

    #[test]
    fn displaced_vertex_is_located() {
        let lat = random_lattice(3);
        let net = immerse_lattice_r3(&lat).unwrap();
        let mut pts = net.f.points().to_vec();
        pts[2 * 5 + 2][0] += 1e-3;
        let f = QuadNet::new(5, 5, pts).unwrap();
        let err = reconstruct_net_r3(&f, &net.normal, None).unwrap_err();
        assert!(matches!(err.location(), Some(Location::Quad { .. })), "{err:?}");
    }

    #[test]
    fn single_quad_net_matches_lemma() {
        let lat = random_lattice(5);
        let net = immerse_lattice_r3(&lat).unwrap();
        let f = QuadNet::new(
            2,
            2,
            vec![*net.f.at(0, 0), *net.f.at(1, 0), *net.f.at(0, 1), *net.f.at(1, 1)],
        )
        .unwrap();
        let n = QuadNet::new(
            2,
            2,
            vec![
                *net.normal.at(0, 0),
                *net.normal.at(1, 0),
                *net.normal.at(0, 1),
                *net.normal.at(1, 1),
            ],
        )
        .unwrap();
        let rep = reconstruct_net_r3(&f, &n, Some(Quaternion::one())).unwrap();
        let q = reconstruct_quad_r3(&net.f.face(0, 0), &net.normal.face(0, 0), &Quaternion::one()).unwrap();
        assert_eq!(rep.lattice.u_edge(0, 0), &q.u);
        assert_eq!(rep.lattice.v_edge(1, 0), &q.vp);
    }

    #[test]
    fn frame_rotation_helper() {
        for t in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.6, 0.0, 0.8], [0.0, -1.0, 0.0]] {
            let tq = embed_r3(t);
            let phi = frame_rotating_k_to(&tq);
            assert!((phi.adjoint() * Quaternion::k() * phi).dist(&tq) < 1e-14, "{t:?}");
            assert!(phi.unitarity_defect() < 1e-14);
        }
    }
}
