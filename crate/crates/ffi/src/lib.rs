//! C ABI over lawson-forge.
//!
//! Handles are opaque and owned by the caller, who frees them with the
//! matching `*_free`. Every function returns an [`LfStatus`]; on failure
//! [`lf_last_error`] describes the problem for the calling thread. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lawson_forge::error::Error;
use lawson_forge::immersion::{immerse_lattice_r3, immerse_s3, NetR3, NetS3};
use lawson_forge::io::NetFile;
use lawson_forge::lax::{propagate, solve_quad, CauchyData, LatticeLax, UEdgeData, VEdgeData};
use lawson_forge::sample::{random_cauchy, RandomRanges};
use lawson_forge::verify::{report_r3, report_s3};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// The quad equations have no admissible solution.
    NonSolvable = 3,
    /// Spectral or edge degeneracy (α or β vanishes, β(1) = 0, ...).
    Degenerate = 4,
    /// A geometric precondition failed.
    Geometry = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Horizontal edge data `(a, u)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfUEdge {
    pub a_re: f64,
    pub a_im: f64,
    pub u: f64,
}

/// Vertical edge data `(b, v)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfVEdge {
    pub b_re: f64,
    pub b_im: f64,
    pub v: f64,
}

/// Propagated Lax data on a window.
pub struct LfLattice(LatticeLax);

enum NetKind {
    R3(NetR3),
    S3(NetS3),
}

/// An immersed net with the lattice it came from.
pub struct LfNet {
    kind: NetKind,
    lattice: LatticeLax,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LfStatus {
    match e.root() {
        Error::NonSolvableQuad { .. } => LfStatus::NonSolvable,
        Error::SpectralDegeneracy { .. }
        | Error::DegenerateEdge
        | Error::EuclideanEvaluationImpossible
        | Error::SphereRadiusOverflow { .. } => LfStatus::Degenerate,
        Error::InvalidInput(_) | Error::NonPositiveScalar { .. } | Error::InvalidSpectralAngle { .. } => {
            LfStatus::InvalidInput
        }
        _ => LfStatus::Geometry,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (LfStatus, String)>) -> LfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LfStatus::Panic
        }
    }
}

trait Lift<T> {
    fn lift(self) -> Result<T, (LfStatus, String)>;
}

impl<T> Lift<T> for Result<T, Error> {
    fn lift(self) -> Result<T, (LfStatus, String)> {
        self.map_err(|e| (status_of(&e), e.to_string()))
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LfStatus, String)> {
    // SAFETY: the caller promises `p` is null or valid for reads
    unsafe { p.as_ref() }.ok_or((LfStatus::NullPointer, format!("{what} is null")))
}

fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (LfStatus, String)> {
    // SAFETY: the caller promises `p` is null or valid for writes
    unsafe { p.as_mut() }.ok_or((LfStatus::NullPointer, format!("{what} is null")))
}

fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (LfStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err((LfStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: non-null and the caller promises `len` readable elements
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn u_edge(e: &LfUEdge) -> Result<UEdgeData, (LfStatus, String)> {
    UEdgeData::new(Complex64::new(e.a_re, e.a_im), e.u).lift()
}

fn v_edge(e: &LfVEdge) -> Result<VEdgeData, (LfStatus, String)> {
    VEdgeData::new(Complex64::new(e.b_re, e.b_im), e.v).lift()
}

fn to_u(e: &UEdgeData) -> LfUEdge {
    LfUEdge {
        a_re: e.a().re,
        a_im: e.a().im,
        u: e.u(),
    }
}

fn to_v(e: &VEdgeData) -> LfVEdge {
    LfVEdge {
        b_re: e.b().re,
        b_im: e.b().im,
        v: e.v(),
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Opposite edges of one quad from its lower and left edges.
///
/// # Safety
/// All pointers must be valid (inputs readable, outputs writable).
#[no_mangle]
pub unsafe extern "C" fn lf_solve_quad(
    u: *const LfUEdge,
    v: *const LfVEdge,
    up_out: *mut LfUEdge,
    vp_out: *mut LfVEdge,
) -> LfStatus {
    guard(|| {
        let (ue, ve) = (u_edge(non_null(u, "u")?)?, v_edge(non_null(v, "v")?)?);
        let up_out = out_ptr(up_out, "up_out")?;
        let vp_out = out_ptr(vp_out, "vp_out")?;
        let (up, vp) = solve_quad(&ue, &ve).lift()?;
        *up_out = to_u(&up);
        *vp_out = to_v(&vp);
        Ok(())
    })
}

fn store<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Propagate Cauchy data on the bottom row (`width - 1` edges) and left
/// column (`height - 1` edges) over the whole window.
///
/// # Safety
/// `row0`/`col0` must hold `n_row0`/`n_col0` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_propagate(
    row0: *const LfUEdge,
    n_row0: usize,
    col0: *const LfVEdge,
    n_col0: usize,
    out: *mut *mut LfLattice,
) -> LfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let c = CauchyData {
            row0: slice(row0, n_row0, "row0")?
                .iter()
                .map(u_edge)
                .collect::<Result<_, _>>()?,
            col0: slice(col0, n_col0, "col0")?
                .iter()
                .map(v_edge)
                .collect::<Result<_, _>>()?,
        };
        store(out, LfLattice(propagate(&c).lift()?));
        Ok(())
    })
}

/// Propagate seeded random Cauchy data with the default sampling ranges.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_random(
    width: usize,
    height: usize,
    seed: u64,
    out: *mut *mut LfLattice,
) -> LfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let c = random_cauchy(width, height, &RandomRanges::default(), seed).lift()?;
        store(out, LfLattice(propagate(&c).lift()?));
        Ok(())
    })
}

/// # Safety
/// `lattice` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_free(lattice: *mut LfLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Window width, or 0 for null.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_width(lattice: *const LfLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.width())
}

/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_height(lattice: *const LfLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.height())
}

/// Data on the horizontal edge (m, n) → (m + 1, n).
///
/// # Safety
/// `lattice` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_u_edge(
    lattice: *const LfLattice,
    m: usize,
    n: usize,
    out: *mut LfUEdge,
) -> LfStatus {
    guard(|| {
        let l = &non_null(lattice, "lattice")?.0;
        let out = out_ptr(out, "out")?;
        if m + 1 >= l.width() || n >= l.height() {
            return Err((LfStatus::InvalidInput, format!("no horizontal edge ({m},{n})")));
        }
        *out = to_u(l.u_edge(m, n));
        Ok(())
    })
}

/// Data on the vertical edge (m, n) → (m, n + 1).
///
/// # Safety
/// `lattice` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_lattice_v_edge(
    lattice: *const LfLattice,
    m: usize,
    n: usize,
    out: *mut LfVEdge,
) -> LfStatus {
    guard(|| {
        let l = &non_null(lattice, "lattice")?.0;
        let out = out_ptr(out, "out")?;
        if m >= l.width() || n + 1 >= l.height() {
            return Err((LfStatus::InvalidInput, format!("no vertical edge ({m},{n})")));
        }
        *out = to_v(l.v_edge(m, n));
        Ok(())
    })
}

/// CMC-1 net in R³ (γ = 0).
///
/// # Safety
/// `lattice` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_immerse_r3(lattice: *const LfLattice, out: *mut *mut LfNet) -> LfStatus {
    guard(|| {
        let l = &non_null(lattice, "lattice")?.0;
        let out = out_ptr(out, "out")?;
        let net = immerse_lattice_r3(l).lift()?;
        store(
            out,
            LfNet {
                kind: NetKind::R3(net),
                lattice: l.clone(),
            },
        );
        Ok(())
    })
}

/// Net in S³ at spectral angle `gamma1` ∈ (0, π/2); minimal at π/4.
///
/// # Safety
/// `lattice` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_immerse_s3(lattice: *const LfLattice, gamma1: f64, out: *mut *mut LfNet) -> LfStatus {
    guard(|| {
        let l = &non_null(lattice, "lattice")?.0;
        let out = out_ptr(out, "out")?;
        let net = immerse_s3(l, gamma1).lift()?;
        store(
            out,
            LfNet {
                kind: NetKind::S3(net),
                lattice: l.clone(),
            },
        );
        Ok(())
    })
}

/// # Safety
/// `net` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lf_net_free(net: *mut LfNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Coordinates per vertex: 3 for R³ nets, 4 for S³ nets; 0 for null.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lf_net_dimension(net: *const LfNet) -> usize {
    net.as_ref().map_or(0, |n| match n.kind {
        NetKind::R3(_) => 3,
        NetKind::S3(_) => 4,
    })
}

/// Number of vertices, `width · height`; 0 for null.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lf_net_vertex_count(net: *const LfNet) -> usize {
    net.as_ref().map_or(0, |n| n.lattice.width() * n.lattice.height())
}

fn copy_points<const D: usize>(pts: &[[f64; D]], buf: *mut f64, len: usize) -> Result<(), (LfStatus, String)> {
    let need = pts.len() * D;
    if len < need {
        return Err((
            LfStatus::BufferTooSmall,
            format!("buffer holds {len} doubles, {need} needed"),
        ));
    }
    if buf.is_null() {
        return Err((LfStatus::NullPointer, "buffer is null".into()));
    }
    // SAFETY: non-null and the caller promises `len >= need` writable doubles
    let out = unsafe { std::slice::from_raw_parts_mut(buf, need) };
    for (chunk, p) in out.chunks_exact_mut(D).zip(pts) {
        chunk.copy_from_slice(p);
    }
    Ok(())
}

/// Copy vertices row-major over (m, n) into `buf` (`dimension · count` doubles).
///
/// # Safety
/// `net` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lf_net_vertices(net: *const LfNet, buf: *mut f64, len: usize) -> LfStatus {
    guard(|| match &non_null(net, "net")?.kind {
        NetKind::R3(n) => copy_points(n.f.points(), buf, len),
        NetKind::S3(n) => copy_points(n.f.points(), buf, len),
    })
}

/// Copy the Gauss map, laid out like the vertices.
///
/// # Safety
/// `net` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn lf_net_normals(net: *const LfNet, buf: *mut f64, len: usize) -> LfStatus {
    guard(|| match &non_null(net, "net")?.kind {
        NetKind::R3(n) => copy_points(n.normal.points(), buf, len),
        NetKind::S3(n) => copy_points(n.normal.points(), buf, len),
    })
}

/// Run every invariant check; `*passed` is 1 if all pass, else 0.
///
/// # Safety
/// `net` must be a live handle, `passed` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_net_verify(net: *const LfNet, passed: *mut i32) -> LfStatus {
    guard(|| {
        let net = non_null(net, "net")?;
        let passed = out_ptr(passed, "passed")?;
        let report = match &net.kind {
            NetKind::R3(n) => report_r3(&n.f, &n.normal, Some(&net.lattice)),
            NetKind::S3(n) => report_s3(&n.f, &n.normal, n.gamma1, Some(&net.lattice)),
        };
        *passed = i32::from(report.passed());
        Ok(())
    })
}

/// Serialize the net (with its Lax data) in the native JSON format. Free
/// the string with [`lf_string_free`].
///
/// # Safety
/// `net` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lf_net_to_json(net: *const LfNet, out: *mut *mut c_char) -> LfStatus {
    guard(|| {
        let net = non_null(net, "net")?;
        let out = out_ptr(out, "out")?;
        let file = match &net.kind {
            NetKind::R3(n) => NetFile::from_r3(n, Some(&net.lattice), None),
            NetKind::S3(n) => NetFile::from_s3(n, Some(&net.lattice), None),
        };
        let text = file.to_json().lift()?;
        *out = CString::new(text).expect("JSON has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lawson_forge::error::Location;

    #[test]
    fn statuses_follow_the_root_error() {
        let located = Error::EuclideanEvaluationImpossible.at(Location::VerticalEdge { m: 0, n: 1 });
        assert_eq!(status_of(&located), LfStatus::Degenerate);
        assert_eq!(
            status_of(&Error::NonSolvableQuad { residuals: vec![] }),
            LfStatus::NonSolvable
        );
        assert_eq!(status_of(&Error::NotPlanar { defect: 1.0 }), LfStatus::Geometry);
        assert_eq!(status_of(&Error::InvalidInput("x".into())), LfStatus::InvalidInput);
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), LfStatus::Panic);
        assert!(!lf_last_error().is_null());
        assert_eq!(guard(|| Ok(())), LfStatus::Ok);
        assert!(lf_last_error().is_null());
    }
}
