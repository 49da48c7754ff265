//! Edge Lax data, the Lax matrices `U(λ)`, `V(λ)`, the quad solver and
//! propagation of Cauchy data over a rectangular window of Z².
//!
//! On a horizontal edge with data `(a, u)` and a vertical edge with `(b, v)`:
//!
//! ```text
//!   U(λ) = 1/α [[a, -λu - 1/(λu)], [λ/u + u/λ, conj a]]
//!   V(λ) = 1/β [[b, -iλv + i/(λv)], [iλ/v - iv/λ, conj b]]
//!   α² = |a|² + λ² + λ⁻² + u² + u⁻²,   β² = |b|² - λ² - λ⁻² + v² + v⁻²
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::algebra::Quaternion;
use crate::error::{Error, Location, Result};
use crate::tolerance;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spectral points at which quad commutation is certified; with `uu' = vv'`
/// commutation at a pair `e^{±iγ}` off the four extrema implies it for all λ.
pub const CHECK_GAMMAS: [f64; 2] = [PI / 6.0, -PI / 6.0];

/// `λ = e^{iγ}`, stored through γ so that `|λ| = 1` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    gamma: f64,
}

impl SpectralPoint {
    pub fn new(gamma: f64) -> Self {
        SpectralPoint { gamma }
    }

    /// λ = 1.
    pub fn euclidean() -> Self {
        SpectralPoint { gamma: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.gamma)
    }

    /// `λ² + λ⁻² = 2 cos 2γ`.
    pub fn lambda_sq_sum(&self) -> f64 {
        2.0 * (2.0 * self.gamma).cos()
    }
}

fn positive(value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveScalar { value })
    }
}

fn finite(z: Complex64) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("non-finite complex value {z}")))
    }
}

/// Lax content of a horizontal edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UEdgeData {
    a: Complex64,
    u: f64,
}

impl UEdgeData {
    pub fn new(a: Complex64, u: f64) -> Result<Self> {
        Ok(UEdgeData {
            a: finite(a)?,
            u: positive(u)?,
        })
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// `|a|² + u² + u⁻²`, the λ-independent part of α².
    pub fn label(&self) -> f64 {
        self.a.norm_sqr() + self.u * self.u + 1.0 / (self.u * self.u)
    }
}

/// Lax content of a vertical edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VEdgeData {
    b: Complex64,
    v: f64,
}

impl VEdgeData {
    pub fn new(b: Complex64, v: f64) -> Result<Self> {
        Ok(VEdgeData {
            b: finite(b)?,
            v: positive(v)?,
        })
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// `|b|² + v² + v⁻²`, the λ-independent part of β².
    pub fn label(&self) -> f64 {
        self.b.norm_sqr() + self.v * self.v + 1.0 / (self.v * self.v)
    }

    /// β(1) = 0 exactly when `b = 0` and `v = 1`.
    pub fn is_euclidean_degenerate(&self) -> bool {
        beta_squared(self, SpectralPoint::euclidean()) <= degeneracy_floor(self.label() + 2.0)
    }
}

fn degeneracy_floor(scale: f64) -> f64 {
    1e-14 * scale
}

fn alpha_squared(e: &UEdgeData, s: SpectralPoint) -> f64 {
    e.label() + s.lambda_sq_sum()
}

fn beta_squared(e: &VEdgeData, s: SpectralPoint) -> f64 {
    e.label() - s.lambda_sq_sum()
}

pub fn alpha(e: &UEdgeData, s: SpectralPoint) -> Result<f64> {
    let sq = alpha_squared(e, s);
    if sq <= degeneracy_floor(e.label() + 2.0) {
        return Err(Error::SpectralDegeneracy { gamma: s.gamma() });
    }
    Ok(sq.sqrt())
}

pub fn beta(e: &VEdgeData, s: SpectralPoint) -> Result<f64> {
    let sq = beta_squared(e, s);
    if sq <= degeneracy_floor(e.label() + 2.0) {
        return Err(Error::SpectralDegeneracy { gamma: s.gamma() });
    }
    Ok(sq.sqrt())
}

pub fn eval_u(e: &UEdgeData, s: SpectralPoint) -> Result<Quaternion> {
    let alpha = alpha(e, s)?;
    let l = s.lambda();
    let u = e.u;
    let m = Quaternion::new(e.a, -(l * u + 1.0 / (l * u)), l / u + u / l, e.a.conj());
    Ok(m.scale(1.0 / alpha))
}

pub fn eval_v(e: &VEdgeData, s: SpectralPoint) -> Result<Quaternion> {
    let beta = beta(e, s)?;
    let l = s.lambda();
    let v = e.v;
    let m = Quaternion::new(e.b, -I * l * v + I / (l * v), I * l / v - I * v / l, e.b.conj());
    Ok(m.scale(1.0 / beta))
}

/// `∂U/∂γ` at γ = 0, where α is extremal: `((u - u⁻¹)/α(1))·i`.
pub fn du_dgamma(e: &UEdgeData) -> Result<Quaternion> {
    let alpha = alpha(e, SpectralPoint::euclidean())?;
    Ok(Quaternion::i().scale((e.u - 1.0 / e.u) / alpha))
}

/// `∂V/∂γ` at γ = 0: `-((v + v⁻¹)/β(1))·j`.
pub fn dv_dgamma(e: &VEdgeData) -> Result<Quaternion> {
    if e.is_euclidean_degenerate() {
        return Err(Error::DegenerateEdge);
    }
    let beta = beta(e, SpectralPoint::euclidean()).map_err(|_| Error::DegenerateEdge)?;
    Ok(Quaternion::j().scale(-(e.v + 1.0 / e.v) / beta))
}

/// Lax data on the four edges of one elementary quad.
///
/// `u` sits on edge 0→1, `v` on 0→2, `up` on 2→12 and `vp` on 1→12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadLax {
    pub u: UEdgeData,
    pub v: VEdgeData,
    pub up: UEdgeData,
    pub vp: VEdgeData,
}

impl QuadLax {
    /// `|uu' - vv'|` relative to `uu'`.
    pub fn uu_vv_defect(&self) -> f64 {
        let lhs = self.u.u * self.up.u;
        (lhs - self.v.v * self.vp.v).abs() / lhs
    }

    /// Max over the given spectral points of `‖V'U - U'V‖_F`.
    pub fn commutation_residual(&self, points: &[SpectralPoint]) -> Result<f64> {
        points.iter().try_fold(0.0_f64, |acc, &s| {
            let lhs = eval_v(&self.vp, s)? * eval_u(&self.u, s)?;
            let rhs = eval_u(&self.up, s)? * eval_v(&self.v, s)?;
            Ok(acc.max(lhs.dist(&rhs)))
        })
    }

    /// Residual at the default certification pair `γ = ±π/6`.
    pub fn check_residual(&self) -> Result<f64> {
        self.commutation_residual(&CHECK_GAMMAS.map(SpectralPoint::new))
    }

    /// Relative residuals of the four scalar commutation equations.
    pub fn equation_residuals(&self) -> [f64; 4] {
        let (a, u, b, v) = (self.u.a, self.u.u, self.v.b, self.v.v);
        let (ap, up, bp, vp) = (self.up.a, self.up.u, self.vp.b, self.vp.v);
        let rel = |lhs: Complex64, rhs: Complex64, scale: f64| (lhs - rhs).norm() / scale.max(1.0);
        let e1 = (u * up - v * vp).abs() / (u * up).max(1.0);
        let rhs2 = I * (up * v + u * vp - 1.0 / (up * v) - 1.0 / (u * vp));
        let e2 = rel(bp * a - b * ap, rhs2, (bp * a).norm() + (b * ap).norm() + rhs2.norm());
        let lhs3 = b.conj() * up - bp * u;
        let rhs3 = I * (a.conj() * vp - ap * v);
        let e3 = rel(lhs3, rhs3, (b * up).norm() + (bp * u).norm() + rhs3.norm());
        let lhs4 = b.conj() / up - bp / u;
        let rhs4 = I * (ap / v - a.conj() / vp);
        let e4 = rel(lhs4, rhs4, (b / up).norm() + (bp / u).norm() + rhs4.norm());
        [e1, e2, e3, e4]
    }

    /// `(|Δ label_U|, |Δ label_V|)` between opposite edges.
    pub fn labeling_defects(&self) -> (f64, f64) {
        (
            (self.up.label() - self.u.label()).abs(),
            (self.vp.label() - self.v.label()).abs(),
        )
    }
}

/// Result of solving a quad, with the diagnostics gathered on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSolution {
    pub up: UEdgeData,
    pub vp: VEdgeData,
    /// Every admissible root `t = v'` found in the bracket, including the chosen one.
    pub roots: Vec<f64>,
    pub equation_residuals: [f64; 4],
    /// Imaginary part of the reduced equation at the chosen root.
    pub consistency: f64,
}

impl QuadSolution {
    pub fn is_ambiguous(&self) -> bool {
        self.roots.len() > 1
    }
}

const BRACKET_FACTOR: f64 = 50.0;
const BRACKET_SAMPLES: usize = 400;

/// Opposite-edge data `(a', u', b', v')` for given `(a, u)` and `(b, v)`.
///
/// `(a', b')` are eliminated through the two linear commutation equations; the
/// remaining equation is a real function of `t = v'` (with `u' = v t / u`)
/// whose sign changes are bracketed on a logarithmic grid over
/// `[u/50, 50 u]` and refined by bisection.
pub fn solve_quad(u: &UEdgeData, v: &VEdgeData) -> Result<(UEdgeData, VEdgeData)> {
    solve_quad_detailed(u, v).map(|s| (s.up, s.vp))
}

struct Reduced {
    ap: Complex64,
    bp: Complex64,
    up: f64,
    vp: f64,
    value: Complex64,
}

fn reduced(ue: &UEdgeData, ve: &VEdgeData, t: f64) -> Reduced {
    let (a, u, b, v) = (ue.a, ue.u, ve.b, ve.v);
    let up = v * t / u;
    let vp = t;
    // [[i v, -u], [-i/v, -1/u]] (a', b')ᵀ = (r1, r2)ᵀ
    let r1 = I * a.conj() * vp - b.conj() * up;
    let r2 = -b.conj() / up - I * a.conj() / vp;
    let det = -I * (v / u + u / v);
    let ap = (-r1 / u + u * r2) / det;
    let bp = (I * v * r2 + I * r1 / v) / det;
    let value = (bp * a - b * ap) / I - (up * v + u * vp - 1.0 / (up * v) - 1.0 / (u * vp));
    Reduced {
        ap,
        bp,
        up,
        vp,
        value: Complex64::new(value.re, value.im),
    }
}

pub fn solve_quad_detailed(u: &UEdgeData, v: &VEdgeData) -> Result<QuadSolution> {
    let t0 = u.u;
    let (lo, hi) = ((t0 / BRACKET_FACTOR).ln(), (t0 * BRACKET_FACTOR).ln());
    let grid: Vec<f64> = (0..=BRACKET_SAMPLES)
        .map(|k| (lo + (hi - lo) * k as f64 / BRACKET_SAMPLES as f64).exp())
        .collect();
    let f = |t: f64| reduced(u, v, t).value.re;

    let mut candidates = Vec::new();
    let mut prev = (grid[0], f(grid[0]));
    for &t in &grid[1..] {
        let ft = f(t);
        if prev.1 == 0.0 {
            candidates.push(prev.0);
        } else if prev.1.signum() != ft.signum() && ft != 0.0 {
            candidates.push(bisect(&f, prev.0, t, prev.1));
        }
        prev = (t, ft);
    }
    if prev.1 == 0.0 {
        candidates.push(prev.0);
    }

    let mut admissible = Vec::new();
    let mut best_residuals: Option<Vec<f64>> = None;
    for t in candidates {
        let r = reduced(u, v, t);
        let quad = QuadLax {
            u: *u,
            v: *v,
            up: UEdgeData { a: r.ap, u: r.up },
            vp: VEdgeData { b: r.bp, v: r.vp },
        };
        let eq = quad.equation_residuals();
        let (dl_u, dl_v) = quad.labeling_defects();
        let consistency = r.value.im.abs() / (1.0 + r.value.norm());
        let all: Vec<f64> = eq.iter().copied().chain([dl_u, dl_v, consistency]).collect();
        let ok = eq.iter().all(|&e| e < tolerance::QUAD_EQUATIONS)
            && dl_u < tolerance::LABELING_PRESERVATION * (1.0 + u.label())
            && dl_v < tolerance::LABELING_PRESERVATION * (1.0 + v.label())
            && consistency < tolerance::QUAD_EQUATIONS;
        if ok {
            admissible.push((t, quad, eq, consistency));
        } else if best_residuals.as_ref().is_none_or(|b| max_of(&all) < max_of(b)) {
            best_residuals = Some(all);
        }
    }

    if admissible.is_empty() {
        return Err(Error::NonSolvableQuad {
            residuals: best_residuals.unwrap_or_default(),
        });
    }
    let roots: Vec<f64> = admissible.iter().map(|(t, ..)| *t).collect();
    let chosen = admissible
        .iter()
        .min_by(|x, y| {
            let dx = (x.0 / t0).ln().abs();
            let dy = (y.0 / t0).ln().abs();
            dx.total_cmp(&dy)
        })
        .expect("non-empty");
    if roots.len() > 1 {
        log::warn!("ambiguous quad: admissible roots {roots:?}, chose {}", chosen.0);
    }
    Ok(QuadSolution {
        up: chosen.1.up,
        vp: chosen.1.vp,
        roots,
        equation_residuals: chosen.2,
        consistency: chosen.3,
    })
}

/// Recover `(U, V)` from the opposite edges `(U', V')` of a quad.
///
/// Inverting an edge matrix gives `U(a, u)⁻¹ = -U(-conj a, u)`, so the quad
/// read from its upper-right corner (both directions reversed) is again of
/// Lax form and the forward solver applies.
pub fn solve_quad_backward(up: &UEdgeData, vp: &VEdgeData) -> Result<(UEdgeData, VEdgeData)> {
    let flipped_u = UEdgeData::new(-up.a.conj(), up.u)?;
    let flipped_v = VEdgeData::new(-vp.b.conj(), vp.v)?;
    let (u, v) = solve_quad(&flipped_u, &flipped_v)?;
    Ok((UEdgeData::new(-u.a.conj(), u.u)?, VEdgeData::new(-v.b.conj(), v.v)?))
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Initial data for propagation: the bottom row of horizontal edges and the
/// left column of vertical edges.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData {
    pub row0: Vec<UEdgeData>,
    pub col0: Vec<VEdgeData>,
}

impl CauchyData {
    /// Same data on every Cauchy edge of an `m × n` window.
    pub fn constant(m: usize, n: usize, u: UEdgeData, v: VEdgeData) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInput("window dimensions must be positive".into()));
        }
        Ok(CauchyData {
            row0: vec![u; m - 1],
            col0: vec![v; n - 1],
        })
    }

    pub fn width(&self) -> usize {
        self.row0.len() + 1
    }

    pub fn height(&self) -> usize {
        self.col0.len() + 1
    }

    /// First vertical Cauchy edge on which β(1) vanishes.
    pub fn euclidean_degeneracy(&self) -> Option<Location> {
        self.col0
            .iter()
            .position(VEdgeData::is_euclidean_degenerate)
            .map(|n| Location::VerticalEdge { m: 0, n })
    }
}

/// Lax data on every edge of an `M × N` vertex window.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeLax {
    width: usize,
    height: usize,
    horizontal: Vec<UEdgeData>,
    vertical: Vec<VEdgeData>,
}

/// Worst-case invariant defects of a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LatticeCheck {
    pub uu_vv: f64,
    pub commutation: f64,
    pub alpha_spread: f64,
    pub beta_spread: f64,
}

impl LatticeCheck {
    pub fn passes(&self) -> bool {
        self.uu_vv < tolerance::UU_VV
            && self.commutation < tolerance::COMMUTATION
            && self.alpha_spread < tolerance::LABELING_PRESERVATION
            && self.beta_spread < tolerance::LABELING_PRESERVATION
    }
}

impl LatticeLax {
    /// Assemble a lattice from explicit edge data. `horizontal` is indexed
    /// `n·(M-1) + m`, `vertical` is indexed `n·M + m`.
    pub fn from_parts(
        width: usize,
        height: usize,
        horizontal: Vec<UEdgeData>,
        vertical: Vec<VEdgeData>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("window dimensions must be positive".into()));
        }
        if horizontal.len() != (width - 1) * height || vertical.len() != width * (height - 1) {
            return Err(Error::InvalidInput(format!(
                "edge counts ({}, {}) do not match a {width}x{height} window",
                horizontal.len(),
                vertical.len()
            )));
        }
        Ok(LatticeLax {
            width,
            height,
            horizontal,
            vertical,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Data on the horizontal edge (m, n) → (m + 1, n).
    pub fn u_edge(&self, m: usize, n: usize) -> &UEdgeData {
        &self.horizontal[n * (self.width - 1) + m]
    }

    /// Data on the vertical edge (m, n) → (m, n + 1).
    pub fn v_edge(&self, m: usize, n: usize) -> &VEdgeData {
        &self.vertical[n * self.width + m]
    }

    pub fn horizontal_edges(&self) -> &[UEdgeData] {
        &self.horizontal
    }

    pub fn vertical_edges(&self) -> &[VEdgeData] {
        &self.vertical
    }

    pub fn quad(&self, m: usize, n: usize) -> QuadLax {
        QuadLax {
            u: *self.u_edge(m, n),
            v: *self.v_edge(m, n),
            up: *self.u_edge(m, n + 1),
            vp: *self.v_edge(m + 1, n),
        }
    }

    pub fn quads(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width.saturating_sub(1);
        (0..self.height.saturating_sub(1)).flat_map(move |n| (0..w).map(move |m| (m, n)))
    }

    pub fn cauchy_data(&self) -> CauchyData {
        CauchyData {
            row0: (0..self.width - 1).map(|m| *self.u_edge(m, 0)).collect(),
            col0: (0..self.height - 1).map(|n| *self.v_edge(0, n)).collect(),
        }
    }

    /// First vertical edge on which β(1) vanishes.
    pub fn euclidean_degeneracy(&self) -> Option<Location> {
        (0..self.height.saturating_sub(1))
            .flat_map(|n| (0..self.width).map(move |m| (m, n)))
            .find(|&(m, n)| self.v_edge(m, n).is_euclidean_degenerate())
            .map(|(m, n)| Location::VerticalEdge { m, n })
    }

    /// Worst invariant defects over all quads, plus labeling constancy along
    /// columns of horizontal edges and rows of vertical edges.
    pub fn check(&self) -> Result<LatticeCheck> {
        let mut out = LatticeCheck::default();
        for (m, n) in self.quads() {
            let q = self.quad(m, n);
            out.uu_vv = out.uu_vv.max(q.uu_vv_defect());
            let r = q.check_residual().map_err(|e| e.at(Location::Quad { m, n }))?;
            out.commutation = out.commutation.max(r);
        }
        for m in 0..self.width.saturating_sub(1) {
            let base = self.u_edge(m, 0).label();
            for n in 1..self.height {
                let d = (self.u_edge(m, n).label() - base).abs() / base;
                out.alpha_spread = out.alpha_spread.max(d);
            }
        }
        for n in 0..self.height.saturating_sub(1) {
            let base = self.v_edge(0, n).label();
            for m in 1..self.width {
                let d = (self.v_edge(m, n).label() - base).abs() / base;
                out.beta_spread = out.beta_spread.max(d);
            }
        }
        Ok(out)
    }

    /// Positive vertex function with `u = w·w₁`, `v = w·w₂`, built from
    /// `w(0,0) = 1` along the bottom row and then up each column. Returns the
    /// values (indexed `n·M + m`) and the worst relative closure defect on the
    /// horizontal edges not used in the construction.
    pub fn vertex_function(&self) -> (Vec<f64>, f64) {
        let (w_, h_) = (self.width, self.height);
        let mut w = vec![0.0; w_ * h_];
        w[0] = 1.0;
        for m in 1..w_ {
            w[m] = self.u_edge(m - 1, 0).u / w[m - 1];
        }
        for n in 1..h_ {
            for m in 0..w_ {
                w[n * w_ + m] = self.v_edge(m, n - 1).v / w[(n - 1) * w_ + m];
            }
        }
        let mut defect: f64 = 0.0;
        for n in 1..h_ {
            for m in 0..w_ - 1 {
                let u = self.u_edge(m, n).u;
                let prod = w[n * w_ + m] * w[n * w_ + m + 1];
                defect = defect.max((prod - u).abs() / u);
            }
        }
        (w, defect)
    }

    /// SHA-256 over the raw bits of all edge data.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.width as u64).to_le_bytes());
        h.update((self.height as u64).to_le_bytes());
        for e in &self.horizontal {
            for x in [e.a.re, e.a.im, e.u] {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        for e in &self.vertical {
            for x in [e.b.re, e.b.im, e.v] {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Fill a lattice quad by quad, row-major, from its Cauchy data.
pub fn propagate(c: &CauchyData) -> Result<LatticeLax> {
    let (w, h) = (c.width(), c.height());
    let mut horizontal: Vec<Option<UEdgeData>> = vec![None; (w - 1) * h];
    let mut vertical: Vec<Option<VEdgeData>> = vec![None; w * (h - 1)];
    for (m, e) in c.row0.iter().enumerate() {
        horizontal[m] = Some(*e);
    }
    for (n, e) in c.col0.iter().enumerate() {
        vertical[n * w] = Some(*e);
    }
    for n in 0..h.saturating_sub(1) {
        for m in 0..w - 1 {
            let u = horizontal[n * (w - 1) + m].expect("filled in row-major order");
            let v = vertical[n * w + m].expect("filled in row-major order");
            let s = solve_quad_detailed(&u, &v).map_err(|e| e.at(Location::Quad { m, n }))?;
            horizontal[(n + 1) * (w - 1) + m] = Some(s.up);
            vertical[n * w + m + 1] = Some(s.vp);
        }
    }
    LatticeLax::from_parts(
        w,
        h,
        horizontal.into_iter().map(|e| e.expect("all edges filled")).collect(),
        vertical.into_iter().map(|e| e.expect("all edges filled")).collect(),
    )
}
