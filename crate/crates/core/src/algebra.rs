//! Quaternions as 2×2 complex matrices.
//!
//! The basis is
//!
//! ```text
//!   i = [[0, -i], [-i, 0]]    j = [[0, -1], [1, 0]]    k = [[-i, 0], [0, i]]
//! ```
//!
//! so that `x0·1 + x1·i + x2·j + x3·k = [[x0 - i x3, -x2 - i x1], [x2 - i x1, x0 + i x3]]`.
//! Points of R^3 are imaginary quaternions `X1·i + X2·j + X3·k`; points of R^4
//! are `X4·1 + X1·i + X2·j + X3·k`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

pub type Vec3 = [f64; 3];
pub type Vec4 = [f64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix. Values built from real coefficients carry the
/// real-quaternion structure; products of Lax matrices preserve it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub m: [[Complex64; 2]; 2],
}

impl Quaternion {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Quaternion {
            m: [[m11, m12], [m21, m22]],
        }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn one() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn i() -> Self {
        Self::new(ZERO, -I, -I, ZERO)
    }

    pub fn j() -> Self {
        Self::new(ZERO, -ONE, ONE, ZERO)
    }

    pub fn k() -> Self {
        Self::new(-I, ZERO, ZERO, I)
    }

    /// `x0·1 + x1·i + x2·j + x3·k`.
    pub fn from_coeffs(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self::new(
            Complex64::new(x0, -x3),
            Complex64::new(-x2, -x1),
            Complex64::new(x2, -x1),
            Complex64::new(x0, x3),
        )
    }

    /// `diag(d, conj(d))`.
    pub fn diagonal(d: Complex64) -> Self {
        Self::new(d, ZERO, ZERO, d.conj())
    }

    /// `exp(theta·k) = cos(theta)·1 + sin(theta)·k`.
    pub fn exp_k(theta: f64) -> Self {
        Self::from_coeffs(theta.cos(), 0.0, 0.0, theta.sin())
    }

    /// Coefficients `[x0, x1, x2, x3]` of the real-quaternion part of the matrix
    /// (the orthogonal projection onto the span of `1, i, j, k`).
    pub fn coeffs(&self) -> [f64; 4] {
        let [[a, b], [c, d]] = self.m;
        [
            0.5 * (a.re + d.re),
            -0.5 * (b.im + c.im),
            0.5 * (c.re - b.re),
            0.5 * (d.im - a.im),
        ]
    }

    /// Distance of the matrix from the real-quaternion subspace.
    pub fn structure_defect(&self) -> f64 {
        let [[a, b], [c, d]] = self.m;
        ((c + b.conj()).norm_sqr() + (d - a.conj()).norm_sqr()).sqrt()
    }

    pub fn real_part(&self) -> f64 {
        self.coeffs()[0]
    }

    /// Imaginary part as a vector of R^3.
    pub fn imag_vec(&self) -> Vec3 {
        let [_, x1, x2, x3] = self.coeffs();
        [x1, x2, x3]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Conjugate transpose. For real quaternions this is quaternion conjugation.
    pub fn adjoint(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self::new(f(a), f(b), f(c), f(d))
    }

    /// Matrix inverse; `None` when the determinant vanishes exactly.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            return None;
        }
        let [[a, b], [c, d]] = self.m;
        Some(Self::new(d / det, -b / det, -c / det, a / det))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Euclidean norm of the quaternion, `sqrt(x0² + x1² + x2² + x3²)`.
    pub fn norm(&self) -> f64 {
        self.frobenius_norm() / std::f64::consts::SQRT_2
    }

    /// `‖Q Q† - 1‖_F + |det Q - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Self::one()).frobenius_norm() + (self.det() - ONE).norm()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] += rhs.m[r][c];
            }
        }
        out
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        self + (-rhs)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.map(|z| -z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        let a = self.m;
        let b = rhs.m;
        Quaternion::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale(self)
    }
}

pub fn embed_r3(v: Vec3) -> Quaternion {
    Quaternion::from_coeffs(0.0, v[0], v[1], v[2])
}

pub fn project_r3(q: &Quaternion) -> Result<Vec3> {
    check_structure(q)?;
    let norm = q.norm();
    let real = q.real_part();
    if real.abs() > tolerance::IMAGINARY * norm.max(f64::MIN_POSITIVE) && real != 0.0 {
        return Err(Error::NotImaginary { real: real / norm });
    }
    Ok(q.imag_vec())
}

pub fn embed_r4(v: Vec4) -> Quaternion {
    Quaternion::from_coeffs(v[3], v[0], v[1], v[2])
}

pub fn project_r4(q: &Quaternion) -> Result<Vec4> {
    check_structure(q)?;
    let [x0, x1, x2, x3] = q.coeffs();
    Ok([x1, x2, x3, x0])
}

fn check_structure(q: &Quaternion) -> Result<()> {
    let defect = q.structure_defect();
    let scale = q.frobenius_norm().max(1.0);
    if defect > tolerance::QUATERNION_STRUCTURE * scale || !q.is_finite() {
        return Err(Error::NotRealQuaternion { defect });
    }
    Ok(())
}

/// R^4 inner product read off the matrix representation: `½ Re tr(X Y†)`.
pub fn inner_r4(x: &Quaternion, y: &Quaternion) -> f64 {
    0.5 * (*x * y.adjoint()).trace().re
}

/// Quaternionic cross-ratio `(q1 - q2)(q2 - q3)^-1 (q3 - q4)(q4 - q1)^-1`.
pub fn cross_ratio(q1: &Quaternion, q2: &Quaternion, q3: &Quaternion, q4: &Quaternion) -> Result<Quaternion> {
    let d12 = *q1 - *q2;
    let d23 = *q2 - *q3;
    let d34 = *q3 - *q4;
    let d41 = *q4 - *q1;
    let scale = [d12, d23, d34, d41]
        .iter()
        .map(|d| d.det().norm().sqrt())
        .fold(0.0_f64, f64::max);
    let singular = |d: &Quaternion| d.det().norm() <= tolerance::SINGULAR_DIFFERENCE * scale.powi(2);
    if scale == 0.0 || singular(&d23) || singular(&d41) || singular(&d12) || singular(&d34) {
        return Err(Error::DegenerateQuadrilateral);
    }
    let inv23 = d23.inverse().ok_or(Error::DegenerateQuadrilateral)?;
    let inv41 = d41.inverse().ok_or(Error::DegenerateQuadrilateral)?;
    Ok(d12 * inv23 * d34 * inv41)
}

/// `(real part, |imaginary part|)` of a real quaternion: the data of its
/// characteristic polynomial, invariant under conjugation.
pub fn spectral_signature(q: &Quaternion) -> (f64, f64) {
    let [x0, x1, x2, x3] = q.coeffs();
    (x0, (x1 * x1 + x2 * x2 + x3 * x3).sqrt())
}
