//! Vertex frames integrating a lattice of Lax matrices.

use crate::algebra::Quaternion;
use crate::error::{Error, Location, Result};
use crate::lax::{du_dgamma, dv_dgamma, eval_u, eval_v, LatticeLax, SpectralPoint};

/// `Φ(m, n)` at one spectral point, with `Φ₁ = UΦ` and `Φ₂ = VΦ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameField {
    spectral: SpectralPoint,
    width: usize,
    height: usize,
    frames: Vec<Quaternion>,
}

impl FrameField {
    pub fn spectral(&self) -> SpectralPoint {
        self.spectral
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn at(&self, m: usize, n: usize) -> &Quaternion {
        &self.frames[n * self.width + m]
    }

    /// Frames indexed `n·M + m`.
    pub fn frames(&self) -> &[Quaternion] {
        &self.frames
    }

    /// Worst mismatch of `Φ₁ = UΦ` and `Φ₂ = VΦ` over all edges of `lat`,
    /// which measures path independence of the integration.
    pub fn recursion_defect(&self, lat: &LatticeLax) -> Result<f64> {
        let s = self.spectral;
        let mut worst: f64 = 0.0;
        for n in 0..self.height {
            for m in 0..self.width {
                if m + 1 < self.width {
                    let u = eval_u(lat.u_edge(m, n), s)?;
                    worst = worst.max((u * *self.at(m, n)).dist(self.at(m + 1, n)));
                }
                if n + 1 < self.height {
                    let v = eval_v(lat.v_edge(m, n), s)?;
                    worst = worst.max((v * *self.at(m, n)).dist(self.at(m, n + 1)));
                }
            }
        }
        Ok(worst)
    }

    /// Worst `‖ΦΦ† - 1‖ + |det Φ - 1|` over all vertices.
    pub fn unitarity_defect(&self) -> f64 {
        self.frames.iter().map(Quaternion::unitarity_defect).fold(0.0, f64::max)
    }
}

/// Integrate with base gauge `Φ(0,0) = 1`.
pub fn integrate_frame(lat: &LatticeLax, s: SpectralPoint) -> Result<FrameField> {
    integrate_frame_from(lat, s, Quaternion::one())
}

/// Integrate row-major from an arbitrary base frame.
pub fn integrate_frame_from(lat: &LatticeLax, s: SpectralPoint, base: Quaternion) -> Result<FrameField> {
    let (w, h) = (lat.width(), lat.height());
    let mut frames = Vec::with_capacity(w * h);
    for n in 0..h {
        for m in 0..w {
            let phi = if m == 0 && n == 0 {
                base
            } else if m == 0 {
                let v = eval_v(lat.v_edge(0, n - 1), s).map_err(|e| e.at(Location::VerticalEdge { m: 0, n: n - 1 }))?;
                v * frames[(n - 1) * w]
            } else {
                let u = eval_u(lat.u_edge(m - 1, n), s).map_err(|e| e.at(Location::HorizontalEdge { m: m - 1, n }))?;
                u * frames[n * w + m - 1]
            };
            frames.push(phi);
        }
    }
    Ok(FrameField {
        spectral: s,
        width: w,
        height: h,
        frames,
    })
}

/// The frame at γ = 0 together with `Φ̇ = ∂Φ/∂γ` at γ = 0, `Φ̇(0,0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameWithDerivative {
    pub frame: FrameField,
    derivative: Vec<Quaternion>,
}

impl FrameWithDerivative {
    pub fn derivative_at(&self, m: usize, n: usize) -> &Quaternion {
        &self.derivative[n * self.frame.width + m]
    }

    pub fn derivatives(&self) -> &[Quaternion] {
        &self.derivative
    }

    /// Worst mismatch of the product rule `Φ̇₁ = U̇Φ + UΦ̇` (and the V analogue).
    pub fn recursion_defect(&self, lat: &LatticeLax) -> Result<f64> {
        let s = SpectralPoint::euclidean();
        let (w, h) = (self.frame.width, self.frame.height);
        let mut worst: f64 = 0.0;
        for n in 0..h {
            for m in 0..w {
                let (phi, dphi) = (*self.frame.at(m, n), *self.derivative_at(m, n));
                if m + 1 < w {
                    let e = lat.u_edge(m, n);
                    let next = du_dgamma(e)? * phi + eval_u(e, s)? * dphi;
                    worst = worst.max(next.dist(self.derivative_at(m + 1, n)));
                }
                if n + 1 < h {
                    let e = lat.v_edge(m, n);
                    let next = dv_dgamma(e)? * phi + eval_v(e, s)? * dphi;
                    worst = worst.max(next.dist(self.derivative_at(m, n + 1)));
                }
            }
        }
        Ok(worst)
    }
}

pub fn integrate_frame_with_derivative(lat: &LatticeLax) -> Result<FrameWithDerivative> {
    integrate_frame_with_derivative_from(lat, Quaternion::one())
}

pub fn integrate_frame_with_derivative_from(lat: &LatticeLax, base: Quaternion) -> Result<FrameWithDerivative> {
    if let Some(location) = lat.euclidean_degeneracy() {
        return Err(Error::EuclideanEvaluationImpossible.at(location));
    }
    let s = SpectralPoint::euclidean();
    let frame = integrate_frame_from(lat, s, base)?;
    let (w, h) = (lat.width(), lat.height());
    let mut derivative = Vec::with_capacity(w * h);
    for n in 0..h {
        for m in 0..w {
            let d = if m == 0 && n == 0 {
                Quaternion::zero()
            } else if m == 0 {
                let e = lat.v_edge(0, n - 1);
                let loc = Location::VerticalEdge { m: 0, n: n - 1 };
                let dv = dv_dgamma(e).map_err(|e| e.at(loc))?;
                let v = eval_v(e, s).map_err(|e| e.at(loc))?;
                dv * *frame.at(0, n - 1) + v * derivative[(n - 1) * w]
            } else {
                let e = lat.u_edge(m - 1, n);
                let loc = Location::HorizontalEdge { m: m - 1, n };
                let du = du_dgamma(e).map_err(|e| e.at(loc))?;
                let u = eval_u(e, s).map_err(|e| e.at(loc))?;
                du * *frame.at(m - 1, n) + u * derivative[n * w + m - 1]
            };
            derivative.push(d);
        }
    }
    Ok(FrameWithDerivative { frame, derivative })
}

/// `Ψ = exp(-γ/2·k)·Φ`, i.e. left multiplication by `diag(e^{iγ/2}, e^{-iγ/2})`.
pub fn gauge_psi(phi: &FrameField) -> FrameField {
    let g = Quaternion::exp_k(-0.5 * phi.spectral.gamma());
    FrameField {
        frames: phi.frames.iter().map(|f| g * *f).collect(),
        ..phi.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lax::{propagate, CauchyData, UEdgeData, VEdgeData};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant(m: usize, n: usize) -> LatticeLax {
        let u = UEdgeData::new(c(1.0, 0.0), 1.0).unwrap();
        let v = VEdgeData::new(c(1.0, 0.0), 1.0).unwrap();
        propagate(&CauchyData::constant(m, n, u, v).unwrap()).unwrap()
    }

    fn sample() -> LatticeLax {
        let row0 = [(0.3, -0.4, 1.2), (-0.5, 0.1, 0.9), (0.2, 0.6, 1.1), (0.0, -0.2, 0.8)]
            .map(|(r, i, u)| UEdgeData::new(c(r, i), u).unwrap())
            .to_vec();
        let col0 = [(0.7, 0.2, 0.9), (-0.3, -0.5, 1.3), (0.4, 0.4, 1.05), (0.1, 0.9, 0.7)]
            .map(|(r, i, v)| VEdgeData::new(c(r, i), v).unwrap())
            .to_vec();
        propagate(&CauchyData { row0, col0 }).unwrap()
    }

    #[test]
    fn constant_data_frame_is_power_of_u() {
        let lat = constant(3, 3);
        let f = integrate_frame(&lat, SpectralPoint::euclidean()).unwrap();
        let u = Quaternion::new(c(1.0, 0.0), c(-2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)).scale(1.0 / 5f64.sqrt());
        assert!(f.at(1, 0).dist(&u) < 1e-15);
        assert!(f.at(2, 2).dist(&(u * u)) < 1e-14);
    }

    #[test]
    fn single_vertex_window() {
        let lat = propagate(&CauchyData {
            row0: vec![],
            col0: vec![],
        })
        .unwrap();
        let f = integrate_frame(&lat, SpectralPoint::new(0.3)).unwrap();
        assert_eq!(f.frames(), &[Quaternion::one()]);
    }

    #[test]
    fn frames_are_path_independent_and_unitary() {
        let lat = sample();
        for gamma in [0.0, 0.4, -1.1, FRAC_PI_4] {
            let f = integrate_frame(&lat, SpectralPoint::new(gamma)).unwrap();
            assert!(f.recursion_defect(&lat).unwrap() < 1e-11);
            assert!(f.unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn twisted_loop_group_symmetry() {
        let lat = sample();
        let sigma3 = Quaternion::k().scale_complex(c(0.0, 1.0));
        for gamma in [0.2, 0.9] {
            let f = integrate_frame(&lat, SpectralPoint::new(gamma)).unwrap();
            let g = integrate_frame(&lat, SpectralPoint::new(gamma + PI)).unwrap();
            for (a, b) in f.frames().iter().zip(g.frames()) {
                assert!(b.dist(&(sigma3 * *a * sigma3)) < 1e-11);
            }
        }
    }

    #[test]
    fn derivative_examples_on_constant_data() {
        let lat = constant(3, 3);
        let fd = integrate_frame_with_derivative(&lat).unwrap();
        for m in 0..3 {
            assert!(fd.derivative_at(m, 0).frobenius_norm() < 1e-15);
        }
        assert!(fd.derivative_at(0, 1).dist(&Quaternion::j().scale(-2.0)) < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let lat = sample();
        let fd = integrate_frame_with_derivative(&lat).unwrap();
        assert!(fd.recursion_defect(&lat).unwrap() < 1e-10);
        let h = 1e-5;
        let plus = integrate_frame(&lat, SpectralPoint::new(h)).unwrap();
        let minus = integrate_frame(&lat, SpectralPoint::new(-h)).unwrap();
        for (i, d) in fd.derivatives().iter().enumerate() {
            let approx = (plus.frames()[i] - minus.frames()[i]).scale(0.5 / h);
            assert!(approx.dist(d) < 1e-6);
        }
    }

    #[test]
    fn euclidean_degenerate_edge_is_rejected() {
        let u = UEdgeData::new(c(1.0, 0.0), 1.0).unwrap();
        let bad = VEdgeData::new(c(0.0, 0.0), 1.0).unwrap();
        let lat = propagate(&CauchyData {
            row0: vec![u],
            col0: vec![bad],
        })
        .unwrap();
        let err = integrate_frame_with_derivative(&lat).unwrap_err();
        assert_eq!(err.root(), &Error::EuclideanEvaluationImpossible);
        assert!(err.location().is_some());
    }

    #[test]
    fn gauge_psi_examples() {
        let lat = sample();
        let f0 = integrate_frame(&lat, SpectralPoint::euclidean()).unwrap();
        assert_eq!(gauge_psi(&f0), f0);

        let single = propagate(&CauchyData {
            row0: vec![],
            col0: vec![],
        })
        .unwrap();
        let f = integrate_frame(&single, SpectralPoint::new(FRAC_PI_2)).unwrap();
        let psi = gauge_psi(&f);
        let e = Complex64::from_polar(1.0, FRAC_PI_4);
        assert!(psi.at(0, 0).dist(&Quaternion::diagonal(e)) < 1e-15);

        let g = integrate_frame(&lat, SpectralPoint::new(0.7)).unwrap();
        let back = gauge_psi(&FrameField {
            spectral: SpectralPoint::new(-0.7),
            ..gauge_psi(&g)
        });
        for (a, b) in back.frames().iter().zip(g.frames()) {
            assert!(a.dist(b) < 1e-15);
        }
    }
}
