//! The discrete Lawson correspondence: one lattice of Lax data, read at
//! γ = 0 and at γ₁, gives isometric CMC nets in R³ and in round spheres.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{metric_products, norm, sub, MetricProducts, QuadNet};
use crate::immersion::{
    immerse_lattice_r3, immerse_s3, mean_curvature_defect, scale_to_sphere, NetR3, NetS3, SphereNet,
};
use crate::lax::{alpha, beta, propagate, CauchyData, LatticeLax, SpectralPoint};
use crate::report::Report;
use crate::tolerance;

/// CMC-1 net in R³ and minimal net in S³ from the same lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LawsonPair {
    pub lattice: LatticeLax,
    pub r3: NetR3,
    pub s3: NetS3,
}

impl LawsonPair {
    /// Metric products `(F̂, F̌)` and `(F, N)`.
    pub fn products(&self) -> Result<(MetricProducts, MetricProducts)> {
        Ok((
            metric_products(&self.r3.f, &self.r3.dual)?,
            metric_products(&self.s3.f, &self.s3.normal)?,
        ))
    }

    /// Worst relative edge-wise disagreement of the two metrics.
    pub fn isometry_defect(&self) -> Result<f64> {
        let (a, b) = self.products()?;
        Ok(max_relative(&a, &b))
    }
}

fn max_relative(a: &MetricProducts, b: &MetricProducts) -> f64 {
    a.horizontal
        .iter()
        .zip(&b.horizontal)
        .chain(a.vertical.iter().zip(&b.vertical))
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()))
        .fold(0.0, f64::max)
}

pub fn lawson_pair(c: &CauchyData) -> Result<LawsonPair> {
    let lattice = propagate(c)?;
    lawson_pair_from(lattice)
}

pub fn lawson_pair_from(lattice: LatticeLax) -> Result<LawsonPair> {
    let r3 = immerse_lattice_r3(&lattice)?;
    let s3 = immerse_s3(&lattice, std::f64::consts::FRAC_PI_4)?;
    Ok(LawsonPair { lattice, r3, s3 })
}

/// One member of the sphere family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub gamma1: f64,
    pub net: SphereNet,
    /// Worst per-face deviation of the measured mean curvature from `cos 2γ₁`.
    pub h_defect: f64,
    /// `H = cos 2γ₁`.
    pub h: f64,
    /// `κ = sin² 2γ₁`.
    pub kappa: f64,
    /// Products `ρ = (ssᵢ)/H`, measured against the dual `H·F + N`.
    pub rho: MetricProducts,
}

impl FamilyMember {
    pub fn conservation_defect(&self) -> f64 {
        (self.h * self.h + self.kappa - 1.0).abs()
    }
}

pub fn family_member(lattice: &LatticeLax, gamma1: f64) -> Result<FamilyMember> {
    let net = scale_to_sphere(&immerse_s3(lattice, gamma1)?)?;
    let h = net.mean_curvature();
    let h_defect = mean_curvature_defect(&net.f, &net.normal, h)?;
    let dual: QuadNet<4> = net.f.map(|p| p.map(|x| x * h)).add_scaled(&net.normal, 1.0);
    let rho = metric_products(&net.f, &dual)?;
    Ok(FamilyMember {
        gamma1,
        kappa: net.kappa(),
        net,
        h_defect,
        h,
        rho,
    })
}

pub fn sphere_family(c: &CauchyData, gammas: &[f64]) -> Result<Vec<FamilyMember>> {
    let lattice = propagate(c)?;
    sphere_family_from(&lattice, gammas)
}

pub fn sphere_family_from(lattice: &LatticeLax, gammas: &[f64]) -> Result<Vec<FamilyMember>> {
    gammas.iter().map(|&g| family_member(lattice, g)).collect()
}

/// Worst relative disagreement of `ρ` between any member and the first.
pub fn cross_member_defect(family: &[FamilyMember]) -> f64 {
    family
        .iter()
        .skip(1)
        .map(|m| max_relative(&family[0].rho, &m.rho))
        .fold(0.0, f64::max)
}

/// `a ↦ a/(1 + δ·a)`, the labeling transport with `δ = H′ - H` (horizontal)
/// or `δ = -(H - H′)` written for the vertical labels.
pub fn moebius(a: f64, delta: f64) -> f64 {
    a / (1.0 + delta * a)
}

/// Labelings of one member: `a₀₁ = 2/α(γ)²` per horizontal edge, `a₀₂ = -2/β(γ)²` per vertical edge.
pub fn labelings(lattice: &LatticeLax, gamma: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = SpectralPoint::new(gamma);
    let a = lattice
        .horizontal_edges()
        .iter()
        .map(|e| Ok(2.0 / alpha(e, s)?.powi(2)))
        .collect::<Result<_>>()?;
    let b = lattice
        .vertical_edges()
        .iter()
        .map(|e| Ok(-2.0 / beta(e, s)?.powi(2)))
        .collect::<Result<_>>()?;
    Ok((a, b))
}

/// Calapso labeling identities between two members of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalapsoCheck {
    pub gamma: f64,
    pub gamma_prime: f64,
    /// Worst `|α(γ′)² - α(γ)² - 2(H′ - H)|` and the β analogue.
    pub alpha_shift: f64,
    pub beta_shift: f64,
    /// Worst relative residual of `a′₀₁ = a₀₁/(1 + (H′-H)a₀₁)`.
    pub a01: f64,
    /// Worst relative residual of `a′₀₂ = a₀₂/(1 - (H-H′)a₀₂)`.
    pub a02: f64,
}

impl CalapsoCheck {
    pub fn worst(&self) -> f64 {
        self.alpha_shift.max(self.beta_shift).max(self.a01).max(self.a02)
    }
}

pub fn calapso_labeling_check(
    first: &FamilyMember,
    second: &FamilyMember,
    lattice: &LatticeLax,
) -> Result<CalapsoCheck> {
    let hash = lattice.content_hash();
    if first.net.provenance.lattice_hash != hash || second.net.provenance.lattice_hash != hash {
        return Err(Error::MismatchedProvenance);
    }
    let (g, gp) = (first.gamma1, second.gamma1);
    let (h, hp) = ((2.0 * g).cos(), (2.0 * gp).cos());
    let (s, sp) = (SpectralPoint::new(g), SpectralPoint::new(gp));
    let mut out = CalapsoCheck {
        gamma: g,
        gamma_prime: gp,
        alpha_shift: 0.0,
        beta_shift: 0.0,
        a01: 0.0,
        a02: 0.0,
    };
    for e in lattice.horizontal_edges() {
        let (a2, ap2) = (alpha(e, s)?.powi(2), alpha(e, sp)?.powi(2));
        out.alpha_shift = out.alpha_shift.max((ap2 - a2 - 2.0 * (hp - h)).abs());
        let (a, ap) = (2.0 / a2, 2.0 / ap2);
        out.a01 = out.a01.max((moebius(a, hp - h) - ap).abs() / ap.abs());
    }
    for e in lattice.vertical_edges() {
        let (b2, bp2) = (beta(e, s)?.powi(2), beta(e, sp)?.powi(2));
        out.beta_shift = out.beta_shift.max((bp2 - b2 - 2.0 * (h - hp)).abs());
        let (a, ap) = (-2.0 / b2, -2.0 / bp2);
        out.a02 = out.a02.max((moebius(a, -(h - hp)) - ap).abs() / ap.abs());
    }
    Ok(out)
}

/// One row of the Euclidean-limit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub gamma: f64,
    pub deviation: f64,
    /// `D(γₖ)/D(γₖ₋₁)`; absent on the first row.
    pub ratio: Option<f64>,
}

/// `D(γ) = max ‖Im(F - 𝟙)/sin 2γ - F̂‖` over vertices, for decreasing γ.
pub fn euclidean_limit(lattice: &LatticeLax, gammas: &[f64]) -> Result<Vec<LimitRow>> {
    for w in gammas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidInput("limit angles must be strictly decreasing".into()));
        }
    }
    if let Some(g) = gammas
        .iter()
        .find(|g| !(**g > 0.0 && **g <= std::f64::consts::FRAC_PI_4))
    {
        return Err(Error::InvalidInput(format!("limit angle {g} outside (0, π/4]")));
    }
    let flat = immerse_lattice_r3(lattice)?;
    let mut rows: Vec<LimitRow> = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let net = immerse_s3(lattice, g)?;
        let sin2 = (2.0 * g).sin();
        let deviation = net
            .f
            .points()
            .iter()
            .zip(flat.f.points())
            .map(|(p, q)| {
                // R⁴ coordinates (X₁, X₂, X₃, X₄) carry 𝟙 in X₄; drop it
                let im = [p[0] / sin2, p[1] / sin2, p[2] / sin2];
                norm(&sub(&im, q))
            })
            .fold(0.0, f64::max);
        let ratio = rows.last().map(|r| deviation / r.deviation);
        rows.push(LimitRow {
            gamma: g,
            deviation,
            ratio,
        });
    }
    Ok(rows)
}

/// Whether `D` decreases strictly along the table.
pub fn limit_is_monotone(rows: &[LimitRow]) -> bool {
    rows.windows(2).all(|w| w[1].deviation < w[0].deviation)
}

/// Everything the Lawson statements promise, for one lattice and a family of angles.
pub fn verify_lawson(lattice: &LatticeLax, gammas: &[f64]) -> Result<Report> {
    let mut r = Report::default();
    let pair = lawson_pair_from(lattice.clone())?;
    r.push("lawson isometry", pair.isometry_defect()?, tolerance::METRIC_PRODUCT);
    r.push(
        "r3 mean curvature",
        mean_curvature_defect(&pair.r3.f, &pair.r3.normal, 1.0)?,
        tolerance::MEAN_CURVATURE,
    );
    r.push(
        "s3 mean curvature",
        mean_curvature_defect(&pair.s3.f, &pair.s3.normal, 0.0)?,
        tolerance::MEAN_CURVATURE,
    );
    let family = sphere_family_from(lattice, gammas)?;
    for m in &family {
        r.push(
            format!("mean curvature at gamma {}", m.gamma1),
            m.h_defect,
            tolerance::MEAN_CURVATURE,
        );
        r.push(
            format!("H^2 + kappa at gamma {}", m.gamma1),
            m.conservation_defect(),
            tolerance::CONSERVATION,
        );
    }
    r.push(
        "cross-member products",
        cross_member_defect(&family),
        tolerance::METRIC_PRODUCT,
    );
    let mut calapso: f64 = 0.0;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            calapso = calapso.max(calapso_labeling_check(a, b, lattice)?.worst());
        }
    }
    r.push("calapso labelings", calapso, tolerance::CALAPSO);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot;
    use crate::lax::{UEdgeData, VEdgeData};
    use crate::sample::{random_cauchy, RandomRanges};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};

    fn constant(w: usize, h: usize) -> CauchyData {
        let u = UEdgeData::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        let v = VEdgeData::new(Complex64::new(1.0, 0.0), 1.0).unwrap();
        CauchyData::constant(w, h, u, v).unwrap()
    }

    #[test]
    fn constant_pair_example() {
        let pair = lawson_pair(&constant(2, 2)).unwrap();
        let sq = |e: [f64; 3]| dot(&e, &e);
        assert!((sq(pair.r3.f.horizontal_edge(0, 0)) - 0.8).abs() < 1e-14);
        assert!((sq(pair.r3.f.vertical_edge(0, 0)) - 4.0).abs() < 1e-14);
        let sq4 = |e: [f64; 4]| dot(&e, &e);
        assert!((sq4(pair.s3.f.horizontal_edge(0, 0)) - 4.0 / 3.0).abs() < 1e-14);
        assert!((sq4(pair.s3.f.vertical_edge(0, 0)) - 4.0 / 3.0).abs() < 1e-14);
        let (a, b) = pair.products().unwrap();
        for p in [&a, &b] {
            assert!((p.horizontal[0] + 1.0).abs() < 1e-12 && (p.vertical[0] - 1.0).abs() < 1e-12);
        }
        assert!(pair.isometry_defect().unwrap() < 1e-12);
    }

    #[test]
    fn single_vertex_pair_is_vacuous() {
        let pair = lawson_pair(&constant(1, 1)).unwrap();
        assert_eq!(pair.r3.f.points().len(), 1);
        assert_eq!(pair.isometry_defect().unwrap(), 0.0);
    }

    #[test]
    fn family_examples() {
        let fam = sphere_family(&constant(3, 3), &[FRAC_PI_4, FRAC_PI_6]).unwrap();
        assert!(fam[0].h.abs() < 1e-15 && (fam[0].kappa - 1.0).abs() < 1e-15);
        assert!((fam[1].h - 0.5).abs() < 1e-15 && (fam[1].kappa - 0.75).abs() < 1e-15);
        assert!((fam[0].net.radius() - 1.0).abs() < 1e-15);
        // ss₁ = -u²H = -0.5 for the π/6 member, against F* = F + N/H
        let m = &fam[1];
        let star = m.net.f.add_scaled(&m.net.normal, 1.0 / m.h);
        let p = metric_products(&m.net.f, &star).unwrap();
        assert!(p.horizontal.iter().all(|x| (x + 0.5).abs() < 1e-12));
        assert!(cross_member_defect(&fam) < 1e-12);
    }

    #[test]
    fn calapso_examples() {
        let c = constant(3, 3);
        let lat = propagate(&c).unwrap();
        let fam = sphere_family_from(&lat, &[FRAC_PI_4, FRAC_PI_6]).unwrap();
        let e = lat.u_edge(0, 0);
        // α² goes 3 → 4: the shift is 2(H′ - H), not H′ - H
        assert!((alpha(e, SpectralPoint::new(FRAC_PI_4)).unwrap().powi(2) - 3.0).abs() < 1e-14);
        assert!((alpha(e, SpectralPoint::new(FRAC_PI_6)).unwrap().powi(2) - 4.0).abs() < 1e-14);
        let same = calapso_labeling_check(&fam[0], &fam[0], &lat).unwrap();
        assert!(same.worst() < 1e-15);
        assert!(calapso_labeling_check(&fam[0], &fam[1], &lat).unwrap().worst() < 1e-12);
        // the map and its inverse
        let a = 2.0 / 3.0;
        assert!((moebius(moebius(a, 0.5), -0.5) - a).abs() < 1e-12);

        let other = propagate(&constant(3, 4)).unwrap();
        let foreign = family_member(&other, FRAC_PI_6).unwrap();
        assert_eq!(
            calapso_labeling_check(&fam[0], &foreign, &lat),
            Err(Error::MismatchedProvenance)
        );
    }

    #[test]
    fn random_family_verifies() {
        let c = random_cauchy(5, 5, &RandomRanges::default(), 21).unwrap();
        let lat = propagate(&c).unwrap();
        let r = verify_lawson(&lat, &[FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI / 12.0]).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{} = {:e}", c.name, c.value);
        }
    }

    #[test]
    fn limit_table() {
        let lat = propagate(&constant(4, 4)).unwrap();
        let rows = euclidean_limit(&lat, &[0.2, 0.1, 0.05, 0.025]).unwrap();
        assert!(limit_is_monotone(&rows));
        assert!(rows[0].ratio.is_none() && rows[1].ratio.is_some());
        let one = euclidean_limit(&lat, &[0.1]).unwrap();
        assert_eq!(one.len(), 1);
        assert!(euclidean_limit(&lat, &[0.1, 0.2]).is_err());
        assert!(euclidean_limit(&lat, &[1.0]).is_err());
    }
}
