//! Geometry of quad nets with planar faces: face defects, signed and mixed
//! areas, Steiner curvatures, metric products against a Christoffel dual, the
//! discrete conformal factor and edge labelings.
//!
//! Nothing here knows about Lax data. Points live in R^D for D = 3 or 4;
//! areas are measured in an orthonormal frame of the face plane.

use num_complex::Complex64;

use crate::algebra::{cross_ratio, embed_r3, embed_r4, Quaternion};
use crate::error::{Error, Location, Result};
use crate::tolerance;

pub type Point<const D: usize> = [f64; D];

pub fn add<const D: usize>(p: &Point<D>, q: &Point<D>) -> Point<D> {
    std::array::from_fn(|i| p[i] + q[i])
}

pub fn sub<const D: usize>(p: &Point<D>, q: &Point<D>) -> Point<D> {
    std::array::from_fn(|i| p[i] - q[i])
}

pub fn scale<const D: usize>(p: &Point<D>, s: f64) -> Point<D> {
    p.map(|x| x * s)
}

pub fn dot<const D: usize>(p: &Point<D>, q: &Point<D>) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

pub fn norm<const D: usize>(p: &Point<D>) -> f64 {
    dot(p, p).sqrt()
}

pub fn cross(p: &Point<3>, q: &Point<3>) -> Point<3> {
    [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ]
}

/// `‖p ∧ q‖`, the area of the parallelogram spanned by p and q.
pub fn wedge_norm<const D: usize>(p: &Point<D>, q: &Point<D>) -> f64 {
    // perpendicular component rather than a difference of squares, which
    // would bottom out near sqrt(eps)
    let np = norm(p);
    if np == 0.0 {
        return 0.0;
    }
    let u = scale(p, 1.0 / np);
    np * norm(&sub(q, &scale(&u, dot(q, &u))))
}

/// Points that can be read as quaternions.
pub trait Embed {
    fn to_quaternion(&self) -> Quaternion;
}

impl Embed for Point<3> {
    fn to_quaternion(&self) -> Quaternion {
        embed_r3(*self)
    }
}

impl Embed for Point<4> {
    fn to_quaternion(&self) -> Quaternion {
        embed_r4(*self)
    }
}

/// Oriented orthonormal frame `(e1, e2)` of a plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFrame<const D: usize> {
    pub e1: Point<D>,
    pub e2: Point<D>,
}

impl<const D: usize> PlaneFrame<D> {
    /// Gram–Schmidt on `(x, y)`; `None` if they are (nearly) dependent.
    pub fn from_span(x: &Point<D>, y: &Point<D>) -> Option<Self> {
        let nx = norm(x);
        if nx == 0.0 {
            return None;
        }
        let e1 = scale(x, 1.0 / nx);
        let y_perp = sub(y, &scale(&e1, dot(y, &e1)));
        let ny = norm(&y_perp);
        if ny <= 1e-12 * norm(y).max(nx) {
            return None;
        }
        Some(PlaneFrame {
            e1,
            e2: scale(&y_perp, 1.0 / ny),
        })
    }

    pub fn coords(&self, p: &Point<D>) -> [f64; 2] {
        [dot(p, &self.e1), dot(p, &self.e2)]
    }

    /// Component of `p` orthogonal to the plane.
    pub fn perpendicular(&self, p: &Point<D>) -> Point<D> {
        let [x, y] = self.coords(p);
        sub(p, &add(&scale(&self.e1, x), &scale(&self.e2, y)))
    }

    pub fn reversed(&self) -> Self {
        PlaneFrame {
            e1: self.e2,
            e2: self.e1,
        }
    }
}

impl PlaneFrame<3> {
    /// Frame with `e1 × e2 = n` (n is normalized here).
    pub fn from_normal(n: &Point<3>) -> Option<Self> {
        let len = norm(n);
        if len == 0.0 {
            return None;
        }
        let n = scale(n, 1.0 / len);
        let helper = if n[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = cross(&helper, &n);
        let e1 = scale(&e1, 1.0 / norm(&e1));
        Some(PlaneFrame { e1, e2: cross(&n, &e1) })
    }

    pub fn normal(&self) -> Point<3> {
        cross(&self.e1, &self.e2)
    }
}

/// Four vertices `(F, F₁, F₁₂, F₂)` of a face with an orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarQuad<const D: usize> {
    pub pts: [Point<D>; 4],
    pub frame: PlaneFrame<D>,
}

impl<const D: usize> PlanarQuad<D> {
    /// Oriented by the vertex order: `e1` along the diagonal `p1 → p3`, `e2`
    /// from the diagonal `p2 → p4`. Convex faces get positive area.
    pub fn new(pts: [Point<D>; 4]) -> Result<Self> {
        let d1 = sub(&pts[2], &pts[0]);
        let d2 = sub(&pts[3], &pts[1]);
        let frame = PlaneFrame::from_span(&d1, &d2)
            .or_else(|| PlaneFrame::from_span(&sub(&pts[1], &pts[0]), &sub(&pts[3], &pts[0])))
            .ok_or(Error::DegenerateFace)?;
        Ok(PlanarQuad { pts, frame })
    }

    pub fn with_frame(pts: [Point<D>; 4], frame: PlaneFrame<D>) -> Self {
        PlanarQuad { pts, frame }
    }

    pub fn reversed_orientation(&self) -> Self {
        PlanarQuad {
            pts: self.pts,
            frame: self.frame.reversed(),
        }
    }

    pub fn scale_length(&self) -> f64 {
        max_pairwise_distance(&self.pts)
    }
}

impl PlanarQuad<3> {
    pub fn with_normal(pts: [Point<3>; 4], n: &Point<3>) -> Result<Self> {
        let frame = PlaneFrame::from_normal(n).ok_or(Error::DegenerateFace)?;
        Ok(PlanarQuad { pts, frame })
    }
}

fn max_pairwise_distance<const D: usize>(pts: &[Point<D>; 4]) -> f64 {
    let mut s: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            s = s.max(norm(&sub(&pts[i], &pts[j])));
        }
    }
    s
}

/// Volume of the tetrahedron `p1 p2 p3 p4` over `scale³`, scale being the
/// largest vertex distance.
pub fn planarity_defect<const D: usize>(pts: &[Point<D>; 4]) -> f64 {
    let s = max_pairwise_distance(pts);
    if s == 0.0 {
        return 0.0;
    }
    let v: [Point<D>; 3] = std::array::from_fn(|i| scale(&sub(&pts[i + 1], &pts[0]), 1.0 / s));
    // |v_a ∧ v_b| · dist(v_c, span(v_a, v_b)) with the best-conditioned pair
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (a, b, c) = pairs
        .into_iter()
        .max_by(|x, y| wedge_norm(&v[x.0], &v[x.1]).total_cmp(&wedge_norm(&v[y.0], &v[y.1])))
        .unwrap();
    let Some(frame) = PlaneFrame::from_span(&v[a], &v[b]) else {
        return 0.0;
    };
    wedge_norm(&v[a], &v[b]) * norm(&frame.perpendicular(&v[c]))
}

/// `(planarity, circularity)`: the normalized tetrahedron volume and the
/// distance of `p4` to the circumcircle of `p1 p2 p3` over the circumradius.
pub fn face_defects<const D: usize>(pts: &[Point<D>; 4]) -> Result<(f64, f64)> {
    let a = sub(&pts[1], &pts[0]);
    let b = sub(&pts[2], &pts[0]);
    let (aa, bb, ab) = (dot(&a, &a), dot(&b, &b), dot(&a, &b));
    let gram = aa * bb - ab * ab;
    if gram <= 1e-14 * aa * bb || aa == 0.0 || bb == 0.0 {
        return Err(Error::DegenerateFace);
    }
    // centre = p1 + s a + t b with (centre - p1)·a = aa/2, (centre - p1)·b = bb/2
    let s = 0.5 * (aa * bb - bb * ab) / gram;
    let t = 0.5 * (bb * aa - aa * ab) / gram;
    let centre = add(&pts[0], &add(&scale(&a, s), &scale(&b, t)));
    let radius = norm(&sub(&pts[0], &centre));

    let frame = PlaneFrame::from_span(&a, &b).ok_or(Error::DegenerateFace)?;
    let q = sub(&pts[3], &centre);
    let [x, y] = frame.coords(&q);
    let in_plane = (x * x + y * y).sqrt();
    let out_of_plane = norm(&frame.perpendicular(&q));
    let distance = (out_of_plane.powi(2) + (in_plane - radius).powi(2)).sqrt();
    Ok((planarity_defect(pts), distance / radius))
}

fn shoelace(c: &[[f64; 2]; 4]) -> f64 {
    0.5 * (0..4)
        .map(|i| {
            let (p, q) = (c[i], c[(i + 1) % 4]);
            p[0] * q[1] - p[1] * q[0]
        })
        .sum::<f64>()
}

fn area_in_frame<const D: usize>(pts: &[Point<D>; 4], frame: &PlaneFrame<D>) -> f64 {
    shoelace(&pts.map(|p| frame.coords(&p)))
}

/// Signed area with respect to the quad's orientation.
pub fn signed_area<const D: usize>(quad: &PlanarQuad<D>) -> Result<f64> {
    let defect = planarity_defect(&quad.pts);
    if defect > tolerance::AREA_PLANARITY {
        return Err(Error::NotPlanar { defect });
    }
    Ok(area_in_frame(&quad.pts, &quad.frame))
}

/// Largest `sin` of the angle between corresponding edges; edges shorter than
/// `1e-12` of the face scale are skipped (a face collapsed to a point is
/// parallel to everything).
pub fn edge_parallel_defect<const D: usize>(f: &[Point<D>; 4], g: &[Point<D>; 4]) -> f64 {
    let sf = max_pairwise_distance(f);
    let sg = max_pairwise_distance(g);
    (0..4)
        .map(|i| {
            let e = sub(&f[(i + 1) % 4], &f[i]);
            let h = sub(&g[(i + 1) % 4], &g[i]);
            let (ne, nh) = (norm(&e), norm(&h));
            if ne <= 1e-12 * sf || nh <= 1e-12 * sg {
                0.0
            } else {
                wedge_norm(&e, &h) / (ne * nh)
            }
        })
        .fold(0.0, f64::max)
}

/// `¼(A(f + f') - A(f - f'))`, with both faces measured in the frame of `f`.
pub fn mixed_area<const D: usize>(f: &PlanarQuad<D>, fp: &[Point<D>; 4]) -> Result<f64> {
    let defect = edge_parallel_defect(&f.pts, fp);
    if defect > tolerance::EDGE_PARALLEL {
        return Err(Error::NotEdgeParallel { defect });
    }
    let sum: [Point<D>; 4] = std::array::from_fn(|i| add(&f.pts[i], &fp[i]));
    let diff: [Point<D>; 4] = std::array::from_fn(|i| sub(&f.pts[i], &fp[i]));
    Ok(0.25 * (area_in_frame(&sum, &f.frame) - area_in_frame(&diff, &f.frame)))
}

/// Steiner curvatures of a face with Gauss-map face `n`:
/// `H = -A(F, N)/A(F)`, `K = A(N)/A(F)`.
pub fn curvatures<const D: usize>(f: &PlanarQuad<D>, n: &[Point<D>; 4]) -> Result<(f64, f64)> {
    let area = signed_area(f)?;
    if area.abs() <= tolerance::FACE_AREA * f.scale_length().powi(2) {
        return Err(Error::DegenerateFaceArea);
    }
    let mixed = mixed_area(f, n)?;
    let gauss = mixed_area(&PlanarQuad::with_frame(*n, f.frame), n)?;
    Ok((-mixed / area, gauss / area))
}

/// Vertex map on an `M × N` window, indexed `n·M + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadNet<const D: usize> {
    width: usize,
    height: usize,
    points: Vec<Point<D>>,
}

impl<const D: usize> QuadNet<D> {
    pub fn new(width: usize, height: usize, points: Vec<Point<D>>) -> Result<Self> {
        if points.len() != width * height || width == 0 {
            return Err(Error::InvalidInput(format!(
                "{} points do not fill a {width}x{height} window",
                points.len()
            )));
        }
        Ok(QuadNet { width, height, points })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    pub fn at(&self, m: usize, n: usize) -> &Point<D> {
        &self.points[n * self.width + m]
    }

    /// `(F, F₁, F₁₂, F₂)` of the face with lower-left vertex (m, n).
    pub fn face(&self, m: usize, n: usize) -> [Point<D>; 4] {
        [
            *self.at(m, n),
            *self.at(m + 1, n),
            *self.at(m + 1, n + 1),
            *self.at(m, n + 1),
        ]
    }

    pub fn faces(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width.saturating_sub(1);
        (0..self.height.saturating_sub(1)).flat_map(move |n| (0..w).map(move |m| (m, n)))
    }

    pub fn face_count(&self) -> usize {
        self.width.saturating_sub(1) * self.height.saturating_sub(1)
    }

    pub fn horizontal_edge(&self, m: usize, n: usize) -> Point<D> {
        sub(self.at(m + 1, n), self.at(m, n))
    }

    pub fn vertical_edge(&self, m: usize, n: usize) -> Point<D> {
        sub(self.at(m, n + 1), self.at(m, n))
    }

    pub fn map(&self, f: impl Fn(&Point<D>) -> Point<D>) -> Self {
        QuadNet {
            width: self.width,
            height: self.height,
            points: self.points.iter().map(f).collect(),
        }
    }

    /// Vertexwise `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        QuadNet {
            width: self.width,
            height: self.height,
            points: self
                .points
                .iter()
                .zip(&other.points)
                .map(|(p, q)| add(p, &scale(q, s)))
                .collect(),
        }
    }

    /// Swap the two lattice directions.
    pub fn transposed(&self) -> Self {
        let mut points = Vec::with_capacity(self.points.len());
        for m in 0..self.width {
            for n in 0..self.height {
                points.push(*self.at(m, n));
            }
        }
        QuadNet {
            width: self.height,
            height: self.width,
            points,
        }
    }
}

/// Per-edge products `s·sᵢ`; horizontal indexed `n·(M-1) + m`, vertical `n·M + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProducts {
    pub width: usize,
    pub height: usize,
    pub horizontal: Vec<f64>,
    pub vertical: Vec<f64>,
}

impl MetricProducts {
    pub fn h(&self, m: usize, n: usize) -> f64 {
        self.horizontal[n * (self.width - 1) + m]
    }

    pub fn v(&self, m: usize, n: usize) -> f64 {
        self.vertical[n * self.width + m]
    }

    /// Worst relative mismatch of `(ss₁)(s₂s₁₂) = (ss₂)(s₁s₁₂)` over all quads.
    pub fn quad_compatibility(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 0..self.height.saturating_sub(1) {
            for m in 0..self.width.saturating_sub(1) {
                let lhs = self.h(m, n) * self.h(m, n + 1);
                let rhs = self.v(m, n) * self.v(m + 1, n);
                worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
            }
        }
        worst
    }
}

/// `±‖dF‖/‖dF*‖` for one pair of edges, negative iff they are anti-parallel.
pub fn edge_metric_product<const D: usize>(df: &Point<D>, dd: &Point<D>) -> Result<f64> {
    let (nf, nd) = (norm(df), norm(dd));
    if nd == 0.0 || nd <= 1e-14 * nf {
        return Err(Error::DegenerateDualEdge);
    }
    if nf == 0.0 {
        return Err(Error::DegenerateFace);
    }
    let defect = wedge_norm(df, dd) / (nf * nd);
    if defect > tolerance::EDGE_PARALLEL {
        return Err(Error::NotEdgeParallel { defect });
    }
    Ok(nf / nd * dot(df, dd).signum())
}

/// `s·sᵢ = ±‖dF‖/‖dF*‖` on every edge, negative where the dual edge is
/// anti-parallel.
pub fn metric_products<const D: usize>(net: &QuadNet<D>, dual: &QuadNet<D>) -> Result<MetricProducts> {
    if net.width != dual.width || net.height != dual.height {
        return Err(Error::InvalidInput("net and dual have different windows".into()));
    }
    let (w, h) = (net.width, net.height);
    let mut horizontal = Vec::with_capacity(w.saturating_sub(1) * h);
    for n in 0..h {
        for m in 0..w - 1 {
            horizontal.push(
                edge_metric_product(&net.horizontal_edge(m, n), &dual.horizontal_edge(m, n))
                    .map_err(|e| e.at(Location::HorizontalEdge { m, n }))?,
            );
        }
    }
    let mut vertical = Vec::with_capacity(w * h.saturating_sub(1));
    for n in 0..h.saturating_sub(1) {
        for m in 0..w {
            vertical.push(
                edge_metric_product(&net.vertical_edge(m, n), &dual.vertical_edge(m, n))
                    .map_err(|e| e.at(Location::VerticalEdge { m, n }))?,
            );
        }
    }
    Ok(MetricProducts {
        width: w,
        height: h,
        horizontal,
        vertical,
    })
}

/// Vertex function `s` with `s(0,0) = s00` and `s·sᵢ` equal to the given products.
pub fn extract_metric(mp: &MetricProducts, s00: f64) -> Result<Vec<f64>> {
    let (w, h) = (mp.width, mp.height);
    let mut s = vec![0.0; w * h];
    s[0] = s00;
    for m in 1..w {
        s[m] = mp.h(m - 1, 0) / s[m - 1];
    }
    for n in 1..h {
        for m in 0..w {
            s[n * w + m] = mp.v(m, n - 1) / s[(n - 1) * w + m];
        }
    }
    let mut mismatch: f64 = 0.0;
    for n in 1..h {
        for m in 0..w - 1 {
            let p = mp.h(m, n);
            mismatch = mismatch.max((s[n * w + m] * s[n * w + m + 1] - p).abs() / p.abs());
        }
    }
    if mismatch > tolerance::METRIC_PRODUCT {
        return Err(Error::NonKoenigs { mismatch });
    }
    Ok(s)
}

/// Edge labelings `A = ‖dF₀₁‖²/(ss₁)`, `B = ‖dF₀₂‖²/(ss₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLabeling {
    /// Per horizontal edge, indexed like the net's horizontal edges.
    pub a: Vec<f64>,
    /// Per vertical edge.
    pub b: Vec<f64>,
    /// Mean of `A` over each column of horizontal edges.
    pub a_columns: Vec<f64>,
    /// Mean of `B` over each row of vertical edges.
    pub b_rows: Vec<f64>,
    /// Largest relative deviation from the column/row means.
    pub spread: f64,
}

impl EdgeLabeling {
    /// Whether the labelings are constant along their transverse direction.
    pub fn is_constant(&self) -> bool {
        self.spread < tolerance::LABELING_SPREAD
    }
}

pub fn edge_labelings<const D: usize>(net: &QuadNet<D>, s: &[f64]) -> Result<EdgeLabeling> {
    let (w, h) = (net.width, net.height);
    if s.len() != w * h {
        return Err(Error::InvalidInput("metric does not match the net".into()));
    }
    let guard = |x: f64| {
        if x == 0.0 || !x.is_finite() {
            Err(Error::DegenerateDualEdge)
        } else {
            Ok(x)
        }
    };
    let mut a = Vec::new();
    for n in 0..h {
        for m in 0..w - 1 {
            let e = net.horizontal_edge(m, n);
            a.push(dot(&e, &e) / guard(s[n * w + m] * s[n * w + m + 1])?);
        }
    }
    let mut b = Vec::new();
    for n in 0..h.saturating_sub(1) {
        for m in 0..w {
            let e = net.vertical_edge(m, n);
            b.push(dot(&e, &e) / guard(s[n * w + m] * s[(n + 1) * w + m])?);
        }
    }
    let mut spread: f64 = 0.0;
    let a_columns: Vec<f64> = (0..w.saturating_sub(1))
        .map(|m| {
            let col: Vec<f64> = (0..h).map(|n| a[n * (w - 1) + m]).collect();
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            for x in &col {
                spread = spread.max((x - mean).abs() / mean.abs());
            }
            mean
        })
        .collect();
    let b_rows: Vec<f64> = (0..h.saturating_sub(1))
        .map(|n| {
            let row = &b[n * w..(n + 1) * w];
            let mean = row.iter().sum::<f64>() / row.len() as f64;
            for x in row {
                spread = spread.max((x - mean).abs() / mean.abs());
            }
            mean
        })
        .collect();
    if spread >= tolerance::LABELING_SPREAD {
        log::info!("edge labelings vary along their constant direction (spread {spread:e})");
    }
    Ok(EdgeLabeling {
        a,
        b,
        a_columns,
        b_rows,
        spread,
    })
}

/// Quaternionic cross-ratio of a circular face reduced to its scalar.
///
/// Returns the scalar as a complex number (real part, |imaginary part|)
/// and whether it is real and negative.
pub fn face_cross_ratio_real_check<const D: usize>(face: &[Point<D>; 4]) -> Result<(Complex64, bool)>
where
    Point<D>: Embed,
{
    let q = face.map(|p| p.to_quaternion());
    let cr = cross_ratio(&q[0], &q[1], &q[2], &q[3])?;
    let [x0, x1, x2, x3] = cr.coeffs();
    let imag = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
    if imag > tolerance::CROSS_RATIO * (1.0 + x0.abs()) {
        return Err(Error::CrossRatioNotScalar { imag });
    }
    Ok((Complex64::new(x0, imag), x0 < 0.0))
}
