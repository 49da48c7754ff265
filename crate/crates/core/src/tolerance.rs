//! Numerical thresholds shared across modules.
//!
//! Every comparison in the crate draws its threshold from here so that the
//! verification reports can state exactly which tolerance produced a verdict.

/// Default relative comparison tolerance.
pub const DEFAULT_RELATIVE: f64 = 1e-10;

/// Real part allowed in a quaternion passed to `project_r3`, relative to its norm.
pub const IMAGINARY: f64 = 1e-12;

/// Defect allowed in the real-quaternion structure `m21 = -conj(m12)`, `m22 = conj(m11)`.
pub const QUATERNION_STRUCTURE: f64 = 1e-12;

/// Relative determinant below which a quaternion difference is singular.
pub const SINGULAR_DIFFERENCE: f64 = 1e-14;

/// `uu' = vv'` on every quad.
pub const UU_VV: f64 = 1e-10;

/// Commutation residual of a quad at the check spectral points.
pub const COMMUTATION: f64 = 1e-9;

/// Residuals of the four scalar commutation equations after solving a quad.
pub const QUAD_EQUATIONS: f64 = 1e-10;

/// Preservation of `|a|^2 + u^2 + u^-2` (resp. `b`, `v`) across a quad.
pub const LABELING_PRESERVATION: f64 = 1e-9;

/// Frame recursion `Phi_1 = U Phi`.
pub const FRAME_RECURSION: f64 = 1e-11;

/// Unitarity / unit determinant of evaluated matrices.
pub const UNITARITY: f64 = 1e-12;

/// Planarity and circularity defects of generated faces.
pub const FACE_DEFECT: f64 = 1e-9;

/// Planarity allowed before a signed area is refused.
pub const AREA_PLANARITY: f64 = 1e-8;

/// Angular defect of edge parallelism in mixed areas.
pub const EDGE_PARALLEL: f64 = 1e-9;

/// Relative face area below which curvatures are undefined.
pub const FACE_AREA: f64 = 1e-14;

/// Measured mean curvature against its target.
pub const MEAN_CURVATURE: f64 = 1e-8;

/// Edge-length formulas.
pub const EDGE_LENGTH: f64 = 1e-10;

/// Scalar cross-ratio against `-beta^2/alpha^2`.
pub const CROSS_RATIO: f64 = 1e-9;

/// Metric products between corresponding nets.
pub const METRIC_PRODUCT: f64 = 1e-8;

/// Unit norms and orthogonality of net vertices.
pub const UNIT_NORM: f64 = 1e-12;

/// Relative spread of an edge labeling along its constant direction.
pub const LABELING_SPREAD: f64 = 1e-8;

/// Mean curvature precondition on reconstructed quads (engineering choice).
pub const RECONSTRUCT_H: f64 = 1e-6;

/// Agreement of Lax data recovered from neighbouring quads (engineering choice).
pub const RECONSTRUCT_CONSISTENCY: f64 = 1e-8;

/// Compatibility of a given frame with the Gauss map at the base vertex.
pub const FRAME_COMPATIBILITY: f64 = 1e-9;

/// Calapso labeling identities.
pub const CALAPSO: f64 = 1e-10;

/// `H^2 + kappa = 1` across a sphere family.
pub const CONSERVATION: f64 = 1e-8;
