//! Hyperbolicity of the contraction space and the quantitative audits.

pub mod audits;
pub mod delta;
pub mod fit;
pub mod scan;

pub use audits::{
    closest_point_audit, geodesic_image_audit, quadrangle_estimate_audit, sample_triangles,
    triangle_one_thin_audit, ClosestPointViolation, GeodesicImageReport, QuadrangleEstimateReport,
    QuadrangleViolation, TriangleViolation,
};
pub use delta::{four_point_defect, four_point_delta, sample_tuples, DeltaReport, SampleSpec, EXHAUSTIVE_LIMIT};
pub use fit::{
    bgi_from_q_audit, fit_quasi_isometry, qg_fit, qi_embedding_audit, BgiFromQReport, QGFit, QiFit, Quarters,
};
pub use scan::{diameter_scan, DiameterRow};
