//! Numerical tolerances shared across the crate.
//!
//! All inputs are desk scale (rank ≤ 13, dimension ≤ 4), with entries that are
//! cosines of rational angles, so the defaults are deliberately tight.

/// Eigenvalue / definiteness / rank tolerance.
///
/// Gram and Cartan spectra at catalog ranks are well conditioned; dense
/// solvers land within ~1e-14 of the true values, so 1e-9 separates zero from
/// nonzero with a wide margin.
pub const EPS: f64 = 1e-9;

/// Angle-recognition tolerance on θ_st when testing m_st = π/θ_st ∈ ℤ.
///
/// Kept separate from [`EPS`] because cos² amplifies error quadratically near
/// m = 2.
pub const ANGLE_DELTA: f64 = 1e-6;

/// Quantization grid for matrix-level deduplication in orbit enumeration.
pub const DEDUP_GRID: f64 = 1e-6;

/// Exact-distance audit band inside the dedup grid: two matrices closer than
/// this are one group element, anything between the band and the grid aborts.
pub const DEDUP_AUDIT: f64 = 1e-9;

/// Relative spectral-gap threshold for calling an element bi-proximal.
pub const PROXIMAL_GAP: f64 = 1e-6;

/// Interior-disjointness sampling tolerance for tilings.
pub const OVERLAP_TOL: f64 = 1e-7;

/// Hard cap on word length for orbit enumeration.
pub const MAX_WORD_LEN: usize = 14;

/// Hard cap on enumerated group elements.
pub const MAX_ELEMENTS: usize = 1_000_000;
