//! The Hilbert metric and its Finsler norm, over pluggable boundary oracles.
//!
//! Everything happens in an affine chart: a point x of the chart and a
//! direction w determine a line, the oracle returns the two parameters where
//! it crosses the boundary, and the cross-ratio does the rest.

use super::OrbitError;
use crate::polytope::MirrorPolytope;
use nalgebra::{DMatrix, DVector};

/// An affine chart of S^d: the slice {a · x = −1}, coordinatized by an
/// orthonormal basis of the hyperplane a = 0.
#[derive(Debug, Clone)]
pub struct Chart {
    covector: DVector<f64>,
    origin: DVector<f64>,
    basis: DMatrix<f64>,
}

impl Chart {
    pub fn new(covector: DVector<f64>) -> Self {
        let norm2 = covector.norm_squared();
        let origin = &covector * (-1.0 / norm2);
        let basis = crate::polytope::orthogonal_complement_basis(&covector);
        Chart { covector, origin, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Chart coordinates of a sphere point with a·x < 0.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>, OrbitError> {
        let s = self.covector.dot(x);
        if s >= 0.0 {
            return Err(OrbitError::PointOutside);
        }
        let scaled = x / (-s);
        Ok(self.basis.transpose() * (scaled - &self.origin))
    }

    /// The representative on the slice {a·x = −1}.
    pub fn lift(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.origin + &self.basis * u
    }

    /// The chart action of a matrix: project ∘ γ ∘ lift.
    pub fn transform(&self, gamma: &DMatrix<f64>, u: &DVector<f64>) -> Result<DVector<f64>, OrbitError> {
        self.project(&(gamma * self.lift(u)))
    }
}

/// Boundary oracle: parameters (t⁻, t⁺) with t⁻ < 0 < t⁺ where the line
/// x + t·w leaves the convex body.
pub trait BoundaryOracle {
    fn chord(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64), OrbitError>;
}

/// d(x, y) = ½ ln of the cross-ratio of (p, x, y, q) along their chord.
pub fn hilbert_distance(
    oracle: &impl BoundaryOracle,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64, OrbitError> {
    let w = y - x;
    if w.norm() == 0.0 {
        return Ok(0.0);
    }
    let (tm, tp) = oracle.chord(x, &w)?;
    if !(tm < 0.0 && tp > 1.0) {
        return Err(OrbitError::PointOutside);
    }
    Ok(0.5 * ((tp * (1.0 - tm)) / ((tp - 1.0) * (-tm))).ln())
}

/// F(x, v) = |v|/2 · (1/|xp⁻| + 1/|xp⁺|).
pub fn finsler_norm(
    oracle: &impl BoundaryOracle,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<f64, OrbitError> {
    if v.norm() == 0.0 {
        return Ok(0.0);
    }
    let (tm, tp) = oracle.chord(x, v)?;
    if !(tm < 0.0 && tp > 0.0) {
        return Err(OrbitError::PointOutside);
    }
    Ok(0.5 * (1.0 / -tm + 1.0 / tp))
}

/// A polytope body: affine inequalities g·u + c ≤ 0 in chart coordinates.
pub struct PolytopeBody {
    inequalities: Vec<(DVector<f64>, f64)>,
}

impl PolytopeBody {
    /// The polytope P in the given chart.
    pub fn new(p: &MirrorPolytope, chart: &Chart) -> Self {
        let inequalities = p
            .facets()
            .iter()
            .map(|f| {
                let g = chart.basis.transpose() * &f.alpha;
                let c = f.alpha.dot(&chart.origin);
                (g, c)
            })
            .collect();
        PolytopeBody { inequalities }
    }

    pub fn from_inequalities(inequalities: Vec<(DVector<f64>, f64)>) -> Self {
        PolytopeBody { inequalities }
    }

    pub fn contains(&self, u: &DVector<f64>) -> bool {
        self.inequalities.iter().all(|(g, c)| g.dot(u) + c <= 0.0)
    }
}

impl BoundaryOracle for PolytopeBody {
    fn chord(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64), OrbitError> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (g, c) in &self.inequalities {
            let val = g.dot(x) + c;
            if val > 0.0 {
                return Err(OrbitError::PointOutside);
            }
            let slope = g.dot(w);
            if slope.abs() < 1e-300 {
                continue;
            }
            let t = -val / slope;
            if slope > 0.0 {
                hi = hi.min(t);
            } else {
                lo = lo.max(t);
            }
        }
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(OrbitError::DegenerateChord);
        }
        Ok((lo, hi))
    }
}

/// An ellipsoid body: the quadric {X^T Q X = 0} restricted to the chart,
/// with the inside on the negative side.
pub struct EllipsoidBody {
    q: DMatrix<f64>,
    chart: Chart,
}

impl EllipsoidBody {
    pub fn new(q: DMatrix<f64>, chart: Chart, interior_sample: &DVector<f64>) -> Self {
        // Fix the sign so the interior is negative.
        let val = (interior_sample.transpose() * &q * interior_sample)[(0, 0)];
        let q = if val > 0.0 { -q } else { q };
        EllipsoidBody { q, chart }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn quadric_value(&self, u: &DVector<f64>) -> f64 {
        let big = self.chart.lift(u);
        (big.transpose() * &self.q * &big)[(0, 0)]
    }
}

impl BoundaryOracle for EllipsoidBody {
    fn chord(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64), OrbitError> {
        let big_x = self.chart.lift(x);
        let big_w = &self.chart.basis * w;
        let a = (big_w.transpose() * &self.q * &big_w)[(0, 0)];
        let b = 2.0 * (big_x.transpose() * &self.q * &big_w)[(0, 0)];
        let c = (big_x.transpose() * &self.q * &big_x)[(0, 0)];
        if c >= 0.0 {
            return Err(OrbitError::PointOutside);
        }
        if a <= 0.0 {
            return Err(OrbitError::DegenerateChord);
        }
        let disc = b * b - 4.0 * a * c;
        if disc <= 0.0 {
            return Err(OrbitError::DegenerateChord);
        }
        let root = disc.sqrt();
        Ok(((-b - root) / (2.0 * a), (-b + root) / (2.0 * a)))
    }
}

/// A convex body given only by a membership test; chords found by doubling
/// and bisection along the ray.
pub struct RayBisectBody<F: Fn(&DVector<f64>) -> bool> {
    pub membership: F,
    /// Upper bound on the parameter where the ray is surely outside.
    pub t_cap: f64,
}

impl<F: Fn(&DVector<f64>) -> bool> RayBisectBody<F> {
    fn boundary_param(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<f64, OrbitError> {
        let mut hi = 1e-3;
        while (self.membership)(&(x + w * hi)) {
            hi *= 2.0;
            if hi > self.t_cap {
                return Err(OrbitError::DegenerateChord);
            }
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (self.membership)(&(x + w * mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl<F: Fn(&DVector<f64>) -> bool> BoundaryOracle for RayBisectBody<F> {
    fn chord(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64), OrbitError> {
        if !(self.membership)(x) {
            return Err(OrbitError::PointOutside);
        }
        let tp = self.boundary_param(x, w)?;
        let tm = self.boundary_param(x, &(-w))?;
        Ok((-tm, tp))
    }
}

/// A planar convex polygon (for hulls of 2-dimensional tile samples).
#[derive(Debug, Clone)]
pub struct ConvexPolygon {
    /// Counter-clockwise boundary.
    pub points: Vec<DVector<f64>>,
}

impl ConvexPolygon {
    /// Convex hull of planar points by the monotone chain.
    pub fn hull(mut pts: Vec<DVector<f64>>) -> Self {
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup_by(|a, b| (&*a as &DVector<f64> - &*b as &DVector<f64>).norm() < 1e-12);
        let cross = |o: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>| {
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        };
        let mut lower: Vec<DVector<f64>> = Vec::new();
        for p in &pts {
            while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<DVector<f64>> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon { points: lower }
    }

    pub fn contains(&self, u: &DVector<f64>) -> bool {
        let n = self.points.len();
        (0..n).all(|i| {
            let a = &self.points[i];
            let b = &self.points[(i + 1) % n];
            (b[0] - a[0]) * (u[1] - a[1]) - (b[1] - a[1]) * (u[0] - a[0]) >= -1e-12
        })
    }
}
