//! Mirror polytopes in the projective sphere S^d.
//!
//! A mirror polytope stores, per facet `s`, the pair `(α_s, v_s)` with
//! `α_s(v_s) = 2`. The polytope is `P = S({x : α_s(x) ≤ 0 ∀s})` and the
//! reflection across facet `s` is `σ_s = Id − α_s ⊗ v_s`. The pair is kept
//! exactly as given: it is only unique up to `(λα_s, λ⁻¹v_s)`, so everything
//! reported downstream depends only on the products `α_s(v_t)·α_t(v_s)` and
//! on the projective points `[v_s]`.

mod faces;

pub use faces::{Face, FaceLattice};
pub(crate) use faces::kernel_direction;

use crate::cartan::{numerical_rank, CartanError, CartanMatrix};
use crate::coxsys::{CoxeterSystem, Label};
use crate::tol::{ANGLE_DELTA, EPS};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("facet {0}: α(v) = {1}, expected 2")]
    NormalizationError(String, f64),
    #[error("region has empty interior")]
    EmptyInterior,
    #[error("region is not properly convex (covectors span rank {0}, need {1})")]
    NotProperlyConvex(usize, usize),
    #[error("facet {0} does not meet the polytope in a face of dimension d−1")]
    RedundantFacet(String),
    #[error("numerically ambiguous vertex: candidates at distance {0:.3e}")]
    DegenerateLattice(f64),
    #[error("vertex index {0} out of range")]
    NotAVertex(usize),
    #[error("condition (C) violated on ridge ({0},{1}): {2}")]
    ConditionCViolated(String, String, String),
    #[error("ridge ({0},{1}): angle θ = {2} is not a submultiple of π")]
    AngleNotSubmultiple(String, String, f64),
    #[error("polytope is not a Coxeter polytope: {0} condition violations")]
    NotCoxeter(usize),
    #[error("Cartan matrix of the polytope is not of negative type")]
    NotNegativeType,
    #[error("cartan validation: {0}")]
    Cartan(#[from] CartanError),
    #[error("facet count {0} exceeds the desk-scale cap")]
    TooManyFacets(usize),
}

/// One facet: its name and the reflection data `(α, v)` with `α(v) = 2`.
#[derive(Debug, Clone)]
pub struct Facet {
    pub name: String,
    pub alpha: DVector<f64>,
    pub v: DVector<f64>,
}

impl Facet {
    pub fn new(name: impl Into<String>, alpha: DVector<f64>, v: DVector<f64>) -> Self {
        Facet { name: name.into(), alpha, v }
    }
}

/// A vertex of the polytope: a unit representative that satisfies every
/// facet inequality, with the set of facets through it.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub point: DVector<f64>,
    pub active: Vec<usize>,
}

/// Dihedral data for one ridge pair.
#[derive(Debug, Clone, Serialize)]
pub struct RidgeAngleInfo {
    pub s: usize,
    pub t: usize,
    /// α_s(v_t) · α_t(v_s), the normalization-invariant quantity.
    pub product: f64,
    pub angle: AngleClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AngleClass {
    /// θ = π/m for the stored integer m ≥ 2.
    Finite(u32),
    /// Product ≥ 4: angle 0.
    ZeroAngle,
}

#[derive(Debug, Clone, Serialize)]
pub enum CdViolation {
    ConditionC { s: usize, t: usize, detail: String },
    AngleNotSubmultiple { s: usize, t: usize, theta: f64 },
}

/// Outcome of the conditions (C)/(D) check.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionsReport {
    pub ridges: Vec<RidgeAngleInfo>,
    pub violations: Vec<CdViolation>,
}

impl ConditionsReport {
    /// True when every ridge has a sub-multiple-of-π or zero dihedral angle.
    pub fn is_coxeter(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A validated mirror polytope.
#[derive(Debug)]
pub struct MirrorPolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
    lattice: OnceLock<FaceLattice>,
}

impl Clone for MirrorPolytope {
    fn clone(&self) -> Self {
        MirrorPolytope {
            dim: self.dim,
            facets: self.facets.clone(),
            vertices: self.vertices.clone(),
            lattice: OnceLock::new(),
        }
    }
}

impl MirrorPolytope {
    /// Validates and builds a polytope of dimension `d` in S^d from its
    /// facet list. Rejects bad normalization, empty interiors, regions that
    /// are not properly convex, and facets that do not meet the polytope in
    /// a face of dimension d−1.
    pub fn build(dim: usize, facets: Vec<Facet>) -> Result<Self, PolytopeError> {
        let n = dim + 1;
        if facets.len() > 16 {
            return Err(PolytopeError::TooManyFacets(facets.len()));
        }
        for f in &facets {
            assert_eq!(f.alpha.len(), n, "covector length must be d+1");
            assert_eq!(f.v.len(), n, "vector length must be d+1");
            let pairing = f.alpha.dot(&f.v);
            let scale = f.alpha.norm() * f.v.norm();
            if (pairing - 2.0).abs() > EPS * scale.max(1.0) {
                return Err(PolytopeError::NormalizationError(f.name.clone(), pairing));
            }
        }

        // Sharpness: the covectors must span the whole dual space, otherwise
        // the region contains a line through the origin.
        let stack = covector_stack(&facets, n);
        let rank = if facets.is_empty() { 0 } else { numerical_rank(&stack, EPS) };
        if rank != n {
            return Err(PolytopeError::NotProperlyConvex(rank, n));
        }

        let vertices = faces::enumerate_vertices(dim, &facets)?;
        if vertices.is_empty() {
            return Err(PolytopeError::EmptyInterior);
        }

        // Interior point: the vertex representatives positively span the
        // cone, so their sum is interior iff the region is solid.
        let centroid = vertex_sum(&vertices);
        for f in &facets {
            if f.alpha.dot(&centroid) / f.alpha.norm() > -1e-10 {
                return Err(PolytopeError::EmptyInterior);
            }
        }

        // Each facet must carry a face of dimension d−1, i.e. its vertices
        // must span a d-dimensional subspace. Trivial for d = 0.
        if dim >= 1 {
            for (s, f) in facets.iter().enumerate() {
                let on: Vec<&Vertex> =
                    vertices.iter().filter(|v| v.active.contains(&s)).collect();
                let pts = DMatrix::from_fn(n, on.len(), |i, j| on[j].point[i]);
                if on.is_empty() || numerical_rank(&pts, EPS) != dim {
                    return Err(PolytopeError::RedundantFacet(f.name.clone()));
                }
            }
        }

        Ok(MirrorPolytope { dim, facets, vertices, lattice: OnceLock::new() })
    }

    /// The 0-dimensional polytope: one point of S^0 with its reflection.
    pub fn point() -> Self {
        let facet = Facet::new(
            "pt",
            DVector::from_column_slice(&[-1.0]),
            DVector::from_column_slice(&[-2.0]),
        );
        MirrorPolytope::build(0, vec![facet]).expect("the point polytope is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: usize) -> Result<&Vertex, PolytopeError> {
        self.vertices.get(id).ok_or(PolytopeError::NotAVertex(id))
    }

    /// σ_s = Id − v_s α_sᵀ as a (d+1)×(d+1) matrix.
    pub fn reflection(&self, s: usize) -> DMatrix<f64> {
        let n = self.dim + 1;
        DMatrix::<f64>::identity(n, n) - &self.facets[s].v * self.facets[s].alpha.transpose()
    }

    pub fn reflections(&self) -> Vec<DMatrix<f64>> {
        (0..self.facets.len()).map(|s| self.reflection(s)).collect()
    }

    /// A point strictly inside the polytope (the vertex sum, normalized).
    pub fn interior_point(&self) -> DVector<f64> {
        vertex_sum(&self.vertices)
    }

    /// Deterministic strictly-interior samples: convex combinations of the
    /// vertex representatives with positive weights.
    pub fn interior_samples(&self, count: usize, rng: &mut impl rand::Rng) -> Vec<DVector<f64>> {
        let n = self.dim + 1;
        (0..count)
            .map(|_| {
                let mut x = DVector::zeros(n);
                for v in &self.vertices {
                    x += &v.point * rng.random_range(0.05..1.0);
                }
                let nrm = x.norm();
                x / nrm
            })
            .collect()
    }

    /// True when the point (any scale) satisfies every facet inequality
    /// within `tol` relative to the facet scale.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        let nx = x.norm();
        self.facets
            .iter()
            .all(|f| f.alpha.dot(x) / (f.alpha.norm() * nx) <= tol)
    }

    /// Strict interior membership at tolerance `tol`.
    pub fn strictly_contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        let nx = x.norm();
        self.facets
            .iter()
            .all(|f| f.alpha.dot(x) / (f.alpha.norm() * nx) < -tol)
    }

    /// The full face lattice, computed on first use and memoized.
    pub fn face_lattice(&self) -> &FaceLattice {
        self.lattice
            .get_or_init(|| faces::build_lattice(self.dim, &self.facets, &self.vertices))
    }

    /// Facet pairs whose intersection is a ridge. In dimension 1 the two
    /// endpoint facets have empty intersection but still form the one angle
    /// pair of the polytope (the rank-2 situation of the plane).
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        if self.dim == 1 && self.facets.len() == 2 {
            return vec![(0, 1)];
        }
        if self.dim < 2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let n = self.dim + 1;
        for s in 0..self.facets.len() {
            for t in s + 1..self.facets.len() {
                let on: Vec<&Vertex> = self
                    .vertices
                    .iter()
                    .filter(|v| v.active.contains(&s) && v.active.contains(&t))
                    .collect();
                if on.is_empty() {
                    continue;
                }
                let pts = DMatrix::from_fn(n, on.len(), |i, j| on[j].point[i]);
                if numerical_rank(&pts, EPS) == self.dim - 1 {
                    out.push((s, t));
                }
            }
        }
        out
    }

    /// α_s(v_t) · α_t(v_s) for a facet pair.
    pub fn ridge_product(&self, s: usize, t: usize) -> f64 {
        self.facets[s].alpha.dot(&self.facets[t].v) * self.facets[t].alpha.dot(&self.facets[s].v)
    }

    /// Conditions (C) and (D) on every ridge pair, with the dihedral-angle
    /// classification. The verdict is "Coxeter polytope" iff every ridge
    /// passes with a sub-multiple-of-π or zero angle.
    pub fn check_conditions(&self) -> ConditionsReport {
        let mut ridges = Vec::new();
        let mut violations = Vec::new();
        for (s, t) in self.adjacent_pairs() {
            let ast = self.facets[s].alpha.dot(&self.facets[t].v);
            let ats = self.facets[t].alpha.dot(&self.facets[s].v);
            let scale_st = self.facets[s].alpha.norm() * self.facets[t].v.norm();
            let scale_ts = self.facets[t].alpha.norm() * self.facets[s].v.norm();
            let zst = ast.abs() <= EPS * scale_st;
            let zts = ats.abs() <= EPS * scale_ts;
            if ast > EPS * scale_st || ats > EPS * scale_ts {
                violations.push(CdViolation::ConditionC {
                    s,
                    t,
                    detail: format!("α_s(v_t) = {ast:.6e}, α_t(v_s) = {ats:.6e}; both must be ≤ 0"),
                });
                continue;
            }
            if zst != zts {
                violations.push(CdViolation::ConditionC {
                    s,
                    t,
                    detail: "zero pattern asymmetric: α_s(v_t) = 0 xor α_t(v_s) = 0".into(),
                });
                continue;
            }
            let product = (ast * ats).max(0.0);
            if product >= 4.0 - EPS {
                ridges.push(RidgeAngleInfo { s, t, product, angle: AngleClass::ZeroAngle });
                continue;
            }
            let theta = (product.sqrt() / 2.0).clamp(0.0, 1.0).acos();
            let m = (PI / theta).round();
            if m >= 2.0 && (theta - PI / m).abs() <= ANGLE_DELTA {
                ridges.push(RidgeAngleInfo {
                    s,
                    t,
                    product,
                    angle: AngleClass::Finite(m as u32),
                });
            } else {
                violations.push(CdViolation::AngleNotSubmultiple { s, t, theta });
            }
        }
        ConditionsReport { ridges, violations }
    }

    /// The Coxeter system associated to the polytope: M_st = m_st on ridges
    /// with finite angle, ∞ otherwise.
    pub fn coxeter_system(&self) -> Result<CoxeterSystem, PolytopeError> {
        let report = self.check_conditions();
        if !report.is_coxeter() {
            return Err(PolytopeError::NotCoxeter(report.violations.len()));
        }
        let r = self.facets.len();
        let mut labels = vec![vec![Label::Infinite; r]; r];
        for (i, row) in labels.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for info in &report.ridges {
            let m = match info.angle {
                AngleClass::Finite(m) => Label::Finite(m),
                AngleClass::ZeroAngle => Label::Infinite,
            };
            labels[info.s][info.t] = m;
            labels[info.t][info.s] = m;
        }
        let names = self.facets.iter().map(|f| f.name.clone()).collect();
        CoxeterSystem::new(names, labels).map_err(|e| {
            PolytopeError::ConditionCViolated("system".into(), "build".into(), e.to_string())
        })
    }

    /// The Cartan matrix A_P with A_ij = α_i(v_j), validated.
    pub fn cartan_matrix(&self) -> Result<CartanMatrix, PolytopeError> {
        let r = self.facets.len();
        let m = DMatrix::from_fn(r, r, |i, j| self.facets[i].alpha.dot(&self.facets[j].v));
        // Entries are scale-dependent; validate with a tolerance matched to
        // the facet scales.
        let scale = self
            .facets
            .iter()
            .map(|f| f.alpha.norm().max(f.v.norm()))
            .fold(1.0f64, f64::max);
        Ok(CartanMatrix::with_tolerance(m, EPS * scale * scale)?)
    }

    /// The link of the polytope at a vertex: facets through the vertex,
    /// pushed to the quotient of R^{d+1} by the vertex line (realized on the
    /// orthogonal complement of the vertex representative).
    pub fn link_at_vertex(&self, vertex_id: usize) -> Result<VertexLink, PolytopeError> {
        let p = self.vertex(vertex_id)?.clone();
        if p.active.is_empty() || self.dim == 0 {
            return Err(PolytopeError::NotAVertex(vertex_id));
        }
        let n = self.dim + 1;
        let basis = orthogonal_complement_basis(&p.point);
        let mut facets = Vec::new();
        for &s in &p.active {
            let f = &self.facets[s];
            let alpha = basis.transpose() * &f.alpha; // α restricted to the complement
            let v = basis.transpose() * &f.v; // v projected along the vertex line
            facets.push(Facet::new(f.name.clone(), alpha, v));
        }
        debug_assert_eq!(basis.ncols(), n - 1);
        let polytope = MirrorPolytope::build(self.dim - 1, facets)?;
        Ok(VertexLink {
            vertex: vertex_id,
            parent_facets: p.active.clone(),
            polytope,
        })
    }

    /// The Tits simplex of a Coxeter system: the rank-r simplicial cone
    /// `{x : x_s ≤ 0}` with v_t the t-th column of the Gram matrix.
    pub fn tits_simplex(sys: &CoxeterSystem) -> Self {
        let r = sys.rank();
        let gram = sys.gram_matrix();
        let facets = (0..r)
            .map(|s| {
                let mut alpha = DVector::zeros(r);
                alpha[s] = 1.0;
                let v = gram.column(s).into_owned();
                Facet::new(sys.generators()[s].clone(), alpha, v)
            })
            .collect();
        MirrorPolytope::build(r - 1, facets).expect("the Tits simplex is a valid mirror polytope")
    }

    /// Product of two polytopes on the direct-sum space: facets are the
    /// union, forms and vectors extended by zero. dim = d + e + 1.
    pub fn product(p: &MirrorPolytope, q: &MirrorPolytope) -> Self {
        let np = p.dim + 1;
        let nq = q.dim + 1;
        let n = np + nq;
        let p_names: std::collections::BTreeSet<&str> =
            p.facets.iter().map(|f| f.name.as_str()).collect();
        let clash = q.facets.iter().any(|f| p_names.contains(f.name.as_str()));
        let mut facets = Vec::new();
        for f in &p.facets {
            let mut alpha = DVector::zeros(n);
            let mut v = DVector::zeros(n);
            alpha.rows_mut(0, np).copy_from(&f.alpha);
            v.rows_mut(0, np).copy_from(&f.v);
            let name = if clash { format!("L.{}", f.name) } else { f.name.clone() };
            facets.push(Facet::new(name, alpha, v));
        }
        for f in &q.facets {
            let mut alpha = DVector::zeros(n);
            let mut v = DVector::zeros(n);
            alpha.rows_mut(np, nq).copy_from(&f.alpha);
            v.rows_mut(np, nq).copy_from(&f.v);
            let name = if clash { format!("R.{}", f.name) } else { f.name.clone() };
            facets.push(Facet::new(name, alpha, v));
        }
        MirrorPolytope::build(p.dim + q.dim + 1, facets)
            .expect("the product of valid polytopes is valid")
    }

    /// The cone above a polytope: the product with the 0-dimensional
    /// polytope. The extra facet meets every old facet at angle π/2.
    pub fn cone_over(p: &MirrorPolytope) -> Self {
        MirrorPolytope::product(p, &MirrorPolytope::point())
    }

    /// A covector α = Σ μ_s α_s, with μ the per-component Perron vectors of
    /// A_P, whose negative side is an affine chart containing the polytope
    /// and all its polars. Requires A_P of negative type.
    pub fn containing_affine_chart(&self) -> Result<DVector<f64>, PolytopeError> {
        let cartan = self.cartan_matrix()?;
        let types = cartan.cartan_type()?;
        if types.aggregate != crate::cartan::MatrixType::Negative {
            return Err(PolytopeError::NotNegativeType);
        }
        let n = self.dim + 1;
        let mut alpha = DVector::zeros(n);
        for comp in cartan.components() {
            let mu = cartan.perron_vector(&comp)?;
            for (k, &s) in comp.iter().enumerate() {
                alpha += &self.facets[s].alpha * mu[k];
            }
        }
        for f in &self.facets {
            if alpha.dot(&f.v) >= 0.0 {
                return Err(PolytopeError::NotNegativeType);
            }
        }
        Ok(alpha)
    }
}

/// The link polytope at a vertex, with the map back to parent facets.
#[derive(Debug, Clone)]
pub struct VertexLink {
    pub vertex: usize,
    /// Facet ids of the parent, in the order of the link's facets.
    pub parent_facets: Vec<usize>,
    pub polytope: MirrorPolytope,
}

fn covector_stack(facets: &[Facet], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(facets.len(), n, |i, j| facets[i].alpha[j])
}

fn vertex_sum(vertices: &[Vertex]) -> DVector<f64> {
    let mut x = vertices[0].point.clone_owned() * 0.0;
    for v in vertices {
        x += &v.point;
    }
    let n = x.norm();
    x / n
}

/// Columns form an orthonormal basis of the hyperplane orthogonal to `p`.
pub(crate) fn orthogonal_complement_basis(p: &DVector<f64>) -> DMatrix<f64> {
    let n = p.len();
    let unit = p / p.norm();
    let m = DMatrix::from_fn(n, 1, |i, _| unit[i]);
    let svd = m.svd(true, false);
    let u = svd.u.expect("svd with u requested");
    // Full orthonormal completion via projection of the identity.
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let mut proj = DMatrix::<f64>::identity(n, n) - &u * u.transpose();
    for _ in 0..n - 1 {
        // Pick the largest remaining column, orthonormalize, deflate.
        let (best, _) = (0..n)
            .map(|j| (j, proj.column(j).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonzero projector");
        let col = proj.column(best).into_owned();
        let nc = col.norm();
        let q = col / nc;
        proj -= &q * (q.transpose() * &proj);
        cols.push(q);
    }
    DMatrix::from_fn(n, n - 1, |i, j| cols[j][i])
}
