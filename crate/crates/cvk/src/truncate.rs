//! Truncation of simple perfect loxodromic vertices: cut the vertex by the
//! hyperplane through the polars of its facets. The new facet's polar is the
//! vertex itself, every new ridge is right-angled, and the cross-section is
//! the vertex link.

use crate::classify::{classify_vertex, perfection, ClassifyError, PerfectionClass, VertexClass};
use crate::polytope::{kernel_direction, AngleClass, Facet, MirrorPolytope, PolytopeError};
use crate::tol::EPS;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TruncateError {
    #[error("vertex {0} is not simple ({1} facets through it in dimension {2})")]
    NotSimple(usize, usize, usize),
    #[error("vertex {0} is not loxodromic ({1:?})")]
    NotLoxodromic(usize, VertexClass),
    #[error("link at vertex {0} is not perfect")]
    LinkNotPerfect(usize),
    #[error("polytope is a cone over the link of vertex {0}; truncation is empty")]
    ConeException(usize),
    #[error("vertex {0} is not truncable: {1}")]
    NotTruncable(usize, String),
    #[error("postcondition failed after truncation: {0}")]
    PostconditionFailed(String),
    #[error("new facets for vertices {0} and {1} intersect")]
    FacetsCollide(usize, usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// A validated plan for cutting one vertex.
#[derive(Debug, Clone)]
pub struct TruncationPlan {
    pub vertex: usize,
    /// Covector of the truncation hyperplane Π, scaled so that it evaluates
    /// to 2 on the vertex representative; the vertex side is {π > 0}.
    pub pi: DVector<f64>,
    /// Where Π crosses the edges at the vertex.
    pub crossings: Vec<DVector<f64>>,
}

/// A vertex is simple when exactly d facets pass through it (its link is a
/// simplex).
pub fn is_simple_vertex(p: &MirrorPolytope, vertex_id: usize) -> Result<bool, PolytopeError> {
    let v = p.vertex(vertex_id)?;
    Ok(v.active.len() == p.dim())
}

/// Decides truncability of a vertex and produces the plan. Requires the
/// vertex to be simple, loxodromic, with perfect link; refuses with
/// `ConeException` when the polytope is the cone over the link.
pub fn truncability(p: &MirrorPolytope, vertex_id: usize) -> Result<TruncationPlan, TruncateError> {
    let d = p.dim();
    let vertex = p.vertex(vertex_id).map_err(TruncateError::Polytope)?.clone();
    if vertex.active.len() != d {
        return Err(TruncateError::NotSimple(vertex_id, vertex.active.len(), d));
    }
    let class = classify_vertex(p, vertex_id)?;
    if class.class != VertexClass::Loxodromic {
        return Err(TruncateError::NotLoxodromic(vertex_id, class.class));
    }
    let link = p.link_at_vertex(vertex_id).map_err(TruncateError::Polytope)?;
    if perfection(&link.polytope)?.class != PerfectionClass::Perfect {
        return Err(TruncateError::LinkNotPerfect(vertex_id));
    }

    // The hyperplane through the polars of the facets at the vertex.
    let n = d + 1;
    let stack = DMatrix::from_fn(d, n, |i, j| p.facets()[vertex.active[i]].v[j]);
    if crate::cartan::numerical_rank(&stack, EPS) != d {
        return Err(TruncateError::NotTruncable(
            vertex_id,
            "polars of the facets at the vertex do not span a hyperplane".into(),
        ));
    }
    let mut pi = kernel_direction(&stack).ok_or_else(|| {
        TruncateError::NotTruncable(vertex_id, "hyperplane normal is numerically ambiguous".into())
    })?;
    let at_vertex = pi.dot(&vertex.point);
    if at_vertex.abs() <= EPS {
        return Err(TruncateError::NotTruncable(
            vertex_id,
            "vertex lies on the span of its polars".into(),
        ));
    }
    if at_vertex < 0.0 {
        pi = -pi;
    }

    // Cone detection: a facet not at the vertex whose support is Π itself.
    for (t, f) in p.facets().iter().enumerate() {
        if vertex.active.contains(&t) {
            continue;
        }
        let cosine = f.alpha.dot(&pi) / f.alpha.norm();
        if 1.0 - cosine.abs() <= 1e-9 {
            return Err(TruncateError::ConeException(vertex_id));
        }
    }

    // Every other vertex must lie strictly on the far side; this is the
    // ridge clause: faces missing the vertex never meet Π, faces through it
    // are crossed in their relative interior.
    for (qid, q) in p.vertices().iter().enumerate() {
        if qid == vertex_id {
            continue;
        }
        let val = pi.dot(&q.point);
        if val > -EPS {
            return Err(TruncateError::NotTruncable(
                vertex_id,
                format!("vertex {qid} is not strictly beyond the truncation plane (π·q = {val:.3e})"),
            ));
        }
    }

    // Crossing points of the edges at the vertex; their mean must be
    // interior, which is "Π meets the interior of P".
    let mut crossings = Vec::new();
    for edge in p.face_lattice().edges_at_vertex(vertex_id) {
        if edge.dim != 1 || edge.dim == d {
            continue;
        }
        let others: Vec<usize> = edge
            .vertex_ids
            .iter()
            .copied()
            .filter(|&q| q != vertex_id)
            .collect();
        if others.len() != 1 {
            continue;
        }
        let q = &p.vertices()[others[0]].point;
        let a = pi.dot(&vertex.point);
        let b = pi.dot(q);
        let t = a / (a - b);
        let c = &vertex.point * (1.0 - t) + q * t;
        crossings.push(&c / c.norm());
    }
    if crossings.is_empty() {
        return Err(TruncateError::NotTruncable(vertex_id, "no edges cross the plane".into()));
    }
    let mut mean = DVector::zeros(n);
    for c in &crossings {
        mean += c;
    }
    if !p.strictly_contains(&mean, 1e-10) {
        return Err(TruncateError::NotTruncable(
            vertex_id,
            "truncation plane does not meet the interior".into(),
        ));
    }

    // Normalize so the new reflection pair is (π, vertex) with π(vertex) = 2.
    let pi = pi * (2.0 / at_vertex.abs());
    Ok(TruncationPlan { vertex: vertex_id, pi, crossings })
}

/// Cuts one vertex. Old facets keep their (α, v); the new facet has support
/// Π and polar the old vertex. Post-verified: all new ridges are right
/// angles and the cross-section is the vertex link.
pub fn truncate_vertex(
    p: &MirrorPolytope,
    plan: &TruncationPlan,
) -> Result<MirrorPolytope, TruncateError> {
    let link_system = p
        .link_at_vertex(plan.vertex)
        .map_err(TruncateError::Polytope)?
        .polytope
        .coxeter_system()
        .map_err(TruncateError::Polytope)?;
    let truncated = apply_plans(p, std::slice::from_ref(plan))?;

    // Cross-section P ∩ Π must be the link, as a Coxeter polytope.
    let section = section_polytope(p, plan)?;
    let section_system = section.coxeter_system().map_err(TruncateError::Polytope)?;
    if section_system.label_key() != link_system.label_key() {
        return Err(TruncateError::PostconditionFailed(
            "cross-section Coxeter system differs from the vertex link".into(),
        ));
    }
    Ok(truncated)
}

#[derive(Debug)]
pub struct TruncationOutcome {
    pub polytope: MirrorPolytope,
    /// Vertices that were cut (ids in the original polytope).
    pub truncated_vertices: Vec<usize>,
}

/// Truncates every simple perfect loxodromic vertex at once and verifies
/// that the new facets are pairwise disjoint and the result quasi-perfect.
pub fn truncate_all(p: &MirrorPolytope) -> Result<TruncationOutcome, TruncateError> {
    let perf = perfection(p)?;
    let lox: Vec<usize> = perf
        .vertices
        .iter()
        .filter(|v| v.class == VertexClass::Loxodromic)
        .map(|v| v.vertex)
        .collect();
    if lox.is_empty() {
        return Ok(TruncationOutcome { polytope: p.clone(), truncated_vertices: Vec::new() });
    }
    let plans: Vec<TruncationPlan> =
        lox.iter().map(|&vid| truncability(p, vid)).collect::<Result<_, _>>()?;
    let polytope = apply_plans(p, &plans)?;

    // Pairwise disjointness of the new facets: no vertex of the result may
    // lie on two of them.
    let old = p.facet_count();
    for vert in polytope.vertices() {
        let news: Vec<usize> = vert.active.iter().copied().filter(|&s| s >= old).collect();
        if news.len() >= 2 {
            return Err(TruncateError::FacetsCollide(
                plans[news[0] - old].vertex,
                plans[news[1] - old].vertex,
            ));
        }
    }

    let out_perf = perfection(&polytope)?;
    if !matches!(out_perf.class, PerfectionClass::Perfect | PerfectionClass::QuasiPerfect) {
        return Err(TruncateError::PostconditionFailed(format!(
            "truncated polytope is {:?}, expected quasi-perfect",
            out_perf.class
        )));
    }
    Ok(TruncationOutcome { polytope, truncated_vertices: lox })
}

/// Builds the truncated polytope and checks the right-angle postcondition on
/// each new facet's ridges.
fn apply_plans(p: &MirrorPolytope, plans: &[TruncationPlan]) -> Result<MirrorPolytope, TruncateError> {
    let mut facets: Vec<Facet> = p.facets().to_vec();
    let old = facets.len();
    for plan in plans {
        let vertex = &p.vertices()[plan.vertex];
        facets.push(Facet::new(
            format!("cut{}", plan.vertex),
            plan.pi.clone(),
            vertex.point.clone(),
        ));
    }
    let truncated = MirrorPolytope::build(p.dim(), facets)?;

    let report = truncated.check_conditions();
    if !report.is_coxeter() {
        return Err(TruncateError::PostconditionFailed(format!(
            "{} condition violations on the truncated polytope",
            report.violations.len()
        )));
    }
    for info in &report.ridges {
        let involves_new = info.s >= old || info.t >= old;
        if involves_new && info.angle != AngleClass::Finite(2) {
            return Err(TruncateError::PostconditionFailed(format!(
                "new ridge ({}, {}) has angle {:?}, product {:.3e}; expected π/2",
                info.s, info.t, info.angle, info.product
            )));
        }
    }
    Ok(truncated)
}

/// The cross-section P ∩ Π as a mirror polytope of the hyperplane, carrying
/// the facets through the cut vertex.
fn section_polytope(p: &MirrorPolytope, plan: &TruncationPlan) -> Result<MirrorPolytope, TruncateError> {
    let normal = &plan.pi / plan.pi.norm();
    let basis = crate::polytope::orthogonal_complement_basis(&normal);
    let active = &p.vertices()[plan.vertex].active;
    let facets: Vec<Facet> = active
        .iter()
        .map(|&s| {
            let f = &p.facets()[s];
            Facet::new(f.name.clone(), basis.transpose() * &f.alpha, basis.transpose() * &f.v)
        })
        .collect();
    Ok(MirrorPolytope::build(p.dim() - 1, facets)?)
}
