//! Decision procedures for Coxeter polytopes: vertex classes, perfection,
//! polytope trichotomy, action classification, degenerate shapes, invariant
//! quadratic forms, Zariski closure, strict convexity, and invariant-convex-
//! set extremes.

use crate::cartan::{CartanError, CartanMatrix, MatrixType};
use crate::coxsys::{
    relative_hyperbolicity_check, CoxeterSystem, CoxsysError, DiagramKind, RelHypVerdict,
    Subsystem,
};
use crate::polytope::{MirrorPolytope, PolytopeError};
use crate::tol::EPS;
use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Coxsys(#[from] CoxsysError),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

type Result<T> = std::result::Result<T, ClassifyError>;

/// The vertex trichotomy, with the escape hatch for imperfect links.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum VertexClass {
    Elliptic,
    Parabolic,
    Loxodromic,
    /// The link is not perfect; carries a witness description.
    Imperfect(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexReport {
    pub vertex: usize,
    pub active_facets: Vec<usize>,
    pub class: VertexClass,
    /// λ of the link's Cartan matrix per component (signs drive the class).
    pub link_lambdas: Vec<f64>,
    pub link_rank: usize,
    pub simple: bool,
}

/// Classifies one vertex by the type and rank of its link's Cartan matrix,
/// which is the principal submatrix of A_P on the facets through the vertex.
pub fn classify_vertex(p: &MirrorPolytope, vertex_id: usize) -> Result<VertexReport> {
    let sys = p.coxeter_system()?;
    let vertex = p.vertex(vertex_id)?;
    let active = vertex.active.clone();
    let d = p.dim();

    // Edge criterion for link perfection: every edge of P through the vertex
    // must carry a finite (spherical) subsystem. Edges of the link polytope
    // correspond to them one dimension down, so this is exactly "the link is
    // perfect". Proper edges exist only for d ≥ 2.
    let mut imperfect: Option<String> = None;
    if d >= 2 {
        for edge in p.face_lattice().edges_at_vertex(vertex_id) {
            if edge.dim != 1 {
                continue;
            }
            let sub = Subsystem::new(edge.active.clone());
            if !sys.restrict(&sub).is_spherical() {
                imperfect = Some(format!(
                    "edge with facet set {:?} has infinite Coxeter group",
                    edge.active
                ));
                break;
            }
        }
    }

    let a = p.cartan_matrix()?;
    let sub = DMatrix::from_fn(active.len(), active.len(), |i, j| {
        a.matrix()[(active[i], active[j])]
    });
    let link_cartan = CartanMatrix::with_tolerance(sub, 1e-7)?;
    let types = link_cartan.cartan_type()?;
    let link_rank = link_cartan.numerical_rank();
    let link_lambdas = types.components.iter().map(|c| c.lambda).collect();

    let class = if let Some(witness) = imperfect {
        VertexClass::Imperfect(witness)
    } else {
        match types.aggregate {
            MatrixType::Positive => VertexClass::Elliptic,
            MatrixType::Zero if link_rank == d - 1 => VertexClass::Parabolic,
            MatrixType::Negative if link_rank == d => VertexClass::Loxodromic,
            other => VertexClass::Imperfect(format!(
                "link Cartan matrix of type {other:?} and rank {link_rank} escapes the trichotomy"
            )),
        }
    };
    Ok(VertexReport {
        vertex: vertex_id,
        simple: active.len() == d,
        active_facets: active,
        class,
        link_lambdas,
        link_rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PerfectionClass {
    Perfect,
    QuasiPerfect,
    TwoPerfect,
    NotTwoPerfect,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerfectionReport {
    pub class: PerfectionClass,
    pub vertices: Vec<VertexReport>,
    /// The edge criterion ("every edge carries a finite group") recomputed
    /// independently; must agree with the per-vertex classification.
    pub edge_criterion_agrees: bool,
}

/// Perfection hierarchy from the vertex classes, cross-checked against the
/// direct edge criterion.
pub fn perfection(p: &MirrorPolytope) -> Result<PerfectionReport> {
    let sys = p.coxeter_system()?;
    let vertices: Vec<VertexReport> = (0..p.vertices().len())
        .map(|vid| classify_vertex(p, vid))
        .collect::<Result<_>>()?;

    let class = if vertices.iter().all(|v| v.class == VertexClass::Elliptic) {
        PerfectionClass::Perfect
    } else if vertices
        .iter()
        .all(|v| matches!(v.class, VertexClass::Elliptic | VertexClass::Parabolic))
    {
        PerfectionClass::QuasiPerfect
    } else if vertices
        .iter()
        .all(|v| !matches!(v.class, VertexClass::Imperfect(_)))
    {
        PerfectionClass::TwoPerfect
    } else {
        PerfectionClass::NotTwoPerfect
    };

    // Independent route: every edge of P has spherical facet subsystem.
    let edges_fine = if p.dim() >= 2 {
        p.face_lattice()
            .of_dim(1)
            .filter(|f| f.dim < p.dim())
            .all(|f| sys.restrict(&Subsystem::new(f.active.clone())).is_spherical())
    } else {
        true
    };
    let edge_criterion_agrees = edges_fine == (class != PerfectionClass::NotTwoPerfect);
    Ok(PerfectionReport { class, vertices, edge_criterion_agrees })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PolytopeClass {
    Elliptic,
    Parabolic,
    Loxodromic,
    /// Type/rank combination outside the trichotomy, described.
    Degenerate(String),
}

/// The five exclusive cases for an irreducible Coxeter polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiveCase {
    Spherical,
    AffineNotCycle,
    AffineCycleZeroType,
    AffineCycleNegativeType,
    Large,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeClassReport {
    pub class: PolytopeClass,
    pub cartan_aggregate: MatrixType,
    pub cartan_rank: usize,
    pub dim: usize,
    /// Set when W_P is irreducible.
    pub five_case: Option<FiveCase>,
}

/// Elliptic / parabolic / loxodromic trichotomy of the polytope itself, by
/// type and rank of A_P, plus the five-case refinement when W_P is
/// irreducible (the affine cycle type ~A_n splits by the type of A_P).
pub fn polytope_class(p: &MirrorPolytope) -> Result<PolytopeClassReport> {
    let a = p.cartan_matrix()?;
    let types = a.cartan_type()?;
    let rank = a.numerical_rank();
    let d = p.dim();
    let class = match types.aggregate {
        MatrixType::Positive => PolytopeClass::Elliptic,
        MatrixType::Zero if rank == d => PolytopeClass::Parabolic,
        MatrixType::Negative if rank == d + 1 => PolytopeClass::Loxodromic,
        other => PolytopeClass::Degenerate(format!(
            "Cartan matrix of type {other:?} and rank {rank} in dimension {d}"
        )),
    };
    let sys = p.coxeter_system()?;
    let five_case = if sys.is_irreducible() {
        let diagram = sys.classify_irreducible()?;
        Some(match diagram.kind {
            DiagramKind::Spherical => FiveCase::Spherical,
            DiagramKind::Large => FiveCase::Large,
            DiagramKind::Affine => {
                let cyclic = diagram.name.as_deref().is_some_and(|n| n.starts_with("~A_"));
                if !cyclic {
                    FiveCase::AffineNotCycle
                } else if types.aggregate == MatrixType::Zero {
                    FiveCase::AffineCycleZeroType
                } else {
                    FiveCase::AffineCycleNegativeType
                }
            }
        })
    } else {
        None
    };
    Ok(PolytopeClassReport {
        class,
        cartan_aggregate: types.aggregate,
        cartan_rank: rank,
        dim: d,
        five_case,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityReport {
    pub group_irreducible: bool,
    pub cartan_rank: usize,
    /// ρ : W_P → SL±(d+1) is irreducible iff the group is irreducible and
    /// the polars span, i.e. rank(A_P) = d + 1.
    pub representation_irreducible: bool,
    /// Inferred: an irreducible representation with W_P large is strongly
    /// irreducible.
    pub strongly_irreducible: bool,
}

pub fn is_irreducible_rep(p: &MirrorPolytope) -> Result<IrreducibilityReport> {
    let sys = p.coxeter_system()?;
    let a = p.cartan_matrix()?;
    let rank = a.numerical_rank();
    let group_irreducible = sys.is_irreducible();
    let representation_irreducible = group_irreducible && rank == p.dim() + 1;
    let strongly = representation_irreducible
        && sys.classify_irreducible()?.kind == DiagramKind::Large;
    Ok(IrreducibilityReport {
        group_irreducible,
        cartan_rank: rank,
        representation_irreducible,
        strongly_irreducible: strongly,
    })
}

/// Three-valued verdict used by the action report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "reason")]
pub enum TriState {
    True,
    False,
    NotApplicable(String),
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::True
        } else {
            TriState::False
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, TriState::True)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ActionReport {
    pub polytope: PolytopeClassReport,
    pub perfection: PerfectionClass,
    pub irreducibility: IrreducibilityReport,
    pub cocompact: TriState,
    pub finite_covolume: TriState,
    pub convex_cocompact: TriState,
    pub geometrically_finite: TriState,
}

/// The action of Γ_P on Ω_P, decided from the vertex classes. The criteria
/// apply to loxodromic 2-perfect polytopes; outside that hypothesis every
/// flag is explicitly not-applicable, never a silent default.
pub fn action_classification(p: &MirrorPolytope) -> Result<ActionReport> {
    let class_report = polytope_class(p)?;
    let perf = perfection(p)?;
    let irr = is_irreducible_rep(p)?;

    let applicable = class_report.class == PolytopeClass::Loxodromic
        && perf.class != PerfectionClass::NotTwoPerfect;
    if !applicable {
        let reason = if class_report.class != PolytopeClass::Loxodromic {
            format!("polytope is not loxodromic ({:?})", class_report.class)
        } else {
            "polytope is not 2-perfect".to_string()
        };
        let na = TriState::NotApplicable(reason);
        return Ok(ActionReport {
            polytope: class_report,
            perfection: perf.class,
            irreducibility: irr,
            cocompact: na.clone(),
            finite_covolume: na.clone(),
            convex_cocompact: na.clone(),
            geometrically_finite: na,
        });
    }

    let has_lox = perf
        .vertices
        .iter()
        .any(|v| v.class == VertexClass::Loxodromic);
    let has_par = perf
        .vertices
        .iter()
        .any(|v| v.class == VertexClass::Parabolic);

    let report = ActionReport {
        polytope: class_report,
        perfection: perf.class,
        irreducibility: irr,
        cocompact: TriState::from_bool(perf.class == PerfectionClass::Perfect),
        finite_covolume: TriState::from_bool(!has_lox),
        convex_cocompact: TriState::from_bool(!has_par),
        geometrically_finite: TriState::True,
    };
    debug_assert!(implication_chain_holds(&report));
    Ok(report)
}

/// cocompact ⇒ convex-cocompact ∧ finite covolume ⇒ geometrically finite.
pub fn implication_chain_holds(r: &ActionReport) -> bool {
    let implies = |a: &TriState, b: &TriState| !a.is_true() || b.is_true();
    implies(&r.cocompact, &r.convex_cocompact)
        && implies(&r.cocompact, &r.finite_covolume)
        && implies(&r.convex_cocompact, &r.geometrically_finite)
        && implies(&r.finite_covolume, &r.geometrically_finite)
}

/// The four exclusive cases for a 2-perfect Coxeter polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum DegenerateClass {
    Elliptic,
    Parabolic,
    LoxodromicIrreducible,
    /// P = Q ⊗ ·: the cone facet, its apex vertex, and Q's class.
    ConeOver {
        facet: usize,
        apex_vertex: usize,
        base: PolytopeClass,
    },
}

/// Locates the shape of a 2-perfect polytope. The cone shape P = Q ⊗ · is
/// detected by a facet orthogonal to all others whose polar is (projectively)
/// a vertex of P; Q is then the link at that vertex.
pub fn degenerate_classification(p: &MirrorPolytope) -> Result<DegenerateClass> {
    let perf = perfection(p)?;
    if perf.class == PerfectionClass::NotTwoPerfect {
        return Err(ClassifyError::PreconditionUnmet(
            "degenerate classification requires a 2-perfect polytope".into(),
        ));
    }
    let class = polytope_class(p)?;
    match class.class {
        PolytopeClass::Elliptic => return Ok(DegenerateClass::Elliptic),
        PolytopeClass::Parabolic => return Ok(DegenerateClass::Parabolic),
        PolytopeClass::Loxodromic => return Ok(DegenerateClass::LoxodromicIrreducible),
        PolytopeClass::Degenerate(_) => {}
    }
    // Look for a cone facet.
    let m = p.facet_count();
    for f in 0..m {
        let orthogonal = (0..m)
            .filter(|&t| t != f)
            .all(|t| p.ridge_product(f, t).abs() <= EPS);
        if !orthogonal {
            continue;
        }
        let polar = &p.facets()[f].v;
        let pn = polar.norm();
        for (vid, vert) in p.vertices().iter().enumerate() {
            let cosine = polar.dot(&vert.point) / pn;
            if 1.0 - cosine.abs() <= 1e-9 {
                let base = polytope_class(&p.link_at_vertex(vid)?.polytope)?.class;
                return Ok(DegenerateClass::ConeOver { facet: f, apex_vertex: vid, base });
            }
        }
    }
    Err(ClassifyError::Inconsistent(
        "2-perfect polytope escapes the four-case classification".into(),
    ))
}

/// Basis of the space of symmetric bilinear forms B with γᵀBγ = B for every
/// generator, via the null space of the stacked linear system on the
/// n(n+1)/2-dimensional symmetric space. An empty basis is a valid answer.
pub fn invariant_quadratic_forms(generators: &[DMatrix<f64>]) -> Vec<DMatrix<f64>> {
    assert!(!generators.is_empty());
    let n = generators[0].nrows();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let s = pairs.len();
    let mut rows: Vec<f64> = Vec::with_capacity(generators.len() * s * s);
    for g in generators {
        for &(i, j) in &pairs {
            for &(k, l) in &pairs {
                let mut coeff = g[(k, i)] * g[(l, j)];
                if k != l {
                    coeff += g[(l, i)] * g[(k, j)];
                }
                if (k, l) == (i, j) {
                    coeff -= 1.0;
                }
                rows.push(coeff);
            }
        }
    }
    let m = DMatrix::from_row_slice(generators.len() * s, s, &rows);
    let svd = m.clone().svd(false, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0f64, f64::max).max(1.0);
    let vt = svd.v_t.expect("svd with v_t requested");
    let mut basis = Vec::new();
    for (idx, &sigma) in sv.iter().enumerate() {
        if sigma <= EPS * smax {
            let coords = vt.row(idx).transpose();
            let mut b = DMatrix::zeros(n, n);
            for (c, &(i, j)) in pairs.iter().enumerate() {
                b[(i, j)] = coords[c];
                b[(j, i)] = coords[c];
            }
            let norm = b.norm();
            basis.push(b / norm);
        }
    }
    basis
}

/// max over generators of ‖γᵀBγ − B‖∞ / ‖B‖∞.
pub fn invariance_residual(generators: &[DMatrix<f64>], b: &DMatrix<f64>) -> f64 {
    let scale = b.amax();
    generators
        .iter()
        .map(|g| (g.transpose() * b * g - b).amax() / scale)
        .fold(0.0, f64::max)
}

/// Signature (positives, negatives, zeros) of a symmetric form.
pub fn signature(b: &DMatrix<f64>, eps: f64) -> (usize, usize, usize) {
    let eigs = (b + b.transpose()).scale(0.5).symmetric_eigen().eigenvalues;
    let scale = eigs.amax().max(1e-300);
    let pos = eigs.iter().filter(|&&e| e > eps * scale).count();
    let neg = eigs.iter().filter(|&&e| e < -eps * scale).count();
    (pos, neg, eigs.len() - pos - neg)
}

#[derive(Debug, Clone, Serialize)]
pub enum ZariskiVerdict {
    /// Γ_P preserves a Lorentzian form: the closure is conjugate to the
    /// isometries of an ellipsoid.
    ConjugateSOd1 {
        #[serde(skip)]
        witness: DMatrix<f64>,
        invariance_residual: f64,
    },
    /// No invariant form: the closure is the full special linear group.
    FullSL,
    /// Decomposable or affine shapes with smaller closures, described.
    Degenerate(String),
    /// Form space of dimension ≥ 2 with no Lorentzian member found; surfaced
    /// instead of asserted away.
    Inconclusive(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ZariskiReport {
    pub verdict: ZariskiVerdict,
    pub form_space_dim: usize,
}

/// Zariski closure of Γ_P for loxodromic 2-perfect polytopes, decided by
/// searching for an invariant quadratic form of the generators.
pub fn zariski_closure(p: &MirrorPolytope) -> Result<ZariskiReport> {
    let class = polytope_class(p)?;
    let perf = perfection(p)?;
    if perf.class == PerfectionClass::NotTwoPerfect {
        return Err(ClassifyError::PreconditionUnmet(
            "Zariski closure decision requires a 2-perfect polytope".into(),
        ));
    }

    if class.class != PolytopeClass::Loxodromic {
        // Degenerate 2-perfect shapes still get a description.
        match degenerate_classification(p)? {
            DegenerateClass::Elliptic => {
                return Ok(ZariskiReport {
                    verdict: ZariskiVerdict::Degenerate("finite group: trivial closure".into()),
                    form_space_dim: 0,
                })
            }
            DegenerateClass::Parabolic => {
                return Ok(ZariskiReport {
                    verdict: ZariskiVerdict::Degenerate(format!(
                        "translation group of rank {}",
                        p.dim()
                    )),
                    form_space_dim: 0,
                })
            }
            DegenerateClass::ConeOver { base, .. } => {
                let desc = match base {
                    PolytopeClass::Parabolic => {
                        format!("cone: translations of rank {}", p.dim().saturating_sub(1))
                    }
                    PolytopeClass::Loxodromic => {
                        format!("cone over a loxodromic base in dimension {}", p.dim() - 1)
                    }
                    other => format!("cone over a base of class {other:?}"),
                };
                return Ok(ZariskiReport {
                    verdict: ZariskiVerdict::Degenerate(desc),
                    form_space_dim: 0,
                });
            }
            DegenerateClass::LoxodromicIrreducible => {
                return Err(ClassifyError::Inconsistent(
                    "loxodromic shape reported for a non-loxodromic Cartan type".into(),
                ))
            }
        }
    }

    let irr = is_irreducible_rep(p)?;
    if !irr.representation_irreducible {
        return Err(ClassifyError::PreconditionUnmet(
            "Zariski dichotomy requires an irreducible representation".into(),
        ));
    }

    let sys = p.coxeter_system()?;
    if sys.classify_irreducible()?.kind == DiagramKind::Affine {
        // The affine-cycle loxodromic case: the invariant convex set is a
        // simplex and the closure is the positive diagonal torus.
        return Ok(ZariskiReport {
            verdict: ZariskiVerdict::Degenerate(format!(
                "positive diagonal torus of rank {}",
                p.dim()
            )),
            form_space_dim: invariant_quadratic_forms(&p.reflections()).len(),
        });
    }

    let gens = p.reflections();
    let forms = invariant_quadratic_forms(&gens);
    let d = p.dim();
    let lorentzian = |b: &DMatrix<f64>| -> Option<DMatrix<f64>> {
        let (pos, neg, zero) = signature(b, EPS);
        if zero > 0 {
            return None;
        }
        if pos == d && neg == 1 {
            return Some(b.clone());
        }
        if pos == 1 && neg == d {
            return Some(-b);
        }
        None
    };
    let verdict = match forms.len() {
        0 => ZariskiVerdict::FullSL,
        1 => match lorentzian(&forms[0]) {
            Some(b) => {
                let residual = invariance_residual(&gens, &b);
                ZariskiVerdict::ConjugateSOd1 { witness: b, invariance_residual: residual }
            }
            None => ZariskiVerdict::Inconclusive(format!(
                "one invariant form of signature {:?}, expected ({d},1)",
                signature(&forms[0], EPS)
            )),
        },
        dim => {
            use rand::Rng;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xCAFE);
            let mut found = forms.iter().find_map(lorentzian);
            for _ in 0..64 {
                if found.is_some() {
                    break;
                }
                let mut combo = DMatrix::zeros(d + 1, d + 1);
                for b in &forms {
                    combo += b * rng.random_range(-1.0..1.0);
                }
                found = lorentzian(&combo);
            }
            match found {
                Some(b) => {
                    let residual = invariance_residual(&gens, &b);
                    ZariskiVerdict::ConjugateSOd1 { witness: b, invariance_residual: residual }
                }
                None => ZariskiVerdict::Inconclusive(format!(
                    "{dim}-dimensional form space with no Lorentzian member found"
                )),
            }
        }
    };
    Ok(ZariskiReport { verdict, form_space_dim: forms.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictConvexityReport {
    pub strictly_convex: bool,
    /// Equivalent to strict convexity in this setting.
    pub c1_boundary: bool,
    /// Consequences when strictly convex: the Hilbert metric is
    /// Gromov-hyperbolic and the action has finite covolume.
    pub gromov_hyperbolic: bool,
    pub finite_covolume: bool,
    pub relative_hyperbolicity: Option<RelHypVerdict>,
    pub witness: Option<String>,
}

/// Strict convexity of the invariant convex set: quasi-perfect plus relative
/// hyperbolicity with respect to the geometric parabolic subgroups (the
/// facet sets through parabolic vertices).
pub fn strict_convexity(p: &MirrorPolytope) -> Result<StrictConvexityReport> {
    let class = polytope_class(p)?;
    if class.class != PolytopeClass::Loxodromic {
        return Err(ClassifyError::PreconditionUnmet(format!(
            "strict convexity applies to loxodromic polytopes, found {:?}",
            class.class
        )));
    }
    let sys = p.coxeter_system()?;
    let perf = perfection(p)?;
    let vertex_data: Vec<(Subsystem, VertexClass)> = perf
        .vertices
        .iter()
        .map(|v| (Subsystem::new(v.active_facets.clone()), v.class.clone()))
        .collect();
    Ok(strict_convexity_combinatorial(&sys, &vertex_data)?)
}

/// Combinatorial core of the strict-convexity decision, usable when only
/// the Coxeter system and the vertex data are known (e.g. polytopes whose
/// coordinates come from a moduli computation we do not perform).
pub fn strict_convexity_combinatorial(
    sys: &CoxeterSystem,
    vertex_data: &[(Subsystem, VertexClass)],
) -> std::result::Result<StrictConvexityReport, CoxsysError> {
    if let Some((s, cls)) = vertex_data
        .iter()
        .find(|(_, c)| matches!(c, VertexClass::Imperfect(_)))
    {
        let witness = match cls {
            VertexClass::Imperfect(w) => w.clone(),
            _ => unreachable!(),
        };
        return Ok(StrictConvexityReport {
            strictly_convex: false,
            c1_boundary: false,
            gromov_hyperbolic: false,
            finite_covolume: false,
            relative_hyperbolicity: None,
            witness: Some(format!(
                "not 2-perfect at vertex {:?}: {witness}; the offending edge lies in the boundary",
                s.0
            )),
        });
    }
    if let Some((s, _)) = vertex_data
        .iter()
        .find(|(_, c)| *c == VertexClass::Loxodromic)
    {
        return Ok(StrictConvexityReport {
            strictly_convex: false,
            c1_boundary: false,
            gromov_hyperbolic: false,
            finite_covolume: false,
            relative_hyperbolicity: None,
            witness: Some(format!(
                "loxodromic vertex {:?}: its boundary point is neither strictly convex nor C¹",
                s.0
            )),
        });
    }
    let peripherals: Vec<Subsystem> = vertex_data
        .iter()
        .filter(|(_, c)| *c == VertexClass::Parabolic)
        .map(|(s, _)| s.clone())
        .collect();
    let rel = relative_hyperbolicity_check(sys, &peripherals)?;
    let ok = rel.holds();
    let witness = match &rel {
        RelHypVerdict::RelativelyHyperbolic => None,
        RelHypVerdict::Violated { detail, .. } => Some(detail.clone()),
    };
    Ok(StrictConvexityReport {
        strictly_convex: ok,
        c1_boundary: ok,
        gromov_hyperbolic: ok,
        finite_covolume: true,
        relative_hyperbolicity: Some(rel),
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexExtremesReport {
    /// Ω_P is always the largest invariant convex open set.
    pub largest_is_omega: bool,
    /// Ω_P is also the smallest iff the action has finite covolume; then it
    /// is the unique invariant properly convex open set.
    pub smallest_is_omega: bool,
    pub unique_invariant: bool,
    /// Loxodromic vertices witnessing Ω_min ⊊ Ω_P.
    pub loxodromic_witnesses: Vec<usize>,
}

/// Largest/smallest invariant convex set facts for loxodromic 2-perfect
/// polytopes.
pub fn invariant_convex_extremes(p: &MirrorPolytope) -> Result<ConvexExtremesReport> {
    let class = polytope_class(p)?;
    let perf = perfection(p)?;
    if class.class != PolytopeClass::Loxodromic || perf.class == PerfectionClass::NotTwoPerfect {
        return Err(ClassifyError::PreconditionUnmet(
            "invariant-convex-set extremes require a loxodromic 2-perfect polytope".into(),
        ));
    }
    let witnesses: Vec<usize> = perf
        .vertices
        .iter()
        .filter(|v| v.class == VertexClass::Loxodromic)
        .map(|v| v.vertex)
        .collect();
    let smallest = witnesses.is_empty();
    Ok(ConvexExtremesReport {
        largest_is_omega: true,
        smallest_is_omega: smallest,
        unique_invariant: smallest,
        loxodromic_witnesses: witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxsys::{fin, INF};
    use crate::fixtures;

    #[test]
    fn tits_237_vertices_are_elliptic_and_perfect() {
        let p = MirrorPolytope::tits_simplex(&fixtures::triangle_237());
        for vid in 0..3 {
            let r = classify_vertex(&p, vid).unwrap();
            assert_eq!(r.class, VertexClass::Elliptic, "vertex {vid}");
        }
        let perf = perfection(&p).unwrap();
        assert_eq!(perf.class, PerfectionClass::Perfect);
        assert!(perf.edge_criterion_agrees);
    }

    #[test]
    fn zero_angle_vertex_is_parabolic() {
        let p = MirrorPolytope::tits_simplex(&CoxeterSystem::triangle(fin(2), fin(3), INF));
        let classes: Vec<VertexClass> = (0..3)
            .map(|vid| classify_vertex(&p, vid).unwrap().class)
            .collect();
        let parabolic = classes.iter().filter(|c| **c == VertexClass::Parabolic).count();
        let elliptic = classes.iter().filter(|c| **c == VertexClass::Elliptic).count();
        assert_eq!((parabolic, elliptic), (1, 2));
        assert_eq!(perfection(&p).unwrap().class, PerfectionClass::QuasiPerfect);
    }

    #[test]
    fn quadrilateral_has_one_loxodromic_vertex() {
        let p = fixtures::loxodromic_quadrilateral();
        let perf = perfection(&p).unwrap();
        let lox = perf
            .vertices
            .iter()
            .filter(|v| v.class == VertexClass::Loxodromic)
            .count();
        assert_eq!(lox, 1);
        assert_eq!(perf.class, PerfectionClass::TwoPerfect);
    }

    #[test]
    fn polygon_perfection_is_at_least_two_perfect() {
        for p in [
            fixtures::loxodromic_quadrilateral(),
            fixtures::right_angled_pentagon(),
            MirrorPolytope::tits_simplex(&fixtures::triangle_333()),
        ] {
            assert_ne!(perfection(&p).unwrap().class, PerfectionClass::NotTwoPerfect);
        }
    }

    #[test]
    fn polytope_trichotomy_fixtures() {
        let para = polytope_class(&MirrorPolytope::tits_simplex(&fixtures::triangle_333())).unwrap();
        assert_eq!(para.class, PolytopeClass::Parabolic);
        assert_eq!(para.cartan_rank, 2);
        assert_eq!(para.five_case, Some(FiveCase::AffineCycleZeroType));

        let lox = polytope_class(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        assert_eq!(lox.class, PolytopeClass::Loxodromic);
        assert_eq!(lox.five_case, Some(FiveCase::Large));

        let cone = MirrorPolytope::cone_over(&MirrorPolytope::tits_simplex(&fixtures::triangle_333()));
        let c = polytope_class(&cone).unwrap();
        assert!(matches!(c.class, PolytopeClass::Degenerate(_)));
        match degenerate_classification(&cone).unwrap() {
            DegenerateClass::ConeOver { base, .. } => assert_eq!(base, PolytopeClass::Parabolic),
            other => panic!("expected a cone, got {other:?}"),
        }

        let kv = polytope_class(&fixtures::kac_vinberg_triangle(2.0)).unwrap();
        assert_eq!(kv.class, PolytopeClass::Loxodromic);
        assert_eq!(kv.five_case, Some(FiveCase::AffineCycleNegativeType));
    }

    #[test]
    fn degenerate_four_cases() {
        // Case 1: elliptic simplex.
        let b3 = crate::coxsys::system_from_edges(3, &[(0, 1, fin(4)), (1, 2, fin(3))]);
        let elliptic = MirrorPolytope::tits_simplex(&b3);
        assert_eq!(degenerate_classification(&elliptic).unwrap(), DegenerateClass::Elliptic);

        // Case 2: parabolic.
        let para = MirrorPolytope::tits_simplex(&fixtures::triangle_333());
        assert_eq!(degenerate_classification(&para).unwrap(), DegenerateClass::Parabolic);

        // Case 3: loxodromic irreducible.
        let lox = MirrorPolytope::tits_simplex(&fixtures::triangle_237());
        assert_eq!(
            degenerate_classification(&lox).unwrap(),
            DegenerateClass::LoxodromicIrreducible
        );

        // Case 4 with a loxodromic perfect base.
        let cone = MirrorPolytope::cone_over(&lox);
        match degenerate_classification(&cone).unwrap() {
            DegenerateClass::ConeOver { base, .. } => {
                assert_eq!(base, PolytopeClass::Loxodromic);
            }
            other => panic!("expected a cone, got {other:?}"),
        }
    }

    #[test]
    fn polytope_values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<MirrorPolytope>();
        assert_send_sync::<CoxeterSystem>();
        assert_send_sync::<crate::cartan::CartanMatrix>();
    }

    #[test]
    fn irreducibility_fixtures() {
        let t = is_irreducible_rep(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        assert!(t.representation_irreducible && t.strongly_irreducible);

        let seg = MirrorPolytope::product(&MirrorPolytope::point(), &MirrorPolytope::point());
        let square_like = MirrorPolytope::product(&seg, &seg);
        assert!(!is_irreducible_rep(&square_like).unwrap().representation_irreducible);

        let para = is_irreducible_rep(&MirrorPolytope::tits_simplex(&fixtures::triangle_333())).unwrap();
        assert!(!para.representation_irreducible); // rank d, not d+1
    }

    #[test]
    fn action_fixtures() {
        let all = action_classification(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        assert!(all.cocompact.is_true());
        assert!(all.convex_cocompact.is_true());
        assert!(all.finite_covolume.is_true());
        assert!(all.geometrically_finite.is_true());

        let cusp =
            action_classification(&MirrorPolytope::tits_simplex(&CoxeterSystem::triangle(fin(2), fin(3), INF)))
                .unwrap();
        assert!(cusp.finite_covolume.is_true());
        assert_eq!(cusp.convex_cocompact, TriState::False);
        assert_eq!(cusp.cocompact, TriState::False);
        assert!(cusp.geometrically_finite.is_true());

        let quad = action_classification(&fixtures::loxodromic_quadrilateral()).unwrap();
        assert!(quad.convex_cocompact.is_true());
        assert_eq!(quad.finite_covolume, TriState::False);

        let para = action_classification(&MirrorPolytope::tits_simplex(&fixtures::triangle_333())).unwrap();
        assert!(matches!(para.cocompact, TriState::NotApplicable(_)));
    }

    #[test]
    fn invariant_forms_of_the_tits_triangle() {
        let p = MirrorPolytope::tits_simplex(&fixtures::triangle_237());
        let forms = invariant_quadratic_forms(&p.reflections());
        assert_eq!(forms.len(), 1);
        assert_eq!(signature(&forms[0], EPS).0.min(signature(&forms[0], EPS).1), 1);
        // The simplex here carries the dual of the standard reflection
        // representation, so the invariant form on it is proportional to the
        // inverse of the defining bilinear form (entries −cos(π/m)).
        let gram_inv = (fixtures::triangle_237().gram_matrix() * 0.5)
            .try_inverse()
            .unwrap();
        let b = &forms[0];
        let scale = b[(0, 0)] / gram_inv[(0, 0)];
        assert!((b / scale - gram_inv).amax() < 1e-9);
    }

    #[test]
    fn identity_generator_preserves_every_form() {
        let id = DMatrix::<f64>::identity(3, 3);
        let forms = invariant_quadratic_forms(&[id]);
        assert_eq!(forms.len(), 6); // full symmetric space
    }

    #[test]
    fn skew_triangle_has_no_invariant_form() {
        let p = fixtures::skew_334_triangle();
        let forms = invariant_quadratic_forms(&p.reflections());
        assert!(forms.is_empty());
    }

    #[test]
    fn zariski_fixtures() {
        let so = zariski_closure(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        match so.verdict {
            ZariskiVerdict::ConjugateSOd1 { invariance_residual, .. } => {
                assert!(invariance_residual < 1e-9);
            }
            other => panic!("expected an invariant Lorentzian form, got {other:?}"),
        }
        assert_eq!(so.form_space_dim, 1);

        let sl = zariski_closure(&fixtures::skew_334_triangle()).unwrap();
        assert!(matches!(sl.verdict, ZariskiVerdict::FullSL));

        let kv = zariski_closure(&fixtures::kac_vinberg_triangle(2.0)).unwrap();
        assert!(matches!(kv.verdict, ZariskiVerdict::Degenerate(_)));

        let pentagon = zariski_closure(&fixtures::right_angled_pentagon()).unwrap();
        assert!(matches!(pentagon.verdict, ZariskiVerdict::ConjugateSOd1 { .. }));
    }

    #[test]
    fn zariski_witness_separates_interior_from_polar_side() {
        use rand::SeedableRng;
        let p = MirrorPolytope::tits_simplex(&fixtures::triangle_237());
        let report = zariski_closure(&p).unwrap();
        let b = match report.verdict {
            ZariskiVerdict::ConjugateSOd1 { witness, .. } => witness,
            _ => panic!(),
        };
        // Fix the sign so the form is negative on the interior.
        let x0 = p.interior_point();
        let sign = (x0.transpose() * &b * &x0)[(0, 0)].signum();
        let b = b * -sign;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for x in p.interior_samples(50, &mut rng) {
            assert!((x.transpose() * &b * &x)[(0, 0)] < 0.0);
        }
        // Polars are outside the quadric's convex side.
        for f in p.facets() {
            let val = (f.v.transpose() * &b * &f.v)[(0, 0)];
            assert!(val > 0.0);
        }
    }

    #[test]
    fn strict_convexity_fixtures() {
        let yes = strict_convexity(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        assert!(yes.strictly_convex && yes.gromov_hyperbolic);

        let quad = strict_convexity(&fixtures::loxodromic_quadrilateral()).unwrap();
        assert!(!quad.strictly_convex);
        assert!(quad.witness.unwrap().contains("loxodromic"));

        // Prism: combinatorial route, vertex data supplied by the fixture.
        let sys = fixtures::prism_system();
        let pv = fixtures::prism_parabolic_vertex();
        let data: Vec<(Subsystem, VertexClass)> = fixtures::prism_vertex_sets()
            .into_iter()
            .map(|s| {
                let class = if s == pv { VertexClass::Parabolic } else { VertexClass::Elliptic };
                (s, class)
            })
            .collect();
        let report = strict_convexity_combinatorial(&sys, &data).unwrap();
        assert!(!report.strictly_convex);
        match report.relative_hyperbolicity.unwrap() {
            RelHypVerdict::Violated { witness, .. } => {
                assert!(witness.contains_all(&Subsystem::new(vec![0, 1, 2])));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn extremes_fixtures() {
        let cusp = MirrorPolytope::tits_simplex(&CoxeterSystem::triangle(fin(2), fin(3), INF));
        let r = invariant_convex_extremes(&cusp).unwrap();
        assert!(r.largest_is_omega && r.smallest_is_omega && r.unique_invariant);

        let quad = invariant_convex_extremes(&fixtures::loxodromic_quadrilateral()).unwrap();
        assert!(!quad.smallest_is_omega);
        assert_eq!(quad.loxodromic_witnesses.len(), 1);

        let perfect = invariant_convex_extremes(&MirrorPolytope::tits_simplex(&fixtures::triangle_237())).unwrap();
        assert!(perfect.smallest_is_omega);
    }

    #[test]
    fn vertex_class_is_invariant_under_facet_rescaling() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let p = fixtures::loxodromic_quadrilateral();
        let base: Vec<VertexClass> = (0..p.vertices().len())
            .map(|v| classify_vertex(&p, v).unwrap().class)
            .collect();
        for _ in 0..5 {
            let mut facets = p.facets().to_vec();
            for f in &mut facets {
                let lambda: f64 = rng.random_range(0.3..3.0);
                f.alpha *= lambda;
                f.v /= lambda;
            }
            let q = MirrorPolytope::build(2, facets).unwrap();
            // Same vertex order is not guaranteed; compare multisets.
            let mut a: Vec<String> = base.iter().map(|c| format!("{c:?}")).collect();
            let mut b: Vec<String> = (0..q.vertices().len())
                .map(|v| format!("{:?}", classify_vertex(&q, v).unwrap().class))
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}
