//! Assembly of the full classification report: one JSON object per decision,
//! each tagged with the decision rule it was produced by, with residuals and
//! witnesses.

use crate::classify::{
    self, signature, ActionReport, ClassifyError, DegenerateClass, PerfectionClass,
    StrictConvexityReport, TriState, ZariskiVerdict,
};
use crate::io::SCHEMA;
use crate::polytope::{CdViolation, MirrorPolytope, RidgeAngleInfo};
use crate::tol::EPS;
use serde::Serialize;

pub mod rules {
    pub const CONDITIONS: &str = "conditions/mirror-inequalities-and-angle-submultiples";
    pub const CARTAN: &str = "cartan/perron-type-and-rank";
    pub const VERTEX: &str = "vertex/link-type-and-rank";
    pub const PERFECTION: &str = "perfection/vertex-classes-with-edge-criterion";
    pub const CLASS: &str = "class/type-rank-trichotomy";
    pub const ACTION_COCOMPACT: &str = "action/cocompact-iff-perfect";
    pub const ACTION_FINITE_COVOLUME: &str = "action/finite-covolume-iff-no-loxodromic-vertex";
    pub const ACTION_CONVEX_COCOMPACT: &str = "action/convex-cocompact-iff-no-parabolic-vertex";
    pub const ACTION_GEOMETRICALLY_FINITE: &str = "action/geometrically-finite-always";
    pub const ZARISKI: &str = "zariski/invariant-form-dichotomy";
    pub const STRICT_CONVEXITY: &str = "strict-convexity/quasi-perfect-and-relative-hyperbolicity";
    pub const EXTREMES: &str = "extremes/largest-always-smallest-iff-finite-covolume";
    pub const DEGENERATE: &str = "degenerate/four-case-shape";
}

#[derive(Serialize)]
pub struct ConditionsSection {
    pub rule: &'static str,
    pub coxeter_polytope: bool,
    pub ridges: Vec<RidgeAngleInfo>,
    pub violations: Vec<CdViolation>,
}

#[derive(Serialize)]
pub struct CartanSection {
    pub rule: &'static str,
    pub aggregate: crate::cartan::MatrixType,
    pub rank: usize,
    pub components: Vec<ComponentSection>,
}

#[derive(Serialize)]
pub struct ComponentSection {
    pub members: Vec<usize>,
    pub kind: crate::cartan::MatrixType,
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Serialize)]
pub struct ActionSection {
    pub rule_cocompact: &'static str,
    pub rule_finite_covolume: &'static str,
    pub rule_convex_cocompact: &'static str,
    pub rule_geometrically_finite: &'static str,
    #[serde(flatten)]
    pub report: ActionReport,
}

#[derive(Serialize)]
pub struct ZariskiSection {
    pub rule: &'static str,
    pub verdict: String,
    pub form_space_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariance_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_signature: Option<(usize, usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_form: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
}

#[derive(Serialize)]
pub struct StrictConvexitySection {
    pub rule: &'static str,
    #[serde(flatten)]
    pub report: Option<StrictConvexityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
}

#[derive(Serialize)]
pub struct ExtremesSection {
    pub rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_is_omega: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallest_is_omega: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_invariant: Option<bool>,
    pub loxodromic_witnesses: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub not_applicable: Option<String>,
}

#[derive(Serialize)]
pub struct ClassificationReport {
    pub schema: &'static str,
    pub dim: usize,
    pub facets: Vec<String>,
    pub conditions: ConditionsSection,
    pub coxeter_labels: Vec<Vec<crate::coxsys::Label>>,
    pub cartan: CartanSection,
    pub vertex_rule: &'static str,
    pub vertices: Vec<classify::VertexReport>,
    pub perfection_rule: &'static str,
    pub perfection: PerfectionClass,
    pub edge_criterion_agrees: bool,
    pub class_rule: &'static str,
    pub polytope_class: classify::PolytopeClassReport,
    pub irreducibility: classify::IrreducibilityReport,
    pub action: ActionSection,
    pub degenerate_rule: &'static str,
    pub degenerate_class: Option<DegenerateClass>,
    pub zariski: ZariskiSection,
    pub strict_convexity: StrictConvexitySection,
    pub invariant_convex_extremes: ExtremesSection,
}

/// Runs every decision procedure on a validated Coxeter polytope. Decisions
/// whose preconditions fail are reported not-applicable with the reason.
pub fn classification_report(p: &MirrorPolytope) -> Result<ClassificationReport, ClassifyError> {
    let conditions = p.check_conditions();
    let sys = p.coxeter_system()?;
    let cartan = p.cartan_matrix()?;
    let types = cartan.cartan_type()?;
    let perf = classify::perfection(p)?;
    let class = classify::polytope_class(p)?;
    let irr = classify::is_irreducible_rep(p)?;
    let action = classify::action_classification(p)?;
    let degenerate = classify::degenerate_classification(p).ok();

    let zariski = match classify::zariski_closure(p) {
        Ok(z) => {
            let (verdict, residual, sig, form) = match &z.verdict {
                ZariskiVerdict::ConjugateSOd1 { witness, invariance_residual } => (
                    format!("conjugate to the isometries of an ellipsoid in dimension {}", p.dim()),
                    Some(*invariance_residual),
                    Some(signature(witness, EPS)),
                    Some(witness.row_iter().map(|r| r.iter().copied().collect()).collect()),
                ),
                ZariskiVerdict::FullSL => ("full special linear group".to_string(), None, None, None),
                ZariskiVerdict::Degenerate(d) => (format!("degenerate: {d}"), None, None, None),
                ZariskiVerdict::Inconclusive(d) => (format!("inconclusive: {d}"), None, None, None),
            };
            ZariskiSection {
                rule: rules::ZARISKI,
                verdict,
                form_space_dim: z.form_space_dim,
                invariance_residual: residual,
                witness_signature: sig,
                witness_form: form,
                not_applicable: None,
            }
        }
        Err(e) => ZariskiSection {
            rule: rules::ZARISKI,
            verdict: "not applicable".into(),
            form_space_dim: 0,
            invariance_residual: None,
            witness_signature: None,
            witness_form: None,
            not_applicable: Some(e.to_string()),
        },
    };

    let strict = match classify::strict_convexity(p) {
        Ok(r) => StrictConvexitySection {
            rule: rules::STRICT_CONVEXITY,
            report: Some(r),
            not_applicable: None,
        },
        Err(e) => StrictConvexitySection {
            rule: rules::STRICT_CONVEXITY,
            report: None,
            not_applicable: Some(e.to_string()),
        },
    };

    let extremes = match classify::invariant_convex_extremes(p) {
        Ok(r) => ExtremesSection {
            rule: rules::EXTREMES,
            largest_is_omega: Some(r.largest_is_omega),
            smallest_is_omega: Some(r.smallest_is_omega),
            unique_invariant: Some(r.unique_invariant),
            loxodromic_witnesses: r.loxodromic_witnesses,
            not_applicable: None,
        },
        Err(e) => ExtremesSection {
            rule: rules::EXTREMES,
            largest_is_omega: None,
            smallest_is_omega: None,
            unique_invariant: None,
            loxodromic_witnesses: Vec::new(),
            not_applicable: Some(e.to_string()),
        },
    };

    Ok(ClassificationReport {
        schema: SCHEMA,
        dim: p.dim(),
        facets: p.facets().iter().map(|f| f.name.clone()).collect(),
        conditions: ConditionsSection {
            rule: rules::CONDITIONS,
            coxeter_polytope: conditions.is_coxeter(),
            ridges: conditions.ridges,
            violations: conditions.violations,
        },
        coxeter_labels: sys.labels().to_vec(),
        cartan: CartanSection {
            rule: rules::CARTAN,
            aggregate: types.aggregate,
            rank: cartan.numerical_rank(),
            components: types
                .components
                .iter()
                .map(|c| ComponentSection {
                    members: c.members.clone(),
                    kind: c.kind,
                    lambda: c.lambda,
                    residual: c.residual,
                })
                .collect(),
        },
        vertex_rule: rules::VERTEX,
        vertices: perf.vertices.clone(),
        perfection_rule: rules::PERFECTION,
        perfection: perf.class,
        edge_criterion_agrees: perf.edge_criterion_agrees,
        class_rule: rules::CLASS,
        polytope_class: class,
        irreducibility: irr,
        action: ActionSection {
            rule_cocompact: rules::ACTION_COCOMPACT,
            rule_finite_covolume: rules::ACTION_FINITE_COVOLUME,
            rule_convex_cocompact: rules::ACTION_CONVEX_COCOMPACT,
            rule_geometrically_finite: rules::ACTION_GEOMETRICALLY_FINITE,
            report: action,
        },
        degenerate_rule: rules::DEGENERATE,
        degenerate_class: degenerate,
        zariski,
        strict_convexity: strict,
        invariant_convex_extremes: extremes,
    })
}

/// Quick access to the four action verdicts as a readable summary line.
pub fn action_summary(r: &ClassificationReport) -> String {
    let show = |t: &TriState| match t {
        TriState::True => "yes",
        TriState::False => "no",
        TriState::NotApplicable(_) => "n/a",
    };
    format!(
        "cocompact: {}, finite covolume: {}, convex cocompact: {}, geometrically finite: {}",
        show(&r.action.report.cocompact),
        show(&r.action.report.finite_covolume),
        show(&r.action.report.convex_cocompact),
        show(&r.action.report.geometrically_finite),
    )
}
