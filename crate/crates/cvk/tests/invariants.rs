//! Cross-module invariants: Gram/Cartan agreement, action implication
//! chains, truncation/limit-set consequences, and property tests over
//! randomly generated Coxeter systems.

mod common;

use common::WordOracle;
use cvk::cartan::{CartanMatrix, MatrixType};
use cvk::classify::{
    action_classification, implication_chain_holds, perfection, strict_convexity,
    PerfectionClass, VertexClass,
};
use cvk::coxsys::{CoxeterSystem, DiagramKind, Label};
use cvk::fixtures;
use cvk::orbit::{counts_by_length, enumerate_group, limit_set_approx, omega_max_approx};
use cvk::polytope::MirrorPolytope;
use cvk::truncate::{truncability, truncate_all};
use proptest::prelude::*;

#[test]
fn gram_type_matches_diagram_classification_on_the_catalog() {
    for (name, sys) in cvk::coxsys::spherical_catalog(8, 12)
        .into_iter()
        .chain(cvk::coxsys::affine_catalog(9))
    {
        let diagram = sys.classify_irreducible().unwrap();
        let cartan = CartanMatrix::new(sys.gram_matrix()).unwrap();
        let t = cartan.cartan_type().unwrap().aggregate;
        match diagram.kind {
            DiagramKind::Spherical => assert_eq!(t, MatrixType::Positive, "{name}"),
            DiagramKind::Affine => assert_eq!(t, MatrixType::Zero, "{name}"),
            DiagramKind::Large => unreachable!("catalog members are not large"),
        }
    }
}

#[test]
fn action_reports_satisfy_the_implication_chain() {
    let polytopes = vec![
        MirrorPolytope::tits_simplex(&fixtures::triangle_237()),
        MirrorPolytope::tits_simplex(&fixtures::triangle_333()),
        MirrorPolytope::tits_simplex(&CoxeterSystem::triangle(
            cvk::coxsys::fin(2),
            cvk::coxsys::fin(3),
            cvk::coxsys::INF,
        )),
        fixtures::loxodromic_quadrilateral(),
        fixtures::right_angled_pentagon(),
        fixtures::euclidean_square(),
        fixtures::euclidean_prism(),
        fixtures::kac_vinberg_triangle(2.0),
        fixtures::skew_334_triangle(),
        fixtures::tits_a3(),
    ];
    for p in &polytopes {
        let report = action_classification(p).unwrap();
        assert!(implication_chain_holds(&report));
    }
}

#[test]
fn strict_convexity_implies_quasi_perfection() {
    for p in [
        MirrorPolytope::tits_simplex(&fixtures::triangle_237()),
        fixtures::loxodromic_quadrilateral(),
        fixtures::right_angled_pentagon(),
        fixtures::skew_334_triangle(),
    ] {
        if let Ok(report) = strict_convexity(&p) {
            if report.strictly_convex {
                let perf = perfection(&p).unwrap().class;
                assert!(matches!(
                    perf,
                    PerfectionClass::Perfect | PerfectionClass::QuasiPerfect
                ));
            }
        }
    }
}

#[test]
fn enumeration_counts_match_the_oracle_on_fixture_systems() {
    // Tits simplices of the shipped triangle systems, depth 6 here (the
    // acceptance suite runs the named trio to depth 8).
    let mut systems = vec![fixtures::triangle_333()];
    for (_, sys) in fixtures::quasi_lanner_triangles() {
        systems.push(sys);
    }
    for sys in systems {
        let p = MirrorPolytope::tits_simplex(&sys);
        let oracle = WordOracle::new(&sys).counts_by_length(6);
        let counts = counts_by_length(&enumerate_group(&p, 6).unwrap(), 6);
        assert_eq!(counts, oracle);
    }
    // A non-simplex case: the quadrilateral against its own system.
    let quad = fixtures::loxodromic_quadrilateral();
    let sys = quad.coxeter_system().unwrap();
    let oracle = WordOracle::new(&sys).counts_by_length(6);
    let counts = counts_by_length(&enumerate_group(&quad, 6).unwrap(), 6);
    assert_eq!(counts, oracle);
}

/// Sampled consequences of truncation: the truncated polytope's orbit stays
/// inside every supporting half-space of the original group's maximal
/// invariant convex set, and the sampled limit set avoids the open corner
/// cones cut off by the truncation.
#[test]
fn truncation_containment_and_limit_set_avoid_the_corners() {
    use rand::SeedableRng;
    let quad = fixtures::loxodromic_quadrilateral();
    let out = truncate_all(&quad).unwrap();
    let pent = &out.polytope;
    let lox_vertex = out.truncated_vertices[0];
    let plan = truncability(&quad, lox_vertex).unwrap();
    let active = quad.vertices()[lox_vertex].active.clone();

    // Ω_{P†} ⊆ every H_γ^+ of the original group.
    let quad_elements = enumerate_group(&quad, 8).unwrap();
    let omega = omega_max_approx(&quad, &quad_elements).unwrap();
    assert!(omega.halfspaces.len() > 20);
    let pent_elements = enumerate_group(pent, 4).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let samples = pent.interior_samples(4, &mut rng);
    for e in &pent_elements {
        for x in &samples {
            let y = &e.matrix * x;
            let yn = y.norm();
            for h in &omega.halfspaces {
                assert!(
                    h.dot(&y) / (h.norm() * yn) < 1e-9,
                    "orbit of the truncated polytope escapes a supporting half-space"
                );
            }
        }
    }

    // Sampled limit points of Γ_P never lie strictly inside a translate of
    // the open corner cut off at the loxodromic vertex.
    let sample = limit_set_approx(&quad, 150, (3, 12), 19).unwrap();
    assert!(sample.points.len() >= 60);
    let inverses: Vec<nalgebra::DMatrix<f64>> = quad_elements
        .iter()
        .map(|e| e.matrix.clone().try_inverse().unwrap())
        .collect();
    let pi_norm = plan.pi.norm();
    for x in &sample.points {
        for inv in &inverses {
            let y = inv * x;
            let yn = y.norm();
            let beyond = plan.pi.dot(&y) / (pi_norm * yn) > 1e-7;
            let in_cone = active.iter().all(|&s| {
                let f = &quad.facets()[s];
                f.alpha.dot(&y) / (f.alpha.norm() * yn) <= 1e-7
            });
            assert!(
                !(beyond && in_cone),
                "limit point enters the open truncated corner"
            );
        }
    }
}

/// Deep tiles of a compact hyperbolic triangle group pile up on the
/// invariant conic: the worst vertex-to-quadric residual over tiles of word
/// length D decreases as D grows.
#[test]
fn tiles_accumulate_toward_the_invariant_conic() {
    use cvk::classify::{zariski_closure, ZariskiVerdict};
    let p = MirrorPolytope::tits_simplex(&fixtures::triangle_237());
    let witness = match zariski_closure(&p).unwrap().verdict {
        ZariskiVerdict::ConjugateSOd1 { witness, .. } => witness,
        _ => panic!("(2,3,7) preserves a form"),
    };
    let scale = witness.amax();
    let elements = enumerate_group(&p, 10).unwrap();
    let worst_at = |depth: usize| -> f64 {
        elements
            .iter()
            .filter(|e| e.length == depth)
            .map(|e| {
                p.vertices()
                    .iter()
                    .map(|v| {
                        let x = (&e.matrix * &v.point).normalize();
                        (x.transpose() * &witness * &x)[(0, 0)].abs() / scale
                    })
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max)
    };
    let residuals: Vec<f64> = (2..=10).step_by(2).map(worst_at).collect();
    for pair in residuals.windows(2) {
        assert!(pair[1] < pair[0], "sequence not decreasing: {residuals:?}");
    }
}

#[test]
fn truncated_vertices_are_replaced_by_elliptic_ones() {
    let quad = fixtures::loxodromic_quadrilateral();
    let out = truncate_all(&quad).unwrap();
    let perf = perfection(&out.polytope).unwrap();
    assert!(perf.vertices.iter().all(|v| v.class == VertexClass::Elliptic));
}

fn label_strategy() -> impl Strategy<Value = Label> {
    prop_oneof![
        Just(Label::Finite(2)),
        Just(Label::Finite(3)),
        Just(Label::Finite(4)),
        Just(Label::Finite(5)),
        Just(Label::Finite(6)),
        Just(Label::Finite(7)),
        Just(Label::Infinite),
    ]
}

fn system_strategy(max_rank: usize) -> impl Strategy<Value = CoxeterSystem> {
    (1..=max_rank)
        .prop_flat_map(|rank| {
            proptest::collection::vec(label_strategy(), rank * (rank - 1) / 2)
                .prop_map(move |uppers| {
                    let mut labels = vec![vec![Label::Finite(1); rank]; rank];
                    let mut k = 0;
                    for i in 0..rank {
                        for j in i + 1..rank {
                            labels[i][j] = uppers[k];
                            labels[j][i] = uppers[k];
                            k += 1;
                        }
                    }
                    CoxeterSystem::from_labels(labels).unwrap()
                })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Gram entries: diagonal 2, off-diagonal −2cos(π/m) ∈ [−2, 0].
    #[test]
    fn gram_matrix_entry_bounds(sys in system_strategy(6)) {
        let g = sys.gram_matrix();
        for i in 0..sys.rank() {
            prop_assert!((g[(i, i)] - 2.0).abs() < 1e-15);
            for j in 0..sys.rank() {
                if i != j {
                    prop_assert!(g[(i, j)] <= 0.0 && g[(i, j)] >= -2.0);
                    prop_assert!((g[(i, j)] - sys.label(i, j).gram_entry()).abs() < 1e-15);
                }
            }
        }
    }

    /// The Tits simplex of any system reproduces the system exactly.
    #[test]
    fn tits_round_trip_random_systems(sys in system_strategy(5)) {
        let p = MirrorPolytope::tits_simplex(&sys);
        let back = p.coxeter_system().unwrap();
        prop_assert_eq!(back.label_key(), sys.label_key());
        let a = p.cartan_matrix().unwrap();
        prop_assert!((a.matrix() - sys.gram_matrix()).amax() <= 1e-9);
    }

    /// Subsystem classification is monotone under the spherical order:
    /// subsystems of spherical systems are spherical.
    #[test]
    fn spherical_is_hereditary(sys in system_strategy(5), mask in 0u32..32) {
        if sys.is_spherical() {
            let members: Vec<usize> =
                (0..sys.rank()).filter(|i| mask >> i & 1 == 1).collect();
            if !members.is_empty() {
                let sub = sys.restrict(&cvk::coxsys::Subsystem::new(members));
                prop_assert!(sub.is_spherical());
            }
        }
    }
}
