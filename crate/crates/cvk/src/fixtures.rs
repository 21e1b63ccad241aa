//! The in-repo example catalog: triangle systems, Tits simplices, explicit
//! polytopes with affine or Lorentzian mirror coordinates, and the prism
//! Coxeter system. `cvk fixtures --out <dir>` writes them all as JSON.

use crate::coxsys::{fin, CoxeterSystem, Subsystem, INF};
use crate::polytope::{Facet, MirrorPolytope};
use nalgebra::DVector;

/// (2,3,7): the smallest Lannér triangle.
pub fn triangle_237() -> CoxeterSystem {
    CoxeterSystem::triangle(fin(2), fin(3), fin(7))
}

/// (2,4,5): Lannér.
pub fn triangle_245() -> CoxeterSystem {
    CoxeterSystem::triangle(fin(2), fin(4), fin(5))
}

/// (3,3,3): the affine triangle ~A_2.
pub fn triangle_333() -> CoxeterSystem {
    CoxeterSystem::triangle(fin(3), fin(3), fin(3))
}

/// The quasi-Lannér triangles shipped as fixtures.
pub fn quasi_lanner_triangles() -> Vec<(&'static str, CoxeterSystem)> {
    vec![
        ("triangle-23inf", CoxeterSystem::triangle(fin(2), fin(3), INF)),
        ("triangle-24inf", CoxeterSystem::triangle(fin(2), fin(4), INF)),
        ("triangle-33inf", CoxeterSystem::triangle(fin(3), fin(3), INF)),
        ("triangle-infinfinf", CoxeterSystem::triangle(INF, INF, INF)),
    ]
}

/// Mirror pair for an affine hyperplane `{ x · n = c }` of the chart
/// `x_{d+1} = 1`, with unit normal n, oriented so the region n·x ≤ c is the
/// inside. The reflection is the affine-orthogonal one.
pub fn affine_mirror(n: &[f64], c: f64) -> (DVector<f64>, DVector<f64>) {
    let d = n.len();
    let mut alpha = DVector::zeros(d + 1);
    let mut v = DVector::zeros(d + 1);
    for i in 0..d {
        alpha[i] = n[i];
        v[i] = 2.0 * n[i];
    }
    alpha[d] = -c;
    (alpha, v)
}

/// Mirror pair for a hyperbolic geodesic with spacelike normal `u`
/// (normalized to ⟨u,u⟩ = 1 for the form x² + y² − z²), oriented so that
/// ⟨u, x⟩ ≤ 0 is the inside.
fn lorentz_mirror(u: &[f64; 3]) -> (DVector<f64>, DVector<f64>) {
    let alpha = DVector::from_column_slice(&[2.0 * u[0], 2.0 * u[1], -2.0 * u[2]]);
    let v = DVector::from_column_slice(u);
    (alpha, v)
}

/// The quadrilateral with three right angles and one loxodromic vertex:
/// mirrors x = 0, y = 0 through the origin of the Klein disk, and two lines
/// x = tanh c, y = tanh c with sinh c = 6/5, whose intersection point lies
/// outside the disk.
pub fn loxodromic_quadrilateral() -> MirrorPolytope {
    let sh: f64 = 1.2;
    let ch = (1.0 + sh * sh).sqrt();
    let mirrors = [
        ("left", lorentz_mirror(&[-1.0, 0.0, 0.0])),
        ("bottom", lorentz_mirror(&[0.0, -1.0, 0.0])),
        ("right", lorentz_mirror(&[ch, 0.0, sh])),
        ("top", lorentz_mirror(&[0.0, ch, sh])),
    ];
    let facets = mirrors
        .into_iter()
        .map(|(name, (alpha, v))| Facet::new(name, alpha, v))
        .collect();
    MirrorPolytope::build(2, facets).expect("quadrilateral fixture is valid")
}

/// A regular right-angled pentagon in the Klein disk: five geodesics at
/// hyperbolic distance t from the origin, cosh²t = 1/(1 − cos(2π/5)),
/// adjacent mirrors orthogonal.
pub fn right_angled_pentagon() -> MirrorPolytope {
    let cos72 = (2.0 * std::f64::consts::PI / 5.0).cos();
    let ch = (1.0 / (1.0 - cos72)).sqrt();
    let sh = (ch * ch - 1.0).sqrt();
    let facets = (0..5)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / 5.0;
            let (alpha, v) = lorentz_mirror(&[ch * theta.cos(), ch * theta.sin(), sh]);
            Facet::new(format!("m{i}"), alpha, v)
        })
        .collect();
    MirrorPolytope::build(2, facets).expect("pentagon fixture is valid")
}

/// The abstract system of the right-angled pentagon: adjacent pairs labeled
/// 2, non-adjacent pairs ∞.
pub fn pentagon_system() -> CoxeterSystem {
    let mut labels = vec![vec![INF; 5]; 5];
    for (i, row) in labels.iter_mut().enumerate() {
        row[i] = fin(1);
    }
    for i in 0..5 {
        let j = (i + 1) % 5;
        labels[i][j] = fin(2);
        labels[j][i] = fin(2);
    }
    CoxeterSystem::from_labels(labels).expect("pentagon labels are valid")
}

/// The Euclidean unit square as a parabolic Coxeter polytope of S²:
/// mirrors x = 0, x = 1, y = 0, y = 1, group ~A_1 × ~A_1.
pub fn euclidean_square() -> MirrorPolytope {
    let mirrors = [
        ("x0", affine_mirror(&[-1.0, 0.0], 0.0)),
        ("x1", affine_mirror(&[1.0, 0.0], 1.0)),
        ("y0", affine_mirror(&[0.0, -1.0], 0.0)),
        ("y1", affine_mirror(&[0.0, 1.0], 1.0)),
    ];
    let facets = mirrors
        .into_iter()
        .map(|(name, (alpha, v))| Facet::new(name, alpha, v))
        .collect();
    MirrorPolytope::build(2, facets).expect("square fixture is valid")
}

/// A Euclidean triangular prism in S³: an equilateral-triangle cross
/// section (walls meeting at π/3) times a unit height (floor and ceiling
/// orthogonal to the walls). Parabolic, group ~A_2 × ~A_1.
pub fn euclidean_prism() -> MirrorPolytope {
    let mut facets = Vec::new();
    for i in 0..3 {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / 3.0;
        let (alpha, v) = affine_mirror(&[theta.cos(), theta.sin(), 0.0], 1.0);
        facets.push(Facet::new(format!("wall{i}"), alpha, v));
    }
    let (alpha, v) = affine_mirror(&[0.0, 0.0, -1.0], 0.0);
    facets.push(Facet::new("floor", alpha, v));
    let (alpha, v) = affine_mirror(&[0.0, 0.0, 1.0], 1.0);
    facets.push(Facet::new("ceiling", alpha, v));
    MirrorPolytope::build(3, facets).expect("prism fixture is valid")
}

/// A simplex polytope realizing an arbitrary Cartan matrix: the negative
/// orthant with α_i the coordinate functionals and v_j the columns of A.
pub fn simplex_from_cartan(names: &[&str], a: &nalgebra::DMatrix<f64>) -> MirrorPolytope {
    let r = a.nrows();
    let facets = (0..r)
        .map(|s| {
            let mut alpha = DVector::zeros(r);
            alpha[s] = 1.0;
            Facet::new(names[s], alpha, a.column(s).into_owned())
        })
        .collect();
    MirrorPolytope::build(r - 1, facets).expect("simplex from Cartan matrix is valid")
}

/// The (3,3,3) triangle with a non-symmetric Cartan matrix of negative
/// type: ridge products all 1, cyclic products −μ³ and −μ⁻³. Divisible,
/// with W affine of type ~A_2; the invariant convex set is a triangle.
pub fn kac_vinberg_triangle(mu: f64) -> MirrorPolytope {
    let a = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[
            2.0,
            -mu,
            -1.0 / mu,
            -1.0 / mu,
            2.0,
            -mu,
            -mu,
            -1.0 / mu,
            2.0,
        ],
    );
    simplex_from_cartan(&["a", "b", "c"], &a)
}

/// A (3,3,4) triangle with non-symmetrizable Cartan matrix: ridge products
/// 1, 1 and 2 = 4cos²(π/4), but unequal cyclic products, so the group
/// preserves no quadratic form. Perfect, loxodromic, W large.
pub fn skew_334_triangle() -> MirrorPolytope {
    let a = nalgebra::DMatrix::from_row_slice(
        3,
        3,
        &[
            2.0, -2.0, -1.0, //
            -0.5, 2.0, -1.0, //
            -2.0, -1.0, 2.0,
        ],
    );
    simplex_from_cartan(&["a", "b", "c"], &a)
}

/// The Coxeter system of a quasi-divisible triangular prism: lateral faces
/// 1, 2, 3 pairwise at π/3; triangle faces 4 and 5 disjoint from each
/// other; face 4 orthogonal to every lateral face; face 5 at π/3 to faces
/// 1 and 3 and orthogonal to face 2. Two facts pin this matrix down:
/// ⟨σ1,σ2,σ3⟩ is virtually Z² (labels (3,3,3)) and the vertex 1∩3∩5 is
/// parabolic (labels (3,3,3) again). A geometric realization with finite
/// covolume exists but comes from a moduli computation this crate does not
/// perform, so the fixture is combinatorial.
pub fn prism_system() -> CoxeterSystem {
    let i = fin(1);
    let o = fin(2);
    let t = fin(3);
    CoxeterSystem::new(
        vec!["1".into(), "2".into(), "3".into(), "4".into(), "5".into()],
        vec![
            vec![i, t, t, o, t],
            vec![t, i, t, o, o],
            vec![t, t, i, o, t],
            vec![o, o, o, i, INF],
            vec![t, o, t, INF, i],
        ],
    )
    .expect("prism labels are valid")
}

/// Combinatorial vertex data of the prism: the facet set through each of
/// its six vertices.
pub fn prism_vertex_sets() -> Vec<Subsystem> {
    [
        vec![0, 1, 3],
        vec![1, 2, 3],
        vec![0, 2, 3],
        vec![0, 1, 4],
        vec![1, 2, 4],
        vec![0, 2, 4],
    ]
    .into_iter()
    .map(Subsystem::new)
    .collect()
}

/// The parabolic vertex of the prism: facets 1 ∩ 3 ∩ 5 (indices 0, 2, 4).
pub fn prism_parabolic_vertex() -> Subsystem {
    Subsystem::new(vec![0, 2, 4])
}

/// Tits simplex of the A_3 system: the elliptic tiling fixture (|W| = 24,
/// longest element of length 6).
pub fn tits_a3() -> MirrorPolytope {
    let sys = crate::coxsys::system_from_edges(3, &[(0, 1, fin(3)), (1, 2, fin(3))]);
    MirrorPolytope::tits_simplex(&sys)
}

/// Every named fixture, for the CLI catalog writer.
pub enum FixtureKind {
    System(CoxeterSystem),
    Polytope(MirrorPolytope),
}

pub fn all_fixtures() -> Vec<(String, FixtureKind)> {
    let mut out: Vec<(String, FixtureKind)> = vec![
        ("triangle-237".into(), FixtureKind::System(triangle_237())),
        ("triangle-245".into(), FixtureKind::System(triangle_245())),
        ("tits-A~2".into(), FixtureKind::System(triangle_333())),
        ("prism-system".into(), FixtureKind::System(prism_system())),
        ("pentagon-system".into(), FixtureKind::System(pentagon_system())),
        (
            "quad-loxodromic".into(),
            FixtureKind::Polytope(loxodromic_quadrilateral()),
        ),
        (
            "pentagon-right-angled".into(),
            FixtureKind::Polytope(right_angled_pentagon()),
        ),
        ("square-euclidean".into(), FixtureKind::Polytope(euclidean_square())),
        ("prism-euclidean".into(), FixtureKind::Polytope(euclidean_prism())),
        (
            "triangle-kac-vinberg".into(),
            FixtureKind::Polytope(kac_vinberg_triangle(2.0)),
        ),
        ("triangle-334-skew".into(), FixtureKind::Polytope(skew_334_triangle())),
        ("tits-A3".into(), FixtureKind::Polytope(tits_a3())),
    ];
    for (name, sys) in quasi_lanner_triangles() {
        out.push((name.into(), FixtureKind::System(sys)));
    }
    for (name, sys) in crate::coxsys::spherical_catalog(8, 12) {
        out.push((format!("catalog-{name}"), FixtureKind::System(sys)));
    }
    for (name, sys) in crate::coxsys::affine_catalog(9) {
        out.push((format!("catalog-{name}"), FixtureKind::System(sys)));
    }
    out
}
