//! Combinatorial Coxeter systems.
//!
//! A Coxeter system is a finite generator set `S` and a symmetric label matrix
//! `M` with `M_ss = 1` and off-diagonal entries in `{2, 3, …} ∪ {∞}`. The Gram
//! matrix `(−2·cos(π/M_st))_st` classifies each irreducible component as
//! spherical (positive definite), affine (positive semidefinite with kernel),
//! or large (everything else).

mod catalog;
mod relhyp;

pub use catalog::{affine_catalog, catalog_name, spherical_catalog};
pub use relhyp::{relative_hyperbolicity_check, CapraceCondition, RelHypVerdict};

use crate::tol::EPS;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// A Coxeter label `M_st`: an integer ≥ 1 or ∞.
///
/// ∞ is a distinguished sentinel, never a float.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    /// The Gram-matrix entry −2·cos(π/m), with ∞ ↦ −2.
    pub fn gram_entry(self) -> f64 {
        match self {
            Label::Finite(m) => -2.0 * (std::f64::consts::PI / m as f64).cos(),
            Label::Infinite => -2.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Label::Infinite)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CoxsysError {
    #[error("label matrix is not square over the generator list")]
    NotSquare,
    #[error("label matrix is not symmetric at ({0},{1})")]
    NonSymmetric(usize, usize),
    #[error("diagonal label M[{0}][{0}] must be 1")]
    BadDiagonal(usize),
    #[error("off-diagonal label M[{0}][{1}] must be at least 2")]
    BadLabel(usize, usize),
    #[error("system must have rank at least 1")]
    EmptySystem,
    #[error("operation requires an irreducible system")]
    NotIrreducible,
    #[error("peripheral {0:?} is not a subsystem of the given system")]
    BadPeripheral(Vec<usize>),
}

/// A subset of the generators of a parent system, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subsystem(pub Vec<usize>);

impl Subsystem {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subsystem(members)
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn contains_all(&self, other: &Subsystem) -> bool {
        other.0.iter().all(|g| self.contains(*g))
    }

    pub fn is_disjoint(&self, other: &Subsystem) -> bool {
        self.0.iter().all(|g| !other.contains(*g))
    }

    pub fn union(&self, other: &Subsystem) -> Subsystem {
        let mut m = self.0.clone();
        m.extend_from_slice(&other.0);
        Subsystem::new(m)
    }

    pub fn intersection(&self, other: &Subsystem) -> Subsystem {
        Subsystem(self.0.iter().copied().filter(|g| other.contains(*g)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Spherical / affine / large trichotomy for an irreducible system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramKind {
    Spherical,
    Affine,
    Large,
}

/// Classification of one irreducible component, with the catalog name when
/// the diagram matches a listed spherical or affine type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramClass {
    pub kind: DiagramKind,
    pub name: Option<String>,
    /// Smallest Gram eigenvalue, the quantity the trichotomy tests.
    pub min_eigenvalue: f64,
}

/// A validated Coxeter system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterSystem {
    generators: Vec<String>,
    labels: Vec<Vec<Label>>,
}

impl CoxeterSystem {
    /// Validates and builds a system from a generator list and label matrix.
    pub fn new(generators: Vec<String>, labels: Vec<Vec<Label>>) -> Result<Self, CoxsysError> {
        let n = generators.len();
        if n == 0 {
            return Err(CoxsysError::EmptySystem);
        }
        if labels.len() != n || labels.iter().any(|row| row.len() != n) {
            return Err(CoxsysError::NotSquare);
        }
        for i in 0..n {
            if labels[i][i] != Label::Finite(1) {
                return Err(CoxsysError::BadDiagonal(i));
            }
            for j in 0..n {
                if labels[i][j] != labels[j][i] {
                    return Err(CoxsysError::NonSymmetric(i, j));
                }
                if i != j {
                    if let Label::Finite(m) = labels[i][j] {
                        if m < 2 {
                            return Err(CoxsysError::BadLabel(i, j));
                        }
                    }
                }
            }
        }
        Ok(CoxeterSystem { generators, labels })
    }

    /// Builds a system with generators named `s0, s1, …` from the upper
    /// triangle of labels alone.
    pub fn from_labels(labels: Vec<Vec<Label>>) -> Result<Self, CoxsysError> {
        let names = (0..labels.len()).map(|i| format!("s{i}")).collect();
        CoxeterSystem::new(names, labels)
    }

    /// Rank-3 system with the given off-diagonal labels (a "triangle group").
    pub fn triangle(p: Label, q: Label, r: Label) -> Self {
        let one = Label::Finite(1);
        CoxeterSystem::from_labels(vec![
            vec![one, p, q],
            vec![p, one, r],
            vec![q, r, one],
        ])
        .expect("triangle labels are valid")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[i][j]
    }

    pub fn labels(&self) -> &[Vec<Label>] {
        &self.labels
    }

    /// The Gram matrix Cos(W): diagonal 2, entry −2·cos(π/M_st), ∞ ↦ −2.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let n = self.rank();
        DMatrix::from_fn(n, n, |i, j| self.labels[i][j].gram_entry())
    }

    /// Connected components of the Coxeter graph (edges where M_st ≠ 2).
    pub fn irreducible_components(&self) -> Vec<Subsystem> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(i) = stack.pop() {
                comp.push(i);
                for j in 0..n {
                    if !seen[j] && i != j && self.labels[i][j] != Label::Finite(2) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comps.push(Subsystem::new(comp));
        }
        comps
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible_components().len() == 1
    }

    /// Restriction of the label matrix to a subset of generators.
    pub fn restrict(&self, sub: &Subsystem) -> CoxeterSystem {
        let gens = sub.0.iter().map(|&i| self.generators[i].clone()).collect();
        let labels = sub
            .0
            .iter()
            .map(|&i| sub.0.iter().map(|&j| self.labels[i][j]).collect())
            .collect();
        CoxeterSystem { generators: gens, labels }
    }

    /// Eigen-test classification of an irreducible system, with the catalog
    /// name when the diagram is a listed spherical or affine one.
    pub fn classify_irreducible(&self) -> Result<DiagramClass, CoxsysError> {
        if !self.is_irreducible() {
            return Err(CoxsysError::NotIrreducible);
        }
        let gram = self.gram_matrix();
        let eigs = gram.symmetric_eigen().eigenvalues;
        let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let kind = if min > EPS {
            DiagramKind::Spherical
        } else if min >= -EPS {
            DiagramKind::Affine
        } else {
            DiagramKind::Large
        };
        let name = catalog_name(self).filter(|_| kind != DiagramKind::Large);
        Ok(DiagramClass { kind, name, min_eigenvalue: min })
    }

    /// Per-component classification of an arbitrary system.
    pub fn classify_components(&self) -> Vec<(Subsystem, DiagramClass)> {
        self.irreducible_components()
            .into_iter()
            .map(|c| {
                let class = self
                    .restrict(&c)
                    .classify_irreducible()
                    .expect("restriction to a component is irreducible");
                (c, class)
            })
            .collect()
    }

    /// All components spherical (W finite).
    pub fn is_spherical(&self) -> bool {
        self.classify_components()
            .iter()
            .all(|(_, c)| c.kind == DiagramKind::Spherical)
    }

    /// All components irreducible affine.
    pub fn is_affine(&self) -> bool {
        self.classify_components()
            .iter()
            .all(|(_, c)| c.kind == DiagramKind::Affine)
    }

    /// All components affine or spherical.
    pub fn is_euclidean(&self) -> bool {
        self.classify_components()
            .iter()
            .all(|(_, c)| c.kind != DiagramKind::Large)
    }

    /// T^⊥ = { s ∈ S∖T : M_st = 2 for all t ∈ T }.
    pub fn orthogonal_complement(&self, t: &Subsystem) -> Subsystem {
        let members = (0..self.rank())
            .filter(|&s| !t.contains(s))
            .filter(|&s| t.0.iter().all(|&u| self.labels[s][u] == Label::Finite(2)))
            .collect();
        Subsystem::new(members)
    }

    /// Two subsystems are orthogonal when every cross label is 2.
    pub fn are_orthogonal(&self, a: &Subsystem, b: &Subsystem) -> bool {
        a.0.iter()
            .all(|&s| b.0.iter().all(|&t| s == t || self.labels[s][t] == Label::Finite(2)))
    }

    /// All subsets U such that W_U is infinite and every proper maximal subset
    /// is spherical. Equivalently the irreducible affine and Lannér subsystems.
    ///
    /// Exhaustive over subsets; exponential in the rank, desk scale only.
    pub fn just_infinite_subsystems(&self) -> Vec<Subsystem> {
        let n = self.rank();
        assert!(n <= 16, "subset enumeration is exponential; rank {n} is past desk scale");
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub = Subsystem::new(members);
            if self.restrict(&sub).is_spherical() {
                continue;
            }
            let just = sub.0.iter().all(|&drop| {
                let smaller =
                    Subsystem::new(sub.0.iter().copied().filter(|&g| g != drop).collect());
                smaller.is_empty() || self.restrict(&smaller).is_spherical()
            });
            if just {
                out.push(sub);
            }
        }
        out
    }

    /// All subsystems (as index sets) that are affine, optionally bounded
    /// below in rank. Used by the relative-hyperbolicity checker.
    pub(crate) fn affine_subsystems(&self, min_rank: usize) -> Vec<Subsystem> {
        let n = self.rank();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if members.len() < min_rank {
                continue;
            }
            let sub = Subsystem::new(members);
            if self.restrict(&sub).is_affine() {
                out.push(sub);
            }
        }
        out
    }

    /// All irreducible infinite (affine or large) subsystems.
    pub(crate) fn irreducible_infinite_subsystems(&self) -> Vec<Subsystem> {
        let n = self.rank();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub = Subsystem::new(members);
            let restricted = self.restrict(&sub);
            if restricted.is_irreducible() && !restricted.is_spherical() {
                out.push(sub);
            }
        }
        out
    }

    /// Canonical key used to compare systems for exact equality of labels.
    pub fn label_key(&self) -> Vec<Vec<Label>> {
        self.labels.clone()
    }

    /// True when `sub`'s members are valid generator indices.
    pub fn admits(&self, sub: &Subsystem) -> bool {
        sub.0.iter().all(|&g| g < self.rank())
    }
}

/// Convenience constructor for labels.
pub fn fin(m: u32) -> Label {
    Label::Finite(m)
}

/// Convenience constant for the infinite label.
pub const INF: Label = Label::Infinite;

/// Builds the label matrix of a simply-laced path / custom edge list.
///
/// `edges` lists `(i, j, label)`; everything else off-diagonal is 2.
pub fn system_from_edges(rank: usize, edges: &[(usize, usize, Label)]) -> CoxeterSystem {
    let mut labels = vec![vec![Label::Finite(2); rank]; rank];
    for (i, row) in labels.iter_mut().enumerate() {
        row[i] = Label::Finite(1);
    }
    for &(i, j, m) in edges {
        labels[i][j] = m;
        labels[j][i] = m;
    }
    CoxeterSystem::from_labels(labels).expect("edge list produces a valid label matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_system_is_valid() {
        let sys = CoxeterSystem::from_labels(vec![vec![fin(1)]]).unwrap();
        assert_eq!(sys.rank(), 1);
        assert!(sys.is_spherical());
    }

    #[test]
    fn triangle_2_3_7_is_valid() {
        let sys = CoxeterSystem::triangle(fin(2), fin(3), fin(7));
        assert_eq!(sys.rank(), 3);
        assert_eq!(sys.label(0, 1), fin(2));
        assert_eq!(sys.label(1, 2), fin(7));
    }

    #[test]
    fn off_diagonal_one_is_rejected() {
        let bad = CoxeterSystem::from_labels(vec![vec![fin(1), fin(1)], vec![fin(1), fin(1)]]);
        assert_eq!(bad, Err(CoxsysError::BadLabel(0, 1)));
    }

    #[test]
    fn asymmetric_labels_are_rejected() {
        let bad = CoxeterSystem::from_labels(vec![vec![fin(1), fin(3)], vec![fin(4), fin(1)]]);
        assert_eq!(bad, Err(CoxsysError::NonSymmetric(0, 1)));
    }

    #[test]
    fn bad_diagonal_is_rejected() {
        let bad = CoxeterSystem::from_labels(vec![vec![fin(2)]]);
        assert_eq!(bad, Err(CoxsysError::BadDiagonal(0)));
    }

    #[test]
    fn gram_entries_match_the_cosine_rule() {
        let sys = CoxeterSystem::triangle(fin(2), fin(3), INF);
        let g = sys.gram_matrix();
        assert!((g[(0, 0)] - 2.0).abs() < 1e-15);
        assert!(g[(0, 1)].abs() < 1e-15); // cos(π/2) = 0
        assert!((g[(1, 2)] - -2.0).abs() < 1e-15); // ∞ ↦ −2
        let sys2 = CoxeterSystem::triangle(fin(3), fin(2), fin(2));
        assert!((sys2.gram_matrix()[(0, 1)] - -1.0).abs() < 1e-15); // −2cos(π/3) = −1
    }

    #[test]
    fn components_of_an_edgeless_graph_are_singletons() {
        let sys = system_from_edges(3, &[]);
        let comps = sys.irreducible_components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn connected_triangle_is_one_component() {
        let sys = CoxeterSystem::triangle(fin(3), fin(3), fin(3));
        assert_eq!(sys.irreducible_components().len(), 1);
    }

    #[test]
    fn two_disjoint_edges_give_two_components() {
        let sys = system_from_edges(4, &[(0, 1, fin(3)), (2, 3, fin(5))]);
        let comps = sys.irreducible_components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn i2_7_is_spherical_with_name() {
        let sys = system_from_edges(2, &[(0, 1, fin(7))]);
        let class = sys.classify_irreducible().unwrap();
        assert_eq!(class.kind, DiagramKind::Spherical);
        assert_eq!(class.name.as_deref(), Some("I_2(7)"));
    }

    #[test]
    fn affine_a1_is_affine_with_name() {
        let sys = system_from_edges(2, &[(0, 1, INF)]);
        let class = sys.classify_irreducible().unwrap();
        assert_eq!(class.kind, DiagramKind::Affine);
        assert_eq!(class.name.as_deref(), Some("~A_1"));
    }

    #[test]
    fn triangle_2_3_7_is_large() {
        // 1/2 + 1/3 + 1/7 < 1. Cross-check the eigen test against the
        // determinant of the Gram matrix, computed by cofactor expansion.
        let sys = CoxeterSystem::triangle(fin(2), fin(3), fin(7));
        let class = sys.classify_irreducible().unwrap();
        assert_eq!(class.kind, DiagramKind::Large);
        let g = sys.gram_matrix();
        let det = g[(0, 0)] * (g[(1, 1)] * g[(2, 2)] - g[(1, 2)] * g[(2, 1)])
            - g[(0, 1)] * (g[(1, 0)] * g[(2, 2)] - g[(1, 2)] * g[(2, 0)])
            + g[(0, 2)] * (g[(1, 0)] * g[(2, 1)] - g[(1, 1)] * g[(2, 0)]);
        // Positive 2×2 minors but negative determinant: exactly one negative
        // eigenvalue, consistent with Large.
        assert!(det < 0.0);
        assert!(class.min_eigenvalue < 0.0);
    }

    #[test]
    fn spherical_affine_euclidean_predicates() {
        let a1a1 = system_from_edges(2, &[]);
        assert!(a1a1.is_spherical() && a1a1.is_euclidean() && !a1a1.is_affine());

        let affine_a2 = CoxeterSystem::triangle(fin(3), fin(3), fin(3));
        assert!(affine_a2.is_affine() && !affine_a2.is_spherical() && affine_a2.is_euclidean());

        let large = CoxeterSystem::triangle(fin(2), fin(3), fin(7));
        assert!(!large.is_spherical() && !large.is_affine() && !large.is_euclidean());
    }

    #[test]
    fn orthogonal_complement_by_definition() {
        let sys = system_from_edges(3, &[]);
        let all = Subsystem::new(vec![0, 1, 2]);
        assert!(sys.orthogonal_complement(&all).is_empty());
        let one = Subsystem::new(vec![1]);
        assert_eq!(sys.orthogonal_complement(&one), Subsystem::new(vec![0, 2]));
    }

    #[test]
    fn prism_orthogonal_complement_by_direct_scan() {
        // In the prism system, the triangle face 4 commutes with every
        // lateral face, so {1,2,3}^⊥ = {4}.
        let sys = crate::fixtures::prism_system();
        let lateral = Subsystem::new(vec![0, 1, 2]);
        assert_eq!(sys.orthogonal_complement(&lateral), Subsystem::new(vec![3]));
    }

    #[test]
    fn just_infinite_subsystems_of_small_systems() {
        // Spherical system: nothing infinite.
        let b3 = system_from_edges(3, &[(0, 1, fin(4)), (1, 2, fin(3))]);
        assert!(b3.just_infinite_subsystems().is_empty());

        // (3,3,3): the full system is affine ~A_2; every rank-2 subsystem is
        // I_2(3), finite.
        let a2t = CoxeterSystem::triangle(fin(3), fin(3), fin(3));
        assert_eq!(a2t.just_infinite_subsystems(), vec![Subsystem::new(vec![0, 1, 2])]);

        // (2,3,7): the full system is Lannér.
        let hyp = CoxeterSystem::triangle(fin(2), fin(3), fin(7));
        assert_eq!(hyp.just_infinite_subsystems(), vec![Subsystem::new(vec![0, 1, 2])]);
    }

    #[test]
    fn just_infinite_members_verify_their_definition() {
        let sys = system_from_edges(
            5,
            &[
                (0, 1, fin(3)),
                (1, 2, fin(3)),
                (0, 2, fin(3)),
                (3, 4, INF),
            ],
        );
        let justs = sys.just_infinite_subsystems();
        assert!(!justs.is_empty());
        for u in &justs {
            assert!(!sys.restrict(u).is_spherical());
            for &drop in &u.0 {
                let smaller = Subsystem::new(u.0.iter().copied().filter(|&g| g != drop).collect());
                if !smaller.is_empty() {
                    assert!(sys.restrict(&smaller).is_spherical());
                }
            }
        }
        // Non-returned infinite subsystems contain an infinite proper subsystem.
        for mask in 1u32..(1 << 5) {
            let members: Vec<usize> = (0..5).filter(|i| mask >> i & 1 == 1).collect();
            let sub = Subsystem::new(members);
            if sys.restrict(&sub).is_spherical() || justs.contains(&sub) {
                continue;
            }
            let has_infinite_proper = (1u32..(1 << sub.len()) - 1).any(|m| {
                let inner: Vec<usize> =
                    sub.0.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &g)| g).collect();
                !inner.is_empty() && !sys.restrict(&Subsystem::new(inner)).is_spherical()
            });
            assert!(has_infinite_proper, "{sub:?} is infinite but not just-infinite");
        }
    }
}
