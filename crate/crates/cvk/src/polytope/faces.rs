//! Vertex enumeration and the face lattice, by brute force over facet
//! subsets. Desk scale: dimension ≤ 4, ≤ 16 facets.

use super::{Facet, PolytopeError, Vertex};
use crate::cartan::numerical_rank;
use crate::tol::EPS;
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

/// A face, keyed by its full active facet set.
#[derive(Debug, Clone)]
pub struct Face {
    /// Facets containing the face: S_f = { s : f ⊂ s }.
    pub active: Vec<usize>,
    /// Ids into the polytope's vertex list.
    pub vertex_ids: Vec<usize>,
    /// Dimension of the face (0 for vertices, d for the polytope itself).
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub faces: Vec<Face>,
}

impl FaceLattice {
    pub fn of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    /// Edges (dimension-1 faces) through a given vertex id.
    pub fn edges_at_vertex(&self, vertex_id: usize) -> Vec<&Face> {
        self.of_dim(1)
            .filter(|f| f.vertex_ids.contains(&vertex_id))
            .collect()
    }

    pub fn counts_by_dim(&self, d: usize) -> Vec<usize> {
        let mut counts = vec![0usize; d + 1];
        for f in &self.faces {
            counts[f.dim] += 1;
        }
        counts
    }
}

/// All vertices: null directions of rank-d facet subsets that satisfy every
/// inequality, deduplicated by distance between unit representatives.
pub(crate) fn enumerate_vertices(
    dim: usize,
    facets: &[Facet],
) -> Result<Vec<Vertex>, PolytopeError> {
    let n = dim + 1;
    let m = facets.len();
    let mut points: Vec<DVector<f64>> = Vec::new();

    let mut consider = |x: DVector<f64>| -> Result<(), PolytopeError> {
        let feasible = facets
            .iter()
            .all(|f| f.alpha.dot(&x) / f.alpha.norm() <= EPS);
        if !feasible {
            return Ok(());
        }
        for p in &points {
            let dist = (p - &x).norm();
            if dist < EPS {
                return Ok(()); // duplicate
            }
            if dist < 1e-6 {
                return Err(PolytopeError::DegenerateLattice(dist));
            }
        }
        points.push(x);
        Ok(())
    };

    if dim == 0 {
        for sign in [1.0, -1.0] {
            consider(DVector::from_column_slice(&[sign]))?;
        }
    } else {
        for subset in subsets_of_size(m, dim) {
            let stack = DMatrix::from_fn(dim, n, |i, j| facets[subset[i]].alpha[j]);
            if numerical_rank(&stack, EPS) != dim {
                continue;
            }
            let Some(null) = kernel_direction(&stack) else { continue };
            for sign in [1.0, -1.0] {
                consider(&null * sign)?;
            }
        }
    }

    let vertices = points
        .into_iter()
        .map(|point| {
            let active = (0..m)
                .filter(|&s| facets[s].alpha.dot(&point).abs() / facets[s].alpha.norm() <= EPS)
                .collect();
            Vertex { point, active }
        })
        .collect();
    Ok(vertices)
}

/// The complete lattice: faces are closures of facet subsets. For each
/// subset T the vertices lying on all of T span a face whose canonical key
/// is the intersection of their active sets; distinct keys are distinct
/// faces.
pub(crate) fn build_lattice(dim: usize, facets: &[Facet], vertices: &[Vertex]) -> FaceLattice {
    let n = dim + 1;
    let m = facets.len();
    assert!(m <= 16, "face lattice enumeration is 2^m; {m} facets is past desk scale");
    let mut by_key: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();

    for mask in 0u32..(1 << m) {
        let t: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let on: Vec<usize> = (0..vertices.len())
            .filter(|&vid| t.iter().all(|s| vertices[vid].active.contains(s)))
            .collect();
        if on.is_empty() {
            continue;
        }
        let mut key: Vec<usize> = vertices[on[0]].active.clone();
        for &vid in &on[1..] {
            key.retain(|s| vertices[vid].active.contains(s));
        }
        by_key.entry(key).or_insert(on);
    }

    let faces = by_key
        .into_iter()
        .map(|(active, vertex_ids)| {
            let pts = DMatrix::from_fn(n, vertex_ids.len(), |i, j| vertices[vertex_ids[j]].point[i]);
            let dim = numerical_rank(&pts, EPS) - 1;
            Face { active, vertex_ids, dim }
        })
        .collect();
    FaceLattice { faces }
}

/// Unit vector spanning the kernel of a matrix with nullity exactly 1,
/// via the smallest eigenpair of MᵀM (nalgebra's SVD is thin, so its `v_t`
/// does not carry null-space rows for wide matrices).
pub(crate) fn kernel_direction(m: &DMatrix<f64>) -> Option<DVector<f64>> {
    let gram = m.transpose() * m;
    let eig = gram.symmetric_eigen();
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let v = eig.eigenvectors.column(idx).into_owned();
    let residual = (m * &v).norm();
    if residual > 1e-7 * (1.0 + m.amax()) {
        return None;
    }
    Some(&v / v.norm())
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}
