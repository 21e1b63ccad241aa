//! Limit-set approximation by attractive fixed points of bi-proximal
//! elements, and the largest invariant convex set as an intersection of
//! half-spaces dual to them.

use super::{GroupElement, OrbitError};
use crate::classify::{is_irreducible_rep, polytope_class, PolytopeClass};
use crate::polytope::MirrorPolytope;
use crate::tol::PROXIMAL_GAP;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;

#[derive(Debug)]
pub struct LimitSetSample {
    /// Unit representatives in the closure of the cone over Ω (negative side
    /// of the chart covector).
    pub points: Vec<DVector<f64>>,
    /// Source word for each point.
    pub words: Vec<Vec<usize>>,
    pub attempted: usize,
    pub bi_proximal_found: usize,
}

/// Spectral data of one element: eigenvalues sorted by modulus descending,
/// or None if the bounded eigensolver did not converge (which only happens
/// away from proximal elements).
fn moduli_sorted(gamma: &DMatrix<f64>) -> Option<Vec<(f64, f64, f64)>> {
    // (modulus, re, im)
    let mut eigs: Vec<(f64, f64, f64)> = crate::cartan::bounded_complex_eigenvalues(gamma)?
        .into_iter()
        .map(|(re, im)| ((re * re + im * im).sqrt(), re, im))
        .collect();
    eigs.sort_by(|a, b| b.0.total_cmp(&a.0));
    Some(eigs)
}

/// Bi-proximal test: simple dominant eigenvalue for the element and its
/// inverse (relative spectral gaps above the threshold), with the dominant
/// eigenvalue real positive (positive proximality).
pub fn bi_proximal_data(gamma: &DMatrix<f64>) -> Option<(f64, f64)> {
    let eigs = moduli_sorted(gamma)?;
    let n = eigs.len();
    if n < 2 {
        return None;
    }
    let top_gap = (eigs[0].0 - eigs[1].0) / eigs[0].0;
    let bottom_gap = (eigs[n - 2].0 - eigs[n - 1].0) / eigs[n - 2].0.max(1e-300);
    if top_gap <= PROXIMAL_GAP || bottom_gap <= PROXIMAL_GAP {
        return None;
    }
    if eigs[0].2.abs() > 1e-9 * eigs[0].0 || eigs[0].1 <= 0.0 {
        return None;
    }
    if eigs[n - 1].2.abs() > 1e-9 * eigs[0].0 {
        return None;
    }
    Some((eigs[0].1, eigs[n - 1].1))
}

/// Unit eigenvector for a (real, simple) eigenvalue.
fn eigenvector_for(gamma: &DMatrix<f64>, lambda: f64) -> Option<DVector<f64>> {
    let n = gamma.nrows();
    let shifted = gamma - DMatrix::<f64>::identity(n, n) * lambda;
    let v = crate::polytope::kernel_direction(&shifted)?;
    let residual = (gamma * &v - &v * lambda).norm() / gamma.amax();
    if residual > 1e-7 {
        return None;
    }
    Some(v)
}

/// Samples random reduced words in the given length range, keeps the
/// bi-proximal ones, and returns the attractive fixed points of each element
/// and its inverse, sign-fixed into the cone over Ω by the chart covector.
pub fn limit_set_approx(
    p: &MirrorPolytope,
    n_points: usize,
    length_range: (usize, usize),
    seed: u64,
) -> Result<LimitSetSample, OrbitError> {
    let class = polytope_class(p).map_err(|e| OrbitError::Precondition(e.to_string()))?;
    if class.class != PolytopeClass::Loxodromic {
        return Err(OrbitError::Precondition(format!(
            "limit sets require a loxodromic polytope, found {:?}",
            class.class
        )));
    }
    let irr = is_irreducible_rep(p).map_err(|e| OrbitError::Precondition(e.to_string()))?;
    if !irr.representation_irreducible {
        return Err(OrbitError::Precondition(
            "limit sets require an irreducible representation".into(),
        ));
    }
    let chart = p.containing_affine_chart()?;
    let gens = p.reflections();
    let r = gens.len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);

    let mut points: Vec<DVector<f64>> = Vec::new();
    let mut words = Vec::new();
    let mut attempted = 0;
    let mut found = 0;
    let max_attempts = 200 * n_points.max(1);

    let push = |x: DVector<f64>, word: &[usize], points: &mut Vec<DVector<f64>>, words: &mut Vec<Vec<usize>>| {
        let fixed = if chart.dot(&x) > 0.0 { -x } else { x };
        if points.iter().all(|q| (q - &fixed).norm() > 1e-9) {
            points.push(fixed);
            words.push(word.to_vec());
        }
    };

    while points.len() < n_points && attempted < max_attempts {
        attempted += 1;
        let len = rng.random_range(length_range.0..=length_range.1);
        let mut word = Vec::with_capacity(len);
        let mut last = usize::MAX;
        for _ in 0..len {
            let mut s = rng.random_range(0..r);
            while s == last {
                s = rng.random_range(0..r);
            }
            word.push(s);
            last = s;
        }
        let mut gamma = DMatrix::<f64>::identity(p.dim() + 1, p.dim() + 1);
        for &s in &word {
            gamma *= &gens[s];
        }
        let Some((top, bottom)) = bi_proximal_data(&gamma) else { continue };
        found += 1;
        if let Some(x) = eigenvector_for(&gamma, top) {
            push(x, &word, &mut points, &mut words);
        }
        if let Some(x) = eigenvector_for(&gamma, bottom) {
            // Attractor of the inverse.
            let mut inv_word = word.clone();
            inv_word.reverse();
            push(x, &inv_word, &mut points, &mut words);
        }
    }
    if found == 0 {
        return Err(OrbitError::NoProximalFound { attempted });
    }
    Ok(LimitSetSample { points, words, attempted, bi_proximal_found: found })
}

/// One supporting half-space of Ω_max, from a bi-proximal element: the
/// hyperplane spanned by all eigenvectors except the bottom one, oriented to
/// contain the polytope's interior on its negative side.
#[derive(Debug)]
pub struct OmegaMaxApprox {
    /// Oriented covectors h with h(interior of P) < 0.
    pub halfspaces: Vec<DVector<f64>>,
    pub elements_used: usize,
}

pub fn omega_max_approx(
    p: &MirrorPolytope,
    elements: &[GroupElement],
) -> Result<OmegaMaxApprox, OrbitError> {
    let x0 = p.interior_point();
    let mut halfspaces = Vec::new();
    let mut used = 0;
    for e in elements {
        if e.length == 0 {
            continue;
        }
        let Some((_, bottom)) = bi_proximal_data(&e.matrix) else { continue };
        // Left eigenvector for the bottom eigenvalue spans the annihilator
        // of the attracting hyperplane H_γ.
        let Some(h) = eigenvector_for(&e.matrix.transpose(), bottom) else { continue };
        let at_interior = h.dot(&x0);
        if at_interior.abs() < 1e-12 {
            continue;
        }
        let h = if at_interior > 0.0 { -h } else { h };
        used += 1;
        halfspaces.push(h);
    }
    Ok(OmegaMaxApprox { halfspaces, elements_used: used })
}
