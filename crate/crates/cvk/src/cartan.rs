//! Cartan matrices and their Perron–Frobenius type.
//!
//! A Cartan matrix here is a real square matrix with 2 on the diagonal,
//! non-positive off-diagonal entries, and a symmetric zero pattern. For an
//! irreducible one, `2I − A` is an irreducible non-negative matrix, so it has
//! a simple dominant eigenvalue ρ with positive eigenvector, and
//! `λ_A = 2 − ρ` is the distinguished real eigenvalue whose sign splits the
//! positive / zero / negative trichotomy. For symmetric A this is just the
//! smallest eigenvalue.

use crate::tol::EPS;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CartanError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("diagonal entry a[{0}][{0}] must be 2")]
    BadDiagonal(usize),
    #[error("zero pattern is asymmetric at ({0},{1})")]
    AsymmetricZeroPattern(usize, usize),
    #[error("off-diagonal entry a[{0}][{1}] must be non-positive")]
    PositiveOffDiagonal(usize, usize),
    #[error("index set is not an irreducible component")]
    NotAComponent,
    #[error("eigenvalue solver did not converge")]
    EigenFailure,
}

/// Positive / zero / negative type; `Mixed` when components disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixType {
    Positive,
    Zero,
    Negative,
    Mixed,
}

/// λ_A for one irreducible component, with the solver residual
/// σ_min(A − λI) that reports carry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalEigenvalue {
    pub lambda: f64,
    pub residual: f64,
}

/// Per-component type data plus the aggregate verdict.
#[derive(Debug, Clone, Serialize)]
pub struct TypeReport {
    pub components: Vec<ComponentType>,
    pub aggregate: MatrixType,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentType {
    pub members: Vec<usize>,
    pub kind: MatrixType,
    pub lambda: f64,
    pub residual: f64,
}

/// A validated Cartan matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanMatrix {
    m: DMatrix<f64>,
}

impl CartanMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self, CartanError> {
        Self::with_tolerance(m, EPS)
    }

    pub fn with_tolerance(m: DMatrix<f64>, eps: f64) -> Result<Self, CartanError> {
        if !m.is_square() {
            return Err(CartanError::NotSquare);
        }
        let n = m.nrows();
        for i in 0..n {
            if (m[(i, i)] - 2.0).abs() > eps {
                return Err(CartanError::BadDiagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let a = m[(i, j)];
                let b = m[(j, i)];
                if (a.abs() <= eps) != (b.abs() <= eps) {
                    return Err(CartanError::AsymmetricZeroPattern(i, j));
                }
                if a > eps {
                    return Err(CartanError::PositiveOffDiagonal(i, j));
                }
            }
        }
        Ok(CartanMatrix { m })
    }

    pub fn size(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| (self.m[(i, j)] - self.m[(j, i)]).abs() <= EPS))
    }

    /// Partition into irreducible diagonal blocks: connected components of
    /// the graph with edges where a_ij ≠ 0.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
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
                    if !seen[j] && i != j && self.m[(i, j)].abs() > EPS {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn block(&self, comp: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(comp.len(), comp.len(), |i, j| self.m[(comp[i], comp[j])])
    }

    fn is_component(&self, comp: &[usize]) -> bool {
        self.components().iter().any(|c| c == comp)
    }

    /// λ_A of an irreducible component: the real, simple eigenvalue 2 − ρ of
    /// A where ρ is the spectral radius of 2I − A.
    ///
    /// Symmetric blocks go through the symmetric solver (λ_A is then the
    /// smallest eigenvalue); general blocks through the dense complex solver
    /// using λ_A = 2 − max_i |2 − λ_i|. Only the cyclic products of A matter,
    /// so A_P need not be symmetric.
    pub fn minimal_eigenvalue(&self, comp: &[usize]) -> Result<MinimalEigenvalue, CartanError> {
        if !self.is_component(comp) {
            return Err(CartanError::NotAComponent);
        }
        let a = self.block(comp);
        let lambda = block_min_eigenvalue(&a)?;
        // Residual: smallest singular value of A − λI; zero iff λ is exact.
        let n = a.nrows();
        let shifted = &a - DMatrix::<f64>::identity(n, n) * lambda;
        let sv = shifted.svd(false, false).singular_values;
        let residual = sv.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(MinimalEigenvalue { lambda, residual })
    }

    /// Perron eigenvector of an irreducible component: the positive vector μ
    /// with A μ = λ_A μ, normalized to unit sup-norm.
    pub fn perron_vector(&self, comp: &[usize]) -> Result<DVector<f64>, CartanError> {
        if !self.is_component(comp) {
            return Err(CartanError::NotAComponent);
        }
        let a = self.block(comp);
        let n = a.nrows();
        if n == 1 {
            return Ok(DVector::from_element(1, 1.0));
        }
        // Power iteration on B = 3I − A, a primitive non-negative matrix
        // (positive diagonal), whose dominant eigenvector is μ.
        let b = DMatrix::<f64>::identity(n, n) * 3.0 - &a;
        let mut v = DVector::from_element(n, 1.0);
        let mut prev = f64::NAN;
        for _ in 0..200_000 {
            let w = &b * &v;
            let norm = w.amax();
            if norm == 0.0 {
                return Err(CartanError::EigenFailure);
            }
            v = w / norm;
            if (norm - prev).abs() <= 1e-15 * norm.abs().max(1.0) {
                let lam = 3.0 - norm;
                let resid = (&a * &v - &v * lam).amax();
                if resid <= 1e-9 * (1.0 + a.amax()) && v.iter().all(|&x| x > 0.0) {
                    return Ok(v);
                }
            }
            prev = norm;
        }
        Err(CartanError::EigenFailure)
    }

    /// Per-component positive/zero/negative type, with the aggregate verdict.
    /// A non-uniform aggregate is `Mixed`, a first-class outcome.
    pub fn cartan_type(&self) -> Result<TypeReport, CartanError> {
        self.cartan_type_with(EPS)
    }

    pub fn cartan_type_with(&self, eps: f64) -> Result<TypeReport, CartanError> {
        let mut components = Vec::new();
        for comp in self.components() {
            let me = self.minimal_eigenvalue(&comp)?;
            let kind = if me.lambda > eps {
                MatrixType::Positive
            } else if me.lambda >= -eps {
                MatrixType::Zero
            } else {
                MatrixType::Negative
            };
            components.push(ComponentType {
                members: comp,
                kind,
                lambda: me.lambda,
                residual: me.residual,
            });
        }
        let first = components[0].kind;
        let aggregate = if components.iter().all(|c| c.kind == first) {
            first
        } else {
            MatrixType::Mixed
        };
        Ok(TypeReport { components, aggregate })
    }

    /// Rank by singular values with threshold eps · σ_max.
    pub fn numerical_rank(&self) -> usize {
        numerical_rank(&self.m, EPS)
    }
}

/// Complex eigenvalues as (re, im) pairs, via a Schur decomposition with a
/// bounded iteration count. The unbounded solver can spin forever on
/// matrices with eigenvalue pairs of equal modulus (rotations), so
/// non-convergence is surfaced as None instead.
pub(crate) fn bounded_complex_eigenvalues(m: &DMatrix<f64>) -> Option<Vec<(f64, f64)>> {
    let schur = m.clone().try_schur(1e-14, 50_000)?;
    let eigs = schur.complex_eigenvalues();
    Some(eigs.iter().map(|l| (l.re, l.im)).collect())
}

/// λ_A of one irreducible block.
fn block_min_eigenvalue(a: &DMatrix<f64>) -> Result<f64, CartanError> {
    let n = a.nrows();
    if n == 1 {
        return Ok(a[(0, 0)]);
    }
    let symmetric = (0..n).all(|i| (0..n).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= EPS));
    if symmetric {
        let sym = (a + a.transpose()) * 0.5;
        let eigs = sym.symmetric_eigen().eigenvalues;
        Ok(eigs.iter().copied().fold(f64::INFINITY, f64::min))
    } else {
        let eigs = bounded_complex_eigenvalues(a).ok_or(CartanError::EigenFailure)?;
        let rho = eigs
            .iter()
            .map(|&(re, im)| ((2.0 - re).powi(2) + im.powi(2)).sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        if !rho.is_finite() {
            return Err(CartanError::EigenFailure);
        }
        Ok(2.0 - rho)
    }
}

/// Numerical rank of an arbitrary real matrix.
pub fn numerical_rank(m: &DMatrix<f64>, eps: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > eps * max).count()
}
