//! Word-length-bounded enumeration of the reflection group and the orbit
//! tiling of its invariant convex set.
//!
//! Elements are deduplicated at the matrix level: a quantized-entry key gives
//! O(1) hits, and a coarse trace bucket catches grid-boundary straddles. Two
//! matrices closer than the audit band are one element; two distinct-looking
//! matrices inside the same grid scale abort the enumeration rather than
//! corrupt counts.

mod hilbert;
mod limits;

pub use hilbert::{
    finsler_norm, hilbert_distance, BoundaryOracle, Chart, ConvexPolygon, EllipsoidBody,
    PolytopeBody, RayBisectBody,
};
pub use limits::{limit_set_approx, omega_max_approx, LimitSetSample, OmegaMaxApprox};

use crate::polytope::{MirrorPolytope, PolytopeError};
use crate::tol::{DEDUP_AUDIT, DEDUP_GRID, MAX_ELEMENTS, MAX_WORD_LEN, OVERLAP_TOL};
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("word length {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
    #[error("element cap exceeded: more than {0} elements")]
    ElementCapExceeded(usize),
    #[error("dedup ambiguity: two elements at matrix distance {0:.3e}")]
    DedupAmbiguity(f64),
    #[error("tile overlap detected: {0}")]
    OverlapDetected(String),
    #[error("no bi-proximal element found in {attempted} samples")]
    NoProximalFound { attempted: usize },
    #[error("point lies outside the convex body")]
    PointOutside,
    #[error("degenerate chord: the line does not cross the boundary twice")]
    DegenerateChord,
    #[error("precondition unmet: {0}")]
    Precondition(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// One group element: its matrix, a shortest word, and the word length.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub matrix: DMatrix<f64>,
    pub word: Vec<usize>,
    pub length: usize,
}

/// Matrix-level dedup store with collision audit.
struct DedupStore {
    grid: f64,
    audit: f64,
    exact: HashMap<Vec<i64>, usize>,
    trace_buckets: HashMap<i64, Vec<usize>>,
    matrices: Vec<DMatrix<f64>>,
}

impl DedupStore {
    fn new(grid: f64, audit: f64) -> Self {
        DedupStore {
            grid,
            audit,
            exact: HashMap::new(),
            trace_buckets: HashMap::new(),
            matrices: Vec::new(),
        }
    }

    fn quantize(&self, m: &DMatrix<f64>) -> Vec<i64> {
        m.iter().map(|&x| (x / self.grid).round() as i64).collect()
    }

    fn trace_key(trace: f64) -> i64 {
        (trace / 1e-3).round() as i64
    }

    /// Returns the existing index for a duplicate, or None for a new element.
    fn insert(&mut self, m: DMatrix<f64>) -> Result<Option<usize>, OrbitError> {
        let key = self.quantize(&m);
        if let Some(&idx) = self.exact.get(&key) {
            let dist = (&m - &self.matrices[idx]).amax();
            if dist <= self.audit {
                return Ok(Some(idx));
            }
            return Err(OrbitError::DedupAmbiguity(dist));
        }
        // Grid miss: scan nearby trace buckets for boundary straddles.
        let tk = Self::trace_key(m.trace());
        for probe in [tk - 1, tk, tk + 1] {
            if let Some(bucket) = self.trace_buckets.get(&probe) {
                for &idx in bucket {
                    let dist = (&m - &self.matrices[idx]).amax();
                    if dist <= self.audit {
                        self.exact.insert(key, idx);
                        return Ok(Some(idx));
                    }
                    if dist <= self.grid {
                        return Err(OrbitError::DedupAmbiguity(dist));
                    }
                }
            }
        }
        let idx = self.matrices.len();
        self.trace_buckets.entry(tk).or_default().push(idx);
        self.exact.insert(key, idx);
        self.matrices.push(m);
        Ok(None)
    }
}

/// BFS over words, shortest word first, generators in index order, so the
/// output is canonical: sorted by length, then lexicographically.
pub fn enumerate_group(p: &MirrorPolytope, max_len: usize) -> Result<Vec<GroupElement>, OrbitError> {
    enumerate_group_with(p, max_len, DEDUP_GRID, DEDUP_AUDIT, MAX_ELEMENTS)
}

pub fn enumerate_group_with(
    p: &MirrorPolytope,
    max_len: usize,
    grid: f64,
    audit: f64,
    element_cap: usize,
) -> Result<Vec<GroupElement>, OrbitError> {
    if max_len > MAX_WORD_LEN {
        return Err(OrbitError::CapExceeded(max_len, MAX_WORD_LEN));
    }
    let gens = p.reflections();
    let n = p.dim() + 1;
    let mut store = DedupStore::new(grid, audit);
    let identity = DMatrix::<f64>::identity(n, n);
    store.insert(identity.clone())?;
    let mut elements = vec![GroupElement { matrix: identity, word: Vec::new(), length: 0 }];
    let mut frontier: Vec<usize> = vec![0];

    for len in 1..=max_len {
        let mut next = Vec::new();
        for &idx in &frontier {
            for (s, gen) in gens.iter().enumerate() {
                // s·s = 1: skip the immediate backtrack.
                if elements[idx].word.last() == Some(&s) {
                    continue;
                }
                let m = &elements[idx].matrix * gen;
                if store.insert(m.clone())?.is_none() {
                    let mut word = elements[idx].word.clone();
                    word.push(s);
                    elements.push(GroupElement { matrix: m, word, length: len });
                    next.push(elements.len() - 1);
                    if elements.len() > element_cap {
                        return Err(OrbitError::ElementCapExceeded(element_cap));
                    }
                }
            }
        }
        if next.is_empty() {
            break; // the group is finite and closed below max_len
        }
        frontier = next;
    }
    Ok(elements)
}

/// Count of elements per word length.
pub fn counts_by_length(elements: &[GroupElement], max_len: usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_len + 1];
    for e in elements {
        if e.length <= max_len {
            counts[e.length] += 1;
        }
    }
    counts
}

/// One tile: a group element index and the images of the polytope vertices.
#[derive(Debug, Clone)]
pub struct Tile {
    pub element: usize,
    pub vertex_images: Vec<DVector<f64>>,
}

#[derive(Debug)]
pub struct TilingSnapshot {
    pub elements: Vec<GroupElement>,
    pub tiles: Vec<Tile>,
    /// Images of the elliptic vertices (the ones inside Ω) plus interior
    /// samples: a point cloud approximating the invariant convex set.
    pub hull_sample: Vec<DVector<f64>>,
    pub depth: usize,
    /// True when the group closed before the depth cap (finite group).
    pub closed: bool,
    pub overlap_samples_checked: usize,
}

/// Images γ(P) for all γ up to the word-length bound, with an
/// interior-disjointness sampling check: a sampled interior point of one
/// tile must not lie strictly inside another.
pub fn orbit_tiles(
    p: &MirrorPolytope,
    max_len: usize,
    samples_per_tile: usize,
    seed: u64,
) -> Result<TilingSnapshot, OrbitError> {
    orbit_tiles_with(p, max_len, samples_per_tile, seed, DEDUP_GRID)
}

/// Variant with an explicit dedup grid (the CLI's `--grid`).
pub fn orbit_tiles_with(
    p: &MirrorPolytope,
    max_len: usize,
    samples_per_tile: usize,
    seed: u64,
    grid: f64,
) -> Result<TilingSnapshot, OrbitError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let elements = enumerate_group_with(p, max_len, grid, DEDUP_AUDIT.min(grid / 10.0), MAX_ELEMENTS)?;
    let closed = elements.iter().map(|e| e.length).max().unwrap_or(0) < max_len;

    let tiles: Vec<Tile> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| Tile {
            element: i,
            vertex_images: p.vertices().iter().map(|v| &e.matrix * &v.point).collect(),
        })
        .collect();

    // Elliptic vertices lie inside Ω; their orbit samples the hull.
    let elliptic: Vec<usize> = (0..p.vertices().len())
        .filter(|&vid| {
            crate::classify::classify_vertex(p, vid)
                .map(|r| r.class == crate::classify::VertexClass::Elliptic)
                .unwrap_or(false)
        })
        .collect();
    let interior = p.interior_samples(samples_per_tile.max(1), &mut rng);
    let mut hull_sample = Vec::new();
    for e in &elements {
        for &vid in &elliptic {
            hull_sample.push(&e.matrix * &p.vertices()[vid].point);
        }
        for x in &interior {
            hull_sample.push(&e.matrix * x);
        }
    }

    // Disjointness sampling.
    let inverses: Vec<DMatrix<f64>> = elements
        .iter()
        .map(|e| {
            e.matrix
                .clone()
                .try_inverse()
                .expect("group elements are invertible")
        })
        .collect();
    let mut checked = 0;
    for (gi, e) in elements.iter().enumerate() {
        for x in &interior {
            let y = &e.matrix * x;
            checked += 1;
            for (di, inv) in inverses.iter().enumerate() {
                if di == gi {
                    continue;
                }
                let back = inv * &y;
                if p.strictly_contains(&back, OVERLAP_TOL) {
                    return Err(OrbitError::OverlapDetected(format!(
                        "interior sample of tile {gi} lies strictly inside tile {di}"
                    )));
                }
            }
        }
    }

    Ok(TilingSnapshot {
        elements,
        tiles,
        hull_sample,
        depth: max_len,
        closed,
        overlap_samples_checked: checked,
    })
}
