//! Projective Coxeter polytopes and the geometry of their reflection groups.
//!
//! A mirror polytope is a projective polytope `P` in the sphere `S^d` together
//! with a projective reflection `σ_s = Id − α_s ⊗ v_s` across each facet `s`.
//! When every dihedral angle is a submultiple of π (or zero), the reflections
//! generate a discrete group Γ that tiles a convex subset of `S^d` with copies
//! of `P`. This crate builds such polytopes, classifies their vertices and
//! Cartan matrices, decides cocompactness / finite covolume / convex
//! cocompactness / geometric finiteness of the action, locates the Zariski
//! closure of Γ, decides strict convexity of the invariant convex set,
//! truncates loxodromic vertices, enumerates orbit tilings, approximates limit
//! sets, and evaluates the Hilbert metric.
//!
//! The crate is organized around immutable value types; every operation is a
//! pure function, so all of it is safe to drive from multiple threads.

pub mod cartan;
pub mod classify;
pub mod cli;
pub mod coxsys;
pub mod fixtures;
pub mod io;
pub mod orbit;
pub mod polytope;
pub mod render;
pub mod report;
pub mod tol;
pub mod truncate;

pub use cartan::{CartanError, CartanMatrix, MatrixType};
pub use coxsys::{CoxeterSystem, CoxsysError, DiagramClass, DiagramKind, Label, Subsystem};
pub use polytope::{Facet, MirrorPolytope, PolytopeError};
