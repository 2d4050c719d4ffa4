//! Error type shared across the library.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix failed the orthogonality / determinant checks for SO(n).
    #[error("not a rotation matrix: {0}")]
    NotARotation(String),
    /// A weight violates the dominance (Weyl chamber) inequalities.
    #[error("weight {0:?} is not dominant for n={1}")]
    NotDominant(Vec<i64>, usize),
    /// Character evaluation could not reach its accuracy target.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    /// Radial-Laplacian evaluation requested too close to the singular set.
    #[error("point too close to the singular set of the radial Laplacian: {0}")]
    SingularPoint(String),
    /// The four radial-Laplacian forms disagree beyond tolerance (verification mode).
    #[error("radial-Laplacian forms disagree: spread {spread:.3e} > tol {tol:.3e}")]
    FormMismatch { spread: f64, tol: f64 },
    /// Two grids that must match (same n, same N) do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// Grid resolution too small for the requested spectral cutoff.
    #[error("grid too coarse: need N >= {needed}, got {got}")]
    GridTooCoarse { needed: usize, got: usize },
    /// Right-hand side violates the compatibility condition of the Poisson problem.
    #[error("incompatible right-hand side: mean component {0:.3e} exceeds 1e-8")]
    IncompatibleRHS(f64),
    /// A function claimed to be a class function failed the conjugation spot check.
    #[error("not a class function: conjugation residual {0:.3e}")]
    NotClassFunction(f64),
    /// A torus function claimed Weyl-invariant failed the orbit spot check.
    #[error("not Weyl-invariant: orbit residual {0:.3e}")]
    NotWeylInvariant(f64),
    /// Malformed input (dimensions, file schema, parameter ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
