//! Numerical harmonic analysis for class functions on the rotation groups
//! SO(n).
//!
//! The library reduces rotations to maximal-torus angles, evaluates Weyl
//! characters and Laplacian eigenvalues, applies the radial Laplacian in four
//! equivalent forms, integrates class functions by the Weyl integration
//! formula, and solves the Poisson problem -Lφ = η spectrally. A
//! finite-difference layer on the ambient matrix group verifies the
//! matrix-level identities (Δ_M = Δ_G, the class-function derivative
//! identity, conjugation invariance) against the torus-side computations.

pub mod ambient;
pub mod characters;
pub mod error;
pub mod group;
pub mod quadrature;
pub mod radial;
pub mod spectral;
pub mod torus;
pub mod verify;
pub mod weights;

pub use characters::{
    character, character_parts, dimension, pi_n, CharPath, CharacterFunction,
};
pub use error::{Error, Result};
pub use group::{GroupDim, Parity};
pub use quadrature::{
    inner_product, integrate_class, spectral_derivative, ClassFunctionGrid, DerivOrder,
    QuadratureGrid,
};
pub use radial::{
    apply_radial_laplacian, verify_pi_eigenidentity, LaplacianForm, TorusDensitySample,
    TorusFunction, WeylDensity,
};
pub use spectral::{expand, solve_poisson, CharacterTable, SpectralExpansion};
pub use torus::{block_rotation, extract_angles, GroupElement, TorusAngles};
pub use weights::{
    casimir_eigenvalue, enumerate_dominant, shift_delta, DominantWeight, SpectralLine,
};
