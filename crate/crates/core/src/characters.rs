//! Weyl characters on the maximal torus, and the product Π_n.
//!
//! The character of the irreducible representation λ is a ratio of p×p
//! determinants with entries e^{iθ_k(λ_ℓ+δ_ℓ)} ± e^{-iθ_k(λ_ℓ+δ_ℓ)}, divided
//! by the same determinant at λ = 0 (the Weyl denominator, a constant
//! multiple of Π_n). Everything is arranged in real arithmetic: the ± entry
//! families are 2cos(mθ) and 2i·sin(mθ), so after pulling i out of each row
//! the three determinants are real and the character splits as
//!
//!   even n: χ = (D⁺ + i^p D⁻) / D        (D = cos-determinant at λ = 0)
//!   odd n:  χ = D⁻(λ+δ) / D⁻(δ)
//!
//! For n ≡ 0 (mod 4) and odd n every character is real. For n ≡ 2 (mod 4)
//! the representations with λ_p ≠ 0 are not self-dual: they come in conjugate
//! pairs (λ', ±λ_p) and their characters are genuinely complex, with
//! Im χ = ± D⁻/D. The library therefore exposes two views:
//! [`character_parts`] (the true complex value) and [`character`], the
//! orthonormal real basis obtained by keeping self-dual characters as they
//! are and replacing each conjugate pair by √2·Re χ and √2·Im χ. The real
//! basis spans the same space, consists of Laplacian eigenfunctions with the
//! same κ_λ, and is exactly orthonormal for the Weyl-weighted inner product.
//!
//! Near the singular set of Π_n the determinant ratio is 0/0; evaluation
//! switches to the confluent path (divided differences, see the `confluent`
//! submodule), which is accurate at and arbitrarily close to the degenerate
//! configurations. The plain path is used when every constraint
//! |cos θ_j - cos θ_k| (and |sin(θ_j/2)| for odd n) exceeds τ = 1e-3.

mod confluent;

use crate::error::{Error, Result};
use crate::group::GroupDim;
use crate::torus::TorusAngles;
use crate::weights::SpectralLine;
use confluent::{ClusterPlan, EntryKind};
use nalgebra::DMatrix;
use std::f64::consts::SQRT_2;

/// Threshold on the singular-set constraints below which the confluent path
/// is used.
pub const DEGENERACY_TAU: f64 = 1e-3;

/// The function Π_n: the product of (cos θ_j - cos θ_k) over pairs j < k,
/// times Π_j sin(θ_j/2) for odd n.
pub fn pi_n(angles: &TorusAngles) -> f64 {
    pi_raw(angles.group(), angles.theta())
}

pub(crate) fn pi_raw(group: GroupDim, t: &[f64]) -> f64 {
    let mut prod = 1.0;
    for j in 0..t.len() {
        for k in (j + 1)..t.len() {
            prod *= t[j].cos() - t[k].cos();
        }
    }
    if group.is_odd() {
        for &tj in t {
            prod *= (tj / 2.0).sin();
        }
    }
    prod
}

/// Smallest of the singular-set constraints at Θ; the fast character path and
/// the radial-Laplacian coefficient forms are reliable only when this is not
/// tiny.
pub fn singular_distance(group: GroupDim, theta: &[f64]) -> f64 {
    let mut d = f64::INFINITY;
    for j in 0..theta.len() {
        for k in (j + 1)..theta.len() {
            d = d.min((theta[j].cos() - theta[k].cos()).abs());
        }
    }
    if group.is_odd() {
        for &t in theta {
            d = d.min((t / 2.0).sin().abs());
        }
    }
    d
}

/// Evaluation path selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharPath {
    /// Plain determinant ratio when far from the singular set, confluent
    /// otherwise.
    Auto,
    /// Force the plain determinant ratio.
    Plain,
    /// Force the confluent (divided-difference) path.
    Confluent,
}

/// Real and imaginary part of the true character χ_λ(Θ).
#[derive(Debug, Clone, Copy)]
pub struct CharParts {
    pub re: f64,
    pub im: f64,
}

fn plain_det(kind: EntryKind, freq2: &[i64], theta: &[f64]) -> f64 {
    let p = theta.len();
    let m = DMatrix::<f64>::from_fn(p, p, |k, l| {
        let x = freq2[l] as f64 / 2.0 * theta[k];
        match kind {
            EntryKind::Cos => 2.0 * x.cos(),
            EntryKind::Sin => 2.0 * x.sin(),
        }
    });
    m.determinant()
}

/// Assemble (re, im) from the three real determinants, multiplying the sin
/// determinant by i^p.
fn assemble(group: GroupDim, d_plus: f64, d_sin: f64, den: f64) -> Result<CharParts> {
    if den == 0.0 || !den.is_finite() {
        return Err(Error::NumericalDegeneracy(format!(
            "character denominator degenerated to {den}"
        )));
    }
    let p = group.p();
    if group.is_odd() {
        // i^p cancels between numerator and denominator.
        return Ok(CharParts {
            re: d_sin / den,
            im: 0.0,
        });
    }
    let (re_coef, im_coef) = match p % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    };
    Ok(CharParts {
        re: (d_plus + re_coef * d_sin) / den,
        im: im_coef * d_sin / den,
    })
}

fn parts_plain(line: &SpectralLine, theta: &[f64]) -> Result<CharParts> {
    let g = line.group();
    let m2 = line.weight().shifted_doubled();
    let d2 = g.delta_doubled();
    if g.is_odd() {
        let num = plain_det(EntryKind::Sin, &m2, theta);
        let den = plain_det(EntryKind::Sin, &d2, theta);
        assemble(g, 0.0, num, den)
    } else {
        let dp = plain_det(EntryKind::Cos, &m2, theta);
        let ds = plain_det(EntryKind::Sin, &m2, theta);
        let den = plain_det(EntryKind::Cos, &d2, theta);
        assemble(g, dp, ds, den)
    }
}

fn parts_confluent(line: &SpectralLine, theta: &[f64]) -> Result<CharParts> {
    let g = line.group();
    let m2 = line.weight().shifted_doubled();
    let d2 = g.delta_doubled();
    let plan = ClusterPlan::new(theta, g.is_odd());
    if g.is_odd() {
        // Numerator and denominator are both sin-alternants, so their
        // odd-cluster prefactors are identical and cancel exactly; applying
        // them would introduce 0/0 at exact degeneracies.
        let num = plan.det(EntryKind::Sin, &m2)?;
        let den = plan.det(EntryKind::Sin, &d2)?;
        assemble(g, 0.0, num.det * num.sign, den.det * den.sign)
    } else {
        let dp = plan.det(EntryKind::Cos, &m2)?;
        let ds = plan.det(EntryKind::Sin, &m2)?;
        let den = plan.det(EntryKind::Cos, &d2)?;
        // The cos-alternants never carry odd-cluster prefactors; the sin one
        // keeps its own (it vanishes on the singular set, as it must).
        let ds_val = ds.det * ds.sign * ds.odd_factor;
        assemble(g, dp.det * dp.sign, ds_val, den.det * den.sign)
    }
}

/// True character value χ_λ(Θ) as (re, im), with explicit path control.
pub fn character_parts_with(
    line: &SpectralLine,
    angles: &TorusAngles,
    path: CharPath,
) -> Result<CharParts> {
    let g = line.group();
    if angles.group() != g {
        return Err(Error::GridMismatch(format!(
            "angles are for n={}, line for n={}",
            angles.group().n(),
            g.n()
        )));
    }
    let theta = angles.theta();
    match path {
        CharPath::Plain => parts_plain(line, theta),
        CharPath::Confluent => parts_confluent(line, theta),
        CharPath::Auto => {
            if singular_distance(g, theta) > DEGENERACY_TAU {
                parts_plain(line, theta)
            } else {
                parts_confluent(line, theta)
            }
        }
    }
}

/// True character value χ_λ(Θ), automatic path selection.
pub fn character_parts(line: &SpectralLine, angles: &TorusAngles) -> Result<CharParts> {
    character_parts_with(line, angles, CharPath::Auto)
}

/// The real orthonormal basis function φ_λ(Θ) attached to a spectral line:
/// the character itself when the representation is self-dual (the imaginary
/// residue is checked to be below 1e-9 relative), √2·Re χ for the λ_p > 0
/// member of a conjugate pair and √2·Im χ for the λ_p < 0 member.
pub fn character(line: &SpectralLine, angles: &TorusAngles) -> Result<f64> {
    character_with(line, angles, CharPath::Auto)
}

/// [`character`] with explicit path control, used by the path-consistency
/// checks.
pub fn character_with(line: &SpectralLine, angles: &TorusAngles, path: CharPath) -> Result<f64> {
    let e = character_parts_with(line, angles, path)?;
    if line.is_self_dual() {
        if e.im.abs() > 1e-9 * (1.0 + e.re.abs()) {
            return Err(Error::NumericalDegeneracy(format!(
                "imaginary residue {:.3e} on a self-dual character",
                e.im
            )));
        }
        Ok(e.re)
    } else if *line.lambda().last().unwrap() > 0 {
        Ok(SQRT_2 * e.re)
    } else {
        Ok(SQRT_2 * e.im)
    }
}

/// φ_λ(0) rounded to the nearest integer; the rounding residue must be below
/// 1e-6. Cross-checked against the exact Weyl dimension formula in the tests.
pub fn dimension(line: &SpectralLine) -> Result<u64> {
    let zero = TorusAngles::new(line.group(), vec![0.0; line.group().p()])?;
    let e = character_parts_with(line, &zero, CharPath::Confluent)?;
    let rounded = e.re.round();
    if (e.re - rounded).abs() >= 1e-6 || rounded < 1.0 {
        return Err(Error::NumericalDegeneracy(format!(
            "character value {} at the identity is not close to a positive integer",
            e.re
        )));
    }
    Ok(rounded as u64)
}

/// A spectral line together with its evaluation behavior.
#[derive(Debug, Clone)]
pub struct CharacterFunction {
    line: SpectralLine,
}

impl CharacterFunction {
    pub fn new(line: SpectralLine) -> Self {
        Self { line }
    }

    pub fn line(&self) -> &SpectralLine {
        &self.line
    }

    /// Basis-function value at Θ (see [`character`]).
    pub fn eval(&self, angles: &TorusAngles) -> Result<f64> {
        character(&self.line, angles)
    }
}
