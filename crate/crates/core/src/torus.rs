//! Maximal-torus coordinates on SO(n).
//!
//! Every rotation is conjugate to a block-diagonal matrix A_Θ of planar
//! rotations. This module builds A_Θ, recovers Θ from an arbitrary rotation,
//! and canonicalizes Θ under the residual Weyl-group action (permutations and
//! sign flips — paired flips for even n, free flips for odd n).

use crate::error::{Error, Result};
use crate::group::{GroupDim, Parity};
use nalgebra::DMatrix;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
/// Tolerance for the orthogonality/determinant check at element construction.
const ELEMENT_TOL: f64 = 1e-12;
/// Looser gate used by angle extraction on raw matrices.
const EXTRACT_TOL: f64 = 1e-9;
/// Angles this close to 0 or π are treated as sitting on the chamber wall.
const WALL_TOL: f64 = 1e-9;

/// A point Θ = (θ_1, ..., θ_p) on the maximal torus, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusAngles {
    group: GroupDim,
    theta: Vec<f64>,
    canonical: bool,
}

impl TorusAngles {
    /// Wrap a raw angle vector. Length must equal p.
    pub fn new(group: GroupDim, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != group.p() {
            return Err(Error::InvalidInput(format!(
                "expected {} angles for n={}, got {}",
                group.p(),
                group.n(),
                theta.len()
            )));
        }
        Ok(Self {
            group,
            theta,
            canonical: false,
        })
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Whether this vector is known to lie in the fundamental domain.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// The unique representative of the Weyl orbit in the fundamental domain.
    ///
    /// Odd n: all θ_j ∈ [0, π], sorted descending. Even n: θ_1 ≥ ... ≥
    /// θ_{p-1} ≥ |θ_p| with θ_j ∈ [0, π] for j < p and θ_p ∈ (-π, π]; only an
    /// even number of sign flips is available, so the parity of the flips is
    /// carried by the sign of θ_p unless some angle sits on a chamber wall
    /// (0 or π), which absorbs it. θ = π is always assigned positive sign.
    pub fn canonicalize(&self) -> TorusAngles {
        let p = self.group.p();
        let mut mags: Vec<f64> = Vec::with_capacity(p);
        let mut neg_parity = false;
        let mut has_wall = false;
        for &t in &self.theta {
            let r = reduce_to_pi(t);
            let m = r.abs();
            if m <= WALL_TOL || (PI - m) <= WALL_TOL {
                // Walls carry no sign information; π is assigned +π.
                has_wall = true;
                mags.push(if m <= WALL_TOL { m } else { PI });
            } else {
                if r < 0.0 {
                    neg_parity = !neg_parity;
                }
                mags.push(m);
            }
        }
        // Descending sort; ties keep the lexicographically largest form.
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if self.group.is_even() && neg_parity && !has_wall {
            mags[p - 1] = -mags[p - 1];
        }
        TorusAngles {
            group: self.group,
            theta: mags,
            canonical: true,
        }
    }
}

/// Reduce an angle to (-π, π].
fn reduce_to_pi(t: f64) -> f64 {
    let mut r = t - TWO_PI * (t / TWO_PI).round();
    if r <= -PI {
        r += TWO_PI;
    }
    if r > PI {
        r -= TWO_PI;
    }
    r
}

/// An element of SO(n), validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    entries: DMatrix<f64>,
}

impl GroupElement {
    /// Validate AᵀA = I and det A = 1 to 1e-12 and wrap the matrix.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        check_rotation(&entries, ELEMENT_TOL)?;
        Ok(Self { entries })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Torus angles of the conjugacy class of this element.
    pub fn angles(&self, group: GroupDim) -> Result<TorusAngles> {
        extract_angles(group, &self.entries)
    }
}

fn check_rotation(a: &DMatrix<f64>, tol: f64) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotARotation(format!(
            "matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let gram = a.transpose() * a;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    if worst > tol {
        return Err(Error::NotARotation(format!(
            "orthogonality residual {worst:.3e} exceeds {tol:.1e}"
        )));
    }
    let det = a.determinant();
    if (det - 1.0).abs() > tol {
        return Err(Error::NotARotation(format!(
            "determinant {det} differs from 1 beyond {tol:.1e}"
        )));
    }
    Ok(())
}

/// The 2×2 planar rotation R_θ.
fn planar(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

/// Build the block rotation A_Θ: 2×2 blocks R_{θ_j} on the diagonal and,
/// for odd n, a trailing 1.
pub fn block_rotation(angles: &TorusAngles) -> GroupElement {
    let g = angles.group();
    let n = g.n();
    let mut m = DMatrix::<f64>::identity(n, n);
    for (j, &t) in angles.theta().iter().enumerate() {
        let b = planar(t);
        let o = 2 * j;
        m[(o, o)] = b[0][0];
        m[(o, o + 1)] = b[0][1];
        m[(o + 1, o)] = b[1][0];
        m[(o + 1, o + 1)] = b[1][1];
    }
    GroupElement { entries: m }
}

/// Recover canonical torus angles from a rotation matrix.
///
/// Uses the real Schur form A = Q T Qᵀ: for an orthogonal matrix T is block
/// diagonal with 2×2 rotation blocks and ±1 scalars, and det Q tells whether
/// the block frame is positively oriented. For even n the two classes that
/// differ by a single sign flip have identical spectra, so the orientation of
/// the frame is required to separate them; eigenvalues alone are not enough.
pub fn extract_angles(group: GroupDim, a: &DMatrix<f64>) -> Result<TorusAngles> {
    check_rotation(a, EXTRACT_TOL).map_err(|e| match e {
        Error::NotARotation(msg) => Error::NotARotation(msg),
        other => other,
    })?;
    if a.nrows() != group.n() {
        return Err(Error::InvalidInput(format!(
            "matrix size {} does not match n={}",
            a.nrows(),
            group.n()
        )));
    }
    let n = group.n();
    let schur = nalgebra::linalg::Schur::try_new(a.clone(), 1e-14, 10_000).ok_or_else(|| {
        Error::NumericalDegeneracy("Schur decomposition did not converge".into())
    })?;
    let (q, t) = schur.unpack();

    let mut block_angles: Vec<f64> = Vec::new();
    let mut plus_ones = 0usize;
    let mut minus_ones = 0usize;
    let mut i = 0usize;
    while i < n {
        let sub = if i + 1 < n { t[(i + 1, i)].abs() } else { 0.0 };
        if sub > 1e-9 {
            // 2x2 rotation block; the paper's R_θ has sin θ in the (2,1) slot.
            block_angles.push(t[(i + 1, i)].atan2(t[(i, i)]));
            i += 2;
        } else {
            let d = t[(i, i)];
            if (d - 1.0).abs() <= 1e-7 {
                plus_ones += 1;
            } else if (d + 1.0).abs() <= 1e-7 {
                minus_ones += 1;
            } else {
                return Err(Error::NumericalDegeneracy(format!(
                    "unexpected Schur diagonal entry {d}"
                )));
            }
            i += 1;
        }
    }
    if group.is_odd() {
        if plus_ones == 0 {
            return Err(Error::NumericalDegeneracy(
                "odd-dimensional rotation without the forced +1 eigenvalue".into(),
            ));
        }
        plus_ones -= 1;
    }
    if plus_ones % 2 != 0 || minus_ones % 2 != 0 {
        return Err(Error::NumericalDegeneracy(
            "eigenvalues at ±1 did not pair up".into(),
        ));
    }
    for _ in 0..plus_ones / 2 {
        block_angles.push(0.0);
    }
    for _ in 0..minus_ones / 2 {
        block_angles.push(PI);
    }
    if block_angles.len() != group.p() {
        return Err(Error::NumericalDegeneracy(format!(
            "recovered {} angles, expected {}",
            block_angles.len(),
            group.p()
        )));
    }

    // det Q = -1 means the invariant-plane frame is negatively oriented: the
    // conjugation lives in O(n) \ SO(n). For odd n a sign flip is free; for
    // even n it costs one angle sign, absorbed by a wall angle when present.
    if q.determinant() < 0.0 && group.is_even() {
        let wall = block_angles
            .iter()
            .any(|&t| t.abs() <= WALL_TOL || (PI - t.abs()).abs() <= WALL_TOL);
        if !wall {
            let last = block_angles.len() - 1;
            block_angles[last] = -block_angles[last];
        }
    }

    Ok(TorusAngles::new(group, block_angles)?.canonicalize())
}

/// Generators of the Weyl action on angle vectors, for tests and spot checks:
/// transpositions (all n), paired sign flips (even n), single flips (odd n).
pub(crate) fn weyl_generators(group: GroupDim) -> Vec<Box<dyn Fn(&[f64]) -> Vec<f64>>> {
    let p = group.p();
    let mut gens: Vec<Box<dyn Fn(&[f64]) -> Vec<f64>>> = Vec::new();
    for i in 0..p {
        for j in (i + 1)..p {
            gens.push(Box::new(move |t: &[f64]| {
                let mut v = t.to_vec();
                v.swap(i, j);
                v
            }));
        }
    }
    match group.parity() {
        Parity::Even => {
            for i in 0..p {
                for j in (i + 1)..p {
                    gens.push(Box::new(move |t: &[f64]| {
                        let mut v = t.to_vec();
                        v[i] = -v[i];
                        v[j] = -v[j];
                        v
                    }));
                }
            }
        }
        Parity::Odd => {
            for i in 0..p {
                gens.push(Box::new(move |t: &[f64]| {
                    let mut v = t.to_vec();
                    v[i] = -v[i];
                    v
                }));
            }
        }
    }
    gens
}
