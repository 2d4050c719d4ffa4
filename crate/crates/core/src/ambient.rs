//! Matrix-level SO(n): the skew basis, exponentials, Haar sampling,
//! directional derivatives ρ(X), and finite-difference versions of the two
//! Laplacians Δ_G (Lie) and Δ_M (embedded Riemannian).
//!
//! Everything here is a verification oracle with fixed difference steps, not
//! a production path: determinism beats accuracy. The inner product on
//! matrices is A·B = Tr(AᵀB)/2, under which the wedge matrices
//! F_ij = e_i∧e_j (i < j) form an orthonormal basis of the antisymmetric
//! matrices.

use crate::error::{Error, Result};
use crate::torus::GroupElement;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// First-derivative step for ρ(X).
pub const RHO_STEP_FIRST: f64 = 1e-4;
/// Second-derivative step for ρ(X)².
pub const RHO_STEP_SECOND: f64 = 1e-3;

/// An antisymmetric matrix, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    entries: DMatrix<f64>,
}

impl SkewMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let sym = &entries + entries.transpose();
        if sym.abs().max() > 1e-13 {
            return Err(Error::InvalidInput(format!(
                "matrix is not antisymmetric: residual {:.3e}",
                sym.abs().max()
            )));
        }
        Ok(Self { entries })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn scale(&self, t: f64) -> SkewMatrix {
        SkewMatrix {
            entries: &self.entries * t,
        }
    }
}

/// The half-trace inner product A·B = Tr(AᵀB)/2.
pub fn inner_product_half_trace(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a.transpose() * b).trace() / 2.0
}

/// F_ij = e_i ∧ e_j = E_ij - E_ji.
pub fn wedge(n: usize, i: usize, j: usize) -> SkewMatrix {
    let mut m = DMatrix::<f64>::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    SkewMatrix { entries: m }
}

/// The orthonormal basis (F_ij)_{i<j} of the antisymmetric matrices, in
/// lexicographic order.
pub fn skew_basis(n: usize) -> Vec<SkewMatrix> {
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            basis.push(wedge(n, i, j));
        }
    }
    basis
}

/// Matrix exponential by scaling and squaring with a Taylor kernel; for the
/// skew inputs used here it satisfies ‖exp(X)exp(-X) - I‖ ≤ 1e-12.
pub fn matrix_exp(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let norm = x.abs().max();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = x / 2f64.powi(squarings as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut acc = DMatrix::<f64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        acc += &term;
        if term.abs().max() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// Haar-distributed rotation: QR of an i.i.d. Gaussian matrix with the
/// R_kk > 0 sign convention, then a column flip if the determinant is -1.
pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GroupElement {
    let gauss = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, n - 1)] = -q[(i, n - 1)];
        }
    }
    GroupElement::new(q).expect("QR produced a non-orthogonal matrix")
}

/// A scalar function on (a neighborhood of) SO(n) in matrix space.
pub trait GroupFunction: Sync {
    fn eval(&self, a: &DMatrix<f64>) -> f64;
}

impl<F> GroupFunction for F
where
    F: Fn(&DMatrix<f64>) -> f64 + Sync,
{
    fn eval(&self, a: &DMatrix<f64>) -> f64 {
        self(a)
    }
}

/// Derivative order for ρ(X).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoOrder {
    First,
    Second,
}

/// Central-difference approximation of (d/dt)^k f(A·exp(tX)) at t = 0.
pub fn rho_derivative(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    x: &SkewMatrix,
    order: RhoOrder,
) -> f64 {
    match order {
        RhoOrder::First => {
            let h = RHO_STEP_FIRST;
            let e = matrix_exp(&x.scale(h).entries);
            let plus = f.eval(&(a * &e));
            let minus = f.eval(&(a * e.transpose()));
            (plus - minus) / (2.0 * h)
        }
        RhoOrder::Second => {
            let h = RHO_STEP_SECOND;
            let e = matrix_exp(&x.scale(h).entries);
            let plus = f.eval(&(a * &e));
            let minus = f.eval(&(a * e.transpose()));
            (plus - 2.0 * f.eval(a) + minus) / (h * h)
        }
    }
}

/// exp(t F_ij) in closed form (a Givens rotation), used to keep the
/// basis-summed Laplacian cheap.
fn givens_step(a: &DMatrix<f64>, i: usize, j: usize, t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    let mut out = a.clone();
    let n = a.nrows();
    // Right multiplication by exp(tF_ij): cols i, j mix.
    for r in 0..n {
        let ai = a[(r, i)];
        let aj = a[(r, j)];
        out[(r, i)] = c * ai - s * aj;
        out[(r, j)] = s * ai + c * aj;
    }
    out
}

/// The Lie-group Laplacian Δ_G f(A) = Σ_{i<j} ρ(F_ij)² f(A), by central
/// differences with h = 1e-3.
pub fn group_laplacian(f: &dyn GroupFunction, a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let h = RHO_STEP_SECOND;
    let base = f.eval(a);
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let plus = f.eval(&givens_step(a, i, j, h));
            let minus = f.eval(&givens_step(a, i, j, -h));
            acc += (plus - 2.0 * base + minus) / (h * h);
        }
    }
    acc
}

/// Δ_G with the basis replaced by an orthonormal rotation of (F_ij); the
/// value must not change. Used by the basis-independence check.
pub fn group_laplacian_in_basis(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    basis: &[SkewMatrix],
) -> f64 {
    basis
        .iter()
        .map(|x| rho_derivative(f, a, x, RhoOrder::Second))
        .sum()
}

/// The projected direction Y_ij(B) ∈ so(n) with B·Y_ij(B) = P_{T_B} E_ij:
/// Y = (Bᵀ E_ij - E_ij ᵀ B)/2, which has (Y)_{kl} = (B_ik δ_jl - B_il δ_jk)/2.
fn projected_direction(b: &DMatrix<f64>, i: usize, j: usize) -> DMatrix<f64> {
    let n = b.nrows();
    let mut y = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let v = b[(i, k)] / 2.0;
        y[(j, k)] -= v;
        y[(k, j)] += v;
    }
    y
}

/// The embedded (Riemannian) Laplacian
/// Δ_M f(A) = 2 Σ_{i,j} (P_{T_A} E_ij)²(f)(A), where the outer application
/// differentiates the scalar field B ↦ (P_{T_B} E_ij)(f)(B) along the same
/// projected field, re-evaluated at points moved on the manifold.
pub fn embedded_laplacian(f: &dyn GroupFunction, a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let h = RHO_STEP_FIRST;
    let field = |b: &DMatrix<f64>, i: usize, j: usize| -> f64 {
        let y = projected_direction(b, i, j);
        let e = matrix_exp(&(&y * h));
        (f.eval(&(b * &e)) - f.eval(&(b * e.transpose()))) / (2.0 * h)
    };
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let y = projected_direction(a, i, j);
            let e = matrix_exp(&(&y * h));
            let plus = field(&(a * &e), i, j);
            let minus = field(&(a * e.transpose()), i, j);
            acc += (plus - minus) / (2.0 * h);
        }
    }
    2.0 * acc
}

/// Ad(A)(Y) = A Y A⁻¹.
pub fn adjoint(a: &DMatrix<f64>, y: &SkewMatrix) -> SkewMatrix {
    let m = a * &y.entries * a.transpose();
    // Symmetrize away the float residue so downstream scaling stays valid.
    let skew = (&m - m.transpose()) / 2.0;
    SkewMatrix { entries: skew }
}

/// Commutator [X, Y].
pub fn commutator(x: &SkewMatrix, y: &SkewMatrix) -> SkewMatrix {
    let m = &x.entries * &y.entries - &y.entries * &x.entries;
    SkewMatrix { entries: m }
}

/// Spot-check that f is a class function: f(gAg⁻¹) = f(A) for a few Haar g.
pub fn check_class_function(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    rng: &mut impl Rng,
) -> Result<()> {
    let n = a.nrows();
    let base = f.eval(a);
    for _ in 0..4 {
        let g = haar_sample(rng, n);
        let conj = g.matrix() * a * g.matrix().transpose();
        let resid = (f.eval(&conj) - base).abs();
        if resid > 1e-8 * (1.0 + base.abs()) {
            return Err(Error::NotClassFunction(resid));
        }
    }
    Ok(())
}

/// Residual of the class-function identity
/// ρ(Ad(A⁻¹)X - X)² f(A) = ρ([Ad(A⁻¹)X, X]) f(A),
/// which vanishes exactly for class functions.
pub fn verify_fonda(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    x: &SkewMatrix,
    rng: &mut impl Rng,
) -> Result<f64> {
    check_class_function(f, a, rng)?;
    Ok(fonda_residual(f, a, x))
}

/// The raw residual of the identity, without the class-function gate; used
/// directly for negative controls.
pub fn fonda_residual(f: &dyn GroupFunction, a: &DMatrix<f64>, x: &SkewMatrix) -> f64 {
    // Ad(A⁻¹)X with A⁻¹ = Aᵀ.
    let ad_raw = a.transpose() * &x.entries * a;
    let ad = SkewMatrix {
        entries: (&ad_raw - ad_raw.transpose()) / 2.0,
    };
    let z = SkewMatrix {
        entries: &ad.entries - &x.entries,
    };
    let bracket = commutator(&ad, x);
    let lhs = rho_derivative(f, a, &z, RhoOrder::Second);
    let rhs = rho_derivative(f, a, &bracket, RhoOrder::First);
    (lhs - rhs).abs()
}

/// |Δ_G f(gAg⁻¹) - Δ_G f(A)| for a class function f.
pub fn conjugation_invariance_residual(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    g: &DMatrix<f64>,
) -> f64 {
    let conj = g * a * g.transpose();
    (group_laplacian(f, &conj) - group_laplacian(f, a)).abs()
}

/// |Δ_G(L(B)f)(A) - (Δ_G f)(B⁻¹A)|: left invariance of Δ_G.
pub fn left_invariance_residual(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> f64 {
    let shifted = b.transpose() * a;
    let translated = move |m: &DMatrix<f64>| f.eval(&(b.transpose() * m));
    (group_laplacian(&translated, a) - group_laplacian(f, &shifted)).abs()
}

/// |Δ_G(R(B)f)(A) - (Δ_G f)(AB)|: right invariance of Δ_G.
pub fn right_invariance_residual(
    f: &dyn GroupFunction,
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> f64 {
    let shifted = a * b;
    let translated = move |m: &DMatrix<f64>| f.eval(&(m * b));
    (group_laplacian(&translated, a) - group_laplacian(f, &shifted)).abs()
}
