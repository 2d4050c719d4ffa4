//! The radial Laplacian L in four equivalent forms, and the Weyl density u_n.
//!
//! Forms:
//!   direct        Σ_j ∂²_j + Σ_{j<k} 2/(cosθ_k - cosθ_j)(sinθ_j ∂_j - sinθ_k ∂_k)
//!                 (+ Σ_j sinθ_j/(1-cosθ_j) ∂_j for odd n)
//!   equivalent    Σ_j [∂²_j + (Σ_{k≠j} 2/(cosθ_k - cosθ_j) (+ 1/(1-cosθ_j))) sinθ_j ∂_j]
//!   conservative  u_n^{-1} ∇·(u_n ∇φ)
//!   conjugated    Π_n^{-1} (Δ + γ_n)(Π_n φ)
//!
//! The pointwise path uses central finite differences with fixed steps
//! (1e-4 for first derivatives, 1e-3 for second); the grid path uses exact
//! spectral derivatives of band-limited data. For odd n the product Π_n φ is
//! 2π-antiperiodic in every variable, so its spectral Laplacian runs at
//! half-integer frequencies.
//!
//! The density u_n is normalized empirically: u_n = Π_n²/Z with
//! Z = (2π)^{-p} ∫ Π_n² dΘ computed by quadrature, so the Haar mass is
//! exactly 1. Z is compared against the closed-form constants 2^{(p-1)²}/p!
//! (even) and 2^{p(p-1)}/p! (odd); the even one checks out, the odd one is
//! off by 2^p, and the discrepancy is reported as a diagnostic rather than
//! absorbed.

use crate::characters::{pi_raw, singular_distance};
use crate::error::{Error, Result};
use crate::group::GroupDim;
use crate::quadrature::{
    spectral_derivative, spectral_derivative_antiperiodic, ClassFunctionGrid, DerivOrder,
    QuadratureGrid,
};
use crate::torus::{weyl_generators, TorusAngles};
use std::f64::consts::PI;
use std::sync::Arc;

/// Central-difference step for first derivatives.
pub const FD_STEP_FIRST: f64 = 1e-4;
/// Central-difference step for second derivatives.
pub const FD_STEP_SECOND: f64 = 1e-3;
/// Minimum singular-set distance for the coefficient forms.
pub const SINGULAR_DISTANCE_MIN: f64 = 1e-2;
/// The conjugated form divides by Π_n and is only evaluated above this.
pub const PI_FLOOR: f64 = 1e-6;

/// The Weyl integration density u_n = Π_n²/Z with empirical normalization.
#[derive(Debug, Clone)]
pub struct WeylDensity {
    group: GroupDim,
    z: f64,
    paper_constant: f64,
}

impl WeylDensity {
    pub fn new(group: GroupDim) -> Self {
        let p = group.p();
        // Per-variable bandwidth of Π²: 2(p-1) even, 2p-1 odd.
        let bw = if group.is_even() { 2 * (p - 1) } else { 2 * p - 1 };
        let n_z = (2 * bw + 2).max(8);
        let count = n_z.pow(p as u32);
        let step = 2.0 * PI / n_z as f64;
        let mut sum = 0.0f64;
        let mut theta = vec![0.0f64; p];
        for idx in 0..count {
            let mut rest = idx;
            for j in (0..p).rev() {
                theta[j] = step * (rest % n_z) as f64;
                rest /= n_z;
            }
            let v = pi_raw(group, &theta);
            sum += v * v;
        }
        let z = sum / count as f64;
        let factorial: f64 = (1..=p as u64).product::<u64>() as f64;
        let exponent = if group.is_even() {
            ((p - 1) * (p - 1)) as i32
        } else {
            (p * (p - 1)) as i32
        };
        let paper_constant = 2f64.powi(exponent) / factorial;
        Self {
            group,
            z,
            paper_constant,
        }
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    /// Z = (2π)^{-p} ∫ Π_n² dΘ.
    pub fn normalization(&self) -> f64 {
        self.z
    }

    /// The closed-form constant 2^{(p-1)²}/p! (even) or 2^{p(p-1)}/p! (odd).
    pub fn paper_constant(&self) -> f64 {
        self.paper_constant
    }

    /// Ratio between the empirical constant 1/Z and the closed-form one, when
    /// they disagree by more than 1e-8 relative (odd n: the ratio is 2^p).
    pub fn normalization_mismatch(&self) -> Option<f64> {
        let rel = (self.z * self.paper_constant - 1.0).abs();
        if rel > 1e-8 {
            Some(1.0 / (self.z * self.paper_constant))
        } else {
            None
        }
    }

    pub fn pi_value(&self, theta: &[f64]) -> f64 {
        pi_raw(self.group, theta)
    }

    /// u_n(Θ) = Π_n(Θ)²/Z ≥ 0, vanishing exactly on the singular set.
    pub fn u_value(&self, theta: &[f64]) -> f64 {
        let v = pi_raw(self.group, theta);
        v * v / self.z
    }

    /// ∇Π_n by the product rule over the factors of Π_n; stable everywhere.
    pub fn grad_pi(&self, theta: &[f64]) -> Vec<f64> {
        let p = self.group.p();
        // Factor list: values and the index set each factor depends on.
        let mut values: Vec<f64> = Vec::new();
        let mut pair_idx: Vec<(usize, usize)> = Vec::new();
        for j in 0..p {
            for k in (j + 1)..p {
                values.push(theta[j].cos() - theta[k].cos());
                pair_idx.push((j, k));
            }
        }
        let first_single = values.len();
        if self.group.is_odd() {
            for &t in theta {
                values.push((t / 2.0).sin());
            }
        }
        let leave_one_out = |skip: usize| -> f64 {
            values
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| v)
                .product()
        };
        let mut grad = vec![0.0f64; p];
        for (a, &(j, k)) in pair_idx.iter().enumerate() {
            let rest = leave_one_out(a);
            grad[j] += -theta[j].sin() * rest;
            grad[k] += theta[k].sin() * rest;
        }
        if self.group.is_odd() {
            for j in 0..p {
                let rest = leave_one_out(first_single + j);
                grad[j] += 0.5 * (theta[j] / 2.0).cos() * rest;
            }
        }
        grad
    }

    /// ∇u_n per the closed form
    /// (∇u)_j = (Σ_{k≠j} 2/(cosθ_k - cosθ_j) (+ 1/(1-cosθ_j))) sinθ_j · u_n,
    /// falling back to 2 Π ∇Π / Z when a coefficient denominator degenerates
    /// (the two expressions are algebraically identical).
    pub fn grad_u(&self, theta: &[f64]) -> Vec<f64> {
        let p = self.group.p();
        let mut degenerate = false;
        for j in 0..p {
            for k in (j + 1)..p {
                if (theta[j].cos() - theta[k].cos()).abs() < 1e-9 {
                    degenerate = true;
                }
            }
            if self.group.is_odd() && (1.0 - theta[j].cos()).abs() < 1e-9 {
                degenerate = true;
            }
        }
        if degenerate {
            let pi_v = self.pi_value(theta);
            return self
                .grad_pi(theta)
                .into_iter()
                .map(|d| 2.0 * pi_v * d / self.z)
                .collect();
        }
        let u = self.u_value(theta);
        (0..p)
            .map(|j| log_derivative_coeff(self.group, theta, j) * theta[j].sin() * u)
            .collect()
    }

    /// Bundle (Π, u, ∇u) at a point.
    pub fn sample(&self, angles: &TorusAngles) -> TorusDensitySample {
        let theta = angles.theta();
        TorusDensitySample {
            angles: angles.clone(),
            pi_value: self.pi_value(theta),
            u_value: self.u_value(theta),
            grad_u: self.grad_u(theta),
        }
    }
}

/// Σ_{k≠j} 2/(cosθ_k - cosθ_j), plus 1/(1-cosθ_j) for odd n: the logarithmic
/// derivative of u_n along θ_j divided by sinθ_j.
fn log_derivative_coeff(group: GroupDim, theta: &[f64], j: usize) -> f64 {
    let mut c = 0.0;
    for k in 0..theta.len() {
        if k != j {
            c += 2.0 / (theta[k].cos() - theta[j].cos());
        }
    }
    if group.is_odd() {
        c += 1.0 / (1.0 - theta[j].cos());
    }
    c
}

/// Density data at one point of the torus.
#[derive(Debug, Clone)]
pub struct TorusDensitySample {
    pub angles: TorusAngles,
    pub pi_value: f64,
    pub u_value: f64,
    pub grad_u: Vec<f64>,
}

/// A scalar function on the torus with an optional verified Weyl-invariance
/// claim.
#[derive(Clone)]
pub struct TorusFunction {
    group: GroupDim,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    weyl_invariant: bool,
}

impl std::fmt::Debug for TorusFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusFunction")
            .field("n", &self.group.n())
            .field("weyl_invariant", &self.weyl_invariant)
            .finish()
    }
}

impl TorusFunction {
    /// Wrap a function with no invariance claim.
    pub fn new<F>(group: GroupDim, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            group,
            f: Arc::new(f),
            weyl_invariant: false,
        }
    }

    /// Wrap a function claimed Weyl-invariant; the claim is spot-checked on
    /// 8 pseudo-random orbits to 1e-9 at construction.
    pub fn weyl_invariant<F>(group: GroupDim, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0f0f);
        let gens = weyl_generators(group);
        for _ in 0..8 {
            let t: Vec<f64> = (0..group.p()).map(|_| rng.gen_range(-PI..PI)).collect();
            let base = f(&t);
            for g in &gens {
                let moved = f(&g(&t));
                let resid = (moved - base).abs();
                if resid > 1e-9 * (1.0 + base.abs()) {
                    return Err(Error::NotWeylInvariant(resid));
                }
            }
        }
        Ok(Self {
            group,
            f: Arc::new(f),
            weyl_invariant: true,
        })
    }

    /// A linear combination of spectral-basis functions; Weyl-invariant by
    /// construction.
    pub fn invariant_combination(
        lines: Vec<crate::weights::SpectralLine>,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        if lines.is_empty() || lines.len() != coeffs.len() {
            return Err(Error::InvalidInput(
                "combination needs matching, nonempty lines/coeffs".into(),
            ));
        }
        let group = lines[0].group();
        Ok(Self {
            group,
            f: Arc::new(move |t: &[f64]| {
                let angles = TorusAngles::new(group, t.to_vec()).expect("rank mismatch");
                lines
                    .iter()
                    .zip(&coeffs)
                    .map(|(l, c)| {
                        c * crate::characters::character(l, &angles)
                            .expect("character evaluation failed")
                    })
                    .sum()
            }),
            weyl_invariant: true,
        })
    }

    /// The basis function of a spectral line as a torus function.
    pub fn from_character(line: &crate::weights::SpectralLine) -> Self {
        let line = line.clone();
        let group = line.group();
        Self {
            group,
            f: Arc::new(move |t: &[f64]| {
                let angles = TorusAngles::new(group, t.to_vec()).expect("rank mismatch");
                crate::characters::character(&line, &angles)
                    .expect("character evaluation failed")
            }),
            weyl_invariant: true,
        }
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    pub fn is_weyl_invariant(&self) -> bool {
        self.weyl_invariant
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        (self.f)(theta)
    }
}

/// The four equivalent expressions of the radial Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianForm {
    Direct,
    Equivalent,
    Conservative,
    Conjugated,
}

impl LaplacianForm {
    pub const ALL: [LaplacianForm; 4] = [
        LaplacianForm::Direct,
        LaplacianForm::Equivalent,
        LaplacianForm::Conservative,
        LaplacianForm::Conjugated,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LaplacianForm::Direct => "direct",
            LaplacianForm::Equivalent => "equiv",
            LaplacianForm::Conservative => "conservative",
            LaplacianForm::Conjugated => "conjugated",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(LaplacianForm::Direct),
            "equiv" | "equivalent" => Ok(LaplacianForm::Equivalent),
            "conservative" => Ok(LaplacianForm::Conservative),
            "conjugated" => Ok(LaplacianForm::Conjugated),
            _ => Err(Error::InvalidInput(format!("unknown form '{s}'"))),
        }
    }
}

fn d1(f: &TorusFunction, theta: &[f64], j: usize) -> f64 {
    let mut plus = theta.to_vec();
    plus[j] += FD_STEP_FIRST;
    let mut minus = theta.to_vec();
    minus[j] -= FD_STEP_FIRST;
    (f.eval(&plus) - f.eval(&minus)) / (2.0 * FD_STEP_FIRST)
}

fn d2(f: &TorusFunction, theta: &[f64], j: usize) -> f64 {
    let mut plus = theta.to_vec();
    plus[j] += FD_STEP_SECOND;
    let mut minus = theta.to_vec();
    minus[j] -= FD_STEP_SECOND;
    (f.eval(&plus) - 2.0 * f.eval(theta) + f.eval(&minus)) / (FD_STEP_SECOND * FD_STEP_SECOND)
}

/// Apply the radial Laplacian at a point with finite-difference derivatives.
/// Requires singular-set distance ≥ 1e-2 (the coefficients blow up there).
pub fn apply_radial_laplacian(
    f: &TorusFunction,
    angles: &TorusAngles,
    form: LaplacianForm,
) -> Result<f64> {
    let group = f.group();
    if angles.group() != group {
        return Err(Error::GridMismatch("function/angles group mismatch".into()));
    }
    let theta = angles.theta();
    let dist = singular_distance(group, theta);
    if dist < SINGULAR_DISTANCE_MIN {
        return Err(Error::SingularPoint(format!(
            "singular-set distance {dist:.3e} < {SINGULAR_DISTANCE_MIN:.0e}"
        )));
    }
    let p = group.p();
    let density = WeylDensity::new(group);
    match form {
        LaplacianForm::Direct => {
            let mut acc = 0.0;
            for j in 0..p {
                acc += d2(f, theta, j);
            }
            let dd: Vec<f64> = (0..p).map(|j| d1(f, theta, j)).collect();
            for j in 0..p {
                for k in (j + 1)..p {
                    acc += 2.0 / (theta[k].cos() - theta[j].cos())
                        * (theta[j].sin() * dd[j] - theta[k].sin() * dd[k]);
                }
            }
            if group.is_odd() {
                for j in 0..p {
                    acc += theta[j].sin() / (1.0 - theta[j].cos()) * dd[j];
                }
            }
            Ok(acc)
        }
        LaplacianForm::Equivalent => {
            let mut acc = 0.0;
            for j in 0..p {
                acc += d2(f, theta, j)
                    + log_derivative_coeff(group, theta, j) * theta[j].sin() * d1(f, theta, j);
            }
            Ok(acc)
        }
        LaplacianForm::Conservative => {
            // u^{-1} Σ_j D_j[u ∂_j f], both difference levels at the
            // first-derivative step.
            let h = FD_STEP_FIRST;
            let mut acc = 0.0;
            for j in 0..p {
                let mut plus = theta.to_vec();
                plus[j] += h;
                let mut minus = theta.to_vec();
                minus[j] -= h;
                let flux_p = density.u_value(&plus) * d1(f, &plus, j);
                let flux_m = density.u_value(&minus) * d1(f, &minus, j);
                acc += (flux_p - flux_m) / (2.0 * h);
            }
            Ok(acc / density.u_value(theta))
        }
        LaplacianForm::Conjugated => {
            let pi_here = density.pi_value(theta);
            if pi_here.abs() < PI_FLOOR {
                return Err(Error::SingularPoint(format!(
                    "|Π_n| = {:.3e} below the conjugated-form floor",
                    pi_here.abs()
                )));
            }
            let g = |t: &[f64]| density.pi_value(t) * f.eval(t);
            let h = FD_STEP_SECOND;
            let mut lap = 0.0;
            let g0 = g(theta);
            for j in 0..p {
                let mut plus = theta.to_vec();
                plus[j] += h;
                let mut minus = theta.to_vec();
                minus[j] -= h;
                lap += (g(&plus) - 2.0 * g0 + g(&minus)) / (h * h);
            }
            Ok((lap + group.gamma() * g0) / pi_here)
        }
    }
}

/// Verification mode: evaluate all four forms and fail with FormMismatch if
/// their spread exceeds `tol`. Returns the direct-form value.
pub fn apply_radial_laplacian_verified(
    f: &TorusFunction,
    angles: &TorusAngles,
    tol: f64,
) -> Result<f64> {
    let vals = apply_all_forms(f, angles)?;
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    if spread > tol {
        return Err(Error::FormMismatch { spread, tol });
    }
    Ok(vals[0])
}

/// All four forms at a point (finite differences).
pub fn apply_all_forms(f: &TorusFunction, angles: &TorusAngles) -> Result<[f64; 4]> {
    let mut out = [0.0f64; 4];
    for (i, form) in LaplacianForm::ALL.iter().enumerate() {
        out[i] = apply_radial_laplacian(f, angles, *form)?;
    }
    Ok(out)
}

/// |Δ_Θ Π_n + γ_n Π_n| by pointwise central differences with h = 1e-4.
/// Π_n is smooth everywhere (and 2π-antiperiodic for odd n, so only
/// pointwise differences are legitimate); the identity Δ Π = -γ Π is exact.
pub fn verify_pi_eigenidentity(group: GroupDim, angles: &TorusAngles) -> f64 {
    let theta = angles.theta();
    let h = 1e-4;
    let mut lap = 0.0;
    let base = pi_raw(group, theta);
    for j in 0..group.p() {
        let mut plus = theta.to_vec();
        plus[j] += h;
        let mut minus = theta.to_vec();
        minus[j] -= h;
        lap += (pi_raw(group, &plus) - 2.0 * base + pi_raw(group, &minus)) / (h * h);
    }
    (lap + group.gamma() * base).abs()
}

/// Spectral (exact-derivative) application of the radial Laplacian to
/// band-limited grid data.
pub struct GridOperator {
    grid: Arc<QuadratureGrid>,
    d1: Vec<Vec<f64>>,
    d2: Vec<Vec<f64>>,
    pi: Vec<f64>,
    u: Vec<f64>,
    cons_num: Option<Vec<f64>>,
    conj_num: Option<Vec<f64>>,
}

impl GridOperator {
    /// Precompute the derivative grids. With `flux_forms` the conservative
    /// and conjugated numerators are also assembled (more FFT passes and, for
    /// the products, a higher bandwidth requirement on N).
    pub fn new(f: &ClassFunctionGrid, flux_forms: bool) -> Result<Self> {
        let grid = Arc::clone(f.grid());
        let group = grid.group();
        let p = group.p();
        let mut d1 = Vec::with_capacity(p);
        let mut d2 = Vec::with_capacity(p);
        for j in 0..p {
            d1.push(spectral_derivative(f, j, DerivOrder::First)?.values().to_vec());
            d2.push(spectral_derivative(f, j, DerivOrder::Second)?.values().to_vec());
        }
        let density = grid.density();
        let count = grid.node_count();
        let mut pi = vec![0.0f64; count];
        let mut u = vec![0.0f64; count];
        for idx in 0..count {
            let theta = grid.angles_of(idx);
            pi[idx] = density.pi_value(&theta);
            u[idx] = density.u_value(&theta);
        }
        let (cons_num, conj_num) = if flux_forms {
            let mut cons = vec![0.0f64; count];
            for j in 0..p {
                let flux: Vec<f64> = d1[j].iter().zip(&u).map(|(d, uu)| d * uu).collect();
                let flux_grid = ClassFunctionGrid::new(Arc::clone(&grid), flux)?;
                let div = spectral_derivative(&flux_grid, j, DerivOrder::First)?;
                for (c, v) in cons.iter_mut().zip(div.values()) {
                    *c += v;
                }
            }
            let g_vals: Vec<f64> = pi.iter().zip(f.values()).map(|(a, b)| a * b).collect();
            let mut conj = vec![0.0f64; count];
            for j in 0..p {
                let lap_j = if group.is_odd() {
                    spectral_derivative_antiperiodic(
                        &g_vals,
                        grid.points(),
                        p,
                        j,
                        DerivOrder::Second,
                    )
                } else {
                    let g_grid = ClassFunctionGrid::new(Arc::clone(&grid), g_vals.clone())?;
                    spectral_derivative(&g_grid, j, DerivOrder::Second)?
                        .values()
                        .to_vec()
                };
                for (c, v) in conj.iter_mut().zip(&lap_j) {
                    *c += v;
                }
            }
            let gamma = group.gamma();
            for (c, g0) in conj.iter_mut().zip(&g_vals) {
                *c += gamma * g0;
            }
            (Some(cons), Some(conj))
        } else {
            (None, None)
        };
        Ok(Self {
            grid,
            d1,
            d2,
            pi,
            u,
            cons_num,
            conj_num,
        })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    /// Singular-set distance of a node.
    pub fn node_singular_distance(&self, idx: usize) -> f64 {
        singular_distance(self.grid.group(), &self.grid.angles_of(idx))
    }

    /// Apply the requested form at one node with exact derivatives.
    pub fn apply_at(&self, idx: usize, form: LaplacianForm) -> Result<f64> {
        let group = self.grid.group();
        let p = group.p();
        let theta = self.grid.angles_of(idx);
        match form {
            LaplacianForm::Direct | LaplacianForm::Equivalent => {
                let dist = singular_distance(group, &theta);
                if dist < SINGULAR_DISTANCE_MIN {
                    return Err(Error::SingularPoint(format!(
                        "node distance {dist:.3e} below {SINGULAR_DISTANCE_MIN:.0e}"
                    )));
                }
                if form == LaplacianForm::Direct {
                    let mut acc = 0.0;
                    for j in 0..p {
                        acc += self.d2[j][idx];
                    }
                    for j in 0..p {
                        for k in (j + 1)..p {
                            acc += 2.0 / (theta[k].cos() - theta[j].cos())
                                * (theta[j].sin() * self.d1[j][idx]
                                    - theta[k].sin() * self.d1[k][idx]);
                        }
                    }
                    if group.is_odd() {
                        for j in 0..p {
                            acc += theta[j].sin() / (1.0 - theta[j].cos()) * self.d1[j][idx];
                        }
                    }
                    Ok(acc)
                } else {
                    let mut acc = 0.0;
                    for j in 0..p {
                        acc += self.d2[j][idx]
                            + log_derivative_coeff(group, &theta, j)
                                * theta[j].sin()
                                * self.d1[j][idx];
                    }
                    Ok(acc)
                }
            }
            LaplacianForm::Conservative => {
                let num = self.cons_num.as_ref().ok_or_else(|| {
                    Error::InvalidInput("operator built without flux forms".into())
                })?;
                if self.u[idx] < 1e-12 {
                    return Err(Error::SingularPoint(format!(
                        "u = {:.3e} too small for the conservative form",
                        self.u[idx]
                    )));
                }
                Ok(num[idx] / self.u[idx])
            }
            LaplacianForm::Conjugated => {
                let num = self.conj_num.as_ref().ok_or_else(|| {
                    Error::InvalidInput("operator built without flux forms".into())
                })?;
                if self.pi[idx].abs() < PI_FLOOR {
                    return Err(Error::SingularPoint(format!(
                        "|Π| = {:.3e} below the conjugated-form floor",
                        self.pi[idx].abs()
                    )));
                }
                Ok(num[idx] / self.pi[idx])
            }
        }
    }
}
