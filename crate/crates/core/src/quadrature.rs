//! Uniform tensor grids on the torus, Weyl-weighted integration, and
//! spectral differentiation of grid data.
//!
//! Nodes are θ^{(k)} = 2πk/N per dimension (offset-free; degenerate nodes are
//! harmless for integration because the Weyl density vanishes there). The
//! quadrature weight at a tensor node is u_n(Θ)·N^{-p}, which by the
//! trapezoid/aliasing theorem integrates trig polynomials exactly as long as
//! the total per-variable frequency of the integrand stays below N.

use crate::error::{Error, Result};
use crate::group::GroupDim;
use crate::radial::WeylDensity;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Uniform tensor grid with Weyl weights.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    group: GroupDim,
    points: usize,
    density: WeylDensity,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// Build the N^p tensor grid. N must be even and at least 4.
    pub fn new(group: GroupDim, points: usize) -> Result<Arc<Self>> {
        if points < 4 || points % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "grid size must be even and >= 4, got {points}"
            )));
        }
        let p = group.p() as u32;
        let count = (points as u64)
            .checked_pow(p)
            .filter(|&c| c <= 1 << 28)
            .ok_or_else(|| Error::InvalidInput(format!("grid {points}^{p} is too large")))?
            as usize;
        let density = WeylDensity::new(group);
        let scale = 1.0 / (points as f64).powi(group.p() as i32);
        let weights: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|idx| {
                let theta = angles_of_raw(group, points, idx);
                density.u_value(&theta) * scale
            })
            .collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::NumericalDegeneracy(format!(
                "grid mass {total} differs from 1 beyond 1e-10"
            )));
        }
        Ok(Arc::new(Self {
            group,
            points,
            density,
            weights,
        }))
    }

    /// Default resolution by rank: 64 for p ≤ 2, 32 for p = 3, 16 for p ≥ 4
    /// (memory is N^p; exactness needs N beyond twice the working bandwidth).
    pub fn default_points(group: GroupDim) -> usize {
        match group.p() {
            0..=2 => 64,
            3 => 32,
            _ => 16,
        }
    }

    pub fn with_default_points(group: GroupDim) -> Result<Arc<Self>> {
        Self::new(group, Self::default_points(group))
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    /// Points per dimension.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of tensor nodes N^p.
    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn density(&self) -> &WeylDensity {
        &self.density
    }

    /// Angles of the node with flat index `idx` (θ_p fastest).
    pub fn angles_of(&self, idx: usize) -> Vec<f64> {
        angles_of_raw(self.group, self.points, idx)
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        let p = self.group.p();
        let mut k = vec![0usize; p];
        let mut rest = idx;
        for j in (0..p).rev() {
            k[j] = rest % self.points;
            rest /= self.points;
        }
        k
    }

    /// Sample a function of the angles on every node.
    pub fn sample<F>(self: &Arc<Self>, f: F) -> ClassFunctionGrid
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let values: Vec<f64> = (0..self.node_count())
            .into_par_iter()
            .map(|idx| f(&self.angles_of(idx)))
            .collect();
        ClassFunctionGrid {
            grid: Arc::clone(self),
            values,
        }
    }

    /// Sample a fallible function of the angles on every node.
    pub fn try_sample<F>(self: &Arc<Self>, f: F) -> Result<ClassFunctionGrid>
    where
        F: Fn(&[f64]) -> Result<f64> + Sync,
    {
        let values: Vec<f64> = (0..self.node_count())
            .into_par_iter()
            .map(|idx| f(&self.angles_of(idx)))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ClassFunctionGrid {
            grid: Arc::clone(self),
            values,
        })
    }
}

fn angles_of_raw(group: GroupDim, points: usize, idx: usize) -> Vec<f64> {
    let p = group.p();
    let step = 2.0 * PI / points as f64;
    let mut theta = vec![0.0f64; p];
    let mut rest = idx;
    for j in (0..p).rev() {
        theta[j] = step * (rest % points) as f64;
        rest /= points;
    }
    theta
}

/// Samples of a class function on the tensor grid, row-major with θ_p
/// fastest.
#[derive(Debug, Clone)]
pub struct ClassFunctionGrid {
    grid: Arc<QuadratureGrid>,
    values: Vec<f64>,
}

impl ClassFunctionGrid {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                grid.node_count(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Spot-check Weyl invariance of the grid data on 8 pseudo-random orbits
    /// (negation maps node k to N-k, so orbits stay on the grid).
    pub fn check_weyl_invariant(&self, tol: f64) -> Result<()> {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let g = self.grid.group();
        let n_pts = self.grid.points();
        let p = g.p();
        for _ in 0..8 {
            let k: Vec<usize> = (0..p).map(|_| rng.gen_range(0..n_pts)).collect();
            let base = self.values[flat_index(&k, n_pts)];
            // A transposition and a (paired, for even n) negation.
            if p >= 2 {
                let mut swapped = k.clone();
                swapped.swap(0, 1);
                let v = self.values[flat_index(&swapped, n_pts)];
                if (v - base).abs() > tol * (1.0 + base.abs()) {
                    return Err(Error::NotWeylInvariant((v - base).abs()));
                }
            }
            let mut flipped = k.clone();
            flipped[0] = (n_pts - k[0]) % n_pts;
            if g.is_even() {
                let j = if p >= 2 { 1 } else { 0 };
                flipped[j] = (n_pts - k[j]) % n_pts;
            }
            let v = self.values[flat_index(&flipped, n_pts)];
            if (v - base).abs() > tol * (1.0 + base.abs()) {
                return Err(Error::NotWeylInvariant((v - base).abs()));
            }
        }
        Ok(())
    }

    /// Pointwise product with another grid on the same quadrature.
    pub fn pointwise_mul(&self, other: &ClassFunctionGrid) -> Result<ClassFunctionGrid> {
        same_grid(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(ClassFunctionGrid {
            grid: Arc::clone(&self.grid),
            values,
        })
    }

    /// Serialize to the grid JSON schema {"n", "N", "values"}.
    pub fn to_json(&self) -> String {
        let file = GridFile {
            n: self.grid.group().n(),
            n_points: self.grid.points(),
            values: self.values.clone(),
        };
        serde_json::to_string(&file).expect("grid serialization cannot fail")
    }

    /// Parse the grid JSON schema; values are taken bit-exactly.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: GridFile =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("grid JSON: {e}")))?;
        let group = GroupDim::new(file.n)?;
        let grid = QuadratureGrid::new(group, file.n_points)?;
        ClassFunctionGrid::new(grid, file.values)
    }
}

fn flat_index(k: &[usize], points: usize) -> usize {
    k.iter().fold(0usize, |acc, &ki| acc * points + ki)
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    n: usize,
    #[serde(rename = "N")]
    n_points: usize,
    values: Vec<f64>,
}

fn same_grid(a: &ClassFunctionGrid, b: &ClassFunctionGrid) -> Result<()> {
    if a.grid.group() != b.grid.group() || a.grid.points() != b.grid.points() {
        return Err(Error::GridMismatch(format!(
            "(n={}, N={}) vs (n={}, N={})",
            a.grid.group().n(),
            a.grid.points(),
            b.grid.group().n(),
            b.grid.points()
        )));
    }
    Ok(())
}

/// Weyl integration: N^{-p} Σ_k f(Θ_k) u_n(Θ_k). Exact for trig polynomials
/// whose per-variable degree plus the degree of u_n stays below N.
pub fn integrate_class(f: &ClassFunctionGrid) -> f64 {
    f.values
        .iter()
        .zip(f.grid.weights())
        .map(|(v, w)| v * w)
        .sum()
}

/// Weyl-weighted inner product ⟨f, g⟩ = ∫ f·g u_n. Real-valued; the spectral
/// basis is real, so no conjugation is involved.
pub fn inner_product(f: &ClassFunctionGrid, g: &ClassFunctionGrid) -> Result<f64> {
    same_grid(f, g)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.grid.weights())
        .map(|((a, b), w)| a * b * w)
        .sum())
}

/// Derivative order for spectral differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

/// Exact differentiation of band-limited periodic grid data along one axis
/// via the DFT: mode m is multiplied by im (odd Nyquist mode zeroed) or -m².
/// Aliasing is the caller's responsibility: the data must have per-variable
/// bandwidth below N/2.
pub fn spectral_derivative(
    f: &ClassFunctionGrid,
    axis: usize,
    order: DerivOrder,
) -> Result<ClassFunctionGrid> {
    let p = f.grid.group().p();
    if axis >= p {
        return Err(Error::InvalidInput(format!("axis {axis} out of range for p={p}")));
    }
    let n_pts = f.grid.points();
    let values = apply_multiplier(&f.values, n_pts, p, axis, |m| {
        let m = m as f64;
        match order {
            DerivOrder::First => Complex::new(0.0, m),
            DerivOrder::Second => Complex::new(-m * m, 0.0),
        }
    }, order == DerivOrder::First);
    ClassFunctionGrid::new(Arc::clone(&f.grid), values)
}

/// Spectral differentiation of data that is 2π-antiperiodic in every
/// variable (half-integer frequencies): the lane is demodulated by
/// e^{-iθ/2}, differentiated at frequency m + 1/2, and remodulated.
pub(crate) fn spectral_derivative_antiperiodic(
    values: &[f64],
    points: usize,
    p: usize,
    axis: usize,
    order: DerivOrder,
) -> Vec<f64> {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(points);
    let ifft = planner.plan_fft_inverse(points);
    let mut out = vec![0.0f64; values.len()];
    let stride = points.pow((p - 1 - axis) as u32);
    let outer = values.len() / (points * stride);
    let mut lane = vec![Complex::new(0.0, 0.0); points];
    let phases: Vec<Complex<f64>> = (0..points)
        .map(|k| Complex::from_polar(1.0, -PI * k as f64 / points as f64))
        .collect();
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * points * stride + inner;
            for t in 0..points {
                lane[t] = phases[t] * values[base + t * stride];
            }
            fft.process(&mut lane);
            for (k, v) in lane.iter_mut().enumerate() {
                let m = if k < points / 2 { k as i64 } else { k as i64 - points as i64 };
                let freq = m as f64 + 0.5;
                let mult = match order {
                    DerivOrder::First => Complex::new(0.0, freq),
                    DerivOrder::Second => Complex::new(-freq * freq, 0.0),
                };
                *v *= mult;
            }
            ifft.process(&mut lane);
            for t in 0..points {
                out[base + t * stride] = (lane[t] * phases[t].conj()).re / points as f64;
            }
        }
    }
    out
}

fn apply_multiplier<M>(
    values: &[f64],
    points: usize,
    p: usize,
    axis: usize,
    mult: M,
    zero_nyquist: bool,
) -> Vec<f64>
where
    M: Fn(i64) -> Complex<f64>,
{
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(points);
    let ifft = planner.plan_fft_inverse(points);
    let mut out = vec![0.0f64; values.len()];
    let stride = points.pow((p - 1 - axis) as u32);
    let outer = values.len() / (points * stride);
    let mut lane = vec![Complex::new(0.0, 0.0); points];
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * points * stride + inner;
            for t in 0..points {
                lane[t] = Complex::new(values[base + t * stride], 0.0);
            }
            fft.process(&mut lane);
            for (k, v) in lane.iter_mut().enumerate() {
                let m = if k <= points / 2 { k as i64 } else { k as i64 - points as i64 };
                *v *= if zero_nyquist && k == points / 2 {
                    Complex::new(0.0, 0.0)
                } else {
                    mult(m)
                };
            }
            ifft.process(&mut lane);
            for t in 0..points {
                out[base + t * stride] = lane[t].re / points as f64;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::CharacterTable;
    use crate::weights::enumerate_dominant;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn dim(n: usize) -> GroupDim {
        GroupDim::new(n).unwrap()
    }

    #[test]
    fn unit_mass() {
        for n in 3..=7 {
            let g = dim(n);
            let grid = QuadratureGrid::new(g, if g.p() <= 2 { 64 } else { 16 }).unwrap();
            let one = grid.sample(|_| 1.0);
            assert_abs_diff_eq!(integrate_class(&one), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn character_orthogonality_n4() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 6.0).unwrap();
        // λ=(1,0) integrates to zero, its square to one, trace² to one.
        let std = table.line_grid(1).unwrap();
        assert!(integrate_class(&std).abs() <= 1e-10);
        let sq = std.pointwise_mul(&std).unwrap();
        assert_abs_diff_eq!(integrate_class(&sq), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn schur_inner_products_n5() {
        let g = dim(5);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 8.0).unwrap();
        for (i, li) in table.lines().iter().enumerate() {
            for (j, lj) in table.lines().iter().enumerate() {
                let v = inner_product(&table.line_grid(i).unwrap(), &table.line_grid(j).unwrap())
                    .unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (v - want).abs() <= 1e-9,
                    "⟨{:?},{:?}⟩ = {v}",
                    li.lambda(),
                    lj.lambda()
                );
            }
        }
    }

    #[test]
    fn gram_identity_at_128() {
        // Module invariant: ‖G - I‖_max ≤ 1e-8 for κ ≤ 20 at N = 128,
        // n ∈ {3, ..., 6}.
        for n in 3..=6 {
            let g = dim(n);
            let grid = QuadratureGrid::new(g, 128).unwrap();
            let table = CharacterTable::new(&grid, 20.0).unwrap();
            let m = table.lines().len();
            let mut worst = 0.0f64;
            for i in 0..m {
                for j in i..m {
                    let v = inner_product(
                        &table.line_grid(i).unwrap(),
                        &table.line_grid(j).unwrap(),
                    )
                    .unwrap();
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((v - want).abs());
                }
            }
            assert!(worst <= 1e-8, "n={n}: ‖G-I‖_max = {worst:.3e}");
        }
    }

    #[test]
    fn doubling_resolution_is_flat() {
        let g = dim(4);
        for pts in [64usize, 128] {
            let grid = QuadratureGrid::new(g, pts).unwrap();
            let table = CharacterTable::new(&grid, 6.0).unwrap();
            let sq = table.line_grid(1).unwrap().pointwise_mul(&table.line_grid(1).unwrap()).unwrap();
            assert_abs_diff_eq!(integrate_class(&sq), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectral_derivative_single_mode() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let f = grid.sample(|t| t[0].cos());
        let d1 = spectral_derivative(&f, 0, DerivOrder::First).unwrap();
        let d2 = spectral_derivative(&f, 0, DerivOrder::Second).unwrap();
        for idx in 0..grid.node_count() {
            let t = grid.angles_of(idx);
            assert_abs_diff_eq!(d1.values()[idx], -t[0].sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(d2.values()[idx], -t[0].cos(), epsilon = 1e-12);
        }
        let c = grid.sample(|_| 3.25);
        let dc = spectral_derivative(&c, 1, DerivOrder::First).unwrap();
        assert!(dc.values().iter().all(|v| v.abs() < 1e-13));
    }

    #[test]
    fn spectral_derivative_character_closed_form() {
        // φ_(2) on SO(3) is 1 + 2cosθ + 2cos2θ; its second derivative is
        // -2cosθ - 8cos2θ.
        let g = dim(3);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let lines = enumerate_dominant(g, 6.0).unwrap();
        let l2 = lines.iter().find(|l| l.lambda() == [2]).unwrap();
        let f = grid
            .try_sample(|t| {
                crate::characters::character(l2, &crate::torus::TorusAngles::new(g, t.to_vec())?)
            })
            .unwrap();
        let d2 = spectral_derivative(&f, 0, DerivOrder::Second).unwrap();
        for idx in 0..grid.node_count() {
            let t = grid.angles_of(idx)[0];
            let want = -2.0 * t.cos() - 8.0 * (2.0 * t).cos();
            assert_abs_diff_eq!(d2.values()[idx], want, epsilon = 1e-9);
        }
    }

    #[test]
    fn antiperiodic_derivative_half_mode() {
        // g(θ) = sin(θ/2) on one axis: second derivative is -sin(θ/2)/4.
        let pts = 32usize;
        let vals: Vec<f64> = (0..pts)
            .map(|k| (PI * k as f64 / pts as f64).sin())
            .collect();
        let out = spectral_derivative_antiperiodic(&vals, pts, 1, 0, DerivOrder::Second);
        for k in 0..pts {
            let t = 2.0 * PI * k as f64 / pts as f64;
            assert_abs_diff_eq!(out[k], -(t / 2.0).sin() / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let g = dim(4);
        let a = QuadratureGrid::new(g, 32).unwrap().sample(|_| 1.0);
        let b = QuadratureGrid::new(g, 64).unwrap().sample(|_| 1.0);
        assert!(matches!(inner_product(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn weyl_invariance_check() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let ok = grid.sample(|t| t[0].cos() + t[1].cos());
        assert!(ok.check_weyl_invariant(1e-8).is_ok());
        let bad = grid.sample(|t| t[0].cos() + 2.0 * t[1].cos());
        assert!(bad.check_weyl_invariant(1e-8).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn grid_json_roundtrip_is_bit_exact(seed in 0u64..10_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = dim(3);
            let grid = QuadratureGrid::new(g, 4).unwrap();
            let values: Vec<f64> = (0..4).map(|_| {
                let v: f64 = rng.gen_range(-1e9..1e9);
                v * rng.gen_range(1e-9..1e9f64)
            }).collect();
            let f = ClassFunctionGrid::new(grid, values.clone()).unwrap();
            let back = ClassFunctionGrid::from_json(&f.to_json()).unwrap();
            for (a, b) in values.iter().zip(back.values()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
