//! Expansion of class functions in the character basis and the spectral
//! Poisson solver for -Lφ = η.
//!
//! The basis functions diagonalize the radial Laplacian exactly, so the
//! variational solution is realized by spectral division: c_λ(φ) =
//! c_λ(η)/κ_λ for λ ≠ 0, and c_0(φ) = 0 picks the mean-zero representative.
//! Content of η outside the truncated span is reported as a residual norm,
//! never silently dropped.

use crate::characters::{character, CharacterFunction};
use crate::error::{Error, Result};
use crate::group::GroupDim;
use crate::quadrature::{inner_product, ClassFunctionGrid, QuadratureGrid};
use crate::radial::{GridOperator, LaplacianForm};
use crate::torus::TorusAngles;
use crate::weights::{enumerate_dominant, DominantWeight, SpectralLine};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// All spectral-basis functions with κ ≤ kappa_max evaluated on a grid.
pub struct CharacterTable {
    grid: Arc<QuadratureGrid>,
    lines: Vec<SpectralLine>,
    values: Vec<Vec<f64>>,
}

impl CharacterTable {
    pub fn new(grid: &Arc<QuadratureGrid>, kappa_max: f64) -> Result<Self> {
        let lines = enumerate_dominant(grid.group(), kappa_max)?;
        Self::from_lines(grid, lines)
    }

    /// Table over an explicit line set (still resolution-checked).
    pub fn from_lines(grid: &Arc<QuadratureGrid>, lines: Vec<SpectralLine>) -> Result<Self> {
        let group = grid.group();
        check_resolution(grid.points(), &lines)?;
        let mut values = Vec::with_capacity(lines.len());
        for line in &lines {
            let g = grid.try_sample(|t| {
                character(line, &TorusAngles::new(group, t.to_vec())?)
            })?;
            values.push(g.values().to_vec());
        }
        Ok(Self {
            grid: Arc::clone(grid),
            lines,
            values,
        })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn values(&self, idx: usize) -> &[f64] {
        &self.values[idx]
    }

    /// The idx-th basis function as a grid.
    pub fn line_grid(&self, idx: usize) -> Result<ClassFunctionGrid> {
        ClassFunctionGrid::new(Arc::clone(&self.grid), self.values[idx].clone())
    }
}

/// The grid must resolve every enumerated frequency: N ≥ 2·max|λ+δ|_∞ + 2.
fn check_resolution(points: usize, lines: &[SpectralLine]) -> Result<()> {
    let max_freq2 = lines
        .iter()
        .flat_map(|l| l.weight().shifted_doubled())
        .map(|m| m.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let needed = max_freq2 + 2; // = 2·max|λ+δ| + 2
    if points < needed {
        return Err(Error::GridTooCoarse {
            needed,
            got: points,
        });
    }
    Ok(())
}

/// Coefficients of a class function in the character basis.
#[derive(Debug, Clone)]
pub struct SpectralExpansion {
    group: GroupDim,
    kappa_max: f64,
    lines: Vec<SpectralLine>,
    coeffs: Vec<f64>,
}

impl SpectralExpansion {
    pub fn new(
        group: GroupDim,
        kappa_max: f64,
        lines: Vec<SpectralLine>,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        if lines.len() != coeffs.len() {
            return Err(Error::InvalidInput("lines/coeffs length mismatch".into()));
        }
        Ok(Self {
            group,
            kappa_max,
            lines,
            coeffs,
        })
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of the constant character.
    pub fn mean(&self) -> f64 {
        self.lines
            .iter()
            .zip(&self.coeffs)
            .find(|(l, _)| l.kappa_quarters() == 0)
            .map(|(_, c)| *c)
            .unwrap_or(0.0)
    }

    /// ℓ² norm of the coefficients (= L² norm of the truncated function).
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Σ c_λ φ_λ(Θ).
    pub fn reconstruct(&self, angles: &TorusAngles) -> Result<f64> {
        let mut acc = 0.0;
        for (line, c) in self.lines.iter().zip(&self.coeffs) {
            if *c != 0.0 {
                acc += c * character(line, angles)?;
            }
        }
        Ok(acc)
    }

    /// Reconstruction sampled on a grid (via the precomputed table).
    pub fn reconstruct_on(&self, table: &CharacterTable) -> Result<ClassFunctionGrid> {
        if table.lines().len() != self.lines.len() {
            return Err(Error::GridMismatch(
                "character table does not match the expansion lines".into(),
            ));
        }
        let count = table.grid().node_count();
        let mut vals = vec![0.0f64; count];
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            for (v, b) in vals.iter_mut().zip(table.values(i)) {
                *v += c * b;
            }
        }
        ClassFunctionGrid::new(Arc::clone(table.grid()), vals)
    }

    /// Serialize to the expansion JSON schema.
    pub fn to_json(&self) -> String {
        let file = ExpansionFile {
            n: self.group.n(),
            kappa_max: self.kappa_max,
            terms: self
                .lines
                .iter()
                .zip(&self.coeffs)
                .map(|(l, c)| TermFile {
                    lambda: l.lambda().to_vec(),
                    kappa: l.kappa(),
                    coeff: *c,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("expansion serialization cannot fail")
    }

    /// Parse the expansion JSON schema, revalidating dominance and κ.
    pub fn from_json(s: &str) -> Result<Self> {
        let file: ExpansionFile = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("expansion JSON: {e}")))?;
        let group = GroupDim::new(file.n)?;
        let mut lines = Vec::with_capacity(file.terms.len());
        let mut coeffs = Vec::with_capacity(file.terms.len());
        for t in file.terms {
            let line = SpectralLine::new(DominantWeight::new(group, t.lambda)?);
            if (line.kappa() - t.kappa).abs() > 1e-9 * (1.0 + t.kappa.abs()) {
                return Err(Error::InvalidInput(format!(
                    "stored κ = {} disagrees with computed κ = {} for λ = {:?}",
                    t.kappa,
                    line.kappa(),
                    line.lambda()
                )));
            }
            lines.push(line);
            coeffs.push(t.coeff);
        }
        SpectralExpansion::new(group, file.kappa_max, lines, coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct ExpansionFile {
    n: usize,
    kappa_max: f64,
    terms: Vec<TermFile>,
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    lambda: Vec<i64>,
    kappa: f64,
    coeff: f64,
}

/// Expand a grid function: c_λ = ⟨f, φ_λ⟩ for every line with κ ≤ kappa_max.
pub fn expand(f: &ClassFunctionGrid, kappa_max: f64) -> Result<SpectralExpansion> {
    let table = CharacterTable::new(f.grid(), kappa_max)?;
    expand_with(f, &table, kappa_max)
}

/// [`expand`] against a precomputed table (the table's cutoff must match).
pub fn expand_with(
    f: &ClassFunctionGrid,
    table: &CharacterTable,
    kappa_max: f64,
) -> Result<SpectralExpansion> {
    let mut coeffs = Vec::with_capacity(table.lines().len());
    for i in 0..table.lines().len() {
        coeffs.push(inner_product(f, &table.line_grid(i)?)?);
    }
    SpectralExpansion::new(f.grid().group(), kappa_max, table.lines().to_vec(), coeffs)
}

/// Result of a Poisson solve, with the truncation residual of the data.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: SpectralExpansion,
    /// L² norm of the part of η outside the truncated span.
    pub out_of_band_residual: f64,
}

/// Solve -Lφ = η by spectral division. η must satisfy the compatibility
/// condition |⟨η, 1⟩| ≤ 1e-8; the solution is the mean-zero representative.
pub fn solve_poisson(eta: &ClassFunctionGrid, kappa_max: f64) -> Result<SolveOutcome> {
    let table = CharacterTable::new(eta.grid(), kappa_max)?;
    let expansion = expand_with(eta, &table, kappa_max)?;
    let mean = expansion.mean();
    if mean.abs() > 1e-8 {
        return Err(Error::IncompatibleRHS(mean));
    }
    // Residual of η against its in-band projection, in the weighted L² norm.
    let projected = expansion.reconstruct_on(&table)?;
    let diff_vals: Vec<f64> = eta
        .values()
        .iter()
        .zip(projected.values())
        .map(|(a, b)| a - b)
        .collect();
    let diff = ClassFunctionGrid::new(Arc::clone(eta.grid()), diff_vals)?;
    let out_of_band_residual = inner_product(&diff, &diff)?.max(0.0).sqrt();

    let coeffs: Vec<f64> = expansion
        .lines()
        .iter()
        .zip(expansion.coeffs())
        .map(|(line, c)| {
            if line.kappa_quarters() == 0 {
                0.0
            } else {
                c / line.kappa()
            }
        })
        .collect();
    let solution =
        SpectralExpansion::new(eta.grid().group(), kappa_max, expansion.lines().to_vec(), coeffs)?;
    Ok(SolveOutcome {
        solution,
        out_of_band_residual,
    })
}

/// Diagnostics of a grid application of L.
#[derive(Debug, Clone)]
pub struct ApplyReport {
    pub output: ClassFunctionGrid,
    /// Nodes too close to the singular set for the requested form, filled via
    /// the spectral-multiplier route instead.
    pub fallback_nodes: usize,
}

/// Apply the radial Laplacian to grid data with the requested form and exact
/// derivatives. Nodes where the form's coefficients degenerate are filled
/// through the eigen-expansion route (-Σ κ c_λ φ_λ), which is finite
/// everywhere; their count is reported.
pub fn apply_l_grid(
    f: &ClassFunctionGrid,
    form: LaplacianForm,
    kappa_max: f64,
) -> Result<ApplyReport> {
    let op = GridOperator::new(f, true)?;
    let count = f.grid().node_count();
    let mut out = vec![0.0f64; count];
    let mut fallback: Vec<usize> = Vec::new();
    for idx in 0..count {
        match op.apply_at(idx, form) {
            Ok(v) => out[idx] = v,
            Err(Error::SingularPoint(_)) => fallback.push(idx),
            Err(e) => return Err(e),
        }
    }
    if !fallback.is_empty() {
        let table = CharacterTable::new(f.grid(), kappa_max)?;
        let expansion = expand_with(f, &table, kappa_max)?;
        for &idx in &fallback {
            let mut acc = 0.0;
            for ((line, c), i) in expansion.lines().iter().zip(expansion.coeffs()).zip(0..) {
                if *c != 0.0 {
                    acc -= line.kappa() * c * table.values(i)[idx];
                }
            }
            out[idx] = acc;
        }
    }
    Ok(ApplyReport {
        output: ClassFunctionGrid::new(Arc::clone(f.grid()), out)?,
        fallback_nodes: fallback.len(),
    })
}

/// Basis function of a line as an evaluator (re-export convenience).
pub fn basis_function(line: &SpectralLine) -> CharacterFunction {
    CharacterFunction::new(line.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn dim(n: usize) -> GroupDim {
        GroupDim::new(n).unwrap()
    }

    #[test]
    fn expand_recovers_single_character() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 8.0).unwrap();
        for (i, line) in table.lines().iter().enumerate() {
            let f = table.line_grid(i).unwrap();
            let e = expand(&f, 8.0).unwrap();
            for (j, c) in e.coeffs().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (c - want).abs() <= 1e-9,
                    "λ={:?}: c[{j}]={c}",
                    line.lambda()
                );
            }
        }
    }

    #[test]
    fn expand_constant_function() {
        let g = dim(5);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let f = grid.sample(|_| 1.0);
        let e = expand(&f, 10.0).unwrap();
        for (line, c) in e.lines().iter().zip(e.coeffs()) {
            let want = if line.kappa_quarters() == 0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(*c, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn clebsch_gordan_so3() {
        // φ₁² = φ₀ + φ₁ + φ₂ on SO(3).
        let g = dim(3);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 6.0).unwrap();
        let phi1 = table.line_grid(1).unwrap();
        let sq = phi1.pointwise_mul(&phi1).unwrap();
        let e = expand(&sq, 6.0).unwrap();
        assert_eq!(e.coeffs().len(), 3);
        for c in e.coeffs() {
            assert_abs_diff_eq!(*c, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn reconstruct_roundtrip() {
        let g = dim(3);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 6.0).unwrap();
        let phi1 = table.line_grid(1).unwrap();
        let sq = phi1.pointwise_mul(&phi1).unwrap();
        let e = expand(&sq, 6.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let t = rng.gen_range(-PI..PI);
            let a = TorusAngles::new(g, vec![t]).unwrap();
            let want = {
                let v = ((1.5 * t).sin() / (0.5 * t).sin()).powi(2);
                if v.is_finite() { v } else { 9.0 }
            };
            assert_abs_diff_eq!(e.reconstruct(&a).unwrap(), want, epsilon = 1e-8);
        }
        // Zero expansion reconstructs to zero.
        let z = SpectralExpansion::new(g, 6.0, e.lines().to_vec(), vec![0.0; 3]).unwrap();
        assert_eq!(z.reconstruct(&TorusAngles::new(g, vec![1.0]).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn parseval_inequality() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let f = grid.sample(|t| (t[0].cos() + t[1].cos()).exp());
        let e = expand(&f, 12.0).unwrap();
        let norm2: f64 = e.coeffs().iter().map(|c| c * c).sum();
        let ff = inner_product(&f, &f).unwrap();
        assert!(norm2 <= ff + 1e-8, "{norm2} vs {ff}");
    }

    #[test]
    fn poisson_single_mode() {
        // η = κ_λ φ_λ solves to φ_λ.
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 64).unwrap();
        let table = CharacterTable::new(&grid, 8.0).unwrap();
        let idx = 1;
        let kappa = table.lines()[idx].kappa();
        let eta_vals: Vec<f64> = table.values(idx).iter().map(|v| kappa * v).collect();
        let eta = ClassFunctionGrid::new(Arc::clone(&grid), eta_vals).unwrap();
        let out = solve_poisson(&eta, 8.0).unwrap();
        for (j, c) in out.solution.coeffs().iter().enumerate() {
            let want = if j == idx { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(*c, want, epsilon = 1e-9);
        }
        assert!(out.out_of_band_residual <= 1e-9);
        // Solution mean is zero.
        assert!(out.solution.mean().abs() <= 1e-10);
    }

    #[test]
    fn poisson_zero_and_incompatible() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let zero = grid.sample(|_| 0.0);
        let out = solve_poisson(&zero, 6.0).unwrap();
        assert!(out.solution.coeffs().iter().all(|c| *c == 0.0));
        let one = grid.sample(|_| 1.0);
        assert!(matches!(
            solve_poisson(&one, 6.0),
            Err(Error::IncompatibleRHS(_))
        ));
    }

    #[test]
    fn poisson_roundtrip_through_operator() {
        // -L(solve(η)) must reproduce η for in-band η with zero mean.
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for n in [3usize, 4, 5] {
            let g = dim(n);
            let grid = QuadratureGrid::new(g, 64).unwrap();
            let table = CharacterTable::new(&grid, 20.0).unwrap();
            let coeffs: Vec<f64> = table
                .lines()
                .iter()
                .map(|l| {
                    if l.kappa_quarters() == 0 {
                        0.0
                    } else {
                        rng.gen_range(-1.0..1.0)
                    }
                })
                .collect();
            let eta_exp =
                SpectralExpansion::new(g, 20.0, table.lines().to_vec(), coeffs).unwrap();
            let eta = eta_exp.reconstruct_on(&table).unwrap();
            let solved = solve_poisson(&eta, 20.0).unwrap();
            let phi = solved.solution.reconstruct_on(&table).unwrap();
            let lphi = apply_l_grid(&phi, LaplacianForm::Equivalent, 20.0).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for idx in 0..grid.node_count() {
                let d = lphi.output.values()[idx] + eta.values()[idx];
                let w = grid.weights()[idx];
                num += d * d * w;
                den += eta.values()[idx] * eta.values()[idx] * w;
            }
            let rel = (num / den.max(1e-300)).sqrt();
            assert!(rel <= 1e-8, "n={n}: relative L² error {rel:.3e}");
            // Stability: ‖φ‖ ≤ ‖η‖ / κ_min.
            let kappa_min = table
                .lines()
                .iter()
                .map(|l| l.kappa())
                .filter(|k| *k > 0.0)
                .fold(f64::INFINITY, f64::min);
            assert!(solved.solution.norm() <= eta_exp.norm() / kappa_min + 1e-12);
        }
    }

    #[test]
    fn expansion_json_roundtrip() {
        let g = dim(4);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let f = grid.sample(|t| t[0].cos() + t[1].cos());
        let e = expand(&f, 8.0).unwrap();
        let s = e.to_json();
        let back = SpectralExpansion::from_json(&s).unwrap();
        assert_eq!(back.lines().len(), e.lines().len());
        for (a, b) in back.coeffs().iter().zip(e.coeffs()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn pair_lines_expand_and_solve_on_so6() {
        // n ≡ 2 (mod 4): the conjugate-pair lines carry the real basis
        // functions √2·Re χ and √2·Im χ; expansion, pointwise
        // reconstruction, and the Poisson solve must all close over them.
        let g = dim(6);
        let grid = QuadratureGrid::new(g, 32).unwrap();
        let table = CharacterTable::new(&grid, 16.0).unwrap();
        assert!(table.lines().iter().any(|l| !l.is_self_dual()));
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let coeffs: Vec<f64> = table
            .lines()
            .iter()
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let f_exp = SpectralExpansion::new(g, 16.0, table.lines().to_vec(), coeffs.clone()).unwrap();
        let f = f_exp.reconstruct_on(&table).unwrap();
        let e = expand(&f, 16.0).unwrap();
        for (a, b) in e.coeffs().iter().zip(&coeffs) {
            assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
        // Pointwise reconstruction away from the grid.
        for _ in 0..10 {
            let t: Vec<f64> = (0..3).map(|_| rng.gen_range(-PI..PI)).collect();
            let a = TorusAngles::new(g, t.clone()).unwrap();
            let direct: f64 = table
                .lines()
                .iter()
                .zip(&coeffs)
                .map(|(l, c)| c * crate::characters::character(l, &a).unwrap())
                .sum();
            assert!((e.reconstruct(&a).unwrap() - direct).abs() <= 1e-9);
        }
        // Poisson closes on the mean-zero part.
        let eta_coeffs: Vec<f64> = table
            .lines()
            .iter()
            .zip(&coeffs)
            .map(|(l, c)| if l.kappa_quarters() == 0 { 0.0 } else { *c })
            .collect();
        let eta = SpectralExpansion::new(g, 16.0, table.lines().to_vec(), eta_coeffs)
            .unwrap()
            .reconstruct_on(&table)
            .unwrap();
        let solved = solve_poisson(&eta, 16.0).unwrap();
        let phi = solved.solution.reconstruct_on(&table).unwrap();
        let lphi = apply_l_grid(&phi, LaplacianForm::Direct, 16.0).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for idx in 0..grid.node_count() {
            let d = lphi.output.values()[idx] + eta.values()[idx];
            let w = grid.weights()[idx];
            num += d * d * w;
            den += eta.values()[idx] * eta.values()[idx] * w;
        }
        assert!((num / den).sqrt() <= 1e-8, "relative error {:.3e}", (num / den).sqrt());
    }

    #[test]
    fn conservative_form_is_discretely_self_adjoint() {
        // ⟨Lf, g⟩_u = ⟨f, Lg⟩_u for the conservative form on band-limited
        // grid data.
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in [4usize, 5] {
            let g = dim(n);
            let grid = QuadratureGrid::new(g, 64).unwrap();
            let table = CharacterTable::new(&grid, 12.0).unwrap();
            let random_combo = |rng: &mut ChaCha8Rng| {
                let coeffs: Vec<f64> = (0..table.lines().len())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let e = SpectralExpansion::new(g, 12.0, table.lines().to_vec(), coeffs).unwrap();
                e.reconstruct_on(&table).unwrap()
            };
            let f = random_combo(&mut rng);
            let h = random_combo(&mut rng);
            let lf = apply_l_grid(&f, LaplacianForm::Conservative, 12.0).unwrap();
            let lh = apply_l_grid(&h, LaplacianForm::Conservative, 12.0).unwrap();
            let a = inner_product(&lf.output, &h).unwrap();
            let b = inner_product(&f, &lh.output).unwrap();
            assert!((a - b).abs() <= 1e-6, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn expansion_json_rejects_wrong_kappa() {
        let s = r#"{"n":4,"kappa_max":5.0,"terms":[{"lambda":[1,0],"kappa":2.5,"coeff":1.0}]}"#;
        assert!(matches!(
            SpectralExpansion::from_json(s),
            Err(Error::InvalidInput(_))
        ));
        let ok = r#"{"n":4,"kappa_max":5.0,"terms":[{"lambda":[1,0],"kappa":3.0,"coeff":1.0}]}"#;
        assert!(SpectralExpansion::from_json(ok).is_ok());
        // Non-dominant weights are rejected on load.
        let bad = r#"{"n":4,"kappa_max":5.0,"terms":[{"lambda":[0,1],"kappa":3.0,"coeff":1.0}]}"#;
        assert!(matches!(
            SpectralExpansion::from_json(bad),
            Err(Error::NotDominant(_, _))
        ));
    }

    #[test]
    fn grid_too_coarse_is_reported() {
        let g = dim(3);
        let grid = QuadratureGrid::new(g, 8).unwrap();
        let f = grid.sample(|_| 1.0);
        // κ ≤ 30 needs frequencies up to 5.5, i.e. N ≥ 13.
        assert!(matches!(
            expand(&f, 30.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
