//! Dominant weights, the shift δ, and Laplacian eigenvalues κ_λ.
//!
//! Weights live on ℤ^p. Dominance means λ_1 ≥ ... ≥ λ_{p-1} ≥ |λ_p| (even n,
//! where the last entry may be negative) or λ_1 ≥ ... ≥ λ_p ≥ 0 (odd n).
//! κ_λ = ‖λ+δ‖² - ‖δ‖² is kept in exact quarter-integer arithmetic so the
//! enumeration cutoff is never decided by floating-point rounding.

use crate::error::{Error, Result};
use crate::group::{GroupDim, Parity};

/// A dominant weight λ ∈ ℤ^p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantWeight {
    group: GroupDim,
    lambda: Vec<i64>,
}

impl DominantWeight {
    /// Validate the chamber inequalities and wrap.
    pub fn new(group: GroupDim, lambda: Vec<i64>) -> Result<Self> {
        if lambda.len() != group.p() {
            return Err(Error::InvalidInput(format!(
                "weight length {} does not match p={}",
                lambda.len(),
                group.p()
            )));
        }
        if !is_dominant(group, &lambda) {
            return Err(Error::NotDominant(lambda, group.n()));
        }
        Ok(Self { group, lambda })
    }

    pub fn group(&self) -> GroupDim {
        self.group
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    /// 2(λ+δ), exact integers. These are the determinant exponents doubled.
    pub fn shifted_doubled(&self) -> Vec<i64> {
        self.lambda
            .iter()
            .zip(self.group.delta_doubled())
            .map(|(l, d)| 2 * l + d)
            .collect()
    }
}

fn is_dominant(group: GroupDim, lambda: &[i64]) -> bool {
    let p = group.p();
    for j in 0..p.saturating_sub(1) {
        let next = if j + 1 == p - 1 && group.is_even() {
            lambda[j + 1].abs()
        } else {
            lambda[j + 1]
        };
        if lambda[j] < next {
            return false;
        }
    }
    match group.parity() {
        Parity::Even => lambda[p - 1].abs() <= if p >= 2 { lambda[p - 2] } else { i64::MAX },
        Parity::Odd => lambda[p - 1] >= 0,
    }
}

/// The shift δ: δ_ℓ = p-ℓ (even n) or p-ℓ+1/2 (odd n).
pub fn shift_delta(group: GroupDim) -> Vec<f64> {
    group.delta()
}

/// 4·κ_λ, exact: ‖2(λ+δ)‖² - ‖2δ‖².
pub fn casimir_quarters(w: &DominantWeight) -> i64 {
    let shifted = w.shifted_doubled();
    let sq: i64 = shifted.iter().map(|x| x * x).sum();
    sq - w.group().gamma_quarters()
}

/// The Laplacian eigenvalue κ_λ = ‖λ+δ‖² - ‖δ‖².
pub fn casimir_eigenvalue(w: &DominantWeight) -> f64 {
    casimir_quarters(w) as f64 / 4.0
}

/// One line of the spectrum: a dominant weight with δ, κ_λ and the dimension
/// of the corresponding irreducible representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralLine {
    weight: DominantWeight,
    kappa_quarters: i64,
    dim: u64,
}

impl SpectralLine {
    pub fn new(weight: DominantWeight) -> Self {
        let kappa_quarters = casimir_quarters(&weight);
        let dim = weyl_dimension(&weight);
        Self {
            weight,
            kappa_quarters,
            dim,
        }
    }

    pub fn group(&self) -> GroupDim {
        self.weight.group()
    }

    pub fn weight(&self) -> &DominantWeight {
        &self.weight
    }

    pub fn lambda(&self) -> &[i64] {
        self.weight.lambda()
    }

    pub fn delta(&self) -> Vec<f64> {
        self.weight.group().delta()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_quarters as f64 / 4.0
    }

    pub fn kappa_quarters(&self) -> i64 {
        self.kappa_quarters
    }

    /// Dimension of the representation (= character value at Θ = 0).
    pub fn dim(&self) -> u64 {
        self.dim
    }

    /// True when the representation is self-dual, i.e. its character is
    /// real-valued on the whole group. The only non-self-dual cases are
    /// n ≡ 2 (mod 4) with λ_p ≠ 0, which come in conjugate pairs (λ', ±λ_p).
    pub fn is_self_dual(&self) -> bool {
        let g = self.group();
        if g.is_odd() || g.p() % 2 == 0 {
            return true;
        }
        *self.lambda().last().unwrap() == 0
    }
}

/// Weyl dimension formula in exact integer arithmetic.
///
/// With l = 2(λ+δ) and d = 2δ:
///   even n: dim = Π_{i<j} (l_i²-l_j²)/(d_i²-d_j²)
///   odd n:  dim = Π_{i<j} (l_i²-l_j²)/(d_i²-d_j²) · Π_i l_i/d_i
pub fn weyl_dimension(w: &DominantWeight) -> u64 {
    let g = w.group();
    let l = w.shifted_doubled();
    let d = g.delta_doubled();
    let p = g.p();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..p {
        for j in (i + 1)..p {
            num *= (l[i] * l[i] - l[j] * l[j]) as i128;
            den *= (d[i] * d[i] - d[j] * d[j]) as i128;
        }
    }
    if g.is_odd() {
        for i in 0..p {
            num *= l[i] as i128;
            den *= d[i] as i128;
        }
    }
    debug_assert!(den != 0 && num % den == 0);
    (num / den).unsigned_abs() as u64
}

/// Enumerate exactly the dominant weights with κ_λ ≤ kappa_max, sorted by
/// (κ_λ, lexicographic λ). Completeness: ‖λ+δ‖² = κ_λ + γ_n grows with the
/// weight, so the search is confined to the box ‖λ+δ‖_∞ ≤ √(kappa_max + γ_n).
pub fn enumerate_dominant(group: GroupDim, kappa_max: f64) -> Result<Vec<SpectralLine>> {
    if kappa_max.is_nan() || kappa_max < 0.0 {
        return Err(Error::InvalidInput(format!(
            "kappa_max must be >= 0, got {kappa_max}"
        )));
    }
    // Inclusive cutoff in exact quarters, with a hair of slack so that a
    // kappa_max sitting exactly on a spectral value includes it.
    let cutoff_quarters = (4.0 * kappa_max + 1e-6).floor() as i64;
    let bound_doubled = {
        let b2 = cutoff_quarters + group.gamma_quarters();
        (b2 as f64).sqrt().floor() as i64 + 1
    };
    let p = group.p();
    let delta2 = group.delta_doubled();
    let mut out: Vec<SpectralLine> = Vec::new();
    let mut lambda = vec![0i64; p];
    recurse(
        group,
        &delta2,
        bound_doubled,
        cutoff_quarters,
        0,
        &mut lambda,
        &mut out,
    );
    out.sort_by(|a, b| {
        a.kappa_quarters()
            .cmp(&b.kappa_quarters())
            .then_with(|| a.lambda().cmp(b.lambda()))
    });
    Ok(out)
}

fn recurse(
    group: GroupDim,
    delta2: &[i64],
    bound2: i64,
    cutoff_quarters: i64,
    idx: usize,
    lambda: &mut Vec<i64>,
    out: &mut Vec<SpectralLine>,
) {
    let p = group.p();
    if idx == p {
        let w = DominantWeight {
            group,
            lambda: lambda.clone(),
        };
        let kq = casimir_quarters(&w);
        if kq <= cutoff_quarters {
            out.push(SpectralLine::new(w));
        }
        return;
    }
    // |2λ_idx + 2δ_idx| ≤ bound2 within the box.
    let hi_box = (bound2 - delta2[idx]) / 2;
    let hi = if idx == 0 { hi_box } else { lambda[idx - 1].min(hi_box) };
    let lo = if idx == p - 1 && group.is_even() {
        // Last coordinate of an even group may be negative, bounded by both
        // the box and -λ_{p-1}.
        let cap = if p >= 2 { lambda[p - 2] } else { hi };
        -cap.min((bound2 + delta2[idx]) / 2)
    } else {
        0
    };
    let mut v = lo;
    while v <= hi {
        lambda[idx] = v;
        recurse(group, delta2, bound2, cutoff_quarters, idx + 1, lambda, out);
        v += 1;
    }
    lambda[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dim(n: usize) -> GroupDim {
        GroupDim::new(n).unwrap()
    }

    #[test]
    fn shift_delta_examples() {
        assert_eq!(shift_delta(dim(4)), vec![1.0, 0.0]);
        assert_eq!(shift_delta(dim(3)), vec![0.5]);
        assert_eq!(shift_delta(dim(7)), vec![2.5, 1.5, 0.5]);
    }

    #[test]
    fn casimir_examples() {
        let g3 = dim(3);
        for l in 0..5i64 {
            let w = DominantWeight::new(g3, vec![l]).unwrap();
            assert_eq!(casimir_eigenvalue(&w), (l * (l + 1)) as f64);
        }
        let g4 = dim(4);
        let w = DominantWeight::new(g4, vec![1, 0]).unwrap();
        assert_eq!(casimir_eigenvalue(&w), 3.0);
        let w0 = DominantWeight::new(g4, vec![0, 0]).unwrap();
        assert_eq!(casimir_eigenvalue(&w0), 0.0);
    }

    #[test]
    fn casimir_zero_iff_trivial_weight() {
        for n in 3..=8 {
            for line in enumerate_dominant(dim(n), 40.0).unwrap() {
                let zero = line.lambda().iter().all(|&l| l == 0);
                assert_eq!(line.kappa_quarters() == 0, zero);
                assert!(line.kappa_quarters() >= 0);
            }
        }
    }

    #[test]
    fn rejects_non_dominant() {
        assert!(DominantWeight::new(dim(5), vec![1, 2]).is_err());
        assert!(DominantWeight::new(dim(5), vec![1, -1]).is_err());
        // Even case allows a negative last entry bounded by the previous one.
        assert!(DominantWeight::new(dim(4), vec![1, -1]).is_ok());
        assert!(DominantWeight::new(dim(4), vec![1, -2]).is_err());
    }

    #[test]
    fn enumerate_n3_kappa6() {
        let lines = enumerate_dominant(dim(3), 6.0).unwrap();
        let got: Vec<(Vec<i64>, f64)> = lines
            .iter()
            .map(|l| (l.lambda().to_vec(), l.kappa()))
            .collect();
        assert_eq!(
            got,
            vec![(vec![0], 0.0), (vec![1], 2.0), (vec![2], 6.0)]
        );
    }

    #[test]
    fn enumerate_n4_zero_cutoff() {
        let lines = enumerate_dominant(dim(4), 0.0).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].lambda(), &[0, 0]);
    }

    #[test]
    fn enumerate_n4_includes_sign_pair() {
        let lines = enumerate_dominant(dim(4), 4.0).unwrap();
        let has = |lam: &[i64]| lines.iter().any(|l| l.lambda() == lam);
        assert!(has(&[1, 1]));
        assert!(has(&[1, -1]));
        let k = |lam: &[i64]| {
            lines
                .iter()
                .find(|l| l.lambda() == lam)
                .map(|l| l.kappa())
                .unwrap()
        };
        assert_eq!(k(&[1, -1]), 4.0);
        assert_eq!(k(&[1, 1]), 4.0);
    }

    #[test]
    fn eigenvalue_count_n3() {
        for lmax in 0..8i64 {
            let k = (lmax * (lmax + 1)) as f64;
            let lines = enumerate_dominant(dim(3), k).unwrap();
            assert_eq!(lines.len() as i64, lmax + 1);
        }
    }

    #[test]
    fn weyl_dimension_examples() {
        // SO(3): dim = 2l+1. SO(4) standard: 4. SO(5) standard: 5.
        for l in 0..6i64 {
            let w = DominantWeight::new(dim(3), vec![l]).unwrap();
            assert_eq!(weyl_dimension(&w), (2 * l + 1) as u64);
        }
        assert_eq!(
            weyl_dimension(&DominantWeight::new(dim(4), vec![1, 0]).unwrap()),
            4
        );
        assert_eq!(
            weyl_dimension(&DominantWeight::new(dim(5), vec![1, 0]).unwrap()),
            5
        );
        // Adjoint of SO(4) splits: (1,1) and (1,-1) are both 3-dimensional.
        assert_eq!(
            weyl_dimension(&DominantWeight::new(dim(4), vec![1, 1]).unwrap()),
            3
        );
        assert_eq!(
            weyl_dimension(&DominantWeight::new(dim(4), vec![1, -1]).unwrap()),
            3
        );
        // SO(6) ≅ SU(4)/±: (1,1,±1) are the two 10-dimensional pieces of Λ².
        assert_eq!(
            weyl_dimension(&DominantWeight::new(dim(6), vec![1, 1, 1]).unwrap()),
            10
        );
    }

    #[test]
    fn self_duality_classification() {
        assert!(SpectralLine::new(DominantWeight::new(dim(4), vec![1, 1]).unwrap()).is_self_dual());
        assert!(SpectralLine::new(DominantWeight::new(dim(6), vec![1, 1, 0]).unwrap()).is_self_dual());
        assert!(!SpectralLine::new(DominantWeight::new(dim(6), vec![1, 1, 1]).unwrap()).is_self_dual());
        assert!(SpectralLine::new(DominantWeight::new(dim(7), vec![2, 1, 1]).unwrap()).is_self_dual());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn enumeration_monotone_and_valid(n in 3usize..=8, k1 in 0.0f64..20.0, extra in 0.0f64..20.0) {
            let g = dim(n);
            let small = enumerate_dominant(g, k1).unwrap();
            let large = enumerate_dominant(g, k1 + extra).unwrap();
            // Monotone completeness under cutoff growth.
            for line in &small {
                prop_assert!(large.iter().any(|l| l.lambda() == line.lambda()));
            }
            // Every enumerated line is dominant, within cutoff, and κ from the
            // formula agrees with a brute-force norm in exact arithmetic.
            for line in &large {
                let w = DominantWeight::new(g, line.lambda().to_vec());
                prop_assert!(w.is_ok());
                let brute: i64 = line.weight().shifted_doubled().iter().map(|x| x*x).sum::<i64>()
                    - g.gamma_quarters();
                prop_assert_eq!(brute, line.kappa_quarters());
                prop_assert!(line.kappa() <= k1 + extra + 1e-9);
            }
        }
    }
}
