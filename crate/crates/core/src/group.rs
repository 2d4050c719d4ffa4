//! Group dimension bookkeeping for SO(n).
//!
//! Everything downstream branches on the parity of n = 2p or n = 2p+1, and
//! almost every formula involves the constant γ_n = Σ_j (p-j)² (even) or
//! Σ_j (p-j+1/2)² (odd). Both are kept in exact quarter-integer arithmetic so
//! that spectral cutoffs never depend on floating-point rounding.

use crate::error::{Error, Result};

/// Parity of the ambient dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// n = 2p
    Even,
    /// n = 2p + 1
    Odd,
}

/// The pair (n, p) with parity and the constant γ_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupDim {
    n: usize,
    p: usize,
    parity: Parity,
    /// 4·γ_n, exact.
    gamma_quarters: i64,
}

impl GroupDim {
    /// Build the descriptor for SO(n). Requires n ≥ 3.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("n must be >= 3, got {n}")));
        }
        let p = n / 2;
        let parity = if n % 2 == 0 { Parity::Even } else { Parity::Odd };
        let gamma_quarters: i64 = (1..=p as i64)
            .map(|j| {
                let twice = match parity {
                    Parity::Even => 2 * (p as i64 - j),
                    Parity::Odd => 2 * (p as i64 - j) + 1,
                };
                twice * twice
            })
            .sum();
        Ok(Self {
            n,
            p,
            parity,
            gamma_quarters,
        })
    }

    /// Ambient dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Torus rank p = ⌊n/2⌋.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Parity of n.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_even(&self) -> bool {
        self.parity == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.parity == Parity::Odd
    }

    /// γ_n as a double.
    pub fn gamma(&self) -> f64 {
        self.gamma_quarters as f64 / 4.0
    }

    /// 4·γ_n, exact.
    pub fn gamma_quarters(&self) -> i64 {
        self.gamma_quarters
    }

    /// The shift δ with δ_ℓ = p-ℓ (even) or p-ℓ+1/2 (odd), ℓ = 1..p.
    pub fn delta(&self) -> Vec<f64> {
        self.delta_doubled()
            .into_iter()
            .map(|d| d as f64 / 2.0)
            .collect()
    }

    /// 2·δ, exact integers.
    pub fn delta_doubled(&self) -> Vec<i64> {
        (1..=self.p as i64)
            .map(|l| match self.parity {
                Parity::Even => 2 * (self.p as i64 - l),
                Parity::Odd => 2 * (self.p as i64 - l) + 1,
            })
            .collect()
    }
}
