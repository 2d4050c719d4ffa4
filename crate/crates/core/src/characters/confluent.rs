//! Confluent evaluation of Weyl-character determinant ratios.
//!
//! The character is a ratio of alternants with rows t ↦ 2cos(mt) or
//! t ↦ 2sin(mt). Near the singular set (coinciding angles, or angles at 0/π)
//! both determinants vanish and the plain ratio loses all precision. This
//! module evaluates the ratio through divided differences: rows belonging to
//! a cluster of nearly-equal angles are replaced by Newton divided differences
//! of the row function, which removes the shared Vandermonde factor exactly
//! (it is identical in numerator and denominator, so it cancels in the ratio)
//! and stays finite at exact confluence, where the divided differences become
//! Taylor coefficients.
//!
//! Clusters at 0 and π need one extra step: the row functions are even or odd
//! around those points, so nearly-equal angles ±c collapse onto the same
//! value; the rows are rewritten as series in z = c² (odd rows carry an
//! explicit prefactor c per row). Divided differences of the z-series are
//! computed from the complete homogeneous symmetric polynomials of the nodes,
//! which involves no cancellation.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
/// Angles closer than this (as angles, on [0, π]) are clustered.
const CLUSTER_GAP: f64 = 0.02;
/// A cluster whose angles come this close to 0 or π is treated as sitting on
/// the endpoint, where the ± identification forces the even/odd split.
const ENDPOINT_RADIUS: f64 = 0.04;
/// Hard cap on series length; reaching it signals a bug.
const SERIES_MAX: usize = 96;

/// Row entry function of a determinant: 2cos(mθ) or 2sin(mθ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EntryKind {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy)]
struct Member {
    /// Canonical coordinate c ∈ [0, π] with θ = σ·c + 2πw.
    c: f64,
    sigma: f64,
    /// Parity of the winding number w; only relevant for half-integer
    /// frequencies, where a full turn flips the sign of the entries.
    neg_wind: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ClusterKind {
    Interior { center: f64 },
    AtZero,
    AtPi,
}

#[derive(Debug, Clone)]
struct Cluster {
    kind: ClusterKind,
    members: Vec<Member>,
}

/// Shared clustering of the angle list. Numerator and denominator of a
/// character use the same plan, so every factor the plan strips out is either
/// common to both (and cancels in the ratio) or reported explicitly.
#[derive(Debug, Clone)]
pub(crate) struct ClusterPlan {
    clusters: Vec<Cluster>,
    half_integer: bool,
    p: usize,
}

/// Determinant of one confluent alternant, split into the pieces the ratio
/// assembler needs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ConfluentDet {
    /// Determinant of the transformed (divided-difference) rows.
    pub det: f64,
    /// Product of the ±1 signs extracted from rows.
    pub sign: f64,
    /// Product of the odd-row prefactors (c per member of an odd-type
    /// endpoint cluster); exactly zero at exact degeneracy. Must be applied
    /// unless the other side of the ratio carries the identical product.
    pub odd_factor: f64,
}

impl ClusterPlan {
    pub(crate) fn new(theta: &[f64], half_integer: bool) -> Self {
        let mut members: Vec<Member> = theta
            .iter()
            .map(|&t| {
                let psi = t.rem_euclid(TWO_PI);
                let (c, sigma) = if psi <= PI { (psi, 1.0) } else { (TWO_PI - psi, -1.0) };
                let w = ((t - sigma * c) / TWO_PI).round() as i64;
                Member {
                    c,
                    sigma,
                    neg_wind: w.rem_euclid(2) == 1,
                }
            })
            .collect();
        members.sort_by(|a, b| a.c.partial_cmp(&b.c).unwrap());

        let mut clusters: Vec<Cluster> = Vec::new();
        for m in members {
            match clusters.last_mut() {
                Some(cl) if m.c - cl.members.last().unwrap().c <= CLUSTER_GAP => {
                    cl.members.push(m);
                }
                _ => clusters.push(Cluster {
                    kind: ClusterKind::Interior { center: 0.0 },
                    members: vec![m],
                }),
            }
        }
        for cl in &mut clusters {
            let min_c = cl.members.first().unwrap().c;
            let max_c = cl.members.last().unwrap().c;
            cl.kind = if min_c <= ENDPOINT_RADIUS {
                ClusterKind::AtZero
            } else if PI - max_c <= ENDPOINT_RADIUS {
                ClusterKind::AtPi
            } else {
                let center =
                    cl.members.iter().map(|m| m.c).sum::<f64>() / cl.members.len() as f64;
                ClusterKind::Interior { center }
            };
        }
        Self {
            clusters,
            half_integer,
            p: theta.len(),
        }
    }

    /// Evaluate the confluent determinant for entries `kind`(m_ℓ · θ_k) with
    /// doubled frequencies `freq2` (so half-integers stay exact).
    pub(crate) fn det(&self, kind: EntryKind, freq2: &[i64]) -> Result<ConfluentDet> {
        debug_assert_eq!(freq2.len(), self.p);
        let mut mat = DMatrix::<f64>::zeros(self.p, self.p);
        let mut sign = 1.0f64;
        let mut odd_factor = 1.0f64;

        let mut row_base = 0usize;
        for cl in &self.clusters {
            for m in &cl.members {
                sign *= row_sign(kind, self.half_integer, m);
            }
            match cl.kind {
                ClusterKind::Interior { center } => {
                    for (l, &f2) in freq2.iter().enumerate() {
                        let col = interior_rows(kind, f2 as f64 / 2.0, center, &cl.members)?;
                        for (r, v) in col.into_iter().enumerate() {
                            mat[(row_base + r, l)] = v;
                        }
                    }
                }
                ClusterKind::AtZero | ClusterKind::AtPi => {
                    let at_pi = cl.kind == ClusterKind::AtPi;
                    if endpoint_is_odd(kind, self.half_integer, at_pi) {
                        for m in &cl.members {
                            odd_factor *= if at_pi { PI - m.c } else { m.c };
                        }
                    }
                    for (l, &f2) in freq2.iter().enumerate() {
                        let col = endpoint_rows(kind, self.half_integer, at_pi, f2, &cl.members)?;
                        for (r, v) in col.into_iter().enumerate() {
                            mat[(row_base + r, l)] = v;
                        }
                    }
                }
            }
            row_base += cl.members.len();
        }
        Ok(ConfluentDet {
            det: mat.determinant(),
            sign,
            odd_factor,
        })
    }
}

/// Sign pulled out of a row so the remaining function of c is shared by the
/// whole cluster: sin is odd in σ; half-integer frequencies flip under a full
/// 2π turn.
fn row_sign(kind: EntryKind, half_integer: bool, m: &Member) -> f64 {
    let mut s = 1.0;
    if kind == EntryKind::Sin {
        s *= m.sigma;
    }
    if half_integer && m.neg_wind {
        s = -s;
    }
    s
}

/// Whether the endpoint-rewritten row function is odd in the local variable.
fn endpoint_is_odd(kind: EntryKind, half_integer: bool, at_pi: bool) -> bool {
    match (kind, half_integer, at_pi) {
        (EntryKind::Cos, _, false) => false,
        (EntryKind::Sin, _, false) => true,
        (EntryKind::Cos, false, true) => false,
        (EntryKind::Sin, false, true) => true,
        // Half-integer frequencies swap parity at π.
        (EntryKind::Cos, true, true) => true,
        (EntryKind::Sin, true, true) => false,
    }
}

/// Divided-difference rows of f(t) = 2cos(mt) or 2sin(mt) over the cluster
/// nodes, computed from the Taylor series around the cluster center:
/// f[t_0..t_r] = Σ_s f^{(r+s)}(t̄)/(r+s)! · h_s(t_0-t̄, ..., t_r-t̄).
fn interior_rows(kind: EntryKind, m: f64, center: f64, members: &[Member]) -> Result<Vec<f64>> {
    let count = members.len();
    // coef[k] = f^{(k)}(t̄)/k!
    let max_k = SERIES_MAX + count;
    let mut coef = vec![0.0f64; max_k + 1];
    let (s0, c0) = (m * center).sin_cos();
    let cycle = match kind {
        EntryKind::Cos => [c0, -s0, -c0, s0],
        EntryKind::Sin => [s0, c0, -s0, -c0],
    };
    let mut w = 2.0f64; // 2 m^k / k!
    for (k, c) in coef.iter_mut().enumerate() {
        *c = w * cycle[k % 4];
        w *= m / (k as f64 + 1.0);
    }
    series_rows(&coef, &members.iter().map(|mb| mb.c - center).collect::<Vec<_>>())
}

/// Divided-difference rows over an endpoint cluster, in the variable
/// z = c² (at 0) or z = (π-c)² (at π). Even rows are G(z) with
/// f(c) = G(c²); odd rows are H(z) with f(c) = c·H(c²), the prefactors being
/// handled by the caller through `odd_factor`.
fn endpoint_rows(
    kind: EntryKind,
    half_integer: bool,
    at_pi: bool,
    freq2: i64,
    members: &[Member],
) -> Result<Vec<f64>> {
    let m = freq2 as f64 / 2.0;
    let odd = endpoint_is_odd(kind, half_integer, at_pi);
    // Column sign and the base trig family after the substitution s = π - c.
    let colsign = if !at_pi {
        1.0
    } else if !half_integer {
        let mi = freq2 / 2;
        let pow = if mi.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        match kind {
            EntryKind::Cos => pow,        // cos(m(π-s)) = (-1)^m cos(ms)
            EntryKind::Sin => -pow,       // sin(m(π-s)) = -(-1)^m sin(ms)
        }
    } else {
        let q = (freq2 - 1) / 2;
        if q.rem_euclid(2) == 0 { 1.0 } else { -1.0 } // both families pick up (-1)^q
    };

    let count = members.len();
    let max_q = SERIES_MAX + count;
    let mut coef = vec![0.0f64; max_q + 1];
    if odd {
        // H(z): f = c·H(c²), H_q = 2(-1)^q m^{2q+1}/(2q+1)!
        let mut b = 2.0 * m;
        for (q, c) in coef.iter_mut().enumerate() {
            *c = colsign * b;
            let k = q as f64;
            b *= -m * m / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
    } else {
        // G(z): f = G(c²), G_q = 2(-1)^q m^{2q}/(2q)!
        let mut a = 2.0;
        for (q, c) in coef.iter_mut().enumerate() {
            *c = colsign * a;
            let k = q as f64;
            a *= -m * m / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
    }
    let nodes: Vec<f64> = members
        .iter()
        .map(|mb| {
            let v = if at_pi { PI - mb.c } else { mb.c };
            v * v
        })
        .collect();
    series_rows(&coef, &nodes)
}

/// rows[r] = Σ_s coef[r+s] · h_s(x_0..x_r), where h_s is the complete
/// homogeneous symmetric polynomial of the first r+1 nodes. This is exactly
/// the Newton divided difference of Σ coef[k] x^k over those nodes (repeated
/// nodes included), and the node values are small, so the series converges
/// superexponentially without cancellation.
fn series_rows(coef: &[f64], nodes: &[f64]) -> Result<Vec<f64>> {
    let count = nodes.len();
    let mut h = vec![0.0f64; SERIES_MAX + 1];
    h[0] = 1.0;
    let mut rows = Vec::with_capacity(count);
    for (r, &x) in nodes.iter().enumerate() {
        // h_s(x_0..x_r) = h_s(x_0..x_{r-1}) + x_r h_{s-1}(x_0..x_r);
        // ascending s uses the already-updated h_{s-1}.
        for s in 1..=SERIES_MAX {
            h[s] += x * h[s - 1];
        }
        let mut acc = 0.0f64;
        let mut quiet = 0;
        let mut converged = false;
        for s in 0..=SERIES_MAX {
            let term = coef[r + s] * h[s];
            acc += term;
            if term.abs() <= 1e-18 * (1.0 + acc.abs()) {
                quiet += 1;
                if quiet >= 3 {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if !converged {
            return Err(Error::NumericalDegeneracy(
                "divided-difference series did not converge".into(),
            ));
        }
        rows.push(acc);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_cluster_reproduces_plain_determinant_ratio() {
        // Well-separated angles: every cluster is a singleton, so the
        // confluent determinants match the raw ones up to shared row order.
        let theta = [0.7, 1.9];
        let plan = ClusterPlan::new(&theta, false);
        let num = plan.det(EntryKind::Cos, &[4, 0]).unwrap();
        let den = plan.det(EntryKind::Cos, &[2, 0]).unwrap();
        let raw = |f2: &[i64]| {
            let m = DMatrix::<f64>::from_fn(2, 2, |k, l| (f2[l] as f64 / 2.0 * theta[k]).cos() * 2.0);
            m.determinant()
        };
        let got = num.det * num.sign / (den.det * den.sign);
        let want = raw(&[4, 0]) / raw(&[2, 0]);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn divided_difference_row_matches_definition() {
        // f(t) = 2cos(3t) around t̄, two nearby nodes: the divided difference
        // (f(a)-f(b))/(a-b) must match the series row.
        let center = 1.1;
        let members = [
            Member { c: 1.0999, sigma: 1.0, neg_wind: false },
            Member { c: 1.1002, sigma: 1.0, neg_wind: false },
        ];
        let rows = interior_rows(EntryKind::Cos, 3.0, center, &members).unwrap();
        let f = |t: f64| 2.0 * (3.0 * t).cos();
        assert!((rows[0] - f(1.0999)).abs() < 1e-13);
        let dd = (f(1.1002) - f(1.0999)) / (1.1002 - 1.0999);
        assert!((rows[1] - dd).abs() < 1e-8, "{} vs {dd}", rows[1]);
    }

    #[test]
    fn endpoint_even_rows_reduce_to_value_and_z_derivative() {
        // G(z) = 2cos(m√z): at exact confluence c₀ = c₁ = 0 the rows are
        // G(0) = 2 and G'(0) = -m².
        let members = [
            Member { c: 0.0, sigma: 1.0, neg_wind: false },
            Member { c: 0.0, sigma: 1.0, neg_wind: false },
        ];
        let rows = endpoint_rows(EntryKind::Cos, false, false, 6, &members).unwrap();
        assert!((rows[0] - 2.0).abs() < 1e-15);
        assert!((rows[1] + 9.0).abs() < 1e-12);
    }
}
