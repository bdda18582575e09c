//! Elementary symmetric functions of matrix spectra.
//!
//! `Sₖ(A)` is the coefficient of `t^{n−k}` in `det(A + tI)`, computed here from
//! the eigenvalues by multiplying out `Π (t + λᵢ)` one factor at a time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};

/// `C(n, k)` as a float. Exact for every `n` this crate handles.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// All of `S₀, …, Sₙ` for the given eigenvalues.
pub fn elementary_symmetric_all(eigs: &[f64]) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(eigs.len() + 1);
    coeffs.push(1.0);
    for &lambda in eigs {
        coeffs.push(0.0);
        for j in (1..coeffs.len()).rev() {
            coeffs[j] += lambda * coeffs[j - 1];
        }
    }
    coeffs
}

/// `Sₖ(λ)`, the sum over all `k`-subsets of products of eigenvalues.
pub fn elementary_symmetric(eigs: &[f64], k: usize) -> Result<f64> {
    let n = eigs.len();
    if k > n {
        return Err(Error::IndexOutOfRange { k, lo: 0, hi: n });
    }
    Ok(elementary_symmetric_all(eigs)[k])
}

/// `s[k] = Sₖ(A)` for `k = 0..=n`, with `s[0] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmSpectrum {
    pub n: usize,
    pub s: Vec<f64>,
}

impl SymmSpectrum {
    pub fn from_eigenvalues(eigs: &[f64]) -> Self {
        SymmSpectrum {
            n: eigs.len(),
            s: elementary_symmetric_all(eigs),
        }
    }

    pub fn of_matrix(a: &SymmetricMatrix) -> Result<Self> {
        let eigs = linalg::eigenvalues_symmetric(a, linalg::JACOBI_TOL)?;
        Ok(Self::from_eigenvalues(&eigs))
    }

    /// `Sₖ` for `0 ≤ k ≤ n`.
    pub fn get(&self, k: usize) -> Result<f64> {
        self.s
            .get(k)
            .copied()
            .ok_or(Error::IndexOutOfRange { k, lo: 0, hi: self.n })
    }
}

/// Convenience wrapper for [`SymmSpectrum::of_matrix`].
pub fn symm_of_matrix(a: &SymmetricMatrix) -> Result<SymmSpectrum> {
    SymmSpectrum::of_matrix(a)
}

/// Normalized mean `pₖ = Sₖ / C(n, k)`.
pub fn maclaurin_mean(spec: &SymmSpectrum, k: usize) -> Result<f64> {
    if k == 0 || k > spec.n {
        return Err(Error::IndexOutOfRange { k, lo: 1, hi: spec.n });
    }
    Ok(spec.s[k] / binomial(spec.n, k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaclaurinReport {
    pub holds: bool,
    /// True when every pair sits at equality within `tol`.
    pub all_equal: bool,
    pub worst_pair: (usize, usize),
    /// Smallest `1 − pₖ^m / p_m^k` over all pairs `m < k` (0 when n = 1).
    pub worst_slack: f64,
    /// Eigenvalues in `[−tol·scale, 0)` that were clamped to zero.
    pub clamped: usize,
}

/// Relative slack `1 − pₖ^m / p_m^k`, computed in log space.
fn chain_slack(pm: f64, pk: f64, m: usize, k: usize) -> f64 {
    match (pm > 0.0, pk > 0.0) {
        (true, true) => {
            let log_ratio = m as f64 * pk.ln() - k as f64 * pm.ln();
            -log_ratio.exp_m1()
        }
        (true, false) => 1.0,
        (false, false) => 0.0,
        (false, true) => f64::NEG_INFINITY,
    }
}

/// Checks `pₖ^m ≤ p_m^k · (1 + tol)` for every `1 ≤ m < k ≤ n`.
///
/// The matrix must be PSD within `tol`; slightly negative eigenvalues are
/// clamped to zero before the means are formed.
pub fn check_maclaurin_chain(a: &SymmetricMatrix, tol: f64) -> Result<MaclaurinReport> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tol", format!("must be non-negative, got {tol}")));
    }
    let mut eigs = linalg::eigenvalues_symmetric(a, linalg::JACOBI_TOL)?;
    let floor = -tol * linalg::psd_scale(a);
    if eigs[0] < floor {
        return Err(Error::Precondition(format!(
            "matrix is not PSD (min eigenvalue {:e})",
            eigs[0]
        )));
    }
    let mut clamped = 0;
    for e in eigs.iter_mut().filter(|e| **e < 0.0) {
        *e = 0.0;
        clamped += 1;
    }
    let spec = SymmSpectrum::from_eigenvalues(&eigs);
    let n = spec.n;
    let means: Vec<f64> = (1..=n).map(|k| maclaurin_mean(&spec, k)).collect::<Result<_>>()?;

    let mut worst_pair = (1, 1);
    let mut worst_slack = if n == 1 { 0.0 } else { f64::INFINITY };
    let mut all_equal = true;
    for m in 1..n {
        for k in m + 1..=n {
            let slack = chain_slack(means[m - 1], means[k - 1], m, k);
            if slack.abs() > tol {
                all_equal = false;
            }
            if slack < worst_slack {
                worst_slack = slack;
                worst_pair = (m, k);
            }
        }
    }
    Ok(MaclaurinReport {
        holds: worst_slack >= -tol,
        all_equal,
        worst_pair,
        worst_slack,
        clamped,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub holds: bool,
    /// `1 − Sₖ(A) / (εᵏ C(n,k))` for `k = 1..=n`.
    pub per_k_slack: Vec<f64>,
}

/// Checks `Sₖ(A) ≤ Sₖ(εI) = εᵏ C(n, k)` for `0 ≤ A ≤ εI`.
///
/// A matrix outside `[0, εI]` is a precondition error, not a failed bound.
pub fn majorization_bound(a: &SymmetricMatrix, eps: f64, tol: f64) -> Result<MajorizationReport> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::invalid("eps", format!("must be non-negative, got {eps}")));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tol", format!("must be non-negative, got {tol}")));
    }
    let n = a.dim();
    if !linalg::is_psd(a, tol)? {
        return Err(Error::Precondition("matrix is not PSD".into()));
    }
    let upper = SymmetricMatrix::scaled_identity(n, eps)?;
    if !linalg::loewner_leq(a, &upper, tol)? {
        return Err(Error::Precondition(format!("matrix is not below {eps}·I")));
    }
    let spec = SymmSpectrum::of_matrix(a)?;
    let per_k_slack: Vec<f64> = (1..=n)
        .map(|k| {
            let bound = eps.powi(k as i32) * binomial(n, k);
            if bound > 0.0 {
                1.0 - spec.s[k] / bound
            } else if spec.s[k] <= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    Ok(MajorizationReport {
        holds: per_k_slack.iter().all(|&s| s >= -tol),
        per_k_slack,
    })
}
