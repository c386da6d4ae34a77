//! Recover Jacobi coefficients from observed eigenvalues.
//!
//! The series formula is linear in the coefficients: `λ = M a` with
//! `M_{ℓ,k} = (-1)^{k+1} √(2k+d)/ℓ ρ_{ℓ,k}` for `k <= 2ℓ-2` and zero
//! otherwise. Row `ℓ` reaches `a_{2ℓ-2}`, so `L` eigenvalues touch up to
//! `2L-1` unknowns and the system is underdetermined in general. It is solved
//! by truncated SVD (minimum-norm least squares), optionally with a ridge
//! filter on the kept singular values.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::Spectrum;
use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::numerics::log_factorial_ratio;
use crate::radial::JacobiExpansion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizationSettings {
    /// Singular values below `tau * σ_max` are discarded.
    pub tau: f64,
    /// Ridge weight; kept components are filtered by `σ / (σ² + alpha)`.
    pub alpha: f64,
}

impl Default for RegularizationSettings {
    fn default() -> Self {
        RegularizationSettings {
            tau: 1e-10,
            alpha: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionResult {
    pub expansion: JacobiExpansion,
    /// Singular values of the forward matrix, descending.
    pub singular_values: Vec<f64>,
    pub effective_rank: usize,
    /// `‖M â - λ‖₂`.
    pub residual_norm: f64,
}

/// `L × K` forward matrix mapping `a_0..a_{K-1}` to `λ_1..λ_L`.
pub fn forward_matrix(d: Dimension, max_degree: usize, unknowns: usize) -> DMatrix<f64> {
    DMatrix::from_fn(max_degree, unknowns, |row, k| {
        let ell = row + 1;
        if k > 2 * ell - 2 {
            return 0.0;
        }
        let ratio = log_factorial_ratio(ell, k, d)
            .expect("k within range")
            .exp();
        let magnitude = (2.0 * k as f64 + d.as_f64()).sqrt() / ell as f64 * ratio;
        if k % 2 == 0 {
            -magnitude
        } else {
            magnitude
        }
    })
}

/// Least-squares coefficients `a_0..a_{K-1}` reproducing `observed`.
pub fn invert(
    observed: &Spectrum,
    unknowns: usize,
    settings: &RegularizationSettings,
) -> Result<InversionResult> {
    let l = observed.len();
    if l == 0 {
        return Err(Error::EmptySpectrum);
    }
    if unknowns == 0 {
        return Err(Error::Inversion(
            "number of unknowns must be positive".into(),
        ));
    }
    if unknowns > 2 * l - 1 {
        return Err(Error::Inversion(format!(
            "{unknowns} unknowns exceed the {} coefficients reachable from {l} eigenvalues",
            2 * l - 1
        )));
    }
    if settings.tau.is_nan()
        || settings.tau < 0.0
        || settings.alpha.is_nan()
        || settings.alpha < 0.0
    {
        return Err(Error::Inversion(
            "tau and alpha must be non-negative".into(),
        ));
    }
    if observed.lambdas.iter().any(|x| !x.is_finite()) {
        return Err(Error::Inversion(
            "observed eigenvalues must be finite".into(),
        ));
    }

    let m = forward_matrix(observed.d, l, unknowns);
    let rhs = DVector::from_column_slice(&observed.lambdas);
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("U requested");
    let v_t = svd.v_t.as_ref().expect("V^T requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = settings.tau * sigma_max;

    let mut solution = DVector::<f64>::zeros(unknowns);
    let mut rank = 0;
    for (i, &s) in sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        rank += 1;
        let filter = if settings.alpha > 0.0 {
            s / (s * s + settings.alpha)
        } else {
            1.0 / s
        };
        let projection = u.column(i).dot(&rhs);
        solution += v_t.row(i).transpose() * (filter * projection);
    }
    let residual_norm = (&m * &solution - &rhs).norm();

    let mut singular_values: Vec<f64> = sigma.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));

    Ok(InversionResult {
        expansion: JacobiExpansion::new(observed.d, solution.iter().copied().collect()),
        singular_values,
        effective_rank: rank,
        residual_norm,
    })
}
