//! Eigenvalues of the linearized Neumann-to-Dirichlet derivative `Fη` for a
//! radial perturbation `η`.
//!
//! `Fη` acts diagonally on spherical harmonics: every `f_{ℓ,m}` is mapped to
//! `λ_ℓ(η) f_{ℓ,m}` with an eigenvalue that does not depend on `m`. Two
//! independent routes to `λ_ℓ` are provided:
//!
//! * the Jacobi series `Σ_{k≤2ℓ-2} (-1)^{k+1} a_k √(2k+d)/ℓ · ρ_{ℓ,k}` with
//!   the factorial ratio `ρ_{ℓ,k}` from [`log_factorial_ratio`], and
//! * the single radial moment `-(2ℓ+d-2)/ℓ ∫_0^1 η(r) r^{2ℓ+d-3} dr`.
//!
//! The moment route is the reference; the series route is checked against it.

mod field;
mod inversion;

pub use field::{
    apply, truncate, truncation_error, BoundaryField, TruncatedOperator, TruncationError,
};
pub use inversion::{forward_matrix, invert, InversionResult, RegularizationSettings};

use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::numerics::{binomial, log_factorial_ratio, log_gamma};
use crate::radial::{norm_ball, JacobiExpansion, RadialProfile};

/// Dimension of the degree-`ℓ` spherical harmonics on the sphere in `R^d`:
/// `C(ℓ+d-1, d-1) - C(ℓ+d-3, d-1)`, with `C(m, k) = 0` for `m < k`.
pub fn dim_h(ell: u64, d: Dimension) -> u64 {
    let dm1 = u64::from(d.get()) - 1;
    let upper = binomial(ell + dm1, dm1);
    let lower = if ell + dm1 >= 2 {
        binomial(ell + dm1 - 2, dm1)
    } else {
        0
    };
    u64::try_from(upper - lower).expect("harmonic space dimension fits in u64")
}

/// Which route produced a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSource {
    /// Jacobi series. `truncated` is set when some `λ_ℓ` needed coefficients
    /// beyond the expansion's degree `K`.
    Series {
        truncated: bool,
    },
    Moment,
    /// Supplied from outside (e.g. a measured spectrum file).
    External,
}

impl SpectrumSource {
    pub fn tag(&self) -> &'static str {
        match self {
            SpectrumSource::Series { .. } => "series",
            SpectrumSource::Moment => "moment",
            SpectrumSource::External => "external",
        }
    }
}

/// `λ_1..λ_L` of `Fη`. `lambdas[ℓ - 1]` is `λ_ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub d: Dimension,
    pub lambdas: Vec<f64>,
    pub source: SpectrumSource,
    /// `‖η‖_{L²(B)}` of whatever generated the spectrum.
    pub eta_norm: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// `λ_ℓ` for `ℓ >= 1`.
    pub fn eigenvalue(&self, ell: usize) -> Result<f64> {
        if ell == 0 {
            return Err(Error::ZeroDegree);
        }
        self.lambdas
            .get(ell - 1)
            .copied()
            .ok_or(Error::DegreeOutOfRange {
                requested: ell,
                max: self.lambdas.len(),
            })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.lambdas.iter().enumerate().map(|(i, &l)| (i + 1, l))
    }
}

/// `λ_ℓ` from the Jacobi series.
///
/// Uses `a_0..a_{min(K, 2ℓ-2)}`; if `K < 2ℓ-2` this is the eigenvalue of the
/// truncated perturbation (see [`series_is_truncated`]).
pub fn eigenvalue_series(expansion: &JacobiExpansion, ell: usize) -> Result<f64> {
    series_sums(expansion, ell).map(|(sum, _)| sum)
}

/// `Σ_k |a_k| √(2k+d) ρ_{ℓ,k} / ℓ`, the size of the terms that
/// [`eigenvalue_series`] adds up. Rounding in the `a_k` alone perturbs the
/// series value by about machine epsilon times this amount, so the ratio to
/// `|λ_ℓ|` is the condition number of the series route.
pub fn series_magnitude(expansion: &JacobiExpansion, ell: usize) -> Result<f64> {
    series_sums(expansion, ell).map(|(_, magnitude)| magnitude)
}

fn series_sums(expansion: &JacobiExpansion, ell: usize) -> Result<(f64, f64)> {
    if ell == 0 {
        return Err(Error::ZeroDegree);
    }
    let d = expansion.d;
    let last = (2 * ell - 2).min(expansion.truncation());
    let ellf = ell as f64;
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    for (k, &a) in expansion.a.iter().enumerate().take(last + 1) {
        if a == 0.0 {
            continue;
        }
        let ratio = log_factorial_ratio(ell, k, d)?.exp();
        let term = a * (2.0 * k as f64 + d.as_f64()).sqrt() / ellf * ratio;
        magnitude += term.abs();
        if k % 2 == 0 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    Ok((sum, magnitude))
}

/// Whether `λ_ℓ` from `expansion` is missing coefficients.
pub fn series_is_truncated(expansion: &JacobiExpansion, ell: usize) -> bool {
    ell >= 1 && (expansion.a.is_empty() || expansion.truncation() < 2 * ell - 2)
}

/// `λ_1..λ_L` from the Jacobi series.
pub fn spectrum_series(expansion: &JacobiExpansion, max_degree: usize) -> Result<Spectrum> {
    let lambdas = (1..=max_degree)
        .map(|ell| eigenvalue_series(expansion, ell))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        d: expansion.d,
        lambdas,
        source: SpectrumSource::Series {
            truncated: max_degree >= 1 && series_is_truncated(expansion, max_degree),
        },
        eta_norm: norm_ball(expansion),
    })
}

/// `λ_ℓ = -(2ℓ+d-2)/ℓ ∫_0^1 η(r) r^{2ℓ-2} r^{d-1} dr`.
pub fn eigenvalue_moment(profile: &RadialProfile, ell: usize, d: Dimension) -> Result<f64> {
    if ell == 0 {
        return Err(Error::ZeroDegree);
    }
    let power = 2 * ell - 2 + d.as_usize() - 1;
    let scale = (2 * ell + d.as_usize() - 2) as f64 / ell as f64;
    Ok(-scale * profile.moment(power))
}

/// `λ_1..λ_L` from the radial moments.
pub fn spectrum_moment(
    profile: &RadialProfile,
    d: Dimension,
    max_degree: usize,
) -> Result<Spectrum> {
    let lambdas = (1..=max_degree)
        .map(|ell| eigenvalue_moment(profile, ell, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        d,
        lambdas,
        source: SpectrumSource::Moment,
        eta_norm: profile.norm_ball(d),
    })
}

/// `C_d = d (e²/π)^{d/4} √(2 Γ(d/2))`.
pub fn decay_constant(d: Dimension) -> f64 {
    let df = d.as_f64();
    let ln_gamma = log_gamma(0.5 * df).expect("d/2 is positive");
    let ln = df.ln()
        + 0.25 * df * (2.0 - std::f64::consts::PI.ln())
        + 0.5 * (std::f64::consts::LN_2 + ln_gamma);
    ln.exp()
}

/// `C_d ‖η‖ ℓ^{-1/2}`.
pub fn decay_bound(d: Dimension, eta_norm: f64, ell: usize) -> f64 {
    decay_constant(d) * eta_norm / (ell as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub ell: usize,
    pub lambda: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub constant: f64,
    pub eta_norm: f64,
    pub rows: Vec<BoundRow>,
    /// `max_ℓ ℓ^{1/2} |λ_ℓ| / ‖η‖`, or 0 for `η = 0`.
    pub observed_constant: f64,
}

impl DecayReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| r.margin < 0.0)
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Margins `C_d ‖η‖ ℓ^{-1/2} - |λ_ℓ|` for every computed `ℓ`, using the norm
/// stored with the spectrum.
pub fn verify_decay_bound(spectrum: &Spectrum) -> DecayReport {
    let constant = decay_constant(spectrum.d);
    let rows: Vec<BoundRow> = spectrum
        .iter()
        .map(|(ell, lambda)| {
            let bound = constant * spectrum.eta_norm / (ell as f64).sqrt();
            BoundRow {
                ell,
                lambda,
                bound,
                margin: bound - lambda.abs(),
            }
        })
        .collect();
    let observed_constant = if spectrum.eta_norm > 0.0 {
        rows.iter()
            .map(|r| (r.ell as f64).sqrt() * r.lambda.abs() / spectrum.eta_norm)
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    DecayReport {
        constant,
        eta_norm: spectrum.eta_norm,
        rows,
        observed_constant,
    }
}

/// As [`verify_decay_bound`] but with the norm taken from the expansion that
/// generated the spectrum.
pub fn verify_decay_bound_for(expansion: &JacobiExpansion, spectrum: &Spectrum) -> DecayReport {
    let with_norm = Spectrum {
        eta_norm: norm_ball(expansion),
        ..spectrum.clone()
    };
    verify_decay_bound(&with_norm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoRow {
    pub k: usize,
    pub log_ratio: f64,
    pub log_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoReport {
    pub ell: usize,
    pub d: Dimension,
    pub rows: Vec<RhoRow>,
}

impl RhoReport {
    pub fn violations(&self) -> impl Iterator<Item = &RhoRow> {
        self.rows.iter().filter(|r| r.log_ratio > r.log_bound)
    }

    pub fn holds(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Checks `ρ_{ℓ,k} <= exp(-2k(k+d)/(2L+d))` with `L = 2ℓ-1` for every
/// `k = 0..=2ℓ-2`. The comparison is made between logarithms.
pub fn verify_rho_bound(ell: usize, d: Dimension) -> Result<RhoReport> {
    if ell == 0 {
        return Err(Error::ZeroDegree);
    }
    let big_l = (2 * ell - 1) as f64;
    let df = d.as_f64();
    let rows = (0..=2 * ell - 2)
        .map(|k| {
            let kf = k as f64;
            Ok(RhoRow {
                k,
                log_ratio: log_factorial_ratio(ell, k, d)?,
                log_bound: -2.0 * kf * (kf + df) / (2.0 * big_l + df),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RhoReport { ell, d, rows })
}
