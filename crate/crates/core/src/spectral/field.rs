use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{decay_bound, dim_h, Spectrum};
use crate::dimension::Dimension;
use crate::error::{Error, Result};

/// Zero-mean boundary function in an (abstract) orthonormal spherical
/// harmonic basis: coefficients `c_{ℓ,m}` with `ℓ >= 1` and
/// `m < dim H_ℓ`. Missing entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    d: Dimension,
    max_degree: usize,
    coeffs: BTreeMap<(usize, u64), Complex64>,
}

impl BoundaryField {
    pub fn new(d: Dimension, max_degree: usize) -> Self {
        BoundaryField {
            d,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> Dimension {
        self.d
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn insert(&mut self, ell: usize, m: u64, value: Complex64) -> Result<()> {
        if ell == 0 {
            return Err(Error::Field(
                "degree 0 is excluded from the zero-mean space".into(),
            ));
        }
        if ell > self.max_degree {
            return Err(Error::Field(format!(
                "degree {ell} exceeds the field's maximum degree {}",
                self.max_degree
            )));
        }
        let count = dim_h(ell as u64, self.d);
        if m >= count {
            return Err(Error::Field(format!(
                "index m = {m} out of range for degree {ell} (dim H = {count})"
            )));
        }
        self.coeffs.insert((ell, m), value);
        Ok(())
    }

    pub fn with(mut self, ell: usize, m: u64, value: Complex64) -> Result<Self> {
        self.insert(ell, m, value)?;
        Ok(self)
    }

    pub fn get(&self, ell: usize, m: u64) -> Complex64 {
        self.coeffs.get(&(ell, m)).copied().unwrap_or_default()
    }

    /// Stored `((ℓ, m), c_{ℓ,m})` in increasing `(ℓ, m)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, u64), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    /// `L²(∂B)` norm.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn map_by_degree<F: Fn(usize) -> f64>(&self, factor: F) -> BoundaryField {
        BoundaryField {
            d: self.d,
            max_degree: self.max_degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(ell, m), &c)| ((ell, m), c * factor(ell)))
                .collect(),
        }
    }
}

/// `(Fη) f_{ℓ,m} = λ_ℓ f_{ℓ,m}`, applied coefficientwise.
pub fn apply(spectrum: &Spectrum, field: &BoundaryField) -> Result<BoundaryField> {
    check_compatible(spectrum, field)?;
    Ok(field.map_by_degree(|ell| spectrum.lambdas[ell - 1]))
}

fn check_compatible(spectrum: &Spectrum, field: &BoundaryField) -> Result<()> {
    if spectrum.d != field.d {
        return Err(Error::Field(format!(
            "field lives in dimension {} but the spectrum in {}",
            field.d, spectrum.d
        )));
    }
    if let Some(((ell, _), _)) = field.coeffs.iter().next_back() {
        if *ell > spectrum.len() {
            return Err(Error::Field(format!(
                "field has degree {ell} but the spectrum stops at {}",
                spectrum.len()
            )));
        }
    }
    Ok(())
}

/// `F_N η = Σ_{ℓ ≤ N} λ_ℓ Ψ_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    spectrum: Spectrum,
    n: usize,
}

pub fn truncate(spectrum: &Spectrum, n: usize) -> Result<TruncatedOperator> {
    if n > spectrum.len() {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            max: spectrum.len(),
        });
    }
    Ok(TruncatedOperator {
        spectrum: spectrum.clone(),
        n,
    })
}

impl TruncatedOperator {
    pub fn rank_degree(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn apply(&self, field: &BoundaryField) -> Result<BoundaryField> {
        check_compatible(&self.spectrum, field)?;
        Ok(field.map_by_degree(|ell| {
            if ell <= self.n {
                self.spectrum.lambdas[ell - 1]
            } else {
                0.0
            }
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationError {
    /// `max_{N < ℓ ≤ L} |λ_ℓ|`, the operator norm of `Fη - F_N η` restricted
    /// to the computed degrees.
    pub tail_norm: f64,
    /// `C_d ‖η‖ (N + 1)^{-1/2}`.
    pub a_priori_bound: f64,
}

pub fn truncation_error(op: &TruncatedOperator) -> TruncationError {
    let tail_norm = op.spectrum.lambdas[op.n..]
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    TruncationError {
        tail_norm,
        a_priori_bound: decay_bound(op.spectrum.d, op.spectrum.eta_norm, op.n + 1),
    }
}
