//! Shifted, normalized Jacobi polynomials on `(0, 1)`.
//!
//! `P_k` is the Jacobi polynomial with `α = d - 1`, `β = 0`, moved to the unit
//! interval by `x = 1 - 2r` and normalized so that
//! `∫_0^1 P_k P_j r^{d-1} dr = δ_{kj}`. In monomial form
//!
//! ```text
//! P_k(r) = √(2k+d) Σ_q (-1)^q C(k,q) C(k+q+d-1,k) r^q
//! ```
//!
//! That sum cancels catastrophically once `k` reaches the twenties, so values
//! are produced by the three-term recurrence and the monomial form is kept
//! only as a small-degree reference ([`evaluate_direct`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::numerics::{binomial, gauss_legendre, ln_factorial};

/// Largest degree accepted by [`evaluate_direct`].
pub const DIRECT_SUM_MAX_DEGREE: usize = 20;

/// Coefficients of `r P_k = A_k P_{k-1} + B_k P_k + C_k P_{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Recurrence {
    fn for_degree(k: usize, d: Dimension) -> Self {
        let k = k as f64;
        let d = d.as_f64();
        let s = 2.0 * k + d;
        // A_0 multiplies P_{-1} = 0; for d = 2 its square root is also 0/0.
        let a = if k == 0.0 {
            0.0
        } else {
            -(s / (s - 2.0)).sqrt() * k * (k + d - 1.0) / ((s - 1.0) * s)
        };
        let b = 0.5 * ((d - 1.0) * (d - 1.0) / ((s - 1.0) * (s + 1.0)) + 1.0);
        let c = -(s / (s + 2.0)).sqrt() * (k + 1.0) * (k + d) / (s * (s + 1.0));
        Recurrence { a, b, c }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiFamily {
    d: Dimension,
    max_degree: usize,
    recurrence: Vec<Recurrence>,
}

/// Recurrence coefficients for `k = 0..=max_degree`.
pub fn build_family(d: Dimension, max_degree: usize) -> JacobiFamily {
    let recurrence = (0..=max_degree)
        .map(|k| Recurrence::for_degree(k, d))
        .collect();
    JacobiFamily {
        d,
        max_degree,
        recurrence,
    }
}

impl JacobiFamily {
    pub fn dimension(&self) -> Dimension {
        self.d
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn recurrence(&self, k: usize) -> Option<Recurrence> {
        self.recurrence.get(k).copied()
    }

    /// `P_k(r)`.
    pub fn evaluate(&self, k: usize, r: f64) -> Result<f64> {
        if k > self.max_degree {
            return Err(Error::DegreeOutOfRange {
                requested: k,
                max: self.max_degree,
            });
        }
        check_point(r)?;
        let mut out = 0.0;
        self.fill(r, k, |j, v| {
            if j == k {
                out = v;
            }
        });
        Ok(out)
    }

    /// `P_0(r), ..., P_K(r)` with `K = max_degree`.
    pub fn evaluate_all(&self, r: f64) -> Result<Vec<f64>> {
        check_point(r)?;
        Ok(self.values_unchecked(r))
    }

    pub(crate) fn values_unchecked(&self, r: f64) -> Vec<f64> {
        let mut values = Vec::with_capacity(self.max_degree + 1);
        self.fill(r, self.max_degree, |_, v| values.push(v));
        values
    }

    fn fill<F: FnMut(usize, f64)>(&self, r: f64, upto: usize, mut sink: F) {
        let mut prev = 0.0;
        let mut cur = self.d.as_f64().sqrt();
        sink(0, cur);
        for j in 0..upto {
            let Recurrence { a, b, c } = self.recurrence[j];
            let next = ((r - b) * cur - a * prev) / c;
            prev = cur;
            cur = next;
            sink(j + 1, cur);
        }
    }
}

fn check_point(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::PointOutOfRange(r))
    }
}

/// `P_k(r)` from the monomial sum, with the sum carried out in exact rational
/// arithmetic. Reference implementation for small `k` only.
pub fn evaluate_direct(d: Dimension, k: usize, r: f64) -> Result<f64> {
    if k > DIRECT_SUM_MAX_DEGREE {
        return Err(Error::DirectSumLimit {
            k,
            max: DIRECT_SUM_MAX_DEGREE,
        });
    }
    let x = BigRational::from_float(r).ok_or(Error::PointOutOfRange(r))?;
    let ku = k as u64;
    let du = u64::from(d.get());
    let mut sum = BigRational::zero();
    let mut power = BigRational::from_integer(BigInt::from(1));
    for q in 0..=ku {
        let coeff = BigInt::from(binomial(ku, q)) * BigInt::from(binomial(ku + q + du - 1, ku));
        let term = power.clone() * BigRational::from_integer(coeff);
        if q % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= x.clone();
    }
    let value = sum.to_f64().expect("finite rational");
    Ok((2.0 * k as f64 + d.as_f64()).sqrt() * value)
}

/// Coefficients of `r^k = Σ_q χ_{k,q} P_q(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialExpansion {
    pub k: usize,
    pub d: Dimension,
    pub chi: Vec<f64>,
}

impl MonomialExpansion {
    /// `Σ_q χ_{k,q} P_q(r)`, which should reproduce `r^k`.
    pub fn reconstruct(&self, family: &JacobiFamily, r: f64) -> Result<f64> {
        if family.max_degree() < self.k {
            return Err(Error::DegreeOutOfRange {
                requested: self.k,
                max: family.max_degree(),
            });
        }
        let values = family.evaluate_all(r)?;
        Ok(self.chi.iter().zip(&values).map(|(c, p)| c * p).sum())
    }
}

/// `χ_{k,q} = (-1)^q √(2q+d) (k+d-1)! k! / ((k+d+q)! (k-q)!)`, evaluated in
/// log space.
pub fn chi_coefficients(d: Dimension, k: usize) -> MonomialExpansion {
    let du = d.as_usize();
    let common = ln_factorial(k + du - 1) + ln_factorial(k);
    let chi = (0..=k)
        .map(|q| {
            let magnitude = (common - ln_factorial(k + du + q) - ln_factorial(k - q)).exp();
            let scaled = (2.0 * q as f64 + d.as_f64()).sqrt() * magnitude;
            if q % 2 == 0 {
                scaled
            } else {
                -scaled
            }
        })
        .collect();
    MonomialExpansion { k, d, chi }
}

/// Leading monomial coefficient of `P_k`, `(-1)^k √(2k+d) C(2k+d-1, k)`.
pub fn leading_coefficient(d: Dimension, k: usize) -> f64 {
    let du = d.as_usize();
    let ln_binom = ln_factorial(2 * k + du - 1) - ln_factorial(k) - ln_factorial(k + du - 1);
    let magnitude = (2.0 * k as f64 + d.as_f64()).sqrt() * ln_binom.exp();
    if k.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// Worst-case deviations of the basis from its defining identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisDiagnostics {
    /// `max_{k≠j} |⟨P_k, P_j⟩|`
    pub gram_max_off_diagonal: f64,
    /// `max_k |⟨P_k, P_k⟩ - 1|`
    pub gram_max_diagonal: f64,
    /// `max |Σ_q χ_{k,q} P_q(r) - r^k|` over `k <= K` and 50 sample points
    pub reconstruction_max: f64,
    /// `max |χ_{k,q} - ⟨r^k, P_q⟩|`
    pub chi_projection_max: f64,
}

/// Gauss-Legendre order used by [`diagnostics`]: the smallest rule that is
/// exact for `P_k P_j r^{d-1}` with `k, j <= K`.
pub fn gram_nodes(d: Dimension, max_degree: usize) -> usize {
    max_degree + d.as_usize() / 2 + 1
}

/// Checks orthonormality and the monomial expansion up to degree `K`.
pub fn diagnostics(d: Dimension, max_degree: usize) -> BasisDiagnostics {
    let family = build_family(d, max_degree);
    let nodes = gram_nodes(d, max_degree);
    let rule = gauss_legendre(nodes).expect("positive order");
    let dm1 = d.as_usize() as i32 - 1;
    let samples: Vec<(f64, Vec<f64>)> = rule
        .iter()
        .map(|(r, w)| (w * r.powi(dm1), family.values_unchecked(r)))
        .collect();

    let mut off = 0.0f64;
    let mut diag = 0.0f64;
    for k in 0..=max_degree {
        for j in k..=max_degree {
            let g: f64 = samples.iter().map(|(w, p)| w * p[k] * p[j]).sum();
            if k == j {
                diag = diag.max((g - 1.0).abs());
            } else {
                off = off.max(g.abs());
            }
        }
    }

    let mut recon = 0.0f64;
    let mut proj = 0.0f64;
    let points: Vec<(f64, Vec<f64>)> = (0..50)
        .map(|i| {
            let r = (i as f64 + 0.5) / 50.0;
            (r, family.values_unchecked(r))
        })
        .collect();
    for k in 0..=max_degree {
        let expansion = chi_coefficients(d, k);
        for (r, p) in &points {
            let sum: f64 = expansion.chi.iter().zip(p).map(|(c, v)| c * v).sum();
            recon = recon.max((sum - r.powi(k as i32)).abs());
        }
        for (q, chi) in expansion.chi.iter().enumerate() {
            let inner: f64 = rule
                .iter()
                .zip(&samples)
                .map(|((r, _), (w, p))| w * r.powi(k as i32) * p[q])
                .sum();
            proj = proj.max((chi - inner).abs());
        }
    }

    BasisDiagnostics {
        gram_max_off_diagonal: off,
        gram_max_diagonal: diag,
        reconstruction_max: recon,
        chi_projection_max: proj,
    }
}
