//! Brute-force check of the eigenstructure using explicit harmonics.
//!
//! For a boundary current `f` of degree `ℓ` the background potential is
//! `u = ℓ^{-1} r^ℓ f(θ)`, and the linearized map is characterized by
//!
//! ```text
//! ⟨(Fη) f, g⟩ = -∫_B η ∇u_f · ∇u_g dx.
//! ```
//!
//! Here that volume integral is evaluated by tensor quadrature (Gauss-Legendre
//! in `r` on each profile piece, times a surface rule) without using any of
//! the closed-form eigenvalue machinery. Only `d = 2` (all of `cos ℓθ`,
//! `sin ℓθ`) and `d = 3` (zonal harmonics `P_ℓ(cos θ)`) are supported.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::radial::{horner, RadialProfile};
use crate::spectral::eigenvalue_moment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicKind {
    Cosine,
    Sine,
    Zonal,
}

/// Unit-norm spherical harmonic with a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplicitHarmonic {
    d: u32,
    ell: usize,
    kind: HarmonicKind,
    normalization: f64,
}

impl ExplicitHarmonic {
    /// `cos(ℓθ)/√π` or `sin(ℓθ)/√π` on the unit circle.
    pub fn circular(ell: usize, kind: HarmonicKind) -> Result<Self> {
        if ell == 0 {
            return Err(Error::ZeroDegree);
        }
        if kind == HarmonicKind::Zonal {
            return Err(Error::Harmonic(
                "circular harmonics are cosine or sine".into(),
            ));
        }
        Ok(ExplicitHarmonic {
            d: 2,
            ell,
            kind,
            normalization: 1.0 / PI.sqrt(),
        })
    }

    /// `√((2ℓ+1)/(4π)) P_ℓ(cos θ)` on the unit sphere in `R^3`.
    pub fn zonal(ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(ExplicitHarmonic {
            d: 3,
            ell,
            kind: HarmonicKind::Zonal,
            normalization: ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt(),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.ell
    }

    pub fn kind(&self) -> HarmonicKind {
        self.kind
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `f(θ)`.
    pub fn value(&self, theta: f64) -> f64 {
        let l = self.ell as f64;
        self.normalization
            * match self.kind {
                HarmonicKind::Cosine => (l * theta).cos(),
                HarmonicKind::Sine => (l * theta).sin(),
                HarmonicKind::Zonal => legendre(self.ell, theta.cos()).0,
            }
    }

    /// `∂f/∂θ`, the only non-zero component of the surface gradient.
    pub fn angular_derivative(&self, theta: f64) -> f64 {
        let l = self.ell as f64;
        self.normalization
            * match self.kind {
                HarmonicKind::Cosine => -l * (l * theta).sin(),
                HarmonicKind::Sine => l * (l * theta).cos(),
                HarmonicKind::Zonal => -theta.sin() * legendre(self.ell, theta.cos()).1,
            }
    }
}

impl fmt::Display for ExplicitHarmonic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            HarmonicKind::Cosine => "cos",
            HarmonicKind::Sine => "sin",
            HarmonicKind::Zonal => "zonal",
        };
        write!(f, "{kind}{}", self.ell)
    }
}

/// Legendre `P_n(x)` and `P_n'(x)` by the three-term recurrence and
/// `P'_{n+1} = P'_{n-1} + (2n+1) P_n`, valid on all of `[-1, 1]`.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    let (mut dp_prev, mut dp) = (0.0, 1.0);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        let dp_next = dp_prev + (2.0 * jf + 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Quadrature on the unit sphere for the supported harmonics: points are
/// polar angles, weights include the full surface measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRule {
    points: Vec<(f64, f64)>,
}

impl SurfaceRule {
    /// Exact for products of two harmonics (and their derivatives) of degree
    /// at most `max_degree`.
    pub fn new(d: u32, max_degree: usize) -> Result<Self> {
        match d {
            2 => {
                // trapezoid on the circle is exact for trigonometric
                // polynomials of degree < n
                let n = 4 * max_degree + 8;
                let h = 2.0 * PI / n as f64;
                Ok(SurfaceRule {
                    points: (0..n).map(|j| (j as f64 * h, h)).collect(),
                })
            }
            3 => {
                let rule = gauss_legendre(max_degree + 4)?;
                Ok(SurfaceRule {
                    points: rule
                        .mapped(-1.0, 1.0)
                        .map(|(x, w)| (x.acos(), 2.0 * PI * w))
                        .collect(),
                })
            }
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(t, w)| w * f(t)).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_pair(h1: &ExplicitHarmonic, h2: &ExplicitHarmonic) -> Result<()> {
    if h1.d != h2.d {
        return Err(Error::Harmonic(format!(
            "harmonics live in different dimensions ({} and {})",
            h1.d, h2.d
        )));
    }
    Ok(())
}

/// `∇u₁ · ∇u₂` at `(r, θ)` for `u_i = ℓ_i^{-1} r^{ℓ_i} f_i`:
/// `r^{ℓ+ℓ'-2} (f₁ f₂ + (ℓℓ')^{-1} ∇_S f₁ · ∇_S f₂)`.
pub fn harmonic_solution_gradsq(
    h1: &ExplicitHarmonic,
    h2: &ExplicitHarmonic,
    r: f64,
    theta: f64,
) -> Result<f64> {
    check_pair(h1, h2)?;
    let radial = r.powi((h1.ell + h2.ell - 2) as i32);
    let tangential =
        h1.angular_derivative(theta) * h2.angular_derivative(theta) / (h1.ell * h2.ell) as f64;
    Ok(radial * (h1.value(theta) * h2.value(theta) + tangential))
}

/// `-∫_B η ∇u₁ · ∇u₂ dx` by tensor quadrature.
pub fn brute_force_entry(
    profile: &RadialProfile,
    h1: &ExplicitHarmonic,
    h2: &ExplicitHarmonic,
) -> Result<f64> {
    check_pair(h1, h2)?;
    let surface = SurfaceRule::new(h1.d, h1.ell.max(h2.ell))?;
    let dm1 = (h1.d - 1) as i32;
    let mut total = 0.0;
    for ((lo, hi), coeffs) in profile.intervals() {
        let degree = coeffs.len() - 1 + h1.ell + h2.ell - 2 + dm1 as usize;
        let radial = gauss_legendre(degree / 2 + 2)?;
        for (r, w) in radial.mapped(lo, hi) {
            let eta = horner(coeffs, r);
            let shell = surface.integrate(|theta| {
                harmonic_solution_gradsq(h1, h2, r, theta).expect("same dimension")
            });
            total += w * r.powi(dm1) * eta * shell;
        }
    }
    Ok(-total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradientIdentityReport {
    /// `∫ ∇_S f · ∇_S g dS`
    pub lhs: f64,
    /// `∫ f g dS`
    pub rhs: f64,
    /// `ℓ(ℓ+d-2)`
    pub eigenvalue: f64,
    pub abs_error: f64,
    pub pass: bool,
}

/// Tolerance for [`verify_gradient_identity`].
pub const GRADIENT_IDENTITY_TOL: f64 = 1e-10;

/// `∫ ∇_S f_ℓ · ∇_S f_ℓ' dS = ℓ(ℓ+d-2) ∫ f_ℓ f_ℓ' dS`.
pub fn verify_gradient_identity(
    h1: &ExplicitHarmonic,
    h2: &ExplicitHarmonic,
) -> Result<GradientIdentityReport> {
    check_pair(h1, h2)?;
    let surface = SurfaceRule::new(h1.d, h1.ell.max(h2.ell))?;
    let lhs = surface.integrate(|t| h1.angular_derivative(t) * h2.angular_derivative(t));
    let rhs = surface.integrate(|t| h1.value(t) * h2.value(t));
    let l = h1.ell as f64;
    let eigenvalue = l * (l + f64::from(h1.d) - 2.0);
    let abs_error = (lhs - eigenvalue * rhs).abs();
    Ok(GradientIdentityReport {
        lhs,
        rhs,
        eigenvalue,
        abs_error,
        pass: abs_error <= GRADIENT_IDENTITY_TOL,
    })
}

/// Explicit harmonics of degree `1..=max_degree` in dimension `d`.
pub fn harmonics(d: u32, max_degree: usize) -> Result<Vec<ExplicitHarmonic>> {
    match d {
        2 => (1..=max_degree)
            .flat_map(|l| {
                [HarmonicKind::Cosine, HarmonicKind::Sine]
                    .into_iter()
                    .map(move |k| ExplicitHarmonic::circular(l, k))
            })
            .collect(),
        3 => (1..=max_degree).map(ExplicitHarmonic::zonal).collect(),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossEntry {
    pub row: String,
    pub col: String,
    pub brute_force: f64,
    /// `λ_ℓ` from the moment formula on the diagonal, 0 elsewhere.
    pub reference: f64,
    pub abs_error: f64,
    pub diagonal: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidation {
    pub entries: Vec<CrossEntry>,
}

impl CrossValidation {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !e.diagonal)
            .map(|e| e.abs_error)
            .fold(0.0, f64::max)
    }

    pub fn max_diagonal_relative(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.diagonal)
            .map(|e| relative(e.abs_error, e.reference))
            .fold(0.0, f64::max)
    }
}

fn relative(err: f64, reference: f64) -> f64 {
    if err == 0.0 {
        0.0
    } else {
        err / reference.abs()
    }
}

/// Off-diagonal brute-force entries must not exceed this in magnitude.
pub const OFF_DIAGONAL_TOL: f64 = 1e-9;
/// Relative agreement required on the diagonal.
pub const DIAGONAL_REL_TOL: f64 = 1e-8;

/// Full brute-force matrix over all explicit harmonics up to degree `L`,
/// compared with a diagonal of moment eigenvalues.
pub fn cross_validate(
    profile: &RadialProfile,
    d: Dimension,
    max_degree: usize,
) -> Result<CrossValidation> {
    let basis = harmonics(d.get(), max_degree)?;
    let mut entries = Vec::with_capacity(basis.len() * basis.len());
    for h1 in &basis {
        for h2 in &basis {
            let brute_force = brute_force_entry(profile, h1, h2)?;
            let diagonal = h1 == h2;
            let reference = if diagonal {
                eigenvalue_moment(profile, h1.ell, d)?
            } else {
                0.0
            };
            let abs_error = (brute_force - reference).abs();
            let pass = if diagonal {
                relative(abs_error, reference) <= DIAGONAL_REL_TOL
            } else {
                abs_error <= OFF_DIAGONAL_TOL
            };
            entries.push(CrossEntry {
                row: h1.to_string(),
                col: h2.to_string(),
                brute_force,
                reference,
                abs_error,
                diagonal,
                pass,
            });
        }
    }
    Ok(CrossValidation { entries })
}
