//! Radial perturbations `η(r)` of the unit conductivity and their
//! coefficients in the Jacobi basis.
//!
//! Profiles are piecewise polynomials in the absolute radius `r`, so every
//! integral that touches them has a polynomial integrand on each piece and is
//! evaluated exactly by a Gauss-Legendre rule of sufficient order (or in
//! closed form, for the plain moments).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::jacobi::build_family;
use crate::numerics::{gauss_legendre, log_gamma};

/// Maximum polynomial degree accepted for a single piece.
pub const MAX_PIECE_DEGREE: usize = 32;

/// Piecewise-polynomial radial function on `[0, 1]`.
///
/// `pieces[i]` holds the coefficients (lowest degree first) of the polynomial
/// in `r` that is valid on `[breakpoints[i], breakpoints[i + 1]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Profile(
                "need at least the breakpoints 0 and 1".into(),
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::Profile("breakpoints must be finite".into()));
        }
        if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::Profile(
                "breakpoints must start at 0 and end at 1".into(),
            ));
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Profile(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(Error::Profile(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        for (i, p) in pieces.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Profile(format!("piece {i} has no coefficients")));
            }
            if p.len() > MAX_PIECE_DEGREE + 1 {
                return Err(Error::Profile(format!(
                    "piece {i} has degree {} > {MAX_PIECE_DEGREE}",
                    p.len() - 1
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Profile(format!(
                    "piece {i} has a non-finite coefficient"
                )));
            }
        }
        Ok(RadialProfile {
            breakpoints,
            pieces,
        })
    }

    /// A single polynomial on all of `[0, 1]`.
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        RadialProfile::new(vec![0.0, 1.0], vec![coeffs])
    }

    pub fn constant(c: f64) -> Result<Self> {
        RadialProfile::polynomial(vec![c])
    }

    pub fn ramp(c: f64) -> Result<Self> {
        RadialProfile::polynomial(vec![0.0, c])
    }

    /// `c` on `[inner, outer]`, zero elsewhere.
    pub fn annulus(inner: f64, outer: f64, c: f64) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite()) || inner < 0.0 || outer > 1.0 {
            return Err(Error::PresetParams(format!(
                "annulus radii must lie in [0, 1], got {inner}, {outer}"
            )));
        }
        if inner >= outer {
            return Err(Error::PresetParams(format!(
                "annulus needs inner < outer, got {inner} >= {outer}"
            )));
        }
        let mut breakpoints = vec![0.0];
        let mut pieces = Vec::new();
        if inner > 0.0 {
            breakpoints.push(inner);
            pieces.push(vec![0.0]);
        }
        pieces.push(vec![c]);
        breakpoints.push(outer);
        if outer < 1.0 {
            breakpoints.push(1.0);
            pieces.push(vec![0.0]);
        }
        RadialProfile::new(breakpoints, pieces)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    /// `([a, b], coefficients)` for every piece.
    pub fn intervals(&self) -> impl Iterator<Item = ((f64, f64), &[f64])> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| ((w[0], w[1]), p.as_slice()))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces.iter().map(|p| p.len() - 1).max().unwrap_or(0)
    }

    /// `η(r)`; at an interior breakpoint the piece to the right wins.
    pub fn evaluate(&self, r: f64) -> f64 {
        horner(&self.pieces[self.piece_index(r)], r)
    }

    /// `∫_0^1 η(r) r^p dr` in closed form, piece by piece.
    pub fn moment(&self, power: usize) -> f64 {
        self.intervals()
            .map(|((a, b), coeffs)| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        let e = (j + power + 1) as i32;
                        c * (b.powi(e) - a.powi(e)) / f64::from(e)
                    })
                    .sum::<f64>()
            })
            .sum()
    }

    /// `∫_0^1 f(r, η(r)) dr`, exact when `f` is polynomial on each piece with
    /// degree at most the piece degree plus `extra_degree`.
    pub(crate) fn integrate_pieces<F>(&self, extra_degree: usize, mut f: F) -> f64
    where
        F: FnMut(f64, f64) -> f64,
    {
        self.intervals()
            .map(|((a, b), coeffs)| {
                let degree = coeffs.len() - 1 + extra_degree;
                let rule = gauss_legendre(degree / 2 + 2).expect("positive order");
                rule.mapped(a, b)
                    .map(|(r, w)| w * f(r, horner(coeffs, r)))
                    .sum::<f64>()
            })
            .sum()
    }

    /// `‖η‖_{L²(B)}` computed directly from the profile.
    pub fn norm_ball(&self, d: Dimension) -> f64 {
        let dm1 = d.as_usize() - 1;
        let weighted = self.integrate_pieces(self.max_degree() + dm1, |r, eta| {
            eta * eta * r.powi(dm1 as i32)
        });
        (surface_area(d) * weighted).sqrt()
    }

    /// `α η₁ + β η₂` on the union of both partitions.
    pub fn linear_combination(
        &self,
        alpha: f64,
        other: &RadialProfile,
        beta: f64,
    ) -> RadialProfile {
        let mut breakpoints: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        let pieces = breakpoints
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let p = &self.pieces[self.piece_index(mid)];
                let q = &other.pieces[other.piece_index(mid)];
                (0..p.len().max(q.len()))
                    .map(|j| {
                        alpha * p.get(j).copied().unwrap_or(0.0)
                            + beta * q.get(j).copied().unwrap_or(0.0)
                    })
                    .collect()
            })
            .collect();
        RadialProfile {
            breakpoints,
            pieces,
        }
    }

    fn piece_index(&self, r: f64) -> usize {
        self.breakpoints
            .partition_point(|&b| b <= r)
            .clamp(1, self.pieces.len())
            - 1
    }
}

pub(crate) fn horner(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c)
}

/// Named profiles of the form `name:p1,p2,...`.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Constant(f64),
    Annulus { inner: f64, outer: f64, value: f64 },
    Polynomial(Vec<f64>),
    Ramp(f64),
}

impl Preset {
    pub fn from_parts(name: &str, params: &[f64]) -> Result<Self> {
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::PresetParams(format!(
                    "`{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "constant" => {
                arity(1)?;
                Ok(Preset::Constant(params[0]))
            }
            "annulus" => {
                arity(3)?;
                Ok(Preset::Annulus {
                    inner: params[0],
                    outer: params[1],
                    value: params[2],
                })
            }
            "polynomial" => {
                if params.is_empty() {
                    return Err(Error::PresetParams(
                        "`polynomial` needs coefficients".into(),
                    ));
                }
                Ok(Preset::Polynomial(params.to_vec()))
            }
            "ramp" => {
                arity(1)?;
                Ok(Preset::Ramp(params[0]))
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn profile(&self) -> Result<RadialProfile> {
        match self {
            Preset::Constant(c) => RadialProfile::constant(*c),
            Preset::Annulus {
                inner,
                outer,
                value,
            } => RadialProfile::annulus(*inner, *outer, *value),
            Preset::Polynomial(coeffs) => RadialProfile::polynomial(coeffs.clone()),
            Preset::Ramp(c) => RadialProfile::ramp(*c),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::PresetParams(format!("cannot parse `{p}` as a number")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Preset::from_parts(name.trim(), &params)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Constant(c) => write!(f, "constant:{c}"),
            Preset::Annulus {
                inner,
                outer,
                value,
            } => write!(f, "annulus:{inner},{outer},{value}"),
            Preset::Polynomial(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "polynomial:{}", parts.join(","))
            }
            Preset::Ramp(c) => write!(f, "ramp:{c}"),
        }
    }
}

/// Build a profile from a named preset.
pub fn preset(name: &str, params: &[f64]) -> Result<RadialProfile> {
    Preset::from_parts(name, params)?.profile()
}

/// On-disk profile description.
///
/// ```toml
/// dimension = 2
/// breakpoints = [0.0, 0.5, 1.0]
/// pieces = [[0.0], [1.0, -0.5]]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub dimension: u32,
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
}

impl ProfileDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Profile(e.to_string()))
    }

    pub fn into_parts(self) -> Result<(Dimension, RadialProfile)> {
        let d = Dimension::new(self.dimension)?;
        let profile = RadialProfile::new(self.breakpoints, self.pieces)?;
        Ok((d, profile))
    }
}

/// `|∂B| = 2 π^{d/2} / Γ(d/2)`.
pub fn surface_area(d: Dimension) -> f64 {
    let half = 0.5 * d.as_f64();
    let ln = std::f64::consts::LN_2 + half * std::f64::consts::PI.ln()
        - log_gamma(half).expect("d/2 is positive");
    ln.exp()
}

/// Coefficients `a_0..a_K` of a radial function in the `P_k` basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiExpansion {
    pub d: Dimension,
    pub a: Vec<f64>,
    /// Exact `L²(B)` norm of the profile the coefficients came from, when
    /// known. `norm_ball` never exceeds it.
    pub source_norm: Option<f64>,
}

impl JacobiExpansion {
    pub fn new(d: Dimension, a: Vec<f64>) -> Self {
        JacobiExpansion {
            d,
            a,
            source_norm: None,
        }
    }

    /// Truncation degree `K` (number of coefficients minus one).
    pub fn truncation(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// `Σ a_k P_k(r)`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if self.a.is_empty() {
            return Ok(0.0);
        }
        let family = build_family(self.d, self.truncation());
        let values = family.evaluate_all(r)?;
        Ok(self.a.iter().zip(values).map(|(a, p)| a * p).sum())
    }

    /// `‖η_K‖²_{L²(B)} - ‖η‖²`-gap left by truncating at `K`, when the source
    /// norm is known.
    pub fn truncation_gap(&self) -> Option<f64> {
        self.source_norm
            .map(|n| (n * n - norm_ball(self).powi(2)).max(0.0))
    }
}

/// `a_k(η) = ∫_0^1 η(r) P_k(r) r^{d-1} dr` for `k = 0..=K`.
pub fn project(profile: &RadialProfile, d: Dimension, max_degree: usize) -> JacobiExpansion {
    let family = build_family(d, max_degree);
    let dm1 = d.as_usize() - 1;
    let mut a = vec![0.0; max_degree + 1];
    for ((lo, hi), coeffs) in profile.intervals() {
        if coeffs.iter().all(|&c| c == 0.0) {
            continue;
        }
        // integrand degree: deg + K + d - 1, exact when 2n - 1 >= that
        let degree = coeffs.len() - 1 + max_degree + dm1;
        let rule = gauss_legendre(degree / 2 + 2).expect("positive order");
        for (r, w) in rule.mapped(lo, hi) {
            let scale = w * horner(coeffs, r) * r.powi(dm1 as i32);
            for (ak, p) in a.iter_mut().zip(family.values_unchecked(r)) {
                *ak += scale * p;
            }
        }
    }
    JacobiExpansion {
        d,
        a,
        source_norm: Some(profile.norm_ball(d)),
    }
}

/// `√(|∂B| Σ a_k²)`.
pub fn norm_ball(expansion: &JacobiExpansion) -> f64 {
    let sum_sq: f64 = expansion.a.iter().map(|a| a * a).sum();
    (surface_area(expansion.d) * sum_sq).sqrt()
}
