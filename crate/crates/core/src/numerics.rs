//! Special functions and Gauss-Legendre quadrature on the unit interval.

use std::f64::consts::PI;

use crate::dimension::Dimension;
use crate::error::{Error, Result};

/// Gauss-Legendre rule for `∫_0^1 f(x) dx`.
///
/// Nodes are strictly increasing in the open interval `(0, 1)`, weights are
/// positive and sum to one. An `n`-node rule is exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Integrate over `(0, 1)`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// Integrate over `(a, b)` by the affine map from `(0, 1)`.
    pub fn integrate_over<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        h * self.iter().map(|(x, w)| w * f(a + h * x)).sum::<f64>()
    }

    /// Nodes and weights mapped onto `(a, b)`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = b - a;
        self.iter().map(move |(x, w)| (a + h * x, h * w))
    }
}

/// Legendre polynomial `P_n(x)` and its derivative on `[-1, 1]`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = nf * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Build the `n`-node Gauss-Legendre rule on `(0, 1)`.
///
/// Roots of the Legendre polynomial are found by Newton iteration started
/// from the Tricomi asymptotic guesses, and only half of them are computed;
/// the other half follow by reflection so the rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidOrder);
    }
    let nf = n as f64;
    let half = n.div_ceil(2);
    // (x in (-1, 1) ascending is x_i = -cos(...)), computed for the upper half
    let mut upper: Vec<(f64, f64)> = Vec::with_capacity(half);
    for i in 0..half {
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = theta.cos() * (1.0 - (1.0 - 1.0 / nf) / (8.0 * nf * nf));
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            if x == 0.0 && n % 2 == 1 && i == half - 1 {
                break;
            }
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        upper.push((x, w));
    }

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // lower half: -x, mapped to (1 - x) / 2 with x descending from near 1
    for &(x, w) in &upper {
        if x == 0.0 {
            continue;
        }
        nodes.push(0.5 * (1.0 - x));
        weights.push(0.5 * w);
    }
    for &(x, w) in upper.iter().rev() {
        nodes.push(0.5 * (1.0 + x));
        weights.push(0.5 * w);
    }
    Ok(QuadratureRule { nodes, weights })
}

const STIRLING_SHIFT: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural logarithm of the gamma function for `z > 0`.
///
/// Arguments below 15 are shifted upward with `Γ(z + 1) = z Γ(z)` and the
/// Stirling series is applied at the shifted point.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::GammaDomain(z));
    }
    let mut shifted = z;
    let mut product = 1.0;
    while shifted < STIRLING_SHIFT {
        product *= shifted;
        shifted += 1.0;
    }
    Ok(stirling(shifted) - product.ln())
}

fn stirling(z: f64) -> f64 {
    // Bernoulli terms B_{2j} / (2j (2j - 1))
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

/// `ln n!`
pub fn ln_factorial(n: usize) -> f64 {
    log_gamma(n as f64 + 1.0).expect("n + 1 is positive")
}

/// Natural log of `(2ℓ-2+d)! (2ℓ-2)! / ((2ℓ-2+d+k)! (2ℓ-2-k)!)`.
///
/// The ratio is at most one, so the result is non-positive.
pub fn log_factorial_ratio(ell: usize, k: usize, d: Dimension) -> Result<f64> {
    if ell == 0 {
        return Err(Error::ZeroDegree);
    }
    let base = 2 * ell - 2;
    if k > base {
        return Err(Error::RatioIndex { k, max: base });
    }
    let top = base + d.as_usize();
    let num = ln_factorial(top) + ln_factorial(base);
    let den = ln_factorial(top + k) + ln_factorial(base - k);
    Ok(num - den)
}

/// Exact binomial coefficient, zero when `k > n`.
///
/// Panics on `u128` overflow, which does not happen for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(u128::from(n - i))
            .expect("binomial overflow")
            / u128::from(i + 1);
    }
    acc
}
