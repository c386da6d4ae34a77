//! Shared fixtures for the integration and acceptance tests: a profile corpus
//! and exact big-integer reference values.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use radial_eit::radial::RadialProfile;
use radial_eit::Dimension;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dim(d: u32) -> Dimension {
    Dimension::new(d).unwrap()
}

/// Named profiles: constants, ramps, annuli, a piecewise polynomial, and
/// seeded random polynomials of degree at most 8.
pub fn corpus() -> Vec<(String, RadialProfile)> {
    let mut out: Vec<(String, RadialProfile)> = Vec::new();
    for c in [1.0, 0.5, -2.0] {
        out.push((format!("constant {c}"), RadialProfile::constant(c).unwrap()));
    }
    for c in [1.0, -0.7] {
        out.push((format!("ramp {c}"), RadialProfile::ramp(c).unwrap()));
    }
    for (a, b, c) in [
        (0.5, 1.0, 1.0),
        (0.2, 0.6, 2.0),
        (0.3, 0.9, -1.0),
        (0.0, 0.4, 1.5),
        (0.8, 1.0, 3.0),
    ] {
        out.push((
            format!("annulus {a},{b},{c}"),
            RadialProfile::annulus(a, b, c).unwrap(),
        ));
    }
    out.push((
        "piecewise".into(),
        RadialProfile::new(
            vec![0.0, 0.3, 0.7, 1.0],
            vec![
                vec![1.0, 0.0, -2.0],
                vec![0.5, 1.0],
                vec![-1.0, 0.0, 0.0, 2.0],
            ],
        )
        .unwrap(),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..10 {
        let degree = rng.gen_range(0..=8);
        let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        out.push((
            format!("random polynomial #{i} (degree {degree})"),
            RadialProfile::polynomial(coeffs).unwrap(),
        ));
    }
    out
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    let num = x.numer().to_biguint().unwrap();
    let den = x.denom().to_biguint().unwrap();
    ln_big(&num) - ln_big(&den)
}

/// `(2ℓ-2+d)! (2ℓ-2)! / ((2ℓ-2+d+k)! (2ℓ-2-k)!)` as an exact rational.
pub fn rho_exact(ell: u64, k: u64, d: u64) -> BigRational {
    let top = 2 * ell - 2;
    let num = factorial(top + d) * factorial(top);
    let den = factorial(top + d + k) * factorial(top - k);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
