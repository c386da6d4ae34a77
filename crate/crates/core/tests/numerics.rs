mod common;

use common::{dim, factorial, ln_big, ln_rational, rho_exact};
use proptest::prelude::*;
use radial_eit::numerics::{
    binomial, gauss_legendre, ln_factorial, log_factorial_ratio, log_gamma,
};

proptest! {
    #[test]
    fn gauss_legendre_is_exact_for_degree_2n_minus_1(
        n in 1usize..=64,
        coeffs in proptest::collection::vec(-1.0f64..1.0, 1..=128),
    ) {
        let degree = (2 * n - 1).min(coeffs.len() - 1);
        let c = &coeffs[..=degree];
        let rule = gauss_legendre(n).unwrap();
        let got = rule.integrate(|x| c.iter().rev().fold(0.0, |acc, a| acc * x + a));
        let exact: f64 = c.iter().enumerate().map(|(j, a)| a / (j as f64 + 1.0)).sum();
        let scale: f64 = c.iter().enumerate().map(|(j, a)| a.abs() / (j as f64 + 1.0)).sum();
        prop_assert!((got - exact).abs() <= 1e-13 * scale.max(1e-300), "n={n} got={got} exact={exact}");
    }

    #[test]
    fn gauss_legendre_weights_are_positive_and_sum_to_one(n in 1usize..=200) {
        let rule = gauss_legendre(n).unwrap();
        prop_assert!(rule.weights().iter().all(|&w| w > 0.0));
        prop_assert!(rule.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
        prop_assert!((rule.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rho_is_at_most_one(ell in 1usize..=200, d in 2u32..=6, frac in 0.0f64..=1.0) {
        let k = ((2 * ell - 2) as f64 * frac).round() as usize;
        prop_assert!(log_factorial_ratio(ell, k, dim(d)).unwrap() <= 0.0);
    }
}

#[test]
fn log_gamma_matches_big_integer_factorials() {
    for n in 0u64..=300 {
        let exact = ln_big(&factorial(n));
        let got = log_gamma(n as f64 + 1.0).unwrap();
        assert!(
            (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
            "n={n}: {got} vs {exact}"
        );
        assert!((ln_factorial(n as usize) - exact).abs() <= 1e-12 * exact.abs().max(1.0));
    }
}

#[test]
fn log_gamma_matches_half_integer_closed_form() {
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    let half_ln_pi = 0.5 * std::f64::consts::PI.ln();
    for n in 0u64..=200 {
        let exact =
            ln_big(&factorial(2 * n)) + half_ln_pi - n as f64 * 4f64.ln() - ln_big(&factorial(n));
        let got = log_gamma(n as f64 + 0.5).unwrap();
        assert!(
            (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
            "n={n}: {got} vs {exact}"
        );
    }
}

#[test]
fn log_gamma_large_argument_relative_accuracy() {
    // ln Γ(10^6) = Σ_{k<10^6} ln k, summed with Neumaier compensation.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 2..1_000_000u32 {
        let x = f64::from(k).ln();
        let t = sum + x;
        comp += if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        sum = t;
    }
    let exact = sum + comp;
    let got = log_gamma(1e6).unwrap();
    assert!((got - exact).abs() <= 1e-12 * exact, "{got} vs {exact}");
}

#[test]
fn log_gamma_rejects_non_positive() {
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
    assert!(log_gamma(f64::NAN).is_err());
}

#[test]
fn log_factorial_ratio_matches_exact_rational() {
    for d in 2u32..=5 {
        for ell in 1usize..=30 {
            for k in 0..=2 * ell - 2 {
                let exact = ln_rational(&rho_exact(ell as u64, k as u64, d as u64));
                let got = log_factorial_ratio(ell, k, dim(d)).unwrap();
                assert!(
                    (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                    "ell={ell} k={k} d={d}: {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn log_factorial_ratio_worked_example() {
    // ℓ = 15, k = 10, d = 3: ρ = 31! 28! / (41! 18!)
    let exact = ln_rational(&rho_exact(15, 10, 3));
    let got = log_factorial_ratio(15, 10, dim(3)).unwrap();
    assert!((got - exact).abs() <= 1e-12 * exact.abs());
    assert!(got < 0.0);
}

#[test]
fn binomial_matches_pascal_triangle() {
    let mut row = vec![1u128];
    for n in 0u64..=60 {
        for (k, &v) in row.iter().enumerate() {
            assert_eq!(binomial(n, k as u64), v);
        }
        assert_eq!(binomial(n, n + 1), 0);
        let mut next = vec![1u128; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
}
