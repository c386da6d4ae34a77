mod common;

use common::{corpus, dim, rho_exact};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use radial_eit::oracle::{brute_force_entry, ExplicitHarmonic, HarmonicKind};
use radial_eit::radial::{project, JacobiExpansion, RadialProfile};
use radial_eit::spectral::{
    apply, decay_constant, dim_h, eigenvalue_moment, eigenvalue_series, forward_matrix, invert,
    series_magnitude, spectrum_moment, spectrum_series, truncate, truncation_error,
    verify_decay_bound, verify_decay_bound_for, verify_rho_bound, BoundaryField,
    RegularizationSettings, Spectrum, SpectrumSource,
};

/// `λ_ℓ = -(2ℓ+d-2)/ℓ ∫ η r^{2ℓ+d-3} dr` with the integral done exactly over
/// the (dyadic) breakpoints and coefficients.
fn lambda_exact(eta: &RadialProfile, ell: usize, d: u32) -> f64 {
    let p = 2 * ell + d as usize - 3;
    let mut total = BigRational::zero();
    for ((a, b), coeffs) in eta.intervals() {
        let a = BigRational::from_float(a).unwrap();
        let b = BigRational::from_float(b).unwrap();
        for (j, &c) in coeffs.iter().enumerate() {
            let e = (j + p + 1) as i32;
            let c = BigRational::from_float(c).unwrap();
            total += c * (b.pow(e) - a.pow(e)) / BigRational::from_integer(BigInt::from(e));
        }
    }
    let factor = BigRational::new(
        BigInt::from(-((2 * ell + d as usize - 2) as i64)),
        BigInt::from(ell as i64),
    );
    (factor * total).to_f64().unwrap()
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 20);
}

#[test]
fn moment_route_matches_exact_rational() {
    for (name, eta) in corpus() {
        for d in 2u32..=5 {
            for ell in 1..=30 {
                let exact = lambda_exact(&eta, ell, d);
                let got = eigenvalue_moment(&eta, ell, dim(d)).unwrap();
                assert!(
                    rel_err(got, exact) <= 1e-12,
                    "{name} d={d} ell={ell}: {got} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn series_route_matches_moment_route() {
    for (name, eta) in corpus() {
        for d in 2u32..=5 {
            let exp = project(&eta, dim(d), 58);
            for ell in 1..=30 {
                let series = eigenvalue_series(&exp, ell).unwrap();
                let moment = eigenvalue_moment(&eta, ell, dim(d)).unwrap();
                assert!(
                    (series - moment).abs() <= 1e-8 * moment.abs().max(1.0),
                    "{name} d={d} ell={ell}: {series} vs {moment}"
                );
            }
        }
    }
}

#[test]
fn series_error_is_within_its_conditioning() {
    // Annuli away from the boundary have geometrically small λ_ℓ while the
    // series terms stay O(1); the discrepancy must still sit at rounding level
    // relative to the terms being summed.
    for (name, eta) in corpus() {
        for d in 2u32..=5 {
            let exp = project(&eta, dim(d), 58);
            for ell in 1..=30 {
                let series = eigenvalue_series(&exp, ell).unwrap();
                let moment = eigenvalue_moment(&eta, ell, dim(d)).unwrap();
                let magnitude = series_magnitude(&exp, ell).unwrap();
                assert!(
                    (series - moment).abs() <= 1e3 * f64::EPSILON * magnitude.max(moment.abs()),
                    "{name} d={d} ell={ell}"
                );
            }
        }
    }
}

#[test]
fn series_is_well_conditioned_for_polynomials() {
    for (name, eta) in corpus() {
        if eta.breakpoints().len() != 2 {
            continue;
        }
        for d in 2u32..=5 {
            let exp = project(&eta, dim(d), 58);
            for ell in 1..=30 {
                let series = eigenvalue_series(&exp, ell).unwrap();
                let moment = eigenvalue_moment(&eta, ell, dim(d)).unwrap();
                assert!(rel_err(series, moment) <= 1e-8, "{name} d={d} ell={ell}");
            }
        }
    }
}

#[test]
fn constant_profile_spectrum_is_harmonic() {
    let one = RadialProfile::constant(1.0).unwrap();
    for d in 2u32..=8 {
        let s = spectrum_moment(&one, dim(d), 50).unwrap();
        let exp = project(&one, dim(d), 0);
        let t = spectrum_series(&exp, 50).unwrap();
        for ell in 1..=50 {
            let want = -1.0 / ell as f64;
            assert!((s.eigenvalue(ell).unwrap() - want).abs() <= 1e-12);
            assert!((t.eigenvalue(ell).unwrap() - want).abs() <= 1e-12);
        }
    }
}

#[test]
fn annulus_worked_example() {
    // λ_1 = -2 ∫_{1/2}^1 r dr = -3/4 in d = 2
    let eta = RadialProfile::annulus(0.5, 1.0, 1.0).unwrap();
    assert!((eigenvalue_moment(&eta, 1, dim(2)).unwrap() + 0.75).abs() < 1e-15);
    let exp = project(&eta, dim(2), 0);
    assert!((eigenvalue_series(&exp, 1).unwrap() + 0.75).abs() < 1e-14);
}

#[test]
fn spectrum_bookkeeping() {
    let eta = RadialProfile::ramp(1.0).unwrap();
    let s = spectrum_moment(&eta, dim(3), 4).unwrap();
    assert_eq!(s.len(), 4);
    assert!(s.eigenvalue(0).is_err());
    assert!(s.eigenvalue(5).is_err());
    assert_eq!(s.source, SpectrumSource::Moment);
    assert!((s.eta_norm - eta.norm_ball(dim(3))).abs() < 1e-15);
    let short = project(&eta, dim(3), 2);
    assert!(matches!(
        spectrum_series(&short, 4).unwrap().source,
        SpectrumSource::Series { truncated: true }
    ));
}

#[test]
fn eigenvalues_are_linear_in_the_profile() {
    let c = corpus();
    for d in 2u32..=4 {
        for (i, j) in [(0, 5), (3, 7), (10, 15), (12, 20)] {
            let (p, q) = (&c[i].1, &c[j].1);
            let combo = p.linear_combination(1.5, q, -0.25);
            for ell in 1..=20 {
                let lhs = eigenvalue_moment(&combo, ell, dim(d)).unwrap();
                let rhs = 1.5 * eigenvalue_moment(p, ell, dim(d)).unwrap()
                    - 0.25 * eigenvalue_moment(q, ell, dim(d)).unwrap();
                assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()));
            }
        }
    }
}

#[test]
fn rho_bound_has_no_violations() {
    for d in 2u32..=6 {
        for ell in 1..=200 {
            let report = verify_rho_bound(ell, dim(d)).unwrap();
            assert!(report.holds(), "d={d} ell={ell}");
        }
    }
}

#[test]
fn rho_matches_exact_for_small_degrees() {
    for d in 2u32..=4 {
        for ell in 1..=12usize {
            let report = verify_rho_bound(ell, dim(d)).unwrap();
            for row in &report.rows {
                let exact = rho_exact(ell as u64, row.k as u64, u64::from(d))
                    .to_f64()
                    .unwrap();
                assert!((row.log_ratio.exp() - exact).abs() <= 1e-12 * exact);
            }
        }
    }
}

#[test]
fn decay_bound_holds_on_corpus() {
    for (name, eta) in corpus() {
        for d in 2u32..=5 {
            let report = verify_decay_bound(&spectrum_moment(&eta, dim(d), 200).unwrap());
            assert!(report.holds(), "{name} d={d}");
            assert!(report.observed_constant <= decay_constant(dim(d)));
        }
    }
}

#[test]
fn decay_constant_d2() {
    let e = std::f64::consts::E;
    let expected = 2.0 * (e * e / std::f64::consts::PI).sqrt() * 2f64.sqrt();
    assert!((decay_constant(dim(2)) - expected).abs() < 1e-14);
}

#[test]
fn dim_h_closed_forms() {
    for ell in 1..=100u64 {
        assert_eq!(dim_h(ell, dim(2)), 2);
        assert_eq!(dim_h(ell, dim(3)), 2 * ell + 1);
        assert_eq!(dim_h(ell, dim(4)), (ell + 1) * (ell + 1));
    }
    assert_eq!(dim_h(0, dim(3)), 1);
}

#[test]
fn truncation_tail_is_monotone_and_bounded() {
    for (name, eta) in corpus() {
        for d in [2u32, 3] {
            let s = spectrum_moment(&eta, dim(d), 101).unwrap();
            let mut previous = f64::INFINITY;
            for n in 0..=100 {
                let err = truncation_error(&truncate(&s, n).unwrap());
                assert!(err.tail_norm <= previous, "{name} d={d} N={n}");
                assert!(err.tail_norm <= err.a_priori_bound, "{name} d={d} N={n}");
                previous = err.tail_norm;
            }
        }
    }
}

#[test]
fn constant_profile_truncation_tails() {
    let s = spectrum_moment(&RadialProfile::constant(1.0).unwrap(), dim(2), 5).unwrap();
    let tails: Vec<f64> = (0..=4)
        .map(|n| truncation_error(&truncate(&s, n).unwrap()).tail_norm)
        .collect();
    for (n, t) in tails.iter().enumerate() {
        assert!((t - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
    }
    assert_eq!(truncation_error(&truncate(&s, 5).unwrap()).tail_norm, 0.0);
}

#[test]
fn operator_acts_diagonally_on_fields() {
    let eta = RadialProfile::annulus(0.25, 0.75, 2.0).unwrap();
    let s = spectrum_moment(&eta, dim(3), 6).unwrap();
    let mut field = BoundaryField::new(dim(3), 6);
    for ell in 1..=6usize {
        for m in 0..dim_h(ell as u64, dim(3)) {
            field.insert(ell, m, Complex64::new(m as f64, 1.0)).unwrap();
        }
    }
    let out = apply(&s, &field).unwrap();
    for ((ell, m), v) in out.iter() {
        let want = field.get(ell, m) * s.eigenvalue(ell).unwrap();
        assert!((v - want).norm() < 1e-15);
    }
    let op = truncate(&s, 3).unwrap();
    let cut = op.apply(&field).unwrap();
    assert!(cut
        .iter()
        .all(|((ell, _), v)| ell <= 3 || v == Complex64::new(0.0, 0.0)));
}

#[test]
fn inversion_round_trip() {
    let d = dim(2);
    let a = vec![0.7, -0.3, 0.45, 0.1, -0.6];
    let exp = JacobiExpansion::new(d, a.clone());
    let observed = spectrum_series(&exp, 10).unwrap();
    let result = invert(&observed, 5, &RegularizationSettings::default()).unwrap();
    assert_eq!(result.effective_rank, 5);
    for (got, want) in result.expansion.a.iter().zip(&a) {
        assert!((got - want).abs() <= 1e-8, "{got} vs {want}");
    }
    assert!(result.residual_norm <= 1e-12);
    assert!(result.singular_values.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn inversion_of_constant_profile() {
    let eta = RadialProfile::constant(1.0).unwrap();
    let observed = spectrum_moment(&eta, dim(2), 10).unwrap();
    let result = invert(&observed, 1, &RegularizationSettings::default()).unwrap();
    assert!((result.expansion.a[0] - 0.5f64.sqrt()).abs() <= 1e-12);
    assert!(result.residual_norm <= 1e-10);
}

#[test]
fn inversion_of_zero_spectrum() {
    let zero = Spectrum {
        d: dim(3),
        lambdas: vec![0.0; 10],
        source: SpectrumSource::External,
        eta_norm: 0.0,
    };
    let result = invert(&zero, 5, &RegularizationSettings::default()).unwrap();
    assert!(result.expansion.a.iter().all(|&a| a == 0.0));
    assert_eq!(result.residual_norm, 0.0);
}

#[test]
fn inversion_input_validation() {
    let s = spectrum_moment(&RadialProfile::constant(1.0).unwrap(), dim(2), 3).unwrap();
    let ok = RegularizationSettings::default();
    assert!(invert(&s, 0, &ok).is_err());
    assert!(invert(&s, 6, &ok).is_err());
    assert!(invert(&s, 5, &ok).is_ok());
    let negative = RegularizationSettings {
        tau: -1.0,
        alpha: 0.0,
    };
    assert!(invert(&s, 2, &negative).is_err());
    let empty = Spectrum {
        lambdas: vec![],
        ..s.clone()
    };
    assert!(invert(&empty, 1, &ok).is_err());
}

#[test]
fn ridge_shrinks_the_solution() {
    let exp = JacobiExpansion::new(dim(2), vec![0.7, -0.3, 0.45, 0.1, -0.6]);
    let observed = spectrum_series(&exp, 10).unwrap();
    let plain = invert(&observed, 5, &RegularizationSettings::default()).unwrap();
    let ridge = invert(
        &observed,
        5,
        &RegularizationSettings {
            tau: 1e-10,
            alpha: 1e-2,
        },
    )
    .unwrap();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!(norm(&ridge.expansion.a) < norm(&plain.expansion.a));
    assert!(ridge.residual_norm > plain.residual_norm);
}

#[test]
fn forward_matrix_reproduces_series() {
    let d = dim(3);
    let a = vec![0.2, -0.1, 0.3, 0.05];
    let m = forward_matrix(d, 6, 4);
    let s = spectrum_series(&JacobiExpansion::new(d, a.clone()), 6).unwrap();
    for ell in 1..=6 {
        let row: f64 = (0..4).map(|k| m[(ell - 1, k)] * a[k]).sum();
        assert!((row - s.eigenvalue(ell).unwrap()).abs() < 1e-15);
    }
    assert_eq!(m[(0, 1)], 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalue_is_independent_of_the_harmonic_index(ell in 1usize..=6, idx in 0usize..21) {
        let eta = corpus().swap_remove(idx).1;
        let cos = ExplicitHarmonic::circular(ell, HarmonicKind::Cosine).unwrap();
        let sin = ExplicitHarmonic::circular(ell, HarmonicKind::Sine).unwrap();
        let cc = brute_force_entry(&eta, &cos, &cos).unwrap();
        let ss = brute_force_entry(&eta, &sin, &sin).unwrap();
        let cs = brute_force_entry(&eta, &cos, &sin).unwrap();
        let lambda = eigenvalue_moment(&eta, ell, dim(2)).unwrap();
        prop_assert!((cc - lambda).abs() <= 1e-8 * lambda.abs().max(1e-12));
        prop_assert!((ss - lambda).abs() <= 1e-8 * lambda.abs().max(1e-12));
        prop_assert!(cs.abs() <= 1e-9);
    }

    #[test]
    fn zonal_entries_are_diagonal(l1 in 1usize..=5, l2 in 1usize..=5, idx in 0usize..21) {
        let eta = corpus().swap_remove(idx).1;
        let h1 = ExplicitHarmonic::zonal(l1).unwrap();
        let h2 = ExplicitHarmonic::zonal(l2).unwrap();
        let entry = brute_force_entry(&eta, &h1, &h2).unwrap();
        if l1 == l2 {
            let lambda = eigenvalue_moment(&eta, l1, dim(3)).unwrap();
            prop_assert!((entry - lambda).abs() <= 1e-8 * lambda.abs().max(1e-12));
        } else {
            prop_assert!(entry.abs() <= 1e-9);
        }
    }

    #[test]
    fn decay_bound_for_random_polynomials(
        coeffs in proptest::collection::vec(-5.0f64..5.0, 1..=9),
    ) {
        let eta = RadialProfile::polynomial(coeffs).unwrap();
        let exp = project(&eta, dim(3), 8);
        let s = spectrum_series(&exp, 50).unwrap();
        let report = verify_decay_bound_for(&exp, &s);
        prop_assert!(report.holds());
        prop_assert!(report.observed_constant <= report.constant);
    }
}
