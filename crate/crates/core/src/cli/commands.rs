use std::fs;

use serde_json::Value;

use super::output::{Cell, Report, Table};
use super::{CliError, RunConfig, EXIT_CHECK_FAILED};
use crate::dimension::Dimension;
use crate::jacobi;
use crate::oracle;
use crate::radial::{norm_ball, project};
use crate::spectral::{
    decay_constant, eigenvalue_moment, invert as invert_spectrum, series_is_truncated,
    spectrum_moment, spectrum_series, truncate as truncate_spectrum, truncation_error,
    verify_decay_bound_for, Spectrum, SpectrumSource,
};

pub(super) fn eigvals(config: &RunConfig) -> Result<Report, CliError> {
    let profile = config.require_profile()?;
    let l = config.require_max_degree()?;
    let d = config.d;
    let k = config.jacobi_degree.unwrap_or(2 * l - 2);
    let expansion = project(profile, d, k);
    let series = spectrum_series(&expansion, l)?;
    let decay = verify_decay_bound_for(&expansion, &series);

    let mut table = Table::new(vec![
        "ell",
        "lambda_series",
        "lambda_moment",
        "abs_diff",
        "bound",
        "margin",
    ]);
    let mut pass = true;
    let mut max_diff = 0.0f64;
    for row in &decay.rows {
        let moment = eigenvalue_moment(profile, row.ell, d)?;
        let diff = (row.lambda - moment).abs();
        max_diff = max_diff.max(diff);
        pass &= diff <= config.tol_dual * moment.abs().max(1.0);
        pass &= row.margin >= 0.0;
        table.push(vec![
            row.ell.into(),
            row.lambda.into(),
            moment.into(),
            diff.into(),
            row.bound.into(),
            row.margin.into(),
        ]);
    }

    let mut meta = config.base_metadata();
    meta.insert("L".into(), Value::from(l));
    meta.insert("K".into(), Value::from(k));
    meta.insert("source".into(), Value::from("series+moment"));
    meta.insert(
        "truncated".into(),
        Value::from(series_is_truncated(&expansion, l)),
    );
    meta.insert("eta_norm".into(), Value::from(norm_ball(&expansion)));
    meta.insert("eta_norm_exact".into(), Value::from(profile.norm_ball(d)));
    meta.insert("decay_constant".into(), Value::from(decay.constant));
    meta.insert(
        "observed_constant".into(),
        Value::from(decay.observed_constant),
    );
    meta.insert("max_abs_diff".into(), Value::from(max_diff));
    meta.insert("tol_dual".into(), Value::from(config.tol_dual));
    Ok(Report {
        command: "eigvals",
        metadata: meta,
        table,
        pass,
        failure_code: EXIT_CHECK_FAILED,
    })
}

pub(super) fn basis(config: &RunConfig) -> Result<Report, CliError> {
    let k = config
        .jacobi_degree
        .ok_or_else(|| CliError::Usage("--K is required".into()))?;
    let diag = jacobi::diagnostics(config.d, k);
    let tol = config.tol_basis;
    let mut table = Table::new(vec!["check", "value", "tolerance", "pass"]);
    let mut pass = true;
    for (name, value) in [
        ("gram_max_off_diagonal", diag.gram_max_off_diagonal),
        ("gram_max_diagonal_deviation", diag.gram_max_diagonal),
        ("monomial_reconstruction_max", diag.reconstruction_max),
        ("chi_projection_max", diag.chi_projection_max),
    ] {
        let ok = value <= tol;
        pass &= ok;
        table.push(vec![name.into(), value.into(), tol.into(), ok.into()]);
    }
    let mut meta = config.base_metadata();
    meta.insert("K".into(), Value::from(k));
    meta.insert(
        "gram_nodes".into(),
        Value::from(jacobi::gram_nodes(config.d, k)),
    );
    meta.insert("tol_basis".into(), Value::from(tol));
    Ok(Report {
        command: "basis",
        metadata: meta,
        table,
        pass,
        failure_code: EXIT_CHECK_FAILED,
    })
}

pub(super) fn verify(config: &RunConfig) -> Result<Report, CliError> {
    let d = config.d.get();
    if d != 2 && d != 3 {
        return Err(CliError::Unsupported(format!(
            "verify uses explicit harmonics and supports only d = 2 or d = 3, got d = {d}"
        )));
    }
    let profile = config.require_profile()?;
    let l = config.require_max_degree()?;
    let cross = oracle::cross_validate(profile, config.d, l)?;
    let basis = oracle::harmonics(d, l)?;

    let mut table = Table::new(vec![
        "check",
        "row",
        "col",
        "value",
        "reference",
        "abs_error",
        "pass",
    ]);
    let mut pass = true;
    for e in &cross.entries {
        pass &= e.pass;
        table.push(vec![
            "brute_force".into(),
            e.row.clone().into(),
            e.col.clone().into(),
            e.brute_force.into(),
            e.reference.into(),
            e.abs_error.into(),
            e.pass.into(),
        ]);
    }
    for h1 in &basis {
        for h2 in &basis {
            let r = oracle::verify_gradient_identity(h1, h2)?;
            pass &= r.pass;
            table.push(vec![
                "gradient_identity".into(),
                h1.to_string().into(),
                h2.to_string().into(),
                r.lhs.into(),
                (r.eigenvalue * r.rhs).into(),
                r.abs_error.into(),
                r.pass.into(),
            ]);
        }
    }
    let mut meta = config.base_metadata();
    meta.insert("L".into(), Value::from(l));
    meta.insert(
        "off_diagonal_tol".into(),
        Value::from(oracle::OFF_DIAGONAL_TOL),
    );
    meta.insert(
        "diagonal_rel_tol".into(),
        Value::from(oracle::DIAGONAL_REL_TOL),
    );
    meta.insert(
        "gradient_identity_tol".into(),
        Value::from(oracle::GRADIENT_IDENTITY_TOL),
    );
    meta.insert(
        "max_off_diagonal".into(),
        Value::from(cross.max_off_diagonal()),
    );
    meta.insert(
        "max_diagonal_relative".into(),
        Value::from(cross.max_diagonal_relative()),
    );
    Ok(Report {
        command: "verify",
        metadata: meta,
        table,
        pass,
        failure_code: EXIT_CHECK_FAILED,
    })
}

pub(super) fn truncate(config: &RunConfig) -> Result<Report, CliError> {
    let profile = config.require_profile()?;
    let n = config
        .truncation
        .ok_or_else(|| CliError::Usage("--N is required".into()))?;
    let l = config.max_degree.unwrap_or(2 * (n + 1));
    if n > l {
        return Err(CliError::Usage(format!("--N {n} exceeds --L {l}")));
    }
    let spectrum = spectrum_moment(profile, config.d, l)?;
    let mut table = Table::new(vec!["N", "tail_norm", "a_priori_bound", "pass"]);
    let mut pass = true;
    let mut previous = f64::INFINITY;
    for m in 0..=n {
        let err = truncation_error(&truncate_spectrum(&spectrum, m)?);
        let ok = err.tail_norm <= previous && err.tail_norm <= err.a_priori_bound;
        pass &= ok;
        previous = err.tail_norm;
        table.push(vec![
            m.into(),
            err.tail_norm.into(),
            err.a_priori_bound.into(),
            ok.into(),
        ]);
    }
    let mut meta = config.base_metadata();
    meta.insert("L".into(), Value::from(l));
    meta.insert("N".into(), Value::from(n));
    meta.insert("source".into(), Value::from(spectrum.source.tag()));
    meta.insert("eta_norm".into(), Value::from(spectrum.eta_norm));
    meta.insert(
        "decay_constant".into(),
        Value::from(decay_constant(config.d)),
    );
    Ok(Report {
        command: "truncate",
        metadata: meta,
        table,
        pass,
        failure_code: EXIT_CHECK_FAILED,
    })
}

/// Parse a two-column `ell,lambda` CSV. Degrees must run `1, 2, ..., L`; an
/// optional non-numeric header line is skipped.
pub(crate) fn parse_spectrum_csv(text: &str, d: Dimension) -> Result<Spectrum, CliError> {
    let malformed = |line: u64, msg: &str| CliError::Usage(format!("spectrum line {line}: {msg}"));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut lambdas = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Usage(format!("spectrum: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(malformed(line, "expected two columns `ell,lambda`"));
        }
        let ell = match record[0].parse::<usize>() {
            Ok(ell) => ell,
            Err(_) if lambdas.is_empty() && record[1].parse::<f64>().is_err() => continue,
            Err(_) => return Err(malformed(line, "degree is not a non-negative integer")),
        };
        let lambda: f64 = record[1]
            .parse()
            .map_err(|_| malformed(line, "eigenvalue is not a number"))?;
        if !lambda.is_finite() {
            return Err(malformed(line, "eigenvalue is not finite"));
        }
        if ell != lambdas.len() + 1 {
            return Err(malformed(
                line,
                &format!("expected degree {}, found {ell}", lambdas.len() + 1),
            ));
        }
        lambdas.push(lambda);
    }
    if lambdas.is_empty() {
        return Err(CliError::Usage(
            "spectrum file contains no eigenvalues".into(),
        ));
    }
    Ok(Spectrum {
        d,
        lambdas,
        source: SpectrumSource::External,
        eta_norm: f64::NAN,
    })
}

pub(super) fn invert(config: &RunConfig) -> Result<Report, CliError> {
    let unknowns = config
        .jacobi_degree
        .ok_or_else(|| CliError::Usage("--K (number of unknowns) is required".into()))?;
    let d = config.d;

    let (observed, reference) = match (&config.spectrum, &config.profile) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --spectrum or a profile for a synthetic run, not both".into(),
            ))
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read spectrum {}: {e}", path.display()))
            })?;
            let s = parse_spectrum_csv(&text, d)?;
            if let Some(l) = config.max_degree {
                if l != s.len() {
                    return Err(CliError::Usage(format!(
                        "--L {l} does not match the {} eigenvalues in the file",
                        s.len()
                    )));
                }
            }
            (s, None)
        }
        (None, Some((_, profile))) => {
            let l = config.require_max_degree()?;
            let expansion = project(profile, d, 2 * l - 2);
            (spectrum_series(&expansion, l)?, Some(expansion))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "invert needs --spectrum or a profile (--preset/--profile)".into(),
            ))
        }
    };

    let result = invert_spectrum(&observed, unknowns, &config.regularization)?;

    let mut table = Table::new(vec!["quantity", "index", "value"]);
    for (k, a) in result.expansion.a.iter().enumerate() {
        table.push(vec!["a".into(), k.into(), (*a).into()]);
    }
    for (i, s) in result.singular_values.iter().enumerate() {
        table.push(vec!["singular_value".into(), i.into(), (*s).into()]);
    }
    table.push(vec![
        "effective_rank".into(),
        0usize.into(),
        Cell::Int(result.effective_rank as i64),
    ]);
    table.push(vec![
        "residual".into(),
        0usize.into(),
        result.residual_norm.into(),
    ]);

    let mut meta = config.base_metadata();
    meta.insert("L".into(), Value::from(observed.len()));
    meta.insert("K".into(), Value::from(unknowns));
    meta.insert("tau".into(), Value::from(config.regularization.tau));
    meta.insert("alpha".into(), Value::from(config.regularization.alpha));
    meta.insert("effective_rank".into(), Value::from(result.effective_rank));
    meta.insert("residual".into(), Value::from(result.residual_norm));
    meta.insert(
        "input".into(),
        Value::from(if reference.is_some() {
            "synthetic"
        } else {
            "spectrum_file"
        }),
    );
    if let Some(reference) = reference {
        let err = result
            .expansion
            .a
            .iter()
            .zip(&reference.a)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();
        meta.insert("recovery_error".into(), Value::from(err));
    }
    Ok(Report {
        command: "invert",
        metadata: meta,
        table,
        pass: true,
        failure_code: EXIT_CHECK_FAILED,
    })
}
