use std::path::Path;

use entloc::correlate::{
    self, FitForm, FitParams, FitWidths, ProbabilityKind, SigmaScanSettings, WidthSource,
};
use entloc::oscillator::{self, OscillatorModel};
use entloc::restrict::{self, Partition, TailHandling};
use entloc::spin::{self, SpinMeasure, SpinScan};
use entloc::{linalg, AxisSpec, DiscretizationSpec, Distribution2D, DistributionKind, Region};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::*;
use crate::emit;
use crate::CliError;

const DEFAULT_ONE_BINS: usize = restrict::DEFAULT_ONE_RESTRICTED_BINS;
const DEFAULT_BOTH_BINS: usize = restrict::DEFAULT_BOTH_RESTRICTED_BINS;

pub fn dispatch(command: &Command) -> Result<(), CliError> {
    let echo = serde_json::to_value(command).expect("arguments always serialize");
    match command {
        Command::SpinScan(a) => spin_scan(a, echo),
        Command::SpinNegativityScan(a) => spin_negativity_scan(a, echo),
        Command::SpinVanishPoint(a) => spin_vanish_point(a, echo),
        Command::GaussConstants(a) => gauss_constants(a, echo),
        Command::GaussOneRestricted(a) => gauss_one_restricted(a, echo),
        Command::GaussBothRestricted(a) => gauss_both_restricted(a, echo),
        Command::GaussLimits(a) => gauss_limits(a, echo),
        Command::GaussClassicalMap(a) => gauss_classical_map(a, echo),
        Command::GaussFit(a) => gauss_fit(a, echo),
        Command::GaussSigmaScan(a) => gauss_sigma_scan(a, echo),
        Command::GaussInequality(a) => gauss_inequality(a, echo),
        Command::GaussConverge(a) => gauss_converge(a, echo),
    }
}

fn metadata(echo: Value) -> Value {
    json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "entloc_version": entloc::VERSION,
        "config": echo,
    })
}

fn model(m: &ModelArgs) -> Result<OscillatorModel, CliError> {
    Ok(OscillatorModel::with_units(m.alpha, m.mass, m.omega)?)
}

fn discretization(
    d: &DiscretizationArgs,
    default_bins: usize,
) -> Result<DiscretizationSpec, CliError> {
    Ok(match d.method {
        Method::Grid => DiscretizationSpec::grid(d.n_bins.unwrap_or(default_bins))?,
        Method::Basis => DiscretizationSpec::basis(d.n_basis, d.quad_order)?,
    })
}

fn centre_axis(c: &CentreAxis) -> Result<AxisSpec, CliError> {
    Ok(AxisSpec::new(c.q_min, c.q_max, c.q_steps)?)
}

fn theta_axis(t: &ThetaAxes) -> Result<AxisSpec, CliError> {
    Ok(AxisSpec::new(t.theta_min, t.theta_max, t.theta_steps)?)
}

fn require_widths(widths: &[f64]) -> Result<(), CliError> {
    if widths.is_empty() {
        return Err(CliError::Usage("at least one width is required".into()));
    }
    Ok(())
}

fn write_distribution(
    out: &OutputArgs,
    dist: &Distribution2D,
    mut meta: Value,
) -> Result<(), CliError> {
    let text = match out.format {
        Format::Csv => emit::distribution_csv(dist),
        Format::Json => {
            meta["surface"] = emit::distribution_json(dist);
            emit::json_text(&meta)
        }
    };
    emit::write_output(out.output.as_deref(), &text)
}

fn write_spin_scan(
    out: &OutputArgs,
    surface: Surface,
    scan: &SpinScan,
    mut meta: Value,
) -> Result<(), CliError> {
    let text = match out.format {
        Format::Csv => emit::distribution_csv(match surface {
            Surface::Unrestricted => &scan.unrestricted,
            Surface::Restricted => &scan.restricted,
            Surface::Difference => &scan.difference,
        }),
        Format::Json => {
            meta["surfaces"] = json!({
                "unrestricted": emit::distribution_json(&scan.unrestricted),
                "restricted": emit::distribution_json(&scan.restricted),
                "difference": emit::distribution_json(&scan.difference),
            });
            emit::json_text(&meta)
        }
    };
    emit::write_output(out.output.as_deref(), &text)
}

fn write_json(path: Option<&Path>, value: &Value) -> Result<(), CliError> {
    emit::write_output(path, &emit::json_text(value))
}

fn spin_scan(a: &SpinScanArgs, echo: Value) -> Result<(), CliError> {
    let axis = theta_axis(&a.axes)?;
    let scan = spin::spin_scan(axis, axis, SpinMeasure::Entropy)?;
    write_spin_scan(&a.out, a.surface, &scan, metadata(echo))
}

fn spin_negativity_scan(a: &SpinNegativityArgs, echo: Value) -> Result<(), CliError> {
    let axis = theta_axis(&a.axes)?;
    let scan = spin::spin_scan(
        axis,
        axis,
        SpinMeasure::Negativity {
            fidelity: a.fidelity,
        },
    )?;
    write_spin_scan(&a.out, a.surface, &scan, metadata(echo))
}

fn spin_vanish_point(a: &SpinVanishArgs, echo: Value) -> Result<(), CliError> {
    let f_star =
        spin::negativity_vanish_point(a.theta1, a.theta2, false, a.threshold, a.tolerance)?;
    let f_star_restricted =
        spin::negativity_vanish_point(a.theta1, a.theta2, true, a.threshold, a.tolerance)?;
    let curve = match a.curve_steps {
        Some(steps) => {
            let fs = AxisSpec::new(spin::MIN_FIDELITY, 1.0, steps)?.points();
            fs.iter()
                .map(|&f| {
                    Ok(vec![
                        f,
                        spin::spin_negativity(a.theta1, a.theta2, f, false)?,
                        spin::spin_negativity(a.theta1, a.theta2, f, true)?,
                    ])
                })
                .collect::<Result<Vec<_>, entloc::Error>>()?
        }
        None => Vec::new(),
    };
    match a.format {
        Format::Csv => {
            if a.curve_steps.is_none() {
                return Err(CliError::Usage("CSV output needs --curve-steps".into()));
            }
            let text = emit::table_csv(&["fidelity", "unrestricted", "restricted"], &curve);
            emit::write_output(a.output.as_deref(), &text)
        }
        Format::Json => {
            let mut v = metadata(echo);
            v["F_star"] = json!(f_star);
            v["F_star_restricted"] = json!(f_star_restricted);
            if a.curve_steps.is_some() {
                v["curve"] = json!(curve
                    .iter()
                    .map(|r| json!({ "fidelity": r[0], "unrestricted": r[1], "restricted": r[2] }))
                    .collect::<Vec<_>>());
            }
            write_json(a.output.as_deref(), &v)
        }
    }
}

fn gauss_constants(a: &ModelOnly, echo: Value) -> Result<(), CliError> {
    let m = model(&a.model)?;
    let k = oscillator::ground_state_constants(&m);
    let mut v = metadata(echo);
    v["s"] = json!(m.s());
    v["L"] = json!(k.l);
    v["C1"] = json!(k.c1);
    v["C2"] = json!(k.c2);
    v["sigma"] = json!(k.sigma);
    v["w"] = json!(k.w);
    v["eof"] = json!(k.eof);
    write_json(a.output.as_deref(), &v)
}

fn gauss_limits(a: &LimitsArgs, echo: Value) -> Result<(), CliError> {
    let m = model(&a.model)?;
    Region::new(0.0, a.a)?;
    Region::new(0.0, a.b)?;
    let eps_one = oscillator::small_a_epsilon_one(&m, a.a);
    let eps_both = oscillator::small_a_epsilon_both(&m, a.a, a.b);
    let mut v = metadata(echo);
    v["epsilon_one"] = json!(eps_one);
    v["epsilon_both"] = json!(eps_both);
    v["entropy_one"] = json!(linalg::binary_entropy(eps_one)?);
    v["entropy_both"] = json!(linalg::binary_entropy(eps_both)?);
    v["concurrence_density"] = json!(oscillator::concurrence_density(&m));
    write_json(a.output.as_deref(), &v)
}

fn gauss_one_restricted(a: &OneRestrictedArgs, echo: Value) -> Result<(), CliError> {
    require_widths(&a.widths)?;
    let m = model(&a.model)?;
    let spec = discretization(&a.disc, DEFAULT_ONE_BINS)?;
    let out = restrict::one_restricted_map(&m, &a.widths, centre_axis(&a.centres)?, spec)?;
    let mut meta = metadata(echo);
    meta["sigma"] = json!(oscillator::ground_state_constants(&m).sigma);
    meta["eof"] = json!(oscillator::gaussian_eof(&m));
    let dist = if a.rescaled { &out.rescaled } else { &out.map };
    write_distribution(&a.out, dist, meta)
}

fn gauss_both_restricted(a: &BothRestrictedArgs, echo: Value) -> Result<(), CliError> {
    let m = model(&a.model)?;
    let spec = discretization(&a.disc, DEFAULT_BOTH_BINS)?;
    let centres = centre_axis(&a.centres)?;
    let dist = match a.case {
        BothCase::Map => {
            let hb = 0.5 * a.width_b.unwrap_or(a.width);
            restrict::both_restricted_map(&m, centres, centres, 0.5 * a.width, hb, spec)?
        }
        case => {
            require_widths(&a.widths)?;
            let cmp = restrict::case_comparison(&m, &a.widths, centres, spec)?;
            match case {
                BothCase::SameCentre => cmp.same_centre,
                BothCase::BobFixed => cmp.bob_fixed,
                _ => cmp.alice_only,
            }
        }
    };
    write_distribution(&a.out, &dist, metadata(echo))
}

fn gauss_classical_map(a: &ClassicalMapArgs, echo: Value) -> Result<(), CliError> {
    let m = model(&a.model)?;
    let centres = centre_axis(&a.centres)?;
    let kind = match a.kind {
        ProbabilityArg::Joint => ProbabilityKind::Joint,
        ProbabilityArg::Conditional => ProbabilityKind::Conditional,
    };
    let hb = 0.5 * a.width_b.unwrap_or(a.width);
    let dist = correlate::probability_map(&m, centres, centres, 0.5 * a.width, hb, kind)?;
    write_distribution(&a.out, &dist, metadata(echo))
}

fn width_values(f: &FitParams) -> Vec<(&'static str, f64)> {
    match f.widths {
        FitWidths::SymmetricPm {
            sigma_plus,
            sigma_minus,
        } => {
            vec![("sigma_plus", sigma_plus), ("sigma_minus", sigma_minus)]
        }
        FitWidths::Conditional {
            sigma_1,
            sigma_2,
            sigma_12,
        } => {
            vec![
                ("sigma_1", sigma_1),
                ("sigma_2", sigma_2),
                ("sigma_12", sigma_12),
            ]
        }
    }
}

fn gauss_fit(a: &FitArgs, echo: Value) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let dist = emit::parse_distribution_csv(&text, DistributionKind::Entanglement)?;
    let form = match a.form {
        FormArg::SymmetricPm => FitForm::SymmetricPm,
        FormArg::Conditional => FitForm::Conditional,
    };
    if !(a.jitter >= 0.0 && a.jitter < 1.0) {
        return Err(CliError::Usage(format!(
            "--jitter must lie in [0, 1), got {}",
            a.jitter
        )));
    }
    let fit = correlate::fit_surface(&dist, form, a.threshold)?;
    let mut v = metadata(echo);
    v["fit"] = serde_json::to_value(fit).expect("fit parameters serialize");
    let span = |axis: &[f64]| json!([axis.first(), axis.last()]);
    v["fit_window"] = json!({
        dist.axis_names[0].clone(): span(&dist.axis_a),
        dist.axis_names[1].clone(): span(&dist.axis_b),
    });
    if a.jitter_trials > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let base = width_values(&fit);
        let mut samples = vec![Vec::with_capacity(a.jitter_trials); base.len()];
        for _ in 0..a.jitter_trials {
            let mut noisy = dist.clone();
            for x in noisy.values.iter_mut() {
                *x *= 1.0 + a.jitter * rng.gen_range(-1.0..=1.0);
            }
            let f = correlate::fit_surface(&noisy, form, a.threshold)?;
            for (k, (_, w)) in width_values(&f).into_iter().enumerate() {
                samples[k].push(w);
            }
        }
        let mut spread = serde_json::Map::new();
        for ((name, _), s) in base.iter().zip(&samples) {
            let n = s.len() as f64;
            let mean = s.iter().sum::<f64>() / n;
            let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            spread.insert(name.to_string(), json!({ "mean": mean, "std": var.sqrt() }));
        }
        v["jitter"] = json!({ "trials": a.jitter_trials, "relative": a.jitter, "seed": a.seed, "widths": spread });
    }
    write_json(a.output.as_deref(), &v)
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn gauss_sigma_scan(a: &SigmaScanArgs, echo: Value) -> Result<(), CliError> {
    if a.alphas.is_empty() {
        return Err(CliError::Usage("at least one alpha is required".into()));
    }
    let source = match a.source {
        SourceArg::Quantum => WidthSource::Quantum,
        SourceArg::Classical => WidthSource::Classical,
        SourceArg::SmallA => WidthSource::SmallAAnalytic,
    };
    let settings = SigmaScanSettings {
        width: a.width,
        window: centre_axis(&a.centres)?,
        spec: discretization(&a.disc, DEFAULT_BOTH_BINS)?,
        threshold: a.threshold,
    };
    let rows = correlate::sigma_vs_alpha_scan(&a.alphas, source, settings)?;
    let columns = [
        "alpha",
        "sigma_plus",
        "sigma_minus",
        "sigma_1",
        "sigma_2",
        "sigma_12",
    ];
    let table: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            vec![
                r.alpha,
                opt(r.sigma_plus),
                opt(r.sigma_minus),
                opt(r.sigma_1),
                opt(r.sigma_2),
                opt(r.sigma_12),
            ]
        })
        .collect();
    let text = match a.out.format {
        Format::Csv => emit::table_csv(&columns, &table),
        Format::Json => {
            let mut v = metadata(echo);
            v["rows"] = serde_json::to_value(&rows).expect("rows serialize");
            emit::json_text(&v)
        }
    };
    emit::write_output(a.out.output.as_deref(), &text)
}

fn gauss_inequality(a: &InequalityArgs, echo: Value) -> Result<(), CliError> {
    let m = model(&a.model)?;
    let tail = if a.merge_tails {
        TailHandling::Merge
    } else {
        TailHandling::Truncate
    };
    let partition = Partition::uniform(a.lo, a.hi, a.cells, tail)?;
    let report = restrict::partition_inequality_check(
        &m,
        &partition,
        &partition,
        discretization(&a.disc, DEFAULT_BOTH_BINS)?,
    )?;
    let region = Region::new(a.region_centre, a.region_half_width)?;
    let one_spec = discretization(&a.disc, DEFAULT_ONE_BINS)?;
    let nd = restrict::non_discarding_entanglement(&m, region, one_spec)?;
    let precise = restrict::precise_measurement_entanglement(&m, region, one_spec)?;
    let mut v = metadata(echo);
    v["partition"] = json!({
        "average": report.average,
        "coverage": report.coverage,
        "full": report.full,
        "slack": report.slack,
        "cells": report.cells,
    });
    v["non_discarding"] = serde_json::to_value(nd).expect("result serializes");
    v["precise_measurement_negativity"] = json!(precise);
    write_json(a.output.as_deref(), &v)
}

fn gauss_converge(a: &ConvergeArgs, echo: Value) -> Result<(), CliError> {
    require_widths(&a.widths)?;
    let m = model(&a.model)?;
    let mut rows = Vec::new();
    for &w in &a.widths {
        let region = Region::new(a.centre, 0.5 * w)?;
        for &n in &a.grid {
            let s = restrict::one_restricted_entropy(&m, region, DiscretizationSpec::grid(n)?)?;
            rows.push((w, "grid", n, s.entanglement));
        }
        for &n in &a.basis {
            let s = restrict::basis_expansion_entropy(&m, region, n, a.quad_order)?;
            rows.push((w, "basis", n, s.entanglement));
        }
    }
    let text = match a.out.format {
        Format::Csv => {
            let mut out = String::from("width,method,n,entropy\n");
            for (w, method, n, s) in &rows {
                out.push_str(&format!(
                    "{},{method},{n},{}\n",
                    emit::format_value(*w),
                    emit::format_value(*s)
                ));
            }
            out
        }
        Format::Json => {
            let mut v = metadata(echo);
            v["eof"] = json!(oscillator::gaussian_eof(&m));
            v["rows"] = json!(rows
                .iter()
                .map(|(w, method, n, s)| json!({ "width": w, "method": method, "n": n, "entropy": s }))
                .collect::<Vec<_>>());
            emit::json_text(&v)
        }
    };
    emit::write_output(a.out.output.as_deref(), &text)
}
