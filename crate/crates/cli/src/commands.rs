use std::f64::consts::PI;
use std::fmt::Write as _;

use qc_toeplitz::circle_fourier::{coefficients, evaluate, poisson_samples, FourierSeries, GridFunction};
use qc_toeplitz::fredholm::{default_radius, winding_number};
use qc_toeplitz::oscillation::{bmo_profile, default_depth, essential_range, integer_valued_vmo_check};
use qc_toeplitz::symbol::{
    classify, classify_ladder, compare_symbols, example_h, factorize, realize, uniform_convergence_off_zero,
    ClassifyOptions, FactorOptions, Region,
};
use qc_toeplitz::symbol::example_h::weight_sum;
use qc_toeplitz::toeplitz::{
    kernel_count_index_estimate, operator_component_test, section_norm_convergence, semicommutator,
    singular_values, CompactPerturbation,
};
use qc_toeplitz::transforms::{double_hilbert_check, hilbert};
use qc_toeplitz::verify::run_all;
use qc_toeplitz::{Error, Result, SymbolSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Command, RunConfig};

pub struct Output {
    pub result: Value,
    pub csv: Option<String>,
    pub exit_code: u8,
}

impl Output {
    fn new(result: Value, csv: Option<String>) -> Self {
        Output { result, csv, exit_code: 0 }
    }
}

fn need(specs: &[SymbolSpec], n: usize, command: &str) -> Result<()> {
    if specs.len() != n {
        return Err(Error::validation(
            "cli",
            format!("`{command}` takes exactly {n} symbol(s) via --spec/--spec-file, got {}", specs.len()),
        ));
    }
    Ok(())
}

/// Nonzero coefficients as `[n, re, im]` triples.
fn coefficient_list(s: &FourierSeries) -> Value {
    let tol = 1e-14 * s.max_abs().max(1.0);
    Value::Array(
        s.iter().filter(|(_, c)| c.norm() > tol).map(|(n, c)| json!([n, c.re, c.im])).collect(),
    )
}

fn coefficient_csv(s: &FourierSeries) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, c) in s.iter() {
        let _ = writeln!(out, "{n},{},{}", c.re, c.im);
    }
    out
}

fn samples_csv(columns: &[(&str, &GridFunction)]) -> String {
    let mut out = String::from("theta");
    for (name, _) in columns {
        let _ = write!(out, ",{name}_re,{name}_im");
    }
    out.push('\n');
    let grid = columns[0].1.grid();
    for j in 0..grid.size() {
        let _ = write!(out, "{}", grid.point(j));
        for (_, f) in columns {
            let v = f.values()[j];
            let _ = write!(out, ",{},{}", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

/// Drops round-off coefficients and shrinks the table to the support, so that
/// section-size checks see the symbol's true degree.
fn trimmed(s: &FourierSeries) -> FourierSeries {
    let tol = 1e-14 * s.max_abs().max(1.0);
    let clean = s.map_indexed(|_, c| if c.norm() > tol { c } else { c * 0.0 });
    clean.with_degree(clean.support_degree().unwrap_or(0))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn ladder_or(cfg: &RunConfig, default: &[usize]) -> Vec<usize> {
    if cfg.ladder.is_empty() {
        default.to_vec()
    } else {
        cfg.ladder.clone()
    }
}

fn classify_options(cfg: &RunConfig) -> ClassifyOptions {
    ClassifyOptions { degree: cfg.degree, radius: cfg.radius, depth: cfg.depth }
}

pub fn dispatch(command: Command, cfg: &RunConfig, specs: &[SymbolSpec]) -> Result<Output> {
    let th = &cfg.thresholds;
    let grid = cfg.grid();
    let name = cfg.command;
    let symbol = |i: usize| realize(&specs[i], grid, th);
    let series = |i: usize| -> Result<FourierSeries> { coefficients(&symbol(i)?, cfg.degree) };
    let section_symbol = |i: usize| -> Result<FourierSeries> { Ok(trimmed(&series(i)?)) };

    let out = match command {
        Command::Coeffs => {
            need(specs, 1, name)?;
            let s = series(0)?;
            Output::new(
                json!({ "degree": s.degree(), "coefficients": coefficient_list(&s) }),
                Some(coefficient_csv(&s)),
            )
        }
        Command::Hilbert => {
            need(specs, 1, name)?;
            let s = series(0)?;
            let h = hilbert(&s);
            let report = double_hilbert_check(&s);
            let f = evaluate(&s, grid);
            let hf = evaluate(&h, grid);
            Output::new(
                json!({
                    "degree": s.degree(),
                    "hilbert": coefficient_list(&h),
                    "identity_residuals": report.identity_residuals,
                }),
                Some(samples_csv(&[("f", &f), ("hilbert", &hf)])),
            )
        }
        Command::Poisson => {
            need(specs, 1, name)?;
            let f = symbol(0)?;
            let r = cfg.radius.unwrap_or_else(|| default_radius(grid));
            let p = poisson_samples(&f, r)?;
            let smoothed = coefficients(&p, cfg.degree)?;
            Output::new(
                json!({
                    "radius": r,
                    "sup_smoothed": p.sup_norm(),
                    "sup_input": f.sup_norm(),
                    "sup_difference": p.max_abs_diff(&f),
                    "coefficients": coefficient_list(&smoothed),
                }),
                Some(samples_csv(&[("f", &f), ("smoothed", &p)])),
            )
        }
        Command::Oscillation => {
            need(specs, 1, name)?;
            let f = symbol(0)?;
            let profile = bmo_profile(&f, cfg.depth.unwrap_or_else(|| default_depth(grid.size())))?;
            Output::new(
                json!({
                    "levels": profile.levels,
                    "bmo_estimate": profile.bmo_estimate(),
                    "floor": profile.floor(),
                    "vmo": profile.vmo_verdict(),
                }),
                Some(profile.to_csv()),
            )
        }
        Command::Essrange => {
            need(specs, 1, name)?;
            let f = symbol(0)?;
            let est = essential_range(&f, cfg.bins)?;
            let verdict = integer_valued_vmo_check(&f)?;
            let mut csv = String::from("bin_center,measure\n");
            for (i, m) in est.occupancy.iter().enumerate() {
                let _ = writeln!(csv, "{},{m}", est.min + (i as f64 + 0.5) * est.bin_width);
            }
            Output::new(json!({ "range": est, "integer_check": verdict }), Some(csv))
        }
        Command::Factor => {
            need(specs, 1, name)?;
            let f = symbol(0)?;
            let opts = FactorOptions { degree: cfg.degree, radius: cfg.radius, base_index: 0 };
            let fac = factorize(&f, opts, th)?;
            let w = evaluate(&fac.log_modulus, grid);
            let g = evaluate(&fac.phase, grid);
            Output::new(
                json!({
                    "winding": fac.winding,
                    "residual": fac.residual,
                    "unimodularity_defect": fac.unimodularity_defect,
                    "log_modulus": coefficient_list(&fac.log_modulus),
                    "phase": coefficient_list(&fac.phase),
                    "component_phase": coefficient_list(&fac.component_phase()),
                }),
                Some(samples_csv(&[("log_modulus", &w), ("phase", &g)])),
            )
        }
        Command::Winding => {
            need(specs, 1, name)?;
            let w = winding_number(&symbol(0)?, cfg.radius, th)?;
            Output::new(to_value(&w), None)
        }
        Command::Index => {
            need(specs, 1, name)?;
            let w = winding_number(&symbol(0)?, cfg.radius, th)?;
            Output::new(
                json!({
                    "winding": w.winding,
                    "operator_index": -w.winding,
                    "radius_used": w.radius_used,
                    "stability": w.stability,
                }),
                None,
            )
        }
        Command::Classify => classify_command(cfg, specs, grid)?,
        Command::ExampleH => {
            let m = cfg.terms;
            match cfg.report {
                "decay" => {
                    let ladder = ladder_or(cfg, &[64, 128, 256, 512]);
                    let table = uniform_convergence_off_zero(&ladder, Region::interval(PI / 2.0, 1.5 * PI)?, grid)?;
                    let mut csv = String::from("terms,sup\n");
                    for row in &table.rows {
                        let _ = writeln!(csv, "{},{}", row.terms, row.sup);
                    }
                    Output::new(to_value(&table), Some(csv))
                }
                report => {
                    let e = example_h(m, grid)?;
                    let mut csv = String::from("theta,h,g\n");
                    for j in 0..grid.size() {
                        let _ = writeln!(csv, "{},{},{}", grid.point(j), e.h.values()[j].re, e.g.values()[j].re);
                    }
                    let value = if report == "sup" {
                        json!({ "terms": m, "sup_at_zero": e.sup_at_zero, "weight_sum": weight_sum(m) })
                    } else {
                        to_value(&e.summary())
                    };
                    Output::new(value, Some(csv))
                }
            }
        }
        Command::ToeplitzNorms => {
            need(specs, 1, name)?;
            let rep = section_norm_convergence(&section_symbol(0)?, &ladder_or(cfg, &[64, 128, 256, 512]), th.kernel_eps, &[])?;
            Output::new(to_value(&rep), Some(rep.to_csv()))
        }
        Command::ToeplitzIndex => {
            need(specs, 1, name)?;
            let s = section_symbol(0)?;
            let mut rows = Vec::new();
            let mut csv = String::from("N,count,predicted\n");
            for n in ladder_or(cfg, &[64, 128, 256]) {
                let e = kernel_count_index_estimate(&s, n, th.kernel_eps, th)?;
                let _ = writeln!(csv, "{},{},{}", e.n, e.count, e.predicted);
                rows.push(e);
            }
            Output::new(json!({ "estimates": rows }), Some(csv))
        }
        Command::Semicommutator => {
            need(specs, 2, name)?;
            let sc = semicommutator(&section_symbol(0)?, &section_symbol(1)?, cfg.size)?;
            let sv = singular_values(&sc.matrix);
            let rank = sv.iter().filter(|&&s| s > th.kernel_eps).count();
            let mut csv = String::from("M,tail_norm\n");
            for (m, v) in &sc.tail_norms {
                let _ = writeln!(csv, "{m},{v}");
            }
            Output::new(
                json!({
                    "size": cfg.size,
                    "max_abs": sc.max_abs(),
                    "numerical_rank": rank,
                    "tail_norms": sc.tail_norms,
                }),
                Some(csv),
            )
        }
        Command::OperatorClassify => {
            need(specs, 2, name)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut k = cfg.ranks.iter().map(|&r| {
                if r == 0 {
                    CompactPerturbation::zero()
                } else {
                    CompactPerturbation::random(r, r.max(16), 0.9, &mut rng)
                }
            });
            let (k1, k2) = (k.next().expect("two ranks"), k.next().expect("two ranks"));
            let v = operator_component_test(&symbol(0)?, &symbol(1)?, &k1, &k2, classify_options(cfg), th)?;
            Output::new(to_value(&v), None)
        }
        Command::VerifyAll => {
            let outcomes = run_all(cfg.seed);
            for o in &outcomes {
                eprintln!("{}", o.summary_line());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let mut csv = String::from("criterion,passed\n");
            for o in &outcomes {
                let _ = writeln!(csv, "{},{}", o.id, o.passed);
            }
            Output {
                result: json!({ "passed": passed, "criteria": outcomes }),
                csv: Some(csv),
                exit_code: if passed { 0 } else { 3 },
            }
        }
    };
    Ok(out)
}

fn classify_command(cfg: &RunConfig, specs: &[SymbolSpec], grid: qc_toeplitz::CircleGrid) -> Result<Output> {
    let th = &cfg.thresholds;
    let opts = classify_options(cfg);
    if !cfg.ladder.is_empty() {
        need(specs, 1, cfg.command)?;
        let rep = classify_ladder(&specs[0], cfg.reference.as_ref(), &cfg.ladder, grid, opts, th)?;
        let mut csv = String::from("terms,phase_sup\n");
        for r in &rep.rungs {
            let _ = writeln!(csv, "{},{}", r.terms, r.fingerprint.phase_sup);
        }
        return Ok(Output::new(to_value(&rep), Some(csv)));
    }
    match specs.len() {
        1 => {
            let f = realize(&specs[0], grid, th)?;
            let r = cfg.reference.as_ref().map(|r| realize(r, grid, th)).transpose()?;
            let fp = classify(&f, r.as_ref(), opts, th)?;
            let csv = fp.phase_osc_profile.to_csv();
            Ok(Output::new(to_value(&fp), Some(csv)))
        }
        2 => {
            let f1 = realize(&specs[0], grid, th)?;
            let f2 = realize(&specs[1], grid, th)?;
            Ok(Output::new(to_value(&compare_symbols(&f1, &f2, opts, th)?), None))
        }
        n => Err(Error::validation("cli", format!("`classify` takes one or two symbols, got {n}"))),
    }
}
