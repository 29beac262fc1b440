//! Winding numbers of Poisson-smoothed symbol curves and the index bridge
//! `j(T_f) = -ind(f)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{check_radius, poisson_samples, CircleGrid, GridFunction};
use crate::config::Thresholds;
use crate::error::{Error, Result};

const MODULE: &str = "fredholm_index";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub min_curve_modulus: f64,
    pub radius_used: f64,
    /// Winding at each radius of the stability set, ascending in radius.
    pub stability: Vec<(f64, i64)>,
}

/// `1 - 2π/size`: smoothing tied to the grid resolution.
pub fn default_radius(grid: CircleGrid) -> f64 {
    1.0 - 2.0 * PI / grid.size() as f64
}

/// Signed turns of a sampled closed curve around 0, accumulating principal
/// argument increments between neighbours.
pub fn curve_winding(curve: &[num_complex::Complex64], max_increment: f64) -> Result<i64> {
    let n = curve.len();
    let mut total = 0.0;
    for j in 0..n {
        let d = crate::transforms::arg_increment(curve[j], curve[(j + 1) % n]);
        if d.abs() > max_increment {
            return Err(Error::resolution(
                MODULE,
                format!(
                    "argument jumps by {d:.3} rad between samples {j} and {}; refine the grid",
                    (j + 1) % n
                ),
            ));
        }
        total += d;
    }
    let turns = total / (2.0 * PI);
    let k = turns.round();
    if (turns - k).abs() > 1e-6 {
        return Err(Error::contract(MODULE, format!("argument sum {turns} turns is not an integer")));
    }
    Ok(k as i64)
}

fn ensure_invertible(f: &GridFunction, cfg: &Thresholds) -> Result<()> {
    let m = f.min_modulus();
    if m < cfg.delta {
        return Err(Error::precondition(
            MODULE,
            format!("symbol not invertible at resolution: min |f| = {m:.3e} < delta = {:.1e}", cfg.delta),
        ));
    }
    Ok(())
}

/// Winding of `f̂_r(e^{iθ})` about 0, confirmed at every radius of the
/// configured stability set.
pub fn winding_number(f: &GridFunction, radius: Option<f64>, cfg: &Thresholds) -> Result<WindingResult> {
    ensure_invertible(f, cfg)?;
    let r = radius.unwrap_or_else(|| default_radius(f.grid()));
    check_radius(r)?;
    let mut radii = cfg.stability_radii.clone();
    radii.push(r);
    for &q in &radii {
        check_radius(q)?;
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let runs: Vec<Result<(f64, i64, f64)>> = radii
        .par_iter()
        .map(|&q| {
            let curve = poisson_samples(f, q)?;
            let m = curve.min_modulus();
            if m < cfg.delta {
                return Err(Error::ill_conditioned(
                    MODULE,
                    format!("smoothed curve at r = {q} passes within {m:.3e} of 0"),
                ));
            }
            Ok((q, curve_winding(curve.values(), cfg.max_phase_increment)?, m))
        })
        .collect();
    let mut stability = Vec::with_capacity(runs.len());
    let mut winding = None;
    let mut min_curve_modulus = f64::INFINITY;
    for run in runs {
        let (q, w, m) = run?;
        stability.push((q, w));
        if q == r {
            winding = Some(w);
            min_curve_modulus = m;
        }
    }
    let winding = winding.expect("radius is in the stability set");
    if let Some((q, w)) = stability.iter().find(|(_, w)| *w != winding) {
        return Err(Error::contract(
            MODULE,
            format!("winding {w} at r = {q} disagrees with {winding} at r = {r}"),
        ));
    }
    Ok(WindingResult { winding, min_curve_modulus, radius_used: r, stability })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub ind_f: i64,
    pub ind_g: i64,
    pub ind_fg: i64,
    pub additive: bool,
}

pub fn index_additivity_check(
    f: &GridFunction,
    g: &GridFunction,
    radius: Option<f64>,
    cfg: &Thresholds,
) -> Result<AdditivityReport> {
    let ind_f = winding_number(f, radius, cfg)?.winding;
    let ind_g = winding_number(g, radius, cfg)?.winding;
    let ind_fg = winding_number(&f.mul(g)?, radius, cfg)?.winding;
    Ok(AdditivityReport { ind_f, ind_g, ind_fg, additive: ind_fg == ind_f + ind_g })
}

/// Predicted Fredholm index of `T_f` and of all its compact perturbations.
pub fn operator_index(f: &GridFunction, radius: Option<f64>, cfg: &Thresholds) -> Result<i64> {
    Ok(-winding_number(f, radius, cfg)?.winding)
}
