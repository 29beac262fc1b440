//! `f = χ_n · exp(w - i·w̃) · exp(i·g)` for invertible symbols.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{character, coefficients, evaluate, CircleGrid, FourierSeries, GridFunction};
use crate::config::Thresholds;
use crate::error::{Error, Result};
use crate::fredholm::winding_number;
use crate::transforms::{arg_increment, hilbert, outer_samples};

const MODULE: &str = "symbol_algebra";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorOptions {
    pub degree: usize,
    /// Radius for the winding number; defaults to `1 - 2π/size`.
    pub radius: Option<f64>,
    /// Grid index at which phase unwrapping starts.
    pub base_index: usize,
}

impl FactorOptions {
    pub fn new(degree: usize) -> Self {
        FactorOptions { degree, radius: None, base_index: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub winding: i64,
    /// `w`: coefficients of `ln|f|`.
    pub log_modulus: FourierSeries,
    /// `g`: unwrapped phase of `χ_{-n} f / exp(w - i·w̃)`.
    pub phase: FourierSeries,
    /// `sup |reconstruct - f|` on the input grid.
    pub residual: f64,
    /// `sup | |f / exp(w - i·w̃)| - 1 |`; nonzero when `ln|f|` is not
    /// resolved at the requested degree.
    pub unimodularity_defect: f64,
    pub grid_size: usize,
}

impl Factorization {
    pub fn reconstruct(&self, grid: CircleGrid) -> GridFunction {
        let outer = outer_samples(&self.log_modulus, grid);
        let g = evaluate(&self.phase, grid);
        character(grid, self.winding)
            .mul(&outer)
            .and_then(|x| x.zip_with(&g, |a, p| a * Complex64::new(0.0, p.re).exp()))
            .expect("same grid")
    }

    /// `g - w̃`, the unwrapped argument of `χ_{-n} f` itself.
    pub fn component_phase(&self) -> FourierSeries {
        &self.phase - &hilbert(&self.log_modulus)
    }
}

/// Continuous argument of a closed curve of winding zero, started at
/// `base` with the principal value there.
pub fn unwrap_phase(v: &GridFunction, base: usize, max_increment: f64) -> Result<Vec<f64>> {
    let n = v.len();
    if base >= n {
        return Err(Error::validation(MODULE, format!("base index {base} outside a {n}-point grid")));
    }
    let vals = v.values();
    let mut phase = vec![0.0; n];
    phase[base] = vals[base].arg();
    for step in 0..n {
        let j = (base + step) % n;
        let next = (j + 1) % n;
        let d = arg_increment(vals[j], vals[next]);
        if d.abs() > max_increment {
            return Err(Error::resolution(
                MODULE,
                format!("phase jumps by {d:.3} rad between samples {j} and {next}; refine the grid"),
            ));
        }
        if next == base {
            let closing = phase[j] + d - phase[base];
            if closing.abs() > 1e-6 {
                return Err(Error::contract(
                    MODULE,
                    format!(
                        "phase does not close: residual winding {:.3} turns after removing the character",
                        closing / (2.0 * std::f64::consts::PI)
                    ),
                ));
            }
        } else {
            phase[next] = phase[j] + d;
        }
    }
    Ok(phase)
}

pub fn factorize(f: &GridFunction, opts: FactorOptions, cfg: &Thresholds) -> Result<Factorization> {
    let grid = f.grid();
    let m = f.min_modulus();
    if m < cfg.delta {
        return Err(Error::precondition(
            MODULE,
            format!("factorize needs an invertible symbol: min |f| = {m:.3e} < delta = {:.1e}", cfg.delta),
        ));
    }
    let log_abs = GridFunction::from_real(grid, f.values().iter().map(|z| z.norm().ln()).collect())?;
    let w = coefficients(&log_abs, opts.degree)?;
    let outer = outer_samples(&w, grid);
    let u = f.zip_with(&outer, |a, b| a / b)?;
    let unimodularity_defect = u.values().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);

    let winding = winding_number(&u, opts.radius, cfg)?.winding;
    let v = u.mul(&character(grid, -winding))?;
    let phi = unwrap_phase(&v, opts.base_index, cfg.max_phase_increment)?;
    let g = coefficients(&GridFunction::from_real(grid, phi)?, opts.degree)?;

    let mut out = Factorization {
        winding,
        log_modulus: w,
        phase: g,
        residual: 0.0,
        unimodularity_defect,
        grid_size: grid.size(),
    };
    out.residual = out.reconstruct(grid).max_abs_diff(f);
    Ok(out)
}
