//! Hilbert transform, conjugation operator and the outer-type factor
//! `exp(w - i·w̃)`.
//!
//! The Hilbert transform is the coefficient multiplier `-i·sgn(n)`. With that
//! convention `w - i·w̃` has no positive frequencies, so `exp(w - i·w̃)` lives
//! on the nonpositive half-line of the spectrum; [`outer_function`] measures
//! and reports which side vanishes rather than assuming it.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{evaluate, evaluate_real, CircleGrid, FourierSeries, GridFunction};
use crate::error::{Error, Result};

const MODULE: &str = "transforms";

/// Relative size below which one side of a spectrum counts as vanishing.
pub const ONE_SIDED_TOLERANCE: f64 = 1e-9;

/// `w̃`: multiplies `a(n)` by `-i·sgn(n)`.
pub fn hilbert(s: &FourierSeries) -> FourierSeries {
    s.map_indexed(|n, a| match n.signum() {
        1 => Complex64::new(a.im, -a.re),
        -1 => Complex64::new(-a.im, a.re),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// `-i·sgn(n)` applied to the DFT bins of raw samples; the Nyquist bin has
/// no definite sign and is dropped.
pub fn hilbert_samples(f: &GridFunction) -> GridFunction {
    let grid = f.grid();
    let mut bins = f.spectrum();
    for (k, b) in bins.iter_mut().enumerate() {
        let n = grid.bin_frequency(k);
        *b = if n == 0 || n as usize == grid.size() / 2 {
            Complex64::new(0.0, 0.0)
        } else if n > 0 {
            Complex64::new(b.im, -b.re)
        } else {
            Complex64::new(-b.im, b.re)
        };
    }
    GridFunction::from_spectrum(grid, bins, f.is_real())
}

/// The conjugation operator, realized as `-hilbert(s)`.
pub fn conjugation(s: &FourierSeries) -> FourierSeries {
    -&hilbert(s)
}

/// Input, output and named residual norms of a transform identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformReport {
    pub input: FourierSeries,
    pub output: FourierSeries,
    pub identity_residuals: BTreeMap<String, f64>,
}

/// Checks `hilbert(hilbert(s)) = -s + a(0)`, the L² contraction and the
/// conjugation identity in coefficient arithmetic.
pub fn double_hilbert_check(s: &FourierSeries) -> TransformReport {
    let once = hilbert(s);
    let twice = hilbert(&once);
    let mut expected = -s;
    expected.set(0, expected.get(0) + s.get(0));

    let mut residuals = BTreeMap::new();
    residuals.insert("double_hilbert".to_string(), twice.max_abs_diff(&expected));
    residuals.insert(
        "l2_contraction_excess".to_string(),
        (once.energy() - s.energy()).max(0.0),
    );
    residuals.insert(
        "l2_mean_defect".to_string(),
        (s.energy() - s.get(0).norm_sqr() - once.energy()).abs(),
    );
    let sum = &conjugation(s) + &once;
    residuals.insert("conjugation_plus_hilbert".to_string(), sum.max_abs());
    TransformReport { input: s.clone(), output: twice, identity_residuals: residuals }
}

/// Literal quadrature of `(1/2π) ∫ w(t) Im[(e^{it}+z)/(e^{it}-z)] dt` at
/// `z = r e^{iθ_j}` with `quad_size` nodes; a cross-check for
/// coefficient-side conjugation at a fixed radius.
///
/// Note the kernel expands to `2 Σ_{n>=1} r^n sin n(θ - t)`, so as `r → 1`
/// this tends to `hilbert(s)`, that is to `-conjugation(s)`.
pub fn conjugate_poisson_quadrature(
    s: &FourierSeries,
    r: f64,
    grid: CircleGrid,
    quad_size: usize,
) -> Result<GridFunction> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::validation(MODULE, format!("radius must lie in (0,1), got {r}")));
    }
    let quad = CircleGrid::new(quad_size)?;
    let w = evaluate(s, quad);
    let nodes: Vec<Complex64> = (0..quad.size()).map(|m| Complex64::from_polar(1.0, quad.point(m))).collect();
    let out = (0..grid.size())
        .map(|j| {
            let z = Complex64::from_polar(r, grid.point(j));
            let acc: Complex64 = nodes
                .iter()
                .zip(w.values())
                .map(|(&e, &wt)| wt * ((e + z) / (e - z)).im)
                .sum();
            acc / quad.size() as f64
        })
        .collect();
    GridFunction::new(grid, out)
}

/// Which half-line of the spectrum carries the mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSide {
    /// `a(n) = 0` for `n > 0` within tolerance.
    Nonpositive,
    /// `a(n) = 0` for `n < 0` within tolerance.
    Nonnegative,
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterFunction {
    pub series: FourierSeries,
    /// Grid on which the exponential was sampled.
    pub sample_grid: usize,
    /// `Σ |a(n)|²` over the sampled band beyond the output degree.
    pub tail_energy: f64,
    pub side: SpectrumSide,
    /// Largest off-side coefficient over the largest coefficient.
    pub off_side_ratio: f64,
    /// `sup | |series| - exp(w) |` on the sampling grid.
    pub modulus_error: f64,
}

/// Options for [`outer_function`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterOptions {
    /// Output degree; defaults to a quarter of the converged sampling grid.
    pub degree: Option<usize>,
    /// Largest sampling grid tried before giving up.
    pub max_grid: usize,
}

impl Default for OuterOptions {
    fn default() -> Self {
        OuterOptions { degree: None, max_grid: 1 << 16 }
    }
}

/// Coefficients of the exponent `w - i·w̃`: `a(0)` at zero, `2a(n)` for
/// `n < 0`, nothing for `n > 0`.
pub fn outer_exponent(w: &FourierSeries) -> FourierSeries {
    w.map_indexed(|n, a| match n.signum() {
        1 => Complex64::new(0.0, 0.0),
        -1 => a * 2.0,
        _ => Complex64::new(a.re, 0.0),
    })
}

/// Pointwise samples of `exp(w - i·w̃)` on a grid.
pub fn outer_samples(w: &FourierSeries, grid: CircleGrid) -> GridFunction {
    evaluate(&outer_exponent(w), grid).map(|z| z.exp())
}

/// Series of `exp(w - i·w̃)` for real `w`, computed by sampling on a grid at
/// least eight times the bandwidth of `w` and re-expanding. The grid doubles
/// until the top quarter of the sampled band is below roundoff.
pub fn outer_function(w: &FourierSeries, opts: OuterOptions) -> Result<OuterFunction> {
    if !w.is_real(1e-12) {
        return Err(Error::validation(MODULE, "outer_function needs a real-valued w"));
    }
    let w = w.symmetrize_real();
    let bandwidth = w.support_degree().unwrap_or(0).max(1);
    let mut size = (8 * bandwidth).next_power_of_two().max(64);
    if let Some(d) = opts.degree {
        size = size.max((2 * d + 2).next_power_of_two());
    }
    loop {
        if size > opts.max_grid {
            return Err(Error::resolution(
                MODULE,
                format!(
                    "exp(w - i w~) not resolved on grids up to {}; raise the maximum grid size",
                    opts.max_grid
                ),
            ));
        }
        let grid = CircleGrid::new(size)?;
        let samples = outer_samples(&w, grid);
        let bins = samples.spectrum();
        let peak = bins.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let guard = (size / 4..=size / 2)
            .flat_map(|n| [n, size - n])
            .map(|k| bins[k % size].norm())
            .fold(0.0, f64::max);
        if guard > 1e-15 * peak {
            size *= 2;
            continue;
        }

        let degree = opts.degree.unwrap_or(size / 4);
        let mut series = FourierSeries::zeros(degree);
        let mut tail_energy = 0.0;
        for (k, b) in bins.iter().enumerate() {
            let n = grid.bin_frequency(k);
            if n.unsigned_abs() as usize <= degree {
                series.set(n, *b);
            } else {
                tail_energy += b.norm_sqr();
            }
        }

        let peak = series.max_abs();
        let pos = series.iter().filter(|(n, _)| *n > 0).map(|(_, a)| a.norm()).fold(0.0, f64::max);
        let neg = series.iter().filter(|(n, _)| *n < 0).map(|(_, a)| a.norm()).fold(0.0, f64::max);
        let (side, off) = if pos <= ONE_SIDED_TOLERANCE * peak {
            (SpectrumSide::Nonpositive, pos)
        } else if neg <= ONE_SIDED_TOLERANCE * peak {
            (SpectrumSide::Nonnegative, neg)
        } else {
            (SpectrumSide::TwoSided, pos.min(neg))
        };

        let modulus = evaluate(&series, grid);
        let exp_w = evaluate_real(&w, grid)?;
        let modulus_error = modulus
            .values()
            .iter()
            .zip(exp_w.values())
            .map(|(z, x)| (z.norm() - x.re.exp()).abs())
            .fold(0.0, f64::max);

        return Ok(OuterFunction {
            series,
            sample_grid: size,
            tail_energy,
            side,
            off_side_ratio: if peak > 0.0 { off / peak } else { 0.0 },
            modulus_error,
        });
    }
}

/// Angle helper shared by the phase-unwrapping code: principal argument of
/// `b / a`.
pub(crate) fn arg_increment(a: Complex64, b: Complex64) -> f64 {
    let d = (b * a.conj()).arg();
    if d <= -PI {
        d + 2.0 * PI
    } else {
        d
    }
}
