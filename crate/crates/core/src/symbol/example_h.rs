//! The conjugate pair `g_M = Σ_{k=2}^M sin(kx)/(k ln k)` and
//! `h_M = -Σ_{k=2}^M cos(kx)/(k ln k)`: the sine series converges
//! uniformly while the cosine series is unbounded at 0.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{fejer_mean, CircleGrid, FourierSeries, GridFunction};
use crate::error::{Error, Result};
use crate::transforms::hilbert;

const MODULE: &str = "symbol_algebra";

/// `1/(k ln k)`.
pub fn weight(k: usize) -> f64 {
    let k = k as f64;
    1.0 / (k * k.ln())
}

fn check_terms(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::validation(MODULE, format!("need at least 2 terms, got {m}")));
    }
    Ok(())
}

fn check_band(m: usize, grid: CircleGrid) -> Result<()> {
    if m > grid.max_degree() {
        return Err(Error::resolution(
            MODULE,
            format!(
                "{m} terms exceed the {}-point grid bandwidth {}; raise the grid size",
                grid.size(),
                grid.max_degree()
            ),
        ));
    }
    Ok(())
}

pub fn g_series(m: usize) -> Result<FourierSeries> {
    check_terms(m)?;
    let mut s = FourierSeries::zeros(m);
    for k in 2..=m {
        let c = weight(k) / 2.0;
        s.set(k as i64, Complex64::new(0.0, -c));
        s.set(-(k as i64), Complex64::new(0.0, c));
    }
    Ok(s)
}

pub fn h_series(m: usize) -> Result<FourierSeries> {
    check_terms(m)?;
    let mut s = FourierSeries::zeros(m);
    for k in 2..=m {
        let c = Complex64::new(-weight(k) / 2.0, 0.0);
        s.set(k as i64, c);
        s.set(-(k as i64), c);
    }
    Ok(s)
}

/// Samples of a real cosine series `Σ_{k=2}^M c(k) cos(kx)` by placing
/// coefficients straight into DFT bins.
fn cosine_samples(m: usize, grid: CircleGrid, c: impl Fn(usize) -> f64) -> GridFunction {
    let n = grid.size();
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    for k in 2..=m {
        let v = Complex64::new(c(k) / 2.0, 0.0);
        bins[k] = v;
        bins[n - k] = v;
    }
    GridFunction::from_spectrum(grid, bins, true)
}

/// `β·h_M` on the grid.
pub fn h_samples(m: usize, scale: f64, grid: CircleGrid) -> Result<GridFunction> {
    check_terms(m)?;
    check_band(m, grid)?;
    Ok(cosine_samples(m, grid, |k| -scale * weight(k)))
}

pub fn g_samples(m: usize, grid: CircleGrid) -> Result<GridFunction> {
    check_terms(m)?;
    check_band(m, grid)?;
    let n = grid.size();
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    for k in 2..=m {
        let c = weight(k) / 2.0;
        bins[k] = Complex64::new(0.0, -c);
        bins[n - k] = Complex64::new(0.0, c);
    }
    Ok(GridFunction::from_spectrum(grid, bins, true))
}

/// `h_M(x)` by direct summation in increasing `k`.
pub fn h_point(m: usize, x: f64) -> f64 {
    -(2..=m).map(|k| (k as f64 * x).cos() * weight(k)).sum::<f64>()
}

pub fn g_point(m: usize, x: f64) -> f64 {
    (2..=m).map(|k| (k as f64 * x).sin() * weight(k)).sum::<f64>()
}

/// `Σ_{k=2}^M 1/(k ln k)`, summed in increasing `k`.
pub fn weight_sum(m: usize) -> f64 {
    (2..=m).map(weight).sum()
}

pub struct ExampleH {
    pub terms: usize,
    pub g: GridFunction,
    pub h: GridFunction,
    /// `max_k |hilbert(g_M)(k) - (-1/(2k ln k))|` in coefficient arithmetic.
    pub coefficient_identity_error: f64,
    /// `sup |h_M - σ_M(h_M) - (1/(M+1)) Σ_{j=2}^M cos(jx)/ln j|`.
    pub fejer_residual: f64,
    /// Same with the tail added instead of subtracted:
    /// `sup |h_M - σ_M(h_M) + (1/(M+1)) Σ_{j=2}^M cos(jx)/ln j|`.
    pub fejer_residual_negated_tail: f64,
    /// `|h_M(0)|`, direct sum.
    pub sup_at_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleHSummary {
    pub terms: usize,
    pub grid_size: usize,
    pub coefficient_identity_error: f64,
    pub fejer_residual: f64,
    pub fejer_residual_negated_tail: f64,
    pub sup_at_zero: f64,
    pub g_sup: f64,
    pub h_sup: f64,
}

impl ExampleH {
    pub fn summary(&self) -> ExampleHSummary {
        ExampleHSummary {
            terms: self.terms,
            grid_size: self.g.len(),
            coefficient_identity_error: self.coefficient_identity_error,
            fejer_residual: self.fejer_residual,
            fejer_residual_negated_tail: self.fejer_residual_negated_tail,
            sup_at_zero: self.sup_at_zero,
            g_sup: self.g.sup_norm(),
            h_sup: self.h.sup_norm(),
        }
    }
}

pub fn example_h(m: usize, grid: CircleGrid) -> Result<ExampleH> {
    check_terms(m)?;
    check_band(m, grid)?;
    let g = g_samples(m, grid)?;
    let h = h_samples(m, 1.0, grid)?;

    let hg = hilbert(&g_series(m)?);
    let coefficient_identity_error = (2..=m as i64)
        .flat_map(|k| [k, -k])
        .map(|n| (hg.get(n) - Complex64::new(-weight(n.unsigned_abs() as usize) / 2.0, 0.0)).norm())
        .chain([hg.get(0).norm(), hg.get(1).norm(), hg.get(-1).norm()])
        .fold(0.0, f64::max);

    let sigma = fejer_mean(&h, m)?;
    let tail = cosine_samples(m, grid, |j| 1.0 / ((m as f64 + 1.0) * (j as f64).ln()));
    let diff = h.sub(&sigma)?;
    let fejer_residual = diff.sub(&tail)?.sup_norm();
    let fejer_residual_negated_tail = diff.zip_with(&tail, |d, t| d + t)?.sup_norm();

    Ok(ExampleH {
        terms: m,
        g,
        h,
        coefficient_identity_error,
        fejer_residual,
        fejer_residual_negated_tail,
        sup_at_zero: h_point(m, 0.0).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Closed interval `[a, b]` with `0 < a < b < 2π`.
    Interval { a: f64, b: f64 },
    FullCircle,
}

impl Region {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < b && b < 2.0 * std::f64::consts::PI) {
            return Err(Error::validation(MODULE, format!("need 0 < a < b < 2π, got [{a}, {b}]")));
        }
        Ok(Region::Interval { a, b })
    }

    fn contains(&self, x: f64) -> bool {
        match *self {
            Region::Interval { a, b } => a <= x && x <= b,
            Region::FullCircle => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub terms: usize,
    /// `sup_region |s_{2M} - s_M|`.
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub region: Region,
    pub rows: Vec<DecayRow>,
    pub strictly_decreasing: bool,
}

/// Doubling-ladder table of `sup |s_{2M} - s_M|` over a region, where
/// `s_M = partial(M)`.
pub fn decay_table(
    partial: impl Fn(usize) -> Result<FourierSeries> + Sync,
    ladder: &[usize],
    region: Region,
    grid: CircleGrid,
) -> Result<DecayTable> {
    if let Some(&m) = ladder.iter().find(|&&m| 2 * m > grid.max_degree()) {
        return Err(Error::resolution(
            MODULE,
            format!("ladder rung {m} needs bandwidth {} beyond grid limit {}", 2 * m, grid.max_degree()),
        ));
    }
    let inside: Vec<usize> = (0..grid.size()).filter(|&j| region.contains(grid.point(j))).collect();
    let rows = ladder
        .par_iter()
        .map(|&m| {
            let d = &partial(2 * m)? - &partial(m)?;
            let v = crate::circle_fourier::evaluate(&d, grid);
            let sup = inside.iter().map(|&j| v.values()[j].norm()).fold(0.0, f64::max);
            Ok(DecayRow { terms: m, sup })
        })
        .collect::<Result<Vec<_>>>()?;
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup < w[0].sup);
    Ok(DecayTable { region, rows, strictly_decreasing })
}

/// [`decay_table`] for the cosine series `h_M`.
pub fn uniform_convergence_off_zero(ladder: &[usize], region: Region, grid: CircleGrid) -> Result<DecayTable> {
    decay_table(h_series, ladder, region, grid)
}
