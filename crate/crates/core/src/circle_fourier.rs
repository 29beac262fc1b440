//! Uniform grids on the unit circle, Fourier coefficients and the classical
//! summation methods built on them.
//!
//! Coefficients carry the `1/(2π)` normalization, `a(n) = (1/2π) ∫ f(t) e^{-int} dt`,
//! and are computed with the rectangle rule on a power-of-two grid, which is
//! exact for trigonometric polynomials whose degree stays below the Nyquist
//! index.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MODULE: &str = "circle_fourier";

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward DFT: `X_k = Σ_j x_j e^{-2πi jk/n}`.
pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// Unnormalized inverse DFT: `x_j = Σ_k X_k e^{2πi jk/n}`.
pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
}

/// Uniform grid `θ_j = 2πj/size` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CircleGrid {
    size: usize,
}

impl TryFrom<usize> for CircleGrid {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        CircleGrid::new(size)
    }
}

impl From<CircleGrid> for usize {
    fn from(grid: CircleGrid) -> usize {
        grid.size
    }
}

impl CircleGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 8 || !size.is_power_of_two() {
            return Err(Error::validation(
                MODULE,
                format!("grid size must be a power of two >= 8, got {size}"),
            ));
        }
        Ok(CircleGrid { size })
    }

    /// Smallest admissible grid whose largest resolvable degree is at least
    /// `oversample * bandwidth`.
    pub fn for_bandwidth(bandwidth: usize, oversample: usize) -> Self {
        let need = 2 * (bandwidth.max(1) * oversample.max(1)) + 2;
        CircleGrid { size: need.next_power_of_two().max(8) }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Grid spacing `2π/size`, also the quadrature weight of each sample.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.size as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.size as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.size).map(|j| self.point(j)).collect()
    }

    /// Largest degree whose coefficients are recovered without aliasing.
    pub fn max_degree(&self) -> usize {
        self.size / 2 - 1
    }

    /// Signed frequency represented by DFT bin `k`, in `(-size/2, size/2]`.
    pub(crate) fn bin_frequency(&self, k: usize) -> i64 {
        if k <= self.size / 2 {
            k as i64
        } else {
            k as i64 - self.size as i64
        }
    }

    pub(crate) fn bin_of(&self, n: i64) -> usize {
        n.rem_euclid(self.size as i64) as usize
    }
}

/// Samples of a function on a [`CircleGrid`].
///
/// A function tagged real-valued keeps every imaginary part exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: CircleGrid,
    values: Vec<Complex64>,
    real: bool,
}

impl GridFunction {
    pub fn new(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::validation(
                MODULE,
                format!("expected {} samples, got {}", grid.size(), values.len()),
            ));
        }
        let real = values.iter().all(|v| v.im == 0.0);
        Ok(GridFunction { grid, values, real })
    }

    pub fn from_real(grid: CircleGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::validation(
                MODULE,
                format!("expected {} samples, got {}", grid.size(), values.len()),
            ));
        }
        Ok(GridFunction {
            grid,
            values: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            real: true,
        })
    }

    pub fn from_fn(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.size()).map(|j| f(grid.point(j))).collect();
        let mut out = GridFunction { grid, values, real: false };
        out.real = out.values.iter().all(|v| v.im == 0.0);
        out
    }

    pub fn from_real_fn(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.size()).map(|j| Complex64::new(f(grid.point(j)), 0.0)).collect();
        GridFunction { grid, values, real: true }
    }

    pub fn constant(grid: CircleGrid, c: Complex64) -> Self {
        GridFunction { grid, values: vec![c; grid.size()], real: c.im == 0.0 }
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Drops imaginary parts after checking they are below `tol` relative to
    /// the largest modulus.
    pub fn to_real(&self, tol: f64) -> Result<GridFunction> {
        let scale = 1.0 + self.sup_norm();
        let worst = self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        if worst > tol * scale {
            return Err(Error::validation(
                MODULE,
                format!("function is not real-valued (max |Im| = {worst:.3e})"),
            ));
        }
        GridFunction::from_real(self.grid, self.real_values())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction::from_fn_values(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    fn from_fn_values(grid: CircleGrid, values: Vec<Complex64>) -> GridFunction {
        let real = values.iter().all(|v| v.im == 0.0);
        GridFunction { grid, values, real }
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::validation(
                MODULE,
                format!("grid mismatch: {} vs {}", self.grid.size(), other.grid.size()),
            ));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(GridFunction::from_fn_values(self.grid, values))
    }

    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
            real: self.real,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Grid mean, i.e. the rectangle-rule value of `(1/2π) ∫ f`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Normalized DFT bins `b_k = (1/size) Σ_j f(θ_j) e^{-2πi jk/size}`.
    pub(crate) fn spectrum(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        fft_forward(&mut buf);
        let scale = 1.0 / self.grid.size() as f64;
        buf.iter_mut().for_each(|b| *b *= scale);
        buf
    }

    pub(crate) fn from_spectrum(grid: CircleGrid, mut bins: Vec<Complex64>, real: bool) -> GridFunction {
        fft_inverse(&mut bins);
        if real {
            bins.iter_mut().for_each(|v| v.im = 0.0);
        }
        GridFunction::from_fn_values(grid, bins)
    }
}

/// Two-sided coefficient table `a(n)`, `-N <= n <= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierSeries {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    pub fn zeros(degree: usize) -> Self {
        FourierSeries { degree, coeffs: vec![ZERO; 2 * degree + 1] }
    }

    /// Builds from the coefficient list ordered `a(-N), ..., a(N)`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::validation(
                MODULE,
                format!("coefficient table needs odd length 2N+1, got {}", coeffs.len()),
            ));
        }
        let degree = (coeffs.len() - 1) / 2;
        Ok(FourierSeries { degree, coeffs })
    }

    /// Builds from sparse `(n, a(n))` pairs; repeated indices accumulate.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        let degree = pairs.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut s = FourierSeries::zeros(degree);
        for &(n, a) in pairs {
            let slot = s.slot(n);
            s.coeffs[slot] += a;
        }
        s
    }

    /// The exponential `χ_n(t) = e^{int}`.
    pub fn character(n: i64) -> Self {
        FourierSeries::from_pairs(&[(n, Complex64::new(1.0, 0.0))])
    }

    pub fn constant(c: Complex64) -> Self {
        FourierSeries { degree: 0, coeffs: vec![c] }
    }

    /// Real series `c0 + Σ_{k>=1} (α_k cos kθ + β_k sin kθ)`.
    pub fn from_cos_sin(c0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let degree = cos.len().max(sin.len());
        let mut s = FourierSeries::zeros(degree);
        s.set(0, Complex64::new(c0, 0.0));
        for k in 1..=degree {
            let a = cos.get(k - 1).copied().unwrap_or(0.0);
            let b = sin.get(k - 1).copied().unwrap_or(0.0);
            // cos kθ = (χ_k + χ_{-k})/2, sin kθ = (χ_k - χ_{-k})/(2i)
            s.set(k as i64, Complex64::new(a / 2.0, -b / 2.0));
            s.set(-(k as i64), Complex64::new(a / 2.0, b / 2.0));
        }
        s
    }

    fn slot(&self, n: i64) -> usize {
        (n + self.degree as i64) as usize
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a(n)`, zero outside the stored band.
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.degree {
            ZERO
        } else {
            self.coeffs[self.slot(n)]
        }
    }

    /// Sets `a(n)`; panics when `|n|` exceeds the degree.
    pub fn set(&mut self, n: i64, value: Complex64) {
        assert!(n.unsigned_abs() as usize <= self.degree, "index {n} outside degree {}", self.degree);
        let slot = self.slot(n);
        self.coeffs[slot] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let d = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(i, &a)| (i as i64 - d, a))
    }

    /// Same coefficients on a different band, padding with zeros or truncating.
    pub fn with_degree(&self, degree: usize) -> FourierSeries {
        let mut out = FourierSeries::zeros(degree);
        let d = degree.min(self.degree) as i64;
        for n in -d..=d {
            out.set(n, self.get(n));
        }
        out
    }

    /// Coefficients multiplied by `weight(n)`.
    pub fn map_indexed(&self, weight: impl Fn(i64, Complex64) -> Complex64) -> FourierSeries {
        FourierSeries {
            degree: self.degree,
            coeffs: self.iter().map(|(n, a)| weight(n, a)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> FourierSeries {
        self.map_indexed(|_, a| a * c)
    }

    /// Largest `|a(-n) - conj(a(n))|`; zero for a real-valued function.
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.degree as i64)
            .map(|n| (self.get(-n) - self.get(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * (1.0 + self.max_abs())
    }

    /// Replaces each pair by its Hermitian average so the series is exactly
    /// real-valued.
    pub fn symmetrize_real(&self) -> FourierSeries {
        let mut out = self.clone();
        out.set(0, Complex64::new(self.get(0).re, 0.0));
        for n in 1..=self.degree as i64 {
            let avg = (self.get(n) + self.get(-n).conj()) * 0.5;
            out.set(n, avg);
            out.set(-n, avg.conj());
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `Σ |a(n)|²`, the squared L² norm by Parseval.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &FourierSeries) -> f64 {
        let d = self.degree.max(other.degree) as i64;
        (-d..=d).map(|n| (self.get(n) - other.get(n)).norm()).fold(0.0, f64::max)
    }

    /// Coefficients of the pointwise product (discrete convolution), summed in
    /// ascending order of the second factor's index.
    pub fn convolve(&self, other: &FourierSeries) -> FourierSeries {
        let degree = self.degree + other.degree;
        let mut out = FourierSeries::zeros(degree);
        let (dp, dq) = (self.degree as i64, other.degree as i64);
        for n in -(degree as i64)..=degree as i64 {
            let mut acc = ZERO;
            for m in -dq..=dq {
                let k = n - m;
                if k.abs() <= dp {
                    acc += self.get(k) * other.get(m);
                }
            }
            out.set(n, acc);
        }
        out
    }

    /// Largest index with nonzero coefficient, or `None` for the zero series.
    pub fn support_degree(&self) -> Option<usize> {
        self.iter().filter(|(_, a)| *a != ZERO).map(|(n, _)| n.unsigned_abs() as usize).max()
    }

    /// Only nonnegative frequencies carry mass.
    pub fn is_analytic(&self) -> bool {
        self.iter().all(|(n, a)| n >= 0 || a == ZERO)
    }

    pub fn is_coanalytic(&self) -> bool {
        self.iter().all(|(n, a)| n <= 0 || a == ZERO)
    }
}

impl Add for &FourierSeries {
    type Output = FourierSeries;

    fn add(self, rhs: &FourierSeries) -> FourierSeries {
        let d = self.degree.max(rhs.degree);
        let mut out = FourierSeries::zeros(d);
        for n in -(d as i64)..=d as i64 {
            out.set(n, self.get(n) + rhs.get(n));
        }
        out
    }
}

impl Sub for &FourierSeries {
    type Output = FourierSeries;

    fn sub(self, rhs: &FourierSeries) -> FourierSeries {
        let d = self.degree.max(rhs.degree);
        let mut out = FourierSeries::zeros(d);
        for n in -(d as i64)..=d as i64 {
            out.set(n, self.get(n) - rhs.get(n));
        }
        out
    }
}

impl Neg for &FourierSeries {
    type Output = FourierSeries;

    fn neg(self) -> FourierSeries {
        self.map_indexed(|_, a| -a)
    }
}

impl Mul for &FourierSeries {
    type Output = FourierSeries;

    fn mul(self, rhs: &FourierSeries) -> FourierSeries {
        self.convolve(rhs)
    }
}

/// Samples of `χ_n(θ) = e^{inθ}` with `n·j` reduced mod `size` first, so the
/// phases are exact multiples of `2π/size`.
pub fn character(grid: CircleGrid, n: i64) -> GridFunction {
    let size = grid.size() as i64;
    let values = (0..size)
        .map(|j| match (n * j).rem_euclid(size) {
            0 => Complex64::new(1.0, 0.0),
            m => Complex64::from_polar(1.0, 2.0 * PI * m as f64 / size as f64),
        })
        .collect();
    GridFunction::from_fn_values(grid, values)
}

/// Fourier coefficients of the samples up to `degree`.
pub fn coefficients(f: &GridFunction, degree: usize) -> Result<FourierSeries> {
    let grid = f.grid();
    if degree > grid.max_degree() {
        return Err(Error::resolution(
            MODULE,
            format!(
                "degree {degree} exceeds the {}-point grid limit {}",
                grid.size(),
                grid.max_degree()
            ),
        ));
    }
    let bins = f.spectrum();
    let mut out = FourierSeries::zeros(degree);
    for n in -(degree as i64)..=degree as i64 {
        out.set(n, bins[grid.bin_of(n)]);
    }
    if f.is_real() {
        out = out.symmetrize_real();
    }
    Ok(out)
}

/// Samples of `Σ a(n) e^{inθ}` on the grid. Exact at the grid points for
/// any degree: frequencies are folded onto their DFT bins.
pub fn evaluate(s: &FourierSeries, grid: CircleGrid) -> GridFunction {
    let mut bins = vec![ZERO; grid.size()];
    for (n, a) in s.iter() {
        bins[grid.bin_of(n)] += a;
    }
    GridFunction::from_spectrum(grid, bins, false)
}

/// Like [`evaluate`] for a real-valued series; the result is tagged real.
pub fn evaluate_real(s: &FourierSeries, grid: CircleGrid) -> Result<GridFunction> {
    if !s.is_real(1e-12) {
        return Err(Error::validation(
            MODULE,
            format!("series is not real-valued (hermitian defect {:.3e})", s.hermitian_defect()),
        ));
    }
    let mut bins = vec![ZERO; grid.size()];
    for (n, a) in s.iter() {
        bins[grid.bin_of(n)] += a;
    }
    Ok(GridFunction::from_spectrum(grid, bins, true))
}

fn fejer_weight(n: i64, order: usize) -> f64 {
    let m = n.unsigned_abs() as f64;
    let top = order as f64 + 1.0;
    if m >= top {
        0.0
    } else {
        1.0 - m / top
    }
}

/// N-th Fejér (Cesàro) mean `Σ_{|n|<=N} (1 - |n|/(N+1)) a(n) χ_n` of the
/// trigonometric interpolant of the samples.
///
/// For `N < size/2` this is convolution with the sampled Fejér kernel, which
/// is nonnegative with unit mean, so the output sup never exceeds the input
/// sup.
pub fn fejer_mean(f: &GridFunction, order: usize) -> Result<GridFunction> {
    if order < 1 {
        return Err(Error::validation(MODULE, "Fejér order must be >= 1"));
    }
    let grid = f.grid();
    let mut bins = f.spectrum();
    for (k, b) in bins.iter_mut().enumerate() {
        *b *= fejer_weight(grid.bin_frequency(k), order);
    }
    Ok(GridFunction::from_spectrum(grid, bins, f.is_real()))
}

/// Abel-summed Poisson transform `Σ a(n) r^{|n|} e^{inθ}` on the grid.
pub fn poisson(s: &FourierSeries, r: f64, grid: CircleGrid) -> Result<GridFunction> {
    check_radius(r)?;
    let smoothed = s.map_indexed(|n, a| a * r.powi(n.unsigned_abs() as i32));
    Ok(evaluate(&smoothed, grid))
}

/// Poisson smoothing of raw samples through their full DFT; the Nyquist bin
/// is damped as frequency `size/2`.
pub fn poisson_samples(f: &GridFunction, r: f64) -> Result<GridFunction> {
    check_radius(r)?;
    let grid = f.grid();
    let mut bins = f.spectrum();
    for (k, b) in bins.iter_mut().enumerate() {
        *b *= r.powi(grid.bin_frequency(k).unsigned_abs() as i32);
    }
    Ok(GridFunction::from_spectrum(grid, bins, f.is_real()))
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::validation(MODULE, format!("radius must lie in (0,1), got {r}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(CircleGrid::new(4).is_err());
        assert!(CircleGrid::new(12).is_err());
        let g = grid(8);
        let pts = g.points();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts[7] < 2.0 * PI);
    }

    #[test]
    fn coefficients_of_character() {
        let g = grid(64);
        let f = GridFunction::from_fn(g, |t| Complex64::from_polar(1.0, 2.0 * t));
        let s = coefficients(&f, 4).unwrap();
        for n in -4..=4 {
            let want = if n == 2 { c(1.0, 0.0) } else { c(0.0, 0.0) };
            assert!((s.get(n) - want).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn coefficients_of_constant_and_cosine() {
        let g = grid(32);
        let one = GridFunction::constant(g, c(1.0, 0.0));
        let s = coefficients(&one, 3).unwrap();
        assert_abs_diff_eq!(s.get(0).re, 1.0, epsilon = 1e-14);
        assert!(s.iter().filter(|(n, _)| *n != 0).all(|(_, a)| a.norm() < 1e-14));

        let f = GridFunction::from_real_fn(g, |t| 3.0 + t.cos());
        let s = coefficients(&f, 3).unwrap();
        // oracle: direct rectangle-rule sum of f(t) e^{-int}
        for n in -3i64..=3 {
            let direct: Complex64 = (0..32)
                .map(|j| {
                    let t = g.point(j);
                    Complex64::from_polar(3.0 + t.cos(), -(n as f64) * t)
                })
                .sum::<Complex64>()
                / 32.0;
            assert!((s.get(n) - direct).norm() < 1e-13);
        }
        assert_abs_diff_eq!(s.get(0).re, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(1).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(-1).re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn coefficients_reject_excess_degree() {
        let f = GridFunction::constant(grid(16), c(1.0, 0.0));
        assert!(matches!(coefficients(&f, 8), Err(Error::Resolution { .. })));
        assert!(coefficients(&f, 7).is_ok());
    }

    #[test]
    fn evaluate_delta_and_constant() {
        let g = grid(16);
        let f = evaluate(&FourierSeries::character(1), g);
        for (j, v) in f.values().iter().enumerate() {
            assert!((v - Complex64::from_polar(1.0, g.point(j))).norm() < 1e-14);
        }
        let f = evaluate(&FourierSeries::constant(c(2.0, -1.0)), g);
        assert!(f.values().iter().all(|v| (v - c(2.0, -1.0)).norm() < 1e-14));
    }

    #[test]
    fn evaluate_folds_high_frequencies_exactly() {
        let g = grid(8);
        let f = evaluate(&FourierSeries::character(11), g);
        for (j, v) in f.values().iter().enumerate() {
            assert!((v - Complex64::from_polar(1.0, 11.0 * g.point(j))).norm() < 1e-13);
        }
    }

    #[test]
    fn fejer_of_constant_and_cosine() {
        let g = grid(64);
        let k = GridFunction::constant(g, c(2.5, 0.0));
        let out = fejer_mean(&k, 5).unwrap();
        assert!(out.max_abs_diff(&k) < 1e-14);

        let f = GridFunction::from_real_fn(g, f64::cos);
        let out = fejer_mean(&f, 1).unwrap();
        // oracle: direct quadrature against the sampled Fejér kernel
        // K_1(t) = 1 + cos t
        for j in 0..64 {
            let x = g.point(j);
            let direct: f64 = (0..64)
                .map(|m| {
                    let t = g.point(m);
                    (x - t).cos() * (1.0 + t.cos())
                })
                .sum::<f64>()
                / 64.0;
            assert_abs_diff_eq!(out.values()[j].re, direct, epsilon = 1e-14);
            assert_abs_diff_eq!(out.values()[j].re, 0.5 * x.cos(), epsilon = 1e-14);
        }
        assert!(fejer_mean(&f, 0).is_err());
    }

    #[test]
    fn fejer_converges_for_band_limited_samples() {
        let g = grid(256);
        let s = FourierSeries::from_cos_sin(0.3, &[1.0, -0.5, 0.25], &[0.2, 0.0, 0.1]);
        let f = evaluate_real(&s, g).unwrap();
        // σ_N f - f = -Σ |n|/(N+1) a(n) χ_n, so the error decays like 1/N
        let errs: Vec<f64> = [8, 64, 1000]
            .iter()
            .map(|&n| fejer_mean(&f, n).unwrap().max_abs_diff(&f))
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
        assert!(errs[2] < 5e-3);
    }

    #[test]
    fn poisson_examples() {
        let g = grid(32);
        for n in [-3i64, 0, 2] {
            let out = poisson(&FourierSeries::character(n), 0.7, g).unwrap();
            for (j, v) in out.values().iter().enumerate() {
                let want = Complex64::from_polar(0.7f64.powi(n.unsigned_abs() as i32), n as f64 * g.point(j));
                assert!((v - want).norm() < 1e-14);
            }
        }
        // oracle: rectangle-rule quadrature of the Poisson kernel
        // Re[(e^{it}+z)/(e^{it}-z)] against cos t, r = 1/2
        let cos = FourierSeries::from_cos_sin(0.0, &[1.0], &[]);
        let out = poisson(&cos, 0.5, g).unwrap();
        let q = grid(1024);
        for j in 0..32 {
            let z = Complex64::from_polar(0.5, g.point(j));
            let direct: f64 = (0..1024)
                .map(|m| {
                    let e = Complex64::from_polar(1.0, q.point(m));
                    q.point(m).cos() * ((e + z) / (e - z)).re
                })
                .sum::<f64>()
                / 1024.0;
            assert_abs_diff_eq!(out.values()[j].re, direct, epsilon = 1e-12);
            assert_abs_diff_eq!(out.values()[j].re, 0.5 * g.point(j).cos(), epsilon = 1e-12);
        }
        assert!(poisson(&cos, 1.0, g).is_err());
        assert!(poisson(&cos, 0.0, g).is_err());
    }

    #[test]
    fn poisson_approaches_boundary_values() {
        let g = grid(128);
        let s = FourierSeries::from_cos_sin(1.0, &[0.5, 0.0, -0.3], &[0.0, 0.7]);
        let boundary = evaluate(&s, g);
        let errs: Vec<f64> = [4.0, 16.0, 64.0, 256.0]
            .iter()
            .map(|n| poisson(&s, 1.0 - 1.0 / n, g).unwrap().max_abs_diff(&boundary))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn convolution_matches_pointwise_product() {
        let g = grid(64);
        let p = FourierSeries::from_pairs(&[(-2, c(0.5, 0.1)), (1, c(1.0, -0.3)), (3, c(0.2, 0.0))]);
        let q = FourierSeries::from_pairs(&[(0, c(2.0, 0.0)), (-1, c(0.0, 0.4))]);
        let prod = evaluate(&(&p * &q), g);
        let direct = evaluate(&p, g).mul(&evaluate(&q, g)).unwrap();
        assert!(prod.max_abs_diff(&direct) < 1e-13);
    }

    fn arb_real_series(max_degree: usize) -> impl Strategy<Value = FourierSeries> {
        (1..=max_degree).prop_flat_map(|d| {
            (
                -1.0f64..1.0,
                prop::collection::vec(-1.0f64..1.0, d),
                prop::collection::vec(-1.0f64..1.0, d),
            )
                .prop_map(|(c0, a, b)| FourierSeries::from_cos_sin(c0, &a, &b))
        })
    }

    proptest! {
        #[test]
        fn coefficients_invert_evaluate(s in arb_real_series(32)) {
            let g = grid(128);
            let back = coefficients(&evaluate_real(&s, g).unwrap(), 32).unwrap();
            prop_assert!(back.max_abs_diff(&s) < 1e-12);
        }

        #[test]
        fn parseval(s in arb_real_series(20)) {
            let f = evaluate_real(&s, grid(64)).unwrap();
            let mean_sq: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / 64.0;
            prop_assert!((mean_sq - s.energy()).abs() < 1e-10);
        }

        #[test]
        fn fejer_does_not_increase_sup(s in arb_real_series(16), order in 1usize..60) {
            let f = evaluate_real(&s, grid(128)).unwrap();
            let out = fejer_mean(&f, order).unwrap();
            prop_assert!(out.sup_norm() <= f.sup_norm() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn round_trip_random_degree_ten() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pairs: Vec<(i64, Complex64)> = (-10..=10)
            .map(|n| (n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let s = FourierSeries::from_pairs(&pairs);
        let back = coefficients(&evaluate(&s, grid(128)), 10).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-12);
    }
}
