//! Arc means, mean oscillation over dyadic arc families, essential-range
//! histograms and the integer-valued constancy test.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::GridFunction;
use crate::error::{Error, Result};

const MODULE: &str = "oscillation";

/// Fewest grid points an arc may hold.
pub const MIN_ARC_POINTS: usize = 4;

/// A subarc of the circle, `[start, start + length)` taken mod 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: f64,
    length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 2.0 * PI) || !start.is_finite() {
            return Err(Error::validation(
                MODULE,
                format!("arc length must lie in (0, 2π], got {length}"),
            ));
        }
        Ok(Arc { start: start.rem_euclid(2.0 * PI), length })
    }

    pub fn full() -> Self {
        Arc { start: 0.0, length: 2.0 * PI }
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn contains(&self, theta: f64) -> bool {
        (theta - self.start).rem_euclid(2.0 * PI) < self.length
    }

    /// Grid indices inside the arc, in order along the arc.
    pub fn indices(&self, size: usize) -> Vec<usize> {
        let h = 2.0 * PI / size as f64;
        let eps = 1e-9;
        let first = (self.start / h - eps).ceil() as i64;
        let end = ((self.start + self.length) / h - eps).ceil() as i64;
        let count = ((end - first).max(0) as usize).min(size);
        (0..count).map(|i| (first + i as i64).rem_euclid(size as i64) as usize).collect()
    }
}

fn arc_samples(f: &GridFunction, arc: &Arc) -> Result<Vec<Complex64>> {
    let idx = arc.indices(f.len());
    if idx.len() < MIN_ARC_POINTS {
        return Err(Error::resolution(
            MODULE,
            format!(
                "arc of length {:.3e} holds {} grid points, need at least {MIN_ARC_POINTS}",
                arc.length,
                idx.len()
            ),
        ));
    }
    Ok(idx.into_iter().map(|j| f.values()[j]).collect())
}

fn mean_of(v: &[Complex64]) -> Complex64 {
    v.iter().sum::<Complex64>() / v.len() as f64
}

fn raw_of(v: &[Complex64]) -> f64 {
    let m = mean_of(v);
    v.iter().map(|z| (z - m).norm_sqr()).sum::<f64>() / v.len() as f64
}

/// `f_I`: rectangle-rule integral over the arc divided by its discrete
/// measure (point count times spacing).
pub fn arc_mean(f: &GridFunction, arc: &Arc) -> Result<Complex64> {
    Ok(mean_of(&arc_samples(f, arc)?))
}

/// `(1/|I|) ∫_I |f - f_I|²`, without the square root.
pub fn mean_square_oscillation(f: &GridFunction, arc: &Arc) -> Result<f64> {
    Ok(raw_of(&arc_samples(f, arc)?))
}

/// Square root of [`mean_square_oscillation`].
pub fn mean_oscillation(f: &GridFunction, arc: &Arc) -> Result<f64> {
    mean_square_oscillation(f, arc).map(f64::sqrt)
}

/// `(1/(2|I|²)) ∫_I ∫_I |f(t) - f(x)|² dx dt` by direct double summation.
pub fn pair_oscillation(f: &GridFunction, arc: &Arc) -> Result<f64> {
    let v = arc_samples(f, arc)?;
    let m = v.len() as f64;
    let total: f64 = v
        .par_iter()
        .map(|a| v.iter().map(|b| (a - b).norm_sqr()).sum::<f64>())
        .sum();
    Ok(total / (2.0 * m * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationLevel {
    pub arc_length: f64,
    pub worst_oscillation: f64,
    /// Start angle of an arc attaining the worst value.
    pub worst_arc_start: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    pub levels: Vec<OscillationLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VmoVerdict {
    pub consistent: bool,
    /// `o_K / max_k o_k`.
    pub decay_ratio: f64,
    pub tail_non_increasing: bool,
}

impl OscillationProfile {
    /// Largest oscillation over all levels; a lower estimate of the BMO norm.
    pub fn bmo_estimate(&self) -> f64 {
        self.levels.iter().map(|l| l.worst_oscillation).fold(0.0, f64::max)
    }

    pub fn finest(&self) -> f64 {
        self.levels.last().map(|l| l.worst_oscillation).unwrap_or(0.0)
    }

    /// Smallest oscillation over all levels.
    pub fn floor(&self) -> f64 {
        self.levels.iter().map(|l| l.worst_oscillation).fold(f64::INFINITY, f64::min)
    }

    /// Decay verdict at resolution: the finest level is below a quarter of
    /// the peak and the last three levels do not increase. Profiles that are
    /// identically negligible count as consistent.
    pub fn vmo_verdict(&self) -> VmoVerdict {
        let peak = self.bmo_estimate();
        let last = self.finest();
        let n = self.levels.len();
        let tail = &self.levels[n.saturating_sub(3)..];
        let tail_non_increasing = tail
            .windows(2)
            .all(|w| w[1].worst_oscillation <= w[0].worst_oscillation * (1.0 + 1e-12) + 1e-15);
        let decay_ratio = if peak > 0.0 { last / peak } else { 0.0 };
        let consistent = peak < 1e-9 || (decay_ratio < 0.25 && tail_non_increasing && n >= 3);
        VmoVerdict { consistent, decay_ratio, tail_non_increasing }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,worst_oscillation\n");
        for l in &self.levels {
            let _ = writeln!(out, "{},{}", l.arc_length, l.worst_oscillation);
        }
        out
    }
}

/// Default depth: the finest arcs hold 8 grid points.
pub fn default_depth(size: usize) -> usize {
    (size / 8).max(1).trailing_zeros() as usize
}

/// Worst mean oscillation at each scale `2π·2^{-k}`, `k = 0..=depth`, over
/// arcs of that length sliding by half their length.
pub fn bmo_profile(f: &GridFunction, depth: usize) -> Result<OscillationProfile> {
    let size = f.len();
    if depth >= usize::BITS as usize || (size >> depth) < MIN_ARC_POINTS {
        return Err(Error::resolution(
            MODULE,
            format!("depth {depth} leaves fewer than {MIN_ARC_POINTS} points per arc on a {size}-point grid"),
        ));
    }
    let h = 2.0 * PI / size as f64;
    let vals = f.values();
    let levels = (0..=depth)
        .map(|k| {
            let m = size >> k;
            let step = if k == 0 { size } else { m / 2 };
            let (worst, at) = (0..size / step)
                .into_par_iter()
                .map(|a| {
                    let start = a * step;
                    let v: Vec<Complex64> = (0..m).map(|i| vals[(start + i) % size]).collect();
                    (raw_of(&v), start)
                })
                .reduce(|| (0.0, 0), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
            OscillationLevel {
                arc_length: 2.0 * PI / (1u64 << k) as f64,
                worst_oscillation: worst.sqrt(),
                worst_arc_start: at as f64 * h,
            }
        })
        .collect();
    Ok(OscillationProfile { levels })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialRangeEstimate {
    pub min: f64,
    pub max: f64,
    pub bin_width: f64,
    /// Measure of `{θ : f(θ) ∈ bin}`; sums to 2π.
    pub occupancy: Vec<f64>,
    /// Maximal empty value intervals wider than two bin widths.
    pub gaps: Vec<(f64, f64)>,
}

impl EssentialRangeEstimate {
    pub fn occupied_bins(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o > 0.0).count()
    }

    pub fn total_measure(&self) -> f64 {
        self.occupancy.iter().sum()
    }
}

/// Histogram of the sampled values of a real function.
pub fn essential_range(f: &GridFunction, bins: usize) -> Result<EssentialRangeEstimate> {
    if bins < 8 {
        return Err(Error::validation(MODULE, format!("need at least 8 bins, got {bins}")));
    }
    if f.values().iter().any(|z| z.im != 0.0) {
        return Err(Error::validation(MODULE, "essential_range needs a real-valued function"));
    }
    let xs = f.real_values();
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let h = 2.0 * PI / xs.len() as f64;
    let spread = max - min;
    if spread <= 1e-14 * max.abs().max(1.0) {
        let mut occupancy = vec![0.0; bins];
        occupancy[0] = 2.0 * PI;
        return Ok(EssentialRangeEstimate { min, max, bin_width: 0.0, occupancy, gaps: vec![] });
    }
    let width = spread / bins as f64;
    let mut occupancy = vec![0.0; bins];
    for x in &xs {
        let b = (((x - min) / width) as usize).min(bins - 1);
        occupancy[b] += h;
    }
    let mut gaps = Vec::new();
    let mut b = 0;
    while b < bins {
        if occupancy[b] == 0.0 {
            let s = b;
            while b < bins && occupancy[b] == 0.0 {
                b += 1;
            }
            if b - s > 2 {
                gaps.push((min + s as f64 * width, min + b as f64 * width));
            }
        } else {
            b += 1;
        }
    }
    Ok(EssentialRangeEstimate { min, max, bin_width: width, occupancy, gaps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IntegerVerdict {
    Constant { value: i64 },
    NotIntegerValued,
    /// Near-integer values with at least two distinct integers; `bound` is
    /// the smallest worst oscillation over all scales of the rounded
    /// function, which stays positive as arcs shrink.
    OscillationLowerBound { bound: f64, values: Vec<i64> },
}

/// Samples within 0.25 of an integer count as integer-valued.
pub fn integer_valued_vmo_check(f: &GridFunction) -> Result<IntegerVerdict> {
    let mut seen = Vec::new();
    for z in f.values() {
        let k = z.re.round();
        if (z.re - k).abs() > 0.25 || z.im.abs() > 0.25 {
            return Ok(IntegerVerdict::NotIntegerValued);
        }
        let k = k as i64;
        if let Err(pos) = seen.binary_search(&k) {
            seen.insert(pos, k);
        }
    }
    if seen.len() == 1 {
        return Ok(IntegerVerdict::Constant { value: seen[0] });
    }
    let rounded = f.map(|z| Complex64::new(z.re.round(), 0.0));
    let profile = bmo_profile(&rounded, default_depth(f.len()))?;
    Ok(IntegerVerdict::OscillationLowerBound { bound: profile.floor(), values: seen })
}
