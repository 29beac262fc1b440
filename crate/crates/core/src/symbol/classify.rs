//! Path-component fingerprints: winding number plus a boundedness and
//! oscillation-decay verdict on the phase witness.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::factor::{factorize, unwrap_phase, FactorOptions};
use super::spec::{realize, SymbolSpec};
use crate::circle_fourier::{character, coefficients, CircleGrid, FourierSeries, GridFunction};
use crate::config::Thresholds;
use crate::error::{Error, Result};
use crate::oscillation::{bmo_profile, default_depth, OscillationProfile, VmoVerdict};

const MODULE: &str = "symbol_algebra";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundednessVerdict {
    Bounded,
    UnboundedTrend,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentRelation {
    Same,
    Different,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDecision {
    pub relation: ComponentRelation,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    /// Degree of the reported witness series and of the factorization.
    pub degree: usize,
    pub radius: Option<f64>,
    /// Oscillation profile depth; defaults to 8-point finest arcs.
    pub depth: Option<usize>,
}

impl ClassifyOptions {
    pub fn new(degree: usize) -> Self {
        ClassifyOptions { degree, radius: None, depth: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFingerprint {
    pub winding: i64,
    pub phase_bounded: BoundednessVerdict,
    /// `sup |d - mean d|` where `d` is the witness, or the witness minus the
    /// reference phase when one is given.
    pub phase_sup: f64,
    pub phase_osc_profile: OscillationProfile,
    pub vmo: VmoVerdict,
    /// Unwrapped argument of `χ_{-k} f`, truncated to the requested degree.
    pub witness: FourierSeries,
    pub relative_to_reference: bool,
    pub reference_relation: Option<ComponentDecision>,
}

struct Witness {
    winding: i64,
    samples: GridFunction,
}

fn witness(f: &GridFunction, opts: ClassifyOptions, cfg: &Thresholds) -> Result<Witness> {
    let fac = factorize(f, FactorOptions { degree: opts.degree, radius: opts.radius, base_index: 0 }, cfg)?;
    let v = f.mul(&character(f.grid(), -fac.winding))?;
    let phase = unwrap_phase(&v, 0, cfg.max_phase_increment)?;
    Ok(Witness { winding: fac.winding, samples: GridFunction::from_real(f.grid(), phase)? })
}

fn centered_sup(d: &GridFunction) -> f64 {
    let m = d.mean();
    d.values().iter().map(|z| (z - m).norm()).fold(0.0, f64::max)
}

fn fingerprint_from(
    w: &Witness,
    reference: Option<&GridFunction>,
    opts: ClassifyOptions,
    cfg: &Thresholds,
) -> Result<ComponentFingerprint> {
    let d = match reference {
        Some(r) => {
            if r.values().iter().any(|z| z.im.abs() > 1e-12 * (1.0 + z.re.abs())) {
                return Err(Error::validation(MODULE, "reference phase must be real-valued"));
            }
            w.samples.zip_with(r, |a, b| Complex64::new(a.re - b.re, 0.0))?
        }
        None => w.samples.clone(),
    };
    let phase_sup = centered_sup(&d);
    let profile = bmo_profile(&d, opts.depth.unwrap_or_else(|| default_depth(d.len())))?;
    let vmo = profile.vmo_verdict();
    let phase_bounded = if phase_sup < cfg.bounded_sup_limit {
        BoundednessVerdict::Bounded
    } else {
        BoundednessVerdict::Inconclusive
    };
    let reference_relation = reference.map(|_| single_decision(phase_bounded, &vmo));
    Ok(ComponentFingerprint {
        winding: w.winding,
        phase_bounded,
        phase_sup,
        phase_osc_profile: profile,
        vmo,
        witness: coefficients(&w.samples, opts.degree)?,
        relative_to_reference: reference.is_some(),
        reference_relation,
    })
}

fn single_decision(bounded: BoundednessVerdict, vmo: &VmoVerdict) -> ComponentDecision {
    match (bounded, vmo.consistent) {
        (BoundednessVerdict::UnboundedTrend, _) => ComponentDecision {
            relation: ComponentRelation::Different,
            reason: "phase difference grows without bound across truncation orders".into(),
        },
        (BoundednessVerdict::Bounded, true) => ComponentDecision {
            relation: ComponentRelation::Same,
            reason: "phase difference is bounded with decaying mean oscillation".into(),
        },
        (BoundednessVerdict::Bounded, false) => ComponentDecision {
            relation: ComponentRelation::Inconclusive,
            reason: format!(
                "phase difference is bounded but its oscillation does not decay at this resolution (ratio {:.3})",
                vmo.decay_ratio
            ),
        },
        (BoundednessVerdict::Inconclusive, _) => ComponentDecision {
            relation: ComponentRelation::Inconclusive,
            reason: "phase difference exceeds the bounded limit at a single resolution".into(),
        },
    }
}

/// Fingerprint of `f`; with `g_ref` the tests run on the witness minus
/// `g_ref`, deciding whether `f` and `χ_k·exp(i·g_ref)` share a component.
pub fn classify(
    f: &GridFunction,
    g_ref: Option<&GridFunction>,
    opts: ClassifyOptions,
    cfg: &Thresholds,
) -> Result<ComponentFingerprint> {
    let w = witness(f, opts, cfg)?;
    fingerprint_from(&w, g_ref, opts, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolComparison {
    pub first: ComponentFingerprint,
    pub second: ComponentFingerprint,
    pub decision: ComponentDecision,
}

/// Decides whether two invertible symbols share a path component at
/// resolution: equal windings and a bounded, VMO-consistent difference of
/// phase witnesses.
pub fn compare_symbols(
    f1: &GridFunction,
    f2: &GridFunction,
    opts: ClassifyOptions,
    cfg: &Thresholds,
) -> Result<SymbolComparison> {
    let w1 = witness(f1, opts, cfg)?;
    let w2 = witness(f2, opts, cfg)?;
    let second = fingerprint_from(&w2, None, opts, cfg)?;
    if w1.winding != w2.winding {
        let first = fingerprint_from(&w1, None, opts, cfg)?;
        let decision = ComponentDecision {
            relation: ComponentRelation::Different,
            reason: format!("winding numbers differ: {} vs {}", w1.winding, w2.winding),
        };
        return Ok(SymbolComparison { first, second, decision });
    }
    let first = fingerprint_from(&w1, Some(&w2.samples), opts, cfg)?;
    let decision = first.reference_relation.clone().expect("reference given");
    Ok(SymbolComparison { first, second, decision })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub terms: usize,
    pub fingerprint: ComponentFingerprint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub rungs: Vec<LadderRung>,
    /// Relative growth of `phase_sup` per decade of truncation order,
    /// between consecutive rungs.
    pub growth_per_decade: Vec<f64>,
    pub verdict: BoundednessVerdict,
    pub decision: ComponentDecision,
}

/// Classifies a symbol (and optional reference phase) across truncation
/// orders of its `builtin_h` nodes. Growth of at least
/// `cfg.unbounded_growth_per_decade` at every rung is reported as an
/// unbounded trend.
pub fn classify_ladder(
    spec: &SymbolSpec,
    reference: Option<&SymbolSpec>,
    ladder: &[usize],
    grid: CircleGrid,
    opts: ClassifyOptions,
    cfg: &Thresholds,
) -> Result<LadderReport> {
    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(MODULE, "ladder needs at least two increasing truncation orders"));
    }
    if let Some(r) = reference {
        if !r.is_real() {
            return Err(Error::validation(MODULE, "reference phase must be a real-valued symbol"));
        }
    }
    let mut rungs = Vec::with_capacity(ladder.len());
    for &m in ladder {
        let f = realize(&spec.with_truncation(m), grid, cfg)?;
        let r = reference.map(|r| realize(&r.with_truncation(m), grid, cfg)).transpose()?;
        let fingerprint = classify(&f, r.as_ref(), opts, cfg)?;
        rungs.push(LadderRung { terms: m, fingerprint });
    }
    let k0 = rungs[0].fingerprint.winding;
    if let Some(r) = rungs.iter().find(|r| r.fingerprint.winding != k0) {
        return Err(Error::contract(
            MODULE,
            format!("winding changes along the ladder: {k0} at M = {} vs {} at M = {}", ladder[0], r.fingerprint.winding, r.terms),
        ));
    }
    let growth_per_decade: Vec<f64> = rungs
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].fingerprint.phase_sup, w[1].fingerprint.phase_sup);
            let decades = (w[1].terms as f64 / w[0].terms as f64).log10();
            if a > 0.0 {
                (b / a - 1.0) / decades
            } else if b > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect();
    let verdict = if growth_per_decade.iter().all(|&g| g >= cfg.unbounded_growth_per_decade) {
        BoundednessVerdict::UnboundedTrend
    } else if rungs.iter().all(|r| r.fingerprint.phase_sup < cfg.bounded_sup_limit) {
        BoundednessVerdict::Bounded
    } else {
        BoundednessVerdict::Inconclusive
    };
    let last = &rungs.last().expect("nonempty ladder").fingerprint;
    let decision = single_decision(verdict, &last.vmo);
    Ok(LadderReport { rungs, growth_per_decade, verdict, decision })
}
