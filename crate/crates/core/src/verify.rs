//! End-to-end acceptance checks, shared by the `verify-all` command and the
//! acceptance test target. Every random draw comes from a seeded ChaCha
//! stream, so runs are reproducible.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{character, coefficients, evaluate, evaluate_real, CircleGrid, FourierSeries, GridFunction};
use crate::config::Thresholds;
use crate::error::Result;
use crate::fredholm::{index_additivity_check, winding_number};
use crate::oscillation::{
    bmo_profile, default_depth, mean_square_oscillation, pair_oscillation, Arc,
};
use crate::symbol::classify::{
    classify_ladder, compare_symbols, BoundednessVerdict, ClassifyOptions, ComponentRelation,
};
use crate::symbol::example_h::{example_h, uniform_convergence_off_zero, weight_sum, Region};
use crate::symbol::factor::{factorize, FactorOptions};
use crate::symbol::spec::SymbolSpec;
use crate::toeplitz::{
    compact_perturbation_norm_check, finite_section, kernel_count_index_estimate, semicommutator,
    CompactPerturbation,
};
use crate::transforms::{conjugation, double_hilbert_check, hilbert, outer_function, OuterOptions, SpectrumSide};

pub const DEFAULT_SEED: u64 = 0x5eed_7031;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Worst observed value (or mismatch count for exact checks).
    pub value: f64,
    pub bound: String,
    pub passed: bool,
    /// Informational checks are reported but do not decide the criterion.
    pub gating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl CriterionOutcome {
    fn new(id: u8, title: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().filter(|c| c.gating).all(|c| c.passed);
        CriterionOutcome { id, title: title.to_string(), passed, checks }
    }

    pub fn summary_line(&self) -> String {
        let failed: Vec<&str> =
            self.checks.iter().filter(|c| c.gating && !c.passed).map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            format!("criterion {}: PASS  {}", self.id, self.title)
        } else {
            format!("criterion {}: FAIL  {}  (failed: {})", self.id, self.title, failed.join(", "))
        }
    }
}

fn below(name: &str, value: f64, bound: f64) -> Check {
    Check { name: name.into(), value, bound: format!("< {bound:e}"), passed: value < bound, gating: true }
}

fn at_least(name: &str, value: f64, bound: f64) -> Check {
    Check { name: name.into(), value, bound: format!(">= {bound}"), passed: value >= bound, gating: true }
}

fn exact(name: &str, mismatches: usize) -> Check {
    Check { name: name.into(), value: mismatches as f64, bound: "0 mismatches".into(), passed: mismatches == 0, gating: true }
}

fn info(mut c: Check) -> Check {
    c.gating = false;
    c
}

fn grid(n: usize) -> CircleGrid {
    CircleGrid::new(n).expect("power of two")
}

/// Real trigonometric polynomial with coefficients `U(-amp, amp)/k^decay`.
fn random_real_trig(rng: &mut ChaCha8Rng, degree: usize, amp: f64, decay: f64, mean: bool) -> FourierSeries {
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (1..=degree).map(|k| rng.gen_range(-amp..amp) / (k as f64).powf(decay)).collect()
    };
    let a = draw(rng);
    let b = draw(rng);
    let c0 = if mean { rng.gen_range(-amp..amp) } else { 0.0 };
    FourierSeries::from_cos_sin(c0, &a, &b)
}

/// `χ_n · exp(w) · exp(i g)` sampled on the grid.
fn symbol_samples(g: CircleGrid, n: i64, w: &FourierSeries, p: &FourierSeries) -> GridFunction {
    let ew = evaluate(w, g);
    let ep = evaluate(p, g);
    character(g, n)
        .zip_with(&ew, |c, x| c * x.re.exp())
        .and_then(|f| f.zip_with(&ep, |c, x| c * Complex64::new(0.0, x.re).exp()))
        .expect("same grid")
}

fn random_symbol(rng: &mut ChaCha8Rng, g: CircleGrid) -> (i64, GridFunction) {
    let n = rng.gen_range(-4..=4);
    let dw = rng.gen_range(1..=8);
    let dg = rng.gen_range(1..=8);
    let w = random_real_trig(rng, dw, 0.3, 1.0, true);
    let p = random_real_trig(rng, dg, 0.6, 1.0, false);
    (n, symbol_samples(g, n, &w, &p))
}

pub fn criterion_1(seed: u64) -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
    let g = grid(512);
    let (mut dbl, mut sampled, mut conj, mut excess, mut mean_defect) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let deg = rng.gen_range(1..=32);
        let s = random_real_trig(&mut rng, deg, 1.0, 0.0, true);
        let f = evaluate_real(&s, g)?;
        let c = coefficients(&f, deg)?;
        let rep = double_hilbert_check(&c);
        dbl = dbl.max(rep.identity_residuals["double_hilbert"]);
        excess = excess.max(rep.identity_residuals["l2_contraction_excess"]);
        mean_defect = mean_defect.max(rep.identity_residuals["l2_mean_defect"]);
        conj = conj.max((&conjugation(&c) + &hilbert(&c)).max_abs());
        let twice = evaluate(&hilbert(&hilbert(&c)), g);
        let mean = f.mean();
        let want = f.map(|z| mean - z);
        sampled = sampled.max(twice.max_abs_diff(&want));
    }
    Ok(CriterionOutcome::new(
        1,
        "transform identities on 50 random real trig polynomials (degree <= 32, 512-grid)",
        vec![
            below("double_hilbert_coefficient_residual", dbl, 1e-12),
            below("double_hilbert_sample_residual", sampled, 1e-12),
            exact("conjugation_equals_minus_hilbert", usize::from(conj != 0.0)),
            exact("l2_contraction", usize::from(excess != 0.0)),
            below("l2_equality_after_removing_mean", mean_defect, 1e-12),
        ],
    ))
}

pub fn criterion_2(seed: u64) -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
    let (mut off, mut modulus, mut wrong_side) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..20 {
        let deg = rng.gen_range(1..=8);
        let w = random_real_trig(&mut rng, deg, 1.0, 0.0, true);
        let out = outer_function(&w, OuterOptions::default())?;
        off = off.max(out.off_side_ratio);
        modulus = modulus.max(out.modulus_error);
        if out.side != SpectrumSide::Nonpositive {
            wrong_side += 1;
        }
    }
    Ok(CriterionOutcome::new(
        2,
        "exp(w - i w~) is one-sided with modulus exp(w) for 20 random real w (degree <= 8)",
        vec![
            exact("vanishing_side_is_positive_frequencies", wrong_side),
            below("off_side_over_peak", off, 1e-9),
            below("modulus_identity", modulus, 1e-10),
        ],
    ))
}

pub fn criterion_3(seed: u64) -> Result<CriterionOutcome> {
    let cfg = Thresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
    let g = grid(256);
    let mut table = 0;
    for n in -8..=8i64 {
        let w = winding_number(&character(g, n), None, &cfg)?;
        if w.stability.len() != 3 || w.stability.iter().any(|&(_, k)| k != n) {
            table += 1;
        }
    }
    let mut exp_ig = 0;
    for _ in 0..20 {
        let deg = rng.gen_range(1..=8);
        let p = random_real_trig(&mut rng, deg, 1.0, 1.0, true);
        let f = symbol_samples(g, 0, &FourierSeries::zeros(0), &p);
        if winding_number(&f, None, &cfg)?.winding != 0 {
            exp_ig += 1;
        }
    }
    let mut additive = 0;
    for _ in 0..50 {
        let (n1, f1) = random_symbol(&mut rng, g);
        let (n2, f2) = random_symbol(&mut rng, g);
        let rep = index_additivity_check(&f1, &f2, None, &cfg)?;
        if !rep.additive || rep.ind_f != n1 || rep.ind_g != n2 {
            additive += 1;
        }
    }
    Ok(CriterionOutcome::new(
        3,
        "winding table for chi_n (|n| <= 8) at all stability radii, ind(exp(ig)) = 0, additivity on 50 pairs",
        vec![
            exact("winding_of_characters", table),
            exact("index_of_exp_ig", exp_ig),
            exact("index_additivity", additive),
        ],
    ))
}

pub fn criterion_4(seed: u64) -> Result<CriterionOutcome> {
    let cfg = Thresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
    let g = grid(256);
    let (mut wrong, mut residual) = (0usize, 0.0f64);
    for _ in 0..30 {
        let (n, f) = random_symbol(&mut rng, g);
        let fac = factorize(&f, FactorOptions::new(64), &cfg)?;
        if fac.winding != n {
            wrong += 1;
        }
        residual = residual.max(fac.residual);
    }
    Ok(CriterionOutcome::new(
        4,
        "factorization round trip on 30 symbols chi_n exp(w) exp(ig), n in [-4, 4], degrees <= 8",
        vec![exact("recovered_winding", wrong), below("reconstruction_residual", residual, 1e-8)],
    ))
}

pub fn criterion_5(seed: u64) -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
    let mut pair = 0.0f64;
    for _ in 0..20 {
        let size = 256;
        let values = (0..size)
            .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
            .collect();
        let f = GridFunction::new(grid(size), values)?;
        for _ in 0..5 {
            let arc = Arc::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.2..2.0 * PI))?;
            pair = pair.max((mean_square_oscillation(&f, &arc)? - pair_oscillation(&f, &arc)?).abs());
        }
    }
    let g = grid(1024);
    let indicator = GridFunction::from_real_fn(g, |t| if t < PI { 1.0 } else { 0.0 });
    let floor = bmo_profile(&indicator, default_depth(1024))?.floor();

    let g = grid(4096);
    let mut not_vmo = 0;
    for _ in 0..10 {
        let deg = rng.gen_range(2..=16);
        let v = random_real_trig(&mut rng, deg, 1.0, 1.0, true);
        let p = bmo_profile(&evaluate(&hilbert(&v), g), default_depth(4096))?;
        if !p.vmo_verdict().consistent {
            not_vmo += 1;
        }
    }
    Ok(CriterionOutcome::new(
        5,
        "double-integral identity, semicircle indicator is not VMO, conjugates of continuous functions are",
        vec![
            below("double_integral_identity", pair, 1e-10),
            at_least("indicator_profile_floor", floor, 0.4),
            exact("hilbert_of_continuous_vmo_consistent", not_vmo),
        ],
    ))
}

pub fn criterion_6() -> Result<CriterionOutcome> {
    let e = example_h(512, grid(4096))?;
    let e_big = example_h(1000, grid(4096))?;
    let grown = weight_sum(1_000_000) - weight_sum(1000);
    let integral = (1e6f64).ln().ln() - (1e3f64).ln().ln();
    let ladder = uniform_convergence_off_zero(&[64, 128, 256, 512], Region::interval(PI / 2.0, 1.5 * PI)?, grid(4096))?;
    let checks = vec![
        exact(
            "h_coefficient_identity",
            usize::from(e.coefficient_identity_error != 0.0 || e_big.coefficient_identity_error != 0.0),
        ),
        below("fejer_residual_M512", e.fejer_residual, 1e-8),
        info(below("fejer_residual_with_tail_added_M512", e.fejer_residual_negated_tail, 1e-8)),
        below("sup_at_zero_growth_vs_loglog_integral", ((grown - integral) / integral).abs(), 0.1),
        exact("off_zero_ladder_strictly_decreasing", usize::from(!ladder.strictly_decreasing)),
    ];
    Ok(CriterionOutcome::new(
        6,
        "example H: coefficient identity, Fejér residual, log-log growth at 0, off-zero convergence",
        checks,
    ))
}

pub fn criterion_7(seed: u64) -> Result<CriterionOutcome> {
    let cfg = Thresholds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
    let two_cos = FourierSeries::from_cos_sin(2.0, &[1.0], &[]);
    let norm = finite_section(&two_cos, 1024)?.norm();

    let mut counts = 0;
    for n in -8..=8i64 {
        for size in [64, 128, 256] {
            let e = kernel_count_index_estimate(&FourierSeries::character(n), size, 1e-6, &cfg)?;
            if e.count != e.predicted || e.count != n.unsigned_abs() as usize {
                counts += 1;
            }
        }
    }

    let mut analytic = 0.0f64;
    for _ in 0..10 {
        let phi = FourierSeries::from_coeffs(
            (0..7).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        )?;
        let pairs: Vec<(i64, Complex64)> =
            (0..4).map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
        let psi = FourierSeries::from_pairs(&pairs);
        analytic = analytic.max(semicommutator(&phi, &psi, 32)?.max_abs());
    }
    let sc = semicommutator(&FourierSeries::character(1), &FourierSeries::character(-1), 16)?;
    let rank_one = sc
        .matrix
        .iter()
        .enumerate()
        .filter(|&(idx, z)| *z != if idx == 0 { Complex64::new(-1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
        .count();

    let kill = CompactPerturbation::corner(1, 0, Complex64::new(-1.0, 0.0));
    let shift = compact_perturbation_norm_check(&FourierSeries::character(1), &kill, &[64, 128, 256, 512])?;
    let k2 = CompactPerturbation::random(2, 32, 0.8, &mut rng);
    let cosk = compact_perturbation_norm_check(&two_cos, &k2, &[64, 128, 256, 512])?;

    let in_range = (2.97..=3.0).contains(&norm);
    Ok(CriterionOutcome::new(
        7,
        "finite sections: norm of 2+cos at N=1024, kernel counts, semicommutators, compact perturbations",
        vec![
            Check {
                name: "section_norm_2_plus_cos_N1024".into(),
                value: norm,
                bound: "in [2.97, 3.0]".into(),
                passed: in_range,
                gating: true,
            },
            exact("kernel_count_equals_index", counts),
            exact("semicommutator_zero_for_analytic_psi", usize::from(analytic != 0.0)),
            exact("semicommutator_minus_p0_for_shift_pair", rank_one),
            at_least("shift_with_corner_kill_top_ratio", shift.top_rung_ratio, 0.98),
            at_least("two_plus_cos_rank2_top_ratio", cosk.top_rung_ratio, 0.98),
        ],
    ))
}

/// Scales used for the `β·H` ladder pairs.
pub const H_PAIRS: [(f64, f64); 4] = [(4.0, 0.0), (1.0, 0.0), (3.0, 1.5), (-2.0, 0.5)];
pub const H_LADDER: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];

pub fn criterion_8(seed: u64) -> Result<CriterionOutcome> {
    let cfg = Thresholds::default();
    let opts = ClassifyOptions::new(32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 8);
    let g = grid(512);

    let mut same_fail = 0;
    let mut invariance_fail = 0;
    for _ in 0..20 {
        let (n, f1) = random_symbol(&mut rng, g);
        let (dq, dp) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let q = random_real_trig(&mut rng, dq, 0.5, 1.0, true);
        let p = random_real_trig(&mut rng, dp, 0.5, 1.0, false);
        let f2 = f1.mul(&symbol_samples(g, 0, &q, &p))?;
        let cmp = compare_symbols(&f1, &f2, opts, &cfg)?;
        if cmp.decision.relation != ComponentRelation::Same || cmp.first.winding != n {
            same_fail += 1;
        }
        let plain = crate::toeplitz::operator_component_test(
            &f1,
            &f2,
            &CompactPerturbation::zero(),
            &CompactPerturbation::zero(),
            opts,
            &cfg,
        )?;
        let r1 = rng.gen_range(1..=4);
        let r2 = rng.gen_range(1..=4);
        let k1 = CompactPerturbation::random(r1, 16, 0.9, &mut rng);
        let k2 = CompactPerturbation::random(r2, 16, 0.9, &mut rng);
        let perturbed = crate::toeplitz::operator_component_test(&f1, &f2, &k1, &k2, opts, &cfg)?;
        if perturbed.relation != plain.relation || perturbed.predicted_indices != plain.predicted_indices {
            invariance_fail += 1;
        }
    }

    let mut winding_fail = 0;
    for _ in 0..10 {
        let (n, f) = random_symbol(&mut rng, g);
        let shift = if rng.gen_bool(0.5) { 1 } else { -2 };
        let other = f.mul(&character(g, shift))?;
        let cmp = compare_symbols(&f, &other, opts, &cfg)?;
        if cmp.decision.relation != ComponentRelation::Different || cmp.second.winding != n + shift {
            winding_fail += 1;
        }
        let k = CompactPerturbation::random(4, 16, 0.9, &mut rng);
        let op = crate::toeplitz::operator_component_test(&f, &other, &k, &k, opts, &cfg)?;
        if op.relation != ComponentRelation::Different {
            invariance_fail += 1;
        }
    }

    // β·H against γ·H along the truncation ladder; exp_i nodes are evaluated
    // pointwise from the exactly sampled phase
    let big = grid(1 << 21);
    let ladder_cfg = Thresholds { exp_bandwidth_factor: 1.0, ..cfg.clone() };
    let mut trend_fail = 0;
    let mut slowest = f64::INFINITY;
    for (i, &(beta, gamma)) in H_PAIRS.iter().enumerate() {
        let mut factors = vec![SymbolSpec::exp_i(SymbolSpec::builtin_h(2, beta))];
        if i == 0 {
            factors.insert(0, SymbolSpec::char(2));
        }
        let spec = SymbolSpec::product(factors);
        let reference = SymbolSpec::builtin_h(2, gamma);
        let rep = classify_ladder(&spec, Some(&reference), &H_LADDER, big, opts, &ladder_cfg)?;
        slowest = slowest.min(rep.growth_per_decade.iter().copied().fold(f64::INFINITY, f64::min));
        if rep.verdict != BoundednessVerdict::UnboundedTrend || rep.decision.relation != ComponentRelation::Different {
            trend_fail += 1;
        }
    }

    Ok(CriterionOutcome::new(
        8,
        "component classification: exp(QC) factors, winding mismatch, beta*H ladders, compact perturbations",
        vec![
            exact("same_component_pairs", same_fail),
            exact("winding_mismatch_is_different", winding_fail),
            exact("beta_h_vs_gamma_h_unbounded_trend", trend_fail),
            info(at_least("slowest_growth_per_decade", slowest, cfg.unbounded_growth_per_decade)),
            exact("operator_verdict_ignores_compact_part", invariance_fail),
        ],
    ))
}

/// Runs criteria 1–8, turning errors into failed outcomes.
pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    let runs: Vec<(u8, &str, Box<dyn Fn() -> Result<CriterionOutcome>>)> = vec![
        (1, "transform identities", Box::new(move || criterion_1(seed))),
        (2, "outer-function analyticity", Box::new(move || criterion_2(seed))),
        (3, "index table", Box::new(move || criterion_3(seed))),
        (4, "factorization round trip", Box::new(move || criterion_4(seed))),
        (5, "oscillation", Box::new(move || criterion_5(seed))),
        (6, "example H", Box::new(criterion_6)),
        (7, "finite sections", Box::new(move || criterion_7(seed))),
        (8, "classification", Box::new(move || criterion_8(seed))),
    ];
    runs.into_iter()
        .map(|(id, title, run)| {
            run().unwrap_or_else(|e| CriterionOutcome {
                id,
                title: title.to_string(),
                passed: false,
                checks: vec![Check {
                    name: "completed_without_error".into(),
                    value: f64::NAN,
                    bound: e.to_string(),
                    passed: false,
                    gating: true,
                }],
            })
        })
        .collect()
}
