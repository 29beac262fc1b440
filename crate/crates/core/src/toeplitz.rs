//! Finite sections `[a(j-k)]_{0<=j,k<N}` of Toeplitz operators: norms,
//! small-singular-value counts, semicommutators and compact perturbations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circle_fourier::{evaluate, CircleGrid, FourierSeries, GridFunction};
use crate::config::Thresholds;
use crate::error::{Error, Result};
use crate::fredholm::operator_index;
use crate::symbol::classify::{compare_symbols, ClassifyOptions, ComponentRelation, SymbolComparison};

const MODULE: &str = "toeplitz_numerics";
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteToeplitz {
    matrix: CMatrix,
    symbol: FourierSeries,
}

impl FiniteToeplitz {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn symbol(&self) -> &FourierSeries {
        &self.symbol
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, k)]
    }

    pub fn is_toeplitz(&self) -> bool {
        let n = self.size();
        (0..n).all(|j| (0..n).all(|k| self.matrix[(j, k)] == self.symbol.get(j as i64 - k as i64)))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }
}

/// `entry(j, k) = a(j - k)`, zero outside the series support.
pub fn finite_section(s: &FourierSeries, n: usize) -> Result<FiniteToeplitz> {
    if n == 0 {
        return Err(Error::validation(MODULE, "section size must be at least 1"));
    }
    let matrix = CMatrix::from_fn(n, n, |j, k| s.get(j as i64 - k as i64));
    Ok(FiniteToeplitz { matrix, symbol: s.clone() })
}

/// Singular values in ascending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(f64::total_cmp);
    sv
}

pub fn spectral_norm(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// `max |f|` over a grid fine enough to resolve the series well.
pub fn symbol_sup(s: &FourierSeries) -> f64 {
    let deg = s.support_degree().unwrap_or(0);
    let size = (64 * deg.max(1)).next_power_of_two().max(4096);
    evaluate(s, CircleGrid::new(size).expect("power of two")).sup_norm()
}

/// A finite-rank operator `Σ u_i v_iᴴ` on the first `len` basis vectors
/// of H².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactPerturbation {
    factors: Vec<(Vec<Complex64>, Vec<Complex64>)>,
}

impl CompactPerturbation {
    pub fn new(factors: Vec<(Vec<Complex64>, Vec<Complex64>)>) -> Result<Self> {
        if factors.iter().any(|(u, v)| u.len() != v.len() || u.is_empty()) {
            return Err(Error::validation(MODULE, "perturbation factors need equal, nonzero lengths"));
        }
        Ok(CompactPerturbation { factors })
    }

    pub fn zero() -> Self {
        CompactPerturbation { factors: vec![] }
    }

    /// `scale · e_row e_colᴴ`.
    pub fn corner(row: usize, col: usize, scale: Complex64) -> Self {
        let len = row.max(col) + 1;
        let mut u = vec![ZERO; len];
        let mut v = vec![ZERO; len];
        u[row] = scale;
        v[col] = Complex64::new(1.0, 0.0);
        CompactPerturbation { factors: vec![(u, v)] }
    }

    /// Rank-`rank` perturbation with entries `ρ^j · U(-1,1)` (complex) on
    /// `len` basis vectors.
    pub fn random(rank: usize, len: usize, decay: f64, rng: &mut impl Rng) -> Self {
        let vec = |rng: &mut dyn rand::RngCore| -> Vec<Complex64> {
            (0..len)
                .map(|j| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * decay.powi(j as i32))
                .collect()
        };
        let factors = (0..rank).map(|_| (vec(rng), vec(rng))).collect();
        CompactPerturbation { factors }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Length of the factor vectors.
    pub fn support(&self) -> usize {
        self.factors.first().map(|(u, _)| u.len()).unwrap_or(0)
    }

    /// Compression to the first `n` basis vectors.
    pub fn matrix(&self, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for (u, v) in &self.factors {
            for j in 0..n.min(u.len()) {
                for k in 0..n.min(v.len()) {
                    m[(j, k)] += u[j] * v[k].conj();
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallSingularCount {
    pub n: usize,
    pub eps: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub norms: BTreeMap<usize, f64>,
    pub small_singular_counts: Vec<SmallSingularCount>,
    pub tail_compression_norms: BTreeMap<usize, f64>,
    pub symbol_sup: f64,
    pub bounded_by_symbol_sup: bool,
    pub nondecreasing: bool,
}

impl SectionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,norm,count\n");
        for c in &self.small_singular_counts {
            let _ = writeln!(out, "{},{},{}", c.n, self.norms[&c.n], c.count);
        }
        out
    }
}

fn check_ladder(ladder: &[usize]) -> Result<()> {
    if ladder.is_empty() || ladder[0] == 0 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(MODULE, "ladder must be nonempty, positive and strictly increasing"));
    }
    Ok(())
}

/// Spectral norms of sections along a ladder, with small-singular-value
/// counts below `eps` and, for each `M` in `tail_offsets`, the norm of the
/// top section compressed to indices `>= M`.
pub fn section_norm_convergence(
    s: &FourierSeries,
    ladder: &[usize],
    eps: f64,
    tail_offsets: &[usize],
) -> Result<SectionReport> {
    check_ladder(ladder)?;
    let top = *ladder.last().expect("nonempty");
    let sv: Vec<(usize, Vec<f64>)> = ladder
        .par_iter()
        .map(|&n| Ok((n, finite_section(s, n)?.singular_values())))
        .collect::<Result<_>>()?;
    let mut norms = BTreeMap::new();
    let mut small_singular_counts = Vec::new();
    for (n, v) in &sv {
        norms.insert(*n, v.last().copied().unwrap_or(0.0));
        small_singular_counts.push(SmallSingularCount { n: *n, eps, count: v.iter().filter(|&&x| x < eps).count() });
    }
    // the compression of the top section to indices >= M is itself the
    // section of size top - M
    let tail_compression_norms = tail_offsets
        .iter()
        .filter(|&&m| m < top)
        .map(|&m| match norms.get(&(top - m)) {
            Some(&v) => Ok((m, v)),
            None => Ok((m, finite_section(s, top - m)?.norm())),
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let sup = symbol_sup(s);
    let values: Vec<f64> = norms.values().copied().collect();
    Ok(SectionReport {
        bounded_by_symbol_sup: values.iter().all(|&x| x <= sup * (1.0 + 1e-12) + 1e-12),
        nondecreasing: values.windows(2).all(|w| w[1] >= w[0] - 1e-12),
        norms,
        small_singular_counts,
        tail_compression_norms,
        symbol_sup: sup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub n: usize,
    pub eps: f64,
    pub count: usize,
    /// `|operator_index(symbol)|`.
    pub predicted: usize,
    pub operator_index: i64,
    /// Largest singular value below `eps`, if any.
    pub last_counted: Option<f64>,
    /// Smallest singular value at or above `eps`, if any.
    pub first_uncounted: Option<f64>,
}

/// Grid on which a trigonometric symbol is sampled for index predictions.
pub fn symbol_grid(s: &FourierSeries) -> CircleGrid {
    let deg = s.support_degree().unwrap_or(0);
    CircleGrid::new((16 * deg.max(1)).next_power_of_two().max(256)).expect("power of two")
}

/// Counts singular values of the `N`-section below `eps` and compares with
/// `|j(T_f)|`. Thresholds within a factor 10 of the spectrum on either side
/// are rejected as ambiguous.
pub fn kernel_count_index_estimate(s: &FourierSeries, n: usize, eps: f64, cfg: &Thresholds) -> Result<KernelEstimate> {
    if !(eps > 0.0) {
        return Err(Error::validation(MODULE, format!("eps must be positive, got {eps}")));
    }
    let f = evaluate(s, symbol_grid(s));
    let index = operator_index(&f, None, cfg)?;
    let sv = finite_section(s, n)?.singular_values();
    let count = sv.iter().filter(|&&x| x < eps).count();
    let last_counted = count.checked_sub(1).map(|i| sv[i]);
    let first_uncounted = sv.get(count).copied();
    if let Some(x) = first_uncounted.filter(|&x| x < 10.0 * eps) {
        return Err(Error::ill_conditioned(
            MODULE,
            format!("ambiguous threshold: singular value {x:.3e} lies within a factor 10 above eps = {eps:.1e}"),
        ));
    }
    if let Some(x) = last_counted.filter(|&x| x > eps / 10.0) {
        return Err(Error::ill_conditioned(
            MODULE,
            format!("ambiguous threshold: singular value {x:.3e} lies within a factor 10 below eps = {eps:.1e}"),
        ));
    }
    Ok(KernelEstimate {
        n,
        eps,
        count,
        predicted: index.unsigned_abs() as usize,
        operator_index: index,
        last_counted,
        first_uncounted,
    })
}

/// `A·B` with each entry summed in increasing inner index.
pub fn naive_matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows());
    CMatrix::from_fn(a.nrows(), b.ncols(), |j, k| {
        let mut acc = ZERO;
        for l in 0..a.ncols() {
            acc += a[(j, l)] * b[(l, k)];
        }
        acc
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Semicommutator {
    /// Leading `N - deg φ - deg ψ` block of `T_φ T_ψ - T_{φψ}`.
    pub matrix: CMatrix,
    /// Spectral norm of the block restricted to indices `>= M`.
    pub tail_norms: BTreeMap<usize, f64>,
}

impl Semicommutator {
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn semicommutator(phi: &FourierSeries, psi: &FourierSeries, n: usize) -> Result<Semicommutator> {
    let dp = phi.support_degree().unwrap_or(0);
    let dq = psi.support_degree().unwrap_or(0);
    let need = (2 * (dp + dq)).max(1);
    if n < need {
        return Err(Error::resolution(
            MODULE,
            format!("section size {n} below 2·(deg φ + deg ψ) = {need}"),
        ));
    }
    let tp = finite_section(phi, n)?;
    let tq = finite_section(psi, n)?;
    let prod = phi.convolve(psi);
    let tpq = finite_section(&prod, n)?;
    let full = naive_matmul(tp.matrix(), tq.matrix()) - tpq.matrix();
    let b = n - dp - dq;
    let matrix = full.view((0, 0), (b, b)).into_owned();
    let limit = (2 * (dp + dq) + 2).min(b - 1);
    let tail_norms = (0..=limit)
        .map(|m| (m, spectral_norm(&matrix.view((m, m), (b - m, b - m)).into_owned())))
        .collect();
    Ok(Semicommutator { matrix, tail_norms })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCheck {
    /// `‖section_N + K_N‖` per rung.
    pub lhs: BTreeMap<usize, f64>,
    /// `‖f‖_∞` on a fine grid.
    pub rhs: f64,
    pub top_rung_ratio: f64,
    /// `lhs(top) >= 0.98·rhs`.
    pub holds: bool,
}

pub fn compact_perturbation_norm_check(
    s: &FourierSeries,
    k: &CompactPerturbation,
    ladder: &[usize],
) -> Result<PerturbationCheck> {
    check_ladder(ladder)?;
    if k.rank() > ladder[0] {
        return Err(Error::validation(
            MODULE,
            format!("perturbation rank {} exceeds the smallest section {}", k.rank(), ladder[0]),
        ));
    }
    let lhs: BTreeMap<usize, f64> = ladder
        .par_iter()
        .map(|&n| Ok((n, spectral_norm(&(finite_section(s, n)?.matrix() + k.matrix(n))))))
        .collect::<Result<_>>()?;
    let rhs = symbol_sup(s);
    let top = lhs[ladder.last().expect("nonempty")];
    let top_rung_ratio = if rhs > 0.0 { top / rhs } else { 1.0 };
    Ok(PerturbationCheck { lhs, rhs, top_rung_ratio, holds: top >= 0.98 * rhs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorComponentVerdict {
    pub comparison: SymbolComparison,
    /// Predicted `j(T_f + K)` for each operator.
    pub predicted_indices: (i64, i64),
    pub perturbation_ranks: (usize, usize),
    pub relation: ComponentRelation,
}

/// Compares `T_{f1} + K1` and `T_{f2} + K2` through their symbols; the
/// compact parts never affect the verdict.
pub fn operator_component_test(
    f1: &GridFunction,
    f2: &GridFunction,
    k1: &CompactPerturbation,
    k2: &CompactPerturbation,
    opts: ClassifyOptions,
    cfg: &Thresholds,
) -> Result<OperatorComponentVerdict> {
    for k in [k1, k2] {
        if k.rank() > k.support() {
            return Err(Error::validation(MODULE, "perturbation rank exceeds its dimension"));
        }
    }
    let comparison = compare_symbols(f1, f2, opts, cfg)?;
    let relation = comparison.decision.relation;
    Ok(OperatorComponentVerdict {
        predicted_indices: (-comparison.first.winding, -comparison.second.winding),
        perturbation_ranks: (k1.rank(), k2.rank()),
        comparison,
        relation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_fourier::character;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn two_plus_cos() -> FourierSeries {
        FourierSeries::from_cos_sin(2.0, &[1.0], &[])
    }

    #[test]
    fn section_examples() {
        let t = finite_section(&FourierSeries::character(1), 4).unwrap();
        for j in 0..4 {
            for k in 0..4 {
                assert_eq!(t.entry(j, k), if j == k + 1 { c(1.0) } else { c(0.0) });
            }
        }
        let t = finite_section(&FourierSeries::constant(Complex64::new(2.0, -1.0)), 5).unwrap();
        assert_eq!(t.matrix(), &(CMatrix::identity(5, 5) * Complex64::new(2.0, -1.0)));
        let t = finite_section(&two_plus_cos(), 3).unwrap();
        let want = CMatrix::from_row_slice(3, 3, &[c(2.0), c(0.5), c(0.0), c(0.5), c(2.0), c(0.5), c(0.0), c(0.5), c(2.0)]);
        assert_eq!(t.matrix(), &want);
        assert!(finite_section(&two_plus_cos(), 0).is_err());
    }

    #[test]
    fn shift_norms() {
        let rep = section_norm_convergence(&FourierSeries::character(1), &[2, 8, 32], 1e-6, &[]).unwrap();
        for (&n, &v) in &rep.norms {
            assert!((v - 1.0).abs() < 1e-12, "N = {n}");
        }
        assert!(rep.small_singular_counts.iter().all(|c| c.count == 1));
        let rep = section_norm_convergence(&FourierSeries::constant(c(-3.5)), &[1, 4, 16], 1e-6, &[]).unwrap();
        assert!(rep.norms.values().all(|&v| (v - 3.5).abs() < 1e-13));
    }

    #[test]
    fn tridiagonal_norm_against_closed_form() {
        // 2 + cos θ sections are tridiagonal(1/2, 2, 1/2): eigenvalues
        // 2 + cos(kπ/(N+1))
        let rep = section_norm_convergence(&two_plus_cos(), &[16, 64, 256], 1e-6, &[0, 192, 240, 300]).unwrap();
        for (&n, &v) in &rep.norms {
            assert_abs_diff_eq!(v, 2.0 + (PI / (n as f64 + 1.0)).cos(), epsilon = 1e-12);
        }
        assert!(rep.nondecreasing && rep.bounded_by_symbol_sup);
        assert_abs_diff_eq!(rep.symbol_sup, 3.0, epsilon = 1e-15);
        assert!(rep.to_csv().starts_with("N,norm,count\n16,"));
        // compressions of the top section are smaller sections
        assert_eq!(rep.tail_compression_norms.len(), 3);
        assert_eq!(rep.tail_compression_norms[&0], rep.norms[&256]);
        assert_eq!(rep.tail_compression_norms[&192], rep.norms[&64]);
        assert_abs_diff_eq!(rep.tail_compression_norms[&240], 2.0 + (PI / 17.0).cos(), epsilon = 1e-12);
    }

    #[test]
    fn kernel_counts() {
        let cfg = Thresholds::default();
        let e = kernel_count_index_estimate(&FourierSeries::character(1), 64, 1e-6, &cfg).unwrap();
        assert_eq!((e.count, e.predicted, e.operator_index), (1, 1, -1));
        let e = kernel_count_index_estimate(&FourierSeries::character(-2), 64, 1e-6, &cfg).unwrap();
        assert_eq!((e.count, e.predicted, e.operator_index), (2, 2, 2));
        let e = kernel_count_index_estimate(&two_plus_cos(), 64, 1e-6, &cfg).unwrap();
        assert_eq!(e.count, 0);
        assert!(e.first_uncounted.unwrap() > 0.99);
        // eps near the bulk of the spectrum is ambiguous
        assert!(matches!(
            kernel_count_index_estimate(&two_plus_cos(), 64, 0.5, &cfg),
            Err(Error::IllConditioned { .. })
        ));
        let cos = FourierSeries::from_cos_sin(0.0, &[1.0], &[]);
        assert!(matches!(kernel_count_index_estimate(&cos, 64, 1e-6, &cfg), Err(Error::Precondition { .. })));
    }

    #[test]
    fn semicommutator_examples() {
        let s = semicommutator(&FourierSeries::character(1), &FourierSeries::character(1), 8).unwrap();
        assert_eq!(s.max_abs(), 0.0);
        let s = semicommutator(&FourierSeries::character(1), &FourierSeries::character(-1), 8).unwrap();
        let mut want = CMatrix::zeros(6, 6);
        want[(0, 0)] = c(-1.0);
        assert_eq!(s.matrix, want);
        assert_abs_diff_eq!(s.tail_norms[&0], 1.0, epsilon = 1e-14);
        assert!(s.tail_norms.iter().filter(|(m, _)| **m >= 1).all(|(_, v)| *v == 0.0));
        assert!(matches!(
            semicommutator(&FourierSeries::character(2), &FourierSeries::character(1), 5),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn semicommutator_against_dense_oracle() {
        // dense oracle through nalgebra's own product on a 4x4 hand case:
        // φ = χ_1 + χ_{-1}, ψ = χ_{-1}; T_φ T_ψ - T_{φψ} = -e_0 e_0ᴴ (from χ_1·χ_{-1})
        let phi = FourierSeries::from_pairs(&[(1, c(1.0)), (-1, c(1.0))]);
        let psi = FourierSeries::character(-1);
        let s = semicommutator(&phi, &psi, 8).unwrap();
        let tp = finite_section(&phi, 8).unwrap();
        let tq = finite_section(&psi, 8).unwrap();
        let tpq = finite_section(&phi.convolve(&psi), 8).unwrap();
        let oracle = tp.matrix() * tq.matrix() - tpq.matrix();
        assert!((s.matrix.clone() - oracle.view((0, 0), (6, 6))).iter().all(|z| z.norm() < 1e-15));
        assert_abs_diff_eq!(s.matrix[(0, 0)].re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn perturbation_examples() {
        let zero = compact_perturbation_norm_check(&two_plus_cos(), &CompactPerturbation::zero(), &[16, 64]).unwrap();
        let plain = section_norm_convergence(&two_plus_cos(), &[16, 64], 1e-6, &[]).unwrap();
        assert_eq!(zero.lhs, plain.norms);

        let kill = CompactPerturbation::corner(1, 0, c(-1.0));
        let r = compact_perturbation_norm_check(&FourierSeries::character(1), &kill, &[32, 128, 512]).unwrap();
        assert!(r.holds && r.top_rung_ratio >= 0.98);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let k = CompactPerturbation::random(2, 16, 0.7, &mut rng);
        let r = compact_perturbation_norm_check(&two_plus_cos(), &k, &[64, 256, 512]).unwrap();
        assert!(r.lhs[&512] >= 0.98 * 3.0);
        assert!(compact_perturbation_norm_check(&two_plus_cos(), &CompactPerturbation::random(5, 4, 1.0, &mut rng), &[4])
            .is_err());
    }

    #[test]
    fn operator_verdicts() {
        let g = CircleGrid::new(256).unwrap();
        let cfg = Thresholds::default();
        let opts = ClassifyOptions::new(32);
        let f1 = character(g, 1);
        let f2 = f1.zip_with(&GridFunction::from_real_fn(g, |t| 0.2 * t.cos()), |a, b| a * b.re.exp()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let k = CompactPerturbation::random(3, 10, 0.8, &mut rng);
        let v = operator_component_test(&f1, &f2, &k, &CompactPerturbation::zero(), opts, &cfg).unwrap();
        assert_eq!(v.relation, ComponentRelation::Same);
        assert_eq!(v.predicted_indices, (-1, -1));
        let v = operator_component_test(&f1, &character(g, 2), &k, &k, opts, &cfg).unwrap();
        assert_eq!(v.relation, ComponentRelation::Different);
    }

    fn arb_series(deg: usize) -> impl Strategy<Value = FourierSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * deg + 1)
            .prop_map(|v| FourierSeries::from_coeffs(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn structure_and_adjoint(s in arb_series(3), n in 1usize..20) {
            let t = finite_section(&s, n).unwrap();
            prop_assert!(t.is_toeplitz());
            let conj = s.map_indexed(|k, _| s.get(-k).conj());
            let tc = finite_section(&conj, n).unwrap();
            prop_assert_eq!(tc.matrix(), &t.matrix().adjoint());
        }

        #[test]
        fn norms_bounded_and_monotone(s in arb_series(3)) {
            let rep = section_norm_convergence(&s, &[4, 8, 16, 32], 1e-6, &[]).unwrap();
            prop_assert!(rep.bounded_by_symbol_sup);
            prop_assert!(rep.nondecreasing);
        }

        #[test]
        fn characters_count_exactly(n in -8i64..=8) {
            let e = kernel_count_index_estimate(&FourierSeries::character(n), 64, 1e-6, &Thresholds::default()).unwrap();
            prop_assert_eq!(e.count, n.unsigned_abs() as usize);
            prop_assert_eq!(e.count, e.predicted);
        }

        #[test]
        fn analytic_factor_gives_zero(phi in arb_series(3), psi in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)) {
            let psi = FourierSeries::from_pairs(&psi.iter().enumerate().map(|(k, &(a, b))| (k as i64, Complex64::new(a, b))).collect::<Vec<_>>());
            prop_assert_eq!(semicommutator(&phi, &psi, 16).unwrap().max_abs(), 0.0);
            let co = phi.map_indexed(|k, a| if k > 0 { c(0.0) } else { a });
            prop_assert_eq!(semicommutator(&co, &arb_fixed(), 16).unwrap().max_abs(), 0.0);
        }

        #[test]
        fn tail_vanishes_past_support(phi in arb_series(3), psi in arb_series(3)) {
            let s = semicommutator(&phi, &psi, 24).unwrap();
            for (&m, &v) in &s.tail_norms {
                if m >= 6 {
                    prop_assert!(v < 1e-12, "M = {} norm {}", m, v);
                }
            }
        }
    }

    fn arb_fixed() -> FourierSeries {
        FourierSeries::from_pairs(&[(-2, c(0.3)), (1, Complex64::new(0.1, -0.4)), (3, c(-1.0))])
    }
}
