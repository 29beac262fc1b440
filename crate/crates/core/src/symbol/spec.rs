//! Declarative symbol descriptions and their evaluation on a grid.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::example_h::h_samples;
use crate::circle_fourier::{character, evaluate, CircleGrid, FourierSeries, GridFunction};
use crate::config::Thresholds;
use crate::error::{Error, Result};
use crate::oscillation::Arc;
use crate::transforms::hilbert_samples;

const MODULE: &str = "symbol_algebra";

/// A float that serializes as its shortest round-trip decimal string and
/// deserializes from either a string or a JSON number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decimal(pub f64);

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Decimal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal string or number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Decimal, E> {
                v.trim().parse::<f64>().map(Decimal).map_err(|_| E::custom(format!("bad decimal {v:?}")))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Decimal, E> {
                Ok(Decimal(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Decimal, E> {
                Ok(Decimal(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Decimal, E> {
                Ok(Decimal(v as f64))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    /// `e^{inθ}`.
    Char { n: i64 },
    /// `Σ a(n) e^{inθ}` from `[n, re, im]` triples; repeated indices add.
    Trig { coeffs: Vec<(i64, Decimal, Decimal)> },
    Exp { of: Box<SymbolSpec> },
    /// `exp(i·of)`.
    ExpI { of: Box<SymbolSpec> },
    Product { factors: Vec<SymbolSpec> },
    Conjugate { of: Box<SymbolSpec> },
    Hilbert { of: Box<SymbolSpec> },
    /// `scale · h_M` with `h_M = -Σ_{k=2}^M cos(kθ)/(k ln k)`.
    BuiltinH { terms: usize, scale: Decimal },
    /// Indicator of a union of arcs `[start, start + length)`.
    Indicator { arcs: Vec<(Decimal, Decimal)> },
}

impl SymbolSpec {
    pub fn char(n: i64) -> Self {
        SymbolSpec::Char { n }
    }

    pub fn trig(coeffs: &[(i64, Complex64)]) -> Self {
        SymbolSpec::Trig { coeffs: coeffs.iter().map(|&(n, c)| (n, Decimal(c.re), Decimal(c.im))).collect() }
    }

    /// Real trigonometric polynomial `c0 + Σ a_k cos kθ + b_k sin kθ`.
    pub fn real_trig(c0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let s = FourierSeries::from_cos_sin(c0, cos, sin);
        let pairs: Vec<(i64, Complex64)> = s.iter().filter(|(_, a)| *a != Complex64::new(0.0, 0.0)).collect();
        SymbolSpec::trig(&pairs)
    }

    pub fn exp(of: SymbolSpec) -> Self {
        SymbolSpec::Exp { of: Box::new(of) }
    }

    pub fn exp_i(of: SymbolSpec) -> Self {
        SymbolSpec::ExpI { of: Box::new(of) }
    }

    pub fn product(factors: Vec<SymbolSpec>) -> Self {
        SymbolSpec::Product { factors }
    }

    pub fn conjugate(of: SymbolSpec) -> Self {
        SymbolSpec::Conjugate { of: Box::new(of) }
    }

    pub fn hilbert(of: SymbolSpec) -> Self {
        SymbolSpec::Hilbert { of: Box::new(of) }
    }

    pub fn builtin_h(terms: usize, scale: f64) -> Self {
        SymbolSpec::BuiltinH { terms, scale: Decimal(scale) }
    }

    pub fn indicator(arcs: &[(f64, f64)]) -> Self {
        SymbolSpec::Indicator { arcs: arcs.iter().map(|&(s, l)| (Decimal(s), Decimal(l))).collect() }
    }

    /// Parses the inline forms `char:n`, `trig:[n,re,im;...]`, `h:M` and
    /// `h:M:β`, or a JSON tree.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        let bad = |why: &str| Error::validation(MODULE, format!("cannot parse symbol {t:?}: {why}"));
        let (head, rest) = t.split_once(':').ok_or_else(|| bad("expected kind:args or a JSON tree"))?;
        match head {
            "char" => rest.trim().parse().map(SymbolSpec::char).map_err(|_| bad("char index is not an integer")),
            "trig" => {
                let body = rest
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| bad("trig coefficients go in [...]"))?;
                let mut coeffs = Vec::new();
                for item in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let parts: Vec<&str> = item.split(',').map(str::trim).collect();
                    if parts.len() != 3 {
                        return Err(bad("each trig entry is n,re,im"));
                    }
                    let n = parts[0].parse().map_err(|_| bad("trig index is not an integer"))?;
                    let re = parts[1].parse().map_err(|_| bad("bad real part"))?;
                    let im = parts[2].parse().map_err(|_| bad("bad imaginary part"))?;
                    coeffs.push((n, Decimal(re), Decimal(im)));
                }
                Ok(SymbolSpec::Trig { coeffs })
            }
            "h" => {
                let mut parts = rest.split(':');
                let m = parts
                    .next()
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| bad("h needs a term count"))?;
                let beta = match parts.next() {
                    Some(b) => b.trim().parse().map_err(|_| bad("bad scale"))?,
                    None => 1.0,
                };
                if parts.next().is_some() {
                    return Err(bad("h takes h:M or h:M:scale"));
                }
                let s = SymbolSpec::builtin_h(m, beta);
                s.validate()?;
                Ok(s)
            }
            _ => Err(bad("unknown kind")),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: SymbolSpec = serde_json::from_str(text)
            .map_err(|e| Error::validation(MODULE, format!("bad symbol tree: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("symbol specs always serialize")
    }

    /// Whether the node evaluates real-valued by construction.
    pub fn is_real(&self) -> bool {
        match self {
            SymbolSpec::Char { n } => *n == 0,
            SymbolSpec::Trig { .. } => self.trig_series().is_some_and(|s| s.hermitian_defect() == 0.0),
            SymbolSpec::Exp { of } | SymbolSpec::Conjugate { of } => of.is_real(),
            SymbolSpec::ExpI { .. } => false,
            SymbolSpec::Product { factors } => factors.iter().all(SymbolSpec::is_real),
            SymbolSpec::Hilbert { .. } | SymbolSpec::BuiltinH { .. } | SymbolSpec::Indicator { .. } => true,
        }
    }

    fn trig_series(&self) -> Option<FourierSeries> {
        match self {
            SymbolSpec::Trig { coeffs } => {
                let pairs: Vec<(i64, Complex64)> =
                    coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re.0, im.0))).collect();
                Some(FourierSeries::from_pairs(&pairs))
            }
            _ => None,
        }
    }

    /// Checks structural invariants: real children under `exp`, `exp_i`
    /// and `hilbert`, at least two terms in `builtin_h`, valid arcs.
    pub fn validate(&self) -> Result<()> {
        match self {
            SymbolSpec::Char { .. } => Ok(()),
            SymbolSpec::Trig { coeffs } => {
                if coeffs.iter().any(|(_, a, b)| !a.0.is_finite() || !b.0.is_finite()) {
                    return Err(Error::validation(MODULE, "trig coefficients must be finite"));
                }
                Ok(())
            }
            SymbolSpec::Exp { of } | SymbolSpec::ExpI { of } | SymbolSpec::Hilbert { of } => {
                of.validate()?;
                if !of.is_real() {
                    return Err(Error::validation(
                        MODULE,
                        format!("the argument of {} must be real-valued", self.kind()),
                    ));
                }
                Ok(())
            }
            SymbolSpec::Conjugate { of } => of.validate(),
            SymbolSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::validation(MODULE, "product needs at least one factor"));
                }
                factors.iter().try_for_each(SymbolSpec::validate)
            }
            SymbolSpec::BuiltinH { terms, scale } => {
                if *terms < 2 {
                    return Err(Error::validation(MODULE, format!("builtin_h needs terms >= 2, got {terms}")));
                }
                if !scale.0.is_finite() {
                    return Err(Error::validation(MODULE, "builtin_h scale must be finite"));
                }
                Ok(())
            }
            SymbolSpec::Indicator { arcs } => {
                for &(s, l) in arcs {
                    Arc::new(s.0, l.0)?;
                }
                Ok(())
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            SymbolSpec::Char { .. } => "char",
            SymbolSpec::Trig { .. } => "trig",
            SymbolSpec::Exp { .. } => "exp",
            SymbolSpec::ExpI { .. } => "exp_i",
            SymbolSpec::Product { .. } => "product",
            SymbolSpec::Conjugate { .. } => "conjugate",
            SymbolSpec::Hilbert { .. } => "hilbert",
            SymbolSpec::BuiltinH { .. } => "builtin_h",
            SymbolSpec::Indicator { .. } => "indicator",
        }
    }

    /// Bandwidth estimate; `None` for nodes that are not band-limited.
    /// Exponentials multiply their argument's bandwidth by
    /// `cfg.exp_bandwidth_factor`.
    pub fn bandwidth(&self, cfg: &Thresholds) -> Option<usize> {
        match self {
            SymbolSpec::Char { n } => Some(n.unsigned_abs() as usize),
            SymbolSpec::Trig { .. } => Some(self.trig_series().and_then(|s| s.support_degree()).unwrap_or(0)),
            SymbolSpec::Exp { of } | SymbolSpec::ExpI { of } => {
                of.bandwidth(cfg).map(|b| (b as f64 * cfg.exp_bandwidth_factor).ceil() as usize)
            }
            SymbolSpec::Conjugate { of } | SymbolSpec::Hilbert { of } => of.bandwidth(cfg),
            SymbolSpec::Product { factors } => factors
                .iter()
                .map(|f| f.bandwidth(cfg))
                .try_fold(0usize, |acc, b| b.map(|b| acc.saturating_add(b))),
            SymbolSpec::BuiltinH { terms, .. } => Some(*terms),
            SymbolSpec::Indicator { .. } => None,
        }
    }

    /// Replaces every `builtin_h` term count by `terms`.
    pub fn with_truncation(&self, terms: usize) -> SymbolSpec {
        let boxed = |s: &SymbolSpec| Box::new(s.with_truncation(terms));
        match self {
            SymbolSpec::BuiltinH { scale, .. } => SymbolSpec::BuiltinH { terms, scale: *scale },
            SymbolSpec::Exp { of } => SymbolSpec::Exp { of: boxed(of) },
            SymbolSpec::ExpI { of } => SymbolSpec::ExpI { of: boxed(of) },
            SymbolSpec::Conjugate { of } => SymbolSpec::Conjugate { of: boxed(of) },
            SymbolSpec::Hilbert { of } => SymbolSpec::Hilbert { of: boxed(of) },
            SymbolSpec::Product { factors } => {
                SymbolSpec::Product { factors: factors.iter().map(|f| f.with_truncation(terms)).collect() }
            }
            other => other.clone(),
        }
    }

    pub fn contains_builtin_h(&self) -> bool {
        match self {
            SymbolSpec::BuiltinH { .. } => true,
            SymbolSpec::Exp { of } | SymbolSpec::ExpI { of } | SymbolSpec::Conjugate { of } | SymbolSpec::Hilbert { of } => {
                of.contains_builtin_h()
            }
            SymbolSpec::Product { factors } => factors.iter().any(SymbolSpec::contains_builtin_h),
            _ => false,
        }
    }
}

/// Samples the symbol on the grid.
pub fn realize(spec: &SymbolSpec, grid: CircleGrid, cfg: &Thresholds) -> Result<GridFunction> {
    spec.validate()?;
    if let Some(bw) = spec.bandwidth(cfg) {
        if bw > grid.max_degree() {
            return Err(Error::resolution(
                MODULE,
                format!(
                    "symbol bandwidth estimate {bw} exceeds the {}-point grid limit {}; raise the grid size",
                    grid.size(),
                    grid.max_degree()
                ),
            ));
        }
    }
    realize_node(spec, grid)
}

fn realize_node(spec: &SymbolSpec, grid: CircleGrid) -> Result<GridFunction> {
    Ok(match spec {
        SymbolSpec::Char { n } => character(grid, *n),
        SymbolSpec::Trig { .. } => {
            let s = spec.trig_series().expect("trig node");
            if s.hermitian_defect() == 0.0 {
                crate::circle_fourier::evaluate_real(&s, grid)?
            } else {
                evaluate(&s, grid)
            }
        }
        SymbolSpec::Exp { of } => {
            let x = realize_node(of, grid)?;
            GridFunction::from_real(grid, x.values().iter().map(|z| z.re.exp()).collect())?
        }
        SymbolSpec::ExpI { of } => realize_node(of, grid)?.map(|z| Complex64::from_polar(1.0, z.re)),
        SymbolSpec::Product { factors } => {
            let mut acc = realize_node(&factors[0], grid)?;
            for f in &factors[1..] {
                acc = acc.mul(&realize_node(f, grid)?)?;
            }
            acc
        }
        SymbolSpec::Conjugate { of } => realize_node(of, grid)?.conj(),
        SymbolSpec::Hilbert { of } => hilbert_samples(&realize_node(of, grid)?),
        SymbolSpec::BuiltinH { terms, scale } => h_samples(*terms, scale.0, grid)?,
        SymbolSpec::Indicator { arcs } => {
            let arcs: Vec<Arc> = arcs.iter().map(|&(s, l)| Arc::new(s.0, l.0)).collect::<Result<_>>()?;
            GridFunction::from_real_fn(grid, |t| if arcs.iter().any(|a| a.contains(t)) { 1.0 } else { 0.0 })
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Invertibility {
    pub min_modulus: f64,
    pub invertible_at_resolution: bool,
}

/// `min |f| >= delta` on the grid.
pub fn invertibility(f: &GridFunction, cfg: &Thresholds) -> Invertibility {
    let min_modulus = f.min_modulus();
    Invertibility { min_modulus, invertible_at_resolution: min_modulus >= cfg.delta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::example_h::weight;
    use std::f64::consts::PI;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    fn cfg() -> Thresholds {
        Thresholds::default()
    }

    #[test]
    fn realize_examples() {
        let g = grid(64);
        let f = realize(&SymbolSpec::char(3), g, &cfg()).unwrap();
        for (j, z) in f.values().iter().enumerate() {
            assert!((z - Complex64::from_polar(1.0, 3.0 * g.point(j))).norm() < 1e-14);
        }
        let one = realize(&SymbolSpec::product(vec![SymbolSpec::char(1), SymbolSpec::char(-1)]), g, &cfg()).unwrap();
        assert!(one.max_abs_diff(&GridFunction::constant(g, Complex64::new(1.0, 0.0))) < 1e-15);

        let h = realize(&SymbolSpec::builtin_h(1000, 1.0), grid(4096), &cfg()).unwrap();
        let direct: f64 = -(2..=1000).map(weight).sum::<f64>();
        assert_abs_diff_eq!(h.values()[0].re, direct, epsilon = 1e-12);
        assert!(h.is_real());
    }

    #[test]
    fn composite_nodes() {
        let g = grid(256);
        let cos = SymbolSpec::real_trig(0.0, &[1.0], &[]);
        let f = realize(&SymbolSpec::exp_i(cos.clone()), g, &cfg()).unwrap();
        for (j, z) in f.values().iter().enumerate() {
            assert!((z - Complex64::new(0.0, g.point(j).cos()).exp()).norm() < 1e-14);
        }
        let e = realize(&SymbolSpec::exp(cos.clone()), g, &cfg()).unwrap();
        assert!(e.is_real());
        let h = realize(&SymbolSpec::hilbert(cos), g, &cfg()).unwrap();
        assert!(h.max_abs_diff(&GridFunction::from_real_fn(g, f64::sin)) < 1e-14);
        let c = realize(&SymbolSpec::conjugate(SymbolSpec::char(2)), g, &cfg()).unwrap();
        assert!(c.max_abs_diff(&realize(&SymbolSpec::char(-2), g, &cfg()).unwrap()) < 1e-15);
        let ind = realize(&SymbolSpec::indicator(&[(0.0, PI)]), g, &cfg()).unwrap();
        assert_eq!(ind.real_values().iter().sum::<f64>(), 128.0);
    }

    #[test]
    fn bandwidth_guard() {
        let spec = SymbolSpec::exp_i(SymbolSpec::real_trig(0.0, &[0.0, 0.0, 1.0], &[]));
        assert_eq!(spec.bandwidth(&cfg()), Some(24));
        assert!(matches!(realize(&spec, grid(32), &cfg()), Err(Error::Resolution { .. })));
        assert!(realize(&spec, grid(64), &cfg()).is_ok());
        assert_eq!(SymbolSpec::indicator(&[(0.0, 1.0)]).bandwidth(&cfg()), None);
    }

    #[test]
    fn invariants_enforced() {
        assert!(SymbolSpec::exp(SymbolSpec::char(1)).validate().is_err());
        assert!(SymbolSpec::exp_i(SymbolSpec::char(1)).validate().is_err());
        assert!(SymbolSpec::builtin_h(1, 1.0).validate().is_err());
        assert!(SymbolSpec::parse("h:1").is_err());
        assert!(SymbolSpec::product(vec![]).validate().is_err());
        assert!(SymbolSpec::exp(SymbolSpec::conjugate(SymbolSpec::real_trig(1.0, &[2.0], &[]))).validate().is_ok());
    }

    #[test]
    fn invertibility_examples() {
        let g = grid(256);
        let inv = invertibility(&realize(&SymbolSpec::char(5), g, &cfg()).unwrap(), &cfg());
        assert!(inv.invertible_at_resolution);
        assert_abs_diff_eq!(inv.min_modulus, 1.0, epsilon = 1e-14);
        let inv = invertibility(&GridFunction::from_real_fn(g, f64::cos), &cfg());
        assert!(!inv.invertible_at_resolution);
        assert!(inv.min_modulus < 1e-15);
        let f = GridFunction::from_real_fn(g, |t| 2.0 + t.cos());
        let oracle = g.points().iter().map(|t| (2.0 + t.cos()).abs()).fold(f64::INFINITY, f64::min);
        assert_eq!(invertibility(&f, &cfg()).min_modulus, oracle);
        assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn inline_syntax() {
        assert_eq!(SymbolSpec::parse("char:-3").unwrap(), SymbolSpec::char(-3));
        assert_eq!(SymbolSpec::parse("h:1000:4").unwrap(), SymbolSpec::builtin_h(1000, 4.0));
        assert_eq!(SymbolSpec::parse("h:50").unwrap(), SymbolSpec::builtin_h(50, 1.0));
        let t = SymbolSpec::parse("trig:[0,2,0; 1,0.5,0; -1,0.5,0]").unwrap();
        let f = realize(&t, grid(64), &cfg()).unwrap();
        assert!(f.is_real());
        assert!(f.max_abs_diff(&GridFunction::from_real_fn(grid(64), |x| 2.0 + x.cos())) < 1e-15);
        for bad in ["", "char", "char:x", "trig:0,1,0", "trig:[1,2]", "h:10:1:2", "wave:3", "{"] {
            assert!(matches!(SymbolSpec::parse(bad), Err(Error::Validation { .. })), "{bad}");
        }
    }

    #[test]
    fn json_tree_round_trip() {
        let text = r#"{"type":"product","factors":[
            {"type":"char","n":2},
            {"type":"exp_i","of":{"type":"builtin_h","terms":100,"scale":"0.1"}},
            {"type":"exp","of":{"type":"trig","coeffs":[[1,"0.25",0],[-1,0.25,"0"]]}},
            {"type":"indicator","arcs":[["0","3.14"]]}]}"#;
        let spec = SymbolSpec::parse(text).unwrap();
        let again = SymbolSpec::parse(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        assert!(spec.to_json().contains(r#""scale":"0.1""#));
        assert!(SymbolSpec::parse(r#"{"type":"char","n":1,"extra":2}"#).is_err());
    }

    #[test]
    fn truncation_rewrite() {
        let spec = SymbolSpec::product(vec![SymbolSpec::char(2), SymbolSpec::exp_i(SymbolSpec::builtin_h(10, 4.0))]);
        let t = spec.with_truncation(1000);
        assert!(t.contains_builtin_h());
        assert_eq!(t.bandwidth(&Thresholds { exp_bandwidth_factor: 1.0, ..cfg() }), Some(1002));
    }

    proptest! {
        #[test]
        fn decimals_round_trip_bit_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
            let spec = SymbolSpec::builtin_h(5, x);
            let back: SymbolSpec = serde_json::from_str(&spec.to_json()).unwrap();
            match back {
                SymbolSpec::BuiltinH { scale, .. } => prop_assert_eq!(scale.0.to_bits(), x.to_bits()),
                _ => prop_assert!(false),
            }
        }

        #[test]
        fn char_products_add_indices(a in -20i64..20, b in -20i64..20) {
            let g = grid(128);
            let p = realize(&SymbolSpec::product(vec![SymbolSpec::char(a), SymbolSpec::char(b)]), g, &cfg()).unwrap();
            let c = realize(&SymbolSpec::char(a + b), g, &cfg()).unwrap();
            prop_assert!(p.max_abs_diff(&c) < 1e-14);
        }
    }
}
