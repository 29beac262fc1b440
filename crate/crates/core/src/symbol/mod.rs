//! Symbol construction, factorization and path-component classification.

pub mod classify;
pub mod example_h;
pub mod factor;
pub mod spec;

pub use classify::{
    classify, classify_ladder, compare_symbols, BoundednessVerdict, ClassifyOptions, ComponentFingerprint,
    ComponentRelation, LadderReport,
};
pub use example_h::{example_h, uniform_convergence_off_zero, DecayTable, ExampleH, Region};
pub use factor::{factorize, FactorOptions, Factorization};
pub use spec::{invertibility, realize, Decimal, Invertibility, SymbolSpec};
