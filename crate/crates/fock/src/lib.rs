//! Brute-force truncated Fock-space checks of the Gaussian decay constants:
//! explicit output states, their quantum Chernoff exponent, and the
//! best signal-to-noise ratio of quadratic observables.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chernoff;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod operator;
pub mod snr;

pub use chernoff::{chernoff_exponent, Chernoff, OverlapCurve};
pub use circuit::{
    build_state, qi_output_pair, thermal_mix, CircuitSpec, Gate, OutputCutoffs, MAX_DEFICIT,
};
pub use error::{Error, Result};
pub use operator::FockOperator;
pub use snr::{quadratic_snr, snr_maximize, QuadraticObservable, SnrOptimum, SnrReport};
