//! Gaussian-state toolkit for quantum-illumination decay constants.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the double-precision instantiation used by the CLI and tests.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod metric;
pub mod probe;
pub mod qi;
pub mod sample;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
pub use metric::{
    basis_matrices, metric_general, metric_thermal, metric_thermal_terms, BasisMatrices,
    MetricTerm, MonotoneFunction, TangentVector,
};
pub use probe::{
    family_metric, lagrange_residual, probe_search, single_mode_gamma, single_mode_optimize,
    FockCoefficients, PureProbeFamily,
};
pub use qi::{
    coherent_benchmark, decay_general, decay_large_nb, decay_thermal_idler, quantum_advantage,
    scenario_decay, tmsv_decay, DecayConstants, QiScenario, QuantumAdvantage,
};
pub use scalar::Real;
pub use symplectic::{
    omega, symplectic_inverse, symplectic_spectrum, williamson, ChannelSpec, Diagnostics,
    GaussianMap, GaussianState, StateRecord, WilliamsonDecomposition,
};

pub type GaussianStateF64 = GaussianState<f64>;
pub type GaussianStateF32 = GaussianState<f32>;
pub type TangentVectorF64 = TangentVector<f64>;
pub type MonotoneFunctionF64 = MonotoneFunction<f64>;
pub type ChannelSpecF64 = ChannelSpec<f64>;
pub type QiScenarioF64 = QiScenario<f64>;
pub type DecayConstantsF64 = DecayConstants<f64>;
