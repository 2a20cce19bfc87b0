//! Library side of the `gqi` command: tables, figure data, single-scenario
//! decay constants and the verification suites.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod decay;
pub mod error;
pub mod figures;
pub mod table;
pub mod verify;

pub use error::{CliError, Result};
pub use table::{Format, SweepTable};
