//! Simplified sequential-modular process simulator: pure-component
//! properties, isothermal flash, unit models, recycle convergence with
//! Wegstein acceleration, and binary VLE analysis.
//!
//! All operations are pure functions of their inputs plus the immutable
//! component database and can run concurrently.

mod binary_vle;
mod error;
mod flash;
mod sequence;
mod simulate;
mod units;
mod vle;

pub use binary_vle::{analyze_binary_vle, AzeotropePoint, VlePoint, VleResult};
pub use error::SimError;
pub use flash::{rachford_rice, FlashSplit};
pub use sequence::{order_units, CalcOrder};
pub use simulate::{
    run_simulation, run_simulation_with, FailureReason, InProcessSim, SimClient, SimClientError,
    SimOptions, SimulationResult,
};
pub use units::{simulate_unit, UnitOutputs};
pub use vle::{activity_coefficients, k_values, saturation_pressure};
