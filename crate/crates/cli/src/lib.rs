//! Library behind the `procdes` binary: command implementations, report
//! types and the golden flowsheet corpus. Tests drive these directly.

pub mod commands;
pub mod corpus;
pub mod report;

pub use commands::{
    cmd_batch, cmd_design, cmd_simulate, cmd_vle, BatchArgs, DesignArgs, ProposerKind, EXIT_ERROR,
    EXIT_NO_CONVERGENCE, EXIT_OK,
};
pub use report::{validate_against_schema, BatchReport, RunReport};
