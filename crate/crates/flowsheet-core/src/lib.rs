//! Process configuration data model: chemical components, unit operations
//! and material streams as a directed graph, plus topology validation,
//! mutation operations and a persistent JSON format.
//!
//! Flowsheet instances are single-writer; distinct instances share nothing
//! mutable and may be built and simulated concurrently.

pub mod component;
mod error;
mod flowsheet;
pub mod io;
mod property;
mod stream;
mod task;
mod unit;
pub mod validate;

pub use component::{Antoine, ChemComponent};
pub use error::{CoreError, SchemaError};
pub use flowsheet::{Flowsheet, PortSide};
pub use property::{default_margules, pair_key, PropertyMethod};
pub use stream::{PortRef, Stream, StreamState};
pub use task::{
    Constraint, ConstraintQuantity, FeedSpec, Objective, ObjectiveMetric, RequestKind, TaskSpec,
};
pub use unit::{validate_params, ParamValue, Params, PortCount, UnitKind, UnitOp};
pub use validate::{validate_topology, Violation, ViolationCode};
