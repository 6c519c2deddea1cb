use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::flowsheet::{Flowsheet, PortSide};
use crate::unit::{PortCount, UnitKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    UnboundPort,
    NoFeed,
    NoProduct,
    UnreachableUnit,
    EmptyComponents,
    DisconnectedProduct,
}

/// A topology defect. Violations are data, not errors: the search must be
/// able to carry and score invalid configurations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub code: ViolationCode,
    /// Defect site: a unit id, or `unit.outN` / `unit.inN` for ports.
    pub location: String,
    pub message: String,
}

impl Violation {
    fn new(code: ViolationCode, location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            code,
            location: location.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} at {}: {}", self.code, self.location, self.message)
    }
}

fn bound_ports(fs: &Flowsheet, unit: &str, side: PortSide) -> Vec<usize> {
    fs.streams
        .values()
        .filter_map(|s| {
            let end = match side {
                PortSide::Inlet => &s.to,
                PortSide::Outlet => &s.from,
            };
            (end.unit == unit).then_some(end.port)
        })
        .collect()
}

fn unbound_port_violations(fs: &Flowsheet, out: &mut Vec<Violation>) {
    for unit in fs.units.values() {
        for (side, arity) in [
            (PortSide::Inlet, unit.inlet_ports()),
            (PortSide::Outlet, unit.outlet_ports()),
        ] {
            let bound = bound_ports(fs, &unit.id, side);
            match arity {
                PortCount::Exactly(n) => {
                    for port in 0..n {
                        if !bound.contains(&port) {
                            out.push(Violation::new(
                                ViolationCode::UnboundPort,
                                format!("{}.{}{}", unit.id, side.label(), port),
                                format!(
                                    "{} {} requires a stream on {} port {}",
                                    unit.kind,
                                    unit.id,
                                    side.label(),
                                    port
                                ),
                            ));
                        }
                    }
                }
                PortCount::AtLeast(n) => {
                    if bound.len() < n {
                        out.push(Violation::new(
                            ViolationCode::UnboundPort,
                            format!("{}.{}0", unit.id, side.label()),
                            format!(
                                "{} {} requires at least {} bound {} port(s)",
                                unit.kind,
                                unit.id,
                                n,
                                side.label()
                            ),
                        ));
                    }
                }
            }
        }
    }
}

fn forward_reachable(fs: &Flowsheet) -> BTreeSet<String> {
    let mut seen: BTreeSet<String> = fs
        .units_of_kind(UnitKind::Feed)
        .map(|u| u.id.clone())
        .collect();
    let mut frontier: Vec<String> = seen.iter().cloned().collect();
    while let Some(u) = frontier.pop() {
        for s in fs.streams.values() {
            if s.from.unit == u && seen.insert(s.to.unit.clone()) {
                frontier.push(s.to.unit.clone());
            }
        }
    }
    seen
}

fn backward_reachable(fs: &Flowsheet) -> BTreeSet<String> {
    let mut seen: BTreeSet<String> = fs
        .units_of_kind(UnitKind::Product)
        .map(|u| u.id.clone())
        .collect();
    let mut frontier: Vec<String> = seen.iter().cloned().collect();
    while let Some(u) = frontier.pop() {
        for s in fs.streams.values() {
            if s.to.unit == u && seen.insert(s.from.unit.clone()) {
                frontier.push(s.from.unit.clone());
            }
        }
    }
    seen
}

/// Collect every topology defect. An empty result means the flowsheet is
/// topologically simulatable. Deterministic order: global rules first, then
/// per-unit rules in unit-id order.
pub fn validate_topology(fs: &Flowsheet) -> Vec<Violation> {
    let mut out = Vec::new();

    if fs.units_of_kind(UnitKind::Feed).next().is_none() {
        out.push(Violation::new(
            ViolationCode::NoFeed,
            "flowsheet",
            "no Feed unit present",
        ));
    }
    if fs.units_of_kind(UnitKind::Product).next().is_none() {
        out.push(Violation::new(
            ViolationCode::NoProduct,
            "flowsheet",
            "no Product unit present",
        ));
    }
    if fs.components.is_empty() {
        out.push(Violation::new(
            ViolationCode::EmptyComponents,
            "flowsheet",
            "no components selected",
        ));
    }

    unbound_port_violations(fs, &mut out);

    let from_feeds = forward_reachable(fs);
    for unit in fs.units.values() {
        if unit.kind != UnitKind::Feed && !from_feeds.contains(&unit.id) {
            out.push(Violation::new(
                ViolationCode::UnreachableUnit,
                unit.id.clone(),
                format!("{} {} has no path from any Feed", unit.kind, unit.id),
            ));
        }
    }

    let to_products = backward_reachable(fs);
    for unit in fs.units.values() {
        if unit.kind != UnitKind::Product && !to_products.contains(&unit.id) {
            out.push(Violation::new(
                ViolationCode::DisconnectedProduct,
                unit.id.clone(),
                format!("{} {} has no path to any Product", unit.kind, unit.id),
            ));
        }
    }

    out
}
