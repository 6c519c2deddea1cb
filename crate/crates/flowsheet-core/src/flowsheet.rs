use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::component;
use crate::error::CoreError;
use crate::property::PropertyMethod;
use crate::stream::{PortRef, Stream};
use crate::task::{RequestKind, TaskSpec};
use crate::unit::{validate_params, Params, ParamValue, PortCount, UnitKind, UnitOp};

static NEXT_FLOWSHEET: AtomicU64 = AtomicU64::new(1);

/// Which side of a unit a port is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortSide {
    Inlet,
    Outlet,
}

impl PortSide {
    pub fn label(self) -> &'static str {
        match self {
            PortSide::Inlet => "in",
            PortSide::Outlet => "out",
        }
    }
}

fn serialize_by_id<S, T>(map: &BTreeMap<String, T>, ser: S) -> Result<S::Ok, S::Error>
where
    S: serde::Serializer,
    T: Serialize,
{
    ser.collect_seq(map.values())
}

/// A process configuration: unit operations (nodes) and material streams
/// (edges) over a component list and a property method. Cycles are legal;
/// the simulator resolves them with tear streams.
#[derive(Debug, Clone, Serialize)]
pub struct Flowsheet {
    pub id: String,
    pub components: Vec<String>,
    pub property_method: PropertyMethod,
    #[serde(serialize_with = "serialize_by_id")]
    pub units: BTreeMap<String, UnitOp>,
    #[serde(serialize_with = "serialize_by_id")]
    pub streams: BTreeMap<String, Stream>,
    #[serde(skip)]
    unit_counters: BTreeMap<&'static str, u64>,
    #[serde(skip)]
    stream_counter: u64,
}

impl PartialEq for Flowsheet {
    fn eq(&self, other: &Self) -> bool {
        // id counters are bookkeeping, not configuration
        self.id == other.id
            && self.components == other.components
            && self.property_method == other.property_method
            && self.units == other.units
            && self.streams == other.streams
    }
}

impl Flowsheet {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            components: Vec::new(),
            property_method: PropertyMethod::IdealRaoult,
            units: BTreeMap::new(),
            streams: BTreeMap::new(),
            unit_counters: BTreeMap::new(),
            stream_counter: 0,
        }
    }

    /// Create an empty flowsheet for a design task with a process-unique id.
    pub fn create(task: &TaskSpec) -> Result<Self, CoreError> {
        if task.request_kind != RequestKind::Design {
            return Err(CoreError::WrongRequestKind(task.request_kind.to_string()));
        }
        let n = NEXT_FLOWSHEET.fetch_add(1, Ordering::Relaxed);
        Ok(Self::new(format!("fs-{n}")))
    }

    /// Copy this configuration into an independent instance with its own id.
    pub fn fork(&self) -> Self {
        let n = NEXT_FLOWSHEET.fetch_add(1, Ordering::Relaxed);
        let mut copy = self.clone();
        copy.id = format!("fs-{n}");
        copy
    }

    pub fn unit(&self, id: &str) -> Result<&UnitOp, CoreError> {
        self.units
            .get(id)
            .ok_or_else(|| CoreError::UnknownUnit(id.to_string()))
    }

    pub fn units_of_kind(&self, kind: UnitKind) -> impl Iterator<Item = &UnitOp> {
        self.units.values().filter(move |u| u.kind == kind)
    }

    /// The stream bound to a given port, if any.
    pub fn stream_at(&self, unit: &str, side: PortSide, port: usize) -> Option<&Stream> {
        self.streams.values().find(|s| {
            let end = match side {
                PortSide::Inlet => &s.to,
                PortSide::Outlet => &s.from,
            };
            end.unit == unit && end.port == port
        })
    }

    /// Add a database component by name (case-insensitive, synonyms apply).
    /// Adding an already-present component is a no-op.
    pub fn add_component(&mut self, name: &str) -> Result<String, CoreError> {
        let comp = component::resolve(name)?;
        if !self.components.contains(&comp.id) {
            self.components.push(comp.id.clone());
        }
        Ok(comp.id.clone())
    }

    fn fresh_unit_id(&mut self, kind: UnitKind) -> String {
        let counter = self.unit_counters.entry(kind.id_prefix()).or_insert(0);
        loop {
            *counter += 1;
            let id = format!("{}{}", kind.id_prefix(), counter);
            if !self.units.contains_key(&id) {
                return id;
            }
        }
    }

    /// Validate params for `kind` and insert a new unit with a fresh id.
    pub fn add_unit(&mut self, kind: UnitKind, params: Params) -> Result<String, CoreError> {
        validate_params(kind, &params)?;
        self.check_component_refs(kind, &params)?;
        let id = self.fresh_unit_id(kind);
        self.units.insert(
            id.clone(),
            UnitOp {
                id: id.clone(),
                kind,
                params,
            },
        );
        Ok(id)
    }

    /// Map-valued params (feed flows, split fractions, stoichiometry) must
    /// only name components present on the flowsheet.
    fn check_component_refs(&self, kind: UnitKind, params: &Params) -> Result<(), CoreError> {
        for key in ["flows", "split_fractions", "stoichiometry"] {
            if let Some(ParamValue::Map(m)) = params.get(key) {
                for comp in m.keys() {
                    if !self.components.contains(comp) {
                        return Err(CoreError::InvalidUnitParams {
                            kind: kind.name().to_string(),
                            key: key.to_string(),
                            reason: format!("component '{comp}' is not on the flowsheet"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_port(
        &self,
        unit_id: &str,
        side: PortSide,
        port: usize,
    ) -> Result<(), CoreError> {
        let unit = self.unit(unit_id)?;
        let arity = match side {
            PortSide::Inlet => unit.inlet_ports(),
            PortSide::Outlet => unit.outlet_ports(),
        };
        if !arity.allows(port) {
            let bound = match arity {
                PortCount::Exactly(n) => n,
                PortCount::AtLeast(n) => n,
            };
            return Err(CoreError::InvalidPort {
                unit: unit_id.to_string(),
                side: side.label(),
                port,
                reason: format!("{} has {} {} port(s)", unit.kind, bound, side.label()),
            });
        }
        if let Some(existing) = self.stream_at(unit_id, side, port) {
            return Err(CoreError::PortOccupied {
                unit: unit_id.to_string(),
                side: side.label(),
                port,
                stream: existing.id.clone(),
            });
        }
        Ok(())
    }

    /// Connect an outlet port to an inlet port with a new stream. Cycles are
    /// allowed; occupied ports and out-of-arity indices are not.
    pub fn connect(&mut self, from: PortRef, to: PortRef) -> Result<String, CoreError> {
        self.check_port(&from.unit, PortSide::Outlet, from.port)?;
        self.check_port(&to.unit, PortSide::Inlet, to.port)?;
        self.stream_counter += 1;
        let id = format!("s{}", self.stream_counter);
        self.streams.insert(
            id.clone(),
            Stream {
                id: id.clone(),
                from,
                to,
                state: None,
            },
        );
        Ok(id)
    }

    /// Remove a unit together with every stream incident to it. Returns the
    /// removed ids, unit first, then streams in id order.
    pub fn cascade_delete(&mut self, unit_id: &str) -> Result<Vec<String>, CoreError> {
        if !self.units.contains_key(unit_id) {
            return Err(CoreError::UnknownUnit(unit_id.to_string()));
        }
        let doomed: Vec<String> = self
            .streams
            .values()
            .filter(|s| s.from.unit == unit_id || s.to.unit == unit_id)
            .map(|s| s.id.clone())
            .collect();
        self.units.remove(unit_id);
        let mut removed = vec![unit_id.to_string()];
        for sid in doomed {
            self.streams.remove(&sid);
            removed.push(sid);
        }
        Ok(removed)
    }

    /// Referential and type invariants beyond per-unit param checks. Used by
    /// the load path and the service boundary; mutation ops maintain these by
    /// construction.
    pub fn check_invariants(&self) -> Result<(), CoreError> {
        for comp in &self.components {
            if component::get(comp).is_none() {
                return Err(CoreError::UnknownComponent {
                    name: comp.clone(),
                    candidates: component::nearest_matches(comp, 3),
                });
            }
        }
        for unit in self.units.values() {
            validate_params(unit.kind, &unit.params)?;
            self.check_component_refs(unit.kind, &unit.params)?;
        }
        let mut seen_ends: Vec<(&str, PortSide, usize)> = Vec::new();
        for stream in self.streams.values() {
            for (end, side) in [
                (&stream.from, PortSide::Outlet),
                (&stream.to, PortSide::Inlet),
            ] {
                let unit = self.unit(&end.unit)?;
                let arity = match side {
                    PortSide::Inlet => unit.inlet_ports(),
                    PortSide::Outlet => unit.outlet_ports(),
                };
                if !arity.allows(end.port) {
                    return Err(CoreError::InvalidPort {
                        unit: end.unit.clone(),
                        side: side.label(),
                        port: end.port,
                        reason: "port index out of range".to_string(),
                    });
                }
                let key = (end.unit.as_str(), side, end.port);
                if seen_ends.contains(&key) {
                    return Err(CoreError::PortOccupied {
                        unit: end.unit.clone(),
                        side: side.label(),
                        port: end.port,
                        stream: stream.id.clone(),
                    });
                }
                seen_ends.push(key);
            }
            if let Some(state) = &stream.state {
                if state.flows.values().any(|f| *f < 0.0) {
                    return Err(CoreError::InvalidUnitParams {
                        kind: "Stream".to_string(),
                        key: stream.id.clone(),
                        reason: "negative component flow".to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Rebuild id counters from the ids present (used after deserializing).
    pub(crate) fn rebuild_counters(&mut self) {
        self.unit_counters.clear();
        for unit in self.units.values() {
            let prefix = unit.kind.id_prefix();
            if let Some(n) = unit
                .id
                .strip_prefix(prefix)
                .and_then(|rest| rest.parse::<u64>().ok())
            {
                let c = self.unit_counters.entry(prefix).or_insert(0);
                *c = (*c).max(n);
            }
        }
        self.stream_counter = self
            .streams
            .keys()
            .filter_map(|id| id.strip_prefix('s').and_then(|r| r.parse::<u64>().ok()))
            .max()
            .unwrap_or(0);
    }
}

/// Mirror of the serialized shape; converted into [`Flowsheet`] on load.
#[derive(Deserialize)]
pub(crate) struct FlowsheetDoc {
    pub id: String,
    pub components: Vec<String>,
    pub property_method: PropertyMethod,
    pub units: Vec<UnitOp>,
    pub streams: Vec<Stream>,
}

impl From<FlowsheetDoc> for Flowsheet {
    fn from(doc: FlowsheetDoc) -> Self {
        let mut fs = Flowsheet::new(doc.id);
        fs.components = doc.components;
        fs.property_method = doc.property_method;
        fs.units = doc.units.into_iter().map(|u| (u.id.clone(), u)).collect();
        fs.streams = doc.streams.into_iter().map(|s| (s.id.clone(), s)).collect();
        fs.rebuild_counters();
        fs
    }
}

impl<'de> Deserialize<'de> for Flowsheet {
    fn deserialize<D>(de: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        FlowsheetDoc::deserialize(de).map(Flowsheet::from)
    }
}
