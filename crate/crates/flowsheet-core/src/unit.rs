use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnitKind {
    Feed,
    Product,
    Mixer,
    Splitter,
    Heater,
    Pump,
    Valve,
    Flash,
    ComponentSplitter,
    ConversionReactor,
}

impl UnitKind {
    pub const ALL: [UnitKind; 10] = [
        UnitKind::Feed,
        UnitKind::Product,
        UnitKind::Mixer,
        UnitKind::Splitter,
        UnitKind::Heater,
        UnitKind::Pump,
        UnitKind::Valve,
        UnitKind::Flash,
        UnitKind::ComponentSplitter,
        UnitKind::ConversionReactor,
    ];

    /// Prefix used when generating unit ids.
    pub fn id_prefix(self) -> &'static str {
        match self {
            UnitKind::Feed => "feed",
            UnitKind::Product => "product",
            UnitKind::Mixer => "mixer",
            UnitKind::Splitter => "splitter",
            UnitKind::Heater => "heater",
            UnitKind::Pump => "pump",
            UnitKind::Valve => "valve",
            UnitKind::Flash => "flash",
            UnitKind::ComponentSplitter => "csplit",
            UnitKind::ConversionReactor => "reactor",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitKind::Feed => "Feed",
            UnitKind::Product => "Product",
            UnitKind::Mixer => "Mixer",
            UnitKind::Splitter => "Splitter",
            UnitKind::Heater => "Heater",
            UnitKind::Pump => "Pump",
            UnitKind::Valve => "Valve",
            UnitKind::Flash => "Flash",
            UnitKind::ComponentSplitter => "ComponentSplitter",
            UnitKind::ConversionReactor => "ConversionReactor",
        }
    }

    pub fn parse(name: &str) -> Option<UnitKind> {
        Self::ALL.iter().copied().find(|k| {
            k.name().eq_ignore_ascii_case(name) || k.id_prefix().eq_ignore_ascii_case(name)
        })
    }
}

impl std::fmt::Display for UnitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of ports on one side of a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortCount {
    Exactly(usize),
    AtLeast(usize),
}

impl PortCount {
    /// Whether `index` addresses a legal port.
    pub fn allows(self, index: usize) -> bool {
        match self {
            PortCount::Exactly(n) => index < n,
            PortCount::AtLeast(_) => true,
        }
    }
}

/// A kind-specific parameter value. Serialized untagged so unit params read
/// as plain JSON: numbers, maps of component -> number, lists, or strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Map(BTreeMap<String, f64>),
    List(Vec<f64>),
    Text(String),
}

impl ParamValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ParamValue::Number(v) => Some(*v),
            _ => None,
        }
    }
    pub fn as_map(&self) -> Option<&BTreeMap<String, f64>> {
        match self {
            ParamValue::Map(m) => Some(m),
            _ => None,
        }
    }
    pub fn as_list(&self) -> Option<&[f64]> {
        match self {
            ParamValue::List(v) => Some(v),
            _ => None,
        }
    }
    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// A unit operation node. Port arity is fixed by `kind` (for Splitter the
/// outlet count follows the length of its `fractions` parameter).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitOp {
    pub id: String,
    pub kind: UnitKind,
    #[serde(default)]
    pub params: Params,
}

impl UnitOp {
    pub fn inlet_ports(&self) -> PortCount {
        match self.kind {
            UnitKind::Feed => PortCount::Exactly(0),
            UnitKind::Mixer => PortCount::AtLeast(1),
            _ => PortCount::Exactly(1),
        }
    }

    pub fn outlet_ports(&self) -> PortCount {
        match self.kind {
            UnitKind::Product => PortCount::Exactly(0),
            UnitKind::Splitter => {
                let n = self
                    .params
                    .get("fractions")
                    .and_then(ParamValue::as_list)
                    .map_or(2, <[f64]>::len);
                PortCount::Exactly(n)
            }
            UnitKind::Flash | UnitKind::ComponentSplitter => PortCount::Exactly(2),
            _ => PortCount::Exactly(1),
        }
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(ParamValue::as_number)
    }
}

fn err(kind: UnitKind, key: &str, reason: impl Into<String>) -> CoreError {
    CoreError::InvalidUnitParams {
        kind: kind.name().to_string(),
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn require_number(kind: UnitKind, params: &Params, key: &str) -> Result<f64, CoreError> {
    params
        .get(key)
        .and_then(ParamValue::as_number)
        .ok_or_else(|| err(kind, key, "required numeric parameter missing"))
}

fn require_positive(kind: UnitKind, params: &Params, key: &str) -> Result<f64, CoreError> {
    let v = require_number(kind, params, key)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(err(kind, key, format!("must be > 0, got {v}")))
    }
}

/// Check the kind's required-parameter table: presence, types and physical
/// bounds (T > 0 K, P > 0 Pa, fractions in [0,1]).
pub fn validate_params(kind: UnitKind, params: &Params) -> Result<(), CoreError> {
    match kind {
        UnitKind::Mixer | UnitKind::Product => Ok(()),
        UnitKind::Heater => require_positive(kind, params, "T_out").map(|_| ()),
        UnitKind::Pump | UnitKind::Valve => require_positive(kind, params, "P_out").map(|_| ()),
        UnitKind::Flash => {
            require_positive(kind, params, "T")?;
            require_positive(kind, params, "P")?;
            Ok(())
        }
        UnitKind::Splitter => {
            let fractions = params
                .get("fractions")
                .and_then(ParamValue::as_list)
                .ok_or_else(|| err(kind, "fractions", "required list missing"))?;
            if fractions.len() < 2 {
                return Err(err(kind, "fractions", "need at least 2 outlet fractions"));
            }
            if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
                return Err(err(kind, "fractions", "each fraction must be in [0,1]"));
            }
            let sum: f64 = fractions.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(err(kind, "fractions", format!("must sum to 1, got {sum}")));
            }
            Ok(())
        }
        UnitKind::ComponentSplitter => {
            let split = params
                .get("split_fractions")
                .and_then(ParamValue::as_map)
                .ok_or_else(|| err(kind, "split_fractions", "required map missing"))?;
            for (comp, f) in split {
                if !(0.0..=1.0).contains(f) {
                    return Err(err(
                        kind,
                        "split_fractions",
                        format!("fraction for {comp} must be in [0,1], got {f}"),
                    ));
                }
            }
            Ok(())
        }
        UnitKind::ConversionReactor => {
            let stoich = params
                .get("stoichiometry")
                .and_then(ParamValue::as_map)
                .ok_or_else(|| err(kind, "stoichiometry", "required map missing"))?;
            let key_comp = params
                .get("key_component")
                .and_then(ParamValue::as_text)
                .ok_or_else(|| err(kind, "key_component", "required string missing"))?;
            let nu_key = stoich
                .get(key_comp)
                .copied()
                .ok_or_else(|| err(kind, "key_component", "not present in stoichiometry"))?;
            if nu_key == 0.0 {
                return Err(err(kind, "key_component", "stoichiometric coefficient is 0"));
            }
            let conversion = require_number(kind, params, "conversion")?;
            if !(0.0..=1.0).contains(&conversion) {
                return Err(err(kind, "conversion", "must be in [0,1]"));
            }
            Ok(())
        }
        UnitKind::Feed => {
            let flows = params
                .get("flows")
                .and_then(ParamValue::as_map)
                .ok_or_else(|| err(kind, "flows", "required map missing"))?;
            if flows.is_empty() {
                return Err(err(kind, "flows", "must name at least one component"));
            }
            for (comp, f) in flows {
                if *f < 0.0 || !f.is_finite() {
                    return Err(err(kind, "flows", format!("flow of {comp} must be >= 0")));
                }
            }
            require_positive(kind, params, "T")?;
            require_positive(kind, params, "P")?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: f64) -> ParamValue {
        ParamValue::Number(v)
    }

    #[test]
    fn flash_params_pass() {
        let params = Params::from([("T".into(), num(350.0)), ("P".into(), num(101_325.0))]);
        assert!(validate_params(UnitKind::Flash, &params).is_ok());
    }

    #[test]
    fn splitter_fractions_must_sum_to_one() {
        let params = Params::from([("fractions".into(), ParamValue::List(vec![0.6, 0.5]))]);
        let e = validate_params(UnitKind::Splitter, &params).unwrap_err();
        match e {
            CoreError::InvalidUnitParams { key, .. } => assert_eq!(key, "fractions"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn heater_rejects_nonpositive_temperature() {
        let params = Params::from([("T_out".into(), num(-10.0))]);
        assert!(validate_params(UnitKind::Heater, &params).is_err());
    }

    #[test]
    fn splitter_outlet_arity_follows_fractions() {
        let unit = UnitOp {
            id: "splitter1".into(),
            kind: UnitKind::Splitter,
            params: Params::from([("fractions".into(), ParamValue::List(vec![0.2, 0.3, 0.5]))]),
        };
        assert_eq!(unit.outlet_ports(), PortCount::Exactly(3));
        assert!(unit.outlet_ports().allows(2));
        assert!(!unit.outlet_ports().allows(3));
    }
}
