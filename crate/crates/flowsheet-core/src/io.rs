use std::path::Path;

use serde_json::Value;

use crate::error::{CoreError, SchemaError};
use crate::flowsheet::{Flowsheet, FlowsheetDoc};

const REQUIRED_KEYS: [&str; 5] = ["id", "components", "property_method", "units", "streams"];

/// Parse a flowsheet document from JSON text, checking shape only.
/// Structural problems come back as [`SchemaError`] with a
/// JSON-pointer-style location.
pub fn parse_flowsheet_json(text: &str) -> Result<Flowsheet, SchemaError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| SchemaError::new("/", e.to_string()))?;
    parse_flowsheet_value(&value)
}

/// Shape-check an already-parsed JSON value.
pub fn parse_flowsheet_value(value: &Value) -> Result<Flowsheet, SchemaError> {
    let obj = value
        .as_object()
        .ok_or_else(|| SchemaError::new("/", "document must be a JSON object"))?;
    for key in REQUIRED_KEYS {
        if !obj.contains_key(key) {
            return Err(SchemaError::new(
                format!("/{key}"),
                format!("missing required key \"{key}\""),
            ));
        }
    }
    for (key, expect_array) in [("units", true), ("streams", true), ("components", true)] {
        if expect_array && !obj[key].is_array() {
            return Err(SchemaError::new(format!("/{key}"), "expected an array"));
        }
    }

    let doc: FlowsheetDoc = serde_json::from_value(value.clone())
        .map_err(|e| SchemaError::new("/", e.to_string()))?;

    // duplicate-id detection before the map collapses them
    let mut unit_ids = Vec::new();
    for (i, u) in doc.units.iter().enumerate() {
        if unit_ids.contains(&u.id) {
            return Err(SchemaError::new(
                format!("/units/{i}"),
                format!("duplicate unit id \"{}\"", u.id),
            ));
        }
        unit_ids.push(u.id.clone());
    }
    let mut stream_ids = Vec::new();
    for (i, s) in doc.streams.iter().enumerate() {
        if stream_ids.contains(&s.id) {
            return Err(SchemaError::new(
                format!("/streams/{i}"),
                format!("duplicate stream id \"{}\"", s.id),
            ));
        }
        stream_ids.push(s.id.clone());
    }

    Ok(Flowsheet::from(doc))
}

/// Map an invariant failure onto a schema location.
pub fn invariant_to_schema_error(fs: &Flowsheet, err: &CoreError) -> SchemaError {
    let location = match err {
        CoreError::UnknownUnit(id) => fs
            .streams
            .values()
            .find(|s| s.from.unit == *id || s.to.unit == *id)
            .map(|s| format!("/streams/{}", s.id))
            .unwrap_or_else(|| "/units".to_string()),
        CoreError::PortOccupied { stream, .. } => format!("/streams/{stream}"),
        CoreError::InvalidPort { unit, .. } => format!("/units/{unit}"),
        CoreError::InvalidUnitParams { key, .. } => format!("/units/*/params/{key}"),
        CoreError::UnknownComponent { name, .. } => format!("/components/{name}"),
        _ => "/".to_string(),
    };
    SchemaError::new(location, err.to_string())
}

/// Write a flowsheet as pretty-printed UTF-8 JSON.
pub fn save_design(fs: &Flowsheet, path: &Path) -> std::io::Result<()> {
    let text = to_json_string(fs);
    std::fs::write(path, text)
}

pub fn to_json_string(fs: &Flowsheet) -> String {
    let mut text = serde_json::to_string_pretty(fs).expect("flowsheet serialization is total");
    text.push('\n');
    text
}

/// Load a flowsheet, checking both document shape and type invariants.
pub fn load_design(path: &Path) -> Result<Flowsheet, SchemaError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SchemaError::new("/", format!("cannot read {}: {e}", path.display())))?;
    load_design_str(&text)
}

pub fn load_design_str(text: &str) -> Result<Flowsheet, SchemaError> {
    let fs = parse_flowsheet_json(text)?;
    fs.check_invariants()
        .map_err(|e| invariant_to_schema_error(&fs, &e))?;
    Ok(fs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::PortRef;
    use crate::unit::{ParamValue, Params, UnitKind};

    fn sample() -> Flowsheet {
        let mut fs = Flowsheet::new("demo");
        fs.add_component("water").unwrap();
        fs.add_component("ethanol").unwrap();
        let feed = fs
            .add_unit(
                UnitKind::Feed,
                Params::from([
                    (
                        "flows".to_string(),
                        ParamValue::Map(
                            [("water".to_string(), 60.0), ("ethanol".to_string(), 40.0)].into(),
                        ),
                    ),
                    ("T".to_string(), ParamValue::Number(300.0)),
                    ("P".to_string(), ParamValue::Number(101_325.0)),
                ]),
            )
            .unwrap();
        let flash = fs
            .add_unit(
                UnitKind::Flash,
                Params::from([
                    ("T".to_string(), ParamValue::Number(360.0)),
                    ("P".to_string(), ParamValue::Number(101_325.0)),
                ]),
            )
            .unwrap();
        let p1 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
        let p2 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
        fs.connect(PortRef::new(&feed, 0), PortRef::new(&flash, 0))
            .unwrap();
        fs.connect(PortRef::new(&flash, 0), PortRef::new(&p1, 0))
            .unwrap();
        fs.connect(PortRef::new(&flash, 1), PortRef::new(&p2, 0))
            .unwrap();
        fs
    }

    #[test]
    fn round_trip_identity() {
        let fs = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fs.json");
        save_design(&fs, &path).unwrap();
        let loaded = load_design(&path).unwrap();
        assert_eq!(fs, loaded);
    }

    #[test]
    fn missing_units_key_points_at_units() {
        let text = r#"{"id":"x","components":[],"property_method":{"variant":"ideal_raoult"},"streams":[]}"#;
        let err = load_design_str(text).unwrap_err();
        assert_eq!(err.location, "/units");
    }

    #[test]
    fn dangling_stream_reference_names_the_stream() {
        let mut value: serde_json::Value = serde_json::from_str(&to_json_string(&sample())).unwrap();
        value["streams"][0]["from"][0] = "ghost".into();
        let err = load_design_str(&value.to_string()).unwrap_err();
        assert!(err.location.starts_with("/streams/"), "{err}");
    }
}
