use flowsheet_core::{
    CoreError, Flowsheet, ParamValue, Params, PortRef, RequestKind, TaskSpec, UnitKind,
};

fn feed_params(comp: &str, flow: f64) -> Params {
    Params::from([
        (
            "flows".to_string(),
            ParamValue::Map([(comp.to_string(), flow)].into()),
        ),
        ("T".to_string(), ParamValue::Number(300.0)),
        ("P".to_string(), ParamValue::Number(101_325.0)),
    ])
}

fn flash_params(t: f64, p: f64) -> Params {
    Params::from([
        ("T".to_string(), ParamValue::Number(t)),
        ("P".to_string(), ParamValue::Number(p)),
    ])
}

#[test]
fn create_flowsheet_gives_fresh_empty_instances() {
    let task = TaskSpec::design(&["water"]);
    let a = Flowsheet::create(&task).unwrap();
    let b = Flowsheet::create(&task).unwrap();
    assert!(a.units.is_empty() && a.streams.is_empty());
    assert_ne!(a.id, b.id);
}

#[test]
fn create_flowsheet_rejects_thermo_analysis_tasks() {
    let task = TaskSpec::thermo_analysis("water", "ethanol");
    assert!(matches!(
        Flowsheet::create(&task),
        Err(CoreError::WrongRequestKind(_))
    ));
    assert_eq!(task.request_kind, RequestKind::ThermoAnalysis);
}

#[test]
fn add_component_is_idempotent() {
    let mut fs = Flowsheet::new("t");
    fs.add_component("water").unwrap();
    fs.add_component("Water").unwrap();
    assert_eq!(fs.components, vec!["water".to_string()]);
}

#[test]
fn add_component_unknown_reports_candidates() {
    let mut fs = Flowsheet::new("t");
    let err = fs.add_component("unobtainium").unwrap_err();
    assert!(matches!(err, CoreError::UnknownComponent { .. }));
}

#[test]
fn add_unit_validates_params() {
    let mut fs = Flowsheet::new("t");
    assert!(fs
        .add_unit(UnitKind::Flash, flash_params(350.0, 101_325.0))
        .is_ok());
    let err = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.6, 0.5]))]),
        )
        .unwrap_err();
    assert!(matches!(err, CoreError::InvalidUnitParams { .. }));
}

#[test]
fn connect_rejects_occupied_ports_and_allows_cycles() {
    let mut fs = Flowsheet::new("t");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params("water", 100.0)).unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.5, 0.5]))]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();

    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0))
        .unwrap();
    let err = fs
        .connect(PortRef::new(&splitter, 0), PortRef::new(&mixer, 0))
        .unwrap_err();
    assert!(matches!(err, CoreError::PortOccupied { .. }));

    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&splitter, 0))
        .unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&product, 0))
        .unwrap();
    // recycle edge closes a cycle and must be accepted
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1))
        .unwrap();
    assert_eq!(fs.streams.len(), 4);
}

#[test]
fn connect_rejects_out_of_arity_ports() {
    let mut fs = Flowsheet::new("t");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params("water", 1.0)).unwrap();
    let flash = fs
        .add_unit(UnitKind::Flash, flash_params(350.0, 101_325.0))
        .unwrap();
    let err = fs
        .connect(PortRef::new(&feed, 1), PortRef::new(&flash, 0))
        .unwrap_err();
    assert!(matches!(err, CoreError::InvalidPort { .. }));
}

#[test]
fn cascade_delete_removes_unit_and_incident_streams() {
    let mut fs = Flowsheet::new("t");
    fs.add_component("water").unwrap();
    let f1 = fs.add_unit(UnitKind::Feed, feed_params("water", 1.0)).unwrap();
    let f2 = fs.add_unit(UnitKind::Feed, feed_params("water", 1.0)).unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&f1, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&f2, 0), PortRef::new(&mixer, 1)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&product, 0))
        .unwrap();

    let removed = fs.cascade_delete(&mixer).unwrap();
    assert_eq!(removed.len(), 4); // 1 unit + 3 streams
    assert!(fs.streams.is_empty());
    // endpoints of every remaining stream still exist
    for s in fs.streams.values() {
        assert!(fs.units.contains_key(&s.from.unit));
        assert!(fs.units.contains_key(&s.to.unit));
    }
    // freed ports are unoccupied again
    let p2 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&f1, 0), PortRef::new(&p2, 0)).unwrap();

    assert!(matches!(
        fs.cascade_delete(&mixer),
        Err(CoreError::UnknownUnit(_))
    ));
}

#[test]
fn cascade_delete_isolated_unit_removes_only_it() {
    let mut fs = Flowsheet::new("t");
    let heater = fs
        .add_unit(
            UnitKind::Heater,
            Params::from([("T_out".to_string(), ParamValue::Number(350.0))]),
        )
        .unwrap();
    let removed = fs.cascade_delete(&heater).unwrap();
    assert_eq!(removed, vec![heater]);
}

mod mutation_closure {
    use super::*;
    use proptest::prelude::*;

    #[derive(Debug, Clone)]
    enum Op {
        AddUnit(u8),
        Connect(u8, u8),
        Delete(u8),
    }

    fn op_strategy() -> impl Strategy<Value = Op> {
        prop_oneof![
            (0u8..6).prop_map(Op::AddUnit),
            (any::<u8>(), any::<u8>()).prop_map(|(a, b)| Op::Connect(a, b)),
            any::<u8>().prop_map(Op::Delete),
        ]
    }

    fn kind_for(tag: u8) -> (UnitKind, Params) {
        match tag % 6 {
            0 => (UnitKind::Feed, feed_params("water", 10.0)),
            1 => (UnitKind::Product, Params::new()),
            2 => (UnitKind::Mixer, Params::new()),
            3 => (
                UnitKind::Splitter,
                Params::from([("fractions".to_string(), ParamValue::List(vec![0.5, 0.5]))]),
            ),
            4 => (
                UnitKind::Heater,
                Params::from([("T_out".to_string(), ParamValue::Number(330.0))]),
            ),
            _ => (UnitKind::Flash, flash_params(340.0, 101_325.0)),
        }
    }

    proptest! {
        // any sequence of individually-successful mutations keeps the type
        // invariants intact
        #[test]
        fn random_mutation_sequences_preserve_invariants(ops in prop::collection::vec(op_strategy(), 1..60)) {
            let mut fs = Flowsheet::new("prop");
            fs.add_component("water").unwrap();
            for op in ops {
                match op {
                    Op::AddUnit(tag) => {
                        let (kind, params) = kind_for(tag);
                        let _ = fs.add_unit(kind, params);
                    }
                    Op::Connect(a, b) => {
                        let ids: Vec<String> = fs.units.keys().cloned().collect();
                        if ids.is_empty() { continue; }
                        let from = &ids[a as usize % ids.len()];
                        let to = &ids[b as usize % ids.len()];
                        let _ = fs.connect(
                            PortRef::new(from, (a / 16) as usize % 2),
                            PortRef::new(to, (b / 16) as usize % 2),
                        );
                    }
                    Op::Delete(a) => {
                        let ids: Vec<String> = fs.units.keys().cloned().collect();
                        if ids.is_empty() { continue; }
                        let id = ids[a as usize % ids.len()].clone();
                        let _ = fs.cascade_delete(&id);
                    }
                }
                prop_assert!(fs.check_invariants().is_ok());
                for s in fs.streams.values() {
                    prop_assert!(fs.units.contains_key(&s.from.unit));
                    prop_assert!(fs.units.contains_key(&s.to.unit));
                }
            }
            // round-trip identity on the final state
            let text = flowsheet_core::io::to_json_string(&fs);
            let loaded = flowsheet_core::io::load_design_str(&text).unwrap();
            prop_assert_eq!(fs, loaded);
        }
    }
}
