//! The golden flowsheet corpus: 16 hand-built configurations (4 with
//! recycles) used as the regression baseline for simulator conservation and
//! HTTP boundary equivalence.

use std::collections::BTreeMap;

use flowsheet_core::{Flowsheet, ParamValue, Params, PortRef, PropertyMethod, UnitKind};

fn num(v: f64) -> ParamValue {
    ParamValue::Number(v)
}

fn feed_params(flows: &[(&str, f64)], t: f64, p: f64) -> Params {
    let map: BTreeMap<String, f64> = flows.iter().map(|(c, f)| (c.to_string(), *f)).collect();
    Params::from([
        ("flows".to_string(), ParamValue::Map(map)),
        ("T".to_string(), num(t)),
        ("P".to_string(), num(p)),
    ])
}

fn heater_params(t_out: f64) -> Params {
    Params::from([("T_out".to_string(), num(t_out))])
}

fn flash_params(t: f64, p: f64) -> Params {
    Params::from([("T".to_string(), num(t)), ("P".to_string(), num(p))])
}

fn chain(fs: &mut Flowsheet, units: &[&str]) {
    for pair in units.windows(2) {
        fs.connect(PortRef::new(pair[0], 0), PortRef::new(pair[1], 0))
            .expect("chain connection");
    }
}

fn heater_chain() -> Flowsheet {
    let mut fs = Flowsheet::new("g01-heater-chain");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0)).unwrap();
    let heater = fs.add_unit(UnitKind::Heater, heater_params(350.0)).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    chain(&mut fs, &[&feed, &heater, &product]);
    fs
}

fn pump_valve_chain() -> Flowsheet {
    let mut fs = Flowsheet::new("g02-pump-valve");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("water", 75.0)], 298.15, 101_325.0)).unwrap();
    let pump = fs.add_unit(UnitKind::Pump, Params::from([("P_out".to_string(), num(200_000.0))])).unwrap();
    let valve = fs.add_unit(UnitKind::Valve, Params::from([("P_out".to_string(), num(120_000.0))])).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    chain(&mut fs, &[&feed, &pump, &valve, &product]);
    fs
}

fn flash_benzene_toluene() -> Flowsheet {
    let mut fs = Flowsheet::new("g03-flash-bt");
    fs.add_component("benzene").unwrap();
    fs.add_component("toluene").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("benzene", 60.0), ("toluene", 40.0)], 330.0, 101_325.0))
        .unwrap();
    let flash = fs.add_unit(UnitKind::Flash, flash_params(368.0, 101_325.0)).unwrap();
    let vapor = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let liquid = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&liquid, 0)).unwrap();
    fs
}

fn flash_ethanol_water_margules() -> Flowsheet {
    let mut fs = Flowsheet::new("g04-flash-ew");
    fs.add_component("ethanol").unwrap();
    fs.add_component("water").unwrap();
    fs.property_method = PropertyMethod::margules_with_defaults(&fs.components.clone());
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("ethanol", 50.0), ("water", 50.0)], 350.0, 101_325.0))
        .unwrap();
    let flash = fs.add_unit(UnitKind::Flash, flash_params(360.0, 101_325.0)).unwrap();
    let vapor = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let liquid = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&liquid, 0)).unwrap();
    fs
}

fn component_splitter_chain() -> Flowsheet {
    let mut fs = Flowsheet::new("g05-csplit");
    fs.add_component("benzene").unwrap();
    fs.add_component("toluene").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("benzene", 55.0), ("toluene", 45.0)], 320.0, 101_325.0))
        .unwrap();
    let csplit = fs
        .add_unit(
            UnitKind::ComponentSplitter,
            Params::from([(
                "split_fractions".to_string(),
                ParamValue::Map([("benzene".to_string(), 0.95), ("toluene".to_string(), 0.03)].into()),
            )]),
        )
        .unwrap();
    let light = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let heavy = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&csplit, 0)).unwrap();
    fs.connect(PortRef::new(&csplit, 0), PortRef::new(&light, 0)).unwrap();
    fs.connect(PortRef::new(&csplit, 1), PortRef::new(&heavy, 0)).unwrap();
    fs
}

fn reactor_chain() -> Flowsheet {
    let mut fs = Flowsheet::new("g06-reactor");
    fs.add_component("ethylene").unwrap();
    fs.add_component("ethanol").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("ethylene", 100.0), ("ethanol", 0.0)], 300.0, 2_000_000.0))
        .unwrap();
    let reactor = fs
        .add_unit(
            UnitKind::ConversionReactor,
            Params::from([
                (
                    "stoichiometry".to_string(),
                    ParamValue::Map([("ethylene".to_string(), -1.0), ("ethanol".to_string(), 1.0)].into()),
                ),
                ("key_component".to_string(), ParamValue::Text("ethylene".into())),
                ("conversion".to_string(), num(0.6)),
            ]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    chain(&mut fs, &[&feed, &reactor, &product]);
    fs
}

fn two_feed_mixer() -> Flowsheet {
    let mut fs = Flowsheet::new("g07-two-feeds");
    fs.add_component("water").unwrap();
    fs.add_component("ethanol").unwrap();
    let f1 = fs.add_unit(UnitKind::Feed, feed_params(&[("water", 70.0)], 300.0, 150_000.0)).unwrap();
    let f2 = fs.add_unit(UnitKind::Feed, feed_params(&[("ethanol", 30.0)], 330.0, 120_000.0)).unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&f1, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&f2, 0), PortRef::new(&mixer, 1)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&product, 0)).unwrap();
    fs
}

fn splitter_tree() -> Flowsheet {
    let mut fs = Flowsheet::new("g08-splitter");
    fs.add_component("n-hexane").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("n-hexane", 120.0)], 320.0, 101_325.0)).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.3, 0.7]))]),
        )
        .unwrap();
    let p1 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let p2 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&p1, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&p2, 0)).unwrap();
    fs
}

fn heater_flash_series() -> Flowsheet {
    let mut fs = Flowsheet::new("g09-heater-flash");
    fs.add_component("benzene").unwrap();
    fs.add_component("n-hexane").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("benzene", 20.0), ("n-hexane", 80.0)], 300.0, 101_325.0))
        .unwrap();
    let heater = fs.add_unit(UnitKind::Heater, heater_params(345.0)).unwrap();
    let flash = fs.add_unit(UnitKind::Flash, flash_params(345.0, 101_325.0)).unwrap();
    let vapor = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let liquid = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&heater, 0)).unwrap();
    fs.connect(PortRef::new(&heater, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&liquid, 0)).unwrap();
    fs
}

/// Feed -> Mixer <- recycle; Mixer -> Splitter (half to product, half back).
pub fn mixer_splitter_recycle() -> Flowsheet {
    let mut fs = Flowsheet::new("g10-recycle-mixer");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0)).unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.5, 0.5]))]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&product, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1)).unwrap();
    fs
}

fn flash_liquid_recycle() -> Flowsheet {
    let mut fs = Flowsheet::new("g11-recycle-flash");
    fs.add_component("benzene").unwrap();
    fs.add_component("toluene").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("benzene", 50.0), ("toluene", 50.0)], 330.0, 101_325.0))
        .unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let heater = fs.add_unit(UnitKind::Heater, heater_params(368.0)).unwrap();
    let flash = fs.add_unit(UnitKind::Flash, flash_params(368.0, 101_325.0)).unwrap();
    let vapor = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.7, 0.3]))]),
        )
        .unwrap();
    let liquid = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&heater, 0)).unwrap();
    fs.connect(PortRef::new(&heater, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&liquid, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1)).unwrap();
    fs
}

fn reactor_recycle() -> Flowsheet {
    let mut fs = Flowsheet::new("g12-recycle-reactor");
    fs.add_component("ethylene").unwrap();
    fs.add_component("ethanol").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("ethylene", 100.0), ("ethanol", 0.0)], 300.0, 2_000_000.0))
        .unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let reactor = fs
        .add_unit(
            UnitKind::ConversionReactor,
            Params::from([
                (
                    "stoichiometry".to_string(),
                    ParamValue::Map([("ethylene".to_string(), -1.0), ("ethanol".to_string(), 1.0)].into()),
                ),
                ("key_component".to_string(), ParamValue::Text("ethylene".into())),
                ("conversion".to_string(), num(0.6)),
            ]),
        )
        .unwrap();
    let csplit = fs
        .add_unit(
            UnitKind::ComponentSplitter,
            Params::from([(
                "split_fractions".to_string(),
                ParamValue::Map([("ethylene".to_string(), 0.95), ("ethanol".to_string(), 0.02)].into()),
            )]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&reactor, 0)).unwrap();
    fs.connect(PortRef::new(&reactor, 0), PortRef::new(&csplit, 0)).unwrap();
    fs.connect(PortRef::new(&csplit, 0), PortRef::new(&mixer, 1)).unwrap();
    fs.connect(PortRef::new(&csplit, 1), PortRef::new(&product, 0)).unwrap();
    fs
}

fn nested_recycles() -> Flowsheet {
    let mut fs = Flowsheet::new("g13-recycle-nested");
    fs.add_component("water").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0)).unwrap();
    let m1 = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let m2 = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.6, 0.2, 0.2]))]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&m1, 0)).unwrap();
    fs.connect(PortRef::new(&m1, 0), PortRef::new(&m2, 0)).unwrap();
    fs.connect(PortRef::new(&m2, 0), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&product, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&m2, 1)).unwrap();
    fs.connect(PortRef::new(&splitter, 2), PortRef::new(&m1, 1)).unwrap();
    fs
}

fn methanol_heat() -> Flowsheet {
    let mut fs = Flowsheet::new("g14-methanol-heat");
    fs.add_component("methanol").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("methanol", 40.0)], 298.15, 101_325.0)).unwrap();
    let heater = fs.add_unit(UnitKind::Heater, heater_params(320.0)).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    chain(&mut fs, &[&feed, &heater, &product]);
    fs
}

fn propane_valve() -> Flowsheet {
    let mut fs = Flowsheet::new("g15-propane-valve");
    fs.add_component("propane").unwrap();
    let feed = fs.add_unit(UnitKind::Feed, feed_params(&[("propane", 60.0)], 240.0, 1_000_000.0)).unwrap();
    let valve = fs.add_unit(UnitKind::Valve, Params::from([("P_out".to_string(), num(300_000.0))])).unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    chain(&mut fs, &[&feed, &valve, &product]);
    fs
}

fn ternary_flash() -> Flowsheet {
    let mut fs = Flowsheet::new("g16-ternary-flash");
    fs.add_component("benzene").unwrap();
    fs.add_component("toluene").unwrap();
    fs.add_component("n-hexane").unwrap();
    let feed = fs
        .add_unit(
            UnitKind::Feed,
            feed_params(
                &[("benzene", 40.0), ("toluene", 35.0), ("n-hexane", 25.0)],
                330.0,
                101_325.0,
            ),
        )
        .unwrap();
    let flash = fs.add_unit(UnitKind::Flash, flash_params(362.0, 101_325.0)).unwrap();
    let vapor = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let liquid = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&liquid, 0)).unwrap();
    fs
}

/// The whole corpus in id order.
pub fn golden_corpus() -> Vec<Flowsheet> {
    vec![
        heater_chain(),
        pump_valve_chain(),
        flash_benzene_toluene(),
        flash_ethanol_water_margules(),
        component_splitter_chain(),
        reactor_chain(),
        two_feed_mixer(),
        splitter_tree(),
        heater_flash_series(),
        mixer_splitter_recycle(),
        flash_liquid_recycle(),
        reactor_recycle(),
        nested_recycles(),
        methanol_heat(),
        propane_valve(),
        ternary_flash(),
    ]
}

/// Ids of the corpus members containing recycle loops.
pub fn recycle_ids() -> Vec<&'static str> {
    vec![
        "g10-recycle-mixer",
        "g11-recycle-flash",
        "g12-recycle-reactor",
        "g13-recycle-nested",
    ]
}
