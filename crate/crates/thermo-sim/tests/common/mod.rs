#![allow(dead_code)]

use std::collections::BTreeMap;

use flowsheet_core::{Flowsheet, ParamValue, Params, PortRef, UnitKind};

pub fn num(v: f64) -> ParamValue {
    ParamValue::Number(v)
}

pub fn feed_params(flows: &[(&str, f64)], t: f64, p: f64) -> Params {
    let map: BTreeMap<String, f64> = flows.iter().map(|(c, f)| (c.to_string(), *f)).collect();
    Params::from([
        ("flows".to_string(), ParamValue::Map(map)),
        ("T".to_string(), num(t)),
        ("P".to_string(), num(p)),
    ])
}

/// Feed(water 100 kmol/h, 300 K) -> Heater(350 K) -> Product.
pub fn heater_chain() -> Flowsheet {
    let mut fs = Flowsheet::new("heater-chain");
    fs.add_component("water").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0))
        .unwrap();
    let heater = fs
        .add_unit(UnitKind::Heater, Params::from([("T_out".to_string(), num(350.0))]))
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&heater, 0)).unwrap();
    fs.connect(PortRef::new(&heater, 0), PortRef::new(&product, 0)).unwrap();
    fs
}

/// Feed(100) -> Mixer <- recycle; Mixer -> Splitter(50% product, 50% back).
pub fn mixer_splitter_recycle(recycle_fraction: f64) -> Flowsheet {
    let mut fs = Flowsheet::new("mixer-splitter-recycle");
    fs.add_component("water").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0))
        .unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([(
                "fractions".to_string(),
                ParamValue::List(vec![1.0 - recycle_fraction, recycle_fraction]),
            )]),
        )
        .unwrap();
    let product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&product, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1)).unwrap();
    fs
}

/// Benzene-toluene flash with part of the liquid recycled to the mixer.
pub fn flash_liquid_recycle() -> Flowsheet {
    let mut fs = Flowsheet::new("flash-liquid-recycle");
    fs.add_component("benzene").unwrap();
    fs.add_component("toluene").unwrap();
    let feed = fs
        .add_unit(
            UnitKind::Feed,
            feed_params(&[("benzene", 50.0), ("toluene", 50.0)], 330.0, 101_325.0),
        )
        .unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let heater = fs
        .add_unit(UnitKind::Heater, Params::from([("T_out".to_string(), num(368.0))]))
        .unwrap();
    let flash = fs
        .add_unit(
            UnitKind::Flash,
            Params::from([("T".to_string(), num(368.0)), ("P".to_string(), num(101_325.0))]),
        )
        .unwrap();
    let vapor_product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let splitter = fs
        .add_unit(
            UnitKind::Splitter,
            Params::from([("fractions".to_string(), ParamValue::List(vec![0.7, 0.3]))]),
        )
        .unwrap();
    let liquid_product = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&mixer, 0)).unwrap();
    fs.connect(PortRef::new(&mixer, 0), PortRef::new(&heater, 0)).unwrap();
    fs.connect(PortRef::new(&heater, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&vapor_product, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&splitter, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 0), PortRef::new(&liquid_product, 0)).unwrap();
    fs.connect(PortRef::new(&splitter, 1), PortRef::new(&mixer, 1)).unwrap();
    fs
}

/// Ethylene hydration reactor with unconverted feed recycled.
pub fn reactor_recycle() -> Flowsheet {
    let mut fs = Flowsheet::new("reactor-recycle");
    fs.add_component("ethylene").unwrap();
    fs.add_component("ethanol").unwrap();
    let feed = fs
        .add_unit(
            UnitKind::Feed,
            feed_params(&[("ethylene", 100.0), ("ethanol", 0.0)], 300.0, 2_000_000.0),
        )
        .unwrap();
    let mixer = fs.add_unit(UnitKind::Mixer, Params::new()).unwrap();
    let reactor = fs
        .add_unit(
            UnitKind::ConversionReactor,
            Params::from([
                (
                    "stoichiometry".to_string(),
                    ParamValue::Map(
                        [("ethylene".to_string(), -1.0), ("ethanol".to_string(), 1.0)].into(),
                    ),
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
                ParamValue::Map(
                    [("ethylene".to_string(), 0.95), ("ethanol".to_string(), 0.02)].into(),
                ),
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
