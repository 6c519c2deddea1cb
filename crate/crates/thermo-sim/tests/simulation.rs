mod common;

use common::*;
use flowsheet_core::{Flowsheet, Params, PortRef, UnitKind};
use thermo_sim::{run_simulation, run_simulation_with, FailureReason, SimOptions};

#[test]
fn heater_chain_converges_in_one_pass() {
    let result = run_simulation(&heater_chain(), 1e-6, 200);
    assert!(result.converged);
    assert_eq!(result.iterations, 1);
    assert!(result.component_balance_residual <= 1e-12);
    assert!(result.tear_streams.is_empty());
    // heater outlet reached the product at 350 K
    let product_inlet = result.streams.get("s2").unwrap();
    assert_eq!(product_inlet.temperature, 350.0);
    assert_eq!(product_inlet.flow("water"), 100.0);
    assert!((result.duties["heater1"] - 376_500.0).abs() < 1e-6);
}

#[test]
fn mixer_splitter_recycle_doubles_internal_flow() {
    // closed form: internal flow = feed / (1 - recycle) = 100 / 0.5 = 200
    let fs = mixer_splitter_recycle(0.5);
    let result = run_simulation(&fs, 1e-6, 200);
    assert!(result.converged, "{:?}", result.failure_reason);
    let mixer_out = result.streams.get("s2").unwrap();
    assert!(
        (mixer_out.total_flow() - 200.0).abs() < 1e-4,
        "total = {}",
        mixer_out.total_flow()
    );
    assert!(result.component_balance_residual <= 1e-8);
    assert_eq!(result.tear_streams.len(), 1);
}

#[test]
fn out_of_range_flash_fails_with_property_reason() {
    let mut fs = Flowsheet::new("hot-flash");
    fs.add_component("water").unwrap();
    let feed = fs
        .add_unit(UnitKind::Feed, feed_params(&[("water", 100.0)], 300.0, 101_325.0))
        .unwrap();
    let flash = fs
        .add_unit(
            UnitKind::Flash,
            Params::from([
                ("T".to_string(), num(500.0)),
                ("P".to_string(), num(101_325.0)),
            ]),
        )
        .unwrap();
    let p1 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    let p2 = fs.add_unit(UnitKind::Product, Params::new()).unwrap();
    fs.connect(PortRef::new(&feed, 0), PortRef::new(&flash, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 0), PortRef::new(&p1, 0)).unwrap();
    fs.connect(PortRef::new(&flash, 1), PortRef::new(&p2, 0)).unwrap();

    let result = run_simulation(&fs, 1e-6, 200);
    assert!(!result.converged);
    assert_eq!(result.failure_reason, Some(FailureReason::PropertyRangeExceeded));
}

#[test]
fn invalid_topology_is_a_result_not_an_error() {
    let fs = Flowsheet::new("empty");
    let result = run_simulation(&fs, 1e-6, 200);
    assert!(!result.converged);
    assert_eq!(result.failure_reason, Some(FailureReason::TopologyInvalid));
}

#[test]
fn converged_results_close_component_balances() {
    for fs in [
        heater_chain(),
        mixer_splitter_recycle(0.5),
        mixer_splitter_recycle(0.9),
        flash_liquid_recycle(),
        reactor_recycle(),
    ] {
        let result = run_simulation(&fs, 1e-6, 200);
        assert!(result.converged, "{} failed: {:?}", fs.id, result.failure_detail);
        assert!(
            result.component_balance_residual <= 1e-8,
            "{}: residual {}",
            fs.id,
            result.component_balance_residual
        );
        assert!(result.tear_residual <= 1e-6);
    }
}

#[test]
fn simulation_is_deterministic() {
    for fs in [mixer_splitter_recycle(0.5), flash_liquid_recycle(), reactor_recycle()] {
        let a = run_simulation(&fs, 1e-6, 200);
        let b = run_simulation(&fs, 1e-6, 200);
        assert_eq!(a, b, "{}", fs.id);
        // bit-identical serialized form as well
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}

#[test]
fn wegstein_never_needs_more_iterations_than_direct_substitution() {
    for fs in [
        mixer_splitter_recycle(0.5),
        mixer_splitter_recycle(0.8),
        mixer_splitter_recycle(0.9),
        flash_liquid_recycle(),
        reactor_recycle(),
    ] {
        let accelerated = run_simulation_with(
            &fs,
            &SimOptions { tol: 1e-6, max_iter: 500, wegstein: true },
        );
        let direct = run_simulation_with(
            &fs,
            &SimOptions { tol: 1e-6, max_iter: 500, wegstein: false },
        );
        assert!(accelerated.converged, "{}", fs.id);
        assert!(direct.converged, "{}", fs.id);
        assert!(
            accelerated.iterations <= direct.iterations,
            "{}: wegstein {} vs direct {}",
            fs.id,
            accelerated.iterations,
            direct.iterations
        );
    }
}

#[test]
fn reactor_recycle_conserves_atoms_through_generation() {
    let fs = reactor_recycle();
    let result = run_simulation(&fs, 1e-6, 200);
    assert!(result.converged);
    // at steady state every mole of ethylene fed leaves as product
    // (recycle loop: generation accounted in the balance)
    assert!(result.component_balance_residual <= 1e-8);
}

#[test]
fn unconverging_loop_reports_not_converged() {
    // mass amplifier: splitter keeps 99% in the loop with a reactor that
    // doubles the key component every pass has no bounded fixed point when
    // combined with a huge feed, but a 200-iteration cap with a tight
    // tolerance on a slowly contracting loop is the simplest forced failure:
    // contraction ratio 0.999 needs ~13,800 direct iterations for 1e-6.
    let fs = mixer_splitter_recycle(0.999);
    let result = run_simulation_with(
        &fs,
        &SimOptions { tol: 1e-12, max_iter: 5, wegstein: false },
    );
    assert!(!result.converged);
    assert_eq!(result.failure_reason, Some(FailureReason::NotConverged));
    assert_eq!(result.iterations, 5);
    assert!(result.tear_residual > 1e-12);
    assert!(result.worst_tear().is_some());
}
