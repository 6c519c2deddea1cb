//! Schedule, value, bonus, UCB, pool, revisit, termination and final
//! selection arithmetic, checked against hand-derived values and
//! independent oracle recomputation.

mod common;

use common::*;
use emcts::{
    alpha, check_termination, combined_value, final_select, psi, select, select_revisit,
    ucb_enhanced, ucb_from_parts, update_pool, NodeId, SearchConfig, SearchState,
    TerminationReason, ROOT,
};

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

#[test]
fn alpha_schedule_endpoints_and_midpoint() {
    let mut c = cfg();
    c.alpha0 = 0.3;
    c.alpha_max = 0.8;
    c.max_iterations = 10;
    assert_eq!(alpha(0, &c), 0.3);
    assert_eq!(alpha(10, &c), 0.8);
    assert_eq!(alpha(25, &c), 0.8);
    assert!((alpha(5, &c) - 0.55).abs() < 1e-12);
}

#[test]
fn combined_value_blends_immediate_and_potential() {
    let mut state = SearchState::empty();
    let id = add_scored_node(&mut state, ROOT, 50.0);
    {
        let node = state.tree.get_mut(id);
        node.v_imm = 0.5;
        node.v_pot = 0.8;
    }

    // alpha == 1: immediate only
    let mut c = cfg();
    c.alpha0 = 1.0;
    c.alpha_max = 1.0;
    assert_eq!(combined_value(state.tree.get(id), 0, &c), 0.5);

    // alpha == 0: potential only
    c.alpha0 = 0.0;
    c.alpha_max = 0.0;
    assert_eq!(combined_value(state.tree.get(id), 0, &c), 0.8);

    // alpha == 0.6 -> 0.6*0.5 + 0.4*0.8 = 0.62
    c.alpha0 = 0.6;
    c.alpha_max = 0.6;
    assert!((combined_value(state.tree.get(id), 0, &c) - 0.62).abs() < 1e-12);
}

#[test]
fn psi_features_are_zero_for_fresh_shallow_nodes() {
    let mut state = SearchState::empty();
    let id = add_scored_node(&mut state, ROOT, 50.0);
    // depth-1 node with flat history and no children: only the depth term
    let c = cfg();
    let expected_depth_term = c.w_d * (1.0 / c.d_cap as f64);
    assert!((psi(state.tree.get(id), &state.tree, &c) - expected_depth_term).abs() < 1e-12);

    // root itself: depth 0, no history -> exactly 0
    assert_eq!(psi(state.tree.get(ROOT), &state.tree, &c), 0.0);
}

#[test]
fn psi_rewards_recent_improvement() {
    let mut state = SearchState::empty();
    let id = add_scored_node(&mut state, ROOT, 50.0);
    state.tree.get_mut(id).score_history = vec![50.0, 60.0];
    let mut c = cfg();
    c.w_r = 0.1;
    c.w_v = 0.0;
    c.w_d = 0.0;
    // improvement of 10 points scaled by w_r -> 0.01
    assert!((psi(state.tree.get(id), &state.tree, &c) - 0.01).abs() < 1e-12);

    // a drop contributes nothing
    state.tree.get_mut(id).score_history = vec![60.0, 50.0];
    assert_eq!(psi(state.tree.get(id), &state.tree, &c), 0.0);
}

#[test]
fn psi_depth_feature_saturates_at_cap() {
    let mut state = SearchState::empty();
    let mut parent = ROOT;
    for _ in 0..8 {
        parent = add_scored_node(&mut state, parent, 50.0);
    }
    let mut c = cfg();
    c.w_r = 0.0;
    c.w_v = 0.0;
    c.w_d = 0.05;
    c.d_cap = 5;
    // depth 8 > cap 5 -> feature saturates at w_d
    assert!((psi(state.tree.get(parent), &state.tree, &c) - 0.05).abs() < 1e-12);
}

#[test]
fn ucb_matches_the_worked_example() {
    // V_comb = 0.5, c(t) = 1, v_p = 10, v_i = 2, psi = 0
    let expected = 0.5 + (10.0_f64.ln() / 2.0).sqrt();
    assert!((ucb_from_parts(0.5, 1.0, 10, 2, 0.0) - expected).abs() < 1e-9);
    assert!((expected - 1.572_983).abs() < 1e-6);
    // additive bonus
    assert!((ucb_from_parts(0.5, 1.0, 10, 2, 0.1) - (expected + 0.1)).abs() < 1e-9);
    // all terms vanish
    assert_eq!(ucb_from_parts(0.0, 0.0, 10, 2, 0.0), 0.0);
}

#[test]
fn ucb_enhanced_agrees_with_direct_formula() {
    let mut state = SearchState::empty();
    let id = add_scored_node(&mut state, ROOT, 50.0);
    {
        let node = state.tree.get_mut(id);
        node.v_imm = 0.5;
        node.v_pot = 0.5;
        node.visits = 2;
    }
    state.tree.get_mut(ROOT).visits = 10;
    let mut c = cfg();
    c.c0 = 1.0; // t = 0 -> c(t) = 1
    c.w_r = 0.0;
    c.w_v = 0.0;
    c.w_d = 0.0;
    let terms = ucb_enhanced(state.tree.get(id), &state.tree, 0, &c);
    let expected = 0.5 + (10.0_f64.ln() / 2.0).sqrt();
    assert!((terms.total - expected).abs() < 1e-9, "{}", terms.total);
}

#[test]
fn select_prefers_less_visited_siblings_then_smaller_ids() {
    let mut state = three_node_state([50.0, 50.0, 50.0]);
    // equal values and visits: smallest id wins
    let (chosen, _) = select(&state, &cfg()).unwrap();
    assert_eq!(chosen, NodeId(1));

    // bump visits on n1: exploration term now favors n2
    state.tree.get_mut(NodeId(1)).visits = 5;
    let (chosen, _) = select(&state, &cfg()).unwrap();
    assert_eq!(chosen, NodeId(2));
}

#[test]
fn select_matches_brute_force_oracle_on_constructed_tree() {
    let mut state = three_node_state([40.0, 70.0, 55.0]);
    state.tree.get_mut(NodeId(1)).visits = 3;
    state.tree.get_mut(NodeId(2)).visits = 1;
    state.tree.get_mut(NodeId(3)).visits = 2;
    state.tree.get_mut(ROOT).visits = 6;
    state.t = 2;

    let c = cfg();
    let oracle = state
        .tree
        .evaluated()
        .map(|n| (ucb_enhanced(n, &state.tree, state.t, &c).total, n.id))
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, id)| id)
        .unwrap();
    let (chosen, _) = select(&state, &c).unwrap();
    assert_eq!(chosen, oracle);
}

#[test]
fn pool_holds_second_and_third_ranked_non_revisited_nodes() {
    let mut state = SearchState::empty();
    let n90 = add_scored_node(&mut state, ROOT, 90.0);
    let n80 = add_scored_node(&mut state, ROOT, 80.0);
    let n70 = add_scored_node(&mut state, ROOT, 70.0);
    let n60 = add_scored_node(&mut state, ROOT, 60.0);

    update_pool(&mut state);
    assert_eq!(state.pool, vec![n80, n70]);

    state.tree.get_mut(n80).revisited = true;
    update_pool(&mut state);
    assert_eq!(state.pool, vec![n70, n60]);
    assert!(!state.pool.contains(&n90));
}

#[test]
fn pool_is_small_for_small_trees() {
    let mut state = SearchState::empty();
    add_scored_node(&mut state, ROOT, 42.0);
    update_pool(&mut state);
    assert!(state.pool.is_empty());

    add_scored_node(&mut state, ROOT, 52.0);
    update_pool(&mut state);
    assert_eq!(state.pool.len(), 1);
}

#[test]
fn revisit_takes_largest_potential_gap_with_id_tiebreak() {
    let mut state = SearchState::empty();
    let a = add_scored_node(&mut state, ROOT, 30.0);
    let b = add_scored_node(&mut state, ROOT, 70.0);
    {
        let node = state.tree.get_mut(a);
        node.v_imm = 0.3;
        node.v_pot = 0.8; // gap 0.5
    }
    {
        let node = state.tree.get_mut(b);
        node.v_imm = 0.7;
        node.v_pot = 0.9; // gap 0.2
    }
    state.pool = vec![a, b];
    assert_eq!(select_revisit(&mut state), Some(a));
    assert!(state.tree.get(a).revisited);

    // equal gaps: smaller id
    let mut state = SearchState::empty();
    let a = add_scored_node(&mut state, ROOT, 30.0);
    let b = add_scored_node(&mut state, ROOT, 40.0);
    for id in [a, b] {
        let node = state.tree.get_mut(id);
        node.v_imm = 0.4;
        node.v_pot = 0.6;
    }
    state.pool = vec![a, b];
    assert_eq!(select_revisit(&mut state), Some(a));

    // single-member pool returns that member; empty pool returns none
    let mut state = SearchState::empty();
    let only = add_scored_node(&mut state, ROOT, 10.0);
    state.pool = vec![only];
    assert_eq!(select_revisit(&mut state), Some(only));
    state.pool.clear();
    assert_eq!(select_revisit(&mut state), None);
}

#[test]
fn termination_rules_fire_in_order() {
    let c = cfg();

    // target reached
    let mut state = three_node_state([86.0, 10.0, 20.0]);
    state.best_trace = vec![86.0];
    assert_eq!(
        check_termination(&state, &c),
        Some(TerminationReason::TargetReached)
    );

    // iteration limit
    let mut state = three_node_state([50.0, 10.0, 20.0]);
    state.t = c.max_iterations;
    assert_eq!(
        check_termination(&state, &c),
        Some(TerminationReason::IterationLimit)
    );

    // stagnation: flat trace over the window with an exhausted pool
    let mut state = three_node_state([70.0, 10.0, 20.0]);
    state.best_trace = vec![70.0, 70.1, 70.2, 70.3];
    state.t = 3;
    state.pool.clear();
    assert_eq!(
        check_termination(&state, &c),
        Some(TerminationReason::Stagnation)
    );

    // same trace with a non-empty pool: not terminal (revisit instead)
    state.pool = vec![NodeId(2)];
    assert_eq!(check_termination(&state, &c), None);

    // converged: concentrated visits + stable recent best scores
    let mut state = three_node_state([50.0, 49.0, 48.0]);
    state.pool = vec![NodeId(2)]; // keeps stagnation from matching first
    for _ in 0..8 {
        add_scored_node(&mut state, NodeId(1), 50.0);
    }
    state.best_trace = vec![50.0, 50.2, 50.3, 50.4, 50.4, 50.4];
    state.t = 5;
    assert_eq!(
        check_termination(&state, &c),
        Some(TerminationReason::Converged)
    );

    // growing trace terminates nothing
    let mut state = three_node_state([50.0, 10.0, 20.0]);
    state.best_trace = vec![50.0, 55.0, 61.0, 70.0];
    state.t = 3;
    assert_eq!(check_termination(&state, &c), None);
}

#[test]
fn final_select_reproduces_hand_computed_example() {
    // A: S=90, 8 of 10 leaf visits, stability 1 -> 0.7*0.9+0.2*0.8+0.1 = 0.89
    // B: S=60, 2 of 10 leaf visits, stability 1 -> 0.7*0.6+0.2*0.2+0.1 = 0.56
    let mut state = SearchState::empty();
    let a = add_scored_node(&mut state, ROOT, 90.0);
    let b = add_scored_node(&mut state, ROOT, 60.0);
    state.tree.get_mut(a).visits = 8;
    state.tree.get_mut(b).visits = 2;
    assert_eq!(final_select(&state, &cfg()), Some(a));

    // single leaf: that leaf
    let mut single = SearchState::empty();
    let only = add_scored_node(&mut single, ROOT, 10.0);
    assert_eq!(final_select(&single, &cfg()), Some(only));

    // equal scores: the higher-visit leaf wins
    let mut state = SearchState::empty();
    let a = add_scored_node(&mut state, ROOT, 75.0);
    let b = add_scored_node(&mut state, ROOT, 75.0);
    state.tree.get_mut(b).visits = 4;
    assert_eq!(final_select(&state, &cfg()), Some(b));
    let _ = a;
}
