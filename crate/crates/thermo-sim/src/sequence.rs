//! Calculation ordering: SCC condensation, tear-stream selection and a
//! deterministic topological sort.

use std::collections::{BTreeMap, BTreeSet};

use flowsheet_core::Flowsheet;

/// A unit calculation sequence plus the streams torn to break recycles.
#[derive(Debug, Clone, PartialEq)]
pub struct CalcOrder {
    pub sequence: Vec<String>,
    pub tears: Vec<String>,
}

/// Edges as (stream id, from unit, to unit), iterated in stream-id order so
/// every downstream choice is deterministic.
fn edges(fs: &Flowsheet) -> Vec<(String, String, String)> {
    fs.streams
        .values()
        .map(|s| (s.id.clone(), s.from.unit.clone(), s.to.unit.clone()))
        .collect()
}

/// Iterative Tarjan SCC; roots visited in unit-id order.
fn strongly_connected_components(fs: &Flowsheet) -> Vec<Vec<String>> {
    let units: Vec<String> = fs.units.keys().cloned().collect();
    let index_of: BTreeMap<&str, usize> = units
        .iter()
        .enumerate()
        .map(|(i, u)| (u.as_str(), i))
        .collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); units.len()];
    for (_, from, to) in edges(fs) {
        succ[index_of[from.as_str()]].push(index_of[to.as_str()]);
    }

    let n = units.len();
    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut components: Vec<Vec<String>> = Vec::new();

    // explicit DFS stack: (node, next successor position)
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call_stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            if *pos == 0 {
                index[v] = next_index;
                lowlink[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(units[w].clone());
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    components.push(comp);
                }
            }
        }
    }
    components
}

/// Within one SCC, mark DFS back edges (edges to a unit still on the DFS
/// stack) as tears. Removing every back edge makes the member subgraph
/// acyclic.
fn select_tears_in_scc(fs: &Flowsheet, members: &BTreeSet<String>) -> Vec<String> {
    let mut tears = Vec::new();
    let start = members.iter().next().expect("scc is non-empty").clone();
    let mut gray: BTreeSet<String> = BTreeSet::new();
    let mut done: BTreeSet<String> = BTreeSet::new();

    // (unit, outgoing intra-SCC edges not yet tried)
    let out_edges = |u: &str| -> Vec<(String, String)> {
        fs.streams
            .values()
            .filter(|s| s.from.unit == u && members.contains(&s.to.unit))
            .map(|s| (s.id.clone(), s.to.unit.clone()))
            .collect()
    };

    // (unit, its outgoing intra-SCC edges, next edge position)
    type DfsFrame = (String, Vec<(String, String)>, usize);
    let mut stack: Vec<DfsFrame> = Vec::new();
    let mut pending: Vec<String> = vec![start];
    while let Some(next_root) = pending.pop() {
        if done.contains(&next_root) {
            continue;
        }
        stack.push((next_root.clone(), out_edges(&next_root), 0));
        gray.insert(next_root);
        while let Some((unit, succ, pos)) = stack.last_mut() {
            if *pos < succ.len() {
                let (stream_id, target) = succ[*pos].clone();
                *pos += 1;
                if gray.contains(&target) {
                    tears.push(stream_id);
                } else if !done.contains(&target) {
                    gray.insert(target.clone());
                    let next_succ = out_edges(&target);
                    stack.push((target, next_succ, 0));
                }
            } else {
                gray.remove(unit);
                done.insert(unit.clone());
                stack.pop();
            }
        }
        // an SCC is mutually reachable, so one root covers it, but stay safe
        for m in members {
            if !done.contains(m) {
                pending.push(m.clone());
            }
        }
    }
    tears.sort();
    tears
}

/// Compute the calculation sequence and tear set for a flowsheet whose
/// topology validates cleanly. Deterministic: all iteration is in id order.
pub fn order_units(fs: &Flowsheet) -> CalcOrder {
    let mut tears: Vec<String> = Vec::new();
    for comp in strongly_connected_components(fs) {
        let members: BTreeSet<String> = comp.iter().cloned().collect();
        let nontrivial = members.len() > 1
            || fs
                .streams
                .values()
                .any(|s| s.from.unit == s.to.unit && members.contains(&s.from.unit));
        if nontrivial {
            tears.extend(select_tears_in_scc(fs, &members));
        }
    }
    tears.sort();

    // Kahn's algorithm on the graph without tear edges, smallest id first
    let mut indegree: BTreeMap<String, usize> =
        fs.units.keys().map(|u| (u.clone(), 0)).collect();
    for (sid, _, to) in edges(fs) {
        if !tears.contains(&sid) {
            *indegree.get_mut(&to).expect("stream endpoints exist") += 1;
        }
    }
    let mut ready: BTreeSet<String> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(u, _)| u.clone())
        .collect();
    let mut sequence = Vec::new();
    while let Some(u) = ready.iter().next().cloned() {
        ready.remove(&u);
        sequence.push(u.clone());
        for (sid, from, to) in edges(fs) {
            if from == u && !tears.contains(&sid) {
                let d = indegree.get_mut(&to).expect("stream endpoints exist");
                *d -= 1;
                if *d == 0 {
                    ready.insert(to.clone());
                }
            }
        }
    }
    debug_assert_eq!(sequence.len(), fs.units.len(), "tear set left a cycle");

    CalcOrder { sequence, tears }
}
