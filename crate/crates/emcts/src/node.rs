use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use evaluator::EvalResult;
use flowsheet_core::Flowsheet;

/// Tree-local node identifier, ordered by creation. All tie-breaks in the
/// search resolve to the smaller id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

pub const ROOT: NodeId = NodeId(0);

/// One search-tree node. Every non-root node carries a complete process
/// configuration; the root is virtual.
#[derive(Debug, Clone)]
pub struct SearchNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub flowsheet: Option<Flowsheet>,
    /// Visit count v_i.
    pub visits: u32,
    pub eval: Option<EvalResult>,
    pub converged: bool,
    /// Immediate value: realized (penalized) score / 100.
    pub v_imm: f64,
    /// Potential value: refinement promise from the unpenalized score and
    /// the best single dimension.
    pub v_pot: f64,
    pub depth: u32,
    pub revisited: bool,
    /// Scores observed at or under this node, in arrival order.
    pub score_history: Vec<f64>,
}

impl SearchNode {
    pub fn virtual_root() -> Self {
        Self {
            id: ROOT,
            parent: None,
            children: Vec::new(),
            flowsheet: None,
            visits: 0,
            eval: None,
            converged: false,
            v_imm: 0.0,
            v_pot: 0.0,
            depth: 0,
            revisited: false,
            score_history: Vec::new(),
        }
    }

    pub fn score(&self) -> f64 {
        self.eval.as_ref().map_or(0.0, |e| e.score)
    }

    pub fn is_evaluated(&self) -> bool {
        self.eval.is_some()
    }
}

/// The search tree: nodes keyed by id, ids allocated in creation order.
#[derive(Debug, Clone, Default)]
pub struct SearchTree {
    nodes: BTreeMap<NodeId, SearchNode>,
    next_id: u32,
}

impl SearchTree {
    pub fn with_root() -> Self {
        let mut tree = Self::default();
        tree.nodes.insert(ROOT, SearchNode::virtual_root());
        tree.next_id = 1;
        tree
    }

    pub fn allocate_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn insert(&mut self, node: SearchNode) {
        self.nodes.insert(node.id, node);
    }

    pub fn get(&self, id: NodeId) -> &SearchNode {
        &self.nodes[&id]
    }

    pub fn get_mut(&mut self, id: NodeId) -> &mut SearchNode {
        self.nodes.get_mut(&id).expect("node exists")
    }

    pub fn root(&self) -> &SearchNode {
        self.get(ROOT)
    }

    /// Nodes in id order.
    pub fn iter(&self) -> impl Iterator<Item = &SearchNode> {
        self.nodes.values()
    }

    /// Evaluated non-root nodes in id order.
    pub fn evaluated(&self) -> impl Iterator<Item = &SearchNode> {
        self.iter().filter(|n| n.id != ROOT && n.is_evaluated())
    }

    /// Evaluated leaves in id order.
    pub fn leaves(&self) -> impl Iterator<Item = &SearchNode> {
        self.evaluated().filter(|n| n.children.is_empty())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Ancestors of a node, nearest first, root last.
    pub fn ancestors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cursor = self.get(id).parent;
        while let Some(p) = cursor {
            out.push(p);
            cursor = self.get(p).parent;
        }
        out
    }
}

/// Population standard deviation; 0 for fewer than two samples.
pub fn population_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}
