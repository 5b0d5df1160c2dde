// zxrl - ZX-calculus circuit optimisation guided by reinforcement learning
// Copyright (C) 2026 - The zxrl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Observation graphs for the actor and the critic.
//!
//! Actor nodes are the diagram's spiders (ascending id) followed by one node
//! per feasible action, in enumeration order, ending with Stop. Features:
//!
//! | index | spider node | action node |
//! |-------|-------------|-------------|
//! | 0, 1  | sin, cos of the phase | 0 |
//! | 2     | touches an input/output | 0 |
//! | 3..7  | 0 | one-hot of lcomp / pivot / stop / id |
//!
//! Edge kinds: 0 diagram wire, 1 action to spider, 2 action to action.

use std::collections::BTreeMap;

use crate::graph::{ZxDiagram, V};
use crate::nn::{Graph, ACTOR_FEATURES, CRITIC_FEATURES};
use crate::rewrite::RewriteAction;

pub const WIRE: usize = 0;
pub const ACTION_SPIDER: usize = 1;
pub const ACTION_ACTION: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyGraph {
    pub actor: Graph,
    pub critic: Graph,
    /// Diagram vertex behind each spider node.
    pub spiders: Vec<V>,
    /// `actions[i]` lives at actor node `action_nodes[i]`.
    pub action_nodes: Vec<usize>,
    pub actions: Vec<RewriteAction>,
}

impl PolicyGraph {
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    /// Index into `actions` of the action at actor node `node`.
    pub fn action_at_node(&self, node: usize) -> Option<usize> {
        node.checked_sub(self.spiders.len())
            .filter(|&i| i < self.actions.len())
    }
}

fn rule_flag(a: &RewriteAction) -> Option<usize> {
    match a {
        RewriteAction::LocalComp { .. } => Some(3),
        RewriteAction::Pivot { .. } | RewriteAction::BoundaryPivot { .. } => Some(4),
        RewriteAction::Stop => Some(5),
        RewriteAction::IdentityRemove { .. } => Some(6),
        RewriteAction::GadgetFusion { .. } => None,
    }
}

/// Builds both observation graphs; `actions` must come from
/// `enumerate_actions(d, _)` and therefore end with Stop.
pub fn build_policy_graph(d: &ZxDiagram, actions: &[RewriteAction]) -> PolicyGraph {
    let spiders: Vec<V> = d.vertices().filter(|&v| d.is_spider(v)).collect();
    let index: BTreeMap<V, usize> = spiders.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ns = spiders.len();
    let na = actions.len();
    let n = ns + na;

    let mut spider_feats = Vec::with_capacity(ns * CRITIC_FEATURES);
    for &v in &spiders {
        let r = d.phase(v).radians();
        let b = if d.boundary_neighbor(v).is_some() {
            1.0
        } else {
            0.0
        };
        spider_feats.extend_from_slice(&[r.sin(), r.cos(), b]);
    }
    let mut wires = Vec::new();
    for (u, v, _) in d.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
            wires.push((a, b, WIRE));
        }
    }
    let critic = Graph::from_undirected(ns, CRITIC_FEATURES, spider_feats.clone(), &wires);

    let mut feats = vec![0.0; n * ACTOR_FEATURES];
    for i in 0..ns {
        feats[i * ACTOR_FEATURES..i * ACTOR_FEATURES + CRITIC_FEATURES]
            .copy_from_slice(&spider_feats[i * CRITIC_FEATURES..(i + 1) * CRITIC_FEATURES]);
    }
    let mut edges = wires;
    for (k, a) in actions.iter().enumerate() {
        let node = ns + k;
        if let Some(f) = rule_flag(a) {
            feats[node * ACTOR_FEATURES + f] = 1.0;
        }
        if *a == RewriteAction::Stop {
            edges.extend((0..ns).map(|s| (node, s, ACTION_SPIDER)));
        } else {
            edges.extend(a.vertices().iter().map(|v| (node, index[v], ACTION_SPIDER)));
        }
        edges.extend((ns..node).map(|other| (other, node, ACTION_ACTION)));
    }
    let actor = Graph::from_undirected(n, ACTOR_FEATURES, feats, &edges);
    PolicyGraph {
        actor,
        critic,
        spiders,
        action_nodes: (ns..n).collect(),
        actions: actions.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeType, VertexKind};
    use crate::phase::Phase;
    use crate::rewrite::enumerate_actions;

    #[test]
    fn shapes_follow_the_diagram() {
        let mut d = ZxDiagram::new(2);
        let a = d
            .vertices()
            .find(|&v| d.is_spider(v) && d.boundary_neighbor(v).is_some())
            .unwrap();
        let s = d.add_vertex_with_phase(VertexKind::Z, Phase::S);
        d.add_edge(a, s, EdgeType::Hadamard);
        let acts = enumerate_actions(&d, false);
        assert_eq!(acts.len(), 2, "{acts:?}");
        let pg = build_policy_graph(&d, &acts);
        let ns = d.num_spiders();
        assert_eq!(pg.actor.num_nodes, ns + acts.len());
        assert_eq!(pg.critic.num_nodes, ns);
        let si = pg.spiders.iter().position(|&v| v == s).unwrap();
        assert_eq!(
            &pg.actor.node_features[si * 7..si * 7 + 7],
            &[1.0, Phase::S.radians().cos(), 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        let stop = *pg.action_nodes.last().unwrap();
        assert_eq!(pg.actor.neighbors(stop).count(), pg.actor.num_nodes - 1);
        let lc = pg.action_nodes[0];
        assert_eq!(pg.actor.neighbors(lc).collect::<Vec<_>>(), vec![si, stop]);
        assert_eq!(pg.actor.node_features[lc * 7 + 3], 1.0);
    }

    #[test]
    fn action_clique() {
        let c = crate::circuit::Circuit::random(4, 30, crate::circuit::GateSet::Clifford, 1);
        let d = c.to_diagram().to_graph_like();
        let acts = enumerate_actions(&d, false);
        let pg = build_policy_graph(&d, &acts);
        let a = acts.len();
        let clique = (0..pg.actor.num_edges())
            .filter(|&e| {
                pg.actor.src[e] < pg.actor.dst[e]
                    && pg.actor.edge_features[e * 3 + ACTION_ACTION] == 1.0
            })
            .count();
        // the Stop node's links to other actions are action-action edges too
        assert_eq!(clique, a * (a - 1) / 2);
    }
}
