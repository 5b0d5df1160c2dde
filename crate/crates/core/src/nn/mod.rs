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

//! Graph-attention actor and critic networks on a small autodiff tape.

mod adam;
mod checkpoint;
mod gat;
mod nets;
mod tape;

use std::sync::Arc;

pub use adam::Adam;
pub use checkpoint::{
    decode as decode_checkpoint, encode as encode_checkpoint, load_checkpoint, save_checkpoint,
    CheckpointError,
};
pub use gat::{gat_forward, global_attention_pool, GatLayer};
pub use nets::{
    softmax, ActorOut, AgentNets, CriticOut, NetConfig, ACTOR_FEATURES, CRITIC_FEATURES,
};
pub use tape::{Grads, Tape, Tensor, Var};

/// Width of the one-hot edge features.
pub const EDGE_DIM: usize = 3;

/// A directed graph with dense node and edge features, ready for message
/// passing. Edge `e` carries a message from `src[e]` to `dst[e]`. Every node
/// has exactly one self-loop.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    pub num_nodes: usize,
    pub feat_dim: usize,
    /// `[num_nodes, feat_dim]`, row-major
    pub node_features: Vec<f64>,
    pub src: Arc<[usize]>,
    pub dst: Arc<[usize]>,
    /// `[num_edges, EDGE_DIM]`, row-major; zero on self-loops
    pub edge_features: Arc<[f64]>,
}

impl Graph {
    /// Builds the directed graph from undirected edges `(a, b, kind)` with
    /// `kind < EDGE_DIM` naming the hot entry. Both directions are added, then
    /// one self-loop per node. Edges are ordered by receiver, then sender.
    pub fn from_undirected(
        num_nodes: usize,
        feat_dim: usize,
        node_features: Vec<f64>,
        edges: &[(usize, usize, usize)],
    ) -> Graph {
        assert_eq!(node_features.len(), num_nodes * feat_dim);
        let mut directed: Vec<(usize, usize, Option<usize>)> =
            Vec::with_capacity(2 * edges.len() + num_nodes);
        for &(a, b, kind) in edges {
            assert!(a != b && a < num_nodes && b < num_nodes && kind < EDGE_DIM);
            directed.push((b, a, Some(kind)));
            directed.push((a, b, Some(kind)));
        }
        directed.extend((0..num_nodes).map(|i| (i, i, None)));
        directed.sort_unstable();
        directed.dedup_by_key(|e| (e.0, e.1));
        let mut edge_features = vec![0.0; directed.len() * EDGE_DIM];
        for (e, &(_, _, kind)) in directed.iter().enumerate() {
            if let Some(k) = kind {
                edge_features[e * EDGE_DIM + k] = 1.0;
            }
        }
        Graph {
            num_nodes,
            feat_dim,
            node_features,
            src: directed.iter().map(|e| e.1).collect(),
            dst: directed.iter().map(|e| e.0).collect(),
            edge_features: edge_features.into(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.src.len()
    }

    /// Undirected neighbours of `i`, without `i` itself.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.dst
            .iter()
            .zip(self.src.iter())
            .filter(move |&(&d, &s)| d == i && s != i)
            .map(|(_, &s)| s)
    }

    /// The same graph with nodes renumbered by `perm[old] = new`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.num_nodes;
        let d = self.feat_dim;
        let mut feats = vec![0.0; n * d];
        for (old, &new) in perm.iter().enumerate() {
            feats[new * d..(new + 1) * d]
                .copy_from_slice(&self.node_features[old * d..(old + 1) * d]);
        }
        let mut edges = Vec::new();
        for e in 0..self.num_edges() {
            let (s, t) = (self.src[e], self.dst[e]);
            if s < t {
                let k = (0..EDGE_DIM)
                    .find(|&k| self.edge_features[e * EDGE_DIM + k] == 1.0)
                    .unwrap();
                edges.push((perm[s], perm[t], k));
            }
        }
        Graph::from_undirected(n, d, feats, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loops_and_both_directions() {
        let g = Graph::from_undirected(3, 1, vec![0.0; 3], &[(0, 1, 0), (1, 2, 2)]);
        assert_eq!(g.num_edges(), 4 + 3);
        assert_eq!(g.neighbors(1).collect::<Vec<_>>(), vec![0, 2]);
        let loops = (0..g.num_edges()).filter(|&e| g.src[e] == g.dst[e]).count();
        assert_eq!(loops, 3);
    }
}
