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

//! GATv2 message passing and global attention pooling.
//!
//! For receiver `i` and sender `j` (including `j = i` through the self-loop)
//!
//! ```text
//! score_ij = a . LeakyReLU(Θs x_i + Θt x_j + Θe e_ij)
//! α_ij     = softmax_j(score_ij)
//! x_i'     = α_ii Θs x_i + Σ_{j≠i} α_ij Θt x_j
//! ```

use std::sync::Arc;

use super::tape::{Tape, Var};
use super::Graph;

/// Parameter indices of one layer. `theta_s`, `theta_t` are `[d_in, d_hid]`,
/// `theta_e` is `[EDGE_DIM, d_hid]` and `att` is `[d_hid, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GatLayer {
    pub theta_s: usize,
    pub theta_t: usize,
    pub theta_e: usize,
    pub att: usize,
}

/// Returns the new node features `[n, d_hid]` and the attention
/// coefficients `[num_edges, 1]` in the graph's edge order. `params` maps
/// parameter indices to their nodes on the tape.
pub fn gat_forward(
    tape: &mut Tape,
    params: &[Var],
    layer: GatLayer,
    x: Var,
    g: &Graph,
    slope: f64,
) -> (Var, Var) {
    let (ts, tt, te, att) = (
        params[layer.theta_s],
        params[layer.theta_t],
        params[layer.theta_e],
        params[layer.att],
    );
    let s = tape.matmul(x, ts);
    let t = tape.matmul(x, tt);

    let score = tape.edge_score(
        s,
        t,
        te,
        att,
        g.edge_features.clone(),
        g.src.clone(),
        g.dst.clone(),
        slope,
    );
    let alpha = tape.segment_softmax(score, g.dst.clone());
    // self-loops carry Θs x_i, every other edge Θt x_j
    let out = tape.edge_aggregate(alpha, s, t, g.src.clone(), g.dst.clone());
    (out, alpha)
}

/// Softmax-weighted sum of the rows of `x: [n, d]` with scores `x · gate`.
/// Returns the pooled `[1, d]` row and the weights `[n, 1]`.
pub fn global_attention_pool(tape: &mut Tape, x: Var, gate: Var) -> (Var, Var) {
    let n = tape.value(x).dims2().0;
    let score = tape.matmul(x, gate);
    let one: Arc<[usize]> = vec![0; n].into();
    let w = tape.segment_softmax(score, one.clone());
    let pooled = tape.segment_weighted_sum(w, x, one, 1);
    (pooled, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Tensor, EDGE_DIM};

    fn layer_params(d_in: usize, h: usize) -> Vec<Tensor> {
        let f = |r: usize, c: usize, seed: f64| {
            Tensor::new(
                vec![r, c],
                (0..r * c)
                    .map(|i| ((i as f64 + seed) * 0.37).sin())
                    .collect(),
            )
        };
        vec![
            f(d_in, h, 0.0),
            f(d_in, h, 1.0),
            f(EDGE_DIM, h, 2.0),
            f(h, 1, 3.0),
        ]
    }

    fn run(g: &Graph, ps: &[Tensor]) -> (Vec<f64>, Vec<f64>) {
        let mut tape = Tape::new();
        let vars: Vec<Var> = ps
            .iter()
            .enumerate()
            .map(|(i, t)| tape.param(i, t))
            .collect();
        let x = tape.leaf(Tensor::new(
            vec![g.num_nodes, g.feat_dim],
            g.node_features.clone(),
        ));
        let layer = GatLayer {
            theta_s: 0,
            theta_t: 1,
            theta_e: 2,
            att: 3,
        };
        let (out, alpha) = gat_forward(&mut tape, &vars, layer, x, g, 0.2);
        (tape.value(out).data.clone(), tape.value(alpha).data.clone())
    }

    #[test]
    fn isolated_node_is_theta_s_x() {
        let g = Graph::from_undirected(1, 2, vec![0.5, -1.0], &[]);
        let ps = layer_params(2, 3);
        let (out, alpha) = run(&g, &ps);
        assert_eq!(alpha, vec![1.0]);
        for c in 0..3 {
            let want = 0.5 * ps[0].data[c] - ps[0].data[3 + c];
            assert!((out[c] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_pair_splits_attention_evenly() {
        let g = Graph::from_undirected(2, 2, vec![0.3, 0.7, 0.3, 0.7], &[(0, 1, 1)]);
        // equal features make the self and neighbour logits coincide once the
        // edge term matches the self-loop's zero features
        let mut ps = layer_params(2, 4);
        ps[2] = Tensor::zeros(vec![EDGE_DIM, 4]);
        let (_, alpha) = run(&g, &ps);
        for a in alpha {
            assert!((a - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn pooling_identical_rows_is_identity() {
        let mut tape = Tape::new();
        let x = tape.leaf(Tensor::new(vec![2, 3], vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0]));
        let gate = tape.leaf(Tensor::new(vec![3, 1], vec![0.1, -0.4, 2.0]));
        let (p, w) = global_attention_pool(&mut tape, x, gate);
        assert_eq!(tape.value(w).data, vec![0.5, 0.5]);
        assert_eq!(tape.value(p).data, vec![1.0, 2.0, 3.0]);
        let x1 = tape.leaf(Tensor::new(vec![1, 3], vec![4.0, 5.0, 6.0]));
        let (p1, _) = global_attention_pool(&mut tape, x1, gate);
        assert_eq!(tape.value(p1).data, vec![4.0, 5.0, 6.0]);
    }
}
