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

//! The actor and critic: stacks of GATv2 layers with LeakyReLU in between.
//! The actor projects each action node to a logit; the critic pools all
//! nodes with global attention and projects to a scalar.

use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gat::{gat_forward, global_attention_pool, GatLayer};
use super::tape::{Grads, Tape, Tensor, Var};
use super::{Graph, EDGE_DIM};

pub const ACTOR_FEATURES: usize = 7;
pub const CRITIC_FEATURES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetConfig {
    pub hidden: usize,
    pub layers: usize,
    pub leaky_slope: f64,
}

impl Default for NetConfig {
    fn default() -> NetConfig {
        NetConfig {
            hidden: 64,
            layers: 3,
            leaky_slope: 0.2,
        }
    }
}

/// Both networks and their parameters, kept in one flat list so that a
/// single optimiser and checkpoint cover everything.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentNets {
    pub cfg: NetConfig,
    pub names: Vec<String>,
    pub params: Vec<Tensor>,
    actor_layers: Vec<GatLayer>,
    actor_head: usize,
    critic_layers: Vec<GatLayer>,
    critic_gate: usize,
    critic_head: usize,
    critic_bias: usize,
    actor_range: Range<usize>,
    critic_range: Range<usize>,
}

pub struct ActorOut {
    /// `[num_actions, 1]`
    pub logits: Var,
    /// per layer, `[num_edges, 1]`
    pub attention: Vec<Var>,
}

pub struct CriticOut {
    /// `[1, 1]`
    pub value: Var,
    pub attention: Vec<Var>,
    /// pooling weights `[num_nodes, 1]`
    pub pool: Var,
}

struct Builder {
    names: Vec<String>,
    shapes: Vec<Vec<usize>>,
}

impl Builder {
    fn add(&mut self, name: String, shape: Vec<usize>) -> usize {
        self.names.push(name);
        self.shapes.push(shape);
        self.names.len() - 1
    }

    fn gat_stack(&mut self, prefix: &str, d_in: usize, cfg: &NetConfig) -> Vec<GatLayer> {
        (0..cfg.layers)
            .map(|l| {
                let d = if l == 0 { d_in } else { cfg.hidden };
                GatLayer {
                    theta_s: self.add(format!("{prefix}.gat{l}.theta_s"), vec![d, cfg.hidden]),
                    theta_t: self.add(format!("{prefix}.gat{l}.theta_t"), vec![d, cfg.hidden]),
                    theta_e: self.add(
                        format!("{prefix}.gat{l}.theta_e"),
                        vec![EDGE_DIM, cfg.hidden],
                    ),
                    att: self.add(format!("{prefix}.gat{l}.att"), vec![cfg.hidden, 1]),
                }
            })
            .collect()
    }
}

impl AgentNets {
    /// Glorot-uniform weights drawn from `seed`; the critic bias starts at 0.
    pub fn new(cfg: NetConfig, seed: u64) -> AgentNets {
        let mut nets = AgentNets::zeros(cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, t) in nets.params.iter_mut().enumerate() {
            if i == nets.critic_bias {
                continue;
            }
            let (r, c) = t.dims2();
            let s = (6.0 / (r + c) as f64).sqrt();
            t.data.iter_mut().for_each(|x| *x = rng.gen_range(-s..s));
        }
        nets
    }

    /// The architecture for `cfg` with every parameter zero.
    pub fn zeros(cfg: NetConfig) -> AgentNets {
        assert!(cfg.layers >= 1 && cfg.hidden >= 1);
        let mut b = Builder {
            names: Vec::new(),
            shapes: Vec::new(),
        };
        let actor_layers = b.gat_stack("actor", ACTOR_FEATURES, &cfg);
        let actor_head = b.add("actor.head".into(), vec![cfg.hidden, 1]);
        let actor_end = b.names.len();
        let critic_layers = b.gat_stack("critic", CRITIC_FEATURES, &cfg);
        let critic_gate = b.add("critic.pool_gate".into(), vec![cfg.hidden, 1]);
        let critic_head = b.add("critic.head".into(), vec![cfg.hidden, 1]);
        let critic_bias = b.add("critic.head_bias".into(), vec![1]);
        let params = b.shapes.iter().map(|s| Tensor::zeros(s.clone())).collect();
        AgentNets {
            cfg,
            names: b.names,
            params,
            actor_layers,
            actor_head,
            critic_layers,
            critic_gate,
            critic_head,
            critic_bias,
            actor_range: 0..actor_end,
            critic_range: actor_end..b.shapes.len(),
        }
    }

    pub fn num_scalars(&self) -> usize {
        self.params.iter().map(Tensor::len).sum()
    }

    pub fn zero_grads(&self) -> Grads {
        Grads::zeros_like(&self.params)
    }

    /// Puts the parameters in `range` on the tape; the rest map to a
    /// placeholder that must not be used.
    fn bind(&self, tape: &mut Tape, range: Range<usize>) -> Vec<Var> {
        let placeholder = tape.leaf(Tensor::zeros(vec![0]));
        (0..self.params.len())
            .map(|i| {
                if range.contains(&i) {
                    tape.param(i, &self.params[i])
                } else {
                    placeholder
                }
            })
            .collect()
    }

    fn stack(&self, tape: &mut Tape, p: &[Var], layers: &[GatLayer], g: &Graph) -> (Var, Vec<Var>) {
        let mut x = tape.leaf(Tensor::new(
            vec![g.num_nodes, g.feat_dim],
            g.node_features.clone(),
        ));
        let mut attention = Vec::with_capacity(layers.len());
        for (l, &layer) in layers.iter().enumerate() {
            if l > 0 {
                x = tape.leaky_relu(x, self.cfg.leaky_slope);
            }
            let (out, alpha) = gat_forward(tape, p, layer, x, g, self.cfg.leaky_slope);
            attention.push(alpha);
            x = out;
        }
        (x, attention)
    }

    /// Logits of the nodes listed in `action_nodes`, in that order.
    pub fn actor(&self, tape: &mut Tape, g: &Graph, action_nodes: &[usize]) -> ActorOut {
        assert_eq!(
            g.feat_dim, ACTOR_FEATURES,
            "actor graphs carry {ACTOR_FEATURES} features"
        );
        let p = self.bind(tape, self.actor_range.clone());
        let (x, attention) = self.stack(tape, &p, &self.actor_layers, g);
        let rows: Arc<[usize]> = action_nodes.into();
        let xa = tape.gather_rows(x, rows);
        let logits = tape.matmul(xa, p[self.actor_head]);
        ActorOut { logits, attention }
    }

    pub fn critic(&self, tape: &mut Tape, g: &Graph) -> CriticOut {
        assert_eq!(
            g.feat_dim, CRITIC_FEATURES,
            "critic graphs carry {CRITIC_FEATURES} features"
        );
        let p = self.bind(tape, self.critic_range.clone());
        let (x, attention) = self.stack(tape, &p, &self.critic_layers, g);
        let (pooled, pool) = global_attention_pool(tape, x, p[self.critic_gate]);
        let v = tape.matmul(pooled, p[self.critic_head]);
        let value = tape.add_row(v, p[self.critic_bias]);
        CriticOut {
            value,
            attention,
            pool,
        }
    }

    /// Action probabilities without recording gradients for later use.
    pub fn policy(&self, g: &Graph, action_nodes: &[usize]) -> Vec<f64> {
        let mut tape = Tape::new();
        let out = self.actor(&mut tape, g, action_nodes);
        softmax(&tape.value(out.logits).data)
    }

    pub fn value(&self, g: &Graph) -> f64 {
        let mut tape = Tape::new();
        let out = self.critic(&mut tape, g);
        tape.value(out.value).data[0]
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|&x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> NetConfig {
        NetConfig {
            hidden: 6,
            layers: 3,
            leaky_slope: 0.2,
        }
    }

    fn graph(feat: usize) -> Graph {
        let n = 5;
        let feats = (0..n * feat)
            .map(|i| ((i * 7 % 11) as f64 / 11.0) - 0.4)
            .collect();
        Graph::from_undirected(
            n,
            feat,
            feats,
            &[
                (0, 1, 0),
                (1, 2, 0),
                (2, 3, 1),
                (3, 4, 2),
                (0, 4, 1),
                (1, 3, 2),
            ],
        )
    }

    #[test]
    fn parameter_layout() {
        let n = AgentNets::new(NetConfig::default(), 0);
        assert_eq!(n.names[0], "actor.gat0.theta_s");
        assert_eq!(n.params[0].shape, vec![7, 64]);
        assert_eq!(n.names.last().unwrap(), "critic.head_bias");
        assert_eq!(n.params.len(), 2 * 3 * 4 + 4);
    }

    #[test]
    fn only_stop_means_certain_stop() {
        let n = AgentNets::new(small(), 1);
        assert_eq!(n.policy(&graph(ACTOR_FEATURES), &[4]), vec![1.0]);
    }

    /// Central differences of `sum(r * output)` for every scalar parameter.
    fn check(nets: &AgentNets, f: impl Fn(&AgentNets, &mut Tape) -> Var) {
        let mut tape = Tape::new();
        let out = f(nets, &mut tape);
        let r: Vec<f64> = (0..tape.value(out).len())
            .map(|i| 1.0 - 0.3 * i as f64)
            .collect();
        let mut grads = nets.zero_grads();
        tape.backward(&[(out, &r)], &mut grads);
        let eval = |n: &AgentNets| {
            let mut t = Tape::new();
            let o = f(n, &mut t);
            t.value(o)
                .data
                .iter()
                .zip(&r)
                .map(|(a, b)| a * b)
                .sum::<f64>()
        };
        let h = 1e-5;
        let mut touched = 0;
        for p in 0..nets.params.len() {
            for i in 0..nets.params[p].len() {
                let mut a = nets.clone();
                a.params[p].data[i] += h;
                let mut b = nets.clone();
                b.params[p].data[i] -= h;
                let fd = (eval(&a) - eval(&b)) / (2.0 * h);
                let an = grads.0[p][i];
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-6);
                assert!(rel < 1e-4, "{}[{i}]: fd {fd} analytic {an}", nets.names[p]);
                touched += usize::from(an != 0.0);
            }
        }
        assert!(touched > 0);
    }

    #[test]
    fn actor_gradients() {
        let nets = AgentNets::new(small(), 2);
        let g = graph(ACTOR_FEATURES);
        check(&nets, |n, t| n.actor(t, &g, &[2, 3, 4]).logits);
    }

    #[test]
    fn critic_gradients() {
        let nets = AgentNets::new(small(), 3);
        let g = graph(CRITIC_FEATURES);
        check(&nets, |n, t| n.critic(t, &g).value);
    }
}
