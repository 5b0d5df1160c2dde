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

//! The rewriting environment. A state is a graph-like diagram, an action is
//! one of its feasible rewrites, and the reward is the drop in extracted gate
//! count divided by a per-size normaliser.

mod policy_graph;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use policy_graph::{build_policy_graph, PolicyGraph, ACTION_ACTION, ACTION_SPIDER, WIRE};

use crate::circuit::{Circuit, GateSet};
use crate::extract::{extract, ExtractError};
use crate::graph::ZxDiagram;
use crate::rewrite::{self, RewriteAction};
use crate::simplify::reduce_all;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("episode is over; call reset")]
    Finished,
    #[error("node {node} is not an action node (observation has {actions} actions)")]
    InvalidAction { node: usize, actions: usize },
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Rewrite(#[from] rewrite::RewriteError),
    #[error("normaliser table line {line}: {msg}")]
    Normalizer { line: usize, msg: String },
}

/// Expected compression per `(qubits, gates)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalizerTable(pub BTreeMap<(usize, usize), f64>);

impl NormalizerTable {
    /// The calibrated value, or `0.2 * gates` (at least 1) when uncalibrated.
    pub fn get(&self, qubits: usize, gates: usize) -> f64 {
        self.0
            .get(&(qubits, gates))
            .copied()
            .unwrap_or_else(|| (0.2 * gates as f64).max(1.0))
    }

    pub fn insert(&mut self, qubits: usize, gates: usize, value: f64) {
        self.0.insert((qubits, gates), value);
    }

    /// `normalizer.Q.G = value` lines, also valid inside a run config.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        for (&(q, g), v) in &self.0 {
            writeln!(s, "normalizer.{q}.{g} = {v}").unwrap();
        }
        s
    }

    /// Reads `normalizer.Q.G = value` lines; other keys are ignored.
    pub fn parse(text: &str) -> Result<NormalizerTable, EnvError> {
        let mut t = NormalizerTable::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            let Some((k, v)) = line.split_once('=') else {
                continue;
            };
            if let Some(rest) = k.trim().strip_prefix("normalizer.") {
                t.parse_entry(rest, v.trim())
                    .map_err(|msg| EnvError::Normalizer { line: i + 1, msg })?;
            }
        }
        Ok(t)
    }

    /// Parses `Q.G` and a positive value.
    pub fn parse_entry(&mut self, key: &str, value: &str) -> Result<(), String> {
        let (q, g) = key
            .split_once('.')
            .ok_or_else(|| format!("expected normalizer.Q.G, got {key}"))?;
        let q: usize = q.parse().map_err(|_| format!("bad qubit count {q}"))?;
        let g: usize = g.parse().map_err(|_| format!("bad gate count {g}"))?;
        let v: f64 = value.parse().map_err(|_| format!("bad value {value}"))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(format!("normaliser must be positive, got {v}"));
        }
        self.insert(q, g, v);
        Ok(())
    }
}

/// `max(1, mean(gates - reduced))` over `samples` random circuits, where
/// `reduced` is the extracted size after [`reduce_all`].
pub fn calibrate(
    qubits: usize,
    gates: usize,
    set: GateSet,
    samples: usize,
    seed: u64,
) -> Result<f64, ExtractError> {
    let mut total = 0.0;
    for s in 0..samples as u64 {
        let c = Circuit::random(qubits, gates, set, seed.wrapping_add(s));
        let g = reduce_all(&c.to_diagram().to_graph_like(), false);
        total += gates as f64 - extract(&g)?.len() as f64;
    }
    Ok((total / samples.max(1) as f64).max(1.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvConfig {
    pub n_qubits: usize,
    pub n_gates: usize,
    pub gate_set: GateSet,
    pub max_steps: usize,
    pub normalizer: NormalizerTable,
    pub seed: u64,
}

impl Default for EnvConfig {
    fn default() -> EnvConfig {
        EnvConfig {
            n_qubits: 5,
            n_gates: 25,
            gate_set: GateSet::Clifford,
            max_steps: 200,
            normalizer: NormalizerTable::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepInfo {
    pub gates_now: usize,
    pub gates_initial: usize,
    pub actions_available: usize,
    /// The reward before normalisation: gates before minus gates after.
    pub raw_reward: i64,
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub observation: PolicyGraph,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// One environment instance.
#[derive(Clone, Debug)]
pub struct Env {
    cfg: EnvConfig,
    norm: f64,
    source: Circuit,
    diagram: ZxDiagram,
    extracted: Circuit,
    initial: usize,
    steps: usize,
    done: bool,
    obs: PolicyGraph,
}

impl Env {
    /// Starts on the episode drawn from `episode_seed`.
    pub fn new(cfg: EnvConfig, episode_seed: u64) -> Result<Env, EnvError> {
        let c = Circuit::random(cfg.n_qubits, cfg.n_gates, cfg.gate_set, episode_seed);
        Env::from_circuit(cfg, c)
    }

    /// Starts an episode on a given circuit.
    pub fn from_circuit(cfg: EnvConfig, source: Circuit) -> Result<Env, EnvError> {
        let diagram = source.to_diagram().to_graph_like();
        let extracted = extract(&diagram)?;
        let obs = build_policy_graph(&diagram, &rewrite::enumerate_actions(&diagram, false));
        let norm = cfg.normalizer.get(cfg.n_qubits, cfg.n_gates);
        Ok(Env {
            norm,
            initial: extracted.len(),
            source,
            diagram,
            extracted,
            steps: 0,
            done: false,
            obs,
            cfg,
        })
    }

    pub fn reset(&mut self, episode_seed: u64) -> Result<StepResult, EnvError> {
        *self = Env::new(self.cfg.clone(), episode_seed)?;
        Ok(self.result(0.0, 0))
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn observation(&self) -> &PolicyGraph {
        &self.obs
    }

    pub fn diagram(&self) -> &ZxDiagram {
        &self.diagram
    }

    pub fn source(&self) -> &Circuit {
        &self.source
    }

    /// The circuit extracted from the current diagram.
    pub fn extracted(&self) -> &Circuit {
        &self.extracted
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn normalizer(&self) -> f64 {
        self.norm
    }

    fn result(&self, reward: f64, raw: i64) -> StepResult {
        StepResult {
            observation: self.obs.clone(),
            reward,
            done: self.done,
            info: StepInfo {
                gates_now: self.extracted.len(),
                gates_initial: self.initial,
                actions_available: self.obs.num_actions(),
                raw_reward: raw,
            },
        }
    }

    /// Applies the action at actor node `node` of the current observation.
    pub fn step(&mut self, node: usize) -> Result<StepResult, EnvError> {
        let k = self
            .obs
            .action_at_node(node)
            .ok_or(EnvError::InvalidAction {
                node,
                actions: self.obs.num_actions(),
            })?;
        self.step_action(k)
    }

    /// Applies `observation().actions[k]`.
    pub fn step_action(&mut self, k: usize) -> Result<StepResult, EnvError> {
        if self.done {
            return Err(EnvError::Finished);
        }
        let action = *self.obs.actions.get(k).ok_or(EnvError::InvalidAction {
            node: k,
            actions: self.obs.num_actions(),
        })?;
        self.steps += 1;
        if action == RewriteAction::Stop {
            self.done = true;
            return Ok(self.result(0.0, 0));
        }
        rewrite::apply_mut(&mut self.diagram, &action)?;
        let next = extract(&self.diagram)?;
        let raw = self.extracted.len() as i64 - next.len() as i64;
        self.extracted = next;
        let actions = rewrite::enumerate_actions(&self.diagram, false);
        self.done = actions.len() == 1 || self.steps >= self.cfg.max_steps;
        self.obs = build_policy_graph(&self.diagram, &actions);
        Ok(self.result(raw as f64 / self.norm, raw))
    }
}

/// `n` environments with independent episode streams; environment `i` draws
/// its episode seeds from a generator seeded with `seed + i`.
pub struct VecEnv {
    pub envs: Vec<Env>,
    rngs: Vec<ChaCha8Rng>,
}

impl VecEnv {
    pub fn new(cfg: &EnvConfig, n: usize) -> Result<VecEnv, EnvError> {
        let mut rngs: Vec<ChaCha8Rng> = (0..n as u64)
            .map(|i| ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i)))
            .collect();
        let envs = rngs
            .iter_mut()
            .map(|r| Env::new(cfg.clone(), r.next_u64()))
            .collect::<Result<_, _>>()?;
        Ok(VecEnv { envs, rngs })
    }

    pub fn len(&self) -> usize {
        self.envs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envs.is_empty()
    }

    /// Steps environment `i`; a finished episode is replaced by the next one,
    /// whose first observation is then `envs[i].observation()`.
    pub fn step(&mut self, i: usize, node: usize) -> Result<StepResult, EnvError> {
        let r = self.envs[i].step(node)?;
        if r.done {
            let seed = self.rngs[i].next_u64();
            self.envs[i].reset(seed)?;
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::equivalent_clifford;
    use rand::Rng;

    #[test]
    fn stop_first_ends_with_zero_reward() {
        let mut e = Env::new(EnvConfig::default(), 3).unwrap();
        let stop = *e.observation().action_nodes.last().unwrap();
        let r = e.step(stop).unwrap();
        assert!(r.done && r.reward == 0.0);
        assert!(matches!(e.step(stop), Err(EnvError::Finished)));
    }

    #[test]
    fn reset_is_deterministic() {
        let a = Env::new(EnvConfig::default(), 11).unwrap();
        let b = Env::new(EnvConfig::default(), 11).unwrap();
        assert_eq!(a.observation(), b.observation());
        let nodes = a.diagram().num_spiders() + a.observation().num_actions();
        assert_eq!(a.observation().actor.num_nodes, nodes);
    }

    #[test]
    fn identity_circuit_costs_nothing() {
        let e = Env::from_circuit(EnvConfig::default(), Circuit::new(5)).unwrap();
        assert_eq!(crate::peephole_optimize(e.extracted()).len(), 0);
    }

    #[test]
    fn spider_nodes_are_rejected_as_actions() {
        let mut e = Env::new(EnvConfig::default(), 4).unwrap();
        assert!(matches!(e.step(0), Err(EnvError::InvalidAction { .. })));
    }

    #[test]
    fn random_episodes_stay_sound_and_telescope() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ep in 0..20 {
            let mut e = Env::new(EnvConfig::default(), ep).unwrap();
            let start = e.extracted().len() as i64;
            let mut sum = 0;
            while !e.is_done() {
                let n = e.observation().num_actions();
                // skip Stop so episodes run long
                let k = if n == 1 { 0 } else { rng.gen_range(0..n - 1) };
                sum += e.step_action(k).unwrap().info.raw_reward;
            }
            assert_eq!(sum, start - e.extracted().len() as i64);
            assert!(equivalent_clifford(e.source(), e.extracted()).unwrap());
        }
    }

    #[test]
    fn normalizer_table_round_trip() {
        let mut t = NormalizerTable::default();
        t.insert(5, 25, 1.5);
        t.insert(10, 100, 12.25);
        assert_eq!(NormalizerTable::parse(&t.emit()).unwrap(), t);
        assert_eq!(t.get(3, 40), 8.0);
        assert!(NormalizerTable::parse("normalizer.5.x = 1").is_err());
    }
}
