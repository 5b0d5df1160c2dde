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

//! Policy evaluation against the `reduce_all` baseline.
//!
//! Unlike training, an evaluation episode never extracts until the policy
//! stops (or hits the step cap); only the final diagram is turned into a
//! circuit.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::trainer::sample_index;
use crate::circuit::{Circuit, GateCounts, GateSet};
use crate::env::build_policy_graph;
use crate::extract::{extract, ExtractError};
use crate::graph::ZxDiagram;
use crate::nn::AgentNets;
use crate::peephole::peephole_optimize;
use crate::rewrite::{apply_mut, enumerate_actions, RewriteAction};
use crate::simplify::reduce_all;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPolicy {
    /// highest-probability action
    Greedy,
    /// sample from the policy
    Sample,
    /// uniform over the feasible actions
    Random,
    /// stop immediately: the unoptimised graph-like circuit
    Stop,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    pub n_qubits: usize,
    pub n_gates: usize,
    pub gate_set: GateSet,
    pub episodes: usize,
    /// episode `i` optimises `Circuit::random(.., seed + i)`
    pub seed: u64,
    pub max_steps: usize,
    pub policy: EvalPolicy,
    /// run the peephole pass on both outputs before counting
    pub peephole: bool,
    pub timing: bool,
    /// worker threads; results do not depend on it
    pub jobs: usize,
}

impl Default for EvalConfig {
    fn default() -> EvalConfig {
        EvalConfig {
            n_qubits: 5,
            n_gates: 25,
            gate_set: GateSet::Clifford,
            episodes: 200,
            seed: 1_000_000,
            max_steps: 200,
            policy: EvalPolicy::Greedy,
            peephole: false,
            timing: false,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EpisodeOutcome {
    pub diagram: ZxDiagram,
    pub actions: Vec<RewriteAction>,
}

/// Runs `policy` on `d` until it picks Stop, only Stop is left, or
/// `max_steps` rewrites were applied. `nets` may be `None` for the Random and
/// Stop policies.
pub fn run_episode(
    nets: Option<&AgentNets>,
    d: &ZxDiagram,
    policy: EvalPolicy,
    max_steps: usize,
    rng: &mut impl Rng,
) -> EpisodeOutcome {
    let mut d = d.clone();
    let mut taken = Vec::new();
    while taken.len() < max_steps && policy != EvalPolicy::Stop {
        let actions = enumerate_actions(&d, false);
        if actions.len() == 1 {
            break;
        }
        let k = match policy {
            EvalPolicy::Random => rng.gen_range(0..actions.len()),
            EvalPolicy::Greedy | EvalPolicy::Sample => {
                let nets = nets.expect("agent policies need networks");
                let pg = build_policy_graph(&d, &actions);
                let p = nets.policy(&pg.actor, &pg.action_nodes);
                if policy == EvalPolicy::Greedy {
                    // first maximum, so ties break by enumeration order
                    p.iter()
                        .enumerate()
                        .fold(0, |best, (i, &x)| if x > p[best] { i } else { best })
                } else {
                    sample_index(&p, rng)
                }
            }
            EvalPolicy::Stop => unreachable!(),
        };
        if actions[k] == RewriteAction::Stop {
            break;
        }
        apply_mut(&mut d, &actions[k]).expect("enumerated actions apply");
        taken.push(actions[k]);
    }
    EpisodeOutcome {
        diagram: d,
        actions: taken,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow {
    pub seed: u64,
    pub agent: GateCounts,
    pub baseline: GateCounts,
    pub time_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalSummary {
    pub rows: Vec<EvalRow>,
    pub agent_mean: f64,
    pub baseline_mean: f64,
    pub agent_2q_mean: f64,
    pub baseline_2q_mean: f64,
    /// episodes where the agent's total is lower, equal, higher
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

impl EvalSummary {
    pub fn report_csv(&self) -> String {
        let timing = self.rows.iter().any(|r| r.time_ms.is_some());
        let mut s = String::from("seed,agent_total,agent_2q,baseline_total,baseline_2q");
        s.push_str(if timing { ",time_ms\n" } else { "\n" });
        for r in &self.rows {
            write!(
                s,
                "{},{},{},{},{}",
                r.seed, r.agent.total, r.agent.two_qubit, r.baseline.total, r.baseline.two_qubit
            )
            .unwrap();
            match r.time_ms {
                Some(t) if timing => writeln!(s, ",{t:.3}").unwrap(),
                _ => s.push('\n'),
            }
        }
        s
    }

    pub fn summary_line(&self) -> String {
        format!(
            "episodes {} agent {:.3} (2q {:.3}) reduce_all {:.3} (2q {:.3}) wins {} ties {} losses {}",
            self.rows.len(),
            self.agent_mean,
            self.agent_2q_mean,
            self.baseline_mean,
            self.baseline_2q_mean,
            self.wins,
            self.ties,
            self.losses
        )
    }
}

fn counts(c: &Circuit, peephole: bool) -> GateCounts {
    if peephole {
        peephole_optimize(c).count_gates()
    } else {
        c.count_gates()
    }
}

/// Evaluates `policy` on `cfg.episodes` fresh circuits.
pub fn evaluate(nets: Option<&AgentNets>, cfg: &EvalConfig) -> Result<EvalSummary, ExtractError> {
    let rows = crate::par::par_map(
        cfg.episodes,
        cfg.jobs,
        |i| -> Result<EvalRow, ExtractError> {
            let seed = cfg.seed.wrapping_add(i as u64);
            let d = Circuit::random(cfg.n_qubits, cfg.n_gates, cfg.gate_set, seed)
                .to_diagram()
                .to_graph_like();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = Instant::now();
            let out = run_episode(nets, &d, cfg.policy, cfg.max_steps, &mut rng);
            let agent = counts(&extract(&out.diagram)?, cfg.peephole);
            let time_ms = cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
            let baseline = counts(&extract(&reduce_all(&d, false))?, cfg.peephole);
            Ok(EvalRow {
                seed,
                agent,
                baseline,
                time_ms,
            })
        },
    )
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let n = rows.len().max(1) as f64;
    let mean = |f: &dyn Fn(&EvalRow) -> usize| rows.iter().map(|r| f(r) as f64).sum::<f64>() / n;
    Ok(EvalSummary {
        agent_mean: mean(&|r| r.agent.total),
        baseline_mean: mean(&|r| r.baseline.total),
        agent_2q_mean: mean(&|r| r.agent.two_qubit),
        baseline_2q_mean: mean(&|r| r.baseline.two_qubit),
        wins: rows
            .iter()
            .filter(|r| r.agent.total < r.baseline.total)
            .count(),
        ties: rows
            .iter()
            .filter(|r| r.agent.total == r.baseline.total)
            .count(),
        losses: rows
            .iter()
            .filter(|r| r.agent.total > r.baseline.total)
            .count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::NetConfig;
    use crate::verify::equivalent_clifford;

    #[test]
    fn stop_policy_is_the_graph_like_circuit() {
        let cfg = EvalConfig {
            episodes: 3,
            policy: EvalPolicy::Stop,
            ..EvalConfig::default()
        };
        let s = evaluate(None, &cfg).unwrap();
        for r in &s.rows {
            let d = Circuit::random(5, 25, GateSet::Clifford, r.seed)
                .to_diagram()
                .to_graph_like();
            assert_eq!(r.agent.total, extract(&d).unwrap().len());
        }
        assert!(!s.report_csv().contains("time_ms"));
    }

    #[test]
    fn greedy_episodes_are_sound() {
        let nets = AgentNets::new(
            NetConfig {
                hidden: 8,
                layers: 2,
                leaky_slope: 0.2,
            },
            3,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for seed in 0..5 {
            let c = Circuit::random(4, 20, GateSet::Clifford, seed);
            let d = c.to_diagram().to_graph_like();
            for policy in [EvalPolicy::Greedy, EvalPolicy::Sample, EvalPolicy::Random] {
                let out = run_episode(Some(&nets), &d, policy, 50, &mut rng);
                assert!(out.actions.len() <= 50);
                assert!(equivalent_clifford(&c, &extract(&out.diagram).unwrap()).unwrap());
            }
        }
    }
}

#[cfg(test)]
mod empty {
    use super::*;

    #[test]
    fn zero_episodes_give_a_header_only_report() {
        let cfg = EvalConfig {
            episodes: 0,
            policy: EvalPolicy::Random,
            ..EvalConfig::default()
        };
        let s = evaluate(None, &cfg).unwrap();
        assert!(s.rows.is_empty());
        assert_eq!(s.report_csv().lines().count(), 1);
        assert_eq!((s.wins, s.ties, s.losses), (0, 0, 0));
    }
}
