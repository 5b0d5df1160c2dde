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

//! Gate-count sweeps over the initial circuit size.
//!
//! `fig2` compares the peephole pass, `reduce_all` and `reduce_all` followed
//! by the peephole pass. `fig6` compares extracting straight from graph-like
//! form, `reduce_all` and (given networks) the agent, each with and without
//! the peephole pass. Every table holds per-size means over the seeds.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, GateCounts, GateSet};
use crate::extract::{extract, ExtractError};
use crate::nn::AgentNets;
use crate::peephole::peephole_optimize;
use crate::ppo::{run_episode, EvalPolicy};
use crate::simplify::reduce_all;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub qubits: usize,
    pub gates: Vec<usize>,
    pub seeds: usize,
    /// circuit `s` of every size is `Circuit::random(.., seed + s)`
    pub seed: u64,
    /// agent step cap
    pub max_steps: usize,
    /// add mean wall-clock columns (breaks byte-identical output)
    pub timing: bool,
    pub jobs: usize,
}

impl BenchConfig {
    pub fn fig2() -> BenchConfig {
        BenchConfig {
            qubits: 10,
            gates: vec![25, 50, 100, 150, 200, 300, 400],
            seeds: 100,
            seed: 0,
            max_steps: 200,
            timing: false,
            jobs: 1,
        }
    }

    pub fn fig6() -> BenchConfig {
        BenchConfig {
            qubits: 10,
            gates: vec![25, 50, 75, 100, 150, 200],
            seeds: 50,
            seed: 0,
            max_steps: 200,
            timing: false,
            jobs: 1,
        }
    }
}

/// One circuit's results: counts per output column and milliseconds per
/// timed method.
struct Trial {
    counts: Vec<GateCounts>,
    ms: Vec<f64>,
}

fn table(
    cfg: &BenchConfig,
    set: GateSet,
    methods: &[&str],
    timed: &[&str],
    trial: impl Fn(&Circuit, u64) -> Result<Trial, ExtractError> + Sync,
) -> Result<String, ExtractError> {
    let mut out = String::from("gates");
    for m in methods {
        write!(out, ",{m}_total,{m}_2q").unwrap();
    }
    if cfg.timing {
        for m in timed {
            write!(out, ",{m}_ms").unwrap();
        }
    }
    out.push('\n');
    for &g in &cfg.gates {
        let trials = crate::par::par_map(cfg.seeds, cfg.jobs, |s| {
            let seed = cfg.seed.wrapping_add(s as u64);
            trial(&Circuit::random(cfg.qubits, g, set, seed), seed)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        let n = trials.len().max(1) as f64;
        write!(out, "{g}").unwrap();
        for k in 0..methods.len() {
            let tot: usize = trials.iter().map(|t| t.counts[k].total).sum();
            let two: usize = trials.iter().map(|t| t.counts[k].two_qubit).sum();
            write!(out, ",{:.3},{:.3}", tot as f64 / n, two as f64 / n).unwrap();
        }
        if cfg.timing {
            for k in 0..timed.len() {
                write!(
                    out,
                    ",{:.3}",
                    trials.iter().map(|t| t.ms[k]).sum::<f64>() / n
                )
                .unwrap();
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64() * 1e3)
}

/// Total and two-qubit means for the input, the peephole pass, `reduce_all`
/// (with gadget rules) and `reduce_all` plus peephole.
pub fn fig2(cfg: &BenchConfig, set: GateSet) -> Result<String, ExtractError> {
    table(
        cfg,
        set,
        &["input", "peephole", "reduce_all", "reduce_all_peephole"],
        &["reduce_all"],
        |c, _| {
            let (reduced, ms) =
                timed(|| extract(&reduce_all(&c.to_diagram().to_graph_like(), true)));
            let reduced = reduced?;
            Ok(Trial {
                counts: vec![
                    c.count_gates(),
                    peephole_optimize(c).count_gates(),
                    reduced.count_gates(),
                    peephole_optimize(&reduced).count_gates(),
                ],
                ms: vec![ms],
            })
        },
    )
}

/// Means for extraction straight from graph-like form, `reduce_all` and, if
/// `nets` is given, the greedy agent; each also with the peephole pass.
pub fn fig6(
    cfg: &BenchConfig,
    set: GateSet,
    nets: Option<&AgentNets>,
) -> Result<String, ExtractError> {
    let mut methods = vec![
        "input",
        "no_action",
        "no_action_peephole",
        "reduce_all",
        "reduce_all_peephole",
    ];
    let mut timers = vec!["reduce_all"];
    if nets.is_some() {
        methods.extend(["agent", "agent_peephole"]);
        timers.push("agent");
    }
    table(cfg, set, &methods, &timers, |c, seed| {
        let d = c.to_diagram().to_graph_like();
        let plain = extract(&d)?;
        let (reduced, ms) = timed(|| extract(&reduce_all(&d, false)));
        let reduced = reduced?;
        let mut counts = vec![
            c.count_gates(),
            plain.count_gates(),
            peephole_optimize(&plain).count_gates(),
            reduced.count_gates(),
            peephole_optimize(&reduced).count_gates(),
        ];
        let mut ms = vec![ms];
        if let Some(nets) = nets {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (agent, t) = timed(|| {
                extract(
                    &run_episode(Some(nets), &d, EvalPolicy::Greedy, cfg.max_steps, &mut rng)
                        .diagram,
                )
            });
            let agent = agent?;
            counts.extend([agent.count_gates(), peephole_optimize(&agent).count_gates()]);
            ms.push(t);
        }
        Ok(Trial { counts, ms })
    })
}
