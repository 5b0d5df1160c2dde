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

//! A short PPO run on 4-qubit circuits followed by a greedy evaluation
//! against the fixed strategy. Far too short to beat it; the point is the
//! API. Use the `zxrl train` command for real runs.

use zxrl::env::EnvConfig;
use zxrl::nn::{AgentNets, NetConfig};
use zxrl::ppo::{self, EvalConfig, PpoConfig};

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

fn main() {
    let env = EnvConfig {
        n_qubits: 4,
        n_gates: 20,
        ..EnvConfig::default()
    };
    let cfg = PpoConfig {
        num_steps: 128,
        num_envs: 4,
        minibatch_size: 128,
        num_epochs: 4,
        total_steps: 2048,
        ..PpoConfig::default()
    };
    let nets = AgentNets::new(
        NetConfig {
            hidden: 32,
            ..NetConfig::default()
        },
        0,
    );
    let (nets, log) = ppo::train(nets, &env, cfg, |_, row| {
        println!(
            "step {:>5}  return {:+.3}  actor {:+.4}  critic {:.4}  entropy {:.3}",
            row.step, row.mean_return, row.l_actor, row.l_critic, row.entropy
        );
        Ok(())
    })
    .unwrap();
    println!("{} episodes finished", log.episode_returns.len());

    let summary = ppo::evaluate(
        Some(&nets),
        &EvalConfig {
            n_qubits: 4,
            n_gates: 20,
            episodes: 50,
            ..EvalConfig::default()
        },
    )
    .unwrap();
    println!("{}", summary.summary_line());
}
