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

//! Runs the actor and critic on a policy graph built from a diagram.

use zxrl::env::build_policy_graph;
use zxrl::nn::{AgentNets, NetConfig};
use zxrl::{enumerate_actions, Circuit, GateSet};

fn main() {
    let d = Circuit::random(5, 40, GateSet::Clifford, 2)
        .to_diagram()
        .to_graph_like();
    let actions = enumerate_actions(&d, false);
    let pg = build_policy_graph(&d, &actions);
    println!(
        "actor graph: {} nodes ({} actions), {} directed edges",
        pg.actor.num_nodes,
        pg.num_actions(),
        pg.actor.num_edges()
    );
    let nets = AgentNets::new(NetConfig::default(), 0);
    println!("{} parameters", nets.num_scalars());
    let p = nets.policy(&pg.actor, &pg.action_nodes);
    let mut ranked: Vec<usize> = (0..p.len()).collect();
    ranked.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    for &k in ranked.iter().take(5) {
        println!("  {:<40} p = {:.4}", pg.actions[k].to_string(), p[k]);
    }
    println!("value estimate {:.4}", nets.value(&pg.critic));
}
