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

//! Converts a small circuit to a graph-like diagram and prints it.

use zxrl::{serial, Circuit, Gate};

fn main() {
    let c = Circuit::with_gates(
        2,
        vec![
            Gate::H(0),
            Gate::Cnot(0, 1),
            Gate::t(1),
            Gate::Cz(0, 1),
            Gate::H(1),
        ],
    );
    let d = c.to_diagram();
    println!(
        "raw diagram: {} spiders, {} edges, graph-like: {}",
        d.num_spiders(),
        d.num_edges(),
        d.is_graph_like()
    );
    let g = d.to_graph_like();
    println!(
        "graph-like:  {} spiders, {} edges, graph-like: {}",
        g.num_spiders(),
        g.num_edges(),
        g.is_graph_like()
    );
    print!("{}", serial::serialize(&g));
}
