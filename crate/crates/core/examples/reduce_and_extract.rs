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

//! The fixed `reduce_all` strategy followed by extraction and the peephole
//! pass, on Clifford and Clifford+T circuits.

use zxrl::verify::equivalent;
use zxrl::{extract, peephole_optimize, reduce_all, Circuit, GateSet};

fn main() {
    for (set, gadgets) in [(GateSet::Clifford, false), (GateSet::CliffordT, true)] {
        let c = Circuit::random(5, 60, set, 3);
        let reduced = reduce_all(&c.to_diagram().to_graph_like(), gadgets);
        let e = extract(&reduced).unwrap();
        let p = peephole_optimize(&e);
        let (a, b, q) = (c.count_gates(), e.count_gates(), p.count_gates());
        println!(
            "{set:?}: input {} ({} 2q), extracted {} ({} 2q), peephole {} ({} 2q)",
            a.total, a.two_qubit, b.total, b.two_qubit, q.total, q.two_qubit
        );
        println!("  equivalent: {}", equivalent(&c, &p).unwrap());
    }
}
