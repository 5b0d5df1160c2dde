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

//! A reduced gate-count sweep: input, peephole only, reduce_all and
//! reduce_all followed by peephole, as CSV.

use zxrl::bench::{self, BenchConfig};
use zxrl::GateSet;

fn main() {
    let cfg = BenchConfig {
        qubits: 6,
        gates: vec![20, 40, 80, 160],
        seeds: 20,
        ..BenchConfig::fig2()
    };
    for set in [GateSet::Clifford, GateSet::CliffordT] {
        println!("# {set:?}");
        print!("{}", bench::fig2(&cfg, set).unwrap());
    }
}
