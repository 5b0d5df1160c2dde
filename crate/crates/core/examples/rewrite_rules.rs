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

//! Lists the rewrites available on a random diagram and applies a few by hand.

use zxrl::rewrite::{self, RewriteAction};
use zxrl::verify::equivalent_clifford;
use zxrl::{extract, Circuit, GateSet};

fn main() {
    let c = Circuit::random(4, 30, GateSet::Clifford, 7);
    let mut d = c.to_diagram().to_graph_like();
    loop {
        let actions = rewrite::enumerate_actions(&d, false);
        println!("{} spiders, {} actions", d.num_spiders(), actions.len());
        for a in actions.iter().take(6) {
            println!("  {a}");
        }
        let Some(a) = actions.iter().find(|a| **a != RewriteAction::Stop) else {
            break;
        };
        println!("apply {a}");
        rewrite::apply_mut(&mut d, a).unwrap();
    }
    let e = extract(&d).unwrap();
    println!(
        "extracted {} gates from {}; equivalent: {}",
        e.len(),
        c.len(),
        equivalent_clifford(&c, &e).unwrap()
    );
}
