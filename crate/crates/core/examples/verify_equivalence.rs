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

//! Tableau and dense-unitary equivalence checks.

use zxrl::verify::{equivalent_clifford, equivalent_dense, Tableau};
use zxrl::{Circuit, Gate, Phase};

fn main() {
    // CNOT conjugated by Hadamards on both qubits flips control and target
    let a = Circuit::with_gates(
        2,
        vec![
            Gate::H(0),
            Gate::H(1),
            Gate::Cnot(0, 1),
            Gate::H(0),
            Gate::H(1),
        ],
    );
    let b = Circuit::with_gates(2, vec![Gate::Cnot(1, 0)]);
    println!(
        "H.CNOT.H == reversed CNOT (tableau): {}",
        equivalent_clifford(&a, &b).unwrap()
    );

    let t = Tableau::of_circuit(&b).unwrap();
    for row in 0..2 * t.num_qubits() {
        let (sign, x, z) = t.row(row);
        println!("  row {row}: sign {} x {x:02b} z {z:02b}", u8::from(sign));
    }

    // T·T = S, equal up to global phase
    let tt = Circuit::with_gates(1, vec![Gate::t(0), Gate::t(0)]);
    let s = Circuit::with_gates(1, vec![Gate::Rz(0, Phase::new(2))]);
    println!("T.T == S (dense): {}", equivalent_dense(&tt, &s).unwrap());
    let t1 = Circuit::with_gates(1, vec![Gate::t(0)]);
    println!("T == S (dense): {}", equivalent_dense(&t1, &s).unwrap());
}
