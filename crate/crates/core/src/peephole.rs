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

//! A deliberately small gate-level optimiser: cancel adjacent self-inverse
//! pairs, merge Rz rotations, and let Rz slide past CNOT controls and CZs.

use crate::circuit::{Circuit, Gate};

/// Whether `a` and `b` may swap places under the single commutation class.
fn commutes(a: &Gate, b: &Gate) -> bool {
    let (a0, a1) = a.qubits();
    let shared = b.acts_on(a0) || a1.is_some_and(|q| b.acts_on(q));
    if !shared {
        return true;
    }
    let diag_on = |g: &Gate, q: usize| match *g {
        Gate::Rz(..) | Gate::Cz(..) => true,
        Gate::Cnot(c, _) => c == q,
        Gate::H(_) => false,
    };
    match (a, b) {
        (Gate::Rz(q, _), other) | (other, Gate::Rz(q, _)) => diag_on(other, *q),
        _ => false,
    }
}

enum Merge {
    Cancel,
    Replace(Gate),
}

fn merge(a: &Gate, b: &Gate) -> Option<Merge> {
    match (*a, *b) {
        (Gate::H(p), Gate::H(q)) if p == q => Some(Merge::Cancel),
        (Gate::Cnot(c1, t1), Gate::Cnot(c2, t2)) if (c1, t1) == (c2, t2) => Some(Merge::Cancel),
        (Gate::Cz(a1, b1), Gate::Cz(a2, b2))
            if (a1.min(b1), a1.max(b1)) == (a2.min(b2), a2.max(b2)) =>
        {
            Some(Merge::Cancel)
        }
        (Gate::Rz(p, x), Gate::Rz(q, y)) if p == q => {
            let s = x + y;
            Some(if s.is_zero() {
                Merge::Cancel
            } else {
                Merge::Replace(Gate::Rz(p, s))
            })
        }
        _ => None,
    }
}

/// One left-to-right pass. Each gate looks back through gates it commutes
/// with for a partner to cancel or merge with.
fn pass(gates: &[Gate]) -> (Vec<Gate>, bool) {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    let mut changed = false;
    for g in gates {
        let mut placed = false;
        for j in (0..out.len()).rev() {
            if let Some(m) = merge(&out[j], g) {
                match m {
                    Merge::Cancel => {
                        out.remove(j);
                    }
                    Merge::Replace(r) => out[j] = r,
                }
                placed = true;
                changed = true;
                break;
            }
            if !commutes(&out[j], g) {
                break;
            }
        }
        if !placed {
            if let Gate::Rz(_, p) = g {
                if p.is_zero() {
                    changed = true;
                    continue;
                }
            }
            out.push(*g);
        }
    }
    (out, changed)
}

/// Applies the rules to a fixed point. Never increases the gate count.
pub fn peephole_optimize(c: &Circuit) -> Circuit {
    let mut gates = c.gates.clone();
    loop {
        let (next, changed) = pass(&gates);
        gates = next;
        if !changed {
            return Circuit::with_gates(c.n_qubits, gates);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateSet;
    use crate::phase::Phase;
    use crate::verify::{equivalent_clifford, equivalent_dense};

    #[test]
    fn cancellations() {
        let c = Circuit::with_gates(1, vec![Gate::H(0), Gate::H(0)]);
        assert!(peephole_optimize(&c).is_empty());
        let c = Circuit::with_gates(1, vec![Gate::s(0); 4]);
        assert!(peephole_optimize(&c).is_empty());
        let c = Circuit::with_gates(2, vec![Gate::Cz(0, 1), Gate::Cz(1, 0)]);
        assert!(peephole_optimize(&c).is_empty());
    }

    #[test]
    fn rotation_slides_past_control() {
        let c = Circuit::with_gates(2, vec![Gate::t(0), Gate::Cnot(0, 1), Gate::t(0)]);
        let o = peephole_optimize(&c);
        assert_eq!(o.len(), 2);
        assert!(o.gates.contains(&Gate::Rz(0, Phase::S)));
        // but not past a target
        let c = Circuit::with_gates(2, vec![Gate::t(1), Gate::Cnot(0, 1), Gate::t(1)]);
        assert_eq!(peephole_optimize(&c).len(), 3);
    }

    #[test]
    fn cnots_cancel_across_diagonal_gates() {
        let c = Circuit::with_gates(3, vec![Gate::Cnot(0, 1), Gate::s(0), Gate::Cnot(0, 1)]);
        assert_eq!(peephole_optimize(&c).gates, vec![Gate::s(0)]);
    }

    #[test]
    fn random_circuits_shrink_soundly() {
        for seed in 0..100 {
            let c = Circuit::random(4, 40, GateSet::Clifford, seed);
            let o = peephole_optimize(&c);
            assert!(o.len() <= c.len());
            assert!(equivalent_clifford(&c, &o).unwrap());
            assert_eq!(peephole_optimize(&o), o);
            let t = Circuit::random(3, 30, GateSet::CliffordT, seed);
            assert!(equivalent_dense(&t, &peephole_optimize(&t)).unwrap());
        }
    }
}
