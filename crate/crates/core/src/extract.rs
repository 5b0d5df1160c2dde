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

//! Circuit extraction from graph-like diagrams with gflow.
//!
//! A frontier of spiders, one per output, is walked back towards the inputs.
//! Gates are produced output-first and reversed at the end.
//!
//! Row operations on the frontier biadjacency matrix are realised as CNOTs:
//! adding row `c` into row `t` (over GF(2)) toggles the wires between the
//! frontier spider of `t` and the neighbours of `c`, and emits
//! `CNOT(control = qubit of t, target = qubit of c)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::graph::{EdgeType, ZxDiagram, V};
use crate::phase::Phase;
use crate::rewrite;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("extraction stalled with {remaining} spiders left")]
    ExtractionStalled { remaining: usize },
    #[error("diagram has {inputs} inputs and {outputs} outputs")]
    NotUnitary { inputs: usize, outputs: usize },
    #[error("output {0} is not attached to a spider")]
    BadOutput(V),
}

/// Dense GF(2) rows over a fixed column set.
#[derive(Clone, Debug)]
struct BitRows {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    fn new(nrows: usize, ncols: usize) -> BitRows {
        let words = ncols.div_ceil(64).max(1);
        BitRows {
            words,
            rows: vec![vec![0; words]; nrows],
        }
    }
    fn set(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] |= 1 << (c % 64);
    }
    fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }
    fn weight(&self, r: usize) -> u32 {
        self.rows[r].iter().map(|w| w.count_ones()).sum()
    }
    fn add_into(&mut self, c: usize, t: usize) {
        for i in 0..self.words {
            let x = self.rows[c][i];
            self.rows[t][i] ^= x;
        }
    }
    fn ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[r].iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| i * 64 + b)
        })
    }
}

/// Extracts an equivalent circuit (up to global phase).
pub fn extract(d: &ZxDiagram) -> Result<Circuit, ExtractError> {
    let mut g = d.clone();
    let n = g.outputs().len();
    if g.inputs().len() != n {
        return Err(ExtractError::NotUnitary {
            inputs: g.inputs().len(),
            outputs: n,
        });
    }
    let outputs: Vec<V> = g.outputs().to_vec();
    let inputs: Vec<V> = g.inputs().to_vec();
    let mut frontier: Vec<V> = Vec::with_capacity(n);
    for &o in &outputs {
        let f = g.neighbors(o).next().ok_or(ExtractError::BadOutput(o))?;
        if g.is_boundary(f) {
            // a bare wire: give it a spider so every qubit has one
            let s = g.insert_identity_on_boundary(o, f);
            frontier.push(s);
        } else {
            frontier.push(f);
        }
    }
    // gates in reverse time order
    let mut rev: Vec<Gate> = Vec::new();
    // each round extracts or pivots away at least one spider
    let budget = 4 * (g.num_vertices() + n) + 16;

    for round in 0.. {
        if round > budget {
            return Err(ExtractError::ExtractionStalled {
                remaining: g.num_spiders(),
            });
        }
        // phases, output Hadamards and frontier CZs
        for q in 0..n {
            let (f, o) = (frontier[q], outputs[q]);
            if g.edge_type(f, o) == Some(EdgeType::Hadamard) {
                rev.push(Gate::H(q));
                g.set_edge_type(f, o, EdgeType::Simple);
            }
        }
        for q in 0..n {
            let f = frontier[q];
            let p = g.phase(f);
            if !p.is_zero() {
                rev.push(Gate::Rz(q, p));
                g.set_phase(f, Phase::ZERO);
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if g.connected(frontier[a], frontier[b]) {
                    rev.push(Gate::Cz(a, b));
                    g.remove_edge(frontier[a], frontier[b]);
                }
            }
        }

        // frontier spiders touching an input are either finished or get
        // their input wire split off
        let mut done = vec![false; n];
        for q in 0..n {
            let f = frontier[q];
            let Some(i) = g
                .neighbors(f)
                .find(|&w| w != outputs[q] && g.is_boundary(w))
            else {
                continue;
            };
            if g.degree(f) == 2 {
                done[q] = true;
            } else {
                g.insert_identity_on_boundary(i, f);
            }
        }
        if done.iter().all(|&x| x) {
            break;
        }

        if absorb_clifford_leaves(&mut g, &frontier) {
            continue;
        }
        let mut cols: BTreeSet<V> = BTreeSet::new();
        for q in 0..n {
            if !done[q] {
                cols.extend(g.neighbors(frontier[q]).filter(|&w| w != outputs[q]));
            }
        }

        if let Some((q, hub)) = find_gadget(&g, &frontier, &cols) {
            // pivot the frontier spider with the gadget hub; the output wire is
            // split so that a fresh spider takes over the qubit
            let f = frontier[q];
            if let Some(b) = g.boundary_neighbor(hub) {
                g.insert_identity_on_boundary(b, hub);
            }
            if g.phase(hub).is_proper_clifford() {
                // a hub knocked off 0/pi by an earlier local complementation:
                // complementing about it dissolves the gadget
                rewrite::local_comp_unchecked(&mut g, hub);
                continue;
            }
            if !g.phase(hub).is_pauli() {
                rewrite::gadgetize(&mut g, hub);
            }
            let nf = g.insert_identity_on_boundary(outputs[q], f);
            rewrite::pivot_unchecked(&mut g, f, hub);
            frontier[q] = nf;
            continue;
        }

        let cols: Vec<V> = cols.into_iter().collect();
        let mut m = BitRows::new(n, cols.len());
        for q in 0..n {
            if done[q] {
                continue;
            }
            for (c, &w) in cols.iter().enumerate() {
                if g.connected(frontier[q], w) {
                    m.set(q, c);
                }
            }
        }

        if !(0..n).any(|q| m.weight(q) == 1) {
            for (c, t) in gauss_jordan(&mut m.clone()) {
                let targets: Vec<V> = m.ones(c).map(|i| cols[i]).collect();
                for w in targets {
                    g.toggle_hadamard(frontier[t], w);
                }
                m.add_into(c, t);
                rev.push(Gate::Cnot(t, c));
            }
        }

        let mut used: BTreeSet<usize> = BTreeSet::new();
        let mut progressed = false;
        for q in 0..n {
            if m.weight(q) != 1 {
                continue;
            }
            let c = m.ones(q).next().unwrap();
            if !used.insert(c) {
                continue;
            }
            let (f, w) = (frontier[q], cols[c]);
            debug_assert!(g.connected(f, w) && g.degree(f) == 2);
            g.remove_vertex(f);
            g.add_edge(w, outputs[q], EdgeType::Hadamard);
            frontier[q] = w;
            progressed = true;
        }
        if !progressed && !clear_clifford_column(&mut g, &mut frontier, &outputs, &done, &cols) {
            let remaining = g.num_spiders();
            return Err(ExtractError::ExtractionStalled { remaining });
        }
    }

    // every frontier spider now joins output q to some input
    let mut source = vec![0usize; n];
    let mut hs = Vec::new();
    for q in 0..n {
        let f = frontier[q];
        let i = g.neighbors(f).find(|&w| w != outputs[q]).unwrap();
        source[q] = inputs
            .iter()
            .position(|&x| x == i)
            .ok_or(ExtractError::ExtractionStalled { remaining: 0 })?;
        if g.edge_type(f, i) == Some(EdgeType::Hadamard) {
            hs.push(Gate::H(q));
        }
    }
    let mut gates = permutation_gates(&source);
    gates.extend(hs);
    gates.extend(rev.into_iter().rev());
    Ok(Circuit::with_gates(n, gates))
}

/// A frontier spider adjacent to the hub of a phase gadget.
fn find_gadget(g: &ZxDiagram, frontier: &[V], cols: &BTreeSet<V>) -> Option<(usize, V)> {
    for &w in cols {
        if g.is_boundary(w) {
            continue;
        }
        let has_leaf = g
            .neighbors(w)
            .any(|l| g.degree(l) == 1 && !frontier.contains(&l) && g.is_spider(l));
        if !has_leaf {
            continue;
        }
        if let Some(q) = frontier.iter().position(|&f| g.connected(f, w)) {
            return Some((q, w));
        }
    }
    None
}

/// Removes degree-one spiders with Clifford phases hanging off spiders behind
/// the frontier. A proper Clifford leaf is absorbed by local complementation.
/// A Pauli leaf with phase `a` projects its neighbour `w` onto a basis state,
/// so `w` disappears and each of its neighbours picks up `a`.
fn absorb_clifford_leaves(g: &mut ZxDiagram, frontier: &[V]) -> bool {
    let mut any = false;
    let leaves: Vec<V> = g
        .vertices()
        .filter(|&l| g.is_spider(l) && g.degree(l) == 1)
        .collect();
    for l in leaves {
        if !g.contains(l) || g.degree(l) != 1 || frontier.contains(&l) {
            continue;
        }
        let (w, t) = g.incident_edges(l).next().unwrap();
        if !g.is_spider(w) || t != EdgeType::Hadamard {
            continue;
        }
        let a = g.phase(l);
        if a.is_proper_clifford() {
            rewrite::local_comp_unchecked(g, l);
            any = true;
        } else if a.is_pauli() && !frontier.contains(&w) && g.boundary_neighbor(w).is_none() {
            g.remove_vertex(l);
            let nbrs = g.neighbor_vec(w);
            g.remove_vertex(w);
            for x in nbrs {
                g.add_to_phase(x, a);
            }
            any = true;
        }
    }
    any
}

/// Fallback when no row reduces to a single neighbour: a Clifford spider
/// behind the frontier is removed by local complementation (proper Clifford)
/// or by pivoting it with a frontier spider (Pauli).
fn clear_clifford_column(
    g: &mut ZxDiagram,
    frontier: &mut [V],
    outputs: &[V],
    done: &[bool],
    cols: &[V],
) -> bool {
    let Some(&w) = cols
        .iter()
        .find(|&&w| g.is_spider(w) && g.phase(w).is_clifford())
    else {
        return false;
    };
    if let Some(b) = g.boundary_neighbor(w) {
        g.insert_identity_on_boundary(b, w);
    }
    if g.phase(w).is_proper_clifford() {
        rewrite::local_comp_unchecked(g, w);
        return true;
    }
    let q = (0..frontier.len())
        .find(|&q| !done[q] && g.connected(frontier[q], w))
        .unwrap();
    let f = frontier[q];
    let nf = g.insert_identity_on_boundary(outputs[q], f);
    rewrite::pivot_unchecked(g, f, w);
    frontier[q] = nf;
    true
}

/// Gauss-Jordan elimination recording row additions `(from, into)`. The pivot
/// for each column is the lightest remaining row that has it.
fn gauss_jordan(m: &mut BitRows) -> Vec<(usize, usize)> {
    let nrows = m.rows.len();
    let ncols = m.words * 64;
    let mut ops = Vec::new();
    let mut pivoted = vec![false; nrows];
    for c in 0..ncols {
        let pivot = (0..nrows)
            .filter(|&r| !pivoted[r] && m.get(r, c))
            .min_by_key(|&r| (m.weight(r), r));
        let Some(p) = pivot else { continue };
        pivoted[p] = true;
        for r in 0..nrows {
            if r != p && m.get(r, c) {
                m.add_into(p, r);
                ops.push((p, r));
            }
        }
    }
    ops
}

/// Swaps (three CNOTs each) that move the state on input `source[q]` onto
/// qubit `q`.
fn permutation_gates(source: &[usize]) -> Vec<Gate> {
    let n = source.len();
    // cur[pos] = input whose state currently sits on pos
    let mut cur: Vec<usize> = (0..n).collect();
    let mut gates = Vec::new();
    for q in 0..n {
        let pos = cur.iter().position(|&x| x == source[q]).unwrap();
        if pos != q {
            gates.extend([Gate::Cnot(q, pos), Gate::Cnot(pos, q), Gate::Cnot(q, pos)]);
            cur.swap(q, pos);
        }
    }
    gates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateSet;
    use crate::verify::{equivalent_clifford, equivalent_dense};

    #[test]
    fn identity_extracts_to_nothing_but_wires() {
        let c = extract(&ZxDiagram::new(2)).unwrap();
        assert!(c.gates.iter().all(|g| matches!(g, Gate::H(_))));
        assert!(equivalent_clifford(&c, &Circuit::new(2)).unwrap());
    }

    #[test]
    fn single_phase_spider() {
        let c = Circuit::with_gates(1, vec![Gate::s(0)]);
        let e = extract(&c.to_diagram().to_graph_like()).unwrap();
        assert!(e.gates.contains(&Gate::s(0)));
        assert!(equivalent_clifford(&c, &e).unwrap());
    }

    #[test]
    fn round_trips_random_circuits() {
        for seed in 0..100 {
            let c = Circuit::random(4, 30, GateSet::Clifford, seed);
            let e = extract(&c.to_diagram().to_graph_like()).unwrap();
            assert!(equivalent_clifford(&c, &e).unwrap(), "seed {seed}");
            let ct = Circuit::random(3, 20, GateSet::CliffordT, seed);
            let et = extract(&ct.to_diagram().to_graph_like()).unwrap();
            assert!(equivalent_dense(&ct, &et).unwrap(), "t seed {seed}");
        }
    }

    #[test]
    fn permutation_synthesis() {
        let src = [2, 0, 1];
        let c = Circuit::with_gates(3, permutation_gates(&src));
        let u = crate::verify::unitary(&c).unwrap();
        // basis state with only input 2 set must land on qubit 0
        for (i, &s) in src.iter().enumerate() {
            let col = &u[1 << s];
            assert!((col[1 << i].re - 1.0).abs() < 1e-12);
        }
    }
}
