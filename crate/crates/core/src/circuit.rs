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

//! Gate-level circuits over {H, Rz(k pi/4), CNOT, CZ}.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeType, VertexKind, ZxDiagram, V};
use crate::phase::Phase;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gate {
    H(usize),
    Rz(usize, Phase),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn s(q: usize) -> Gate {
        Gate::Rz(q, Phase::S)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::Rz(q, Phase::SDG)
    }
    pub fn z(q: usize) -> Gate {
        Gate::Rz(q, Phase::PI)
    }
    pub fn t(q: usize) -> Gate {
        Gate::Rz(q, Phase::T)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::Rz(q, Phase::new(7))
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::Rz(q, _) => (q, None),
            Gate::Cnot(a, b) | Gate::Cz(a, b) => (a, Some(b)),
        }
    }

    pub fn acts_on(&self, q: usize) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Cz(..))
    }

    pub fn is_clifford(&self) -> bool {
        match self {
            Gate::Rz(_, p) => p.is_clifford(),
            _ => true,
        }
    }

    /// The inverse gate.
    pub fn adjoint(&self) -> Gate {
        match *self {
            Gate::Rz(q, p) => Gate::Rz(q, -p),
            g => g,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::Rz(q, p) => write!(f, "rz {q} {}", p.k()),
            Gate::Cnot(c, t) => write!(f, "cnot {c} {t}"),
            Gate::Cz(a, b) => write!(f, "cz {a} {b}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GateSet {
    Clifford,
    CliffordT,
}

impl FromStr for GateSet {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "clifford" => Ok(GateSet::Clifford),
            "cliffordt" | "clifford+t" => Ok(GateSet::CliffordT),
            other => Err(format!("unknown gate set '{other}'")),
        }
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateSet::Clifford => write!(f, "clifford"),
            GateSet::CliffordT => write!(f, "cliffordt"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gate {index} ({gate}) does not fit a {width}-qubit circuit")]
    Width {
        index: usize,
        gate: Gate,
        width: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct GateCounts {
    pub total: usize,
    pub two_qubit: usize,
    pub t_count: usize,
    pub h_count: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n_qubits: usize, gates: Vec<Gate>) -> Circuit {
        Circuit { n_qubits, gates }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, g) in self.gates.iter().enumerate() {
            let (a, b) = g.qubits();
            let bad = a >= self.n_qubits || b.is_some_and(|b| b >= self.n_qubits || b == a);
            if bad {
                return Err(CircuitError::Width {
                    index,
                    gate: *g,
                    width: self.n_qubits,
                });
            }
        }
        Ok(())
    }

    pub fn count_gates(&self) -> GateCounts {
        let mut c = GateCounts {
            total: self.gates.len(),
            ..Default::default()
        };
        for g in &self.gates {
            match g {
                Gate::H(_) => c.h_count += 1,
                Gate::Rz(_, p) if !p.is_clifford() => c.t_count += 1,
                Gate::Cnot(..) | Gate::Cz(..) => c.two_qubit += 1,
                _ => {}
            }
        }
        c
    }

    /// Random circuit with gate types drawn uniformly from {S, H, CNOT}, plus
    /// T for Clifford+T, and distinct qubits drawn uniformly per gate.
    pub fn random(n_qubits: usize, n_gates: usize, set: GateSet, seed: u64) -> Circuit {
        assert!(n_qubits >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds: &[u8] = match set {
            GateSet::Clifford => &[0, 1, 2],
            GateSet::CliffordT => &[0, 1, 2, 3],
        };
        let mut c = Circuit::new(n_qubits);
        while c.gates.len() < n_gates {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let g = match kind {
                0 => Gate::s(rng.gen_range(0..n_qubits)),
                1 => Gate::H(rng.gen_range(0..n_qubits)),
                2 => {
                    if n_qubits < 2 {
                        continue;
                    }
                    let q = sample(&mut rng, n_qubits, 2);
                    Gate::Cnot(q.index(0), q.index(1))
                }
                _ => Gate::t(rng.gen_range(0..n_qubits)),
            };
            c.push(g);
        }
        c
    }

    /// Builds the ZX-diagram of the circuit. The result is generally not
    /// graph-like: CNOT targets are X spiders and wires may be simple.
    pub fn to_diagram(&self) -> ZxDiagram {
        let n = self.n_qubits;
        let mut d = ZxDiagram::empty();
        let inputs: Vec<V> = (0..n).map(|_| d.add_vertex(VertexKind::Boundary)).collect();
        let outputs: Vec<V> = (0..n).map(|_| d.add_vertex(VertexKind::Boundary)).collect();
        let mut last = inputs.clone();
        let mut pending = vec![EdgeType::Simple; n];

        fn place(
            d: &mut ZxDiagram,
            last: &mut [V],
            pending: &mut [EdgeType],
            q: usize,
            kind: VertexKind,
            phase: Phase,
        ) -> V {
            let v = d.add_vertex_with_phase(kind, phase);
            d.add_edge(last[q], v, pending[q]);
            last[q] = v;
            pending[q] = EdgeType::Simple;
            v
        }

        for g in &self.gates {
            match *g {
                Gate::H(q) => pending[q] = pending[q].toggled(),
                Gate::Rz(q, p) => {
                    place(&mut d, &mut last, &mut pending, q, VertexKind::Z, p);
                }
                Gate::Cnot(c, t) => {
                    let a = place(
                        &mut d,
                        &mut last,
                        &mut pending,
                        c,
                        VertexKind::Z,
                        Phase::ZERO,
                    );
                    let b = place(
                        &mut d,
                        &mut last,
                        &mut pending,
                        t,
                        VertexKind::X,
                        Phase::ZERO,
                    );
                    d.add_edge(a, b, EdgeType::Simple);
                }
                Gate::Cz(x, y) => {
                    let a = place(
                        &mut d,
                        &mut last,
                        &mut pending,
                        x,
                        VertexKind::Z,
                        Phase::ZERO,
                    );
                    let b = place(
                        &mut d,
                        &mut last,
                        &mut pending,
                        y,
                        VertexKind::Z,
                        Phase::ZERO,
                    );
                    d.add_edge(a, b, EdgeType::Hadamard);
                }
            }
        }
        for q in 0..n {
            d.add_edge(last[q], outputs[q], pending[q]);
        }
        d.set_inputs(inputs);
        d.set_outputs(outputs);
        d
    }

    /// Parses the line format: `qubits N` followed by one gate per line.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        let err = |line: usize, msg: String| CircuitError::Parse { line, msg };
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap().trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let nums = |count: usize| -> Result<Vec<i64>, CircuitError> {
                if toks.len() != count + 1 {
                    return Err(err(
                        line,
                        format!("'{}' expects {count} operand(s)", toks[0]),
                    ));
                }
                toks[1..]
                    .iter()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| err(line, format!("bad integer '{t}'")))
                    })
                    .collect()
            };
            let Some(c) = circuit.as_mut() else {
                if toks[0] != "qubits" {
                    return Err(err(line, "expected header 'qubits N'".into()));
                }
                let n = nums(1)?[0];
                if n < 1 {
                    return Err(err(line, "qubit count must be positive".into()));
                }
                circuit = Some(Circuit::new(n as usize));
                continue;
            };
            let width = c.n_qubits as i64;
            let qubit = |q: i64| -> Result<usize, CircuitError> {
                if q < 0 || q >= width {
                    Err(err(
                        line,
                        format!("qubit {q} out of range for {width} qubits"),
                    ))
                } else {
                    Ok(q as usize)
                }
            };
            let g = match toks[0].to_ascii_lowercase().as_str() {
                "h" => Gate::H(qubit(nums(1)?[0])?),
                "rz" => {
                    let a = nums(2)?;
                    Gate::Rz(qubit(a[0])?, Phase::new(a[1]))
                }
                "s" => Gate::s(qubit(nums(1)?[0])?),
                "sdg" => Gate::sdg(qubit(nums(1)?[0])?),
                "z" => Gate::z(qubit(nums(1)?[0])?),
                "t" => Gate::t(qubit(nums(1)?[0])?),
                "tdg" => Gate::tdg(qubit(nums(1)?[0])?),
                "cnot" | "cx" | "cz" => {
                    let a = nums(2)?;
                    let (x, y) = (qubit(a[0])?, qubit(a[1])?);
                    if x == y {
                        return Err(err(
                            line,
                            format!("'{}' needs two distinct qubits", toks[0]),
                        ));
                    }
                    if toks[0].eq_ignore_ascii_case("cz") {
                        Gate::Cz(x, y)
                    } else {
                        Gate::Cnot(x, y)
                    }
                }
                other => return Err(err(line, format!("unknown gate '{other}'"))),
            };
            c.push(g);
        }
        circuit.ok_or_else(|| err(0, "missing header 'qubits N'".into()))
    }

    pub fn emit(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Circuit::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        assert_eq!(Circuit::new(2).count_gates(), GateCounts::default());
        let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::Cnot(0, 1), Gate::t(1)]);
        let k = c.count_gates();
        assert_eq!((k.total, k.two_qubit, k.t_count, k.h_count), (3, 1, 1, 1));
    }

    #[test]
    fn random_is_deterministic() {
        assert!(Circuit::random(5, 0, GateSet::Clifford, 3).is_empty());
        let a = Circuit::random(5, 25, GateSet::Clifford, 11);
        assert_eq!(a, Circuit::random(5, 25, GateSet::Clifford, 11));
        assert_eq!(a.len(), 25);
        a.validate().unwrap();
        let one = Circuit::random(1, 30, GateSet::CliffordT, 2);
        assert!(one.gates.iter().all(|g| !g.is_two_qubit()));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let c = Circuit::parse("qubits 1\nh 0").unwrap();
        assert_eq!(c, Circuit::with_gates(1, vec![Gate::H(0)]));
        match Circuit::parse("qubits 1\ncnot 0 1") {
            Err(CircuitError::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Circuit::parse("qubits 2\n\nfoo 1"),
            Err(CircuitError::Parse { line: 3, .. })
        ));
        assert!(Circuit::parse("h 0").is_err());
        assert!(Circuit::parse("").is_err());
    }

    #[test]
    fn cnot_diagram_has_one_z_and_one_x() {
        let d = Circuit::with_gates(2, vec![Gate::Cnot(0, 1)]).to_diagram();
        let z = d.vertices().filter(|&v| d.kind(v) == VertexKind::Z).count();
        let x = d.vertices().filter(|&v| d.kind(v) == VertexKind::X).count();
        assert_eq!((z, x), (1, 1));
    }

    #[test]
    fn hadamard_becomes_a_hadamard_wire() {
        let g = Circuit::with_gates(1, vec![Gate::H(0)])
            .to_diagram()
            .to_graph_like();
        assert!(g.is_graph_like());
        assert_eq!(g.num_spiders(), 2);
        let hs = g.edges().filter(|e| e.2 == EdgeType::Hadamard).count();
        assert_eq!(hs, 1);
    }

    #[test]
    fn two_s_gates_fuse_to_pi() {
        let g = Circuit::with_gates(1, vec![Gate::s(0), Gate::s(0)])
            .to_diagram()
            .to_graph_like();
        assert!(g
            .vertices()
            .any(|v| g.is_spider(v) && g.phase(v) == Phase::PI));
        assert_eq!(
            g.vertices()
                .filter(|&v| g.is_spider(v) && !g.phase(v).is_zero())
                .count(),
            1
        );
    }

    #[test]
    fn cnot_count_matches_uniform_mean() {
        // three equiprobable types: expected 100/3 CNOTs per circuit
        let n = 1000;
        let counts: Vec<f64> = (0..n)
            .map(|s| {
                Circuit::random(10, 100, GateSet::Clifford, s)
                    .count_gates()
                    .two_qubit as f64
            })
            .collect();
        let mean = counts.iter().sum::<f64>() / n as f64;
        let sigma = (100.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt() / (n as f64).sqrt();
        assert!((mean - 100.0 / 3.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    proptest! {
        #[test]
        fn text_round_trip(q in 1usize..6, g in 0usize..40, seed in any::<u64>()) {
            let c = Circuit::random(q, g, GateSet::CliffordT, seed);
            prop_assert_eq!(Circuit::parse(&c.emit()).unwrap(), c);
        }
    }
}
