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

//! ZX-diagrams as simple undirected graphs.
//!
//! Vertices are indexed by monotone ids that are never reused, and every
//! iteration over vertices or neighbours runs in ascending id order. That
//! ordering is what makes rewrite enumeration and extraction reproducible.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::Phase;

pub type V = usize;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Z,
    X,
    Boundary,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeType {
    Simple,
    Hadamard,
}

impl EdgeType {
    pub fn toggled(self) -> EdgeType {
        match self {
            EdgeType::Simple => EdgeType::Hadamard,
            EdgeType::Hadamard => EdgeType::Simple,
        }
    }

    /// Type of the wire obtained by composing two wires in sequence.
    pub fn compose(self, other: EdgeType) -> EdgeType {
        if self == other {
            EdgeType::Simple
        } else {
            EdgeType::Hadamard
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct VertexData {
    kind: VertexKind,
    phase: Phase,
    nbrs: BTreeMap<V, EdgeType>,
}

/// Reasons a diagram fails the graph-like predicate.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphLikeViolation {
    #[error("vertex {0} is an X spider")]
    XSpider(V),
    #[error("spiders {0} and {1} are joined by a simple wire")]
    SimpleSpiderEdge(V, V),
    #[error("boundary {0} has degree {1}")]
    BoundaryDegree(V, usize),
    #[error("boundary {0} is wired to another boundary {1}")]
    BoundaryToBoundary(V, V),
    #[error("spider {0} touches {1} boundaries")]
    MultipleBoundaries(V, usize),
    #[error("boundary {0} is neither an input nor an output")]
    DanglingBoundary(V),
    #[error("vertex {0} is listed as input/output but is not a boundary")]
    NotABoundary(V),
    #[error("vertex {0} is both an input and an output")]
    InputIsOutput(V),
}

/// An undirected ZX-diagram with at most one wire between any two vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct ZxDiagram {
    slots: Vec<Option<VertexData>>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    num_vertices: usize,
    num_edges: usize,
}

impl Default for ZxDiagram {
    fn default() -> Self {
        ZxDiagram::empty()
    }
}

impl ZxDiagram {
    /// A diagram with no vertices at all.
    pub fn empty() -> ZxDiagram {
        ZxDiagram {
            slots: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            num_vertices: 0,
            num_edges: 0,
        }
    }

    /// The graph-like identity on `n_qubits` wires.
    ///
    /// Each wire is `in -- a -H- b -H- out`: two phase-free spiders so that no
    /// spider touches both an input and an output.
    pub fn new(n_qubits: usize) -> ZxDiagram {
        assert!(n_qubits >= 1, "a diagram needs at least one qubit");
        let mut d = ZxDiagram::empty();
        let inputs: Vec<V> = (0..n_qubits)
            .map(|_| d.add_vertex(VertexKind::Boundary))
            .collect();
        let outputs: Vec<V> = (0..n_qubits)
            .map(|_| d.add_vertex(VertexKind::Boundary))
            .collect();
        for q in 0..n_qubits {
            let a = d.add_vertex(VertexKind::Z);
            let b = d.add_vertex(VertexKind::Z);
            d.add_edge(inputs[q], a, EdgeType::Simple);
            d.add_edge(a, b, EdgeType::Hadamard);
            d.add_edge(b, outputs[q], EdgeType::Hadamard);
        }
        d.inputs = inputs;
        d.outputs = outputs;
        d
    }

    pub fn inputs(&self) -> &[V] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[V] {
        &self.outputs
    }

    pub fn set_inputs(&mut self, inputs: Vec<V>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<V>) {
        self.outputs = outputs;
    }

    pub fn num_qubits(&self) -> usize {
        self.outputs.len()
    }

    /// The id the next added vertex will receive.
    pub fn next_id(&self) -> V {
        self.slots.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> V {
        self.add_vertex_with_phase(kind, Phase::ZERO)
    }

    pub fn add_vertex_with_phase(&mut self, kind: VertexKind, phase: Phase) -> V {
        let v = self.slots.len();
        let phase = if kind == VertexKind::Boundary {
            Phase::ZERO
        } else {
            phase
        };
        self.slots.push(Some(VertexData {
            kind,
            phase,
            nbrs: BTreeMap::new(),
        }));
        self.num_vertices += 1;
        v
    }

    /// Inserts a vertex under a chosen id. Used when loading documents.
    pub(crate) fn add_vertex_at(&mut self, v: V, kind: VertexKind, phase: Phase) -> bool {
        if v < self.slots.len() && self.slots[v].is_some() {
            return false;
        }
        if v >= self.slots.len() {
            self.slots.resize(v + 1, None);
        }
        let phase = if kind == VertexKind::Boundary {
            Phase::ZERO
        } else {
            phase
        };
        self.slots[v] = Some(VertexData {
            kind,
            phase,
            nbrs: BTreeMap::new(),
        });
        self.num_vertices += 1;
        true
    }

    /// Reserves ids up to `next` so that later insertions do not reuse them.
    pub(crate) fn reserve_ids(&mut self, next: V) {
        if next > self.slots.len() {
            self.slots.resize(next, None);
        }
    }

    pub fn remove_vertex(&mut self, v: V) {
        let data = self.slots[v].take().expect("removing a missing vertex");
        for w in data.nbrs.keys() {
            self.data_mut(*w).nbrs.remove(&v);
            self.num_edges -= 1;
        }
        self.num_vertices -= 1;
    }

    pub fn contains(&self, v: V) -> bool {
        v < self.slots.len() && self.slots[v].is_some()
    }

    fn data(&self, v: V) -> &VertexData {
        self.slots[v]
            .as_ref()
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    fn data_mut(&mut self, v: V) -> &mut VertexData {
        self.slots[v]
            .as_mut()
            .unwrap_or_else(|| panic!("vertex {v} does not exist"))
    }

    pub fn kind(&self, v: V) -> VertexKind {
        self.data(v).kind
    }

    pub fn set_kind(&mut self, v: V, kind: VertexKind) {
        self.data_mut(v).kind = kind;
    }

    pub fn phase(&self, v: V) -> Phase {
        self.data(v).phase
    }

    pub fn set_phase(&mut self, v: V, phase: Phase) {
        self.data_mut(v).phase = phase;
    }

    pub fn add_to_phase(&mut self, v: V, phase: Phase) {
        self.data_mut(v).phase += phase;
    }

    pub fn is_boundary(&self, v: V) -> bool {
        self.kind(v) == VertexKind::Boundary
    }

    pub fn is_spider(&self, v: V) -> bool {
        self.kind(v) != VertexKind::Boundary
    }

    pub fn vertices(&self) -> impl Iterator<Item = V> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.as_ref().map(|_| v))
    }

    /// Every edge once, as `(u, v, type)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (V, V, EdgeType)> + '_ {
        self.vertices().flat_map(move |u| {
            self.data(u)
                .nbrs
                .iter()
                .filter(move |(&w, _)| w > u)
                .map(move |(&w, &t)| (u, w, t))
        })
    }

    pub fn neighbors(&self, v: V) -> impl Iterator<Item = V> + '_ {
        self.data(v).nbrs.keys().copied()
    }

    pub fn incident_edges(&self, v: V) -> impl Iterator<Item = (V, EdgeType)> + '_ {
        self.data(v).nbrs.iter().map(|(&w, &t)| (w, t))
    }

    pub fn neighbor_vec(&self, v: V) -> Vec<V> {
        self.neighbors(v).collect()
    }

    pub fn degree(&self, v: V) -> usize {
        self.data(v).nbrs.len()
    }

    pub fn edge_type(&self, u: V, v: V) -> Option<EdgeType> {
        self.data(u).nbrs.get(&v).copied()
    }

    pub fn connected(&self, u: V, v: V) -> bool {
        self.data(u).nbrs.contains_key(&v)
    }

    /// Adds a wire, replacing any existing wire between `u` and `v`.
    pub fn add_edge(&mut self, u: V, v: V, ty: EdgeType) {
        assert_ne!(u, v, "self-loops are not representable");
        let fresh = self.data_mut(u).nbrs.insert(v, ty).is_none();
        self.data_mut(v).nbrs.insert(u, ty);
        if fresh {
            self.num_edges += 1;
        }
    }

    pub fn remove_edge(&mut self, u: V, v: V) {
        if self.data_mut(u).nbrs.remove(&v).is_some() {
            self.data_mut(v).nbrs.remove(&u);
            self.num_edges -= 1;
        }
    }

    pub fn set_edge_type(&mut self, u: V, v: V, ty: EdgeType) {
        debug_assert!(self.connected(u, v));
        self.add_edge(u, v, ty);
    }

    /// Adds a Hadamard wire if absent, removes it if present (hh cancellation).
    pub fn toggle_hadamard(&mut self, u: V, v: V) {
        match self.edge_type(u, v) {
            Some(EdgeType::Hadamard) => self.remove_edge(u, v),
            Some(EdgeType::Simple) => panic!("toggling a simple wire between {u} and {v}"),
            None => self.add_edge(u, v, EdgeType::Hadamard),
        }
    }

    /// Flips the type of an existing wire.
    pub fn toggle_edge_type(&mut self, u: V, v: V) {
        let t = self.edge_type(u, v).expect("toggling a missing wire");
        self.add_edge(u, v, t.toggled());
    }

    /// Adds a wire between two spiders of the same colour, resolving an
    /// existing parallel wire the way a subsequent fusion would.
    ///
    /// Two Hadamard wires annihilate; a Hadamard alongside a simple wire
    /// becomes a simple wire plus a pi phase (the Hadamard self-loop after
    /// fusion).
    pub fn add_edge_smart(&mut self, u: V, v: V, ty: EdgeType) {
        if u == v {
            if ty == EdgeType::Hadamard {
                self.add_to_phase(u, Phase::PI);
            }
            return;
        }
        match (self.edge_type(u, v), ty) {
            (None, t) => self.add_edge(u, v, t),
            (Some(EdgeType::Hadamard), EdgeType::Hadamard) => self.remove_edge(u, v),
            (Some(EdgeType::Simple), EdgeType::Simple) => {}
            (Some(_), _) => {
                self.set_edge_type(u, v, EdgeType::Simple);
                self.add_to_phase(u, Phase::PI);
            }
        }
    }

    /// The unique boundary neighbour of a spider, if any (lowest id first).
    pub fn boundary_neighbor(&self, v: V) -> Option<V> {
        self.neighbors(v).find(|&w| self.is_boundary(w))
    }

    fn boundary_neighbor_count(&self, v: V) -> usize {
        self.neighbors(v).filter(|&w| self.is_boundary(w)).count()
    }

    /// A Z spider with no boundary neighbour.
    pub fn is_interior(&self, v: V) -> bool {
        self.kind(v) == VertexKind::Z && self.boundary_neighbor(v).is_none()
    }

    pub fn num_spiders(&self) -> usize {
        self.vertices().filter(|&v| self.is_spider(v)).count()
    }

    pub fn num_interior(&self) -> usize {
        self.vertices().filter(|&v| self.is_interior(v)).count()
    }

    pub fn is_input(&self, v: V) -> bool {
        self.inputs.contains(&v)
    }

    pub fn is_output(&self, v: V) -> bool {
        self.outputs.contains(&v)
    }

    /// Merges spider `v` into spider `u`; they must share a colour. Any wire
    /// between them is consumed.
    pub fn fuse(&mut self, u: V, v: V) {
        debug_assert_eq!(self.kind(u), self.kind(v));
        let between = self.edge_type(u, v);
        let pv = self.phase(v);
        self.add_to_phase(u, pv);
        if between == Some(EdgeType::Hadamard) {
            self.add_to_phase(u, Phase::PI);
        }
        let rest: Vec<(V, EdgeType)> = self.incident_edges(v).filter(|&(w, _)| w != u).collect();
        self.remove_vertex(v);
        for (w, t) in rest {
            if self.is_boundary(w) {
                self.add_edge(u, w, t);
            } else {
                self.add_edge_smart(u, w, t);
            }
        }
    }

    /// Splits the wire `boundary -- v` by a fresh phase-free spider `s` so
    /// that it reads `boundary -t'- s -H- v`. Returns `s`.
    pub fn insert_identity_on_boundary(&mut self, boundary: V, v: V) -> V {
        let t = self
            .edge_type(boundary, v)
            .expect("boundary is not adjacent");
        self.remove_edge(boundary, v);
        let s = self.add_vertex(VertexKind::Z);
        self.add_edge(boundary, s, t.toggled());
        self.add_edge(s, v, EdgeType::Hadamard);
        s
    }

    /// Restores the boundary conditions of graph-like form: boundary wires go
    /// to spiders, and no spider touches more than one boundary.
    pub fn normalize_boundaries(&mut self) {
        let bounds: Vec<V> = self
            .inputs
            .iter()
            .chain(self.outputs.iter())
            .copied()
            .collect();
        for b in bounds {
            let Some(w) = self.neighbors(b).next() else {
                continue;
            };
            if self.is_boundary(w) {
                // b -t- w  ==  b -- s1 -H- s2 -(t.H)- w
                let t = self.edge_type(b, w).unwrap();
                self.remove_edge(b, w);
                let s1 = self.add_vertex(VertexKind::Z);
                let s2 = self.add_vertex(VertexKind::Z);
                self.add_edge(b, s1, EdgeType::Simple);
                self.add_edge(s1, s2, EdgeType::Hadamard);
                self.add_edge(s2, w, t.toggled());
            }
        }
        let spiders: Vec<V> = self.vertices().filter(|&v| self.is_spider(v)).collect();
        for v in spiders {
            let bs: Vec<V> = self.neighbors(v).filter(|&w| self.is_boundary(w)).collect();
            for &b in bs.iter().skip(1) {
                self.insert_identity_on_boundary(b, v);
            }
        }
    }

    /// Checks the graph-like predicate.
    pub fn check_graph_like(&self) -> Result<(), GraphLikeViolation> {
        for &v in self.inputs.iter().chain(self.outputs.iter()) {
            if !self.contains(v) || !self.is_boundary(v) {
                return Err(GraphLikeViolation::NotABoundary(v));
            }
        }
        for &v in &self.inputs {
            if self.outputs.contains(&v) {
                return Err(GraphLikeViolation::InputIsOutput(v));
            }
        }
        for v in self.vertices() {
            match self.kind(v) {
                VertexKind::X => return Err(GraphLikeViolation::XSpider(v)),
                VertexKind::Boundary => {
                    if !self.is_input(v) && !self.is_output(v) {
                        return Err(GraphLikeViolation::DanglingBoundary(v));
                    }
                    let d = self.degree(v);
                    if d != 1 {
                        return Err(GraphLikeViolation::BoundaryDegree(v, d));
                    }
                    let w = self.neighbors(v).next().unwrap();
                    if self.is_boundary(w) {
                        return Err(GraphLikeViolation::BoundaryToBoundary(v, w));
                    }
                }
                VertexKind::Z => {
                    for (w, t) in self.incident_edges(v) {
                        if self.is_spider(w) && t == EdgeType::Simple {
                            return Err(GraphLikeViolation::SimpleSpiderEdge(v.min(w), v.max(w)));
                        }
                    }
                    let nb = self.boundary_neighbor_count(v);
                    if nb > 1 {
                        return Err(GraphLikeViolation::MultipleBoundaries(v, nb));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_graph_like(&self) -> bool {
        self.check_graph_like().is_ok()
    }

    /// Converts a diagram into graph-like form without changing its meaning.
    ///
    /// X spiders become Z spiders by flipping their wires, Z spiders sharing a
    /// simple wire are fused (parallel Hadamard wires cancel pairwise along the
    /// way), isolated interior spiders are dropped as scalars, and boundaries
    /// are separated by phase-free spiders.
    pub fn to_graph_like(&self) -> ZxDiagram {
        let mut d = self.clone();
        let xs: Vec<V> = d
            .vertices()
            .filter(|&v| d.kind(v) == VertexKind::X)
            .collect();
        for v in xs {
            d.set_kind(v, VertexKind::Z);
            for w in d.neighbor_vec(v) {
                d.toggle_edge_type(v, w);
            }
        }
        loop {
            let simple = d.edges().find(|&(u, v, t)| {
                t == EdgeType::Simple && d.kind(u) == VertexKind::Z && d.kind(v) == VertexKind::Z
            });
            match simple {
                Some((u, v, _)) => d.fuse(u, v),
                None => break,
            }
        }
        d.remove_isolated_spiders();
        d.normalize_boundaries();
        d
    }

    /// Drops spiders with no wires at all (they only contribute a scalar).
    /// Returns how many were removed.
    pub fn remove_isolated_spiders(&mut self) -> usize {
        let iso: Vec<V> = self
            .vertices()
            .filter(|&v| self.is_spider(v) && self.degree(v) == 0)
            .collect();
        for &v in &iso {
            self.remove_vertex(v);
        }
        iso.len()
    }
}

impl fmt::Debug for ZxDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ZxDiagram(inputs={:?}, outputs={:?})",
            self.inputs, self.outputs
        )?;
        for v in self.vertices() {
            let d = self.data(v);
            write!(f, "  {v} {:?} {}:", d.kind, d.phase)?;
            for (w, t) in &d.nbrs {
                let mark = if *t == EdgeType::Hadamard { "h" } else { "" };
                write!(f, " {w}{mark}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_diagram_shape() {
        let d = ZxDiagram::new(1);
        assert_eq!(d.num_vertices(), 4);
        assert_eq!(d.num_spiders(), 2);
        assert_eq!(d.num_edges(), 3);
        assert!(d.is_graph_like());

        let d = ZxDiagram::new(3);
        assert_eq!(d.vertices().filter(|&v| d.is_boundary(v)).count(), 6);
        assert_eq!(d.num_spiders(), 6);
        assert_eq!(d.num_interior(), 0);
    }

    #[test]
    fn edge_toggle_is_involution() {
        let mut d = ZxDiagram::new(2);
        let before = d.clone();
        let (u, v, _) = d.edges().nth(2).unwrap();
        d.toggle_edge_type(u, v);
        assert_ne!(d, before);
        d.toggle_edge_type(u, v);
        assert_eq!(d, before);
    }

    #[test]
    fn smart_edges_cancel_and_flip() {
        let mut d = ZxDiagram::empty();
        let a = d.add_vertex(VertexKind::Z);
        let b = d.add_vertex(VertexKind::Z);
        d.add_edge_smart(a, b, EdgeType::Hadamard);
        d.add_edge_smart(a, b, EdgeType::Hadamard);
        assert!(!d.connected(a, b));
        d.add_edge_smart(a, b, EdgeType::Simple);
        d.add_edge_smart(a, b, EdgeType::Hadamard);
        assert_eq!(d.edge_type(a, b), Some(EdgeType::Simple));
        assert_eq!(d.phase(a), Phase::PI);
    }

    #[test]
    fn fusion_adds_phases() {
        let mut d = ZxDiagram::empty();
        let a = d.add_vertex_with_phase(VertexKind::Z, Phase::S);
        let b = d.add_vertex_with_phase(VertexKind::Z, Phase::S);
        let c = d.add_vertex(VertexKind::Z);
        d.add_edge(a, b, EdgeType::Simple);
        d.add_edge(b, c, EdgeType::Hadamard);
        d.add_edge(a, c, EdgeType::Hadamard);
        d.fuse(a, b);
        assert_eq!(d.phase(a), Phase::PI);
        // the two Hadamard wires to c annihilate
        assert!(!d.connected(a, c));
        assert_eq!(d.num_vertices(), 2);
    }

    #[test]
    fn predicate_catches_violations() {
        let mut d = ZxDiagram::new(1);
        let s = d.vertices().find(|&v| d.is_spider(v)).unwrap();
        d.set_kind(s, VertexKind::X);
        assert_eq!(d.check_graph_like(), Err(GraphLikeViolation::XSpider(s)));

        let mut d = ZxDiagram::new(1);
        let (a, b) = (2, 3);
        d.set_edge_type(a, b, EdgeType::Simple);
        assert_eq!(
            d.check_graph_like(),
            Err(GraphLikeViolation::SimpleSpiderEdge(a, b))
        );
    }

    #[test]
    fn graph_like_separates_shared_boundaries() {
        // in -- z -- out is not graph-like: z touches two boundaries
        let mut d = ZxDiagram::empty();
        let i = d.add_vertex(VertexKind::Boundary);
        let o = d.add_vertex(VertexKind::Boundary);
        let z = d.add_vertex_with_phase(VertexKind::Z, Phase::PI);
        d.add_edge(i, z, EdgeType::Simple);
        d.add_edge(z, o, EdgeType::Simple);
        d.set_inputs(vec![i]);
        d.set_outputs(vec![o]);
        assert!(!d.is_graph_like());
        let g = d.to_graph_like();
        assert!(g.is_graph_like(), "{:?}", g.check_graph_like());
        assert_eq!(g.num_spiders(), 2);
    }

    #[test]
    fn ids_are_never_reused() {
        let mut d = ZxDiagram::new(1);
        let n = d.next_id();
        d.remove_vertex(n - 1);
        let v = d.add_vertex(VertexKind::Z);
        assert_eq!(v, n);
    }
}
