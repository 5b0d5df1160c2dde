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

//! Graph-theoretic rewrites on graph-like diagrams.
//!
//! Every rule has a `check_*` function and an in-place `*_unchecked`
//! application. [`apply`] validates first and works on a copy; [`apply_mut`]
//! validates and mutates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeType, VertexKind, ZxDiagram, V};
use crate::phase::Phase;

/// A candidate rewrite. The derived order (variant first, then vertex ids) is
/// the enumeration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RewriteAction {
    LocalComp { v: V },
    Pivot { u: V, v: V },
    BoundaryPivot { u: V, v: V },
    IdentityRemove { v: V },
    GadgetFusion { g1: V, g2: V },
    Stop,
}

impl RewriteAction {
    /// The diagram vertices that define the action.
    pub fn vertices(&self) -> Vec<V> {
        match *self {
            RewriteAction::LocalComp { v } | RewriteAction::IdentityRemove { v } => vec![v],
            RewriteAction::Pivot { u, v } | RewriteAction::BoundaryPivot { u, v } => vec![u, v],
            RewriteAction::GadgetFusion { g1, g2 } => vec![g1, g2],
            RewriteAction::Stop => vec![],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RewriteAction::LocalComp { .. } => "lcomp",
            RewriteAction::Pivot { .. } => "pivot",
            RewriteAction::BoundaryPivot { .. } => "boundary-pivot",
            RewriteAction::IdentityRemove { .. } => "id",
            RewriteAction::GadgetFusion { .. } => "gadget-fusion",
            RewriteAction::Stop => "stop",
        }
    }
}

impl fmt::Display for RewriteAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for v in self.vertices() {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("rejected {action}: {reason}")]
pub struct RewriteError {
    pub action: RewriteAction,
    pub reason: String,
}

fn reject<T>(action: RewriteAction, reason: impl Into<String>) -> Result<T, RewriteError> {
    Err(RewriteError {
        action,
        reason: reason.into(),
    })
}

/// An interior Z spider all of whose wires are Hadamard wires to Z spiders.
fn is_clean_interior(d: &ZxDiagram, v: V) -> bool {
    d.contains(v)
        && d.is_interior(v)
        && d.incident_edges(v)
            .all(|(w, t)| t == EdgeType::Hadamard && d.kind(w) == VertexKind::Z)
}

/// A degree-1 interior spider with non-Clifford phase hanging off a spider
/// with Pauli phase: the phase end of a phase gadget.
pub fn is_gadget_leaf(d: &ZxDiagram, l: V) -> bool {
    if !d.contains(l) || !d.is_interior(l) || d.degree(l) != 1 || d.phase(l).is_clifford() {
        return false;
    }
    let h = d.neighbors(l).next().unwrap();
    d.edge_type(l, h) == Some(EdgeType::Hadamard)
        && d.is_interior(h)
        && d.phase(h).is_pauli()
        && d.degree(h) > 1
}

/// The leaf of the gadget whose hub is `h`, if `h` is a hub of exactly one.
pub fn gadget_leaf_of(d: &ZxDiagram, h: V) -> Option<V> {
    if !d.contains(h) || !d.is_interior(h) || !d.phase(h).is_pauli() {
        return None;
    }
    let mut leaves = d.neighbors(h).filter(|&l| is_gadget_leaf(d, l));
    let l = leaves.next()?;
    leaves.next().is_none().then_some(l)
}

pub fn is_gadget_hub(d: &ZxDiagram, h: V) -> bool {
    d.contains(h) && d.neighbors(h).any(|l| is_gadget_leaf(d, l))
}

pub fn check_local_comp(d: &ZxDiagram, v: V) -> bool {
    is_clean_interior(d, v) && d.phase(v).is_proper_clifford()
}

pub fn check_pivot(d: &ZxDiagram, u: V, v: V) -> bool {
    u != v
        && is_clean_interior(d, u)
        && is_clean_interior(d, v)
        && d.connected(u, v)
        && d.phase(u).is_pauli()
        && d.phase(v).is_pauli()
        && !is_gadget_hub(d, u)
        && !is_gadget_hub(d, v)
}

pub fn check_boundary_pivot(d: &ZxDiagram, u: V, v: V) -> bool {
    if u == v || !is_clean_interior(d, u) || !d.phase(u).is_pauli() || is_gadget_hub(d, u) {
        return false;
    }
    if !d.contains(v) || d.kind(v) != VertexKind::Z || d.edge_type(u, v) != Some(EdgeType::Hadamard)
    {
        return false;
    }
    let mut nb = 0;
    for (w, t) in d.incident_edges(v) {
        if d.is_boundary(w) {
            nb += 1;
        } else if t != EdgeType::Hadamard || d.kind(w) != VertexKind::Z {
            return false;
        }
    }
    nb == 1
}

pub fn check_identity(d: &ZxDiagram, v: V) -> bool {
    if !d.contains(v) || d.kind(v) != VertexKind::Z || !d.phase(v).is_zero() || d.degree(v) != 2 {
        return false;
    }
    let nb: Vec<(V, EdgeType)> = d.incident_edges(v).collect();
    let bounds = nb.iter().filter(|(w, _)| d.is_boundary(*w)).count();
    match bounds {
        0 => nb
            .iter()
            .all(|&(w, t)| t == EdgeType::Hadamard && d.kind(w) == VertexKind::Z),
        1 => {
            // the remaining spider must be free to take the boundary over
            let &(s, t) = nb.iter().find(|(w, _)| !d.is_boundary(*w)).unwrap();
            t == EdgeType::Hadamard
                && d.kind(s) == VertexKind::Z
                && d.boundary_neighbor(s).is_none()
        }
        _ => false,
    }
}

/// Hub `h` and leaf `l` of a gadget, with the set of its other neighbours.
fn gadget_signature(d: &ZxDiagram, h: V) -> Option<(V, BTreeSet<V>)> {
    let l = gadget_leaf_of(d, h)?;
    let rest: BTreeSet<V> = d.neighbors(h).filter(|&w| w != l).collect();
    if rest.iter().any(|&w| !d.is_spider(w)) {
        return None;
    }
    if d.incident_edges(h).any(|(_, t)| t != EdgeType::Hadamard) {
        return None;
    }
    Some((l, rest))
}

pub fn check_gadget_fusion(d: &ZxDiagram, g1: V, g2: V) -> bool {
    if g1 == g2 {
        return false;
    }
    match (gadget_signature(d, g1), gadget_signature(d, g2)) {
        (Some((_, a)), Some((_, b))) => a == b,
        _ => false,
    }
}

pub fn check(d: &ZxDiagram, a: &RewriteAction) -> bool {
    match *a {
        RewriteAction::LocalComp { v } => check_local_comp(d, v),
        RewriteAction::Pivot { u, v } => check_pivot(d, u, v),
        RewriteAction::BoundaryPivot { u, v } => check_boundary_pivot(d, u, v),
        RewriteAction::IdentityRemove { v } => check_identity(d, v),
        RewriteAction::GadgetFusion { g1, g2 } => check_gadget_fusion(d, g1, g2),
        RewriteAction::Stop => true,
    }
}

/// All feasible rewrites in canonical order, ending with `Stop`.
///
/// Identity removal is only offered on interior spiders; gadget fusion only
/// when `include_gadgets` is set.
pub fn enumerate_actions(d: &ZxDiagram, include_gadgets: bool) -> Vec<RewriteAction> {
    let mut out = Vec::new();
    let interior: Vec<V> = d.vertices().filter(|&v| is_clean_interior(d, v)).collect();
    let hubs: BTreeSet<V> = interior
        .iter()
        .copied()
        .filter(|&v| is_gadget_hub(d, v))
        .collect();

    for &v in &interior {
        if d.phase(v).is_proper_clifford() {
            out.push(RewriteAction::LocalComp { v });
        }
    }
    for &u in &interior {
        if !d.phase(u).is_pauli() || hubs.contains(&u) {
            continue;
        }
        for w in d.neighbors(u) {
            if w > u
                && d.is_interior(w)
                && d.phase(w).is_pauli()
                && !hubs.contains(&w)
                && is_clean_interior(d, w)
            {
                out.push(RewriteAction::Pivot { u, v: w });
            }
        }
    }
    for &u in &interior {
        if !d.phase(u).is_pauli() || hubs.contains(&u) {
            continue;
        }
        for w in d.neighbors(u) {
            if d.boundary_neighbor(w).is_some() && check_boundary_pivot(d, u, w) {
                out.push(RewriteAction::BoundaryPivot { u, v: w });
            }
        }
    }
    for &v in &interior {
        if d.phase(v).is_zero() && d.degree(v) == 2 {
            out.push(RewriteAction::IdentityRemove { v });
        }
    }
    if include_gadgets {
        let mut groups: BTreeMap<BTreeSet<V>, Vec<V>> = BTreeMap::new();
        for &h in &hubs {
            if let Some((_, sig)) = gadget_signature(d, h) {
                groups.entry(sig).or_default().push(h);
            }
        }
        let mut pairs = Vec::new();
        for hs in groups.values() {
            for i in 0..hs.len() {
                for j in i + 1..hs.len() {
                    pairs.push(RewriteAction::GadgetFusion {
                        g1: hs[i],
                        g2: hs[j],
                    });
                }
            }
        }
        pairs.sort();
        out.extend(pairs);
    }
    out.push(RewriteAction::Stop);
    out
}

/// Local complementation about `v`: neighbours pairwise toggled, each losing
/// the phase of `v`, and `v` removed.
pub fn local_comp_unchecked(d: &mut ZxDiagram, v: V) {
    let p = d.phase(v);
    let ns = d.neighbor_vec(v);
    d.remove_vertex(v);
    for (i, &a) in ns.iter().enumerate() {
        d.add_to_phase(a, -p);
        for &b in &ns[i + 1..] {
            d.toggle_hadamard(a, b);
        }
    }
}

/// Pivot about the edge `u`-`v`; both must be Pauli.
pub fn pivot_unchecked(d: &mut ZxDiagram, u: V, v: V) {
    let (pu, pv) = (d.phase(u), d.phase(v));
    let nu: BTreeSet<V> = d.neighbors(u).filter(|&w| w != v).collect();
    let nv: BTreeSet<V> = d.neighbors(v).filter(|&w| w != u).collect();
    let only_u: Vec<V> = nu.difference(&nv).copied().collect();
    let only_v: Vec<V> = nv.difference(&nu).copied().collect();
    let common: Vec<V> = nu.intersection(&nv).copied().collect();
    d.remove_vertex(u);
    d.remove_vertex(v);
    for &a in &only_u {
        for &b in &only_v {
            d.toggle_hadamard(a, b);
        }
        for &c in &common {
            d.toggle_hadamard(a, c);
        }
    }
    for &b in &only_v {
        for &c in &common {
            d.toggle_hadamard(b, c);
        }
    }
    for &a in &only_u {
        d.add_to_phase(a, pv);
    }
    for &b in &only_v {
        d.add_to_phase(b, pu);
    }
    for &c in &common {
        d.add_to_phase(c, pu + pv + Phase::PI);
    }
}

/// Moves the phase of `v` onto a fresh gadget `v -H- hub(0) -H- leaf(a)`,
/// leaving `v` phase-free. Returns `(hub, leaf)`.
pub fn gadgetize(d: &mut ZxDiagram, v: V) -> (V, V) {
    let a = d.phase(v);
    d.set_phase(v, Phase::ZERO);
    let hub = d.add_vertex(VertexKind::Z);
    let leaf = d.add_vertex_with_phase(VertexKind::Z, a);
    d.add_edge(v, hub, EdgeType::Hadamard);
    d.add_edge(hub, leaf, EdgeType::Hadamard);
    (hub, leaf)
}

/// A gadget with hub phase pi equals one with hub phase 0 and negated leaf.
pub fn normalize_gadget(d: &mut ZxDiagram, hub: V, leaf: V) {
    if d.phase(hub) == Phase::PI {
        d.set_phase(hub, Phase::ZERO);
        let p = d.phase(leaf);
        d.set_phase(leaf, -p);
    }
}

/// Pivot of interior Pauli `u` with `v`, which carries a boundary wire.
///
/// The boundary wire is split by one phase-free spider so that `v` becomes
/// interior; a non-Pauli phase on `v` is first moved out to a phase gadget.
pub fn boundary_pivot_unchecked(d: &mut ZxDiagram, u: V, v: V) {
    let b = d
        .boundary_neighbor(v)
        .expect("boundary pivot without a boundary");
    d.insert_identity_on_boundary(b, v);
    pivot_with_gadget(d, u, v);
}

/// Pivot where `v` may carry any phase: non-Pauli phases are deferred to a
/// gadget before pivoting.
pub fn pivot_with_gadget(d: &mut ZxDiagram, u: V, v: V) {
    if d.phase(v).is_pauli() {
        pivot_unchecked(d, u, v);
    } else {
        let (hub, leaf) = gadgetize(d, v);
        pivot_unchecked(d, u, v);
        normalize_gadget(d, hub, leaf);
    }
}

/// Pivot between interior Pauli `u` and interior non-Pauli `v`, leaving the
/// phase of `v` behind on a gadget. Not part of the agent's action space.
pub fn check_pivot_gadget(d: &ZxDiagram, u: V, v: V) -> bool {
    u != v
        && is_clean_interior(d, u)
        && is_clean_interior(d, v)
        && d.connected(u, v)
        && d.phase(u).is_pauli()
        && !d.phase(v).is_pauli()
        && d.degree(v) > 1
        && !is_gadget_hub(d, u)
        && !is_gadget_leaf(d, v)
}

/// Removes the phase-free degree-2 spider `v`, joining its neighbours.
pub fn identity_unchecked(d: &mut ZxDiagram, v: V) {
    let nb: Vec<(V, EdgeType)> = d.incident_edges(v).collect();
    let (a, ta) = nb[0];
    let (b, tb) = nb[1];
    d.remove_vertex(v);
    if d.is_boundary(a) || d.is_boundary(b) {
        let (bd, tbd, s, ts) = if d.is_boundary(a) {
            (a, ta, b, tb)
        } else {
            (b, tb, a, ta)
        };
        d.add_edge(bd, s, tbd.compose(ts));
        return;
    }
    // two Hadamard wires make a plain one, so the neighbours fuse
    d.add_edge_smart(a, b, EdgeType::Simple);
    d.fuse(a, b);
    d.normalize_boundaries();
}

/// Fuses gadget `g2` into gadget `g1` (both named by their hubs).
pub fn gadget_fusion_unchecked(d: &mut ZxDiagram, g1: V, g2: V) {
    let l1 = gadget_leaf_of(d, g1).unwrap();
    let l2 = gadget_leaf_of(d, g2).unwrap();
    normalize_gadget(d, g1, l1);
    normalize_gadget(d, g2, l2);
    let p = d.phase(l2);
    d.add_to_phase(l1, p);
    d.remove_vertex(l2);
    d.remove_vertex(g2);
    if d.phase(l1).is_zero() {
        d.remove_vertex(l1);
        d.remove_vertex(g1);
    }
}

/// Validates and applies `a` in place. `Stop` is a no-op.
pub fn apply_mut(d: &mut ZxDiagram, a: &RewriteAction) -> Result<(), RewriteError> {
    if !check(d, a) {
        return reject(*a, "precondition does not hold");
    }
    match *a {
        RewriteAction::LocalComp { v } => local_comp_unchecked(d, v),
        RewriteAction::Pivot { u, v } => pivot_unchecked(d, u, v),
        RewriteAction::BoundaryPivot { u, v } => boundary_pivot_unchecked(d, u, v),
        RewriteAction::IdentityRemove { v } => identity_unchecked(d, v),
        RewriteAction::GadgetFusion { g1, g2 } => gadget_fusion_unchecked(d, g1, g2),
        RewriteAction::Stop => {}
    }
    Ok(())
}

/// Validates and applies `a` to a copy of `d`.
pub fn apply(d: &ZxDiagram, a: &RewriteAction) -> Result<ZxDiagram, RewriteError> {
    let mut out = d.clone();
    apply_mut(&mut out, a)?;
    Ok(out)
}
