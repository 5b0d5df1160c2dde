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

//! The apply-everything baseline: exhaust identity removal, local
//! complementation and pivoting on interior spiders, then clear the remaining
//! interior spiders with boundary pivots.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{ZxDiagram, V};
use crate::rewrite::{self, RewriteAction};

/// Knobs for [`reduce_all_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOptions {
    /// Also use gadget pivots and gadget fusion.
    pub gadgets: bool,
    /// Shuffle each sweep's candidates with this seed instead of visiting
    /// them in ascending vertex order.
    pub shuffle_seed: Option<u64>,
}

/// Upper bound on outer rounds; each productive round removes at least one
/// spider, so this only trips on a bug.
const MAX_ROUNDS: usize = 1 << 20;

struct Sweeper {
    rng: Option<ChaCha8Rng>,
    trace: Option<Vec<RewriteAction>>,
}

impl Sweeper {
    fn order<T>(&mut self, xs: &mut [T]) {
        if let Some(rng) = self.rng.as_mut() {
            xs.shuffle(rng);
        }
    }

    fn record(&mut self, a: RewriteAction) {
        if let Some(t) = self.trace.as_mut() {
            t.push(a);
        }
    }

    /// Applies every still-valid candidate once. Returns whether anything fired.
    fn sweep(&mut self, d: &mut ZxDiagram, mut cands: Vec<RewriteAction>) -> bool {
        self.order(&mut cands);
        let mut any = false;
        for a in cands {
            if rewrite::check(d, &a) {
                rewrite::apply_mut(d, &a).expect("validated rewrite failed");
                self.record(a);
                any = true;
            }
        }
        any
    }

    fn identities(&mut self, d: &mut ZxDiagram) -> bool {
        let mut any = false;
        loop {
            let cands: Vec<RewriteAction> = d
                .vertices()
                .filter(|&v| d.is_interior(v) && rewrite::check_identity(d, v))
                .map(|v| RewriteAction::IdentityRemove { v })
                .collect();
            let removed = d.remove_isolated_spiders() > 0;
            if cands.is_empty() {
                return any || removed;
            }
            any |= self.sweep(d, cands) || removed;
        }
    }

    fn local_comps(&mut self, d: &mut ZxDiagram) -> bool {
        let mut any = false;
        loop {
            let cands: Vec<RewriteAction> = d
                .vertices()
                .filter(|&v| rewrite::check_local_comp(d, v))
                .map(|v| RewriteAction::LocalComp { v })
                .collect();
            if cands.is_empty() || !self.sweep(d, cands) {
                return any;
            }
            any = true;
        }
    }

    fn pivots(&mut self, d: &mut ZxDiagram) -> bool {
        let mut any = false;
        loop {
            let cands: Vec<RewriteAction> = d
                .edges()
                .filter(|&(u, v, _)| rewrite::check_pivot(d, u, v))
                .map(|(u, v, _)| RewriteAction::Pivot { u, v })
                .collect();
            if cands.is_empty() || !self.sweep(d, cands) {
                return any;
            }
            any = true;
        }
    }

    fn gadget_pivots(&mut self, d: &mut ZxDiagram) -> bool {
        let mut any = false;
        loop {
            let mut cands: Vec<(V, V)> = Vec::new();
            for (a, b, _) in d.edges() {
                if rewrite::check_pivot_gadget(d, a, b) {
                    cands.push((a, b));
                } else if rewrite::check_pivot_gadget(d, b, a) {
                    cands.push((b, a));
                }
            }
            self.order(&mut cands);
            let mut fired = false;
            for (u, v) in cands {
                if rewrite::check_pivot_gadget(d, u, v) {
                    rewrite::pivot_with_gadget(d, u, v);
                    fired = true;
                }
            }
            if !fired {
                return any;
            }
            any = true;
        }
    }

    fn gadget_fusions(&mut self, d: &mut ZxDiagram) -> bool {
        let cands: Vec<RewriteAction> = rewrite::enumerate_actions(d, true)
            .into_iter()
            .filter(|a| matches!(a, RewriteAction::GadgetFusion { .. }))
            .collect();
        self.sweep(d, cands)
    }

    fn boundary_pivots(&mut self, d: &mut ZxDiagram) -> bool {
        let cands: Vec<RewriteAction> = rewrite::enumerate_actions(d, false)
            .into_iter()
            .filter(|a| matches!(a, RewriteAction::BoundaryPivot { .. }))
            .collect();
        // one pivot per interior spider; the rest are stale after it fires
        let mut seen = std::collections::BTreeSet::new();
        let cands = cands
            .into_iter()
            .filter(|a| match a {
                RewriteAction::BoundaryPivot { u, .. } => seen.insert(*u),
                _ => false,
            })
            .collect();
        self.sweep(d, cands)
    }
}

fn run(
    d: &mut ZxDiagram,
    opts: ReduceOptions,
    trace: Option<Vec<RewriteAction>>,
) -> Option<Vec<RewriteAction>> {
    let mut s = Sweeper {
        rng: opts.shuffle_seed.map(ChaCha8Rng::seed_from_u64),
        trace,
    };
    for _ in 0..MAX_ROUNDS {
        loop {
            let mut changed = s.identities(d);
            changed |= s.local_comps(d);
            changed |= s.pivots(d);
            if opts.gadgets {
                changed |= s.gadget_pivots(d);
                changed |= s.gadget_fusions(d);
            }
            if !changed {
                break;
            }
        }
        if !s.boundary_pivots(d) {
            return s.trace;
        }
    }
    panic!("reduce_all did not converge");
}

/// Simplifies a graph-like diagram to a fixed point. For Clifford diagrams
/// the result has no interior spiders left.
pub fn reduce_all(d: &ZxDiagram, gadgets: bool) -> ZxDiagram {
    reduce_all_with(
        d,
        ReduceOptions {
            gadgets,
            shuffle_seed: None,
        },
    )
}

pub fn reduce_all_with(d: &ZxDiagram, opts: ReduceOptions) -> ZxDiagram {
    let mut out = d.clone();
    run(&mut out, opts, None);
    out
}

/// Like [`reduce_all`] without gadgets, also returning the agent-visible
/// actions in the order they fired. Isolated-spider removal is not an action
/// and is not recorded.
pub fn reduce_all_traced(d: &ZxDiagram) -> (ZxDiagram, Vec<RewriteAction>) {
    let mut out = d.clone();
    let trace = run(&mut out, ReduceOptions::default(), Some(Vec::new())).unwrap();
    (out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, GateSet};

    #[test]
    fn identity_is_fixed() {
        let d = ZxDiagram::new(3);
        assert_eq!(reduce_all(&d, false), d);
        assert_eq!(reduce_all(&d, true), d);
    }

    #[test]
    fn clifford_leaves_no_interior() {
        for seed in 0..20 {
            let c = Circuit::random(5, 60, GateSet::Clifford, seed);
            let g = reduce_all(&c.to_diagram().to_graph_like(), false);
            assert_eq!(g.num_interior(), 0, "seed {seed}");
            assert!(g.is_graph_like());
        }
    }
}
