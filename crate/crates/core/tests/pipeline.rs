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

//! End-to-end semantic checks of conversion, rewriting and extraction
//! against the tableau and dense-unitary oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zxrl::rewrite::{self, RewriteAction};
use zxrl::simplify::{reduce_all_with, ReduceOptions};
use zxrl::verify::{equivalent_clifford, equivalent_dense, Tableau};
use zxrl::{extract, peephole_optimize, reduce_all, Circuit, Gate, GateSet, ZxDiagram};

fn random_walk(
    d: &mut ZxDiagram,
    steps: usize,
    gadgets: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<RewriteAction> {
    let mut taken = Vec::new();
    for _ in 0..steps {
        let acts = rewrite::enumerate_actions(d, gadgets);
        if acts.len() == 1 {
            break;
        }
        let a = acts[rng.gen_range(0..acts.len() - 1)];
        let before = d.num_spiders();
        rewrite::apply_mut(d, &a).unwrap();
        assert!(
            d.is_graph_like(),
            "{a} broke graph-likeness: {:?}",
            d.check_graph_like()
        );
        match a {
            RewriteAction::LocalComp { .. } => assert_eq!(d.num_spiders(), before - 1),
            RewriteAction::Pivot { .. } => assert_eq!(d.num_spiders(), before - 2),
            RewriteAction::IdentityRemove { .. } => assert!(d.num_spiders() < before),
            _ => {}
        }
        taken.push(a);
    }
    taken
}

#[test]
fn graph_like_conversion_preserves_clifford_semantics() {
    for seed in 0..100 {
        let c = Circuit::random(4, 20, GateSet::Clifford, seed);
        let g = c.to_diagram().to_graph_like();
        assert!(g.is_graph_like());
        assert!(equivalent_clifford(&c, &extract(&g).unwrap()).unwrap());
    }
}

#[test]
fn conversion_round_trip_200() {
    for seed in 0..200 {
        let c = Circuit::random(4, 25, GateSet::Clifford, 10_000 + seed);
        let e = extract(&c.to_diagram().to_graph_like()).unwrap();
        assert!(equivalent_clifford(&c, &e).unwrap(), "seed {seed}");
    }
}

#[test]
fn random_rewrites_keep_clifford_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..300 {
        let q = rng.gen_range(2..=6);
        let n = rng.gen_range(5..=60);
        let c = Circuit::random(q, n, GateSet::Clifford, seed);
        let mut d = c.to_diagram().to_graph_like();
        let k = rng.gen_range(0..=40);
        let taken = random_walk(&mut d, k, false, &mut rng);
        let e = extract(&d).unwrap_or_else(|err| panic!("seed {seed} after {taken:?}: {err}"));
        assert!(
            equivalent_clifford(&c, &e).unwrap(),
            "seed {seed} after {taken:?}"
        );
    }
}

#[test]
fn random_rewrites_keep_clifford_t_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..200 {
        let q = rng.gen_range(1..=4);
        let n = rng.gen_range(5..=40);
        let c = Circuit::random(q, n, GateSet::CliffordT, seed);
        let mut d = c.to_diagram().to_graph_like();
        let taken = random_walk(&mut d, 30, true, &mut rng);
        let e = extract(&d).unwrap_or_else(|err| panic!("seed {seed} after {taken:?}: {err}"));
        assert!(
            equivalent_dense(&c, &e).unwrap(),
            "seed {seed} after {taken:?}"
        );
    }
}

#[test]
fn reduce_all_clifford_is_sound_and_terminal() {
    for seed in 0..150 {
        let q = 2 + (seed as usize % 9);
        let c = Circuit::random(q, 10 * q, GateSet::Clifford, seed);
        let g = reduce_all(&c.to_diagram().to_graph_like(), false);
        assert_eq!(g.num_interior(), 0);
        let e = extract(&g).unwrap();
        assert!(equivalent_clifford(&c, &e).unwrap(), "seed {seed}");
        assert!(equivalent_clifford(&c, &peephole_optimize(&e)).unwrap());
    }
}

#[test]
fn reduce_all_shuffled_is_sound() {
    for seed in 0..60 {
        let c = Circuit::random(5, 50, GateSet::Clifford, seed);
        let opts = ReduceOptions {
            gadgets: false,
            shuffle_seed: Some(seed),
        };
        let g = reduce_all_with(&c.to_diagram().to_graph_like(), opts);
        assert_eq!(g.num_interior(), 0);
        assert!(equivalent_clifford(&c, &extract(&g).unwrap()).unwrap());
    }
}

#[test]
fn reduce_all_clifford_t_is_sound() {
    for seed in 0..150 {
        let q = 1 + (seed as usize % 4);
        let c = Circuit::random(q, 35, GateSet::CliffordT, seed);
        let d = c.to_diagram().to_graph_like();
        for gadgets in [false, true] {
            let g = reduce_all(&d, gadgets);
            assert!(g.is_graph_like());
            let e =
                extract(&g).unwrap_or_else(|err| panic!("seed {seed} gadgets {gadgets}: {err}"));
            assert!(
                equivalent_dense(&c, &e).unwrap(),
                "seed {seed} gadgets {gadgets}"
            );
        }
    }
}

#[test]
fn wide_clifford_pipeline() {
    for seed in 0..10 {
        let c = Circuit::random(20, 300, GateSet::Clifford, seed);
        let g = reduce_all(&c.to_diagram().to_graph_like(), false);
        assert_eq!(g.num_interior(), 0);
        let e = extract(&g).unwrap();
        assert!(equivalent_clifford(&c, &e).unwrap());
        assert!(Tableau::of_circuit(&e).is_ok());
    }
}

#[test]
fn extracted_gate_set_is_closed() {
    let c = Circuit::random(5, 80, GateSet::CliffordT, 3);
    let e = extract(&reduce_all(&c.to_diagram().to_graph_like(), true)).unwrap();
    for g in &e.gates {
        assert!(matches!(
            g,
            Gate::H(_) | Gate::Rz(..) | Gate::Cnot(..) | Gate::Cz(..)
        ));
    }
    e.validate().unwrap();
}
