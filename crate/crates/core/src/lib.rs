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

//! ZX-calculus circuit optimisation with a reinforcement-learning agent.
//!
//! Circuits become graph-like ZX-diagrams ([`graph`]), get rewritten
//! ([`rewrite`], [`simplify`]) and are turned back into circuits
//! ([`extract`]). [`env`], [`nn`] and [`ppo`] train a graph-attention policy
//! that picks the rewrites.

pub mod bench;
pub mod circuit;
pub mod config;
pub mod env;
pub mod extract;
pub mod graph;
pub mod nn;
mod par;
pub mod peephole;
pub mod phase;
pub mod ppo;
pub mod rewrite;
pub mod serial;
pub mod simplify;
pub mod verify;

pub use circuit::{Circuit, Gate, GateCounts, GateSet};
pub use extract::extract;
pub use graph::{EdgeType, VertexKind, ZxDiagram, V};
pub use peephole::peephole_optimize;
pub use phase::Phase;
pub use rewrite::{enumerate_actions, RewriteAction};
pub use simplify::reduce_all;

/// Any error raised by the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] circuit::CircuitError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Env(#[from] env::EnvError),
    #[error(transparent)]
    Checkpoint(#[from] nn::CheckpointError),
    #[error(transparent)]
    Ppo(#[from] ppo::PpoError),
    #[error(transparent)]
    Extract(#[from] extract::ExtractError),
    #[error(transparent)]
    Rewrite(#[from] rewrite::RewriteError),
    #[error(transparent)]
    Serial(#[from] serial::SerialError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
