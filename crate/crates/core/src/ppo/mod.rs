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

//! Proximal policy optimisation for the rewrite agent.

mod eval;
mod gae;
mod loss;
mod trainer;

pub use eval::{
    evaluate, run_episode, EpisodeOutcome, EvalConfig, EvalPolicy, EvalRow, EvalSummary,
};
pub use gae::{compute_gae, GaeLengthError};
pub use loss::{
    actor_term, critic_term, normalize_advantages, ppo_loss, LossCoefs, Losses, Sample,
};
pub use trainer::{train, MetricsRow, TrainLog, Trainer};

use crate::env::EnvError;
use crate::nn::CheckpointError;

#[derive(Debug, thiserror::Error)]
pub enum PpoError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite loss at step {step}: actor {actor} critic {critic} entropy {entropy}")]
    NonFinite {
        step: usize,
        actor: f64,
        critic: f64,
        entropy: f64,
    },
}

/// Training hyperparameters. The defaults are the published settings.
#[derive(Clone, Debug, PartialEq)]
pub struct PpoConfig {
    /// steps collected per environment per update
    pub num_steps: usize,
    pub num_envs: usize,
    pub learning_rate: f64,
    pub num_epochs: usize,
    pub minibatch_size: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub vf_coef: f64,
    pub entropy_coef: f64,
    pub clip_epsilon: f64,
    /// environment steps summed over all environments
    pub total_steps: usize,
    /// 0 disables clipping
    pub grad_clip_norm: f64,
    pub normalize_advantages: bool,
    pub seed: u64,
    /// worker threads for gradient evaluation
    pub jobs: usize,
}

impl Default for PpoConfig {
    fn default() -> PpoConfig {
        PpoConfig {
            num_steps: 512,
            num_envs: 8,
            learning_rate: 2e-4,
            num_epochs: 8,
            minibatch_size: 512,
            gamma: 0.99,
            gae_lambda: 0.95,
            vf_coef: 0.5,
            entropy_coef: 0.01,
            clip_epsilon: 0.1,
            total_steps: 200_000,
            grad_clip_norm: 0.5,
            normalize_advantages: true,
            seed: 0,
            jobs: 1,
        }
    }
}

impl PpoConfig {
    pub fn coefs(&self) -> LossCoefs {
        LossCoefs {
            clip_epsilon: self.clip_epsilon,
            vf_coef: self.vf_coef,
            entropy_coef: self.entropy_coef,
        }
    }

    pub fn validate(&self) -> Result<(), PpoError> {
        let bad = |m: &str| Err(PpoError::Config(m.to_string()));
        if self.num_steps == 0 || self.num_envs == 0 || self.minibatch_size == 0 || self.jobs == 0 {
            return bad("num_steps, num_envs, minibatch_size and jobs must be positive");
        }
        if (self.num_steps * self.num_envs) % self.minibatch_size != 0 {
            return bad("minibatch_size must divide num_steps * num_envs");
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..=1.0).contains(&self.gamma) || !(0.0..=1.0).contains(&self.gae_lambda) {
            return bad("gamma and gae_lambda must lie in [0, 1]");
        }
        if !(self.clip_epsilon >= 0.0) {
            return bad("clip_epsilon must be non-negative");
        }
        Ok(())
    }
}
