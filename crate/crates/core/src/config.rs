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

//! Run configuration files: one `key = value` per line, `#` starts a
//! comment. Keys are the field names of [`EnvConfig`], [`PpoConfig`] and
//! [`NetConfig`], plus `normalizer.Q.G` entries and `checkpoint_every`.
//! `seed` sets the seed of both the environments and the trainer.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::env::EnvConfig;
use crate::nn::NetConfig;
use crate::ppo::PpoConfig;

/// Environment variable that replaces the configured seed.
pub const SEED_VAR: &str = "ZXRL_SEED";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for '{key}': {msg}")]
    Value {
        line: usize,
        key: String,
        msg: String,
    },
    #[error("{SEED_VAR}: {0}")]
    SeedOverride(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub env: EnvConfig,
    pub ppo: PpoConfig,
    pub net: NetConfig,
    /// write a checkpoint every this many updates (0: only at the end)
    pub checkpoint_every: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            env: EnvConfig::default(),
            ppo: PpoConfig::default(),
            net: NetConfig::default(),
            checkpoint_every: 1,
        }
    }
}

fn parse<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| e.to_string())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            let (k, v) = (k.trim(), v.trim());
            c.set(k, v).map_err(|e| match e {
                None => ConfigError::UnknownKey {
                    line: i + 1,
                    key: k.to_string(),
                },
                Some(msg) => ConfigError::Value {
                    line: i + 1,
                    key: k.to_string(),
                    msg,
                },
            })?;
        }
        Ok(c)
    }

    /// Sets one key; `Err(None)` for an unknown key.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), Option<String>> {
        let (e, p, n) = (&mut self.env, &mut self.ppo, &mut self.net);
        match key {
            "seed" => {
                let s = parse(v)?;
                e.seed = s;
                p.seed = s;
            }
            "n_qubits" => e.n_qubits = parse(v)?,
            "n_gates" => e.n_gates = parse(v)?,
            "gate_set" => e.gate_set = parse(v)?,
            "max_steps" => e.max_steps = parse(v)?,
            "num_steps" => p.num_steps = parse(v)?,
            "num_envs" => p.num_envs = parse(v)?,
            "learning_rate" => p.learning_rate = parse(v)?,
            "num_epochs" => p.num_epochs = parse(v)?,
            "minibatch_size" => p.minibatch_size = parse(v)?,
            "gamma" => p.gamma = parse(v)?,
            "gae_lambda" => p.gae_lambda = parse(v)?,
            "vf_coef" => p.vf_coef = parse(v)?,
            "entropy_coef" => p.entropy_coef = parse(v)?,
            "clip_epsilon" => p.clip_epsilon = parse(v)?,
            "total_steps" => p.total_steps = parse(v)?,
            "grad_clip_norm" => p.grad_clip_norm = parse(v)?,
            "normalize_advantages" => p.normalize_advantages = parse(v)?,
            "jobs" => p.jobs = parse(v)?,
            "hidden" => n.hidden = parse(v)?,
            "layers" => n.layers = parse(v)?,
            "leaky_slope" => n.leaky_slope = parse(v)?,
            "checkpoint_every" => self.checkpoint_every = parse(v)?,
            k if k.starts_with("normalizer.") => e
                .normalizer
                .parse_entry(&k["normalizer.".len()..], v)
                .map_err(Some)?,
            _ => return Err(None),
        }
        Ok(())
    }

    /// Applies `ZXRL_SEED` if it is set.
    pub fn apply_env_overrides(&mut self) -> Result<(), ConfigError> {
        match std::env::var(SEED_VAR) {
            Ok(v) => self
                .set("seed", v.trim())
                .map_err(|e| ConfigError::SeedOverride(e.unwrap_or_default())),
            Err(_) => Ok(()),
        }
    }

    /// The full configuration in the file format; parsing it gives `self` back.
    pub fn emit(&self) -> String {
        let (e, p, n) = (&self.env, &self.ppo, &self.net);
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(s, "{k} = {v}").unwrap();
        kv("seed", &p.seed);
        kv("n_qubits", &e.n_qubits);
        kv("n_gates", &e.n_gates);
        kv("gate_set", &e.gate_set);
        kv("max_steps", &e.max_steps);
        kv("num_steps", &p.num_steps);
        kv("num_envs", &p.num_envs);
        kv("learning_rate", &p.learning_rate);
        kv("num_epochs", &p.num_epochs);
        kv("minibatch_size", &p.minibatch_size);
        kv("gamma", &p.gamma);
        kv("gae_lambda", &p.gae_lambda);
        kv("vf_coef", &p.vf_coef);
        kv("entropy_coef", &p.entropy_coef);
        kv("clip_epsilon", &p.clip_epsilon);
        kv("total_steps", &p.total_steps);
        kv("grad_clip_norm", &p.grad_clip_norm);
        kv("normalize_advantages", &p.normalize_advantages);
        kv("jobs", &p.jobs);
        kv("hidden", &n.hidden);
        kv("layers", &n.layers);
        kv("leaky_slope", &n.leaky_slope);
        kv("checkpoint_every", &self.checkpoint_every);
        s.push_str(&e.normalizer.emit());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateSet;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn keys_and_comments() {
        let c = RunConfig::parse("# run\nseed = 7\ngate_set=cliffordt  # T too\nnormalizer.5.25 = 3.5\nlearning_rate = 1e-3\n").unwrap();
        assert_eq!((c.env.seed, c.ppo.seed), (7, 7));
        assert_eq!(c.env.gate_set, GateSet::CliffordT);
        assert_eq!(c.env.normalizer.get(5, 25), 3.5);
        assert_eq!(c.ppo.learning_rate, 1e-3);
        let mut t = c.clone();
        t.ppo.total_steps = 99;
        assert_eq!(RunConfig::parse(&t.emit()).unwrap(), t);
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(
            RunConfig::parse("seed = 1\nfoo = 2"),
            Err(ConfigError::UnknownKey {
                line: 2,
                key: "foo".into()
            })
        );
        assert_eq!(
            RunConfig::parse("\n\nseed"),
            Err(ConfigError::Syntax { line: 3 })
        );
        assert!(matches!(
            RunConfig::parse("gamma = x"),
            Err(ConfigError::Value { line: 1, .. })
        ));
    }
}
