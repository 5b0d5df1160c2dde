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

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gae::compute_gae;
use super::loss::{normalize_advantages, ppo_loss, Losses, Sample};
use super::{PpoConfig, PpoError};
use crate::env::{EnvConfig, VecEnv};
use crate::nn::{Adam, AgentNets, Grads};

/// One line of the training metrics file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsRow {
    pub step: usize,
    pub mean_return: f64,
    pub l_actor: f64,
    pub l_critic: f64,
    pub entropy: f64,
    pub clip_frac: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainLog {
    pub metrics: Vec<MetricsRow>,
    /// undiscounted return of every finished episode, in completion order
    pub episode_returns: Vec<f64>,
}

impl TrainLog {
    pub const HEADER: &'static str = "step,mean_return,l_actor,l_critic,entropy,clip_frac";

    pub fn metrics_csv(&self) -> String {
        let mut s = format!("{}\n", Self::HEADER);
        for r in &self.metrics {
            writeln!(
                s,
                "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                r.step, r.mean_return, r.l_actor, r.l_critic, r.entropy, r.clip_frac
            )
            .unwrap();
        }
        s
    }

    pub fn returns_csv(&self) -> String {
        let mut s = String::from("episode,return\n");
        for (i, r) in self.episode_returns.iter().enumerate() {
            writeln!(s, "{i},{r:.6}").unwrap();
        }
        s
    }
}

/// Draws an index from `probs`.
pub(crate) fn sample_index(probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // rounding left u above the total; take the last action with mass
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Stateful PPO loop: each [`Trainer::update`] collects one rollout from every
/// environment and runs the optimisation epochs on it.
pub struct Trainer {
    pub nets: AgentNets,
    pub cfg: PpoConfig,
    venv: VecEnv,
    adam: Adam,
    rng: ChaCha8Rng,
    steps: usize,
    running: Vec<f64>,
    last_mean: f64,
    log: TrainLog,
}

impl Trainer {
    pub fn new(nets: AgentNets, env_cfg: &EnvConfig, cfg: PpoConfig) -> Result<Trainer, PpoError> {
        cfg.validate()?;
        let mut env_cfg = env_cfg.clone();
        env_cfg.seed = cfg.seed;
        let venv = VecEnv::new(&env_cfg, cfg.num_envs)?;
        let adam = Adam::new(&nets.params, cfg.learning_rate);
        // the action stream is kept apart from the environment streams
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5050_4f5f_7472_6169);
        Ok(Trainer {
            nets,
            venv,
            adam,
            rng,
            steps: 0,
            running: vec![0.0; cfg.num_envs],
            last_mean: 0.0,
            log: TrainLog::default(),
            cfg,
        })
    }

    /// Environment steps taken so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.steps >= self.cfg.total_steps
    }

    pub fn log(&self) -> &TrainLog {
        &self.log
    }

    pub fn into_parts(self) -> (AgentNets, TrainLog) {
        (self.nets, self.log)
    }

    fn collect(&mut self) -> Result<Vec<Sample>, PpoError> {
        let (ne, ns) = (self.cfg.num_envs, self.cfg.num_steps);
        let mut per_env: Vec<(Vec<Sample>, Vec<f64>, Vec<bool>)> = (0..ne)
            .map(|_| {
                (
                    Vec::with_capacity(ns),
                    Vec::with_capacity(ns),
                    Vec::with_capacity(ns),
                )
            })
            .collect();
        let mut finished = Vec::new();
        for _ in 0..ns {
            for (i, buf) in per_env.iter_mut().enumerate() {
                let obs = self.venv.envs[i].observation().clone();
                let probs = self.nets.policy(&obs.actor, &obs.action_nodes);
                let value = self.nets.value(&obs.critic);
                let k = sample_index(&probs, &mut self.rng);
                let r = self.venv.step(i, obs.action_nodes[k])?;
                self.running[i] += r.reward;
                if r.done {
                    finished.push(self.running[i]);
                    self.running[i] = 0.0;
                }
                buf.0.push(Sample {
                    old_logp: probs[k].ln(),
                    old_value: value,
                    action: k,
                    obs,
                    advantage: 0.0,
                    target: 0.0,
                });
                buf.1.push(r.reward);
                buf.2.push(r.done);
            }
        }
        self.steps += ns * ne;
        if !finished.is_empty() {
            self.last_mean = finished.iter().sum::<f64>() / finished.len() as f64;
        }
        self.log.episode_returns.extend(finished);

        let mut all = Vec::with_capacity(ns * ne);
        for (i, (mut samples, rewards, dones)) in per_env.into_iter().enumerate() {
            let values: Vec<f64> = samples.iter().map(|s| s.old_value).collect();
            let last = self.nets.value(&self.venv.envs[i].observation().critic);
            let (adv, targets) = compute_gae(
                &rewards,
                &values,
                &dones,
                last,
                self.cfg.gamma,
                self.cfg.gae_lambda,
            )
            .expect("rollout buffers have equal length");
            for ((s, a), t) in samples.iter_mut().zip(adv).zip(targets) {
                s.advantage = a;
                s.target = t;
            }
            all.append(&mut samples);
        }
        Ok(all)
    }

    /// Loss and gradient of one minibatch, split over `cfg.jobs` threads.
    /// The split is fixed by the job count, so results do not depend on
    /// scheduling.
    fn minibatch_grad(&self, batch: &[Sample]) -> (Losses, Grads) {
        let coefs = self.cfg.coefs();
        let jobs = self.cfg.jobs.min(batch.len()).max(1);
        if jobs == 1 {
            let mut g = self.nets.zero_grads();
            let l = ppo_loss(&self.nets, batch, coefs, Some(&mut g));
            return (l, g);
        }
        let chunk = batch.len().div_ceil(jobs);
        let parts: Vec<(Losses, Grads, usize)> = std::thread::scope(|s| {
            let handles: Vec<_> = batch
                .chunks(chunk)
                .map(|c| {
                    s.spawn(move || {
                        let mut g = self.nets.zero_grads();
                        let l = ppo_loss(&self.nets, c, coefs, Some(&mut g));
                        (l, g, c.len())
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("gradient worker panicked"))
                .collect()
        });
        let mut total = Losses::default();
        let mut grads = self.nets.zero_grads();
        let n = batch.len() as f64;
        for (l, g, len) in parts {
            let w = len as f64 / n;
            grads.add_scaled(&g, w);
            total.actor += w * l.actor;
            total.critic += w * l.critic;
            total.entropy += w * l.entropy;
            total.total += w * l.total;
            total.clip_frac += w * l.clip_frac;
        }
        (total, grads)
    }

    /// One rollout and its optimisation epochs.
    pub fn update(&mut self) -> Result<MetricsRow, PpoError> {
        let mut samples = self.collect()?;
        let mut sum = Losses::default();
        let mut batches = 0usize;
        let mut order: Vec<usize> = (0..samples.len()).collect();
        for _ in 0..self.cfg.num_epochs {
            order.shuffle(&mut self.rng);
            for idx in order.chunks(self.cfg.minibatch_size) {
                let mut mb: Vec<Sample> = idx.iter().map(|&i| samples[i].clone()).collect();
                if self.cfg.normalize_advantages {
                    normalize_advantages(&mut mb);
                }
                let (l, mut g) = self.minibatch_grad(&mb);
                if !(l.total.is_finite() && g.norm().is_finite()) {
                    return Err(PpoError::NonFinite {
                        step: self.steps,
                        actor: l.actor,
                        critic: l.critic,
                        entropy: l.entropy,
                    });
                }
                let norm = g.norm();
                if self.cfg.grad_clip_norm > 0.0 && norm > self.cfg.grad_clip_norm {
                    g.scale(self.cfg.grad_clip_norm / norm);
                }
                self.adam.step(&mut self.nets.params, &g);
                sum.actor += l.actor;
                sum.critic += l.critic;
                sum.entropy += l.entropy;
                sum.clip_frac += l.clip_frac;
                batches += 1;
            }
        }
        samples.clear();
        let b = batches.max(1) as f64;
        let row = MetricsRow {
            step: self.steps,
            mean_return: self.last_mean,
            l_actor: sum.actor / b,
            l_critic: sum.critic / b,
            entropy: sum.entropy / b,
            clip_frac: sum.clip_frac / b,
        };
        self.log.metrics.push(row);
        Ok(row)
    }
}

/// Trains until `cfg.total_steps` environment steps; `on_update` sees the
/// trainer after every update (for checkpoints and progress output).
pub fn train(
    nets: AgentNets,
    env_cfg: &EnvConfig,
    cfg: PpoConfig,
    mut on_update: impl FnMut(&Trainer, &MetricsRow) -> Result<(), PpoError>,
) -> Result<(AgentNets, TrainLog), PpoError> {
    let mut t = Trainer::new(nets, env_cfg, cfg)?;
    while !t.is_finished() {
        let row = t.update()?;
        on_update(&t, &row)?;
    }
    Ok(t.into_parts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Env;
    use crate::nn::NetConfig;
    use crate::ppo::LossCoefs;

    fn small() -> (EnvConfig, PpoConfig, AgentNets) {
        let env = EnvConfig {
            n_qubits: 3,
            n_gates: 10,
            ..EnvConfig::default()
        };
        let cfg = PpoConfig {
            num_steps: 16,
            num_envs: 2,
            minibatch_size: 16,
            num_epochs: 2,
            total_steps: 64,
            seed: 4,
            ..PpoConfig::default()
        };
        let nets = AgentNets::new(
            NetConfig {
                hidden: 8,
                layers: 2,
                leaky_slope: 0.2,
            },
            4,
        );
        (env, cfg, nets)
    }

    #[test]
    fn runs_to_the_step_budget_and_repeats() {
        let (env, cfg, nets) = small();
        let (a, log_a) = train(nets.clone(), &env, cfg.clone(), |_, _| Ok(())).unwrap();
        assert_eq!(log_a.metrics.len(), 2);
        assert_eq!(log_a.metrics.last().unwrap().step, 64);
        let (b, log_b) = train(nets, &env, cfg, |_, _| Ok(())).unwrap();
        assert_eq!(log_a.metrics_csv(), log_b.metrics_csv());
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn threaded_gradients_match_serial() {
        let (env, cfg, nets) = small();
        let (a, _) = train(nets.clone(), &env, cfg.clone(), |_, _| Ok(())).unwrap();
        let cfg = PpoConfig { jobs: 3, ..cfg };
        let (b, _) = train(nets, &env, cfg, |_, _| Ok(())).unwrap();
        for (x, y) in a.params.iter().zip(&b.params) {
            for (u, v) in x.data.iter().zip(&y.data) {
                assert!((u - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn positive_advantage_raises_the_action_probability() {
        // one state seen over and over, no entropy bonus
        let (_, _, mut nets) = small();
        let e = Env::new(
            EnvConfig {
                n_qubits: 4,
                n_gates: 20,
                ..EnvConfig::default()
            },
            2,
        )
        .unwrap();
        let obs = e.observation().clone();
        assert!(obs.num_actions() > 1);
        let p0 = nets.policy(&obs.actor, &obs.action_nodes)[0];
        let mut adam = Adam::new(&nets.params, 1e-2);
        let coefs = LossCoefs {
            clip_epsilon: 0.1,
            vf_coef: 0.5,
            entropy_coef: 0.0,
        };
        for _ in 0..30 {
            let p = nets.policy(&obs.actor, &obs.action_nodes);
            let s = Sample {
                obs: obs.clone(),
                action: 0,
                old_logp: p[0].ln(),
                old_value: 0.0,
                advantage: 1.0,
                target: 1.0,
            };
            let mut g = nets.zero_grads();
            ppo_loss(&nets, &[s], coefs, Some(&mut g));
            adam.step(&mut nets.params, &g);
        }
        let p1 = nets.policy(&obs.actor, &obs.action_nodes)[0];
        assert!(p1 > p0 + 0.1, "{p0} -> {p1}");
    }
}
