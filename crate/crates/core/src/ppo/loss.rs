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

//! The clipped PPO objective. The scalar parts are differentiated by hand
//! with respect to the action logits and the value; the tape carries those
//! gradients into the networks.

use crate::env::PolicyGraph;
use crate::nn::{softmax, AgentNets, Grads, Tape};

/// One stored transition with its training targets.
#[derive(Clone, Debug)]
pub struct Sample {
    pub obs: PolicyGraph,
    /// index into `obs.actions`
    pub action: usize,
    pub old_logp: f64,
    pub old_value: f64,
    pub advantage: f64,
    pub target: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LossCoefs {
    pub clip_epsilon: f64,
    pub vf_coef: f64,
    pub entropy_coef: f64,
}

/// Batch means of the loss terms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Losses {
    pub actor: f64,
    pub critic: f64,
    pub entropy: f64,
    pub total: f64,
    pub clip_frac: f64,
}

/// Per-sample clipped surrogate `max(-ρA, -clip(ρ, 1-ε, 1+ε)A)` and its
/// derivative with respect to `ρ`.
pub fn actor_term(ratio: f64, adv: f64, eps: f64) -> (f64, f64) {
    let unclipped = -ratio * adv;
    let clipped = -ratio.clamp(1.0 - eps, 1.0 + eps) * adv;
    if unclipped >= clipped {
        (unclipped, -adv)
    } else {
        (clipped, 0.0)
    }
}

/// Per-sample `½ max((V - T)², (V_clip - T)²)` with
/// `V_clip = V_old + clip(V - V_old, -ε, ε)`, and its derivative in `V`.
pub fn critic_term(v: f64, v_old: f64, target: f64, eps: f64) -> (f64, f64) {
    let d = v - v_old;
    let v_clip = v_old + d.clamp(-eps, eps);
    let a = (v - target).powi(2);
    let b = (v_clip - target).powi(2);
    if a >= b {
        (0.5 * a, v - target)
    } else {
        let inside = d.abs() < eps;
        (0.5 * b, if inside { v_clip - target } else { 0.0 })
    }
}

/// Losses over `batch` and, when `grads` is given, their gradient (added in).
/// Advantages are used as stored; normalise them beforehand if wanted.
pub fn ppo_loss(
    nets: &AgentNets,
    batch: &[Sample],
    c: LossCoefs,
    mut grads: Option<&mut Grads>,
) -> Losses {
    let mut out = Losses::default();
    let w = 1.0 / batch.len().max(1) as f64;
    for s in batch {
        let mut tape = Tape::new();
        let actor = nets.actor(&mut tape, &s.obs.actor, &s.obs.action_nodes);
        let critic = nets.critic(&mut tape, &s.obs.critic);
        let z = &tape.value(actor.logits).data;
        let p = softmax(z);
        let logp: Vec<f64> = p.iter().map(|x| x.ln()).collect();
        let entropy: f64 = -p
            .iter()
            .zip(&logp)
            .map(|(a, b)| if *a > 0.0 { a * b } else { 0.0 })
            .sum::<f64>();
        let ratio = (logp[s.action] - s.old_logp).exp();
        let (la, dla_dratio) = actor_term(ratio, s.advantage, c.clip_epsilon);
        let v = tape.value(critic.value).data[0];
        let (lc, dlc_dv) = critic_term(v, s.old_value, s.target, c.clip_epsilon);

        out.actor += w * la;
        out.critic += w * lc;
        out.entropy += w * entropy;
        if (ratio - 1.0).abs() > c.clip_epsilon {
            out.clip_frac += w;
        }
        if let Some(g) = grads.as_deref_mut() {
            // d/dz_i of log p_a is [i = a] - p_i; of the entropy -p_i (log p_i + H)
            let dlogp = dla_dratio * ratio;
            let dz: Vec<f64> = (0..p.len())
                .map(|i| {
                    let actor = dlogp * (f64::from(u8::from(i == s.action)) - p[i]);
                    let ent = -p[i] * (logp[i] + entropy);
                    w * (actor - c.entropy_coef * ent)
                })
                .collect();
            let dv = [w * c.vf_coef * dlc_dv];
            tape.backward(&[(actor.logits, &dz), (critic.value, &dv)], g);
        }
    }
    out.total = out.actor + c.vf_coef * out.critic - c.entropy_coef * out.entropy;
    out
}

/// Rescales advantages to zero mean and unit (population) deviation.
pub fn normalize_advantages(batch: &mut [Sample]) {
    let n = batch.len() as f64;
    if batch.len() < 2 {
        return;
    }
    let mean = batch.iter().map(|s| s.advantage).sum::<f64>() / n;
    let var = batch
        .iter()
        .map(|s| (s.advantage - mean).powi(2))
        .sum::<f64>()
        / n;
    let sd = var.sqrt() + 1e-8;
    batch
        .iter_mut()
        .for_each(|s| s.advantage = (s.advantage - mean) / sd);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_clip() {
        let eps = 0.1;
        let got: Vec<f64> = [(0.5, 1.0), (1.0, 1.0), (2.0, -1.0)]
            .iter()
            .map(|&(r, a)| actor_term(r, a, eps).0)
            .collect();
        // the pessimistic bound keeps -0.5 for the first sample, not -0.9
        assert_eq!(got, vec![-0.5, -1.0, 2.0]);
    }

    #[test]
    fn ratio_one_is_minus_advantage() {
        for a in [-2.0, 0.0, 3.5] {
            assert_eq!(actor_term(1.0, a, 0.1), (-a, -a));
        }
    }

    #[test]
    fn positive_advantage_is_bounded_below() {
        for r in [0.0, 0.5, 1.05, 1.5, 10.0] {
            assert!(actor_term(r, 2.0, 0.1).0 >= -(1.1) * 2.0 - 1e-12);
        }
    }

    #[test]
    fn critic_clip() {
        assert_eq!(critic_term(1.0, 1.0, 0.0, 0.1), (0.5, 1.0));
        // moved past the clip towards the target: the clipped error is larger
        let (l, g) = critic_term(0.5, 1.0, 0.0, 0.1);
        assert!((l - 0.5 * 0.81).abs() < 1e-12 && g == 0.0);
    }

    fn batch(nets: &AgentNets) -> Vec<Sample> {
        use crate::env::{Env, EnvConfig};
        let cfg = EnvConfig {
            n_qubits: 3,
            n_gates: 10,
            ..EnvConfig::default()
        };
        (0..8)
            .map(|i| {
                let e = Env::new(cfg.clone(), i).unwrap();
                let obs = e.observation().clone();
                let p = nets.policy(&obs.actor, &obs.action_nodes);
                let action = i as usize % obs.num_actions();
                // old policies both near and far from the current one
                let shift = [0.02, -0.03, 0.5, -0.6][i as usize % 4];
                Sample {
                    action,
                    old_logp: p[action].ln() + shift,
                    old_value: 0.1 * i as f64,
                    advantage: 1.0 - 0.3 * i as f64,
                    target: 0.5 - 0.2 * i as f64,
                    obs,
                }
            })
            .collect()
    }

    #[test]
    fn loss_gradient_matches_finite_differences() {
        let mut nets = AgentNets::new(
            crate::nn::NetConfig {
                hidden: 5,
                layers: 2,
                leaky_slope: 0.2,
            },
            9,
        );
        let b = batch(&nets);
        let c = LossCoefs {
            clip_epsilon: 0.1,
            vf_coef: 0.5,
            entropy_coef: 0.01,
        };
        let mut g = nets.zero_grads();
        ppo_loss(&nets, &b, c, Some(&mut g));
        let h = 1e-6;
        for p in 0..nets.params.len() {
            for i in 0..nets.params[p].len() {
                let x = nets.params[p].data[i];
                nets.params[p].data[i] = x + h;
                let up = ppo_loss(&nets, &b, c, None).total;
                nets.params[p].data[i] = x - h;
                let down = ppo_loss(&nets, &b, c, None).total;
                nets.params[p].data[i] = x;
                let fd = (up - down) / (2.0 * h);
                let an = g.0[p][i];
                let rel = (fd - an).abs() / fd.abs().max(an.abs()).max(1e-6);
                assert!(rel < 1e-4, "{}[{i}]: fd {fd} analytic {an}", nets.names[p]);
            }
        }
    }

    #[test]
    fn uniform_policy_entropy_is_log_n() {
        let nets = AgentNets::zeros(crate::nn::NetConfig::default());
        let b = batch(&nets);
        let l = ppo_loss(&nets, &b[..1], LossCoefs::default(), None);
        assert!((l.entropy - (b[0].obs.num_actions() as f64).ln()).abs() < 1e-12);
    }
}
