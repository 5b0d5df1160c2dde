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

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{rewards} rewards, {values} values and {dones} done flags")]
pub struct GaeLengthError {
    pub rewards: usize,
    pub values: usize,
    pub dones: usize,
}

/// Generalised advantage estimates for one environment's rollout.
///
/// `values[t]` is V(s_t); `last_value` bootstraps the state after the final
/// step and is ignored when that step ended an episode. Returns the
/// advantages and the value targets `A_t + V(s_t)`.
pub fn compute_gae(
    rewards: &[f64],
    values: &[f64],
    dones: &[bool],
    last_value: f64,
    gamma: f64,
    lambda: f64,
) -> Result<(Vec<f64>, Vec<f64>), GaeLengthError> {
    let n = rewards.len();
    if values.len() != n || dones.len() != n {
        return Err(GaeLengthError {
            rewards: n,
            values: values.len(),
            dones: dones.len(),
        });
    }
    let mut adv = vec![0.0; n];
    let mut next_adv = 0.0;
    for t in (0..n).rev() {
        let live = if dones[t] { 0.0 } else { 1.0 };
        let next_v = if t + 1 < n { values[t + 1] } else { last_value };
        let delta = rewards[t] + gamma * next_v * live - values[t];
        next_adv = delta + gamma * lambda * live * next_adv;
        adv[t] = next_adv;
    }
    let targets = adv.iter().zip(values).map(|(a, v)| a + v).collect();
    Ok((adv, targets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_terminal_step() {
        let (a, t) = compute_gae(&[2.0], &[0.5], &[true], 9.0, 0.99, 0.95).unwrap();
        assert_eq!(a, vec![1.5]);
        assert_eq!(t, vec![2.0]);
    }

    #[test]
    fn lambda_zero_is_td_error() {
        let r = [1.0, -1.0, 0.5];
        let v = [0.2, 0.4, -0.3];
        let (a, _) = compute_gae(&r, &v, &[false, false, false], 0.7, 0.9, 0.0).unwrap();
        let want = [
            1.0 + 0.9 * 0.4 - 0.2,
            -1.0 + 0.9 * -0.3 - 0.4,
            0.5 + 0.9 * 0.7 + 0.3,
        ];
        for (x, y) in a.iter().zip(want) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn undiscounted_episode_is_return_minus_value() {
        let r = [1.0, 2.0, -0.5, 0.25, 3.0];
        let v = [0.3, -0.1, 0.8, 0.0, 1.1];
        let (a, _) =
            compute_gae(&r, &v, &[false, false, false, false, true], 100.0, 1.0, 1.0).unwrap();
        for t in 0..5 {
            let ret: f64 = r[t..].iter().sum();
            assert!((a[t] - (ret - v[t])).abs() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(compute_gae(&[1.0], &[], &[true], 0.0, 1.0, 1.0).is_err());
    }
}
