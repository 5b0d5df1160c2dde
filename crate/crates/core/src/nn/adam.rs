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

use super::tape::{Grads, Tensor};

/// Adam with bias correction.
#[derive(Clone, Debug)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: i32,
    m: Grads,
    v: Grads,
}

impl Adam {
    pub fn new(params: &[Tensor], lr: f64) -> Adam {
        Adam {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: Grads::zeros_like(params),
            v: Grads::zeros_like(params),
        }
    }

    pub fn steps(&self) -> i32 {
        self.t
    }

    /// Descends along `grads`.
    pub fn step(&mut self, params: &mut [Tensor], grads: &Grads) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (p, ((m, v), g)) in params
            .iter_mut()
            .zip(self.m.0.iter_mut().zip(self.v.0.iter_mut()).zip(&grads.0))
        {
            for i in 0..g.len() {
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g[i];
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g[i] * g[i];
                let mh = m[i] / c1;
                let vh = v[i] / c2;
                p.data[i] -= self.lr * mh / (vh.sqrt() + self.eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_lr() {
        let mut p = vec![Tensor::new(vec![2], vec![1.0, -1.0])];
        let mut opt = Adam::new(&p, 0.1);
        opt.step(&mut p, &Grads(vec![vec![3.0, -0.5]]));
        assert!((p[0].data[0] - 0.9).abs() < 1e-7);
        assert!((p[0].data[1] + 0.9).abs() < 1e-7);
    }

    #[test]
    fn minimises_a_quadratic() {
        let mut p = vec![Tensor::new(vec![1], vec![5.0])];
        let mut opt = Adam::new(&p, 0.05);
        for _ in 0..2000 {
            let g = Grads(vec![vec![2.0 * (p[0].data[0] - 2.0)]]);
            opt.step(&mut p, &g);
        }
        assert!((p[0].data[0] - 2.0).abs() < 1e-3);
    }
}
