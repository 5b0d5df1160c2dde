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

//! Reverse-mode differentiation over a linear tape of dense tensors.
//!
//! Every operation appends a node holding its value and how it was made.
//! [`Tape::backward`] walks the nodes in reverse and accumulates gradients;
//! gradients reaching parameter leaves are summed into a [`Grads`] buffer.

use std::sync::Arc;

/// A row-major `f64` array. Vectors are `[n]`, matrices `[rows, cols]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Tensor {
        assert_eq!(
            shape.iter().product::<usize>(),
            data.len(),
            "shape {shape:?} does not fit {} values",
            data.len()
        );
        Tensor { shape, data }
    }

    pub fn zeros(shape: Vec<usize>) -> Tensor {
        let n = shape.iter().product();
        Tensor {
            shape,
            data: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `(rows, cols)`, treating a vector as a single row.
    pub fn dims2(&self) -> (usize, usize) {
        match self.shape.as_slice() {
            [n] => (1, *n),
            [r, c] => (*r, *c),
            s => panic!("expected a vector or matrix, got shape {s:?}"),
        }
    }
}

/// Handle to a node on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(usize);

enum Op {
    Leaf,
    Param(usize),
    MatMul(Var, Var),
    Add(Var, Var),
    /// `[r, c] + [c]`, the vector broadcast over rows
    AddRow(Var, Var),
    LeakyRelu(Var, f64),
    GatherRows(Var, Arc<[usize]>),
    VStack(Var, Var),
    /// softmax of a `[e]` or `[e, 1]` score within groups
    SegmentSoftmax(Var, Arc<[usize]>),
    /// `out[g] = sum over e in g of w[e] * x[e]` for `w: [e]`, `x: [e, d]`
    SegmentWeightedSum {
        w: Var,
        x: Var,
        seg: Arc<[usize]>,
    },
    /// GATv2 scores over constant edge features `ef`
    EdgeScore {
        s: Var,
        t: Var,
        te: Var,
        att: Var,
        ef: Arc<[f64]>,
        src: Arc<[usize]>,
        dst: Arc<[usize]>,
        slope: f64,
    },
    /// `out[dst] += alpha * (s[dst] on self-loops, t[src] otherwise)`
    EdgeAggregate {
        alpha: Var,
        s: Var,
        t: Var,
        src: Arc<[usize]>,
        dst: Arc<[usize]>,
    },
}

struct Node {
    value: Tensor,
    op: Op,
}

/// Gradients for a parameter list, one buffer per parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Grads(pub Vec<Vec<f64>>);

impl Grads {
    pub fn zeros_like(values: &[Tensor]) -> Grads {
        Grads(values.iter().map(|t| vec![0.0; t.len()]).collect())
    }

    pub fn add_scaled(&mut self, other: &Grads, s: f64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += s * y;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.0.iter_mut().flatten().for_each(|x| *x *= s);
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn fill_zero(&mut self) {
        self.0.iter_mut().flatten().for_each(|x| *x = 0.0);
    }
}

/// Gradient buffers during a backward pass. Parameter nodes write straight
/// into the caller's `Grads`.
struct Sink<'a> {
    g: Vec<Option<Vec<f64>>>,
    grads: &'a mut Grads,
    nodes: &'a [Node],
}

impl Sink<'_> {
    fn at(&mut self, v: Var, len: usize) -> &mut [f64] {
        if let Op::Param(p) = self.nodes[v.0].op {
            return &mut self.grads.0[p];
        }
        self.g[v.0].get_or_insert_with(|| vec![0.0; len])
    }
}

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

/// `c = a * b` (or `c += a * b` when `acc`) with explicit strides, so that
/// transposed operands cost nothing.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    rsa: usize,
    csa: usize,
    b: &[f64],
    rsb: usize,
    csb: usize,
    c: &mut [f64],
    acc: bool,
) {
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        if !acc {
            c.fill(0.0);
        }
        return;
    }
    let beta = if acc { 1.0 } else { 0.0 };
    // SAFETY: the callers pass buffers of at least m*k, k*n and m*n elements
    // laid out by the given strides; c is not aliased by a or b.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            rsa as isize,
            csa as isize,
            b.as_ptr(),
            rsb as isize,
            csb as isize,
            beta,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

fn segment_count(seg: &[usize]) -> usize {
    seg.iter().copied().max().map_or(0, |m| m + 1)
}

impl Tape {
    pub fn new() -> Tape {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    fn push(&mut self, value: Tensor, op: Op) -> Var {
        self.nodes.push(Node { value, op });
        Var(self.nodes.len() - 1)
    }

    /// A constant input.
    pub fn leaf(&mut self, t: Tensor) -> Var {
        self.push(t, Op::Leaf)
    }

    /// A copy of parameter `index`; its gradient lands in `Grads.0[index]`.
    pub fn param(&mut self, index: usize, t: &Tensor) -> Var {
        self.push(t.clone(), Op::Param(index))
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Var {
        let (m, k) = self.value(a).dims2();
        let (k2, n) = self.value(b).dims2();
        assert_eq!(k, k2, "matmul inner dimensions differ");
        let mut out = vec![0.0; m * n];
        gemm(
            m,
            k,
            n,
            &self.value(a).data,
            k,
            1,
            &self.value(b).data,
            n,
            1,
            &mut out,
            false,
        );
        self.push(Tensor::new(vec![m, n], out), Op::MatMul(a, b))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let (x, y) = (self.value(a), self.value(b));
        assert_eq!(x.shape, y.shape, "add shapes differ");
        let data = x.data.iter().zip(&y.data).map(|(p, q)| p + q).collect();
        let shape = x.shape.clone();
        self.push(Tensor::new(shape, data), Op::Add(a, b))
    }

    pub fn add_row(&mut self, a: Var, bias: Var) -> Var {
        let (r, c) = self.value(a).dims2();
        assert_eq!(
            self.value(bias).len(),
            c,
            "bias length differs from column count"
        );
        let b = &self.value(bias).data;
        let mut data = self.value(a).data.clone();
        for row in data.chunks_mut(c.max(1)).take(r) {
            row.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        let shape = self.value(a).shape.clone();
        self.push(Tensor::new(shape, data), Op::AddRow(a, bias))
    }

    pub fn leaky_relu(&mut self, a: Var, slope: f64) -> Var {
        let x = self.value(a);
        let data = x
            .data
            .iter()
            .map(|&v| if v > 0.0 { v } else { slope * v })
            .collect();
        let shape = x.shape.clone();
        self.push(Tensor::new(shape, data), Op::LeakyRelu(a, slope))
    }

    pub fn gather_rows(&mut self, a: Var, idx: Arc<[usize]>) -> Var {
        let (r, c) = self.value(a).dims2();
        let x = &self.value(a).data;
        let mut data = Vec::with_capacity(idx.len() * c);
        for &i in idx.iter() {
            assert!(i < r, "row {i} out of range for {r} rows");
            data.extend_from_slice(&x[i * c..(i + 1) * c]);
        }
        self.push(
            Tensor::new(vec![idx.len(), c], data),
            Op::GatherRows(a, idx),
        )
    }

    pub fn vstack(&mut self, a: Var, b: Var) -> Var {
        let (ra, ca) = self.value(a).dims2();
        let (rb, cb) = self.value(b).dims2();
        assert_eq!(ca, cb, "vstack column counts differ");
        let mut data = self.value(a).data.clone();
        data.extend_from_slice(&self.value(b).data);
        self.push(Tensor::new(vec![ra + rb, ca], data), Op::VStack(a, b))
    }

    /// Softmax of the entries of `a` within each group `seg[e]`.
    pub fn segment_softmax(&mut self, a: Var, seg: Arc<[usize]>) -> Var {
        let x = self.value(a);
        assert_eq!(x.len(), seg.len(), "one group per score");
        let ng = segment_count(&seg);
        let mut max = vec![f64::NEG_INFINITY; ng];
        for (e, &g) in seg.iter().enumerate() {
            max[g] = max[g].max(x.data[e]);
        }
        let mut data: Vec<f64> = seg
            .iter()
            .enumerate()
            .map(|(e, &g)| (x.data[e] - max[g]).exp())
            .collect();
        let mut sum = vec![0.0; ng];
        for (e, &g) in seg.iter().enumerate() {
            sum[g] += data[e];
        }
        for (e, &g) in seg.iter().enumerate() {
            data[e] /= sum[g];
        }
        let shape = x.shape.clone();
        self.push(Tensor::new(shape, data), Op::SegmentSoftmax(a, seg))
    }

    /// `out[g] = sum_{e : seg[e] = g} w[e] * x[e, :]`, one output row per group.
    pub fn segment_weighted_sum(
        &mut self,
        w: Var,
        x: Var,
        seg: Arc<[usize]>,
        groups: usize,
    ) -> Var {
        let (e, d) = self.value(x).dims2();
        assert_eq!(self.value(w).len(), e, "one weight per row");
        assert_eq!(seg.len(), e, "one group per row");
        let (wv, xv) = (&self.value(w).data, &self.value(x).data);
        let mut out = vec![0.0; groups * d];
        for (r, &g) in seg.iter().enumerate() {
            let o = &mut out[g * d..(g + 1) * d];
            let src = &xv[r * d..(r + 1) * d];
            let s = wv[r];
            o.iter_mut().zip(src).for_each(|(a, b)| *a += s * b);
        }
        self.push(
            Tensor::new(vec![groups, d], out),
            Op::SegmentWeightedSum { w, x, seg },
        )
    }

    /// `score[k] = att . LeakyReLU(s[dst[k]] + t[src[k]] + ef[k] te)` for
    /// node rows `s, t: [n, d]`, constant edge features `ef: [num_edges, f]`,
    /// `te: [f, d]` and `att: [d, 1]`. Pre-activations are recomputed in the
    /// backward pass rather than stored.
    #[allow(clippy::too_many_arguments)]
    pub fn edge_score(
        &mut self,
        s: Var,
        t: Var,
        te: Var,
        att: Var,
        ef: Arc<[f64]>,
        src: Arc<[usize]>,
        dst: Arc<[usize]>,
        slope: f64,
    ) -> Var {
        let (n, d) = self.value(s).dims2();
        assert_eq!(self.value(t).dims2(), (n, d), "sender rows differ in shape");
        let m = src.len();
        assert_eq!(dst.len(), m);
        let (f, d2) = self.value(te).dims2();
        assert_eq!(d2, d, "edge projection width differs");
        assert_eq!(ef.len(), m * f, "one feature row per edge");
        assert_eq!(self.value(att).len(), d);
        let av = &self.value(att).data;
        let mut pre = vec![0.0; d];
        let mut score = Vec::with_capacity(m);
        for k in 0..m {
            self.edge_pre(s, t, te, &ef, src[k], dst[k], k, &mut pre);
            score.push(
                pre.iter()
                    .zip(av)
                    .map(|(&p, a)| a * if p > 0.0 { p } else { slope * p })
                    .sum(),
            );
        }
        self.push(
            Tensor::new(vec![m, 1], score),
            Op::EdgeScore {
                s,
                t,
                te,
                att,
                ef,
                src,
                dst,
                slope,
            },
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn edge_pre(
        &self,
        s: Var,
        t: Var,
        te: Var,
        ef: &[f64],
        j: usize,
        i: usize,
        k: usize,
        out: &mut [f64],
    ) {
        let d = out.len();
        let (sv, tv, tev) = (
            &self.value(s).data,
            &self.value(t).data,
            &self.value(te).data,
        );
        let f = tev.len() / d.max(1);
        out.copy_from_slice(&sv[i * d..(i + 1) * d]);
        out.iter_mut()
            .zip(&tv[j * d..(j + 1) * d])
            .for_each(|(o, x)| *o += x);
        for (r, &x) in ef[k * f..(k + 1) * f].iter().enumerate() {
            if x != 0.0 {
                out.iter_mut()
                    .zip(&tev[r * d..(r + 1) * d])
                    .for_each(|(o, w)| *o += x * w);
            }
        }
    }

    /// Per receiver, the `alpha`-weighted sum of `s[i]` over its self-loop
    /// and `t[j]` over every other incoming edge.
    pub fn edge_aggregate(
        &mut self,
        alpha: Var,
        s: Var,
        t: Var,
        src: Arc<[usize]>,
        dst: Arc<[usize]>,
    ) -> Var {
        let (n, d) = self.value(s).dims2();
        assert_eq!(self.value(t).dims2(), (n, d), "sender rows differ in shape");
        assert_eq!(self.value(alpha).len(), src.len(), "one weight per edge");
        let (av, sv, tv) = (
            &self.value(alpha).data,
            &self.value(s).data,
            &self.value(t).data,
        );
        let mut out = vec![0.0; n * d];
        for (k, (&j, &i)) in src.iter().zip(dst.iter()).enumerate() {
            let row = if i == j {
                &sv[i * d..(i + 1) * d]
            } else {
                &tv[j * d..(j + 1) * d]
            };
            out[i * d..(i + 1) * d]
                .iter_mut()
                .zip(row)
                .for_each(|(o, x)| *o += av[k] * x);
        }
        self.push(
            Tensor::new(vec![n, d], out),
            Op::EdgeAggregate {
                alpha,
                s,
                t,
                src,
                dst,
            },
        )
    }

    /// Backpropagates from the seeded outputs and adds parameter gradients
    /// into `grads`.
    pub fn backward(&self, seeds: &[(Var, &[f64])], grads: &mut Grads) {
        let mut sink = Sink {
            g: (0..self.nodes.len()).map(|_| None).collect(),
            grads,
            nodes: &self.nodes,
        };
        for &(v, s) in seeds {
            let len = self.value(v).len();
            assert_eq!(s.len(), len, "seed length differs from value");
            sink.at(v, len).iter_mut().zip(s).for_each(|(a, b)| *a += b);
        }
        for i in (0..self.nodes.len()).rev() {
            let Some(gout) = sink.g[i].take() else {
                continue;
            };
            let node = &self.nodes[i];
            match &node.op {
                Op::Leaf | Op::Param(_) => {}
                Op::MatMul(a, b) => {
                    let (m, k) = self.value(*a).dims2();
                    let (_, n) = self.value(*b).dims2();
                    let (av, bv) = (&self.value(*a).data, &self.value(*b).data);
                    // dA = dC * B^T, dB = A^T * dC
                    gemm(m, n, k, &gout, n, 1, bv, 1, n, sink.at(*a, m * k), true);
                    gemm(k, m, n, av, 1, k, &gout, n, 1, sink.at(*b, k * n), true);
                }
                Op::Add(a, b) => {
                    for v in [*a, *b] {
                        sink.at(v, gout.len())
                            .iter_mut()
                            .zip(&gout)
                            .for_each(|(x, y)| *x += y);
                    }
                }
                Op::AddRow(a, bias) => {
                    let c = self.value(*bias).len();
                    sink.at(*a, gout.len())
                        .iter_mut()
                        .zip(&gout)
                        .for_each(|(x, y)| *x += y);
                    let gb = sink.at(*bias, c);
                    for row in gout.chunks(c.max(1)) {
                        gb.iter_mut().zip(row).for_each(|(x, y)| *x += y);
                    }
                }
                Op::LeakyRelu(a, slope) => {
                    let x = &self.value(*a).data;
                    let ga = sink.at(*a, x.len());
                    for ((d, &xv), &go) in ga.iter_mut().zip(x).zip(&gout) {
                        *d += if xv > 0.0 { go } else { slope * go };
                    }
                }
                Op::GatherRows(a, idx) => {
                    let (r, c) = self.value(*a).dims2();
                    let ga = sink.at(*a, r * c);
                    for (k, &i) in idx.iter().enumerate() {
                        ga[i * c..(i + 1) * c]
                            .iter_mut()
                            .zip(&gout[k * c..(k + 1) * c])
                            .for_each(|(x, y)| *x += y);
                    }
                }
                Op::VStack(a, b) => {
                    let na = self.value(*a).len();
                    let nb = self.value(*b).len();
                    sink.at(*a, na)
                        .iter_mut()
                        .zip(&gout[..na])
                        .for_each(|(x, y)| *x += y);
                    sink.at(*b, nb)
                        .iter_mut()
                        .zip(&gout[na..])
                        .for_each(|(x, y)| *x += y);
                }
                Op::SegmentSoftmax(a, seg) => {
                    let y = &node.value.data;
                    let mut dot = vec![0.0; segment_count(seg)];
                    for (e, &s) in seg.iter().enumerate() {
                        dot[s] += y[e] * gout[e];
                    }
                    let ga = sink.at(*a, y.len());
                    for (e, &s) in seg.iter().enumerate() {
                        ga[e] += y[e] * (gout[e] - dot[s]);
                    }
                }
                Op::SegmentWeightedSum { w, x, seg } => {
                    let (e, d) = self.value(*x).dims2();
                    let (wv, xv) = (&self.value(*w).data, &self.value(*x).data);
                    let mut gw = vec![0.0; e];
                    let gx = sink.at(*x, e * d);
                    for (r, &s) in seg.iter().enumerate() {
                        let go = &gout[s * d..(s + 1) * d];
                        let xr = &xv[r * d..(r + 1) * d];
                        gw[r] = go.iter().zip(xr).map(|(a, b)| a * b).sum();
                        gx[r * d..(r + 1) * d]
                            .iter_mut()
                            .zip(go)
                            .for_each(|(a, b)| *a += wv[r] * b);
                    }
                    sink.at(*w, e)
                        .iter_mut()
                        .zip(&gw)
                        .for_each(|(a, b)| *a += b);
                }
                Op::EdgeScore {
                    s,
                    t,
                    te,
                    att,
                    ef,
                    src,
                    dst,
                    slope,
                } => {
                    let (n, d) = self.value(*s).dims2();
                    let (f, _) = self.value(*te).dims2();
                    let av = &self.value(*att).data;
                    let mut gs = vec![0.0; n * d];
                    let mut gt = vec![0.0; n * d];
                    let mut gte = vec![0.0; f * d];
                    let mut gatt = vec![0.0; d];
                    let mut pre = vec![0.0; d];
                    let mut dp = vec![0.0; d];
                    for k in 0..src.len() {
                        let (i, j, go) = (dst[k], src[k], gout[k]);
                        if go == 0.0 {
                            continue;
                        }
                        self.edge_pre(*s, *t, *te, ef, j, i, k, &mut pre);
                        for c in 0..d {
                            let p = pre[c];
                            let (act, dact) = if p > 0.0 {
                                (p, 1.0)
                            } else {
                                (slope * p, *slope)
                            };
                            gatt[c] += go * act;
                            dp[c] = go * av[c] * dact;
                        }
                        gs[i * d..(i + 1) * d]
                            .iter_mut()
                            .zip(&dp)
                            .for_each(|(a, b)| *a += b);
                        gt[j * d..(j + 1) * d]
                            .iter_mut()
                            .zip(&dp)
                            .for_each(|(a, b)| *a += b);
                        for (r, &x) in ef[k * f..(k + 1) * f].iter().enumerate() {
                            if x != 0.0 {
                                gte[r * d..(r + 1) * d]
                                    .iter_mut()
                                    .zip(&dp)
                                    .for_each(|(a, b)| *a += x * b);
                            }
                        }
                    }
                    for (v, buf) in [(*s, gs), (*t, gt), (*te, gte), (*att, gatt)] {
                        let len = buf.len();
                        sink.at(v, len)
                            .iter_mut()
                            .zip(&buf)
                            .for_each(|(a, b)| *a += b);
                    }
                }
                Op::EdgeAggregate {
                    alpha,
                    s,
                    t,
                    src,
                    dst,
                } => {
                    let (n, d) = self.value(*s).dims2();
                    let (av, sv, tv) = (
                        &self.value(*alpha).data,
                        &self.value(*s).data,
                        &self.value(*t).data,
                    );
                    let mut galpha = vec![0.0; src.len()];
                    let mut gs = vec![0.0; n * d];
                    let mut gt = vec![0.0; n * d];
                    for (k, (&j, &i)) in src.iter().zip(dst.iter()).enumerate() {
                        let go = &gout[i * d..(i + 1) * d];
                        let (row, grow) = if i == j {
                            (&sv[i * d..(i + 1) * d], &mut gs[i * d..(i + 1) * d])
                        } else {
                            (&tv[j * d..(j + 1) * d], &mut gt[j * d..(j + 1) * d])
                        };
                        galpha[k] = go.iter().zip(row).map(|(a, b)| a * b).sum();
                        grow.iter_mut().zip(go).for_each(|(x, y)| *x += av[k] * y);
                    }
                    for (v, buf) in [(*alpha, galpha), (*s, gs), (*t, gt)] {
                        let len = buf.len();
                        sink.at(v, len)
                            .iter_mut()
                            .zip(&buf)
                            .for_each(|(a, b)| *a += b);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_tensor(rng: &mut ChaCha8Rng, shape: Vec<usize>) -> Tensor {
        let n = shape.iter().product();
        Tensor::new(shape, (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
    }

    /// Checks d(sum(r * f(params)))/dparams against central differences.
    fn gradcheck(params: Vec<Tensor>, f: impl Fn(&mut Tape, &[Var]) -> Var) {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let run = |ps: &[Tensor]| {
            let mut t = Tape::new();
            let vars: Vec<Var> = ps.iter().enumerate().map(|(i, p)| t.param(i, p)).collect();
            let out = f(&mut t, &vars);
            (t, out)
        };
        let (t, out) = run(&params);
        let r: Vec<f64> = (0..t.value(out).len())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let mut grads = Grads::zeros_like(&params);
        t.backward(&[(out, &r)], &mut grads);
        let loss = |ps: &[Tensor]| {
            let (t, out) = run(ps);
            t.value(out)
                .data
                .iter()
                .zip(&r)
                .map(|(a, b)| a * b)
                .sum::<f64>()
        };
        let h = 1e-5;
        for p in 0..params.len() {
            for i in 0..params[p].len() {
                let mut plus = params.clone();
                plus[p].data[i] += h;
                let mut minus = params.clone();
                minus[p].data[i] -= h;
                let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
                let an = grads.0[p][i];
                assert!(
                    (fd - an).abs() <= 1e-6 * (1.0 + fd.abs()),
                    "param {p}[{i}]: fd {fd} vs {an}"
                );
            }
        }
    }

    #[test]
    fn matmul_values() {
        let mut t = Tape::new();
        let a = t.leaf(Tensor::new(vec![2, 3], vec![1., 2., 3., 4., 5., 6.]));
        let b = t.leaf(Tensor::new(vec![3, 1], vec![1., 0., -1.]));
        let c = t.matmul(a, b);
        assert_eq!(t.value(c).data, vec![-2., -2.]);
    }

    #[test]
    fn grads_of_every_op() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ps = vec![
            rand_tensor(&mut rng, vec![4, 3]),
            rand_tensor(&mut rng, vec![3, 5]),
            rand_tensor(&mut rng, vec![5]),
            rand_tensor(&mut rng, vec![2, 5]),
        ];
        let idx: Arc<[usize]> = Arc::from(vec![0, 3, 3, 5, 1, 2]);
        let seg: Arc<[usize]> = Arc::from(vec![0, 0, 1, 2, 2, 2]);
        gradcheck(ps, move |t, v| {
            let m = t.matmul(v[0], v[1]);
            let m = t.add_row(m, v[2]);
            let m = t.leaky_relu(m, 0.2);
            let s = t.vstack(m, v[3]);
            let g = t.gather_rows(s, idx.clone());
            let g2 = t.gather_rows(s, Arc::from(vec![1, 1, 0, 4, 2, 5]));
            let g = t.add(g, g2);
            let colv = t.leaf(Tensor::new(vec![5, 1], vec![0.3, -0.2, 0.5, 0.1, 0.7]));
            let sc = t.matmul(g, colv);
            let w = t.segment_softmax(sc, seg.clone());
            t.segment_weighted_sum(w, g, seg.clone(), 3)
        });
    }

    #[test]
    fn grads_of_edge_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        // nodes 0..3; edges by receiver, self-loops included
        let src: Arc<[usize]> = Arc::from(vec![0, 1, 0, 1, 2, 1, 2]);
        let dst: Arc<[usize]> = Arc::from(vec![0, 0, 1, 1, 1, 2, 2]);
        let ef: Arc<[f64]> = (0..14).map(|i| [1.0, 0.0, -0.5, 2.0][i % 4]).collect();
        let ps = vec![
            rand_tensor(&mut rng, vec![3, 4]),
            rand_tensor(&mut rng, vec![3, 4]),
            rand_tensor(&mut rng, vec![2, 4]),
            rand_tensor(&mut rng, vec![4, 1]),
        ];
        gradcheck(ps, move |t, v| {
            let sc = t.edge_score(
                v[0],
                v[1],
                v[2],
                v[3],
                ef.clone(),
                src.clone(),
                dst.clone(),
                0.2,
            );
            let a = t.segment_softmax(sc, dst.clone());
            let out = t.edge_aggregate(a, v[0], v[1], src.clone(), dst.clone());
            let a2 = t.leaky_relu(out, 0.2);
            let w = t.leaf(Tensor::new(vec![4, 1], vec![0.4, -0.1, 0.9, 0.3]));
            let y = t.matmul(a2, w);
            t.vstack(y, sc)
        });
    }

    #[test]
    fn segment_softmax_rows_sum_to_one() {
        let mut t = Tape::new();
        let x = t.leaf(Tensor::new(vec![5], vec![1000.0, -3.0, 2.0, 2.0, 0.5]));
        let y = t.segment_softmax(x, Arc::from(vec![0, 0, 1, 1, 2]));
        let v = &t.value(y).data;
        assert!((v[0] + v[1] - 1.0).abs() < 1e-15);
        assert!((v[2] - 0.5).abs() < 1e-15 && v[4] == 1.0);
    }
}
