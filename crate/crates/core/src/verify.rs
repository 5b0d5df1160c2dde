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

//! Equivalence oracles: a stabilizer tableau for Clifford circuits and a dense
//! unitary comparison for small Clifford+T circuits. Both ignore global phase.

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

pub const MAX_TABLEAU_QUBITS: usize = 64;
pub const MAX_DENSE_QUBITS: usize = 6;
pub const DENSE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("gate {0} is not Clifford")]
    NonClifford(Gate),
    #[error("circuits act on {0} and {1} qubits")]
    WidthMismatch(usize, usize),
    #[error("{got} qubits exceeds the oracle limit of {max}")]
    TooWide { got: usize, max: usize },
}

/// One Pauli row: bit `q` of `x`/`z` is the X/Z component on qubit `q`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct PauliRow {
    x: u64,
    z: u64,
    sign: bool,
}

/// Images of the generators X_0..X_{n-1} (destabilizers) followed by
/// Z_0..Z_{n-1} (stabilizers) under conjugation by the applied gates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliRow>,
}

impl Tableau {
    pub fn identity(n: usize) -> Result<Tableau, VerifyError> {
        if n > MAX_TABLEAU_QUBITS {
            return Err(VerifyError::TooWide {
                got: n,
                max: MAX_TABLEAU_QUBITS,
            });
        }
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliRow {
                x: 1 << q,
                z: 0,
                sign: false,
            });
        }
        for q in 0..n {
            rows.push(PauliRow {
                x: 0,
                z: 1 << q,
                sign: false,
            });
        }
        Ok(Tableau { n, rows })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn h(&mut self, a: usize) {
        for r in &mut self.rows {
            let (xa, za) = ((r.x >> a) & 1, (r.z >> a) & 1);
            r.sign ^= xa & za == 1;
            r.x = (r.x & !(1 << a)) | (za << a);
            r.z = (r.z & !(1 << a)) | (xa << a);
        }
    }

    fn s(&mut self, a: usize) {
        for r in &mut self.rows {
            let (xa, za) = ((r.x >> a) & 1, (r.z >> a) & 1);
            r.sign ^= xa & za == 1;
            r.z ^= xa << a;
        }
    }

    fn cnot(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (xa, za) = ((r.x >> a) & 1, (r.z >> a) & 1);
            let (xb, zb) = ((r.x >> b) & 1, (r.z >> b) & 1);
            r.sign ^= xa & zb & (xb ^ za ^ 1) == 1;
            r.x ^= xa << b;
            r.z ^= zb << a;
        }
    }

    /// Conjugates every row by `g`.
    pub fn apply(&mut self, g: &Gate) -> Result<(), VerifyError> {
        match *g {
            Gate::H(q) => self.h(q),
            Gate::Rz(q, p) => {
                if !p.is_clifford() {
                    return Err(VerifyError::NonClifford(*g));
                }
                for _ in 0..p.k() / 2 {
                    self.s(q);
                }
            }
            Gate::Cnot(c, t) => self.cnot(c, t),
            Gate::Cz(a, b) => {
                self.h(b);
                self.cnot(a, b);
                self.h(b);
            }
        }
        Ok(())
    }

    pub fn of_circuit(c: &Circuit) -> Result<Tableau, VerifyError> {
        let mut t = Tableau::identity(c.n_qubits)?;
        for g in &c.gates {
            t.apply(g)?;
        }
        Ok(t)
    }

    /// The image of generator `row` (X_q for `row < n`, Z_{q-n} otherwise)
    /// as `(sign, x bits, z bits)`.
    pub fn row(&self, row: usize) -> (bool, u64, u64) {
        let r = self.rows[row];
        (r.sign, r.x, r.z)
    }
}

/// True iff the two Clifford circuits implement the same unitary up to a
/// global phase.
pub fn equivalent_clifford(a: &Circuit, b: &Circuit) -> Result<bool, VerifyError> {
    if a.n_qubits != b.n_qubits {
        return Err(VerifyError::WidthMismatch(a.n_qubits, b.n_qubits));
    }
    Ok(Tableau::of_circuit(a)? == Tableau::of_circuit(b)?)
}

/// The full unitary; column `j` is the image of basis state `j`, with qubit
/// `q` stored in bit `q` of the index.
pub fn unitary(c: &Circuit) -> Result<Vec<Vec<Complex64>>, VerifyError> {
    let n = c.n_qubits;
    if n > MAX_DENSE_QUBITS {
        return Err(VerifyError::TooWide {
            got: n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        psi[j] = Complex64::new(1.0, 0.0);
        for g in &c.gates {
            apply_dense(&mut psi, g);
        }
        cols.push(psi);
    }
    Ok(cols)
}

fn apply_dense(psi: &mut [Complex64], g: &Gate) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match *g {
        Gate::H(q) => {
            let m = 1 << q;
            for i in 0..psi.len() {
                if i & m == 0 {
                    let (a, b) = (psi[i], psi[i | m]);
                    psi[i] = (a + b) * s;
                    psi[i | m] = (a - b) * s;
                }
            }
        }
        Gate::Rz(q, p) => {
            let m = 1 << q;
            let w = Complex64::from_polar(1.0, p.radians());
            for (i, amp) in psi.iter_mut().enumerate() {
                if i & m != 0 {
                    *amp *= w;
                }
            }
        }
        Gate::Cnot(c, t) => {
            let (mc, mt) = (1 << c, 1 << t);
            for i in 0..psi.len() {
                if i & mc != 0 && i & mt == 0 {
                    psi.swap(i, i | mt);
                }
            }
        }
        Gate::Cz(a, b) => {
            let m = (1 << a) | (1 << b);
            for (i, amp) in psi.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
    }
}

/// True iff the unitaries agree entrywise within `DENSE_TOLERANCE` after
/// aligning the global phase on the largest entry.
pub fn equivalent_dense(a: &Circuit, b: &Circuit) -> Result<bool, VerifyError> {
    if a.n_qubits != b.n_qubits {
        return Err(VerifyError::WidthMismatch(a.n_qubits, b.n_qubits));
    }
    let (ua, ub) = (unitary(a)?, unitary(b)?);
    let mut best = (0, 0, 0.0);
    for (j, col) in ub.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            if z.norm() > best.2 {
                best = (j, i, z.norm());
            }
        }
    }
    let (j, i, _) = best;
    let ratio = ua[j][i] / ub[j][i];
    if (ratio.norm() - 1.0).abs() > DENSE_TOLERANCE {
        return Ok(false);
    }
    let phase = ratio / ratio.norm();
    Ok(ua.iter().zip(&ub).all(|(ca, cb)| {
        ca.iter()
            .zip(cb)
            .all(|(x, y)| (x - phase * y).norm() <= DENSE_TOLERANCE)
    }))
}

/// Tableau for Clifford circuits, dense unitary otherwise.
pub fn equivalent(a: &Circuit, b: &Circuit) -> Result<bool, VerifyError> {
    if a.is_clifford() && b.is_clifford() {
        equivalent_clifford(a, b)
    } else {
        equivalent_dense(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateSet;
    use crate::phase::Phase;

    fn c(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::with_gates(n, gates)
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let mut t = Tableau::identity(1).unwrap();
        t.apply(&Gate::H(0)).unwrap();
        assert_eq!(t.row(1), (false, 1, 0));
        assert_eq!(t.row(0), (false, 0, 1));
    }

    #[test]
    fn s_twice_is_z() {
        let ss = c(1, vec![Gate::s(0), Gate::s(0)]);
        assert!(equivalent_clifford(&ss, &c(1, vec![Gate::z(0)])).unwrap());
        // Z X Z = -X
        assert_eq!(Tableau::of_circuit(&ss).unwrap().row(0), (true, 1, 0));
    }

    #[test]
    fn small_identities() {
        let hh = c(1, vec![Gate::H(0), Gate::H(0)]);
        assert!(equivalent_clifford(&hh, &c(1, vec![])).unwrap());
        assert!(!equivalent_clifford(&c(1, vec![Gate::H(0)]), &c(1, vec![])).unwrap());
        assert!(equivalent_dense(&c(1, vec![Gate::t(0); 8]), &c(1, vec![])).unwrap());
        assert!(equivalent_dense(&c(1, vec![Gate::t(0); 2]), &c(1, vec![Gate::s(0)])).unwrap());
        assert!(!equivalent_dense(&c(1, vec![Gate::t(0)]), &c(1, vec![])).unwrap());
        assert!(matches!(
            equivalent_clifford(&c(1, vec![Gate::t(0)]), &c(1, vec![])),
            Err(VerifyError::NonClifford(_))
        ));
        assert!(matches!(
            equivalent_dense(&c(7, vec![]), &c(7, vec![])),
            Err(VerifyError::TooWide { .. })
        ));
    }

    #[test]
    fn cz_is_symmetric_and_h_conjugated_cnot() {
        let a = c(2, vec![Gate::Cz(0, 1)]);
        let b = c(2, vec![Gate::Cz(1, 0)]);
        let d = c(2, vec![Gate::H(1), Gate::Cnot(0, 1), Gate::H(1)]);
        assert!(equivalent_clifford(&a, &b).unwrap());
        assert!(equivalent_clifford(&a, &d).unwrap());
        assert!(equivalent_dense(&a, &d).unwrap());
    }

    #[test]
    fn tableau_matches_dense_conjugation() {
        // U P U^dag computed densely must equal the tableau row.
        for seed in 0..30 {
            let circ = Circuit::random(3, 20, GateSet::Clifford, seed);
            let t = Tableau::of_circuit(&circ).unwrap();
            let u = unitary(&circ).unwrap();
            for row in 0..6 {
                let (sign, x, z) = t.row(row);
                let q = row % 3;
                let p_in = if row < 3 {
                    (1u64 << q, 0)
                } else {
                    (0, 1u64 << q)
                };
                let lhs = conj(&u, pauli(3, p_in.0, p_in.1, false));
                let rhs = pauli(3, x, z, sign);
                for (a, b) in lhs.iter().flatten().zip(rhs.iter().flatten()) {
                    assert!((a - b).norm() < 1e-9, "seed {seed} row {row}");
                }
            }
        }
    }

    // Dense Pauli in the same column convention, as m[col][row].
    fn pauli(n: usize, x: u64, z: u64, sign: bool) -> Vec<Vec<Complex64>> {
        let dim = 1 << n;
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for j in 0..dim {
            // X^x Z^z with the per-qubit Y = iXZ convention
            let mut amp = Complex64::new(if sign { -1.0 } else { 1.0 }, 0.0);
            for q in 0..n {
                let (xq, zq) = ((x >> q) & 1, (z >> q) & 1);
                if zq == 1 && (j >> q) & 1 == 1 {
                    amp = -amp;
                }
                if xq == 1 && zq == 1 {
                    amp *= Complex64::new(0.0, 1.0);
                }
            }
            m[j][j ^ (x as usize)] = amp;
        }
        m
    }

    fn conj(u: &[Vec<Complex64>], p: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
        let dim = u.len();
        let mul = |a: &[Vec<Complex64>], b: &[Vec<Complex64>]| {
            let mut r = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
            for j in 0..dim {
                for k in 0..dim {
                    for i in 0..dim {
                        r[j][i] += a[k][i] * b[j][k];
                    }
                }
            }
            r
        };
        let udag: Vec<Vec<Complex64>> = (0..dim)
            .map(|j| (0..dim).map(|i| u[i][j].conj()).collect())
            .collect();
        mul(&mul(u, &p), &udag)
    }

    #[test]
    fn clifford_and_dense_agree() {
        for seed in 0..200 {
            let a = Circuit::random(3, 12, GateSet::Clifford, seed);
            let mut b = Circuit::random(3, 12, GateSet::Clifford, seed + 1000);
            if seed % 2 == 0 {
                b = a.clone();
                b.gates.push(Gate::Rz(0, Phase::new(8)));
                b.gates.insert(0, Gate::H(1));
                b.gates.insert(0, Gate::H(1));
            }
            assert_eq!(
                equivalent_clifford(&a, &b).unwrap(),
                equivalent_dense(&a, &b).unwrap(),
                "seed {seed}"
            );
        }
    }
}
