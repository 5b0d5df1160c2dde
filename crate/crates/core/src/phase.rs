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

//! Spider phases as exact multiples of pi/4.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// An angle `k * pi/4` with `k` kept in `0..8`.
///
/// Arithmetic wraps modulo 8, so phases form the cyclic group Z_8.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Phase(u8);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const T: Phase = Phase(1);
    pub const S: Phase = Phase(2);
    pub const PI: Phase = Phase(4);
    pub const SDG: Phase = Phase(6);

    /// Builds a phase from any integer multiple of pi/4.
    pub fn new(k: i64) -> Phase {
        Phase(k.rem_euclid(8) as u8)
    }

    /// The multiple of pi/4, in `0..8`.
    pub fn k(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiples of pi/2.
    pub fn is_clifford(self) -> bool {
        self.0 % 2 == 0
    }

    /// Exactly +-pi/2.
    pub fn is_proper_clifford(self) -> bool {
        self.0 == 2 || self.0 == 6
    }

    /// 0 or pi.
    pub fn is_pauli(self) -> bool {
        self.0 % 4 == 0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * std::f64::consts::FRAC_PI_4
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 8)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase((self.0 + 8 - rhs.0) % 8)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase((8 - self.0) % 8)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, rhs: Phase) {
        *self = *self - rhs;
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "π"),
            k if k % 2 == 0 => write!(f, "{}π/2", k / 2),
            k => write!(f, "{}π/4", k),
        }
    }
}
