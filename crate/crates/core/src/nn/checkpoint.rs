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

//! Checkpoint files: a magic line, a one-line JSON manifest, then every
//! parameter as little-endian `f32` in manifest order.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::nets::{AgentNets, NetConfig};

const MAGIC: &str = "zxrl-checkpoint 1";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("not a checkpoint: {0}")]
    Format(String),
    #[error("tensor {index}: manifest has {found}, architecture expects {expected}")]
    ShapeMismatch {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("truncated: expected {expected} bytes of weights, found {found}")]
    Truncated { expected: usize, found: usize },
}

#[derive(Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    shape: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    hidden: usize,
    layers: usize,
    leaky_slope: f64,
    tensors: Vec<TensorEntry>,
}

pub fn encode(nets: &AgentNets) -> Vec<u8> {
    let manifest = Manifest {
        hidden: nets.cfg.hidden,
        layers: nets.cfg.layers,
        leaky_slope: nets.cfg.leaky_slope,
        tensors: nets
            .names
            .iter()
            .zip(&nets.params)
            .map(|(n, t)| TensorEntry {
                name: n.clone(),
                shape: t.shape.clone(),
            })
            .collect(),
    };
    let mut out = format!("{MAGIC}\n{}\n", serde_json::to_string(&manifest).unwrap()).into_bytes();
    for t in &nets.params {
        for &x in &t.data {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<AgentNets, CheckpointError> {
    let format = |m: &str| CheckpointError::Format(m.to_string());
    let nl1 = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| format("missing header"))?;
    if &bytes[..nl1] != MAGIC.as_bytes() {
        return Err(format("bad magic line"));
    }
    let rest = &bytes[nl1 + 1..];
    let nl2 = rest
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| format("missing manifest"))?;
    let manifest: Manifest =
        serde_json::from_slice(&rest[..nl2]).map_err(|e| CheckpointError::Format(e.to_string()))?;
    let mut nets = AgentNets::zeros(NetConfig {
        hidden: manifest.hidden,
        layers: manifest.layers,
        leaky_slope: manifest.leaky_slope,
    });
    let describe = |n: &str, s: &[usize]| format!("{n} {s:?}");
    let count = manifest.tensors.len().max(nets.params.len());
    for i in 0..count {
        let found = manifest
            .tensors
            .get(i)
            .map_or("nothing".into(), |e| describe(&e.name, &e.shape));
        let expected = nets
            .params
            .get(i)
            .map_or("nothing".into(), |t| describe(&nets.names[i], &t.shape));
        if found != expected {
            return Err(CheckpointError::ShapeMismatch {
                index: i,
                expected,
                found,
            });
        }
    }
    let data = &rest[nl2 + 1..];
    let need = 4 * nets.num_scalars();
    if data.len() != need {
        return Err(CheckpointError::Truncated {
            expected: need,
            found: data.len(),
        });
    }
    let mut words = data
        .chunks_exact(4)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])));
    for t in &mut nets.params {
        t.data.iter_mut().for_each(|x| *x = words.next().unwrap());
    }
    Ok(nets)
}

pub fn save_checkpoint(nets: &AgentNets, path: &Path) -> Result<(), CheckpointError> {
    std::fs::write(path, encode(nets))?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<AgentNets, CheckpointError> {
    decode(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_f32_exact() {
        let nets = AgentNets::new(NetConfig::default(), 4);
        let back = decode(&encode(&nets)).unwrap();
        for (a, b) in nets.params.iter().zip(&back.params) {
            for (x, y) in a.data.iter().zip(&b.data) {
                assert_eq!((*x as f32).to_bits(), (*y as f32).to_bits());
            }
        }
        assert_eq!(encode(&back), encode(&nets));
    }

    #[test]
    fn wrong_layer_count_is_a_shape_mismatch() {
        let nets = AgentNets::new(NetConfig::default(), 5);
        let text = String::from_utf8_lossy(&encode(&nets)).into_owned();
        let bytes = encode(&nets);
        let forged = text
            .split('\n')
            .nth(1)
            .unwrap()
            .replace("\"layers\":3", "\"layers\":2");
        let mut out = format!("{MAGIC}\n{forged}\n").into_bytes();
        let header = MAGIC.len() + 1 + text.split('\n').nth(1).unwrap().len() + 1;
        out.extend_from_slice(&bytes[header..]);
        assert!(matches!(
            decode(&out),
            Err(CheckpointError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn truncation_is_reported() {
        let nets = AgentNets::new(
            NetConfig {
                hidden: 4,
                layers: 1,
                leaky_slope: 0.2,
            },
            6,
        );
        let mut bytes = encode(&nets);
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(
            decode(&bytes),
            Err(CheckpointError::Truncated { .. })
        ));
        assert!(matches!(
            decode(b"hello\n{}\n"),
            Err(CheckpointError::Format(_))
        ));
    }
}
