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

//! JSON documents for diagrams (`.zxg`).
//!
//! ```json
//! { "vertices": [{"id": 0, "kind": "boundary", "phase_k": 0}, ...],
//!   "edges": [{"u": 0, "v": 2, "type": "simple"}, ...],
//!   "inputs": [0], "outputs": [1], "next_id": 4 }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeType, VertexKind, ZxDiagram, V};
use crate::phase::Phase;

#[derive(Debug, Error)]
pub enum SerialError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: V,
    kind: VertexKind,
    #[serde(default)]
    phase_k: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: V,
    v: V,
    #[serde(rename = "type")]
    ty: EdgeType,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    inputs: Vec<V>,
    outputs: Vec<V>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    next_id: Option<V>,
}

pub fn serialize(d: &ZxDiagram) -> String {
    let doc = DiagramDoc {
        vertices: d
            .vertices()
            .map(|v| VertexDoc {
                id: v,
                kind: d.kind(v),
                phase_k: i64::from(d.phase(v).k()),
            })
            .collect(),
        edges: d.edges().map(|(u, v, ty)| EdgeDoc { u, v, ty }).collect(),
        inputs: d.inputs().to_vec(),
        outputs: d.outputs().to_vec(),
        next_id: Some(d.next_id()),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("diagram documents always serialize");
    s.push('\n');
    s
}

pub fn deserialize(text: &str) -> Result<ZxDiagram, SerialError> {
    let doc: DiagramDoc = serde_json::from_str(text).map_err(|e| SerialError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let field = |field: String, msg: String| SerialError::Field { field, msg };
    let mut d = ZxDiagram::empty();
    for (i, vd) in doc.vertices.iter().enumerate() {
        if vd.kind == VertexKind::Boundary && vd.phase_k.rem_euclid(8) != 0 {
            return Err(field(
                format!("vertices[{i}].phase_k"),
                "boundaries carry no phase".into(),
            ));
        }
        if !d.add_vertex_at(vd.id, vd.kind, Phase::new(vd.phase_k)) {
            return Err(field(
                format!("vertices[{i}].id"),
                format!("duplicate id {}", vd.id),
            ));
        }
    }
    for (i, e) in doc.edges.iter().enumerate() {
        for (name, x) in [("u", e.u), ("v", e.v)] {
            if !d.contains(x) {
                return Err(field(
                    format!("edges[{i}].{name}"),
                    format!("unknown vertex {x}"),
                ));
            }
        }
        if e.u == e.v {
            return Err(field(format!("edges[{i}]"), "self-loop".into()));
        }
        if d.connected(e.u, e.v) {
            return Err(field(format!("edges[{i}]"), "parallel edge".into()));
        }
        d.add_edge(e.u, e.v, e.ty);
    }
    for (name, list) in [("inputs", &doc.inputs), ("outputs", &doc.outputs)] {
        for (i, &b) in list.iter().enumerate() {
            if !d.contains(b) || !d.is_boundary(b) {
                return Err(field(
                    format!("{name}[{i}]"),
                    format!("{b} is not a boundary vertex"),
                ));
            }
        }
    }
    if let Some(next) = doc.next_id {
        if next < d.next_id() {
            return Err(field(
                "next_id".into(),
                format!("{next} is below an existing id"),
            ));
        }
        d.reserve_ids(next);
    }
    d.set_inputs(doc.inputs);
    d.set_outputs(doc.outputs);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_identity() {
        let d = ZxDiagram::new(2);
        assert_eq!(deserialize(&serialize(&d)).unwrap(), d);
    }

    #[test]
    fn rejects_missing_fields() {
        match deserialize("{}") {
            Err(SerialError::Syntax { msg, .. }) => assert!(msg.contains("missing field")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_bad_edges_by_field() {
        let text = r#"{"vertices":[{"id":0,"kind":"z","phase_k":0}],
                       "edges":[{"u":0,"v":5,"type":"hadamard"}],"inputs":[],"outputs":[]}"#;
        match deserialize(text) {
            Err(SerialError::Field { field, .. }) => assert_eq!(field, "edges[0].v"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gaps_in_ids_survive() {
        let mut d = ZxDiagram::new(1);
        let v = d.add_vertex(VertexKind::Z);
        d.remove_vertex(v);
        let back = deserialize(&serialize(&d)).unwrap();
        assert_eq!(back.next_id(), d.next_id());
        assert_eq!(back, d);
    }
}
