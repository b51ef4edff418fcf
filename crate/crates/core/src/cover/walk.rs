//! Closed walks in the base complex and the parity of their branch-cut crossings.

use serde::{Deserialize, Serialize};

use super::CoverComplex;
use crate::error::{Error, Result};
use crate::spheremap::{ArcId, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "lowercase")]
pub enum WalkStep {
    /// Pass through the interior of an arc into the face on its other side.
    Cross { arc: ArcId },
    /// Swing around a vertex (never a cone point) into another face at that vertex.
    Pivot { vertex: VertexId, to_face: usize },
}

/// A walk through faces of the subdivided base; closed when it ends in its start face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub start_face: usize,
    pub steps: Vec<WalkStep>,
}

impl CoverComplex {
    /// Crossings of the branch set along a closed walk, mod 2. A walk has odd parity
    /// exactly when its lift starting on one sheet ends on the other.
    pub fn winding_parity(&self, walk: &Walk) -> Result<u8> {
        let base = self.base();
        let bad = |msg: String| Err(Error::InvalidWalk(msg));
        if walk.start_face >= base.faces().len() {
            return bad(format!("start face {} does not exist", walk.start_face));
        }
        let mut face = walk.start_face;
        let mut parity = 0u8;
        for (n, step) in walk.steps.iter().enumerate() {
            match *step {
                WalkStep::Cross { arc } => {
                    let Some(ai) = base.arc_index(arc) else {
                        return bad(format!("step {n}: arc {arc} does not exist"));
                    };
                    let [d0, d1] = base.arcs()[ai].darts;
                    let (f0, f1) = (base.face_of(d0), base.face_of(d1));
                    face = if face == f0 {
                        f1
                    } else if face == f1 {
                        f0
                    } else {
                        return bad(format!("step {n}: arc {arc} is not on the boundary of face {face}"));
                    };
                    parity ^= self.is_branch_arc(ai) as u8;
                }
                WalkStep::Pivot { vertex, to_face } => {
                    let Some(v) = base.vertex_index(vertex) else {
                        return bad(format!("step {n}: vertex {vertex} does not exist"));
                    };
                    if base.is_cone(v) {
                        return bad(format!("step {n}: walk passes through cone point {vertex}"));
                    }
                    let corner_in = |f: usize| base.rotation(v).iter().copied().find(|&d| base.face_of(d) == f);
                    let (Some(from), Some(to)) = (corner_in(face), corner_in(to_face)) else {
                        return bad(format!("step {n}: faces {face} and {to_face} do not meet at vertex {vertex}"));
                    };
                    parity ^= self.corner_offset[from] ^ self.corner_offset[to];
                    face = to_face;
                }
            }
        }
        if face != walk.start_face {
            return bad(format!("walk ends in face {face}, not its start face {}", walk.start_face));
        }
        Ok(parity)
    }

    /// Small loop around a base vertex, crossing each incident arc once.
    pub fn circle_around_vertex(&self, vertex: VertexId) -> Result<Walk> {
        let base = self.base();
        let v = base.vertex_index(vertex).ok_or_else(|| Error::Input(format!("vertex {vertex} does not exist")))?;
        let rot = base.rotation(v);
        let Some(&first) = rot.first() else {
            return Err(Error::InvalidWalk(format!("vertex {vertex} has no incident arcs")));
        };
        Ok(Walk {
            start_face: base.face_of(first),
            steps: rot.iter().map(|&d| WalkStep::Cross { arc: base.arcs()[base.dart_arc(d)].id }).collect(),
        })
    }

    /// Loop around a non-loop arc and both its endpoints, staying close to them.
    pub fn circle_around_edge(&self, arc: ArcId) -> Result<Walk> {
        let base = self.base();
        let ai = base.arc_index(arc).ok_or_else(|| Error::Input(format!("arc {arc} does not exist")))?;
        let d = base.arcs()[ai].darts[0];
        let t = base.twin(d);
        if base.dart_vertex(d) == base.dart_vertex(t) {
            return Err(Error::InvalidWalk(format!("arc {arc} is a loop")));
        }
        let mut steps = Vec::new();
        for start in [d, t] {
            let mut x = base.next(start);
            while x != start {
                steps.push(WalkStep::Cross { arc: base.arcs()[base.dart_arc(x)].id });
                x = base.next(x);
            }
        }
        Ok(Walk { start_face: base.face_of(base.next(d)), steps })
    }
}
