//! Open ZX graphs: phased Z and X spiders joined by plain or Hadamard edges,
//! with ordered input and output boundary vertices.

pub mod gates;
pub mod rewrite;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gates::{circuit_to_zx, cnot_from_spiders, gate_to_zx, zx_to_gates};
pub use rewrite::{color_change, fuse_spiders, normalize, remove_identity_spiders};

/// Largest edge count `semantics` will contract densely.
pub const WIRE_BUDGET: usize = 12;

/// Phases closer than this (mod 2π) are equal.
pub const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ZxError {
    #[error("graph has {wires} wires, dense contraction budget is {budget}")]
    TooLarge { wires: usize, budget: usize },
    #[error("graph is not circuit-like: {0}")]
    NotCircuitLike(String),
    #[error("vertex {0} is not a spider")]
    NotASpider(usize),
    #[error("gate parameter {0} is symbolic; bind it before translating")]
    SymbolicPhase(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Boundary,
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Plain,
    Hadamard,
}

impl EdgeKind {
    /// Kind of two edges joined end to end (`H·H = 1`).
    pub fn then(self, other: EdgeKind) -> EdgeKind {
        if self == other {
            EdgeKind::Plain
        } else {
            EdgeKind::Hadamard
        }
    }

    pub fn toggled(self) -> EdgeKind {
        self.then(EdgeKind::Hadamard)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub kind: VertexKind,
    #[serde(default)]
    pub phase: f64,
    /// Circuit line the vertex sits on, when the graph came from a circuit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// Reduce a phase into `[0, 2π)`, snapping values within tolerance of `2π` to 0.
pub fn wrap_phase(p: f64) -> f64 {
    let w = p.rem_euclid(TAU);
    if TAU - w < PHASE_TOL {
        0.0
    } else {
        w
    }
}

pub fn phase_eq(a: f64, b: f64) -> bool {
    let d = wrap_phase(a - b);
    d < PHASE_TOL || TAU - d < PHASE_TOL
}

/// Edges may repeat and may be self-loops; vertex ids are never reused.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ZxGraph {
    pub vertices: BTreeMap<usize, Vertex>,
    pub edges: Vec<Edge>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    next_id: usize,
}

impl ZxGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn add_vertex(&mut self, kind: VertexKind, phase: f64, qubit: Option<usize>) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        let phase = wrap_phase(phase);
        self.vertices.insert(id, Vertex { kind, phase, qubit });
        id
    }

    pub fn add_spider(&mut self, kind: VertexKind, phase: f64) -> usize {
        assert!(kind != VertexKind::Boundary, "use add_input/add_output for boundaries");
        self.add_vertex(kind, phase, None)
    }

    pub(crate) fn add_on_line(&mut self, kind: VertexKind, phase: f64, qubit: usize) -> usize {
        self.add_vertex(kind, phase, Some(qubit))
    }

    pub fn add_input(&mut self) -> usize {
        let v = self.add_vertex(VertexKind::Boundary, 0.0, None);
        self.inputs.push(v);
        v
    }

    pub fn add_output(&mut self) -> usize {
        let v = self.add_vertex(VertexKind::Boundary, 0.0, None);
        self.outputs.push(v);
        v
    }

    pub fn add_edge(&mut self, a: usize, b: usize, kind: EdgeKind) {
        debug_assert!(self.vertices.contains_key(&a) && self.vertices.contains_key(&b));
        self.edges.push(Edge { a, b, kind });
    }

    pub fn vertex(&self, v: usize) -> Option<&Vertex> {
        self.vertices.get(&v)
    }

    pub fn is_spider(&self, v: usize) -> bool {
        self.vertices.get(&v).is_some_and(|x| x.kind != VertexKind::Boundary)
    }

    pub fn spiders(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices
            .iter()
            .filter(|(_, x)| x.kind != VertexKind::Boundary)
            .map(|(&v, _)| v)
    }

    pub fn spider_count(&self) -> usize {
        self.spiders().count()
    }

    /// Number of edge ends at `v` (a self-loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.a == v) as usize + (e.b == v) as usize).sum()
    }

    /// Indices of edges touching `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }

    pub fn remove_vertex(&mut self, v: usize) {
        self.vertices.remove(&v);
        self.edges.retain(|e| !e.touches(v));
    }

    /// Sequential composition: outputs of `self` plugged into inputs of `other`.
    pub fn then(&self, other: &ZxGraph) -> Option<ZxGraph> {
        if self.outputs.len() != other.inputs.len() {
            return None;
        }
        let mut g = self.clone();
        let mut map = BTreeMap::new();
        for (&v, x) in &other.vertices {
            map.insert(v, g.add_vertex(x.kind, x.phase, x.qubit));
        }
        g.edges.extend(other.edges.iter().map(|e| Edge {
            a: map[&e.a],
            b: map[&e.b],
            kind: e.kind,
        }));
        g.inputs = self.inputs.clone();
        g.outputs = other.outputs.iter().map(|v| map[v]).collect();
        for (&out, inp) in self.outputs.iter().zip(&other.inputs) {
            let inp = map[inp];
            let e1 = g.incident(out)[0];
            let e2 = g.incident(inp)[0];
            let (u, k1) = (g.edges[e1].other(out), g.edges[e1].kind);
            let (w, k2) = (g.edges[e2].other(inp), g.edges[e2].kind);
            let qubit = g.vertices[&out].qubit;
            g.remove_vertex(out);
            g.remove_vertex(inp);
            if k1 == EdgeKind::Hadamard && k2 == EdgeKind::Hadamard {
                // keep both Hadamards visible to circuit extraction
                let mid = g.add_vertex(VertexKind::Z, 0.0, qubit);
                g.add_edge(u, mid, EdgeKind::Hadamard);
                g.add_edge(mid, w, EdgeKind::Hadamard);
            } else {
                g.add_edge(u, w, k1.then(k2));
            }
        }
        Some(g)
    }

    /// Dense linear map, rows indexed by outputs and columns by inputs, the
    /// first boundary being the most significant bit.
    ///
    /// Z(α) is `|0…0⟩⟨0…0| + e^{iα}|1…1⟩⟨1…1|`; X(α) has entries
    /// `(1 + e^{iα}(-1)^{parity}) / 2`, which is the X-basis spider scaled so
    /// that a Z and an X spider joined by one edge give CNOT exactly. A
    /// Hadamard edge is the unitary `H`.
    pub fn semantics(&self) -> Result<DMatrix<C64>, ZxError> {
        if self.edges.len() > WIRE_BUDGET {
            return Err(ZxError::TooLarge {
                wires: self.edges.len(),
                budget: WIRE_BUDGET,
            });
        }
        // one bit per plain edge, one per end of a Hadamard edge
        let mut bits = 0usize;
        let mut ends: Vec<(usize, usize)> = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            match e.kind {
                EdgeKind::Plain => {
                    ends.push((bits, bits));
                    bits += 1;
                }
                EdgeKind::Hadamard => {
                    ends.push((bits, bits + 1));
                    bits += 2;
                }
            }
        }
        let index: BTreeMap<usize, usize> = self.vertices.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut legs: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (e, &(ba, bb)) in self.edges.iter().zip(&ends) {
            legs[index[&e.a]].push(ba);
            legs[index[&e.b]].push(bb);
        }
        let boundary_bit = |v: &usize| -> usize {
            let l = &legs[index[v]];
            assert_eq!(l.len(), 1, "boundary vertex {v} must have exactly one edge");
            l[0]
        };
        let out_bits: Vec<usize> = self.outputs.iter().map(boundary_bit).collect();
        let in_bits: Vec<usize> = self.inputs.iter().map(boundary_bit).collect();
        let spiders: Vec<(VertexKind, C64, &Vec<usize>)> = self
            .vertices
            .iter()
            .filter(|(_, x)| x.kind != VertexKind::Boundary)
            .map(|(v, x)| (x.kind, C64::from_polar(1.0, x.phase), &legs[index[v]]))
            .collect();
        let hadamards: Vec<(usize, usize)> = self
            .edges
            .iter()
            .zip(&ends)
            .filter(|(e, _)| e.kind == EdgeKind::Hadamard)
            .map(|(_, &x)| x)
            .collect();

        let mut m = DMatrix::zeros(1 << out_bits.len(), 1 << in_bits.len());
        let bit = |x: usize, i: usize| (x >> i) & 1;
        for x in 0usize..(1 << bits) {
            let mut val = C64::new(1.0, 0.0);
            for &(kind, phase, legs) in &spiders {
                let f = match kind {
                    VertexKind::Z => match legs.first() {
                        None => C64::new(1.0, 0.0) + phase,
                        Some(&b0) => {
                            let first = bit(x, b0);
                            if legs.iter().any(|&b| bit(x, b) != first) {
                                C64::new(0.0, 0.0)
                            } else if first == 1 {
                                phase
                            } else {
                                C64::new(1.0, 0.0)
                            }
                        }
                    },
                    VertexKind::X => {
                        let parity = legs.iter().map(|&b| bit(x, b)).sum::<usize>() % 2;
                        let sign = if parity == 0 { 1.0 } else { -1.0 };
                        (C64::new(1.0, 0.0) + phase * sign) * 0.5
                    }
                    VertexKind::Boundary => unreachable!(),
                };
                val *= f;
                if val == C64::new(0.0, 0.0) {
                    break;
                }
            }
            if val == C64::new(0.0, 0.0) {
                continue;
            }
            for &(ba, bb) in &hadamards {
                if bit(x, ba) & bit(x, bb) == 1 {
                    val = -val;
                }
                val *= FRAC_1_SQRT_2;
            }
            let row = out_bits.iter().fold(0, |acc, &b| (acc << 1) | bit(x, b));
            let col = in_bits.iter().fold(0, |acc, &b| (acc << 1) | bit(x, b));
            m[(row, col)] += val;
        }
        Ok(m)
    }
}

/// Whether `a = λ·b` for some nonzero complex `λ`, entrywise within `tol`
/// after dividing out the ratio at the largest entry of `b`.
pub fn equal_up_to_scalar(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let (i, pivot) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(i, v)| (i, *v))
        .unwrap_or((0, C64::new(0.0, 0.0)));
    if pivot.norm() < tol {
        return a.iter().all(|v| v.norm() < tol);
    }
    let ratio = a.as_slice()[i] / pivot;
    if ratio.norm() < tol {
        return false;
    }
    let scale = b.iter().map(|v| v.norm()).fold(1.0, f64::max);
    a.iter().zip(b.iter()).all(|(x, y)| (x - ratio * y).norm() <= tol * scale)
}
