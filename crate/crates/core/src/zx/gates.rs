//! Translation between gate lists and circuit-like ZX graphs.
//!
//! | gate                     | graph                                      |
//! |--------------------------|--------------------------------------------|
//! | `x_prep`                 | one-legged Z(0) (`|0⟩ + |1⟩`)              |
//! | `x_phase(α)`             | X(α) on the line                           |
//! | `z_phase(α)`             | Z(α) on the line                           |
//! | `cnot`                   | Z(0) on the control, X(0) on the target, joined |
//! | `x_measure_postselect0`  | one-legged Z(0) effect (`⟨0| + ⟨1|`)       |
//! | `hadamard`               | Hadamard edge                              |

use super::{wrap_phase, EdgeKind, VertexKind, ZxError, ZxGraph};
use crate::circuit::{Gate, GateKind, Param};

fn literal(g: &Gate) -> Result<f64, ZxError> {
    match &g.param {
        Some(Param::Literal(x)) => Ok(*x),
        Some(Param::Slot(s)) => Err(ZxError::SymbolicPhase(s.to_string())),
        None => Ok(0.0),
    }
}

#[derive(Clone, Copy)]
enum Line {
    Fresh,
    Open(usize, EdgeKind),
    Closed,
}

fn extend(g: &mut ZxGraph, lines: &mut [Line], q: usize, kind: VertexKind, phase: f64) -> Result<usize, ZxError> {
    let Line::Open(u, k) = lines[q] else {
        return Err(ZxError::NotCircuitLike(format!("gate on closed line {q}")));
    };
    let v = g.add_on_line(kind, phase, q);
    g.add_edge(u, v, k);
    lines[q] = Line::Open(v, EdgeKind::Plain);
    Ok(v)
}

/// Graph of a whole circuit on `width` lines. A line whose first gate is
/// `x_prep` has no input; a line ended by `x_measure_postselect0` has no output.
pub fn circuit_to_zx(width: usize, gates: &[Gate]) -> Result<ZxGraph, ZxError> {
    let bad = |m: String| Err(ZxError::NotCircuitLike(m));
    let mut g = ZxGraph::new();
    let mut lines = vec![Line::Fresh; width];
    for (q, line) in lines.iter_mut().enumerate() {
        let prepared = gates
            .iter()
            .find(|x| x.qubits.contains(&q))
            .is_some_and(|x| x.kind == GateKind::XPrep);
        if !prepared {
            let b = g.add_input();
            g.vertices.get_mut(&b).unwrap().qubit = Some(q);
            *line = Line::Open(b, EdgeKind::Plain);
        }
    }
    for gate in gates {
        if let Some(&q) = gate.qubits.iter().find(|&&q| q >= width) {
            return bad(format!("qubit {q} outside width {width}"));
        }
        let q = gate.qubits[0];
        match gate.kind {
            GateKind::XPrep => {
                if !matches!(lines[q], Line::Fresh) {
                    return bad(format!("x_prep on used line {q}"));
                }
                let v = g.add_on_line(VertexKind::Z, 0.0, q);
                lines[q] = Line::Open(v, EdgeKind::Plain);
            }
            GateKind::Hadamard => match lines[q] {
                Line::Open(u, EdgeKind::Plain) => lines[q] = Line::Open(u, EdgeKind::Hadamard),
                Line::Open(u, EdgeKind::Hadamard) => {
                    let v = g.add_on_line(VertexKind::Z, 0.0, q);
                    g.add_edge(u, v, EdgeKind::Hadamard);
                    lines[q] = Line::Open(v, EdgeKind::Hadamard);
                }
                _ => return bad(format!("gate on closed line {q}")),
            },
            GateKind::ZPhase => {
                extend(&mut g, &mut lines, q, VertexKind::Z, literal(gate)?)?;
            }
            GateKind::XPhase => {
                extend(&mut g, &mut lines, q, VertexKind::X, literal(gate)?)?;
            }
            GateKind::Cnot => {
                let t = gate.qubits[1];
                let c = extend(&mut g, &mut lines, q, VertexKind::Z, 0.0)?;
                let x = extend(&mut g, &mut lines, t, VertexKind::X, 0.0)?;
                g.add_edge(c, x, EdgeKind::Plain);
            }
            GateKind::XMeasurePostselect0 => {
                extend(&mut g, &mut lines, q, VertexKind::Z, 0.0)?;
                lines[q] = Line::Closed;
            }
        }
    }
    for (q, line) in lines.iter().enumerate() {
        if let Line::Open(u, k) = *line {
            let b = g.add_output();
            g.vertices.get_mut(&b).unwrap().qubit = Some(q);
            g.add_edge(u, b, k);
        }
    }
    Ok(g)
}

/// Graph of a single gate on its own qubits, renumbered from 0.
pub fn gate_to_zx(gate: &Gate) -> Result<ZxGraph, ZxError> {
    let local = gate.remap(|q| gate.qubits.iter().position(|&x| x == q).unwrap());
    circuit_to_zx(gate.qubits.len(), &[local])
}

/// Z(0) on the control joined to X(0) on the target by one plain edge.
pub fn cnot_from_spiders() -> ZxGraph {
    circuit_to_zx(2, &[Gate::cnot(0, 1)]).expect("cnot is circuit-like")
}

/// Read a gate list back off a graph in the shape `circuit_to_zx` produces.
/// Vertices are visited in creation order, which is time order on each line.
pub fn zx_to_gates(g: &ZxGraph) -> Result<Vec<Gate>, ZxError> {
    let bad = |m: String| ZxError::NotCircuitLike(m);
    let qubit = |v: usize| g.vertices[&v].qubit.ok_or_else(|| bad(format!("vertex {v} has no line")));
    // (previous, next) neighbour on the vertex's own line, and links across lines
    type Link = (usize, EdgeKind);
    type Lines = (Option<Link>, Option<Link>, Vec<Link>);
    let lines = |v: usize| -> Result<Lines, ZxError> {
        let q = qubit(v)?;
        let (mut prev, mut next, mut cross) = (None, None, Vec::new());
        for i in g.incident(v) {
            let e = g.edges[i];
            let w = e.other(v);
            if w == v {
                return Err(bad(format!("self-loop at {v}")));
            }
            let slot = if qubit(w)? != q {
                cross.push((w, e.kind));
                continue;
            } else if w < v {
                &mut prev
            } else {
                &mut next
            };
            if slot.replace((w, e.kind)).is_some() {
                return Err(bad(format!("vertex {v} branches on its line")));
            }
        }
        Ok((prev, next, cross))
    };
    let mut gates = Vec::new();
    let mut done = std::collections::BTreeSet::new();
    for (&v, x) in &g.vertices {
        if done.contains(&v) {
            continue;
        }
        let q = qubit(v)?;
        let (prev, next, cross) = lines(v)?;
        if prev.is_some_and(|(_, k)| k == EdgeKind::Hadamard) {
            gates.push(Gate::h(q));
        }
        let phase = wrap_phase(x.phase);
        let zero = super::phase_eq(phase, 0.0);
        match (x.kind, prev, next, cross.as_slice()) {
            (VertexKind::Boundary, _, _, []) => {}
            (VertexKind::Z, None, Some(_), []) if zero => gates.push(Gate::x_prep(q)),
            (VertexKind::Z, Some(_), None, []) if zero => gates.push(Gate::x_measure(q)),
            (VertexKind::Z, Some((_, EdgeKind::Hadamard)), Some((_, EdgeKind::Hadamard)), []) if zero => {}
            (VertexKind::Z, Some(_), Some(_), []) => gates.push(Gate::z_phase(q, Param::Literal(phase))),
            (VertexKind::X, Some(_), Some(_), []) => gates.push(Gate::x_phase(q, Param::Literal(phase))),
            (kind, Some(_), Some(_), &[(w, EdgeKind::Plain)]) if zero => {
                let partner = &g.vertices[&w];
                let (wp, wn, wc) = lines(w)?;
                let ok = partner.kind != kind
                    && partner.kind != VertexKind::Boundary
                    && super::phase_eq(partner.phase, 0.0)
                    && wp.is_some()
                    && wn.is_some()
                    && wc.len() == 1;
                if !ok {
                    return Err(bad(format!("vertices {v} and {w} do not form a CNOT")));
                }
                let t = qubit(w)?;
                if wp.is_some_and(|(_, k)| k == EdgeKind::Hadamard) {
                    gates.push(Gate::h(t));
                }
                gates.push(if kind == VertexKind::Z {
                    Gate::cnot(q, t)
                } else {
                    Gate::cnot(t, q)
                });
                done.insert(w);
            }
            _ => return Err(bad(format!("vertex {v} matches no gate"))),
        }
    }
    Ok(gates)
}
