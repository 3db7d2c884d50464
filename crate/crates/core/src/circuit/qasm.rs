use std::fmt::Write;

use super::{CompileError, Gate, GateKind, Param, ParamCircuit, ParameterStore};

fn angle(g: &Gate, params: &ParameterStore) -> Result<f64, CompileError> {
    match &g.param {
        Some(Param::Literal(x)) => Ok(*x),
        Some(Param::Slot(s)) => params.get(s).ok_or_else(|| CompileError::UnboundParameter(s.clone())),
        None => Ok(0.0),
    }
}

/// OpenQASM 2 text with parameters bound. Post-selections become plain
/// measurements followed by a comment naming the required outcome.
pub fn to_qasm(c: &ParamCircuit, params: &ParameterStore) -> Result<String, CompileError> {
    let mut out = String::new();
    let w = c.width.max(1);
    writeln!(out, "OPENQASM 2.0;\ninclude \"qelib1.inc\";").unwrap();
    writeln!(out, "// global scalar {:.17}", c.global_scalar).unwrap();
    writeln!(out, "qreg q[{w}];\ncreg c[{w}];").unwrap();
    for g in &c.gates {
        let q = g.qubits[0];
        match g.kind {
            GateKind::Hadamard | GateKind::XPrep => writeln!(out, "h q[{q}];"),
            GateKind::ZPhase => writeln!(out, "u1({:.17}) q[{q}];", angle(g, params)?),
            GateKind::XPhase => writeln!(out, "h q[{q}];\nu1({:.17}) q[{q}];\nh q[{q}];", angle(g, params)?),
            GateKind::Cnot => writeln!(out, "cx q[{q}],q[{}];", g.qubits[1]),
            GateKind::XMeasurePostselect0 => {
                writeln!(out, "h q[{q}];\nmeasure q[{q}] -> c[{q}];\n// postselect c[{q}] == 0")
            }
        }
        .unwrap();
    }
    for &(q, o) in &c.postselections {
        writeln!(out, "measure q[{q}] -> c[{q}];\n// postselect c[{q}] == {o}").unwrap();
    }
    for &q in &c.output_wires {
        writeln!(out, "// output q[{q}]").unwrap();
    }
    Ok(out)
}
