use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Gate vocabulary of the compiler. The two non-unitary kinds prepare `|+⟩`
/// on a fresh qubit and project a qubit onto `⟨+|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    XPrep,
    XPhase,
    ZPhase,
    Cnot,
    Hadamard,
    XMeasurePostselect0,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn is_parameterised(self) -> bool {
        matches!(self, GateKind::XPhase | GateKind::ZPhase)
    }
}

/// Named parameter slot: the `index`-th angle of `word`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub word: String,
    pub index: usize,
}

impl Slot {
    pub fn new(word: &str, index: usize) -> Self {
        Self {
            word: word.to_string(),
            index,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.word, self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Slot(Slot),
    Literal(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<Param>,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Self::plain(GateKind::Hadamard, vec![q])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::plain(GateKind::Cnot, vec![control, target])
    }

    pub fn x_prep(q: usize) -> Self {
        Self::plain(GateKind::XPrep, vec![q])
    }

    pub fn x_measure(q: usize) -> Self {
        Self::plain(GateKind::XMeasurePostselect0, vec![q])
    }

    pub fn z_phase(q: usize, p: Param) -> Self {
        Self {
            kind: GateKind::ZPhase,
            qubits: vec![q],
            param: Some(p),
        }
    }

    pub fn x_phase(q: usize, p: Param) -> Self {
        Self {
            kind: GateKind::XPhase,
            qubits: vec![q],
            param: Some(p),
        }
    }

    fn plain(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits, param: None }
    }

    pub fn slot(&self) -> Option<&Slot> {
        match &self.param {
            Some(Param::Slot(s)) => Some(s),
            _ => None,
        }
    }

    /// Same gate on relabelled qubits.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            param: self.param.clone(),
        }
    }
}

/// 2×2 matrix of a single-qubit unitary kind at angle `theta`.
pub fn single_qubit_matrix(kind: GateKind, theta: f64) -> Option<Matrix2<C64>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let phase = C64::from_polar(1.0, theta);
    let h = Matrix2::new(one, one, one, -one) * C64::new(FRAC_1_SQRT_2, 0.0);
    match kind {
        GateKind::Hadamard => Some(h),
        GateKind::ZPhase => Some(Matrix2::new(one, zero, zero, phase)),
        GateKind::XPhase => Some(h * Matrix2::new(one, zero, zero, phase) * h),
        _ => None,
    }
}
