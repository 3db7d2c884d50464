//! Parameterised circuits: gates, word ansätze, the diagram compiler and
//! OpenQASM export.

mod ansatz;
mod compile;
mod gate;
mod qasm;

use thiserror::Error;

use crate::diagram::TypeList;

pub use ansatz::{iqp_block, iqp_param_count, AnsatzConfig, AnsatzFamily, ParameterStore};
pub use compile::{apply_qubit_reduction, compile_diagram, compile_question, compile_sentence, ParamCircuit};
pub use gate::{single_qubit_matrix, Gate, GateKind, Param, Slot};
pub use qasm::to_qasm;

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("no qubit count for type {0:?}")]
    UnsupportedType(String),
    #[error("cannot compile box {0:?}")]
    UnsupportedBox(String),
    #[error("diagram has non-empty domain {0}")]
    NotAState(TypeList),
    #[error("bad ansatz configuration: {0}")]
    BadConfig(String),
    #[error("malformed circuit: {0}")]
    Malformed(String),
    #[error("unbound parameter {0}")]
    UnboundParameter(Slot),
}
