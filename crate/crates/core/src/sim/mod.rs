//! Dense statevector simulation with post-selection, shot sampling, and the
//! direct tensor contraction of diagrams used to check the compiler.

mod contract;

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{single_qubit_matrix, Gate, GateKind, Param, ParamCircuit, ParameterStore, Slot};
use crate::rng;

pub use contract::{contract_diagram, Interpretation};

pub const DEFAULT_BUDGET: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("unbound parameter {0}")]
    UnboundParameter(Slot),
    #[error("circuit needs {width} qubits, budget is {budget}")]
    WidthExceeded { width: usize, budget: usize },
    #[error("shots must be positive")]
    ZeroShots,
    #[error("no shot out of {shots} passed post-selection")]
    ZeroSuccess { shots: u64 },
    #[error("diagram needs {qubits} qubits, dense budget is {budget}")]
    TooLarge { qubits: usize, budget: usize },
    #[error("no tensor for word {0:?}")]
    MissingWord(String),
    #[error("tensor for {word:?} has length {found}, expected {expected}")]
    BadTensor { word: String, expected: usize, found: usize },
    #[error("cannot contract box {0:?}")]
    Unsupported(String),
    #[error("no qubit count for type {0:?}")]
    UnknownType(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Amplitudes in big-endian order: qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    width: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << width];
        amplitudes[0] = C64::new(1.0, 0.0);
        Self { width, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Self {
        assert!(amplitudes.len().is_power_of_two(), "length must be a power of two");
        Self {
            width: amplitudes.len().trailing_zeros() as usize,
            amplitudes,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(C64::norm_sqr).sum()
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.width - 1 - q)
    }

    pub fn apply_single(&mut self, q: usize, m: &Matrix2<C64>) {
        let b = self.bit(q);
        for i in 0..self.amplitudes.len() {
            if i & b == 0 {
                let (x, y) = (self.amplitudes[i], self.amplitudes[i | b]);
                self.amplitudes[i] = m[(0, 0)] * x + m[(0, 1)] * y;
                self.amplitudes[i | b] = m[(1, 0)] * x + m[(1, 1)] * y;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (self.bit(control), self.bit(target));
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
    }

    /// Keep only the branch where qubit `q` reads `outcome`.
    pub fn project(&mut self, q: usize, outcome: u8) {
        let b = self.bit(q);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if (i & b != 0) != (outcome == 1) {
                *a = C64::new(0.0, 0.0);
            }
        }
    }

    /// Apply one gate with its angle already resolved.
    pub fn apply(&mut self, g: &Gate, theta: f64) {
        let q = g.qubits[0];
        match g.kind {
            GateKind::Cnot => self.apply_cnot(q, g.qubits[1]),
            GateKind::XPrep => self.apply_single(q, &single_qubit_matrix(GateKind::Hadamard, 0.0).unwrap()),
            GateKind::XMeasurePostselect0 => {
                self.apply_single(q, &single_qubit_matrix(GateKind::Hadamard, 0.0).unwrap());
                self.project(q, 0);
            }
            k => self.apply_single(q, &single_qubit_matrix(k, theta).unwrap()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    /// all-post-selected coefficient over the global scalar; for circuits
    /// with outputs, the norm of the projected output state over the scalar
    pub amplitude: C64,
    pub success_probability: f64,
    pub truth_value_estimate: f64,
}

fn angle(g: &Gate, params: &ParameterStore) -> Result<f64, SimError> {
    match &g.param {
        None => Ok(0.0),
        Some(Param::Literal(x)) => Ok(*x),
        Some(Param::Slot(s)) => params.get(s).ok_or_else(|| SimError::UnboundParameter(s.clone())),
    }
}

/// Final (projected, unnormalised) state of the circuit.
pub fn run(c: &ParamCircuit, params: &ParameterStore, budget: usize) -> Result<StateVector, SimError> {
    if c.width > budget {
        return Err(SimError::WidthExceeded { width: c.width, budget });
    }
    let mut s = StateVector::zero(c.width);
    for g in &c.gates {
        s.apply(g, angle(g, params)?);
    }
    for &(q, o) in &c.postselections {
        s.project(q, o);
    }
    Ok(s)
}

pub fn evaluate(c: &ParamCircuit, params: &ParameterStore) -> Result<EvalResult, SimError> {
    evaluate_with_budget(c, params, DEFAULT_BUDGET)
}

pub fn evaluate_with_budget(c: &ParamCircuit, params: &ParameterStore, budget: usize) -> Result<EvalResult, SimError> {
    let s = run(c, params, budget)?;
    let success_probability = s.norm_sqr().min(1.0);
    let amplitude = if c.is_scalar() {
        s.amplitudes[0] / c.global_scalar
    } else {
        C64::new(success_probability.sqrt() / c.global_scalar, 0.0)
    };
    Ok(EvalResult {
        amplitude,
        success_probability,
        truth_value_estimate: amplitude.norm_sqr().clamp(0.0, 1.0),
    })
}

/// Shot-based estimate. For a fully post-selected circuit each shot reads
/// the sentence as true with the exact truth value's probability, and the
/// estimate is the fraction of true shots. Otherwise each shot passes
/// post-selection with the exact success probability, and the estimate is
/// the fraction of passing shots whose outputs all read 0.
pub fn sample(c: &ParamCircuit, params: &ParameterStore, shots: u64, seed: u64) -> Result<EvalResult, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let exact = evaluate(c, params)?;
    let mut r = rng::stream(seed, 0);
    // a binomial count is the number of successes of `shots` Bernoulli draws
    let draw = |r: &mut rng::Rng, n: u64, p: f64| Binomial::new(n, p.clamp(0.0, 1.0)).expect("valid binomial").sample(r);
    let estimate = if c.is_scalar() {
        draw(&mut r, shots, exact.truth_value_estimate) as f64 / shots as f64
    } else {
        let s = run(c, params, DEFAULT_BUDGET)?;
        let p_pass = exact.success_probability;
        let p_zero = if p_pass > 0.0 {
            let mask: usize = c.output_wires.iter().map(|&q| 1usize << (c.width - 1 - q)).sum();
            let zero: f64 = s
                .amplitudes
                .iter()
                .enumerate()
                .filter(|(i, _)| i & mask == 0)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            zero / p_pass
        } else {
            0.0
        };
        let passed = draw(&mut r, shots, p_pass);
        if passed == 0 {
            return Err(SimError::ZeroSuccess { shots });
        }
        draw(&mut r, passed, p_zero) as f64 / passed as f64
    };
    Ok(EvalResult {
        truth_value_estimate: estimate,
        ..exact
    })
}

/// Evaluate many circuits on `workers` threads. With `shots`, circuit `i`
/// samples from stream `i` of `seed`, so results do not depend on scheduling.
pub fn evaluate_batch(
    circuits: &[ParamCircuit],
    params: &ParameterStore,
    shots: Option<u64>,
    seed: u64,
    workers: usize,
) -> Result<Vec<EvalResult>, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::Pool(e.to_string()))?;
    pool.install(|| {
        circuits
            .par_iter()
            .enumerate()
            .map(|(i, c)| match shots {
                None => evaluate(c, params),
                Some(n) => sample(c, params, n, seed_for(seed, i as u64)),
            })
            .collect()
    })
}

/// Per-item seed derived from a base seed.
pub fn seed_for(seed: u64, i: u64) -> u64 {
    rng::stream(seed, i + 1).random()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(width: usize, gates: Vec<Gate>, post: Vec<(usize, u8)>, out: Vec<usize>) -> ParamCircuit {
        ParamCircuit {
            width,
            gates,
            postselections: post,
            output_wires: out,
            global_scalar: 1.0,
        }
    }

    #[test]
    fn empty_circuit_overlaps_zero() {
        let c = circuit(1, vec![], vec![(0, 0)], vec![]);
        let r = evaluate(&c, &ParameterStore::new()).unwrap();
        assert_eq!(r.amplitude, C64::new(1.0, 0.0));
        assert_eq!(r.truth_value_estimate, 1.0);
        assert_eq!(sample(&c, &ParameterStore::new(), 50, 1).unwrap().truth_value_estimate, 1.0);
    }

    #[test]
    fn cnot_permutes_basis_states() {
        // rows of the CNOT table, control first
        let table = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        for input in 0..4 {
            let mut amps = vec![C64::new(0.0, 0.0); 4];
            amps[input] = C64::new(1.0, 0.0);
            let mut s = StateVector::from_amplitudes(amps);
            s.apply_cnot(0, 1);
            for (out, row) in table.iter().enumerate() {
                assert_eq!(s.amplitudes()[out].re, row[input] as f64);
            }
        }
    }

    #[test]
    fn errors_are_reported() {
        let c = circuit(1, vec![Gate::z_phase(0, Param::Slot(Slot::new("w", 0)))], vec![(0, 0)], vec![]);
        assert_eq!(
            evaluate(&c, &ParameterStore::new()),
            Err(SimError::UnboundParameter(Slot::new("w", 0)))
        );
        let wide = circuit(17, vec![], vec![], (0..17).collect());
        assert_eq!(
            evaluate(&wide, &ParameterStore::new()),
            Err(SimError::WidthExceeded { width: 17, budget: 16 })
        );
        let ok = circuit(1, vec![], vec![(0, 0)], vec![]);
        assert_eq!(sample(&ok, &ParameterStore::new(), 0, 1), Err(SimError::ZeroShots));
        // |1⟩ then post-select 0 on a circuit with an output
        let never = circuit(
            2,
            vec![Gate::x_phase(0, Param::Literal(std::f64::consts::PI))],
            vec![(0, 0)],
            vec![1],
        );
        assert_eq!(
            sample(&never, &ParameterStore::new(), 20, 1),
            Err(SimError::ZeroSuccess { shots: 20 })
        );
    }

    #[test]
    fn batch_matches_serial_and_ignores_worker_count() {
        let cs: Vec<_> = (0..6)
            .map(|k| {
                circuit(
                    1,
                    vec![Gate::h(0), Gate::z_phase(0, Param::Literal(k as f64)), Gate::h(0)],
                    vec![(0, 0)],
                    vec![],
                )
            })
            .collect();
        let p = ParameterStore::new();
        let serial: Vec<_> = cs.iter().map(|c| evaluate(c, &p).unwrap()).collect();
        assert_eq!(evaluate_batch(&cs, &p, None, 0, 3).unwrap(), serial);
        let a = evaluate_batch(&cs, &p, Some(200), 5, 1).unwrap();
        let b = evaluate_batch(&cs, &p, Some(200), 5, 4).unwrap();
        assert_eq!(a, b);
    }
}
