use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CompileError, Gate, Param, Slot};
use crate::diagram::{types, TypeList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzFamily {
    #[default]
    Iqp,
}

/// Circuit shape for word states. Words with one pregroup wire use
/// `noun_layers`, wider words `verb_layers`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzConfig {
    #[serde(default)]
    pub family: AnsatzFamily,
    pub noun_layers: usize,
    pub verb_layers: usize,
    /// qubits per basic type name; adjoints share their base's count
    pub qubits_per_type: BTreeMap<String, usize>,
}

impl Default for AnsatzConfig {
    fn default() -> Self {
        Self {
            family: AnsatzFamily::Iqp,
            noun_layers: 1,
            verb_layers: 2,
            qubits_per_type: BTreeMap::from([("n".to_string(), 1), ("s".to_string(), 0)]),
        }
    }
}

impl AnsatzConfig {
    pub fn validate(&self) -> Result<(), CompileError> {
        if self.noun_layers == 0 || self.verb_layers == 0 {
            return Err(CompileError::BadConfig("layers must be at least 1".into()));
        }
        match self.qubits_per_type.get("n") {
            Some(&q) if q >= 1 => Ok(()),
            _ => Err(CompileError::BadConfig("n needs at least one qubit".into())),
        }
    }

    pub fn qubits_of(&self, name: &str) -> Result<usize, CompileError> {
        self.qubits_per_type
            .get(name)
            .copied()
            .ok_or_else(|| CompileError::UnsupportedType(name.to_string()))
    }

    pub fn width_of(&self, t: &TypeList) -> Result<usize, CompileError> {
        t.iter().map(|b| self.qubits_of(b.name())).sum()
    }

    /// Words of the relative-pronoun type are parameter-free copy spiders.
    pub fn is_copy_word(cod: &TypeList) -> bool {
        *cod == types("n^r n s^l n")
    }

    pub fn layers_for(&self, cod: &TypeList) -> usize {
        if cod.len() == 1 {
            self.noun_layers
        } else {
            self.verb_layers
        }
    }

    /// Number of angles a word of this type owns.
    pub fn param_count(&self, cod: &TypeList) -> Result<usize, CompileError> {
        if Self::is_copy_word(cod) {
            return Ok(0);
        }
        let w = self.width_of(cod)?;
        Ok(iqp_param_count(w, self.layers_for(cod)))
    }
}

pub fn iqp_param_count(wires: usize, layers: usize) -> usize {
    if wires == 0 {
        0
    } else {
        layers * (2 * wires - 1)
    }
}

/// IQP word block on local qubits `0..wires`. Each layer is a Hadamard on
/// every wire, a Z phase on every wire, then a controlled phase between
/// neighbours written as CNOT, Z phase, CNOT. Slots are numbered in gate order.
pub fn iqp_block(word: &str, wires: usize, layers: usize) -> Vec<Gate> {
    assert!(layers >= 1, "iqp_block needs at least one layer");
    let mut gates = Vec::new();
    let mut k = 0;
    let mut slot = || {
        k += 1;
        Param::Slot(Slot::new(word, k - 1))
    };
    for _ in 0..layers {
        for q in 0..wires {
            gates.push(Gate::h(q));
        }
        for q in 0..wires {
            gates.push(Gate::z_phase(q, slot()));
        }
        for q in 1..wires {
            gates.push(Gate::cnot(q - 1, q));
            gates.push(Gate::z_phase(q, slot()));
            gates.push(Gate::cnot(q - 1, q));
        }
    }
    gates
}

/// Angles per word, in radians.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterStore {
    values: BTreeMap<String, Vec<f64>>,
}

impl ParameterStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Uniform angles in `[0, 2π)` for every word that owns parameters.
    pub fn random<'a>(
        words: impl IntoIterator<Item = (&'a str, &'a TypeList)>,
        cfg: &AnsatzConfig,
        seed: u64,
    ) -> Result<Self, CompileError> {
        // drawn in word order, so the caller's order does not matter
        let mut shapes = BTreeMap::new();
        for (w, t) in words {
            shapes.insert(w, cfg.param_count(t)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = shapes
            .into_iter()
            .filter(|&(_, n)| n > 0)
            .map(|(w, n)| (w.to_string(), (0..n).map(|_| rng.random_range(0.0..TAU)).collect()))
            .collect();
        Ok(Self { values })
    }

    pub fn insert(&mut self, word: &str, angles: Vec<f64>) -> Result<(), CompileError> {
        if let Some(x) = angles.iter().find(|x| !x.is_finite()) {
            return Err(CompileError::BadConfig(format!("angle {x} for {word:?} is not finite")));
        }
        self.values.insert(word.to_string(), angles);
        Ok(())
    }

    pub fn get(&self, slot: &Slot) -> Option<f64> {
        self.values.get(&slot.word)?.get(slot.index).copied()
    }

    pub fn word(&self, word: &str) -> Option<&[f64]> {
        self.values.get(word).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// All angles in word order, then index order.
    pub fn flatten(&self) -> Vec<f64> {
        self.values.values().flatten().copied().collect()
    }

    /// Same shape, new values taken from `flat` in [`flatten`](Self::flatten) order.
    pub fn with_flat(&self, flat: &[f64]) -> Self {
        assert_eq!(flat.len(), self.len(), "flat vector length");
        let mut at = 0;
        let values = self
            .values
            .iter()
            .map(|(w, v)| {
                let next = flat[at..at + v.len()].to_vec();
                at += v.len();
                (w.clone(), next)
            })
            .collect();
        Self { values }
    }

    /// Total number of angles.
    pub fn len(&self) -> usize {
        self.values.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
