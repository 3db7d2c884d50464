#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use qnlp::circuit::{AnsatzConfig, ParameterStore};
use qnlp::diagram::{types, TypeList};
use qnlp::grammar::Lexicon;
use qnlp::sim::Interpretation;

pub fn kron_all(ms: &[DMatrix<C64>]) -> DMatrix<C64> {
    ms.iter()
        .fold(DMatrix::from_element(1, 1, C64::new(1.0, 0.0)), |acc, m| acc.kronecker(m))
}

pub fn hadamard() -> DMatrix<C64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(2, 2, &[h, h, h, -h].map(|x| C64::new(x, 0.0)))
}

/// IQP word state written as a phase polynomial: each layer is H on every
/// qubit followed by `exp(i Σ θ_q x_q + i Σ φ_q (x_q ⊕ x_{q+1}))`.
pub fn iqp_state(angles: &[f64], w: usize, layers: usize) -> DVector<C64> {
    let dim = 1usize << w;
    let mut v = DVector::from_element(dim, C64::new(0.0, 0.0));
    v[0] = C64::new(1.0, 0.0);
    let hs = kron_all(&vec![hadamard(); w]);
    let per = 2 * w - 1;
    for l in 0..layers {
        v = &hs * v;
        let a = &angles[l * per..(l + 1) * per];
        for x in 0..dim {
            let bit = |q: usize| (x >> (w - 1 - q)) & 1;
            let mut phase = 0.0;
            for (q, theta) in a[..w].iter().enumerate() {
                phase += theta * bit(q) as f64;
            }
            for q in 1..w {
                phase += a[w + q - 1] * (bit(q - 1) ^ bit(q)) as f64;
            }
            v[x] *= C64::from_polar(1.0, phase);
        }
    }
    v
}

/// Copy tensor of the relative pronoun over `nʳ n n` with `q` qubits per
/// noun: nonzero exactly when both noun wires agree and the `nʳ` wire holds
/// their mirror image.
pub fn who_tensor(q: usize) -> DVector<C64> {
    let mask = (1usize << q) - 1;
    let rev = |x: usize| (0..q).fold(0, |acc, i| (acc << 1) | ((x >> i) & 1));
    DVector::from_fn(1 << (3 * q), |i, _| {
        let (a, b, d) = (i >> (2 * q), (i >> q) & mask, i & mask);
        if b == d && a == rev(b) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

pub fn interpretation(lex: &Lexicon, cfg: &AnsatzConfig, params: &ParameterStore) -> Interpretation {
    let mut out = Interpretation::new();
    for e in lex.entries() {
        let t: &TypeList = &e.pregroup_type;
        let v = if *t == types("n^r n s^l n") {
            who_tensor(cfg.qubits_per_type["n"])
        } else {
            let w = cfg.width_of(t).unwrap();
            let layers = if t.len() == 1 { cfg.noun_layers } else { cfg.verb_layers };
            iqp_state(params.word(&e.word).unwrap(), w, layers)
        };
        out.insert(e.word.clone(), v);
    }
    out
}

pub fn random_params(lex: &Lexicon, cfg: &AnsatzConfig, seed: u64) -> ParameterStore {
    ParameterStore::random(lex.entries().iter().map(|e| (e.word.as_str(), &e.pregroup_type)), cfg, seed).unwrap()
}

pub fn config_with_qn(q: usize) -> AnsatzConfig {
    AnsatzConfig {
        qubits_per_type: BTreeMap::from([("n".to_string(), q), ("s".to_string(), 0)]),
        ..AnsatzConfig::default()
    }
}
