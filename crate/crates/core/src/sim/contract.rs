use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::SimError;
use crate::diagram::{BoxKind, Diagram};

/// Word label to state vector over the word's qubits (big-endian, wires in
/// codomain order).
pub type Interpretation = BTreeMap<String, DVector<C64>>;

/// Contract `d` directly: word states are tensored in, cups and caps pair
/// the qubits of two wires in mirror order. Returns the `2^cod × 2^dom`
/// matrix; a sentence with the scalar reading gives `1 × 1`.
pub fn contract_diagram(
    d: &Diagram,
    interp: &Interpretation,
    qubits_per_type: &BTreeMap<String, usize>,
    budget: usize,
) -> Result<DMatrix<C64>, SimError> {
    let width = |name: &str| {
        qubits_per_type
            .get(name)
            .copied()
            .ok_or_else(|| SimError::UnknownType(name.to_string()))
    };
    let mut wires: Vec<usize> = d.dom().iter().map(|t| width(t.name())).collect::<Result<_, _>>()?;
    let tail: usize = wires.iter().sum();
    // columns of the result ride along as the lowest `tail` bits
    let mut t = Tensor::identity(tail);
    for (offset, b) in d.slices() {
        let at: usize = wires[..offset].iter().sum();
        let dom: Vec<usize> = wires[offset..offset + b.dom().len()].to_vec();
        let cod: Vec<usize> = b.cod().iter().map(|x| width(x.name())).collect::<Result<_, _>>()?;
        let grow = cod.iter().sum::<usize>().saturating_sub(dom.iter().sum());
        if t.bits + grow > budget {
            return Err(SimError::TooLarge {
                qubits: t.bits + grow,
                budget,
            });
        }
        match b.kind() {
            BoxKind::Word if dom.is_empty() => {
                let v = interp.get(b.label()).ok_or_else(|| SimError::MissingWord(b.label().to_string()))?;
                let k: usize = cod.iter().sum();
                if v.len() != 1 << k {
                    return Err(SimError::BadTensor {
                        word: b.label().to_string(),
                        expected: 1 << k,
                        found: v.len(),
                    });
                }
                t = t.insert(at, k, |x| v[x]);
            }
            BoxKind::Cup => t = t.cup(at, dom[0]),
            BoxKind::Cap => {
                let q = cod[0];
                t = t.insert(at, 2 * q, |x| {
                    if x >> q == reverse(x & ((1 << q) - 1), q) {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
            }
            BoxKind::Wire => {}
            BoxKind::Swap => t = t.swap(at, dom[0], dom[1]),
            _ => return Err(SimError::Unsupported(b.label().to_string())),
        }
        wires.splice(offset..offset + dom.len(), cod);
    }
    let rows = 1usize << (t.bits - tail);
    Ok(DMatrix::from_fn(rows, 1 << tail, |r, c| t.amps[(r << tail) | c]))
}

fn reverse(x: usize, bits: usize) -> usize {
    (0..bits).fold(0, |acc, i| (acc << 1) | ((x >> i) & 1))
}

/// Amplitudes over `bits` qubits, big-endian.
struct Tensor {
    bits: usize,
    amps: Vec<C64>,
}

impl Tensor {
    fn identity(bits: usize) -> Self {
        let n = 1usize << bits;
        let mut amps = vec![C64::new(0.0, 0.0); n * n];
        for x in 0..n {
            amps[(x << bits) | x] = C64::new(1.0, 0.0);
        }
        Self { bits: 2 * bits, amps }
    }

    /// Tensor in a `k`-qubit factor `f` at qubit position `at`.
    fn insert(&self, at: usize, k: usize, f: impl Fn(usize) -> C64) -> Self {
        let below = self.bits - at;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << (self.bits + k)];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let (hi, lo) = (i >> below, i & ((1 << below) - 1));
            for x in 0..1 << k {
                amps[(hi << (k + below)) | (x << below) | lo] = a * f(x);
            }
        }
        Self { bits: self.bits + k, amps }
    }

    /// Contract the `q`-qubit wire at `at` with the one right after it.
    fn cup(&self, at: usize, q: usize) -> Self {
        let below = self.bits - at - 2 * q;
        let mut amps = vec![C64::new(0.0, 0.0); 1 << (self.bits - 2 * q)];
        for (i, &a) in self.amps.iter().enumerate() {
            let mid = (i >> below) & ((1 << (2 * q)) - 1);
            if mid >> q != reverse(mid & ((1 << q) - 1), q) {
                continue;
            }
            let (hi, lo) = (i >> (below + 2 * q), i & ((1 << below) - 1));
            amps[(hi << below) | lo] += a;
        }
        Self {
            bits: self.bits - 2 * q,
            amps,
        }
    }

    fn swap(&self, at: usize, a: usize, b: usize) -> Self {
        let below = self.bits - at - a - b;
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (i, &v) in self.amps.iter().enumerate() {
            let mid = (i >> below) & ((1 << (a + b)) - 1);
            let (x, y) = (mid >> b, mid & ((1 << b) - 1));
            let hi = i >> (below + a + b);
            let lo = i & ((1 << below) - 1);
            amps[(hi << (below + a + b)) | (((y << a) | x) << below) | lo] = v;
        }
        Self { bits: self.bits, amps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{types, yank, BasicType, DiagramBox, Side};

    fn dims(n: usize) -> BTreeMap<String, usize> {
        BTreeMap::from([("n".to_string(), n), ("s".to_string(), 0)])
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn transitive_sentence_is_a_matrix_element() {
        let n = BasicType::new("n");
        let d = Diagram::word("Alice", types("n"))
            .tensor(&Diagram::word("hates", types("n^r s n^l")))
            .tensor(&Diagram::word("Bob", types("n")))
            .then_box(0, DiagramBox::cup(&n, Side::Right))
            .unwrap()
            .then_box(1, DiagramBox::cup(&n, Side::Left))
            .unwrap();
        let verb = DVector::from_vec(vec![c(0.1, 0.2), c(-0.3, 0.0), c(0.5, 0.5), c(0.0, -0.7)]);
        let mut interp = Interpretation::new();
        interp.insert("Alice".into(), DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        interp.insert("Bob".into(), DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
        interp.insert("hates".into(), verb.clone());
        let m = contract_diagram(&d, &interp, &dims(1), 16).unwrap();
        assert_eq!(m.shape(), (1, 1));
        // subject 1, object 0
        assert_eq!(m[(0, 0)], verb[2]);
    }

    #[test]
    fn snakes_are_identities() {
        for q in 1..=2 {
            let n = BasicType::new("n");
            let snake = Diagram::id(types("n"))
                .then_box(1, DiagramBox::cap(&n, Side::Right))
                .unwrap()
                .then_box(0, DiagramBox::cup(&n, Side::Right))
                .unwrap();
            let interp = Interpretation::new();
            let m = contract_diagram(&snake, &interp, &dims(q), 16).unwrap();
            assert_eq!(m, DMatrix::identity(1 << q, 1 << q));
            let flat = contract_diagram(&yank(&snake), &interp, &dims(q), 16).unwrap();
            assert_eq!(flat, m);
        }
    }

    #[test]
    fn swaps_exchange_factors() {
        let a = BasicType::new("n");
        let d = Diagram::word("x", types("n"))
            .tensor(&Diagram::word("y", types("n")))
            .then_box(0, DiagramBox::swap(&a, &a))
            .unwrap();
        let mut interp = Interpretation::new();
        interp.insert("x".into(), DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        interp.insert("y".into(), DVector::from_vec(vec![c(3.0, 0.0), c(5.0, 0.0)]));
        let m = contract_diagram(&d, &interp, &dims(1), 16).unwrap();
        // y ⊗ x
        assert_eq!(m.column(0).iter().map(|z| z.re).collect::<Vec<_>>(), [3.0, 6.0, 5.0, 10.0]);
        assert!(matches!(contract_diagram(&d, &interp, &dims(1), 1), Err(SimError::TooLarge { .. })));
    }
}
