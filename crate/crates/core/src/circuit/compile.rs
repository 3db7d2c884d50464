use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{iqp_block, AnsatzConfig, CompileError, Gate, GateKind, Slot};
use crate::diagram::{BoxKind, Diagram};
use crate::grammar::Sentence;

/// A gate list over `width` qubits, all starting in `|0⟩`. Qubits listed in
/// `postselections` are projected onto `⟨0|` at the end; `x_measure` gates
/// project onto `⟨+|` where they stand. `global_scalar` is the
/// parameter-independent factor between the circuit's amplitude and the
/// contracted diagram.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamCircuit {
    pub width: usize,
    pub gates: Vec<Gate>,
    pub postselections: Vec<(usize, u8)>,
    pub output_wires: Vec<usize>,
    pub global_scalar: f64,
}

impl ParamCircuit {
    pub fn is_scalar(&self) -> bool {
        self.output_wires.is_empty()
    }

    pub fn slots(&self) -> BTreeSet<&Slot> {
        self.gates.iter().filter_map(Gate::slot).collect()
    }

    /// Every qubit index in range, gates act on distinct qubits, a measured
    /// qubit is measured once and never touched again, and every qubit is
    /// either measured or an output.
    pub fn validate(&self) -> Result<(), CompileError> {
        let bad = |m: String| Err(CompileError::Malformed(m));
        let mut closed = vec![false; self.width];
        for (i, g) in self.gates.iter().enumerate() {
            if g.qubits.len() != g.kind.arity() {
                return bad(format!("gate {i} has {} qubits", g.qubits.len()));
            }
            if g.kind.is_parameterised() != g.param.is_some() {
                return bad(format!("gate {i} parameter does not match its kind"));
            }
            for (j, &q) in g.qubits.iter().enumerate() {
                if q >= self.width {
                    return bad(format!("gate {i} uses qubit {q} of {}", self.width));
                }
                if g.qubits[..j].contains(&q) {
                    return bad(format!("gate {i} repeats qubit {q}"));
                }
                if closed[q] {
                    return bad(format!("gate {i} uses measured qubit {q}"));
                }
            }
            if g.kind == GateKind::XMeasurePostselect0 {
                closed[g.qubits[0]] = true;
            }
        }
        for &(q, outcome) in &self.postselections {
            if q >= self.width || closed[q] || outcome != 0 {
                return bad(format!("bad post-selection on qubit {q}"));
            }
            closed[q] = true;
        }
        for &q in &self.output_wires {
            if q >= self.width || closed[q] {
                return bad(format!("output qubit {q} is measured"));
            }
            closed[q] = true;
        }
        match closed.iter().position(|c| !c) {
            Some(q) => bad(format!("qubit {q} is neither measured nor an output")),
            None => Ok(()),
        }
    }
}

/// Lower a sentence diagram, words to IQP states and cups to CNOT plus two
/// post-selections. No qubit reduction is applied.
pub fn compile_sentence(s: &Sentence, cfg: &AnsatzConfig) -> Result<ParamCircuit, CompileError> {
    compile_diagram(&s.diagram, cfg)
}

/// Compile a composite question and shrink it with [`apply_qubit_reduction`].
pub fn compile_question(q: &Sentence, cfg: &AnsatzConfig) -> Result<ParamCircuit, CompileError> {
    Ok(apply_qubit_reduction(&compile_sentence(q, cfg)?))
}

pub fn compile_diagram(d: &Diagram, cfg: &AnsatzConfig) -> Result<ParamCircuit, CompileError> {
    cfg.validate()?;
    if !d.dom().is_empty() {
        return Err(CompileError::NotAState(d.dom().clone()));
    }
    let mut c = ParamCircuit {
        width: 0,
        gates: Vec::new(),
        postselections: Vec::new(),
        output_wires: Vec::new(),
        global_scalar: 1.0,
    };
    // qubits carried by each wire of the current layer boundary
    let mut wires: Vec<Vec<usize>> = Vec::new();
    for (offset, b) in d.slices() {
        match b.kind() {
            BoxKind::Word if b.dom().is_empty() => {
                let mut new = Vec::new();
                for t in b.cod().iter() {
                    let n = cfg.qubits_of(t.name())?;
                    new.push((c.width..c.width + n).collect::<Vec<_>>());
                    c.width += n;
                }
                if AnsatzConfig::is_copy_word(b.cod()) {
                    copy_spiders(&mut c, &new);
                } else {
                    let first = new.iter().flatten().copied().min().unwrap_or(c.width);
                    let w = new.iter().map(Vec::len).sum();
                    if w > 0 {
                        let layers = cfg.layers_for(b.cod());
                        c.gates
                            .extend(iqp_block(b.label(), w, layers).iter().map(|g| g.remap(|q| q + first)));
                    }
                }
                wires.splice(offset..offset, new);
            }
            BoxKind::Cup => {
                let right = wires.remove(offset + 1);
                let left = wires.remove(offset);
                let q = left.len();
                for j in 0..q {
                    let (l, r) = (left[q - 1 - j], right[j]);
                    c.gates.push(Gate::cnot(l, r));
                    c.gates.push(Gate::x_measure(l));
                    c.postselections.push((r, 0));
                    c.global_scalar *= FRAC_1_SQRT_2;
                }
            }
            _ => return Err(CompileError::UnsupportedBox(b.label().to_string())),
        }
    }
    c.output_wires = wires.concat();
    Ok(c)
}

/// GHZ state on the `nʳ n n` wires of a relative pronoun; qubit `i` of each
/// noun wire is copied, the `nʳ` wire being read in mirror order.
fn copy_spiders(c: &mut ParamCircuit, wires: &[Vec<usize>]) {
    let [a, b, _, d] = wires else {
        unreachable!("copy word has four wires")
    };
    let q = a.len();
    for i in 0..q {
        let root = a[q - 1 - i];
        c.gates.push(Gate::x_prep(root));
        c.gates.push(Gate::cnot(root, b[i]));
        c.gates.push(Gate::cnot(root, d[i]));
        c.global_scalar *= FRAC_1_SQRT_2;
    }
}

/// Bend noun wires into the words they feed. A qubit that only sees
/// single-qubit gates before taking part in a cup is removed; its gates,
/// transposed, act on the partner before the partner is post-selected on
/// `⟨0|`. Repeats until nothing matches. All single-qubit kinds here are
/// symmetric matrices, so transposition is reversal.
pub fn apply_qubit_reduction(c: &ParamCircuit) -> ParamCircuit {
    let mut c = c.clone();
    while let Some(q) = (0..c.width).find(|&q| reducible(&c, q).is_some()) {
        let (cnot_at, v) = reducible(&c, q).unwrap();
        let mut moved: Vec<Gate> = c.gates[..cnot_at]
            .iter()
            .filter(|g| g.qubits == [q])
            .map(|g| match g.kind {
                GateKind::XPrep => Gate::h(v),
                _ => g.remap(|_| v),
            })
            .collect();
        moved.reverse();
        let mut gates = Vec::with_capacity(c.gates.len());
        for (i, g) in c.gates.iter().enumerate() {
            if i == cnot_at {
                gates.append(&mut moved);
            } else if !g.qubits.contains(&q) && !(i > cnot_at && g.qubits == [v]) {
                gates.push(g.clone());
            }
        }
        c.postselections.retain(|&(p, _)| p != q && p != v);
        c.postselections.push((v, 0));
        let shift = |p: usize| if p > q { p - 1 } else { p };
        c.gates = gates.iter().map(|g| g.remap(shift)).collect();
        c.postselections = c.postselections.iter().map(|&(p, o)| (shift(p), o)).collect();
        c.postselections.sort_unstable();
        c.output_wires = c.output_wires.iter().map(|&p| shift(p)).collect();
        c.width -= 1;
        c.global_scalar *= SQRT_2;
    }
    c
}

/// `Some((index of the cup's CNOT, partner))` when qubit `q` is a bare
/// prepared state entering a cup.
fn reducible(c: &ParamCircuit, q: usize) -> Option<(usize, usize)> {
    let touching: Vec<usize> = (0..c.gates.len()).filter(|&i| c.gates[i].qubits.contains(&q)).collect();
    let first_cnot = touching.iter().position(|&i| c.gates[i].kind == GateKind::Cnot)?;
    let cnot_at = touching[first_cnot];
    for (k, &i) in touching[..first_cnot].iter().enumerate() {
        match c.gates[i].kind {
            GateKind::Hadamard | GateKind::ZPhase | GateKind::XPhase => {}
            GateKind::XPrep if k == 0 => {}
            _ => return None,
        }
    }
    let cx = &c.gates[cnot_at];
    let (ctrl, targ) = (cx.qubits[0], cx.qubits[1]);
    let v = if ctrl == q { targ } else { ctrl };
    // the rest must be exactly the cup's two measurements
    let after_q: Vec<usize> = touching.iter().copied().filter(|&i| i > cnot_at).collect();
    let after_v: Vec<usize> = (cnot_at + 1..c.gates.len()).filter(|&i| c.gates[i].qubits.contains(&v)).collect();
    let measured = |p: usize| c.postselections.contains(&(p, 0));
    let x_measured = |ids: &[usize]| ids.len() == 1 && c.gates[ids[0]].kind == GateKind::XMeasurePostselect0;
    let ok = x_measured(if ctrl == q { &after_q } else { &after_v })
        && measured(targ)
        && (if ctrl == q { after_v.is_empty() } else { after_q.is_empty() });
    ok.then_some((cnot_at, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::types;
    use crate::grammar::{parse, parse_as, Lexicon};

    fn alice_hates_bob() -> ParamCircuit {
        let s = parse(&["Alice", "hates", "Bob"], &Lexicon::toy()).unwrap();
        compile_sentence(&s, &AnsatzConfig::default()).unwrap()
    }

    #[test]
    fn skeleton_has_words_cups_and_postselections() {
        let c = alice_hates_bob();
        c.validate().unwrap();
        assert_eq!(c.width, 4);
        assert!(c.is_scalar());
        assert_eq!(c.postselections, vec![(1, 0), (3, 0)]);
        let cnots: Vec<_> = c
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Cnot)
            .map(|g| g.qubits.clone())
            .collect();
        // four from the verb's two layers, two from the cups
        assert_eq!(cnots.len(), 6);
        assert_eq!(&cnots[4..], [vec![0, 1], vec![2, 3]]);
        assert!((c.global_scalar - 0.5).abs() < 1e-15);
        let words: BTreeSet<_> = c.slots().iter().map(|s| s.word.as_str()).collect();
        assert_eq!(words, BTreeSet::from(["Alice", "Bob", "hates"]));
        assert_eq!(c.slots().len(), 8);
    }

    #[test]
    fn reduction_removes_both_nouns() {
        let c = apply_qubit_reduction(&alice_hates_bob());
        c.validate().unwrap();
        assert_eq!(c.width, 2);
        assert_eq!(c.postselections, vec![(0, 0), (1, 0)]);
        assert!(c.gates.iter().all(|g| g.kind != GateKind::XMeasurePostselect0));
        assert!((c.global_scalar - 1.0).abs() < 1e-15);
        assert_eq!(c.slots().len(), 8);
        // nothing left to bend
        assert_eq!(apply_qubit_reduction(&c), c);
    }

    #[test]
    fn lone_noun_is_a_preparation() {
        let np = parse_as(&["Alice"], &Lexicon::toy(), &types("n")).unwrap();
        let c = compile_sentence(&np, &AnsatzConfig::default()).unwrap();
        c.validate().unwrap();
        assert_eq!(c.width, 1);
        assert_eq!(c.output_wires, vec![0]);
        assert!(c.postselections.is_empty());
        assert_eq!(apply_qubit_reduction(&c), c);
    }

    #[test]
    fn question_shares_word_slots() {
        let lex = Lexicon::toy();
        let n = types("n");
        let subj = parse_as(&["Bob", "who", "is", "silly"], &lex, &n).unwrap();
        let obj = parse_as(&["Alice", "who", "is", "rich"], &lex, &n).unwrap();
        let q = crate::grammar::build_question(&subj, "loves", &obj).unwrap();
        let full = compile_sentence(&q, &AnsatzConfig::default()).unwrap();
        full.validate().unwrap();
        assert_eq!(full.width, 16);
        let c = compile_question(&q, &AnsatzConfig::default()).unwrap();
        c.validate().unwrap();
        assert_eq!(c.width, 12);
        let words: BTreeSet<_> = c.slots().iter().map(|s| s.word.clone()).collect();
        let expected: BTreeSet<String> = ["Alice", "Bob", "is", "loves", "rich", "silly"].map(String::from).into();
        assert_eq!(words, expected);
    }

    #[test]
    fn unknown_types_and_boxes_are_refused() {
        let d = Diagram::word("x", types("p"));
        assert!(matches!(
            compile_diagram(&d, &AnsatzConfig::default()),
            Err(CompileError::UnsupportedType(_))
        ));
        let d = crate::diagram::cap(&crate::diagram::BasicType::new("n"), crate::diagram::Side::Left);
        assert!(matches!(
            compile_diagram(&d, &AnsatzConfig::default()),
            Err(CompileError::UnsupportedBox(_))
        ));
    }
}
