use std::collections::HashMap;

use super::{GrammarError, Lexicon, Sentence};
use crate::diagram::{types, BasicType, Diagram, DiagramBox, Side, TypeList};

/// Parse a full sentence: the word types must reduce to `s`.
pub fn parse(tokens: &[&str], lexicon: &Lexicon) -> Result<Sentence, GrammarError> {
    parse_as(tokens, lexicon, &types("s"))
}

/// Parse `tokens` into a diagram whose codomain is `target`: words side by
/// side, then one cup per contracted pair.
pub fn parse_as(tokens: &[&str], lexicon: &Lexicon, target: &TypeList) -> Result<Sentence, GrammarError> {
    let mut words = Vec::with_capacity(tokens.len());
    for &t in tokens {
        let e = lexicon.get(t).ok_or_else(|| GrammarError::UnknownWord(t.to_string()))?;
        words.push(e);
    }
    let flat: Vec<BasicType> = words.iter().flat_map(|e| e.pregroup_type.iter().cloned()).collect();
    let mut search = Search {
        t: &flat,
        target,
        full: HashMap::new(),
        top: HashMap::new(),
    };
    if !search.top(0, 0) {
        return Err(GrammarError::NoReduction {
            target: target.clone(),
            stuck: greedy_stuck(&flat),
        });
    }
    let mut pairs = Vec::new();
    search.collect_top(0, 0, &mut pairs);

    let mut d = Diagram::id(TypeList::unit());
    for e in &words {
        d = d.tensor(&Diagram::word(&e.word, e.pregroup_type.clone()));
    }
    // inner pairs first so each cup meets two adjacent wires
    pairs.sort_by_key(|&(i, k)| (k - i, i));
    let mut alive = vec![true; flat.len()];
    for (i, k) in pairs {
        let offset = alive[..i].iter().filter(|&&a| a).count();
        let cup = if flat[k].adjoint() == 0 {
            DiagramBox::cup(&flat[k], Side::Left)
        } else {
            DiagramBox::cup(&flat[i], Side::Right)
        };
        d = d.then_box(offset, cup)?;
        alive[i] = false;
        alive[k] = false;
    }
    Ok(Sentence {
        tokens: tokens.iter().map(|s| s.to_string()).collect(),
        diagram: d,
    })
}

/// What is left after greedily cancelling adjacent pairs, for error messages.
fn greedy_stuck(flat: &[BasicType]) -> TypeList {
    let mut stack: Vec<BasicType> = Vec::new();
    for t in flat {
        if stack.last().is_some_and(|top| top.cancels_with(t)) {
            stack.pop();
        } else {
            stack.push(t.clone());
        }
    }
    TypeList::new(stack)
}

/// Interval search for a non-crossing cancellation leaving exactly `target`
/// uncovered. Ties go to the earliest partner, so the result is deterministic.
struct Search<'a> {
    t: &'a [BasicType],
    target: &'a TypeList,
    full: HashMap<(usize, usize), Option<usize>>,
    top: HashMap<(usize, usize), bool>,
}

impl Search<'_> {
    /// Can `t[i..j]` cancel completely? Memoises the partner chosen for `i`.
    fn full(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        if (j - i) % 2 == 1 {
            return false;
        }
        if let Some(r) = self.full.get(&(i, j)) {
            return r.is_some();
        }
        let mut found = None;
        for k in (i + 1..j).step_by(2) {
            if self.t[i].cancels_with(&self.t[k]) && self.full(i + 1, k) && self.full(k + 1, j) {
                found = Some(k);
                break;
            }
        }
        self.full.insert((i, j), found);
        found.is_some()
    }

    /// Can `t[i..]` reduce to `target[m..]`, with kept types outside every cup?
    fn top(&mut self, i: usize, m: usize) -> bool {
        if i == self.t.len() {
            return m == self.target.len();
        }
        if let Some(&r) = self.top.get(&(i, m)) {
            return r;
        }
        let mut ok = false;
        for k in (i + 1..self.t.len()).step_by(2) {
            if self.full(i, k + 1) && self.top(k + 1, m) {
                ok = true;
                break;
            }
        }
        if !ok && m < self.target.len() && self.t[i] == self.target[m] {
            ok = self.top(i + 1, m + 1);
        }
        self.top.insert((i, m), ok);
        ok
    }

    fn collect_top(&mut self, i: usize, m: usize, pairs: &mut Vec<(usize, usize)>) {
        if i == self.t.len() {
            return;
        }
        for k in (i + 1..self.t.len()).step_by(2) {
            if self.full(i, k + 1) && self.top(k + 1, m) {
                self.collect_full(i, k + 1, pairs);
                return self.collect_top(k + 1, m, pairs);
            }
        }
        self.collect_top(i + 1, m + 1, pairs);
    }

    fn collect_full(&mut self, i: usize, j: usize, pairs: &mut Vec<(usize, usize)>) {
        if i == j {
            return;
        }
        self.full(i, j);
        let k = self.full[&(i, j)].expect("interval reduces");
        pairs.push((i, k));
        self.collect_full(i + 1, k, pairs);
        self.collect_full(k + 1, j, pairs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::normal_form;

    #[test]
    fn alice_hates_bob_is_words_then_two_cups() {
        let lex = Lexicon::toy();
        let s = parse(&["Alice", "hates", "Bob"], &lex).unwrap();
        let n = BasicType::new("n");
        let expected = Diagram::word("Alice", types("n"))
            .tensor(&Diagram::word("hates", types("n^r s n^l")))
            .tensor(&Diagram::word("Bob", types("n")))
            .then_box(0, DiagramBox::cup(&n, Side::Right))
            .unwrap()
            .then_box(1, DiagramBox::cup(&n, Side::Left))
            .unwrap();
        assert_eq!(normal_form(&s.diagram), normal_form(&expected));
        assert_eq!(s.diagram.cod(), &types("s"));
    }

    #[test]
    fn copula_sentence_parses() {
        let s = parse(&["Bob", "is", "silly"], &Lexicon::toy()).unwrap();
        assert_eq!(s.diagram.cod(), &types("s"));
        assert_eq!(s.diagram.boxes().filter(|b| b.label() == "cup").count(), 2);
    }

    #[test]
    fn errors_name_the_problem() {
        let lex = Lexicon::toy();
        assert_eq!(
            parse(&["loves", "Alice"], &lex).unwrap_err(),
            GrammarError::NoReduction {
                target: types("s"),
                stuck: types("n^r s"),
            }
        );
        assert_eq!(parse(&["Carol"], &lex).unwrap_err(), GrammarError::UnknownWord("Carol".into()));
    }

    #[test]
    fn relative_clause_is_a_noun_phrase() {
        let lex = Lexicon::toy();
        let np = parse_as(&["Bob", "who", "is", "silly"], &lex, &types("n")).unwrap();
        assert_eq!(np.diagram.cod(), &types("n"));
        assert_eq!(np.diagram.boxes().filter(|b| b.label() == "cup").count(), 4);
    }
}
