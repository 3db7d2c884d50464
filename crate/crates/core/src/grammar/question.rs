use super::{parse, parse_as, GrammarError, Lexicon, Pos, Sentence};
use crate::diagram::{types, BasicType, Diagram, DiagramBox, DiagramError, Side};

/// `subject verb object` where both sides are noun phrases, possibly with a
/// relative clause: the three pieces side by side, then the verb's two cups.
pub fn build_question(subject: &Sentence, verb: &str, object: &Sentence) -> Result<Sentence, GrammarError> {
    let n = types("n");
    for part in [subject, object] {
        if part.diagram.cod() != &n || !part.diagram.dom().is_empty() {
            return Err(DiagramError::TypeMismatch {
                expected: n.clone(),
                found: part.diagram.cod().clone(),
            }
            .into());
        }
    }
    let noun = BasicType::new("n");
    let diagram = subject
        .diagram
        .tensor(&Diagram::word(verb, types("n^r s n^l")))
        .tensor(&object.diagram)
        .then_box(0, DiagramBox::cup(&noun, Side::Right))?
        .then_box(1, DiagramBox::cup(&noun, Side::Left))?;
    let mut tokens = subject.tokens.clone();
    tokens.push(verb.to_string());
    tokens.extend(object.tokens.iter().cloned());
    Ok(Sentence { tokens, diagram })
}

/// Read `subject verb object` where either side may carry a relative
/// clause. The verb is the first transitive verb or copula that splits the
/// tokens into two noun phrases; plain sentences fall back to [`parse`].
pub fn parse_question(tokens: &[&str], lexicon: &Lexicon) -> Result<Sentence, GrammarError> {
    for &t in tokens {
        lexicon.get(t).ok_or_else(|| GrammarError::UnknownWord(t.to_string()))?;
    }
    let n = types("n");
    for (i, t) in tokens.iter().enumerate() {
        if !matches!(lexicon.get(t).map(|e| e.pos), Some(Pos::TransitiveVerb | Pos::Copula)) {
            continue;
        }
        if let (Ok(subject), Ok(object)) = (parse_as(&tokens[..i], lexicon, &n), parse_as(&tokens[i + 1..], lexicon, &n)) {
            return build_question(&subject, t, &object);
        }
    }
    parse(tokens, lexicon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::normal_form;
    use crate::grammar::{parse, parse_as, Lexicon};

    #[test]
    fn plain_nouns_give_the_ordinary_sentence() {
        let lex = Lexicon::toy();
        let bob = parse_as(&["Bob"], &lex, &types("n")).unwrap();
        let alice = parse_as(&["Alice"], &lex, &types("n")).unwrap();
        let q = build_question(&bob, "loves", &alice).unwrap();
        let s = parse(&["Bob", "loves", "Alice"], &lex).unwrap();
        assert_eq!(normal_form(&q.diagram), normal_form(&s.diagram));
    }

    #[test]
    fn relative_clauses_compose_to_a_sentence() {
        let lex = Lexicon::toy();
        let subj = parse_as(&["Bob", "who", "is", "silly"], &lex, &types("n")).unwrap();
        let obj = parse_as(&["Alice", "who", "is", "rich"], &lex, &types("n")).unwrap();
        let q = build_question(&subj, "loves", &obj).unwrap();
        assert_eq!(q.diagram.cod(), &types("s"));
        assert_eq!(q.tokens.join(" "), "Bob who is silly loves Alice who is rich");
        let words: Vec<_> = q
            .diagram
            .boxes()
            .filter(|b| b.label() != "cup")
            .map(|b| b.label().to_string())
            .collect();
        assert_eq!(words.len(), 9);
    }

    #[test]
    fn questions_split_at_the_main_verb() {
        let lex = Lexicon::toy();
        let q = parse_question(&"Bob who is silly loves Alice who is rich".split(' ').collect::<Vec<_>>(), &lex).unwrap();
        assert_eq!(q.diagram.cod(), &types("s"));
        assert_eq!(q.text(), "Bob who is silly loves Alice who is rich");
        let plain = parse_question(&["Alice", "is", "rich"], &lex).unwrap();
        assert_eq!(
            normal_form(&plain.diagram),
            normal_form(&parse(&["Alice", "is", "rich"], &lex).unwrap().diagram)
        );
        assert!(matches!(
            parse_question(&["loves", "Alice"], &lex),
            Err(GrammarError::NoReduction { .. })
        ));
        assert_eq!(
            parse_question(&["Carol", "loves", "Alice"], &lex).unwrap_err(),
            GrammarError::UnknownWord("Carol".into())
        );
    }

    #[test]
    fn sentence_fragments_are_refused() {
        let lex = Lexicon::toy();
        let s = parse(&["Bob", "is", "silly"], &lex).unwrap();
        let alice = parse_as(&["Alice"], &lex, &types("n")).unwrap();
        assert!(matches!(
            build_question(&s, "loves", &alice),
            Err(GrammarError::Diagram(DiagramError::TypeMismatch { .. }))
        ));
    }
}
