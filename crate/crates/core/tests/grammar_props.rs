use std::collections::BTreeSet;

use proptest::prelude::*;
use qnlp::diagram::normal_form;
use qnlp::grammar::{generate_all, parse, LabeledCorpus, Lexicon, LexiconEntry, Pos, Template, World};

fn lexicon(nouns: usize, verbs: usize, copulas: usize, adjectives: usize) -> Lexicon {
    let mut e = Vec::new();
    for (count, pos, stem) in [
        (nouns, Pos::Noun, "noun"),
        (verbs, Pos::TransitiveVerb, "verb"),
        (copulas, Pos::Copula, "cop"),
        (adjectives, Pos::Adjective, "adj"),
    ] {
        for i in 0..count {
            e.push(LexiconEntry::new(&format!("{stem}{i}"), pos));
        }
    }
    Lexicon::new(e).unwrap()
}

/// Independent count: try every three-word sequence over the lexicon and keep
/// those that parse and fit one of the two templates.
fn brute_force_count(lex: &Lexicon) -> usize {
    let words: Vec<&str> = lex.entries().iter().map(|e| e.word.as_str()).collect();
    let mut n = 0;
    for a in &words {
        for b in &words {
            for c in &words {
                let pos = [a, b, c].map(|w| lex.get(w).unwrap().pos);
                let fits = matches!(
                    pos,
                    [Pos::Noun, Pos::TransitiveVerb, Pos::Noun] | [Pos::Noun, Pos::Copula, Pos::Adjective]
                );
                if fits && parse(&[a, b, c], lex).is_ok() {
                    n += 1;
                }
            }
        }
    }
    n
}

#[test]
fn toy_vocabulary_gives_twelve_sentences() {
    let lex = Lexicon::toy();
    let all = generate_all(&lex, &Template::ALL).unwrap();
    assert_eq!(all.len(), 12);
    assert_eq!(all.len(), brute_force_count(&lex));
    let texts: Vec<_> = all.iter().map(|s| s.text()).collect();
    assert!(texts.contains(&"Alice loves Bob".to_string()));
    assert!(texts.contains(&"Bob is silly".to_string()));
    assert!(generate_all(&Lexicon::default(), &Template::ALL).unwrap().is_empty());
}

proptest! {
    #[test]
    fn generation_count_matches_enumeration(n in 0..4usize, v in 0..3usize, c in 0..2usize, a in 0..3usize) {
        let lex = lexicon(n, v, c, a);
        let all = generate_all(&lex, &Template::ALL).unwrap();
        prop_assert_eq!(all.len(), n * n * v + n * c * a);
        prop_assert_eq!(all.len(), brute_force_count(&lex));
    }

    #[test]
    fn parsing_inverts_rendering(n in 1..4usize, v in 1..3usize, a in 1..3usize) {
        let lex = lexicon(n, v, 1, a);
        for s in generate_all(&lex, &Template::ALL).unwrap() {
            let tokens: Vec<&str> = s.tokens.iter().map(String::as_str).collect();
            let again = parse(&tokens, &lex).unwrap();
            prop_assert_eq!(normal_form(&again.diagram), normal_form(&s.diagram));
            let words: Vec<&str> = s.diagram.boxes().filter(|b| b.label() != "cup").map(|b| b.label()).collect();
            prop_assert_eq!(words, tokens);
        }
    }

    #[test]
    fn splits_keep_their_invariants(seed in any::<u64>(), frac in 0.0..1.0f64, world_seed in any::<u64>()) {
        let lex = lexicon(3, 2, 1, 2);
        let all = generate_all(&lex, &Template::ALL).unwrap();
        let total = all.len();
        let c = LabeledCorpus::from_world(all, &World::random(&lex, world_seed), &lex, frac, seed).unwrap();
        let train: BTreeSet<usize> = c.train().iter().copied().collect();
        let test: BTreeSet<usize> = c.test().iter().copied().collect();
        prop_assert!(train.is_disjoint(&test));
        prop_assert_eq!(train.len() + test.len(), total);
        let vocab: BTreeSet<&String> = c.train_entries().flat_map(|e| &e.sentence.tokens).collect();
        for e in c.test_entries() {
            for w in &e.sentence.tokens {
                prop_assert!(vocab.contains(w));
            }
        }
    }
}
