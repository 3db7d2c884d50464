use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{parse, GrammarError, Lexicon, Pos, Sentence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Template {
    NounVerbNoun,
    NounCopulaAdjective,
}

impl Template {
    pub const ALL: [Template; 2] = [Template::NounVerbNoun, Template::NounCopulaAdjective];
}

/// Every instantiation of the templates, in lexicon order.
pub fn generate_all(lexicon: &Lexicon, templates: &[Template]) -> Result<Vec<Sentence>, GrammarError> {
    let nouns = lexicon.words_with(Pos::Noun);
    let mut out = Vec::new();
    for t in templates {
        let (middle, last) = match t {
            Template::NounVerbNoun => (lexicon.words_with(Pos::TransitiveVerb), nouns.clone()),
            Template::NounCopulaAdjective => (lexicon.words_with(Pos::Copula), lexicon.words_with(Pos::Adjective)),
        };
        for &a in &nouns {
            for &v in &middle {
                for &b in &last {
                    out.push(parse(&[a, v, b], lexicon)?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerbRule {
    /// true when subject and object share an adjective
    SameProperty,
    /// true when they share none
    DifferentProperty,
    SubjectHas(String),
    ObjectHas(String),
    BothHave(String),
}

/// Hidden ground truth used to label the corpus: which adjectives hold of
/// each noun, and how each verb relates two nouns through them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub properties: BTreeMap<String, BTreeSet<String>>,
    pub verbs: BTreeMap<String, VerbRule>,
}

impl World {
    /// Alice is rich and silly, Bob is silly. Loving needs someone unlike
    /// you, hating someone who shares a trait.
    pub fn toy() -> Self {
        let properties = [("Alice", &["rich", "silly"][..]), ("Bob", &["silly"][..])]
            .iter()
            .map(|&(n, adj)| (n.to_string(), adj.iter().map(|a| a.to_string()).collect()))
            .collect();
        let verbs = [("loves", VerbRule::DifferentProperty), ("hates", VerbRule::SameProperty)]
            .iter()
            .map(|(v, r)| (v.to_string(), r.clone()))
            .collect();
        Self { properties, verbs }
    }

    /// Each noun gets one random adjective, each verb a random rule.
    pub fn random(lexicon: &Lexicon, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adjectives = lexicon.words_with(Pos::Adjective);
        let mut properties = BTreeMap::new();
        for n in lexicon.words_with(Pos::Noun) {
            let mut set = BTreeSet::new();
            if let Some(a) = adjectives.choose(&mut rng) {
                set.insert(a.to_string());
            }
            properties.insert(n.to_string(), set);
        }
        let verbs = lexicon
            .words_with(Pos::TransitiveVerb)
            .into_iter()
            .map(|v| {
                let r = if rng.random_bool(0.5) {
                    VerbRule::SameProperty
                } else {
                    VerbRule::DifferentProperty
                };
                (v.to_string(), r)
            })
            .collect();
        Self { properties, verbs }
    }

    fn has(&self, noun: &str, adjective: &str) -> bool {
        self.properties.get(noun).is_some_and(|s| s.contains(adjective))
    }

    fn share(&self, a: &str, b: &str) -> bool {
        match (self.properties.get(a), self.properties.get(b)) {
            (Some(x), Some(y)) => !x.is_disjoint(y),
            _ => false,
        }
    }

    /// Truth of a three-word sentence. `None` for shapes the world has no
    /// opinion about.
    pub fn truth(&self, tokens: &[String], lexicon: &Lexicon) -> Option<bool> {
        let [a, v, b] = tokens else { return None };
        match lexicon.get(v)?.pos {
            Pos::Copula => Some(self.has(a, b)),
            Pos::TransitiveVerb => Some(match self.verbs.get(v.as_str())? {
                VerbRule::SameProperty => self.share(a, b),
                VerbRule::DifferentProperty => !self.share(a, b),
                VerbRule::SubjectHas(p) => self.has(a, p),
                VerbRule::ObjectHas(p) => self.has(b, p),
                VerbRule::BothHave(p) => self.has(a, p) && self.has(b, p),
            }),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Labelled {
    pub sentence: Sentence,
    pub label: bool,
}

/// Labelled sentences with a train/test partition. Construction checks that
/// the parts are disjoint, cover every entry, and that every test word was
/// seen in training.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledCorpus {
    entries: Vec<Labelled>,
    train: Vec<usize>,
    test: Vec<usize>,
}

impl LabeledCorpus {
    pub fn new(entries: Vec<Labelled>, train: Vec<usize>, test: Vec<usize>) -> Result<Self, GrammarError> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &i in train.iter().chain(&test) {
            if i >= n {
                return Err(GrammarError::Split(format!("index {i} out of range")));
            }
            if seen[i] {
                return Err(GrammarError::Split(format!("entry {i} appears twice")));
            }
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(GrammarError::Split(format!("entry {i} is in neither part")));
        }
        let vocab: BTreeSet<&str> = train
            .iter()
            .flat_map(|&i| entries[i].sentence.tokens.iter().map(String::as_str))
            .collect();
        for &i in &test {
            if let Some(w) = entries[i].sentence.tokens.iter().find(|w| !vocab.contains(w.as_str())) {
                return Err(GrammarError::Split(format!("test word {w:?} never seen in training")));
            }
        }
        Ok(Self { entries, train, test })
    }

    /// Label every generated sentence from `world` and split off roughly
    /// `test_fraction` of them by a seeded shuffle. Test sentences with a
    /// word missing from training are moved back to training.
    pub fn from_world(
        sentences: Vec<Sentence>,
        world: &World,
        lexicon: &Lexicon,
        test_fraction: f64,
        seed: u64,
    ) -> Result<Self, GrammarError> {
        let mut entries = Vec::with_capacity(sentences.len());
        for s in sentences {
            let label = world
                .truth(&s.tokens, lexicon)
                .ok_or_else(|| GrammarError::Split(format!("world cannot label {:?}", s.text())))?;
            entries.push(Labelled { sentence: s, label });
        }
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n_test = ((entries.len() as f64) * test_fraction.clamp(0.0, 1.0)).round() as usize;
        let (test, train) = order.split_at(n_test);
        let (mut train, mut test) = (train.to_vec(), test.to_vec());
        loop {
            let vocab: BTreeSet<&str> = train
                .iter()
                .flat_map(|&i| entries[i].sentence.tokens.iter().map(String::as_str))
                .collect();
            let Some(pos) = test
                .iter()
                .position(|&i| entries[i].sentence.tokens.iter().any(|w| !vocab.contains(w.as_str())))
            else {
                break;
            };
            train.push(test.remove(pos));
        }
        train.sort_unstable();
        test.sort_unstable();
        Self::new(entries, train, test)
    }

    pub fn entries(&self) -> &[Labelled] {
        &self.entries
    }

    pub fn train(&self) -> &[usize] {
        &self.train
    }

    pub fn test(&self) -> &[usize] {
        &self.test
    }

    pub fn split_of(&self, i: usize) -> Split {
        if self.test.contains(&i) {
            Split::Test
        } else {
            Split::Train
        }
    }

    pub fn train_entries(&self) -> impl Iterator<Item = &Labelled> {
        self.train.iter().map(|&i| &self.entries[i])
    }

    pub fn test_entries(&self) -> impl Iterator<Item = &Labelled> {
        self.test.iter().map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One line of a corpus file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub tokens: Vec<String>,
    pub label: u8,
    pub split: Split,
}

pub fn write_corpus(corpus: &LabeledCorpus, mut out: impl Write) -> std::io::Result<()> {
    for (i, e) in corpus.entries.iter().enumerate() {
        let rec = CorpusRecord {
            tokens: e.sentence.tokens.clone(),
            label: e.label as u8,
            split: corpus.split_of(i),
        };
        writeln!(out, "{}", serde_json::to_string(&rec).expect("record serialises"))?;
    }
    Ok(())
}

/// Read a corpus file, parsing every sentence. Errors carry the 1-based line.
pub fn load_corpus(input: impl BufRead, lexicon: &Lexicon) -> Result<LabeledCorpus, GrammarError> {
    let mut entries = Vec::new();
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (n, line) in input.lines().enumerate() {
        let at = |message: String| GrammarError::Corpus { line: n + 1, message };
        let line = line.map_err(|e| at(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CorpusRecord = serde_json::from_str(&line).map_err(|e| at(e.to_string()))?;
        let label = match rec.label {
            0 => false,
            1 => true,
            x => return Err(at(format!("label must be 0 or 1, got {x}"))),
        };
        let tokens: Vec<&str> = rec.tokens.iter().map(String::as_str).collect();
        let sentence = parse(&tokens, lexicon).map_err(|e| at(e.to_string()))?;
        match rec.split {
            Split::Train => train.push(entries.len()),
            Split::Test => test.push(entries.len()),
        }
        entries.push(Labelled { sentence, label });
    }
    LabeledCorpus::new(entries, train, test)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_corpus() -> LabeledCorpus {
        let lex = Lexicon::toy();
        let all = generate_all(&lex, &Template::ALL).unwrap();
        LabeledCorpus::from_world(all, &World::toy(), &lex, 0.3, 7).unwrap()
    }

    #[test]
    fn toy_labels_match_the_examples() {
        let lex = Lexicon::toy();
        let w = World::toy();
        let t = |s: &str| s.split(' ').map(String::from).collect::<Vec<_>>();
        assert_eq!(w.truth(&t("Alice loves Bob"), &lex), Some(false));
        assert_eq!(w.truth(&t("Bob is silly"), &lex), Some(true));
        assert_eq!(w.truth(&t("Alice is rich"), &lex), Some(true));
        assert_eq!(w.truth(&t("Alice hates Bob"), &lex), Some(true));
        assert_eq!(w.truth(&t("Bob loves Alice"), &lex), Some(false));
        assert_eq!(w.truth(&t("Bob is rich"), &lex), Some(false));
        assert_eq!(w.truth(&t("Bob who is"), &lex), None);
    }

    #[test]
    fn jsonl_round_trip() {
        let c = toy_corpus();
        let mut buf = Vec::new();
        write_corpus(&c, &mut buf).unwrap();
        let back = load_corpus(&buf[..], &Lexicon::toy()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_lines_are_reported_by_number() {
        let lex = Lexicon::toy();
        let text = "{\"tokens\":[\"Bob\",\"is\",\"silly\"],\"label\":1,\"split\":\"train\"}\n{\"tokens\":[\"Bob\"],\"label\":2,\"split\":\"test\"}\n";
        match load_corpus(text.as_bytes(), &lex) {
            Err(GrammarError::Corpus { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        let text = "\n{\"tokens\":[\"Carol\",\"is\",\"silly\"],\"label\":1,\"split\":\"train\"}\n";
        match load_corpus(text.as_bytes(), &lex) {
            Err(GrammarError::Corpus { line: 2, message }) => assert!(message.contains("Carol")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unseen_test_vocabulary_is_rejected() {
        let lex = Lexicon::toy();
        let e = |s: [&str; 3]| Labelled {
            sentence: parse(&s, &lex).unwrap(),
            label: true,
        };
        let entries = vec![e(["Alice", "loves", "Bob"]), e(["Bob", "is", "silly"])];
        assert!(LabeledCorpus::new(entries.clone(), vec![0], vec![1]).is_err());
        assert!(LabeledCorpus::new(entries.clone(), vec![0, 1], vec![1]).is_err());
        assert!(LabeledCorpus::new(entries.clone(), vec![0], vec![]).is_err());
        assert!(LabeledCorpus::new(entries, vec![1, 0], vec![]).is_ok());
    }
}
