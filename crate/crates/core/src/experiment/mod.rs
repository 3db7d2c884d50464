//! End-to-end runs driven by a TOML config: build the corpus, compile, train,
//! score, answer questions and write every artifact to an output directory.

mod config;

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{apply_qubit_reduction, compile_question, compile_sentence, to_qasm, AnsatzConfig, CompileError, ParameterStore};
use crate::grammar::{
    generate_all, load_corpus, parse_question, write_corpus, GrammarError, LabeledCorpus, Lexicon, LexiconEntry, Template, World,
};
use crate::train::{answer_question, train, Checkpoint, Prediction, SpsaConfig, TrainError, TrainOptions};

pub use config::{CorpusConfig, ExperimentConfig, WorldChoice};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error("{sentence:?}: {source}")]
    Compile { sentence: String, source: CompileError },
    #[error("model file: {0}")]
    Model(String),
}

fn io_at(path: &Path) -> impl Fn(std::io::Error) -> ExperimentError + '_ {
    move |e| ExperimentError::Io(format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub seed: u64,
    pub split: u64,
    pub init: u64,
    pub spsa: u64,
    /// only meaningful for a random world
    pub world: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSummary {
    pub id: usize,
    pub sentence: String,
    pub width: usize,
    pub reduced_width: usize,
    pub file: String,
}

/// A question answered with frozen angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Answer {
    pub question: String,
    pub estimate: f64,
    pub answer: bool,
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// the config file text, verbatim
    pub config: String,
    pub seeds: Seeds,
    pub sentences: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub loss_history: Vec<f64>,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    /// test accuracy of always answering the majority train label
    pub majority_baseline: f64,
    pub predictions: Vec<Prediction>,
    pub questions: Vec<Answer>,
    pub circuits: Vec<CircuitSummary>,
}

/// Everything needed to ask questions after a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub ansatz: AnsatzConfig,
    pub lexicon: Lexicon,
    pub params: ParameterStore,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    ansatz: AnsatzConfig,
    lexicon: Vec<LexiconEntry>,
    params: ParameterStore,
}

impl Model {
    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            ansatz: self.ansatz.clone(),
            lexicon: self.lexicon.entries().to_vec(),
            params: self.params.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("model serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let doc: ModelDoc = serde_json::from_str(text).map_err(|e| ExperimentError::Model(e.to_string()))?;
        let lexicon = Lexicon::new(doc.lexicon.into_iter().map(|e| LexiconEntry::new(&e.word, e.pos)).collect())?;
        doc.ansatz.validate().map_err(|e| ExperimentError::Model(e.to_string()))?;
        Ok(Self {
            ansatz: doc.ansatz,
            lexicon,
            params: doc.params,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        Self::from_json(&fs::read_to_string(path).map_err(io_at(path))?)
    }

    /// Parse, compile (with reduction) and evaluate exactly.
    pub fn ask(&self, tokens: &[&str]) -> Result<Answer, ExperimentError> {
        let q = parse_question(tokens, &self.lexicon)?;
        let (estimate, answer) = answer_question(&q, &self.params, &self.ansatz)?;
        let width = compile_question(&q, &self.ansatz)
            .map_err(|source| ExperimentError::Compile {
                sentence: q.text(),
                source,
            })?
            .width;
        Ok(Answer {
            question: q.text(),
            estimate,
            answer,
            width,
        })
    }

    /// OpenQASM for a question or sentence under the stored angles.
    pub fn qasm(&self, tokens: &[&str]) -> Result<String, ExperimentError> {
        let q = parse_question(tokens, &self.lexicon)?;
        let c = compile_question(&q, &self.ansatz).map_err(|source| ExperimentError::Compile {
            sentence: q.text(),
            source,
        })?;
        to_qasm(&c, &self.params).map_err(|source| ExperimentError::Compile {
            sentence: q.text(),
            source,
        })
    }
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, ExperimentError> {
    Ok(Lexicon::from_json(&fs::read_to_string(path).map_err(io_at(path))?)?)
}

/// The labelled corpus a config describes: read from file, or generated from
/// the lexicon and labelled by the chosen world, split with the run seed.
pub fn build_corpus(cfg: &ExperimentConfig) -> Result<(Lexicon, LabeledCorpus), ExperimentError> {
    let lexicon = load_lexicon(&cfg.corpus.lexicon)?;
    let corpus = match &cfg.corpus.path {
        Some(p) => load_corpus(BufReader::new(fs::File::open(p).map_err(io_at(p))?), &lexicon)?,
        None => {
            let world = match cfg.corpus.world {
                WorldChoice::Toy => World::toy(),
                WorldChoice::Random => World::random(&lexicon, cfg.corpus.world_seed),
            };
            let sentences = generate_all(&lexicon, &Template::ALL)?;
            LabeledCorpus::from_world(sentences, &world, &lexicon, cfg.corpus.test_fraction, cfg.seed)?
        }
    };
    Ok((lexicon, corpus))
}

/// Test accuracy of the constant classifier answering the majority train
/// label (ties answer false).
pub fn majority_baseline(corpus: &LabeledCorpus) -> f64 {
    let trues = corpus.train_entries().filter(|e| e.label).count();
    let majority = 2 * trues > corpus.train().len();
    if corpus.test().is_empty() {
        return 0.0;
    }
    corpus.test_entries().filter(|e| e.label == majority).count() as f64 / corpus.test().len() as f64
}

/// Outcome of a run before anything is written.
#[derive(Clone, Debug)]
pub struct Run {
    pub report: ExperimentReport,
    pub model: Model,
    pub corpus: LabeledCorpus,
    pub checkpoints: Vec<Checkpoint>,
}

/// Train and score without touching the disk. The top-level seed drives the
/// split, the initial angles and the SPSA perturbations.
pub fn run_in_memory(cfg: &ExperimentConfig, config_text: &str) -> Result<Run, ExperimentError> {
    let (lexicon, corpus) = build_corpus(cfg)?;
    let spsa = SpsaConfig {
        seed: cfg.seed,
        ..cfg.spsa.clone()
    };
    let opts = TrainOptions {
        evaluator: cfg.evaluator,
        init_seed: cfg.seed,
        workers: cfg.workers,
        checkpoint_every: cfg.checkpoint_every,
    };
    let result = train(&corpus, &spsa, &cfg.ansatz, &opts)?;
    let model = Model {
        ansatz: cfg.ansatz.clone(),
        lexicon,
        params: result.final_params.clone(),
    };

    let mut circuits = Vec::with_capacity(corpus.len());
    for (id, e) in corpus.entries().iter().enumerate() {
        let sentence = e.sentence.text();
        let c = compile_sentence(&e.sentence, &cfg.ansatz).map_err(|source| ExperimentError::Compile {
            sentence: sentence.clone(),
            source,
        })?;
        circuits.push(CircuitSummary {
            id,
            width: c.width,
            reduced_width: apply_qubit_reduction(&c).width,
            file: qasm_name(id),
            sentence,
        });
    }
    let questions = cfg
        .questions
        .iter()
        .map(|q| model.ask(&q.split_whitespace().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>, _>>()?;

    let report = ExperimentReport {
        config: config_text.to_string(),
        seeds: Seeds {
            seed: cfg.seed,
            split: cfg.seed,
            init: cfg.seed,
            spsa: cfg.seed,
            world: cfg.corpus.world_seed,
        },
        sentences: corpus.len(),
        train_size: corpus.train().len(),
        test_size: corpus.test().len(),
        loss_history: result.loss_history,
        train_accuracy: result.train_accuracy,
        test_accuracy: result.test_accuracy,
        majority_baseline: majority_baseline(&corpus),
        predictions: result.predictions,
        questions,
        circuits,
    };
    Ok(Run {
        report,
        model,
        corpus,
        checkpoints: result.checkpoints,
    })
}

fn qasm_name(id: usize) -> String {
    format!("circuits/{id:03}.qasm")
}

fn write(path: &Path, text: &str) -> Result<(), ExperimentError> {
    fs::write(path, text).map_err(io_at(path))
}

/// Write a generated (or loaded) corpus as JSONL.
pub fn write_corpus_file(corpus: &LabeledCorpus, path: &Path) -> Result<(), ExperimentError> {
    let mut buf = Vec::new();
    write_corpus(corpus, &mut buf).map_err(io_at(path))?;
    fs::write(path, buf).map_err(io_at(path))
}

/// Run and write `report.json`, `loss_history.csv`, `model.json`,
/// `corpus.jsonl`, `circuits/NNN.qasm` and `checkpoints/iter_NNNNN.json`
/// under `out`. Returns the report.
pub fn run_experiment(cfg: &ExperimentConfig, config_text: &str, out: &Path) -> Result<ExperimentReport, ExperimentError> {
    let run = run_in_memory(cfg, config_text)?;
    fs::create_dir_all(out.join("circuits")).map_err(io_at(out))?;

    let mut report = serde_json::to_string_pretty(&run.report).expect("report serialises");
    report.push('\n');
    write(&out.join("report.json"), &report)?;

    let mut csv = String::from("iteration,loss\n");
    for (k, l) in run.report.loss_history.iter().enumerate() {
        csv.push_str(&format!("{k},{l}\n"));
    }
    write(&out.join("loss_history.csv"), &csv)?;
    write(&out.join("model.json"), &run.model.to_json())?;
    write_corpus_file(&run.corpus, &out.join("corpus.jsonl"))?;

    for (id, e) in run.corpus.entries().iter().enumerate() {
        let c = compile_sentence(&e.sentence, &cfg.ansatz)
            .map(|c| apply_qubit_reduction(&c))
            .and_then(|c| to_qasm(&c, &run.model.params))
            .map_err(|source| ExperimentError::Compile {
                sentence: e.sentence.text(),
                source,
            })?;
        write(&out.join(qasm_name(id)), &c)?;
    }
    if !run.checkpoints.is_empty() {
        let dir = out.join("checkpoints");
        fs::create_dir_all(&dir).map_err(io_at(&dir))?;
        for c in &run.checkpoints {
            let text = serde_json::to_string_pretty(c).expect("checkpoint serialises");
            write(&dir.join(format!("iter_{:05}.json", c.iteration)), &text)?;
        }
    }
    Ok(run.report)
}

/// Output directory precedence: explicit flag, then environment, then the
/// config file, then `out` next to the working directory.
pub fn resolve_output_dir(flag: Option<PathBuf>, env: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.or(env)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}
