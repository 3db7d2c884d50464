//! Fitting word angles to corpus labels with SPSA, and answering questions
//! with the fitted angles.

mod spsa;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{apply_qubit_reduction, compile_question, compile_sentence, AnsatzConfig, CompileError, ParamCircuit, ParameterStore};
use crate::grammar::{LabeledCorpus, Sentence, Split};
use crate::sim::{evaluate, sample, seed_for, SimError};

pub use spsa::{spsa_step, SpsaConfig};

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("sentence {sentence:?}: {source}")]
    Compile { sentence: String, source: CompileError },
    #[error("sentence {sentence:?}: {source}")]
    Sim { sentence: String, source: SimError },
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("bad spsa configuration: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Evaluator {
    #[default]
    Exact,
    Shots {
        shots: u64,
    },
}

/// A compiled, labelled sentence ready for repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub id: usize,
    pub text: String,
    pub circuit: ParamCircuit,
    pub label: bool,
}

/// Compile and reduce every corpus entry once.
pub fn compile_corpus(corpus: &LabeledCorpus, cfg: &AnsatzConfig) -> Result<Vec<Example>, TrainError> {
    corpus
        .entries()
        .par_iter()
        .enumerate()
        .map(|(id, e)| {
            let text = e.sentence.text();
            let circuit = compile_sentence(&e.sentence, cfg)
                .map(|c| apply_qubit_reduction(&c))
                .map_err(|source| TrainError::Compile {
                    sentence: text.clone(),
                    source,
                })?;
            Ok(Example {
                id,
                text,
                circuit,
                label: e.label,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SentenceLoss {
    pub id: usize,
    pub prediction: f64,
    pub label: bool,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub total: f64,
    pub per_sentence: Vec<SentenceLoss>,
}

fn predict(ex: &Example, params: &ParameterStore, evaluator: Evaluator, seed: u64) -> Result<f64, TrainError> {
    let r = match evaluator {
        Evaluator::Exact => evaluate(&ex.circuit, params),
        Evaluator::Shots { shots } => sample(&ex.circuit, params, shots, seed_for(seed, ex.id as u64)),
    };
    r.map(|r| r.truth_value_estimate).map_err(|source| TrainError::Sim {
        sentence: ex.text.clone(),
        source,
    })
}

/// Squared distance between prediction and label, summed. Under shot
/// evaluation, sentence `id` samples from its own stream of `seed`.
pub fn loss(params: &ParameterStore, data: &[Example], evaluator: Evaluator, seed: u64) -> Result<LossReport, TrainError> {
    let per_sentence: Vec<SentenceLoss> = data
        .par_iter()
        .map(|ex| {
            let prediction = predict(ex, params, evaluator, seed)?;
            let target = if ex.label { 1.0 } else { 0.0 };
            Ok(SentenceLoss {
                id: ex.id,
                prediction,
                label: ex.label,
                distance: (prediction - target).powi(2),
            })
        })
        .collect::<Result<_, TrainError>>()?;
    // summed in order so thread count never changes the bits
    let total = per_sentence.iter().map(|s| s.distance).sum();
    Ok(LossReport { total, per_sentence })
}

/// Fraction of predictions on the right side of 0.5.
pub fn accuracy(report: &LossReport) -> f64 {
    if report.per_sentence.is_empty() {
        return 0.0;
    }
    let right = report.per_sentence.iter().filter(|s| (s.prediction > 0.5) == s.label).count();
    right as f64 / report.per_sentence.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub iteration: usize,
    pub params: ParameterStore,
    pub loss: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: usize,
    pub sentence: String,
    pub split: Split,
    pub label: bool,
    pub prediction: f64,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainResult {
    pub final_params: ParameterStore,
    /// train loss before the first step and after each step
    pub loss_history: Vec<f64>,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub predictions: Vec<Prediction>,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOptions {
    pub evaluator: Evaluator,
    pub init_seed: u64,
    pub workers: usize,
    /// keep a checkpoint every this many iterations (0: none)
    pub checkpoint_every: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            evaluator: Evaluator::Exact,
            init_seed: 0,
            workers: 1,
            checkpoint_every: 0,
        }
    }
}

/// SPSA on the summed train loss starting from uniform random angles.
pub fn train(corpus: &LabeledCorpus, spsa: &SpsaConfig, ansatz: &AnsatzConfig, opts: &TrainOptions) -> Result<TrainResult, TrainError> {
    spsa.validate().map_err(TrainError::Config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| TrainError::Pool(e.to_string()))?;
    pool.install(|| train_inner(corpus, spsa, ansatz, opts))
}

fn train_inner(corpus: &LabeledCorpus, spsa: &SpsaConfig, ansatz: &AnsatzConfig, opts: &TrainOptions) -> Result<TrainResult, TrainError> {
    let examples = compile_corpus(corpus, ansatz)?;
    let train_set: Vec<Example> = corpus.train().iter().map(|&i| examples[i].clone()).collect();
    let test_set: Vec<Example> = corpus.test().iter().map(|&i| examples[i].clone()).collect();

    let mut words: Vec<(&str, &crate::diagram::TypeList)> = Vec::new();
    for e in corpus.entries() {
        for b in e.sentence.diagram.boxes() {
            if b.dom().is_empty() && !words.iter().any(|(w, _)| *w == b.label()) {
                words.push((b.label(), b.cod()));
            }
        }
    }
    let start = ParameterStore::random(words, ansatz, opts.init_seed).map_err(|source| TrainError::Compile {
        sentence: String::new(),
        source,
    })?;

    let eval_seed = |k: usize, side: u64| seed_for(spsa.seed ^ 0x5eed, 3 * k as u64 + side);
    let mut theta = start.flatten();
    let mut history = vec![loss(&start, &train_set, opts.evaluator, eval_seed(0, 0))?.total];
    let mut checkpoints = Vec::new();
    for k in 1..=spsa.iterations {
        let mut side = 0;
        let step = spsa_step(
            &theta,
            |x| {
                side += 1;
                loss(&start.with_flat(x), &train_set, opts.evaluator, eval_seed(k, side)).map(|r| r.total)
            },
            k,
            spsa,
        )?;
        theta = step.0;
        let current = start.with_flat(&theta);
        let l = loss(&current, &train_set, opts.evaluator, eval_seed(k, 0))?.total;
        history.push(l);
        if opts.checkpoint_every > 0 && k % opts.checkpoint_every == 0 {
            checkpoints.push(Checkpoint {
                iteration: k,
                params: current,
                loss: l,
            });
        }
    }
    let final_params = start.with_flat(&theta);

    // final scores are always exact
    let train_report = loss(&final_params, &train_set, Evaluator::Exact, 0)?;
    let test_report = loss(&final_params, &test_set, Evaluator::Exact, 0)?;
    let mut predictions: Vec<Prediction> = train_report
        .per_sentence
        .iter()
        .map(|s| (s, Split::Train))
        .chain(test_report.per_sentence.iter().map(|s| (s, Split::Test)))
        .map(|(s, split)| Prediction {
            id: s.id,
            sentence: examples[s.id].text.clone(),
            split,
            label: s.label,
            prediction: s.prediction,
            correct: (s.prediction > 0.5) == s.label,
        })
        .collect();
    predictions.sort_by_key(|p| p.id);
    Ok(TrainResult {
        final_params,
        loss_history: history,
        train_accuracy: accuracy(&train_report),
        test_accuracy: accuracy(&test_report),
        predictions,
        checkpoints,
    })
}

/// Exact truth value of a composite question under frozen angles, and
/// whether it clears 0.5.
pub fn answer_question(q: &Sentence, params: &ParameterStore, ansatz: &AnsatzConfig) -> Result<(f64, bool), TrainError> {
    let c = compile_question(q, ansatz).map_err(|source| TrainError::Compile {
        sentence: q.text(),
        source,
    })?;
    if let Some(s) = c.slots().into_iter().find(|s| params.get(s).is_none()) {
        return Err(TrainError::UnknownWord(s.word.clone()));
    }
    let r = evaluate(&c, params).map_err(|source| TrainError::Sim {
        sentence: q.text(),
        source,
    })?;
    Ok((r.truth_value_estimate, r.truth_value_estimate > 0.5))
}
