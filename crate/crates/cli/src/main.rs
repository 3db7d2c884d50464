use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qnlp::density::{animal_hierarchy, is_hyponym};
use qnlp::experiment::{build_corpus, resolve_output_dir, run_experiment, write_corpus_file, ExperimentConfig, Model};

#[derive(Parser)]
#[command(name = "qnlp", version, about = "Compile, train and query toy sentence circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "configs/default.toml")]
    config: PathBuf,
    /// overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// output directory; beats QNLP_OUT_DIR, which beats the config
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the labelled corpus a config describes as corpus.jsonl
    Generate(RunArgs),
    /// Train and write report, model, loss history and circuits
    Train(RunArgs),
    /// Answer a question with a trained model
    Ask {
        #[arg(long)]
        model: PathBuf,
        #[arg(required = true, num_args = 1..)]
        tokens: Vec<String>,
    },
    /// Print OpenQASM for a sentence or question under a trained model
    ExportQasm {
        #[arg(long)]
        model: PathBuf,
        /// write here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true, num_args = 1..)]
        tokens: Vec<String>,
    },
    /// Print the hyponymy table of the bundled animal hierarchy
    DemoDensity,
}

fn load(args: &RunArgs) -> Result<(ExperimentConfig, String, PathBuf)> {
    let (mut cfg, text) = ExperimentConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    let env = std::env::var_os("QNLP_OUT_DIR").map(PathBuf::from);
    let out = resolve_output_dir(args.out.clone(), env, &cfg);
    Ok((cfg, text, out))
}

fn tokens(t: &[String]) -> Vec<&str> {
    t.iter().flat_map(|s| s.split_whitespace()).collect()
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => {
            let (cfg, _, out) = load(&args)?;
            let (_, corpus) = build_corpus(&cfg)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let path = out.join("corpus.jsonl");
            write_corpus_file(&corpus, &path)?;
            println!(
                "{} sentences ({} train, {} test) -> {}",
                corpus.len(),
                corpus.train().len(),
                corpus.test().len(),
                path.display()
            );
        }
        Command::Train(args) => {
            let (cfg, text, out) = load(&args)?;
            let r = run_experiment(&cfg, &text, &out)?;
            println!("train accuracy {:.3}", r.train_accuracy);
            println!(
                "test accuracy {:.3} (majority baseline {:.3})",
                r.test_accuracy, r.majority_baseline
            );
            if let Some(l) = r.loss_history.last() {
                println!("final loss {l:.6}");
            }
            for a in &r.questions {
                println!("{:?}: {:.4} -> {}", a.question, a.estimate, a.answer);
            }
            println!("wrote {}", out.display());
        }
        Command::Ask { model, tokens: t } => {
            let m = load_model(&model)?;
            let a = m.ask(&tokens(&t))?;
            println!("estimate {:.6}", a.estimate);
            println!("answer {}", a.answer);
            println!("width {}", a.width);
        }
        Command::ExportQasm { model, out, tokens: t } => {
            let m = load_model(&model)?;
            let qasm = m.qasm(&tokens(&t))?;
            match out {
                Some(p) => std::fs::write(&p, qasm).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{qasm}"),
            }
        }
        Command::DemoDensity => {
            let words = animal_hierarchy();
            let width = words.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
            print!("{:width$}", "");
            for (b, _) in &words {
                print!("  {b:>width$}");
            }
            println!();
            for (a, da) in &words {
                print!("{a:width$}");
                for (_, db) in &words {
                    let mark = if is_hyponym(da, db)? { "yes" } else { "-" };
                    print!("  {mark:>width$}");
                }
                println!();
            }
            println!("(row is a hyponym of column)");
        }
    }
    Ok(())
}

fn load_model(path: &Path) -> Result<Model> {
    Model::load(path).with_context(|| format!("loading model {}", path.display()))
}
