//! The `demovec` command line.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use log::info;

use crate::analysis::{
    analyze, extract_token_matrix, permutation_test, read_word_list, tables, AnalysisError,
    AxisOptions,
};
use crate::corpus::{CorpusError, LemmaTable, Preprocessor, PronounSet};
use crate::embedding::{load_model, save_model, train_sentences, EmbeddingError, EmbeddingModel};
use crate::harness::{
    emit_report, generate_corpus, run_sweep, sweep_tsv, HarnessError, ReportBundle, RunInfo,
    SweepAxis, SyntheticSpec,
};

pub use config::{Overrides, RunConfig};

/// Exit status 1 for usage and configuration problems, 2 for bad data.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<EmbeddingError> for CliError {
    fn from(e: EmbeddingError) -> Self {
        match e {
            EmbeddingError::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Spec(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "demovec",
    version,
    about = "Demographically enhanced pronoun embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a planted-signal JSONL corpus and its word lists
    Synth(Flags),
    /// Rewrite JSONL posts into a training corpus with enhanced pronouns
    Prep(Flags),
    /// Train embeddings on a rewritten corpus
    Train(Flags),
    /// PCA, correlations and axis projections of the enhanced tokens
    Analyze(Flags),
    /// Permutation test for a semantic axis
    Permtest(Flags),
    /// Train and score a grid of settings on one corpus
    Sweep(Flags),
}

#[derive(clap::Args, Debug)]
struct Flags {
    #[command(flatten)]
    overrides: Overrides,
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("DEMOVEC_LOG", "info");
    let _ = env_logger::Builder::from_env(env)
        .format_timestamp(None)
        .format_target(false)
        .try_init();
}

fn dispatch(command: Command) -> Result<(), CliError> {
    let (name, flags) = match command {
        Command::Synth(f) => ("synth", f),
        Command::Prep(f) => ("prep", f),
        Command::Train(f) => ("train", f),
        Command::Analyze(f) => ("analyze", f),
        Command::Permtest(f) => ("permtest", f),
        Command::Sweep(f) => ("sweep", f),
    };
    let cfg = RunConfig::resolve(flags.overrides)?;
    info!(
        "{name} config: {}",
        serde_json::to_string(&cfg.to_json()).expect("json")
    );
    match name {
        "synth" => synth(&cfg),
        "prep" => prep(&cfg),
        "train" => train(&cfg),
        "analyze" => analyze_cmd(&cfg),
        "permtest" => permtest(&cfg),
        _ => sweep(&cfg),
    }
}

fn required<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("missing required --{flag}")))
}

type Poles = (Vec<String>, Vec<String>);

fn poles(cfg: &RunConfig) -> Result<Option<Poles>, CliError> {
    match (&cfg.pos, &cfg.neg) {
        (Some(p), Some(n)) => Ok(Some((read_word_list(p)?, read_word_list(n)?))),
        (None, None) => Ok(None),
        _ => Err(CliError::Usage(
            "--pos and --neg must be given together".into(),
        )),
    }
}

fn load(path: &Path) -> Result<EmbeddingModel, CliError> {
    info!("loading {}", path.display());
    Ok(load_model(path)?)
}

fn run_info(command: &str, cfg: &RunConfig, inputs: Vec<PathBuf>) -> RunInfo {
    RunInfo {
        command: command.to_owned(),
        config: cfg.to_json(),
        config_toml: Some(cfg.to_toml()),
        seeds: BTreeMap::from([("seed".to_owned(), cfg.seed)]),
        inputs,
    }
}

fn synth(cfg: &RunConfig) -> Result<(), CliError> {
    let out = required(&cfg.out, "out")?;
    let mut spec = match &cfg.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<SyntheticSpec>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => SyntheticSpec::default(),
    };
    if cfg.seed_given {
        spec.seed = cfg.seed;
    }
    info!("spec: {}", serde_json::to_string(&spec).expect("json"));
    generate_corpus(&spec, out)?;
    let lex = spec.lexicon();
    for (suffix, words) in [
        ("fem", &lex.fem),
        ("mas", &lex.mas),
        ("age", &lex.age),
        ("neutral", &lex.neutral),
    ] {
        let path = out.with_extension(format!("{suffix}.txt"));
        fs::write(&path, words.join("\n") + "\n")
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        println!("{suffix}\t{}", path.display());
    }
    println!("posts\t{}", spec.n_posts);
    Ok(())
}

fn prep(cfg: &RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "in")?;
    let out = required(&cfg.out, "out")?;
    let pronouns = PronounSet::load(&cfg.pronouns).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut pre = Preprocessor::new(pronouns).with_ages(cfg.ages());
    if let Some(path) = &cfg.lemmas {
        pre = pre.with_lemmas(LemmaTable::load(path).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    let stats = pre.rewrite_file(input, out)?;
    let mut text = String::from("counter\tvalue\n");
    for (k, v) in [
        ("lines", stats.lines),
        ("written", stats.written),
        ("blank_lines", stats.blank_lines),
        ("skipped_age", stats.skipped_age),
        ("skipped_empty", stats.skipped_empty),
        ("pronouns_replaced", stats.pronouns_replaced),
    ] {
        writeln!(text, "{k}\t{v}").unwrap();
    }
    print!("{text}");
    Ok(())
}

fn read_corpus(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn train(cfg: &RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "in")?;
    let out = cfg
        .out
        .as_deref()
        .or(cfg.model.as_deref())
        .ok_or_else(|| CliError::Usage("missing required --out (or --model)".into()))?;
    let text = read_corpus(input)?;
    let (model, report) = train_sentences(text.lines(), &cfg.train_config())?;
    save_model(&model, out)?;
    println!(
        "vocab\t{}\ndims\t{}\nexamples\t{}\nmean_loss\t{}\nseconds\t{:.3}",
        model.len(),
        model.dims(),
        report.examples,
        report.mean_loss,
        report.seconds
    );
    Ok(())
}

fn analyze_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let model_path = required(&cfg.model, "model")?;
    let out = required(&cfg.out, "out")?;
    let model = load(model_path)?;
    let poles = poles(cfg)?;
    let report = analyze(
        &model,
        poles.as_ref().map(|(p, n)| (p.as_slice(), n.as_slice())),
        &cfg.analysis_config(cfg.n),
    )?;
    let mut bundle = ReportBundle::new();
    bundle.add_analysis(&report);
    let mut inputs = vec![model_path.to_owned()];
    inputs.extend(cfg.pos.iter().chain(&cfg.neg).cloned());
    emit_report(&bundle, out, &run_info("analyze", cfg, inputs))?;
    print!("{}", tables::correlations_tsv(&report));
    Ok(())
}

fn permtest(cfg: &RunConfig) -> Result<(), CliError> {
    let model_path = required(&cfg.model, "model")?;
    let (pos, neg) =
        poles(cfg)?.ok_or_else(|| CliError::Usage("missing required --pos and --neg".into()))?;
    if cfg.n < 1 {
        return Err(CliError::Usage("--n must be >= 1".into()));
    }
    let model = load(model_path)?;
    let tokens = extract_token_matrix(&model)?;
    let options = AxisOptions {
        projection: cfg.projection,
        ..AxisOptions::default()
    };
    let result = permutation_test(&model, &pos, &neg, &tokens, cfg.n, cfg.seed, &options)?;
    if let Some(out) = &cfg.out {
        let mut bundle = ReportBundle::new();
        bundle.add_permutation(&result);
        let inputs = vec![
            model_path.to_owned(),
            cfg.pos.clone().unwrap(),
            cfg.neg.clone().unwrap(),
        ];
        emit_report(&bundle, out, &run_info("permtest", cfg, inputs))?;
    }
    print!("{}", tables::permutation_summary_tsv(&result));
    Ok(())
}

fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let input = required(&cfg.input, "in")?;
    let grid = cfg.grid();
    grid.validate()?;
    let axis = poles(cfg)?.map(|(pos, neg)| SweepAxis {
        pos,
        neg,
        options: AxisOptions {
            projection: cfg.projection,
            ..AxisOptions::default()
        },
    });
    let text = read_corpus(input)?;
    let sentences: Vec<String> = text.lines().map(str::to_owned).collect();
    let rows = run_sweep(
        &sentences,
        &grid,
        axis.as_ref(),
        &cfg.train_config(),
        cfg.workers,
    )?;
    if let Some(out) = &cfg.out {
        let mut bundle = ReportBundle::new();
        bundle.add_sweep(&rows);
        let mut inputs = vec![input.to_owned()];
        inputs.extend(cfg.pos.iter().chain(&cfg.neg).cloned());
        emit_report(&bundle, out, &run_info("sweep", cfg, inputs))?;
    }
    print!("{}", sweep_tsv(&rows));
    Ok(())
}
