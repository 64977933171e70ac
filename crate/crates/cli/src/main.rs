//! Command-line driver: ingest a corpus, extract features, classify with
//! fused membership evidence, generate synthetic corpora, and dump
//! networks for inspection.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stylonet::pipeline::{
    run_classify, run_features, run_metrics_dump, ClassifierChoice, RunConfig, StopwordSource,
};
use stylonet::synth::{generate, SynthConfig};

#[derive(Parser)]
#[command(
    name = "stylonet",
    about = "Word-adjacency network stylometry: features, classification, and evidence fusion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every corpus-reading subcommand.
#[derive(Args, Clone)]
struct CorpusArgs {
    /// Corpus manifest CSV (id,path,label)
    #[arg(long)]
    manifest: PathBuf,
    /// Lemma lexicon TSV (surface<TAB>lemma); omit for identity lemmas
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Stopword source: "english" (bundled list), "corpus"
    /// (intersection of all document vocabularies), or a file path
    #[arg(long, default_value = "english")]
    stopwords: String,
    /// Walk lengths for accessibility/diversity, comma-separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    h: Vec<u8>,
    /// Number of most frequent lemmas in the top-frequency summaries
    #[arg(long, default_value_t = 50)]
    eta: usize,
    /// Shuffled realizations per document for baseline normalization
    #[arg(long, default_value_t = 30)]
    shuffles: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Minimum occurrences for a word's intermittency feature
    #[arg(long, default_value_t = 5)]
    min_word_count: usize,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct LearnArgs {
    /// Membership classifier
    #[arg(long, default_value = "fknn", value_parser = ["fknn", "centroid"])]
    classifier: String,
    /// Neighbor counts for fknn; one classification run per value
    #[arg(long, value_delimiter = ',', default_value = "5")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long, default_value_t = 0.01)]
    lambda_step: f64,
    #[arg(long, default_value_t = 0.01)]
    theta_step: f64,
    /// Equal-width bins for information-gain rankings
    #[arg(long, default_value_t = 10)]
    info_gain_bins: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Extract all feature families into per-family CSVs
    Features(CorpusArgs),
    /// Cross-validate a traditional/network family pair and sweep both
    /// fusion rules
    Classify {
        /// Directory holding the feature CSVs written by `features`
        #[arg(long)]
        features: PathBuf,
        /// Traditional,network feature families (net, int, stop, bg)
        #[arg(long, value_delimiter = ',', default_value = "int,net")]
        families: Vec<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        learn: LearnArgs,
    },
    /// Generate a seeded synthetic corpus
    Synth {
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[arg(long, default_value_t = 40)]
        docs_per_class: usize,
        #[arg(long, default_value_t = 5000)]
        tokens_per_doc: usize,
        /// Distinct content words shared by all classes
        #[arg(long, default_value_t = 120)]
        vocabulary: usize,
        #[arg(long, default_value_t = 30)]
        stopword_count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Write each document's network as node/edge tables plus per-node
    /// metric values
    MetricsDump(CorpusArgs),
}

fn stopword_source(raw: &str) -> StopwordSource {
    match raw {
        "english" => StopwordSource::English,
        "corpus" => StopwordSource::Corpus,
        path => StopwordSource::File(PathBuf::from(path)),
    }
}

fn corpus_config(args: &CorpusArgs) -> RunConfig {
    let mut config = RunConfig::new(&args.manifest, &args.out);
    config.lexicon = args.lexicon.clone();
    config.stopwords = stopword_source(&args.stopwords);
    config.h_levels = args.h.clone();
    config.eta = args.eta;
    config.shuffles = args.shuffles;
    config.seed = args.seed;
    config.min_word_count = args.min_word_count;
    config
}

fn run(cli: Cli) -> stylonet::Result<()> {
    match cli.command {
        Command::Features(args) => {
            let config = corpus_config(&args);
            let provenance = run_features(&config)?;
            for warning in &provenance.lexicon_warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "wrote features for {} document(s) to {} (config {})",
                provenance.documents.len(),
                config.out_dir.display(),
                provenance.config_hash
            );
        }
        Command::Classify {
            features,
            families,
            seed,
            out,
            learn,
        } => {
            if families.len() != 2 {
                return Err(stylonet::Error::Validation(format!(
                    "--families takes exactly two names, got {families:?}"
                )));
            }
            let mut config = RunConfig::new(&features, &out);
            config.seed = seed;
            config.classifier = match learn.classifier.as_str() {
                "centroid" => ClassifierChoice::Centroid,
                _ => ClassifierChoice::Fknn,
            };
            config.k_values = learn.k.clone();
            config.folds = learn.folds;
            config.lambda_step = learn.lambda_step;
            config.theta_step = learn.theta_step;
            config.info_gain_bins = learn.info_gain_bins;
            let results = run_classify(&config, &features, &families[0], &families[1])?;
            for warning in &results.fold_warnings {
                eprintln!("warning: {warning}");
            }
            for run in &results.runs {
                let k = run.k.map(|k| format!(" k={k}")).unwrap_or_default();
                println!(
                    "{}{k}: gamma_T={:.4} gamma_R={:.4} hybrid max ratio {} at {} / tiebreaker max ratio {} at {}",
                    run.classifier,
                    run.gamma_traditional,
                    run.gamma_network,
                    fmt_opt(run.hybrid.max_ratio),
                    fmt_opt(run.hybrid.best_parameter),
                    fmt_opt(run.tiebreaker.max_ratio),
                    fmt_opt(run.tiebreaker.best_parameter),
                );
            }
            println!(
                "wrote gain curves and results JSON to {} (config {})",
                out.display(),
                results.config_hash
            );
        }
        Command::Synth {
            classes,
            docs_per_class,
            tokens_per_doc,
            vocabulary,
            stopword_count,
            seed,
            out,
        } => {
            let config = SynthConfig {
                classes,
                docs_per_class,
                tokens_per_doc,
                vocabulary,
                stopword_count,
                seed,
            };
            let output = generate(&config, &out)?;
            println!(
                "wrote {} document(s), manifest {}, stopwords {}",
                output.documents,
                output.manifest.display(),
                output.stopwords.display()
            );
        }
        Command::MetricsDump(args) => {
            let config = corpus_config(&args);
            run_metrics_dump(&config)?;
            println!("wrote network dumps to {}", config.out_dir.display());
        }
    }
    Ok(())
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
