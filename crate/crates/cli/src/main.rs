mod config;

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chordlift::lexicon::{load_lexicon, Lexicon, NeutralBand};
use chordlift::metadata::{load_metadata_file, ChainProvider, HttpOptions, HttpProvider, RegionVocabulary};
use chordlift::pipeline::{self, ChordTable, IndexEntry, LevelOptions};
use chordlift::wordshift::{render_shift, ShiftFormat};
use chordlift::Factor;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Config, CONFIG_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "chordlift",
    version,
    about = "Chord-lyric valence analysis for guitar tab corpora"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Config file (key = value); defaults to $CHORDLIFT_CONFIG
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Lexicon TSV with `word` and `valence` columns (bundled LabMT by default)
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// English word list, one word per line (bundled list by default)
    #[arg(long, global = true)]
    wordlist: Option<PathBuf>,
    #[arg(long, global = true)]
    band_low: Option<f64>,
    #[arg(long, global = true)]
    band_high: Option<f64>,
    #[arg(long, global = true)]
    metadata_file: Option<PathBuf>,
    #[arg(long, global = true)]
    metadata_endpoint: Option<String>,
    #[arg(long, global = true)]
    top_genres: Option<usize>,
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    /// More log output (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a tab corpus into a chord-word table
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        /// JSONL index; defaults to <corpus>/index.jsonl
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Join genre, era and region labels onto a chord-word table
    Enrich {
        #[arg(long)]
        table: PathBuf,
        /// Corpus index supplying titles and artists for remote lookups
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Valence, Major-Minor and prevalence summary tables
    Analyze {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Word shift of one labelled subset against the whole table
    Wordshift {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        index: Option<PathBuf>,
        /// Subset to compare, as factor=label (e.g. genre=Punk)
        #[arg(long, value_parser = parse_compare)]
        compare: (Factor, String),
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Variance explained per factor and a greedy AIC trace
    Model {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values = ["category", "genre", "era", "region"])]
        factors: Vec<Factor>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Tsv,
    Svg,
}

fn parse_compare(s: &str) -> Result<(Factor, String), String> {
    let (factor, label) = s
        .split_once('=')
        .ok_or_else(|| format!("expected factor=label, got {s:?}"))?;
    let factor = factor.parse::<Factor>().map_err(|e| e.to_string())?;
    if label.is_empty() {
        return Err("empty label".to_string());
    }
    Ok((factor, label.to_string()))
}

enum Failure {
    /// Bad invocation or configuration (exit 2).
    Usage(String),
    /// Unreadable or invalid input data (exit 1).
    Data(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.to_string())
    }
}

fn resolve_config(opts: &GlobalOpts) -> Result<Config, Failure> {
    let path = opts
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut config = match path {
        Some(p) => Config::load(&p).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    let set = |slot: &mut Option<PathBuf>, flag: &Option<PathBuf>| {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    };
    set(&mut config.lexicon_path, &opts.lexicon);
    set(&mut config.wordlist_path, &opts.wordlist);
    set(&mut config.metadata_file, &opts.metadata_file);
    if let Some(v) = &opts.output_dir {
        config.output_dir = v.clone();
    }
    if let Some(v) = opts.band_low {
        config.band_low = v;
    }
    if let Some(v) = opts.band_high {
        config.band_high = v;
    }
    if let Some(v) = &opts.metadata_endpoint {
        config.metadata_endpoint = Some(v.clone());
    }
    if let Some(v) = opts.top_genres {
        config.top_genres = v;
    }
    if let Some(v) = opts.parallelism {
        config.parallelism = v;
    }
    config.validate().map_err(Failure::Usage)?;
    for path in [&config.lexicon_path, &config.wordlist_path, &config.metadata_file]
        .into_iter()
        .flatten()
    {
        if !path.exists() {
            return Err(Failure::Data(format!("{} does not exist", path.display())));
        }
    }
    Ok(config)
}

fn lexicon(config: &Config) -> Result<Lexicon, Failure> {
    let band = NeutralBand::new(config.band_low, config.band_high).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(match &config.lexicon_path {
        Some(p) => load_lexicon(p, band)?,
        None => Lexicon::bundled(band),
    })
}

fn wordlist(config: &Config) -> Result<HashSet<String>, Failure> {
    Ok(match &config.wordlist_path {
        Some(p) => pipeline::load_wordlist(p)?,
        None => pipeline::bundled_wordlist(),
    })
}

fn provider(config: &Config) -> Result<Option<ChainProvider>, Failure> {
    let vocab = RegionVocabulary::default();
    let file = config
        .metadata_file
        .as_deref()
        .map(|p| load_metadata_file(p, &vocab))
        .transpose()?;
    if let Some(table) = &file {
        if table.malformed_lines > 0 {
            log::warn!("skipped {} malformed metadata lines", table.malformed_lines);
        }
    }
    let http = config
        .metadata_endpoint
        .as_deref()
        .map(|url| HttpProvider::new(url, HttpOptions::default(), vocab.clone()))
        .transpose()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((file.is_some() || http.is_some()).then_some(ChainProvider { file, http }))
}

fn read_index(path: Option<&Path>) -> Result<Vec<IndexEntry>, Failure> {
    Ok(match path {
        Some(p) => pipeline::read_index(p)?,
        None => Vec::new(),
    })
}

fn write_output(config: &Config, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(&config.output_dir)
        .map_err(|e| Failure::Data(format!("cannot create {}: {e}", config.output_dir.display())))?;
    let path = config.output_dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?;
    println!("{}", path.display());
    Ok(())
}

fn write_json<T: serde::Serialize>(config: &Config, name: &str, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(config, name, &text)
}

/// The chord table, enriched in memory when it lacks labels and a metadata
/// source is configured.
fn labelled_table(config: &Config, table: &Path, index: Option<&Path>) -> Result<ChordTable, Failure> {
    let table = pipeline::read_chord_table(table)?;
    if table.enriched {
        return Ok(table);
    }
    match provider(config)? {
        Some(p) => {
            let (enriched, diagnostics) = pipeline::enrich(&table, &read_index(index)?, &p, config.parallelism)?;
            log::info!("joined metadata in memory: {diagnostics:?}");
            Ok(enriched)
        }
        None => {
            log::warn!("table has no metadata columns and no metadata source is configured");
            Ok(table)
        }
    }
}

fn level_options(config: &Config) -> LevelOptions {
    LevelOptions {
        top_genres: config.top_genres,
        eras: config.eras.clone(),
        regions: config.regions.clone(),
    }
}

fn file_safe(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = resolve_config(&cli.opts)?;
    match cli.command {
        Command::Ingest { corpus, index } => {
            let index = index.unwrap_or_else(|| corpus.join("index.jsonl"));
            let entries = pipeline::read_index(&index)?;
            let docs = pipeline::load_documents(&corpus, &entries)?;
            let out = pipeline::ingest(docs, &wordlist(&config)?, config.parallelism)?;
            write_output(&config, "chord_words.tsv", &pipeline::format_chord_table(&out.events))?;
            write_json(&config, "diagnostics.json", &out.diagnostics)?;
        }
        Command::Enrich { table, index } => {
            let Some(provider) = provider(&config)? else {
                return Err(Failure::Usage(
                    "enrich needs --metadata-file or --metadata-endpoint".to_string(),
                ));
            };
            let table = pipeline::read_chord_table(&table)?;
            let (enriched, diagnostics) =
                pipeline::enrich(&table, &read_index(index.as_deref())?, &provider, config.parallelism)?;
            write_output(
                &config,
                "chord_words_enriched.tsv",
                &pipeline::format_enriched_table(&enriched.rows),
            )?;
            write_json(&config, "enrich_diagnostics.json", &diagnostics)?;
        }
        Command::Analyze { table, index } => {
            let table = labelled_table(&config, &table, index.as_deref())?;
            let analysis = pipeline::analyze(&table, &lexicon(&config)?, &level_options(&config));
            for (name, contents) in &analysis.files {
                write_output(&config, name, contents)?;
            }
            write_json(&config, "analyze_diagnostics.json", &analysis.diagnostics)?;
        }
        Command::Wordshift {
            table,
            index,
            compare: (factor, label),
            top,
            format,
        } => {
            let table = labelled_table(&config, &table, index.as_deref())?;
            let shift = pipeline::shift_for_label(&table, &lexicon(&config)?, factor, &label)?;
            if !shift.percentages {
                log::warn!("comparison and reference means are equal; reporting raw products, not percentages");
            }
            let (format, ext) = match format {
                Format::Tsv => (ShiftFormat::Tsv, "tsv"),
                Format::Svg => (ShiftFormat::Svg, "svg"),
            };
            let n = usize::try_from(top).unwrap_or(usize::MAX);
            let name = format!("wordshift_{factor}_{}.{ext}", file_safe(&label));
            write_output(&config, &name, &render_shift(&shift.entries, n, format))?;
        }
        Command::Model { table, index, factors } => {
            let table = labelled_table(&config, &table, index.as_deref())?;
            let (chords, _) = pipeline::score_chords(&table.rows, &lexicon(&config)?);
            let filter = pipeline::level_filter(&table.rows, &level_options(&config));
            let report = pipeline::model(&chords, &factors, &filter)?;
            write_output(
                &config,
                "variance_explained.tsv",
                &pipeline::format_variance_explained(&report.variance),
            )?;
            write_output(&config, "aic_trace.tsv", &pipeline::format_aic_trace(&report.trace))?;
            write_output(
                &config,
                "aic_trace_common.tsv",
                &pipeline::format_aic_trace(&report.trace_common),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.opts.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
