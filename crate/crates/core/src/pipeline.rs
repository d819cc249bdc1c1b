//! Corpus-level stages (ingest, enrich, analyze, word shift, model) and the
//! tab-separated tables they exchange.
//!
//! The chord-word table has one row per (event, word) pair. Consecutive rows
//! sharing `song_id` and `chord_raw` are read back as one chord instance.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chord::ChordCategory;
use crate::factor::{join_factors, Factor};
use crate::lexicon::Lexicon;
use crate::metadata::{resolve_era, Era, LevelFilter, MetadataError, MetadataProvider, SongQuery, SongRecord};
use crate::modeling::{common_rows, greedy_aic, variance_explained, AicStep, ModelError, VarianceExplained};
use crate::stats::{
    category_prevalence, major_minor_diff, mann_whitney_one_tailed, valence_by, Alternative, ChordValence, TestMethod,
};
use crate::tab::{dedupe, is_english, parse_tab, ChordLyricEvent, TabDiagnostics, TabDocument};
use crate::wordshift::{word_shift, Bag, WordShift, WordShiftError};

pub const TABLE_HEADER: &str = "song_id\tchord_raw\troot\tcategory\tword";
pub const ENRICHED_HEADER: &str = "song_id\tchord_raw\troot\tcategory\tword\tgenre\tera\tregion";

pub const BUNDLED_WORDLIST: &str = include_str!("../data/english_words.txt");

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}:{line}: {message}")]
    Index {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}:{line}: {message}")]
    Schema {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Metadata(#[from] MetadataError),
    #[error(transparent)]
    WordShift(#[from] WordShiftError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

/// Six decimals, without a sign on zero.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn read_text(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn worker_pool(parallelism: usize) -> Result<rayon::ThreadPool, PipelineError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| PipelineError::ThreadPool(e.to_string()))
}

fn is_table_safe(s: &str) -> bool {
    !s.is_empty() && !s.contains(['\t', '\n', '\r'])
}

pub fn parse_wordlist(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}

pub fn bundled_wordlist() -> HashSet<String> {
    parse_wordlist(BUNDLED_WORDLIST)
}

pub fn load_wordlist(path: &Path) -> Result<HashSet<String>, PipelineError> {
    Ok(parse_wordlist(&read_text(path)?))
}

/// One line of the corpus index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub song_id: String,
    pub title: String,
    pub artist: String,
    pub rating: f64,
    /// Tab file, relative to the corpus directory.
    pub path: String,
}

pub fn parse_index(text: &str, source_name: &str) -> Result<Vec<IndexEntry>, PipelineError> {
    let err = |line: usize, message: String| PipelineError::Index {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entry: IndexEntry = serde_json::from_str(line).map_err(|e| err(i + 1, e.to_string()))?;
        if !is_table_safe(&entry.song_id) {
            return Err(err(i + 1, format!("invalid song_id {:?}", entry.song_id)));
        }
        if !(entry.rating.is_finite() && entry.rating >= 0.0) {
            return Err(err(i + 1, format!("invalid rating {}", entry.rating)));
        }
        if !seen.insert(entry.song_id.clone()) {
            return Err(err(i + 1, format!("duplicate song_id {:?}", entry.song_id)));
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn read_index(path: &Path) -> Result<Vec<IndexEntry>, PipelineError> {
    parse_index(&read_text(path)?, &path.display().to_string())
}

/// Reads every tab file named by the index.
pub fn load_documents(corpus_dir: &Path, entries: &[IndexEntry]) -> Result<Vec<TabDocument>, PipelineError> {
    entries
        .iter()
        .map(|e| {
            Ok(TabDocument {
                song_id: e.song_id.clone(),
                title: e.title.clone(),
                artist: e.artist.clone(),
                rating: e.rating,
                body: read_text(&corpus_dir.join(&e.path))?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestDiagnostics {
    pub songs_in: usize,
    pub duplicates_removed: usize,
    pub non_english_dropped: usize,
    pub songs_out: usize,
    /// Chords with no lyric words attached, dropped.
    pub chords_dropped: usize,
    pub unparsed_chord_tokens: usize,
    pub chord_lines: usize,
    pub lyric_lines: usize,
    pub staff_lines: usize,
    pub final_events: usize,
    pub table_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestOutput {
    /// Ordered by song, line and column.
    pub events: Vec<ChordLyricEvent>,
    pub diagnostics: IngestDiagnostics,
}

/// Dedupe, parse each tab on up to `parallelism` threads (0 picks a default),
/// then drop songs failing the English test.
pub fn ingest(
    docs: Vec<TabDocument>,
    wordlist: &HashSet<String>,
    parallelism: usize,
) -> Result<IngestOutput, PipelineError> {
    let songs_in = docs.len();
    let docs = dedupe(docs);
    let mut diagnostics = IngestDiagnostics {
        songs_in,
        duplicates_removed: songs_in - docs.len(),
        ..Default::default()
    };
    let parsed = worker_pool(parallelism)?.install(|| docs.par_iter().map(parse_tab).collect::<Vec<_>>());

    let mut tab = TabDiagnostics::default();
    let mut events = Vec::new();
    for p in parsed {
        tab.merge(&p.diagnostics);
        if !is_english(&p.lyric_words, wordlist) {
            diagnostics.non_english_dropped += 1;
            continue;
        }
        if !p.events.is_empty() {
            diagnostics.songs_out += 1;
        }
        events.extend(p.events);
    }
    events.sort_by(|a, b| (&a.song_id, a.line_index, a.column).cmp(&(&b.song_id, b.line_index, b.column)));

    diagnostics.chords_dropped = tab.chords_without_lyrics;
    diagnostics.unparsed_chord_tokens = tab.unparsed_chord_tokens;
    diagnostics.chord_lines = tab.chord_lines;
    diagnostics.lyric_lines = tab.lyric_lines;
    diagnostics.staff_lines = tab.staff_lines;
    diagnostics.final_events = events.len();
    diagnostics.table_rows = events.iter().map(|e| e.words.len()).sum();
    if diagnostics.final_events == 0 {
        log::warn!("ingest produced no chord-word events");
    }
    Ok(IngestOutput { events, diagnostics })
}

pub fn format_chord_table(events: &[ChordLyricEvent]) -> String {
    let mut out = String::new();
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for e in events {
        for w in &e.words {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                e.song_id,
                e.chord.raw,
                e.chord.root,
                e.chord.category.name(),
                w
            );
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub song_id: String,
    pub chord_raw: String,
    pub root: String,
    pub category: ChordCategory,
    pub word: String,
    pub genre: Option<String>,
    pub era: Option<String>,
    pub region: Option<String>,
}

impl TableRow {
    pub fn label(&self, factor: Factor) -> Option<&str> {
        match factor {
            Factor::Category => Some(self.category.name()),
            Factor::Genre => self.genre.as_deref(),
            Factor::Era => self.era.as_deref(),
            Factor::Region => self.region.as_deref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordTable {
    pub rows: Vec<TableRow>,
    /// Whether the genre, era and region columns are present.
    pub enriched: bool,
}

pub fn parse_chord_table(text: &str, source_name: &str) -> Result<ChordTable, PipelineError> {
    let err = |line: usize, message: String| PipelineError::Schema {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut lines = text.lines();
    let enriched = match lines.next() {
        Some(TABLE_HEADER) => false,
        Some(ENRICHED_HEADER) => true,
        Some(other) => return Err(err(1, format!("unexpected header {other:?}"))),
        None => return Err(err(1, "missing header".to_string())),
    };
    let width = if enriched { 8 } else { 5 };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != width {
            return Err(err(line_no, format!("expected {width} fields, found {}", fields.len())));
        }
        if fields[..5].iter().any(|f| f.is_empty()) {
            return Err(err(line_no, "empty required field".to_string()));
        }
        let category = fields[3]
            .parse::<ChordCategory>()
            .map_err(|_| err(line_no, format!("unknown chord category {:?}", fields[3])))?;
        let optional = |k: usize| fields.get(k).filter(|f| !f.is_empty()).map(|f| f.to_string());
        rows.push(TableRow {
            song_id: fields[0].to_string(),
            chord_raw: fields[1].to_string(),
            root: fields[2].to_string(),
            category,
            word: fields[4].to_string(),
            genre: optional(5),
            era: optional(6),
            region: optional(7),
        });
    }
    Ok(ChordTable { rows, enriched })
}

pub fn read_chord_table(path: &Path) -> Result<ChordTable, PipelineError> {
    parse_chord_table(&read_text(path)?, &path.display().to_string())
}

pub fn format_enriched_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    out.push_str(ENRICHED_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.song_id,
            r.chord_raw,
            r.root,
            r.category.name(),
            r.word,
            r.genre.as_deref().unwrap_or(""),
            r.era.as_deref().unwrap_or(""),
            r.region.as_deref().unwrap_or("")
        );
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnrichDiagnostics {
    pub songs_in: usize,
    pub songs_matched: usize,
    pub songs_unmatched: usize,
    pub songs_without_era: usize,
    pub rows_in: usize,
    pub rows_out: usize,
}

/// Attaches metadata labels to every row, dropping songs the provider does
/// not know. Titles and artists for remote queries come from `index`.
pub fn enrich(
    table: &ChordTable,
    index: &[IndexEntry],
    provider: &dyn MetadataProvider,
    parallelism: usize,
) -> Result<(ChordTable, EnrichDiagnostics), PipelineError> {
    let by_id: BTreeMap<&str, &IndexEntry> = index.iter().map(|e| (e.song_id.as_str(), e)).collect();
    let songs: Vec<&str> = table
        .rows
        .iter()
        .map(|r| r.song_id.as_str())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let looked_up: Vec<Option<SongRecord>> = worker_pool(parallelism)?.install(|| {
        songs
            .par_iter()
            .map(|&song_id| {
                let entry = by_id.get(song_id);
                provider.lookup(SongQuery {
                    song_id,
                    title: entry.map_or("", |e| e.title.as_str()),
                    artist: entry.map_or("", |e| e.artist.as_str()),
                })
            })
            .collect::<Result<_, _>>()
    })?;
    let records: BTreeMap<&str, SongRecord> = songs
        .iter()
        .zip(looked_up)
        .filter_map(|(id, rec)| rec.map(|r| (*id, r)))
        .collect();

    let mut diagnostics = EnrichDiagnostics {
        songs_in: songs.len(),
        songs_matched: records.len(),
        songs_unmatched: songs.len() - records.len(),
        songs_without_era: records.values().filter(|r| resolve_era(r).is_none()).count(),
        rows_in: table.rows.len(),
        rows_out: 0,
    };
    for id in songs.iter().filter(|id| !records.contains_key(*id)) {
        log::info!("no metadata for song {id:?}, dropped");
    }
    let rows: Vec<TableRow> = table
        .rows
        .iter()
        .filter_map(|r| {
            let rec = records.get(r.song_id.as_str())?;
            Some(TableRow {
                genre: rec.genre.clone(),
                era: resolve_era(rec).map(|e| e.to_string()),
                region: rec.region.clone(),
                ..r.clone()
            })
        })
        .collect();
    diagnostics.rows_out = rows.len();
    Ok((ChordTable { rows, enriched: true }, diagnostics))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreDiagnostics {
    pub rows: usize,
    pub chord_instances: usize,
    pub chords_scored: usize,
    /// Chords whose words are all neutral or unknown, dropped.
    pub chords_without_sentiment: usize,
}

/// Groups consecutive rows into chord instances and scores each one by the
/// mean valence of its sentiment words.
pub fn score_chords(rows: &[TableRow], lex: &Lexicon) -> (Vec<ChordValence>, ScoreDiagnostics) {
    let mut chords = Vec::new();
    let mut diagnostics = ScoreDiagnostics {
        rows: rows.len(),
        ..Default::default()
    };
    for group in rows.chunk_by(|a, b| a.song_id == b.song_id && a.chord_raw == b.chord_raw) {
        diagnostics.chord_instances += 1;
        let first = &group[0];
        let word_valences: Vec<f64> = group.iter().filter_map(|r| lex.sentiment_valence(&r.word)).collect();
        if word_valences.is_empty() {
            diagnostics.chords_without_sentiment += 1;
            continue;
        }
        chords.push(ChordValence {
            song_id: first.song_id.clone(),
            category: first.category,
            genre: first.genre.clone(),
            era: first.era.clone(),
            region: first.region.clone(),
            valence: word_valences.iter().sum::<f64>() / word_valences.len() as f64,
            word_valences,
        });
    }
    diagnostics.chords_scored = chords.len();
    (chords, diagnostics)
}

/// Which levels get reported and modelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelOptions {
    pub top_genres: usize,
    pub eras: BTreeSet<String>,
    pub regions: BTreeSet<String>,
}

impl Default for LevelOptions {
    fn default() -> Self {
        Self {
            top_genres: 20,
            eras: crate::metadata::default_eras(),
            regions: crate::metadata::default_regions(),
        }
    }
}

/// Levels by song popularity: the most frequent genres, and the allowed eras
/// and regions that occur. Categories are the five analysed ones.
pub fn level_filter(rows: &[TableRow], opts: &LevelOptions) -> LevelFilter {
    let mut songs: BTreeMap<&str, SongRecord> = BTreeMap::new();
    for r in rows {
        songs.entry(r.song_id.as_str()).or_insert_with(|| SongRecord {
            song_id: r.song_id.clone(),
            genre: r.genre.clone(),
            era: r.era.as_deref().and_then(|e| e.parse::<Era>().ok()),
            region: r.region.clone(),
            album_year: None,
        });
    }
    let records: Vec<SongRecord> = songs.into_values().collect();
    let levels = |factor, k, allow| -> BTreeSet<String> {
        crate::metadata::top_levels(&records, factor, k, allow)
            .into_iter()
            .collect()
    };
    LevelFilter {
        genres: levels(Factor::Genre, opts.top_genres, None),
        eras: levels(Factor::Era, usize::MAX, Some(&opts.eras)),
        regions: levels(Factor::Region, usize::MAX, Some(&opts.regions)),
        categories: ChordCategory::ANALYZED.iter().map(|c| c.name().to_string()).collect(),
    }
}

/// Category comparisons tested one-tailed (first greater than second).
pub const CATEGORY_TESTS: [(ChordCategory, ChordCategory); 4] = [
    (ChordCategory::Dominant7, ChordCategory::Major),
    (ChordCategory::Major, ChordCategory::Minor),
    (ChordCategory::Major7, ChordCategory::Major),
    (ChordCategory::Minor7, ChordCategory::Major),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryTest {
    pub greater: ChordCategory,
    pub lesser: ChordCategory,
    pub n_greater: usize,
    pub n_lesser: usize,
    pub u: f64,
    pub p: f64,
    pub method: TestMethod,
}

pub fn category_tests(chords: &[ChordValence]) -> Vec<CategoryTest> {
    let values =
        |cat: ChordCategory| -> Vec<f64> { chords.iter().filter(|c| c.category == cat).map(|c| c.valence).collect() };
    CATEGORY_TESTS
        .iter()
        .filter_map(|&(greater, lesser)| {
            let (a, b) = (values(greater), values(lesser));
            let mw = mann_whitney_one_tailed(&a, &b, Alternative::AGreater).ok()?;
            Some(CategoryTest {
                greater,
                lesser,
                n_greater: a.len(),
                n_lesser: b.len(),
                u: mw.u,
                p: mw.p,
                method: mw.method,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    /// Output file name to contents.
    pub files: BTreeMap<String, String>,
    pub diagnostics: ScoreDiagnostics,
}

fn allowed(chords: &[ChordValence], factor: Factor, filter: &LevelFilter) -> Vec<ChordValence> {
    chords
        .iter()
        .filter(|c| c.label(factor).is_some_and(|l| filter.allows(factor, l)))
        .cloned()
        .collect()
}

fn format_valence_by(chords: &[ChordValence], factor: Factor, filter: &LevelFilter) -> String {
    let mut out = String::from(
        "label\tn_chords\tchord_mean\tchord_ci95_low\tchord_ci95_high\tn_words\tword_mean\tword_ci95_low\tword_ci95_high\n",
    );
    for row in valence_by(chords, factor, |l| filter.allows(factor, l)) {
        let (c, w) = (&row.chord, &row.word);
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.label,
            c.n,
            fixed6(c.mean),
            fixed6(c.ci95_low),
            fixed6(c.ci95_high),
            w.n,
            fixed6(w.mean),
            fixed6(w.ci95_low),
            fixed6(w.ci95_high)
        );
    }
    out
}

fn format_major_minor(chords: &[ChordValence], factor: Factor, filter: &LevelFilter) -> String {
    let mut out = String::from("label\tn_major\tn_minor\tmean_major\tmean_minor\tdiff\tci95_low\tci95_high\n");
    for row in major_minor_diff(&allowed(chords, factor, filter), factor).rows.values() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.label,
            row.n_major,
            row.n_minor,
            fixed6(row.mean_major),
            fixed6(row.mean_minor),
            fixed6(row.diff),
            fixed6(row.ci95_low),
            fixed6(row.ci95_high)
        );
    }
    out
}

fn format_prevalence(chords: &[ChordValence], group_by: Option<Factor>) -> String {
    let mut rows: Vec<(String, &str, usize, f64)> = category_prevalence(chords, group_by)
        .into_iter()
        .map(|((label, cat), p)| (label, cat.name(), p.count, p.proportion))
        .collect();
    rows.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    let mut out = String::new();
    match group_by {
        Some(f) => {
            let _ = writeln!(out, "{f}\tcategory\tcount\tproportion");
        }
        None => out.push_str("category\tcount\tproportion\n"),
    }
    for (label, cat, count, proportion) in rows {
        if group_by.is_some() {
            let _ = write!(out, "{label}\t");
        }
        let _ = writeln!(out, "{cat}\t{count}\t{}", fixed6(proportion));
    }
    out
}

fn format_category_tests(tests: &[CategoryTest]) -> String {
    let mut out = String::from("greater\tlesser\tn_greater\tn_lesser\tu\tp\tmethod\n");
    for t in tests {
        let method = match t.method {
            TestMethod::Exact => "exact",
            TestMethod::Normal => "normal",
            TestMethod::Degenerate => "degenerate",
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:.6e}\t{method}",
            t.greater.name(),
            t.lesser.name(),
            t.n_greater,
            t.n_lesser,
            fixed6(t.u),
            t.p
        );
    }
    out
}

/// All summary tables for a scored chord table.
pub fn analyze(table: &ChordTable, lex: &Lexicon, opts: &LevelOptions) -> Analysis {
    let (chords, diagnostics) = score_chords(&table.rows, lex);
    let filter = level_filter(&table.rows, opts);
    let mut files = BTreeMap::new();
    for factor in Factor::ALL {
        files.insert(
            format!("valence_by_{factor}.tsv"),
            format_valence_by(&chords, factor, &filter),
        );
    }
    for factor in [Factor::Genre, Factor::Era, Factor::Region] {
        files.insert(
            format!("major_minor_by_{factor}.tsv"),
            format_major_minor(&chords, factor, &filter),
        );
    }
    files.insert("prevalence.tsv".to_string(), format_prevalence(&chords, None));
    files.insert(
        "prevalence_by_era.tsv".to_string(),
        format_prevalence(&allowed(&chords, Factor::Era, &filter), Some(Factor::Era)),
    );
    files.insert(
        "mann_whitney.tsv".to_string(),
        format_category_tests(&category_tests(&chords)),
    );
    Analysis { files, diagnostics }
}

/// Word shift of the rows labelled `label` under `factor` against the whole table.
pub fn shift_for_label(
    table: &ChordTable,
    lex: &Lexicon,
    factor: Factor,
    label: &str,
) -> Result<WordShift, PipelineError> {
    let reference = Bag::from_sentiment_words(table.rows.iter().map(|r| r.word.as_str()), lex);
    let comparison = Bag::from_sentiment_words(
        table
            .rows
            .iter()
            .filter(|r| r.label(factor) == Some(label))
            .map(|r| r.word.as_str()),
        lex,
    );
    Ok(word_shift(&comparison, &reference, lex)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelReport {
    pub variance: Vec<VarianceExplained>,
    /// Each model on its own complete rows.
    pub trace: Vec<AicStep>,
    /// Every model on the rows complete for all factors.
    pub trace_common: Vec<AicStep>,
}

pub fn model(chords: &[ChordValence], factors: &[Factor], filter: &LevelFilter) -> Result<ModelReport, PipelineError> {
    let factors: Vec<Factor> = factors.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let variance = factors
        .iter()
        .map(|&f| variance_explained(chords, f, filter))
        .collect::<Result<_, _>>()?;
    let trace = greedy_aic(chords, &factors, filter)?;
    let trace_common = greedy_aic(&common_rows(chords, &factors, filter), &factors, filter)?;
    Ok(ModelReport {
        variance,
        trace,
        trace_common,
    })
}

pub fn format_variance_explained(rows: &[VarianceExplained]) -> String {
    let mut out = String::from("factor\tr2\tn\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.factor, fixed6(r.r2), r.n);
    }
    out
}

pub fn format_aic_trace(steps: &[AicStep]) -> String {
    let mut out = String::from("step\tfactors\taic\tn\n");
    for s in steps {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            s.step,
            join_factors(&s.factors),
            fixed6(s.aic),
            s.n
        );
    }
    out
}
