//! Word valence lexicon with a neutral-band filter.
//!
//! Valences live on a 0.0 (saddest) to 9.0 (happiest) scale. Words whose
//! valence falls strictly inside the neutral band carry little signal and
//! are excluded from every score.

use std::collections::HashMap;
use std::fs;
use std::io::BufRead;
use std::path::Path;

use thiserror::Error;

pub const MIN_VALENCE: f64 = 0.0;
pub const MAX_VALENCE: f64 = 9.0;
pub const DEFAULT_BAND_LOW: f64 = 3.0;
pub const DEFAULT_BAND_HIGH: f64 = 7.0;

/// LabMT 1.0 English happiness scores, `word<TAB>valence`.
pub const BUNDLED_LABMT: &str = include_str!("../data/labmt_en.tsv");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon header lacks a {0:?} column")]
    MissingColumn(&'static str),
    #[error("line {line}: cannot parse valence {value:?}")]
    UnparseableValence { line: usize, value: String },
    #[error("line {line}: valence {value} outside [0, 9]")]
    OutOfRangeValence { line: usize, value: f64 },
    #[error("line {line}: missing field")]
    ShortRow { line: usize },
    #[error("invalid neutral band [{low}, {high}]")]
    InvalidBand { low: f64, high: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Open interval of valences treated as emotionally neutral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralBand {
    low: f64,
    high: f64,
}

impl NeutralBand {
    pub fn new(low: f64, high: f64) -> Result<Self, LexiconError> {
        if low >= high || !low.is_finite() || !high.is_finite() {
            return Err(LexiconError::InvalidBand { low, high });
        }
        Ok(Self { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    /// Boundary values are kept.
    pub fn keeps(&self, valence: f64) -> bool {
        valence <= self.low || valence >= self.high
    }
}

impl Default for NeutralBand {
    fn default() -> Self {
        Self {
            low: DEFAULT_BAND_LOW,
            high: DEFAULT_BAND_HIGH,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, f64>,
    band: NeutralBand,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValenceScore {
    pub mean: f64,
    pub n_words: usize,
}

impl Lexicon {
    pub fn from_entries<I, S>(entries: I, band: NeutralBand) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = HashMap::new();
        for (i, (word, value)) in entries.into_iter().enumerate() {
            check_range(value, i + 1)?;
            map.insert(word.into(), value);
        }
        Ok(Self { entries: map, band })
    }

    /// Parses a TSV with a header naming `word` and `valence` columns.
    pub fn from_reader<R: BufRead>(reader: R, band: NeutralBand) -> Result<Self, LexiconError> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(h) => h?,
            None => return Err(LexiconError::MissingColumn("word")),
        };
        let columns: Vec<&str> = header.trim_end_matches('\r').split('\t').map(str::trim).collect();
        let word_col = columns
            .iter()
            .position(|c| *c == "word")
            .ok_or(LexiconError::MissingColumn("word"))?;
        let valence_col = columns
            .iter()
            .position(|c| *c == "valence")
            .ok_or(LexiconError::MissingColumn("valence"))?;

        let mut entries = HashMap::new();
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let line_no = idx + 2;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let (Some(word), Some(raw)) = (fields.get(word_col), fields.get(valence_col)) else {
                return Err(LexiconError::ShortRow { line: line_no });
            };
            let value: f64 = raw.trim().parse().map_err(|_| LexiconError::UnparseableValence {
                line: line_no,
                value: raw.to_string(),
            })?;
            check_range(value, line_no)?;
            if entries.insert(word.trim().to_string(), value).is_some() {
                log::warn!("lexicon line {line_no}: duplicate word {word:?}, keeping the later value");
            }
        }
        if entries.is_empty() {
            log::warn!("lexicon has no entries");
        }
        Ok(Self { entries, band })
    }

    pub fn bundled(band: NeutralBand) -> Self {
        Self::from_reader(BUNDLED_LABMT.as_bytes(), band).expect("bundled lexicon is well formed")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn band(&self) -> NeutralBand {
        self.band
    }

    pub fn with_band(mut self, band: NeutralBand) -> Self {
        self.band = band;
        self
    }

    pub fn valence(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    /// Valence of `word` if it is in the lexicon and outside the neutral band.
    pub fn sentiment_valence(&self, word: &str) -> Option<f64> {
        self.valence(word).filter(|v| self.band.keeps(*v))
    }

    pub fn sentiment_words<'w, S: AsRef<str>>(&self, words: &'w [S]) -> Vec<(&'w str, f64)> {
        words
            .iter()
            .filter_map(|w| {
                let w = w.as_ref();
                self.sentiment_valence(w).map(|v| (w, v))
            })
            .collect()
    }

    /// Mean over every occurrence of a sentiment word. `None` when no word survives.
    pub fn pooled_mean_valence<S: AsRef<str>>(&self, words: &[S]) -> Option<ValenceScore> {
        let (sum, n) = words
            .iter()
            .filter_map(|w| self.sentiment_valence(w.as_ref()))
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        (n > 0).then(|| ValenceScore {
            mean: sum / n as f64,
            n_words: n,
        })
    }
}

fn check_range(value: f64, line: usize) -> Result<(), LexiconError> {
    if (MIN_VALENCE..=MAX_VALENCE).contains(&value) {
        Ok(())
    } else {
        Err(LexiconError::OutOfRangeValence { line, value })
    }
}

pub fn load_lexicon(path: &Path, band: NeutralBand) -> Result<Lexicon, LexiconError> {
    let file = fs::File::open(path)?;
    Lexicon::from_reader(std::io::BufReader::new(file), band)
}
