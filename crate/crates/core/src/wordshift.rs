//! Word shift decomposition of a valence difference between two corpora.
//!
//! Word `i` contributes `(h_i - h_ref) * (p_i - p_i_ref)` to the gap
//! `h_comp - h_ref`, where `h_i` is its lexicon valence and `p_i`,
//! `p_i_ref` its normalised frequencies in the comparison and reference
//! bags. The contributions sum to the gap exactly, so dividing by
//! `|h_comp - h_ref|` expresses them as percentages summing to ±100.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::lexicon::Lexicon;
use crate::pipeline::fixed6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordShiftError {
    #[error("bag of words is empty")]
    EmptyBag,
    #[error("word {0:?} is not in the lexicon")]
    UnknownWord(String),
}

/// Word counts of one corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bag {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl Bag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, word: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(word.to_string()).or_default() += n;
        self.total += n;
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Counts only words outside the lexicon's neutral band.
    pub fn from_sentiment_words<'a, I>(words: I, lex: &Lexicon) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bag = Bag::new();
        for w in words {
            if lex.sentiment_valence(w).is_some() {
                bag.add(w, 1);
            }
        }
        bag
    }

    /// Count-weighted mean valence.
    pub fn mean_valence(&self, lex: &Lexicon) -> Result<f64, WordShiftError> {
        if self.is_empty() {
            return Err(WordShiftError::EmptyBag);
        }
        let mut sum = 0.0;
        for (w, &n) in &self.counts {
            let h = lex.valence(w).ok_or_else(|| WordShiftError::UnknownWord(w.clone()))?;
            sum += h * n as f64;
        }
        Ok(sum / self.total as f64)
    }
}

impl<'a> FromIterator<&'a str> for Bag {
    fn from_iter<T: IntoIterator<Item = &'a str>>(iter: T) -> Self {
        let mut bag = Bag::new();
        for w in iter {
            bag.add(w, 1);
        }
        bag
    }
}

pub fn normalized_freqs(bag: &Bag) -> Result<BTreeMap<String, f64>, WordShiftError> {
    if bag.is_empty() {
        return Err(WordShiftError::EmptyBag);
    }
    let total = bag.total as f64;
    Ok(bag.counts.iter().map(|(w, &n)| (w.clone(), n as f64 / total)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValenceSign {
    Plus,
    Minus,
}

impl ValenceSign {
    fn of(term: f64) -> Self {
        if term < 0.0 {
            Self::Minus
        } else {
            Self::Plus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Plus => "+",
            Self::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrevalenceSign {
    Up,
    Down,
}

impl PrevalenceSign {
    fn of(term: f64) -> Self {
        if term < 0.0 {
            Self::Down
        } else {
            Self::Up
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Up => "↑",
            Self::Down => "↓",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordShiftEntry {
    pub word: String,
    pub h_i: f64,
    /// `h_i - h_ref`
    pub valence_term: f64,
    /// `p_i - p_i_ref`
    pub prevalence_term: f64,
    pub valence_sign: ValenceSign,
    pub prevalence_sign: PrevalenceSign,
    /// Percentage of `|h_comp - h_ref|`, or the raw product when the two
    /// means coincide (see [`WordShift::percentages`]).
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordShift {
    pub h_ref: f64,
    pub h_comp: f64,
    /// False when `h_comp == h_ref`: percentages are undefined and each
    /// entry holds the raw product instead.
    pub percentages: bool,
    pub entries: Vec<WordShiftEntry>,
}

/// Per-word contributions of `comparison` relative to `reference`, sorted
/// by absolute contribution (ties by word). Words in either bag take part;
/// a word missing from one bag has frequency zero there.
pub fn word_shift(comparison: &Bag, reference: &Bag, lex: &Lexicon) -> Result<WordShift, WordShiftError> {
    let h_ref = reference.mean_valence(lex)?;
    let h_comp = comparison.mean_valence(lex)?;
    let p_comp = normalized_freqs(comparison)?;
    let p_ref = normalized_freqs(reference)?;
    let gap = (h_comp - h_ref).abs();
    let percentages = gap != 0.0;
    if !percentages {
        log::warn!("comparison and reference means coincide; reporting raw word shift products");
    }

    let words: BTreeSet<&String> = p_comp.keys().chain(p_ref.keys()).collect();
    let mut entries: Vec<WordShiftEntry> = words
        .into_iter()
        .map(|w| {
            let h_i = lex.valence(w).expect("words were checked against the lexicon");
            let valence_term = h_i - h_ref;
            let prevalence_term = p_comp.get(w).copied().unwrap_or(0.0) - p_ref.get(w).copied().unwrap_or(0.0);
            let product = valence_term * prevalence_term;
            WordShiftEntry {
                word: w.clone(),
                h_i,
                valence_term,
                prevalence_term,
                valence_sign: ValenceSign::of(valence_term),
                prevalence_sign: PrevalenceSign::of(prevalence_term),
                contribution: if percentages { 100.0 * product / gap } else { product },
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.contribution
            .abs()
            .total_cmp(&a.contribution.abs())
            .then_with(|| a.word.cmp(&b.word))
    });
    Ok(WordShift {
        h_ref,
        h_comp,
        percentages,
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftFormat {
    Tsv,
    Svg,
}

pub const SHIFT_TSV_HEADER: &str = "word\th_i\tvalence_sign\tprevalence_sign\tcontribution_pct";

/// Renders the first `n` entries, in the given order.
pub fn render_shift(entries: &[WordShiftEntry], n: usize, format: ShiftFormat) -> String {
    let shown = &entries[..n.min(entries.len())];
    match format {
        ShiftFormat::Tsv => render_tsv(shown),
        ShiftFormat::Svg => render_svg(shown),
    }
}

fn render_tsv(entries: &[WordShiftEntry]) -> String {
    let mut out = String::new();
    out.push_str(SHIFT_TSV_HEADER);
    out.push('\n');
    for e in entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            e.word,
            fixed6(e.h_i),
            e.valence_sign.symbol(),
            e.prevalence_sign.symbol(),
            fixed6(e.contribution)
        );
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

const ROW_HEIGHT: f64 = 18.0;
const HALF_WIDTH: f64 = 220.0;
const LABEL_GAP: f64 = 6.0;

fn render_svg(entries: &[WordShiftEntry]) -> String {
    let max = entries.iter().map(|e| e.contribution.abs()).fold(0.0, f64::max);
    let scale = if max > 0.0 { HALF_WIDTH / max } else { 0.0 };
    let width = 2.0 * HALF_WIDTH + 240.0;
    let height = ROW_HEIGHT * entries.len() as f64 + 2.0 * ROW_HEIGHT;
    let center = width / 2.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{center:.1}" y1="{:.1}" x2="{center:.1}" y2="{:.1}" stroke="black"/>"#,
        ROW_HEIGHT / 2.0,
        height - ROW_HEIGHT / 2.0
    );
    for (i, e) in entries.iter().enumerate() {
        let y = ROW_HEIGHT * (i as f64 + 1.0);
        let len = e.contribution.abs() * scale;
        let x = if e.contribution < 0.0 { center - len } else { center };
        let color = match e.valence_sign {
            ValenceSign::Plus => "#f28e2b",
            ValenceSign::Minus => "#4e79a7",
        };
        let label = format!(
            "{} {}{}",
            xml_escape(&e.word),
            e.valence_sign.symbol(),
            e.prevalence_sign.symbol()
        );
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{:.2}" width="{len:.2}" height="{:.2}" fill="{color}"><title>{} {:.6}%</title></rect>"#,
            y + 2.0,
            ROW_HEIGHT - 4.0,
            xml_escape(&e.word),
            e.contribution
        );
        let (tx, anchor) = if e.contribution < 0.0 {
            (center - len - LABEL_GAP, "end")
        } else {
            (center + len + LABEL_GAP, "start")
        };
        let _ = writeln!(
            out,
            r#"<text x="{tx:.2}" y="{:.2}" text-anchor="{anchor}">{label}</text>"#,
            y + ROW_HEIGHT - 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}
