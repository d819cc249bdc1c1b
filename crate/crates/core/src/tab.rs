//! Tablature text to chord-lyric events.
//!
//! A tab body is scanned line by line. Chord lines directly above lyric
//! lines are aligned column by column: a lyric word belongs to the nearest
//! chord at or left of its first character, unless a chord column falls
//! strictly inside the word, in which case the whole word goes to that chord.
//! Columns count Unicode scalar values, not bytes.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::chord::{parse_chord, ChordSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineKind {
    ChordLine,
    LyricLine,
    TabStaff,
    Blank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabDocument {
    pub song_id: String,
    pub title: String,
    pub artist: String,
    pub rating: f64,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordLyricEvent {
    pub song_id: String,
    pub chord: ChordSymbol,
    pub words: Vec<String>,
    pub line_index: usize,
    pub column: usize,
}

/// A whitespace-delimited token with its character span `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
}

pub fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut current: Option<(usize, usize)> = None; // (byte start, char start)
    let mut chars = 0;
    for (byte, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some((b, s)) = current.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    start: s,
                    end: chars,
                });
            }
        } else if current.is_none() {
            current = Some((byte, chars));
        }
        chars += 1;
    }
    if let Some((b, s)) = current {
        tokens.push(Token {
            text: &line[b..],
            start: s,
            end: chars,
        });
    }
    tokens
}

const STAFF_CHARS: [char; 7] = ['-', '|', 'h', 'p', '/', '\\', '~'];

fn is_tab_staff(line: &str) -> bool {
    let trimmed = line.trim_start();
    let mut chars = trimmed.chars();
    let after_letter = match chars.next() {
        Some('|') => true,
        Some(c) if c.is_ascii_alphabetic() => {
            let rest = chars.as_str();
            rest.starts_with('|') || (rest.starts_with(['#', 'b']) && rest[1..].starts_with('|'))
        }
        _ => false,
    };
    if !after_letter {
        return false;
    }
    let (mut staff, mut total) = (0usize, 0usize);
    for c in trimmed.chars().filter(|c| !c.is_whitespace()) {
        total += 1;
        if c.is_ascii_digit() || STAFF_CHARS.contains(&c) {
            staff += 1;
        }
    }
    2 * staff >= total
}

/// `[Chorus]`, `[Verse 2]` and similar section markers.
pub fn is_section_header(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 2 && t.starts_with('[') && t.ends_with(']')
}

pub fn classify_line(line: &str) -> LineKind {
    if line.trim().is_empty() {
        return LineKind::Blank;
    }
    if is_tab_staff(line) {
        return LineKind::TabStaff;
    }
    let tokens = tokenize(line);
    let chords = tokens.iter().filter(|t| parse_chord(t.text).is_ok()).count();
    if !tokens.is_empty() && 2 * chords > tokens.len() {
        LineKind::ChordLine
    } else {
        LineKind::LyricLine
    }
}

const EDGE_PUNCTUATION: [char; 12] = ['.', ',', '!', '?', ';', ':', '"', '\'', '(', ')', '[', ']'];

/// Lowercases a lyric token and strips punctuation at its edges.
/// Returns `None` when nothing is left.
pub fn normalize_word(token: &str) -> Option<String> {
    let stripped = token.trim_matches(|c| EDGE_PUNCTUATION.contains(&c));
    (!stripped.is_empty()).then(|| stripped.to_lowercase())
}

/// A chord placed on a chord line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedChord {
    pub chord: ChordSymbol,
    pub column: usize,
}

/// Words attached to one chord of a chord line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordWords {
    pub chord: ChordSymbol,
    pub column: usize,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    /// One entry per parseable chord on the chord line, in column order.
    pub chords: Vec<ChordWords>,
    /// Words left of the first chord, attached to the carried chord.
    pub carried: Vec<String>,
    pub new_carry: Option<ChordSymbol>,
    /// Chord-line tokens that did not parse as chords.
    pub unparsed_tokens: usize,
}

pub fn place_chords(chord_line: &str) -> (Vec<PlacedChord>, usize) {
    let mut unparsed = 0;
    let placed = tokenize(chord_line)
        .into_iter()
        .filter_map(|t| match parse_chord(t.text) {
            Ok(chord) => Some(PlacedChord { chord, column: t.start }),
            Err(_) => {
                unparsed += 1;
                None
            }
        })
        .collect();
    (placed, unparsed)
}

/// Index of the chord a word spanning `[start, end)` belongs to, if any.
fn owner(chords: &[PlacedChord], start: usize, end: usize) -> Option<usize> {
    if let Some(inside) = chords.iter().position(|c| start < c.column && c.column < end) {
        return Some(inside);
    }
    chords.iter().rposition(|c| c.column <= start)
}

/// Aligns a lyric line under a chord line.
///
/// Words that start before the first chord go to `carry` when one is given
/// and are dropped otherwise.
pub fn associate(chord_line: &str, lyric_line: &str, carry: Option<&ChordSymbol>) -> Association {
    let (placed, unparsed_tokens) = place_chords(chord_line);
    let mut chords: Vec<ChordWords> = placed
        .iter()
        .map(|p| ChordWords {
            chord: p.chord.clone(),
            column: p.column,
            words: Vec::new(),
        })
        .collect();
    let mut carried = Vec::new();

    for token in tokenize(lyric_line) {
        let Some(word) = normalize_word(token.text) else {
            continue;
        };
        match owner(&placed, token.start, token.end) {
            Some(i) => chords[i].words.push(word),
            None if carry.is_some() => carried.push(word),
            None => {}
        }
    }

    let new_carry = placed.last().map(|p| p.chord.clone()).or_else(|| carry.cloned());
    Association {
        chords,
        carried,
        new_carry,
        unparsed_tokens,
    }
}

/// Counters for everything a parse threw away.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabDiagnostics {
    pub chord_lines: usize,
    pub lyric_lines: usize,
    pub staff_lines: usize,
    pub unparsed_chord_tokens: usize,
    /// Parsed chords that ended with no lyric words.
    pub chords_without_lyrics: usize,
}

impl TabDiagnostics {
    pub fn merge(&mut self, other: &TabDiagnostics) {
        self.chord_lines += other.chord_lines;
        self.lyric_lines += other.lyric_lines;
        self.staff_lines += other.staff_lines;
        self.unparsed_chord_tokens += other.unparsed_chord_tokens;
        self.chords_without_lyrics += other.chords_without_lyrics;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTab {
    pub events: Vec<ChordLyricEvent>,
    /// Every normalised word on every lyric line, associated or not.
    pub lyric_words: Vec<String>,
    pub diagnostics: TabDiagnostics,
}

struct Carry {
    chord: ChordSymbol,
    /// Index into the pending event list of the chord being carried.
    event: usize,
}

/// Extracts chord-lyric events from a tab body.
pub fn parse_tab(doc: &TabDocument) -> ParsedTab {
    let lines: Vec<&str> = doc.body.lines().collect();
    let mut pending: Vec<ChordLyricEvent> = Vec::new();
    let mut lyric_words = Vec::new();
    let mut diagnostics = TabDiagnostics::default();
    let mut carry: Option<Carry> = None;

    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        if is_section_header(line) {
            carry = None;
            i += 1;
            continue;
        }
        match classify_line(line) {
            LineKind::Blank => carry = None,
            LineKind::TabStaff => {
                diagnostics.staff_lines += 1;
                carry = None;
            }
            LineKind::LyricLine => {
                // A lyric line without a chord line above continues the carried chord.
                diagnostics.lyric_lines += 1;
                let assoc = associate("", line, carry.as_ref().map(|c| &c.chord));
                lyric_words.extend(lyric_tokens(line));
                if let Some(c) = &carry {
                    pending[c.event].words.extend(assoc.carried);
                }
            }
            LineKind::ChordLine => {
                diagnostics.chord_lines += 1;
                let next = lines.get(i + 1).copied();
                let lyric = next.filter(|l| !is_section_header(l) && classify_line(l) == LineKind::LyricLine);
                let assoc = associate(line, lyric.unwrap_or(""), carry.as_ref().map(|c| &c.chord));
                diagnostics.unparsed_chord_tokens += assoc.unparsed_tokens;
                if let Some(c) = &carry {
                    pending[c.event].words.extend(assoc.carried);
                }
                let had_chords = !assoc.chords.is_empty();
                for cw in assoc.chords {
                    pending.push(ChordLyricEvent {
                        song_id: doc.song_id.clone(),
                        chord: cw.chord,
                        words: cw.words,
                        line_index: i,
                        column: cw.column,
                    });
                }
                if let (true, Some(chord)) = (had_chords, assoc.new_carry) {
                    carry = Some(Carry {
                        chord,
                        event: pending.len() - 1,
                    });
                }
                if let Some(lyric) = lyric {
                    diagnostics.lyric_lines += 1;
                    lyric_words.extend(lyric_tokens(lyric));
                    i += 1;
                }
            }
        }
        i += 1;
    }

    let before = pending.len();
    pending.retain(|e| !e.words.is_empty());
    diagnostics.chords_without_lyrics = before - pending.len();
    ParsedTab {
        events: pending,
        lyric_words,
        diagnostics,
    }
}

fn lyric_tokens(line: &str) -> impl Iterator<Item = String> + '_ {
    tokenize(line).into_iter().filter_map(|t| normalize_word(t.text))
}

/// A song is English unless fewer than half of its words are in `wordlist`.
pub fn is_english<S: AsRef<str>>(words: &[S], wordlist: &HashSet<String>) -> bool {
    if words.is_empty() {
        return false;
    }
    let known = words
        .iter()
        .filter(|w| wordlist.contains(&w.as_ref().to_lowercase()))
        .count();
    2 * known >= words.len()
}

/// Lowercase, alphanumeric-only, single-spaced form of a title or artist.
pub fn normalize_key(text: &str) -> String {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Keeps the best-rated tab per (artist, title); ties go to the smallest
/// song id. Output is ordered by song id.
pub fn dedupe(docs: Vec<TabDocument>) -> Vec<TabDocument> {
    let mut best: BTreeMap<(String, String), TabDocument> = BTreeMap::new();
    for doc in docs {
        let key = (normalize_key(&doc.artist), normalize_key(&doc.title));
        match best.get(&key) {
            Some(kept) if kept.rating > doc.rating || (kept.rating == doc.rating && kept.song_id <= doc.song_id) => {}
            _ => {
                best.insert(key, doc);
            }
        }
    }
    let mut kept: Vec<TabDocument> = best.into_values().collect();
    kept.sort_by(|a, b| a.song_id.cmp(&b.song_id));
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(body: &str) -> TabDocument {
        TabDocument {
            song_id: "s1".into(),
            title: "t".into(),
            artist: "a".into(),
            rating: 1.0,
            body: body.into(),
        }
    }

    fn words_of(assoc: &Association) -> Vec<(String, Vec<String>)> {
        assoc
            .chords
            .iter()
            .map(|c| (c.chord.raw.clone(), c.words.clone()))
            .collect()
    }

    // Independent reference: walk every lyric character, record which chord
    // "covers" it, then give each word to the chord covering any interior
    // column, else the one covering its first character.
    fn reference_assign(chord_line: &str, lyric_line: &str) -> Vec<(String, Vec<String>)> {
        let chord_cols: Vec<(usize, String)> = chord_line
            .chars()
            .enumerate()
            .filter(|&(i, c)| !c.is_whitespace() && (i == 0 || chord_line.chars().nth(i - 1).unwrap().is_whitespace()))
            .map(|(i, _)| {
                let tok: String = chord_line.chars().skip(i).take_while(|c| !c.is_whitespace()).collect();
                (i, tok)
            })
            .collect();
        let mut out: Vec<(String, Vec<String>)> = chord_cols.iter().map(|(_, t)| (t.clone(), Vec::new())).collect();
        let chars: Vec<char> = lyric_line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect::<String>().to_lowercase();
            let mut target = None;
            for (k, (col, _)) in chord_cols.iter().enumerate() {
                if *col > start && *col < i {
                    target = Some(k);
                    break;
                }
            }
            if target.is_none() {
                for (k, (col, _)) in chord_cols.iter().enumerate() {
                    if *col <= start {
                        target = Some(k);
                    }
                }
            }
            if let Some(k) = target {
                out[k].1.push(word);
            }
        }
        out
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_line("   C         Am"), LineKind::ChordLine);
        assert_eq!(classify_line("the minor fall the major lift"), LineKind::LyricLine);
        assert_eq!(classify_line("e|--0--2--3--|"), LineKind::TabStaff);
        assert_eq!(classify_line("|--0--2--3--|"), LineKind::TabStaff);
        assert_eq!(classify_line("   \t "), LineKind::Blank);
        assert_eq!(classify_line("G  D  (x2)"), LineKind::ChordLine);
        assert_eq!(classify_line("G  (x2)"), LineKind::LyricLine);
        assert_eq!(classify_line("A love so true"), LineKind::LyricLine);
        assert_eq!(classify_line("Am | F | C | G"), LineKind::ChordLine);
    }

    #[test]
    fn column_alignment_example() {
        let chords = "C           Am";
        let lyric = "well I heard there was";
        let assoc = associate(chords, lyric, None);
        let expected = vec![
            ("C".to_string(), vec!["well".to_string(), "i".into(), "heard".into()]),
            ("Am".to_string(), vec!["there".to_string(), "was".into()]),
        ];
        assert_eq!(words_of(&assoc), expected);
        assert_eq!(reference_assign(chords, lyric), expected);
        assert_eq!(assoc.new_carry.unwrap().raw, "Am");
    }

    #[test]
    fn mid_word_chord_takes_whole_word() {
        let assoc = associate("C  G", "secret chord", None);
        assert_eq!(
            words_of(&assoc),
            vec![
                ("C".into(), vec![]),
                ("G".into(), vec!["secret".into(), "chord".into()])
            ]
        );
    }

    #[test]
    fn leading_words_use_carry_or_drop() {
        let assoc = associate("     G", "and it pleased", None);
        assert!(assoc.carried.is_empty());
        // G at column 5 sits inside "it" (4..6), so "it" belongs to G
        assert_eq!(
            words_of(&assoc),
            vec![("G".into(), vec!["it".into(), "pleased".into()])]
        );

        let prev = parse_chord("Am").unwrap();
        let assoc = associate("      G", "and it pleased", Some(&prev));
        assert_eq!(assoc.carried, vec!["and".to_string(), "it".into()]);
    }

    #[test]
    fn columns_are_character_offsets() {
        // "é" is two bytes; the chord sits over "fall" in character terms.
        let assoc = associate("      Am", "café fall", None);
        assert_eq!(words_of(&assoc), vec![("Am".into(), vec!["fall".into()])]);
    }

    #[test]
    fn punctuation_normalization() {
        assert_eq!(normalize_word("\"Hello,"), Some("hello".into()));
        assert_eq!(normalize_word("don't"), Some("don't".into()));
        assert_eq!(normalize_word("(oh!)"), Some("oh".into()));
        assert_eq!(normalize_word("..."), None);
        assert_eq!(normalize_word("rock-n-roll"), Some("rock-n-roll".into()));
    }

    #[test]
    fn parse_verse() {
        let body = "[Verse]\nC           Am\nwell I heard there was\n    F    G\nthe minor fall the major lift\n";
        let parsed = parse_tab(&doc(body));
        let rows: Vec<(String, Vec<String>)> = parsed
            .events
            .iter()
            .map(|e| (e.chord.raw.clone(), e.words.clone()))
            .collect();
        assert_eq!(
            rows,
            vec![
                ("C".into(), vec!["well".into(), "i".into(), "heard".into()]),
                // "the" precedes F's column and carries over to Am
                ("Am".into(), vec!["there".into(), "was".into(), "the".into()]),
                ("F".into(), vec!["minor".into()]),
                (
                    "G".into(),
                    vec!["fall".into(), "the".into(), "major".into(), "lift".into()]
                ),
            ]
        );
        assert_eq!(parsed.events[2].line_index, 3);
        assert_eq!(parsed.events[2].column, 4);
        assert_eq!(parsed.lyric_words.len(), 11);
    }

    #[test]
    fn staff_only_body_is_empty() {
        let parsed = parse_tab(&doc("e|--0--|\nB|--1--|\nG|--0--|\n"));
        assert!(parsed.events.is_empty());
        assert_eq!(parsed.diagnostics.staff_lines, 3);
    }

    #[test]
    fn consecutive_chord_lines_drop_first() {
        let parsed = parse_tab(&doc("C  G\nAm\nsing it loud\n"));
        let chords: Vec<&str> = parsed.events.iter().map(|e| e.chord.raw.as_str()).collect();
        assert_eq!(chords, vec!["Am"]);
        assert_eq!(parsed.diagnostics.chords_without_lyrics, 2);
    }

    #[test]
    fn carry_resets_on_blank_and_header() {
        let parsed = parse_tab(&doc("C\nla la\n\n  love\n[Chorus]\n  you\n"));
        assert_eq!(parsed.events.len(), 1);
        assert_eq!(parsed.events[0].words, vec!["la".to_string(), "la".into()]);

        let parsed = parse_tab(&doc("C\nla la\nmore words here\n"));
        assert_eq!(parsed.events[0].words.len(), 5);
    }

    #[test]
    fn english_threshold() {
        let list: HashSet<String> = ["the", "love"].iter().map(|s| s.to_string()).collect();
        assert!(is_english(&["the", "love", "xx", "yy"], &list));
        assert!(!is_english(&["the", "xx", "yy"], &list));
        assert!(!is_english::<&str>(&[], &list));
        assert!(is_english(&["the", "love"], &list));
    }

    fn tab(id: &str, artist: &str, title: &str, rating: f64) -> TabDocument {
        TabDocument {
            song_id: id.into(),
            title: title.into(),
            artist: artist.into(),
            rating,
            body: "C\nla\n".into(),
        }
    }

    #[test]
    fn dedupe_keeps_best_rating() {
        let out = dedupe(vec![tab("x", "Band", "Song", 3.0), tab("y", "band ", "SONG!", 4.5)]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].song_id, "y");

        let out = dedupe(vec![tab("b", "A", "S", 4.0), tab("a", "A", "S", 4.0)]);
        assert_eq!(out[0].song_id, "a");

        let single = vec![tab("z", "A", "S", 1.0)];
        assert_eq!(dedupe(single.clone()), single);
    }

    proptest! {
        #[test]
        fn alignment_matches_reference(
            chord_gaps in prop::collection::vec((1usize..6, prop::sample::select(vec!["C", "Am", "G7", "F#m", "Dsus4"])), 1..5),
            lead in 0usize..4,
            words in prop::collection::vec(("[a-z]{1,7}", 1usize..3), 1..8),
        ) {
            let mut chord_line = " ".repeat(lead);
            for (gap, chord) in &chord_gaps {
                chord_line.push_str(chord);
                chord_line.push_str(&" ".repeat(*gap));
            }
            let lyric: String = words.iter().map(|(w, gap)| format!("{w}{}", " ".repeat(*gap))).collect();
            let assoc = associate(&chord_line, &lyric, None);
            prop_assert_eq!(words_of(&assoc), reference_assign(&chord_line, &lyric));
        }

        #[test]
        fn alignment_is_shift_invariant(
            chord_line in "( {0,3}(C|Am|G|Em7|D)){1,4}",
            lyric in "( {0,3}[a-z]{1,6}){1,8}",
            shift in 0usize..6,
        ) {
            let pad = " ".repeat(shift);
            let a = associate(&chord_line, &lyric, None);
            let b = associate(&format!("{pad}{chord_line}"), &format!("{pad}{lyric}"), None);
            prop_assert_eq!(words_of(&a), words_of(&b));
        }

        #[test]
        fn words_attach_at_most_once(
            chord_line in "( {0,3}(C|Am|G|Em7|D)){1,4}",
            lyric in "( {0,3}[a-z]{1,6}){1,8}",
        ) {
            let carry = parse_chord("E").unwrap();
            let assoc = associate(&chord_line, &lyric, Some(&carry));
            let attached: usize = assoc.chords.iter().map(|c| c.words.len()).sum::<usize>() + assoc.carried.len();
            prop_assert_eq!(attached, tokenize(&lyric).len());
            let width = chord_line.chars().count();
            prop_assert!(assoc.chords.iter().all(|c| c.column < width));
        }

        #[test]
        fn parse_is_deterministic(body in "((C|Am|G|la|love|e\\|--0--\\||) {0,3}){0,6}(\n((C|Am|G|la|love|) {0,3}){0,6}){0,6}") {
            let a = parse_tab(&doc(&body));
            let b = parse_tab(&doc(&body));
            prop_assert_eq!(a, b);
        }
    }
}
