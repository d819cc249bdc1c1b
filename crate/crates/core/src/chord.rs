//! Chord-symbol grammar and classification into chord categories.
//!
//! A chord token is a root letter (`A`-`G`, uppercase), an optional
//! accidental (`#` or `b`), a quality suffix and an optional slash bass.
//! Trailing asterisks (tab performance marks) are ignored, and the Unicode
//! signs `♯`/`♭` are accepted as spellings of `#`/`b`.
//!
//! The quality suffix must be built from recognised chord vocabulary
//! (`m`, `maj`, `sus`, `add`, digits, alterations, ...). This keeps
//! capitalised lyric words such as `Baby` or `Dance` from passing as chords.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("empty chord token")]
    EmptyToken,
    #[error("invalid root in chord token {0:?}")]
    InvalidRoot(String),
    #[error("unrecognised quality suffix {quality:?} in chord token {token:?}")]
    InvalidQuality { token: String, quality: String },
    #[error("invalid bass note after '/' in chord token {0:?}")]
    InvalidBass(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoteLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl NoteLetter {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c {
            'A' => Self::A,
            'B' => Self::B,
            'C' => Self::C,
            'D' => Self::D,
            'E' => Self::E,
            'F' => Self::F,
            'G' => Self::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Self::A => 'A',
            Self::B => 'B',
            Self::C => 'C',
            Self::D => 'D',
            Self::E => 'E',
            Self::F => 'F',
            Self::G => 'G',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Accidental {
    Natural,
    Sharp,
    Flat,
}

impl Accidental {
    fn from_char(c: char) -> Option<Self> {
        match c {
            '#' => Some(Self::Sharp),
            'b' => Some(Self::Flat),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Natural => "",
            Self::Sharp => "#",
            Self::Flat => "b",
        }
    }
}

/// A note name: letter plus accidental. Enharmonic spellings stay distinct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NoteName {
    pub letter: NoteLetter,
    pub accidental: Accidental,
}

impl fmt::Display for NoteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.accidental.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChordCategory {
    Major,
    Minor,
    Major7,
    Minor7,
    Dominant7,
    Power,
    Augmented,
    Diminished,
    Other,
}

impl ChordCategory {
    pub const ALL: [ChordCategory; 9] = [
        Self::Major,
        Self::Minor,
        Self::Major7,
        Self::Minor7,
        Self::Dominant7,
        Self::Power,
        Self::Augmented,
        Self::Diminished,
        Self::Other,
    ];

    /// Categories kept for valence modelling. Power, augmented, diminished
    /// and other chords are reported descriptively only.
    pub const ANALYZED: [ChordCategory; 5] = [Self::Major, Self::Minor, Self::Major7, Self::Minor7, Self::Dominant7];

    pub fn name(self) -> &'static str {
        match self {
            Self::Major => "Major",
            Self::Minor => "Minor",
            Self::Major7 => "Major7",
            Self::Minor7 => "Minor7",
            Self::Dominant7 => "Dominant7",
            Self::Power => "Power",
            Self::Augmented => "Augmented",
            Self::Diminished => "Diminished",
            Self::Other => "Other",
        }
    }
}

impl fmt::Display for ChordCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChordCategory {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown chord category {s:?}"))
    }
}

/// Case-sensitive suffix table. Anything not listed is `Other`.
pub fn classify_quality(quality: &str) -> ChordCategory {
    match quality {
        "" | "M" | "maj" => ChordCategory::Major,
        "m" | "min" => ChordCategory::Minor,
        "M7" | "maj7" => ChordCategory::Major7,
        "m7" | "min7" => ChordCategory::Minor7,
        "7" | "dom7" => ChordCategory::Dominant7,
        "5" => ChordCategory::Power,
        "aug" | "+" => ChordCategory::Augmented,
        "dim" => ChordCategory::Diminished,
        _ => ChordCategory::Other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChordSymbol {
    /// The token as it appeared in the tab, asterisks included.
    pub raw: String,
    pub root: NoteName,
    pub quality: String,
    pub bass: Option<NoteName>,
    pub category: ChordCategory,
}

impl ChordSymbol {
    /// Canonical spelling: root, accidental, quality and optional `/bass`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ChordSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.root, self.quality)?;
        if let Some(bass) = self.bass {
            write!(f, "/{bass}")?;
        }
        Ok(())
    }
}

impl FromStr for ChordSymbol {
    type Err = ChordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_chord(s)
    }
}

// Longest entries first so greedy matching prefers `maj` over `m`.
const QUALITY_WORDS: [&str; 13] = [
    "maj", "min", "dim", "aug", "sus", "add", "dom", "m", "M", "+", "-", "o", "°",
];
const QUALITY_CHARS: [char; 6] = ['#', 'b', '(', ')', 'ø', '^'];

fn is_valid_quality(quality: &str) -> bool {
    let mut rest = quality;
    while let Some(c) = rest.chars().next() {
        if c.is_ascii_digit() || QUALITY_CHARS.contains(&c) {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        match QUALITY_WORDS.iter().find(|w| rest.starts_with(*w)) {
            Some(w) => rest = &rest[w.len()..],
            None => return false,
        }
    }
    true
}

fn parse_note(text: &str) -> Option<(NoteName, &str)> {
    let mut chars = text.chars();
    let letter = NoteLetter::from_char(chars.next()?)?;
    let rest = chars.as_str();
    match rest.chars().next().and_then(Accidental::from_char) {
        Some(accidental) => Some((NoteName { letter, accidental }, &rest[1..])),
        None => Some((
            NoteName {
                letter,
                accidental: Accidental::Natural,
            },
            rest,
        )),
    }
}

/// Parses a whitespace-free chord token.
pub fn parse_chord(token: &str) -> Result<ChordSymbol, ChordError> {
    let normalized: String = token
        .chars()
        .map(|c| match c {
            '♯' => '#',
            '♭' => 'b',
            other => other,
        })
        .collect();
    let body = normalized.trim_end_matches('*');
    if body.is_empty() {
        return Err(ChordError::EmptyToken);
    }

    let (root, rest) = parse_note(body).ok_or_else(|| ChordError::InvalidRoot(token.to_string()))?;
    let (quality, bass) = match rest.split_once('/') {
        Some((quality, bass_text)) => match parse_note(bass_text) {
            Some((bass, "")) => (quality, Some(bass)),
            _ => return Err(ChordError::InvalidBass(token.to_string())),
        },
        None => (rest, None),
    };
    if !is_valid_quality(quality) {
        return Err(ChordError::InvalidQuality {
            token: token.to_string(),
            quality: quality.to_string(),
        });
    }

    Ok(ChordSymbol {
        raw: token.to_string(),
        root,
        quality: quality.to_string(),
        bass,
        category: classify_quality(quality),
    })
}

pub fn is_chord_token(token: &str) -> bool {
    parse_chord(token).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cat(token: &str) -> ChordCategory {
        parse_chord(token).unwrap().category
    }

    #[test]
    fn sharp_minor() {
        let c = parse_chord("F#m").unwrap();
        assert_eq!(c.root.letter, NoteLetter::F);
        assert_eq!(c.root.accidental, Accidental::Sharp);
        assert_eq!(c.quality, "m");
        assert_eq!(c.category, ChordCategory::Minor);
    }

    #[test]
    fn asterisk_is_dropped() {
        let starred = parse_chord("G*").unwrap();
        let plain = parse_chord("G").unwrap();
        assert_eq!(starred.raw, "G*");
        assert_eq!(starred.root, plain.root);
        assert_eq!(starred.quality, plain.quality);
        assert_eq!(starred.category, ChordCategory::Major);
        assert_eq!(cat("C7**"), ChordCategory::Dominant7);
    }

    #[test]
    fn dominant_spellings() {
        assert_eq!(cat("Gdom7"), ChordCategory::Dominant7);
        assert_eq!(cat("D7"), ChordCategory::Dominant7);
    }

    #[test]
    fn root_errors() {
        assert_eq!(parse_chord("H7"), Err(ChordError::InvalidRoot("H7".into())));
        assert!(matches!(parse_chord("am"), Err(ChordError::InvalidRoot(_))));
        assert!(matches!(parse_chord("N.C."), Err(ChordError::InvalidRoot(_))));
        assert!(matches!(parse_chord("(G)"), Err(ChordError::InvalidRoot(_))));
        assert_eq!(parse_chord(""), Err(ChordError::EmptyToken));
        assert_eq!(parse_chord("**"), Err(ChordError::EmptyToken));
    }

    #[test]
    fn slash_bass() {
        let c = parse_chord("C/G").unwrap();
        assert_eq!(c.quality, "");
        assert_eq!(c.bass.unwrap().letter, NoteLetter::G);
        assert_eq!(c.category, ChordCategory::Major);
        assert_eq!(cat("Am7/G"), ChordCategory::Minor7);
        assert_eq!(parse_chord("D/F#").unwrap().to_string(), "D/F#");
        assert!(matches!(parse_chord("C/"), Err(ChordError::InvalidBass(_))));
        assert!(matches!(parse_chord("C/X"), Err(ChordError::InvalidBass(_))));
        assert!(matches!(parse_chord("C/Gm"), Err(ChordError::InvalidBass(_))));
    }

    #[test]
    fn quality_table() {
        assert_eq!(classify_quality("maj7"), ChordCategory::Major7);
        assert_eq!(classify_quality(""), ChordCategory::Major);
        assert_eq!(classify_quality("sus4"), ChordCategory::Other);
        assert_eq!(classify_quality("5"), ChordCategory::Power);
        assert_eq!(classify_quality("+"), ChordCategory::Augmented);
        assert_eq!(classify_quality("aug"), ChordCategory::Augmented);
        assert_eq!(classify_quality("dim"), ChordCategory::Diminished);
        // case matters
        assert_eq!(classify_quality("MAJ"), ChordCategory::Other);
        for ext in ["m9", "add9", "9", "11", "m7b5", "dim7", "6"] {
            assert_eq!(classify_quality(ext), ChordCategory::Other, "{ext}");
        }
    }

    #[test]
    fn unicode_accidentals() {
        let c = parse_chord("B♭m").unwrap();
        assert_eq!(c.root.accidental, Accidental::Flat);
        assert_eq!(c.category, ChordCategory::Minor);
        assert_eq!(c.to_string(), "Bbm");
        assert_eq!(parse_chord("C♯7").unwrap().to_string(), "C#7");
    }

    #[test]
    fn chord_token_detection() {
        assert!(is_chord_token("Bbm"));
        assert!(!is_chord_token("hallelujah"));
        assert!(is_chord_token("C7*"));
        for word in ["Baby", "Dance", "Give", "Could", "Amazing", "Everybody", "Bet"] {
            assert!(!is_chord_token(word), "{word}");
        }
        for chord in [
            "Asus4", "Dm7b5", "Cmaj9", "E7#9", "Gadd9", "Cm(maj7)", "Bbdim7", "A7sus4", "C°",
        ] {
            assert!(is_chord_token(chord), "{chord}");
        }
    }

    #[test]
    fn category_name_round_trip() {
        for c in ChordCategory::ALL {
            assert_eq!(c.name().parse::<ChordCategory>().unwrap(), c);
        }
    }

    fn chord_strategy() -> impl Strategy<Value = String> {
        (
            "[A-G]",
            prop::option::of("[#b]"),
            "(maj|min|m|M|dim|aug|sus|add|dom|[0-9]|\\+|#|b){0,4}",
            prop::option::of("[A-G][#b]?"),
        )
            .prop_map(|(root, acc, quality, bass)| {
                let mut s = root;
                s.push_str(acc.as_deref().unwrap_or(""));
                s.push_str(&quality);
                if let Some(bass) = bass {
                    s.push('/');
                    s.push_str(&bass);
                }
                s
            })
    }

    proptest! {
        #[test]
        fn never_panics(token in "\\PC*") {
            let _ = parse_chord(&token);
        }

        #[test]
        fn reserialization_is_idempotent(token in chord_strategy()) {
            let first = parse_chord(&token).unwrap();
            let second = parse_chord(&first.to_string()).unwrap();
            prop_assert_eq!(&second.to_string(), &first.to_string());
            prop_assert_eq!(second.category, first.category);
            prop_assert_eq!(second.bass, first.bass);
        }

        #[test]
        fn serialization_matches_raw(token in chord_strategy(), stars in 0usize..3) {
            let starred = format!("{token}{}", "*".repeat(stars));
            let chord = parse_chord(&starred).unwrap();
            prop_assert_eq!(chord.to_string(), token);
        }

        #[test]
        fn asterisk_invariance(token in chord_strategy()) {
            let plain = parse_chord(&token).unwrap();
            let starred = parse_chord(&format!("{token}*")).unwrap();
            prop_assert_eq!(ChordSymbol { raw: plain.raw.clone(), ..starred }, plain);
        }

        #[test]
        fn category_ignores_root_and_bass(quality in "(maj7|min7|m7|M7|maj|min|m|M|7|5|dim|aug|sus4|add9)?", a in "[A-G][#b]?", b in "[A-G][#b]?") {
            let plain = parse_chord(&format!("{a}{quality}")).unwrap();
            let other = parse_chord(&format!("{b}{quality}/{a}")).unwrap();
            prop_assert_eq!(plain.category, other.category);
            prop_assert_eq!(plain.category, classify_quality(&quality));
        }
    }
}
