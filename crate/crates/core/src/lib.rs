//! Chord-lyric corpus analysis: chord grammar, tablature alignment, lexicon
//! valence scoring, metadata enrichment, group statistics, word shifts and
//! categorical regression.

pub mod chord;
pub mod factor;
pub mod lexicon;
pub mod metadata;
pub mod modeling;
pub mod pipeline;
pub mod stats;
pub mod tab;
pub mod wordshift;

pub use chord::{classify_quality, is_chord_token, parse_chord, ChordCategory, ChordError, ChordSymbol};
pub use factor::{Factor, UnknownFactor};
pub use lexicon::{load_lexicon, Lexicon, LexiconError, NeutralBand, ValenceScore};
pub use metadata::{Era, LevelFilter, MetadataError, MetadataProvider, SongRecord};
pub use modeling::{FitResult, ModelError};
pub use stats::{Alternative, ChordValence, GroupSummary, MannWhitney, StatsError};
pub use tab::{ChordLyricEvent, TabDocument};
pub use wordshift::{Bag, ShiftFormat, WordShiftEntry, WordShiftError};
