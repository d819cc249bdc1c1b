//! Song metadata: genre, era and region labels.
//!
//! Records come from a local JSONL file, a remote JSON API, or both (file
//! first). Era labels fall back to the decade of the album year.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::Factor;

pub const FIRST_DECADE: u16 = 1950;
pub const LAST_DECADE: u16 = 2010;

pub const DEFAULT_REGIONS: [&str; 5] = [
    "Asia",
    "Australia/Oceania",
    "North America",
    "Scandinavia",
    "Western Europe",
];

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("cannot read metadata file {path}: {source}")]
    FileUnreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid metadata endpoint {0:?}")]
    InvalidEndpoint(String),
    #[error("metadata request failed: {0}")]
    NetworkError(String),
    #[error("malformed metadata response: {0}")]
    MalformedResponse(String),
}

/// A decade label between the 1950's and the 2010's, e.g. `1970's`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Era(u16);

impl Era {
    pub fn from_decade(decade: u16) -> Option<Era> {
        (decade.is_multiple_of(10) && (FIRST_DECADE..=LAST_DECADE).contains(&decade)).then_some(Era(decade))
    }

    pub fn from_year(year: i64) -> Option<Era> {
        let decade = u16::try_from(year.div_euclid(10) * 10).ok()?;
        Era::from_decade(decade)
    }

    pub fn decade(self) -> u16 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Era> {
        (FIRST_DECADE..=LAST_DECADE).step_by(10).map(Era)
    }
}

impl fmt::Display for Era {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}'s", self.0)
    }
}

impl FromStr for Era {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .strip_suffix("'s")
            .and_then(|d| d.parse::<u16>().ok())
            .and_then(Era::from_decade)
            .ok_or_else(|| format!("invalid era label {s:?}"))
    }
}

impl Serialize for Era {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Era {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SongRecord {
    pub song_id: String,
    pub genre: Option<String>,
    pub era: Option<Era>,
    pub region: Option<String>,
    pub album_year: Option<i64>,
}

impl SongRecord {
    pub fn label(&self, factor: Factor) -> Option<String> {
        match factor {
            Factor::Genre => self.genre.clone(),
            Factor::Era => resolve_era(self).map(|e| e.to_string()),
            Factor::Region => self.region.clone(),
            Factor::Category => None,
        }
    }
}

/// The artist-level era when known, else the album year's decade.
pub fn resolve_era(rec: &SongRecord) -> Option<Era> {
    rec.era.or_else(|| rec.album_year.and_then(Era::from_year))
}

/// Maps free-form region names onto a controlled vocabulary.
#[derive(Debug, Clone)]
pub struct RegionVocabulary {
    canonical: HashMap<String, String>,
}

impl RegionVocabulary {
    pub fn new<I, S>(canonical: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let canonical = canonical
            .into_iter()
            .map(Into::into)
            .map(|name: String| (name.to_lowercase(), name))
            .collect();
        Self { canonical }
    }

    pub fn with_alias(mut self, alias: &str, target: &str) -> Self {
        self.canonical.insert(alias.trim().to_lowercase(), target.to_string());
        self
    }

    pub fn normalize(&self, region: &str) -> Option<String> {
        self.canonical.get(&region.trim().to_lowercase()).cloned()
    }
}

impl Default for RegionVocabulary {
    fn default() -> Self {
        RegionVocabulary::new([
            "Africa",
            "Asia",
            "Australia/Oceania",
            "Caribbean",
            "Central America",
            "Eastern Europe",
            "Middle East",
            "North America",
            "Scandinavia",
            "South America",
            "Western Europe",
        ])
        .with_alias("Oceania", "Australia/Oceania")
        .with_alias("Australia", "Australia/Oceania")
        .with_alias("Australia & Oceania", "Australia/Oceania")
        .with_alias("Australia and Oceania", "Australia/Oceania")
        .with_alias("Nordic", "Scandinavia")
        .with_alias("Nordic Countries", "Scandinavia")
        .with_alias("Latin America", "South America")
        .with_alias("Europe, Western", "Western Europe")
        .with_alias("Europe, Eastern", "Eastern Europe")
    }
}

/// Wire shape of a metadata record, shared by the JSONL file and the API.
#[derive(Debug, Default, Deserialize)]
struct RawRecord {
    song_id: Option<String>,
    genre: Option<String>,
    era: Option<String>,
    region: Option<String>,
    album_year: Option<i64>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LabelIssues {
    pub invalid_eras: usize,
    pub unknown_regions: usize,
}

impl RawRecord {
    fn into_record(self, song_id: String, vocab: &RegionVocabulary, issues: &mut LabelIssues) -> SongRecord {
        let non_empty = |s: Option<String>| s.map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
        let era = non_empty(self.era).and_then(|e| match e.parse::<Era>() {
            Ok(era) => Some(era),
            Err(_) => {
                issues.invalid_eras += 1;
                None
            }
        });
        let region = non_empty(self.region).and_then(|r| {
            let normalized = vocab.normalize(&r);
            if normalized.is_none() {
                issues.unknown_regions += 1;
            }
            normalized
        });
        SongRecord {
            song_id,
            genre: non_empty(self.genre),
            era,
            region,
            album_year: self.album_year,
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct MetadataTable {
    pub records: BTreeMap<String, SongRecord>,
    pub malformed_lines: usize,
    pub duplicate_ids: usize,
    pub issues: LabelIssues,
}

pub fn parse_metadata(text: &str, vocab: &RegionVocabulary) -> MetadataTable {
    let mut table = MetadataTable::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = match serde_json::from_str(line) {
            Ok(raw) => raw,
            Err(err) => {
                log::warn!("metadata line {}: {err}", idx + 1);
                table.malformed_lines += 1;
                continue;
            }
        };
        let Some(song_id) = raw.song_id.clone().filter(|s| !s.trim().is_empty()) else {
            log::warn!("metadata line {}: missing song_id", idx + 1);
            table.malformed_lines += 1;
            continue;
        };
        let record = raw.into_record(song_id.clone(), vocab, &mut table.issues);
        if table.records.insert(song_id.clone(), record).is_some() {
            log::warn!(
                "metadata line {}: duplicate song_id {song_id:?}, keeping the later record",
                idx + 1
            );
            table.duplicate_ids += 1;
        }
    }
    table
}

pub fn load_metadata_file(path: &Path, vocab: &RegionVocabulary) -> Result<MetadataTable, MetadataError> {
    let text = fs::read_to_string(path).map_err(|source| MetadataError::FileUnreadable {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_metadata(&text, vocab))
}

/// What a provider needs to identify a song.
#[derive(Debug, Clone, Copy)]
pub struct SongQuery<'a> {
    pub song_id: &'a str,
    pub title: &'a str,
    pub artist: &'a str,
}

pub trait MetadataProvider: Sync {
    /// `Ok(None)` means the provider has no record for the song.
    fn lookup(&self, query: SongQuery<'_>) -> Result<Option<SongRecord>, MetadataError>;
}

impl MetadataProvider for MetadataTable {
    fn lookup(&self, query: SongQuery<'_>) -> Result<Option<SongRecord>, MetadataError> {
        Ok(self.records.get(query.song_id).cloned())
    }
}

#[derive(Debug, Clone)]
pub struct HttpOptions {
    pub max_retries: u32,
    pub base_backoff: Duration,
    pub timeout: Duration,
}

impl Default for HttpOptions {
    fn default() -> Self {
        Self {
            max_retries: 3,
            base_backoff: Duration::from_millis(250),
            timeout: Duration::from_secs(10),
        }
    }
}

/// Client for a JSON API answering `GET <endpoint>?title=..&artist=..`
/// with 200 and a record object, or 404 when the song is unknown.
pub struct HttpProvider {
    endpoint: reqwest::Url,
    client: reqwest::blocking::Client,
    options: HttpOptions,
    vocab: RegionVocabulary,
}

impl HttpProvider {
    pub fn new(endpoint: &str, options: HttpOptions, vocab: RegionVocabulary) -> Result<Self, MetadataError> {
        let endpoint =
            reqwest::Url::parse(endpoint).map_err(|_| MetadataError::InvalidEndpoint(endpoint.to_string()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(options.timeout)
            .connect_timeout(options.timeout)
            .build()
            .map_err(|e| MetadataError::NetworkError(e.to_string()))?;
        Ok(Self {
            endpoint,
            client,
            options,
            vocab,
        })
    }

    fn url(&self, title: &str, artist: &str) -> reqwest::Url {
        let mut url = self.endpoint.clone();
        url.query_pairs_mut()
            .append_pair("title", title)
            .append_pair("artist", artist);
        url
    }

    pub fn fetch_metadata(
        &self,
        song_id: &str,
        title: &str,
        artist: &str,
    ) -> Result<Option<SongRecord>, MetadataError> {
        let url = self.url(title, artist);
        let mut attempt = 0;
        loop {
            let retryable = match self.client.get(url.clone()).send() {
                Ok(resp) => {
                    let status = resp.status();
                    if status == reqwest::StatusCode::NOT_FOUND {
                        return Ok(None);
                    }
                    if status.is_success() {
                        let body = resp
                            .text()
                            .map_err(|e| MetadataError::MalformedResponse(e.to_string()))?;
                        let raw: RawRecord =
                            serde_json::from_str(&body).map_err(|e| MetadataError::MalformedResponse(e.to_string()))?;
                        let mut issues = LabelIssues::default();
                        return Ok(Some(raw.into_record(song_id.to_string(), &self.vocab, &mut issues)));
                    }
                    if !(status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS) {
                        return Err(MetadataError::NetworkError(format!("unexpected status {status}")));
                    }
                    format!("status {status}")
                }
                Err(err) => err.to_string(),
            };
            if attempt >= self.options.max_retries {
                return Err(MetadataError::NetworkError(format!(
                    "giving up after {} attempts: {retryable}",
                    attempt + 1
                )));
            }
            let delay = self.options.base_backoff.saturating_mul(1 << attempt.min(16));
            log::debug!("metadata request for {song_id:?} failed ({retryable}), retrying in {delay:?}");
            thread::sleep(delay);
            attempt += 1;
        }
    }
}

impl MetadataProvider for HttpProvider {
    fn lookup(&self, query: SongQuery<'_>) -> Result<Option<SongRecord>, MetadataError> {
        self.fetch_metadata(query.song_id, query.title, query.artist)
    }
}

/// Local file first, remote API for songs the file does not know.
#[derive(Default)]
pub struct ChainProvider {
    pub file: Option<MetadataTable>,
    pub http: Option<HttpProvider>,
}

impl MetadataProvider for ChainProvider {
    fn lookup(&self, query: SongQuery<'_>) -> Result<Option<SongRecord>, MetadataError> {
        if let Some(file) = &self.file {
            if let Some(rec) = file.lookup(query)? {
                return Ok(Some(rec));
            }
        }
        match &self.http {
            Some(http) => http.lookup(query),
            None => Ok(None),
        }
    }
}

/// The `k` most frequent labels, most frequent first, ties lexicographic.
/// With an allowlist, labels outside it are ignored.
pub fn top_labels<'a, I>(labels: I, k: usize, allow: Option<&BTreeSet<String>>) -> Vec<String>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for label in labels {
        if allow.is_none_or(|a| a.contains(label)) {
            *counts.entry(label).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.into_iter().take(k).map(|(l, _)| l.to_string()).collect()
}

/// Which levels of each factor are reported and modelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelFilter {
    pub genres: BTreeSet<String>,
    pub eras: BTreeSet<String>,
    pub regions: BTreeSet<String>,
    pub categories: BTreeSet<String>,
}

impl LevelFilter {
    pub fn allows(&self, factor: Factor, label: &str) -> bool {
        let set = match factor {
            Factor::Category => &self.categories,
            Factor::Genre => &self.genres,
            Factor::Era => &self.eras,
            Factor::Region => &self.regions,
        };
        set.contains(label)
    }
}

pub fn default_eras() -> BTreeSet<String> {
    Era::all().map(|e| e.to_string()).collect()
}

pub fn default_regions() -> BTreeSet<String> {
    DEFAULT_REGIONS.iter().map(|s| s.to_string()).collect()
}

/// Most popular levels of `factor` by song count. Regions and eras are
/// restricted to `allow` (or the defaults when `allow` is `None`).
pub fn top_levels(records: &[SongRecord], factor: Factor, k: usize, allow: Option<&BTreeSet<String>>) -> Vec<String> {
    let defaults;
    let allow = match (factor, allow) {
        (_, Some(a)) => Some(a),
        (Factor::Era, None) => {
            defaults = default_eras();
            Some(&defaults)
        }
        (Factor::Region, None) => {
            defaults = default_regions();
            Some(&defaults)
        }
        _ => None,
    };
    let labels: Vec<String> = records.iter().filter_map(|r| r.label(factor)).collect();
    top_labels(labels.iter().map(String::as_str), k, allow)
}
