//! `key = value` configuration files. Command-line flags override file values.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use chordlift::lexicon::{DEFAULT_BAND_HIGH, DEFAULT_BAND_LOW};
use chordlift::metadata::{default_eras, default_regions};

pub const CONFIG_ENV: &str = "CHORDLIFT_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// `None` selects the bundled lexicon.
    pub lexicon_path: Option<PathBuf>,
    /// `None` selects the bundled English word list.
    pub wordlist_path: Option<PathBuf>,
    pub band_low: f64,
    pub band_high: f64,
    pub metadata_file: Option<PathBuf>,
    pub metadata_endpoint: Option<String>,
    pub top_genres: usize,
    pub regions: BTreeSet<String>,
    pub eras: BTreeSet<String>,
    pub output_dir: PathBuf,
    pub parallelism: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            lexicon_path: None,
            wordlist_path: None,
            band_low: DEFAULT_BAND_LOW,
            band_high: DEFAULT_BAND_HIGH,
            metadata_file: None,
            metadata_endpoint: None,
            top_genres: 20,
            regions: default_regions(),
            eras: default_eras(),
            output_dir: PathBuf::from("."),
            parallelism: 4,
        }
    }
}

fn parse_list(value: &str) -> BTreeSet<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
}

impl Config {
    /// Applies the settings in `text`; relative paths resolve against `base`.
    pub fn apply_file(&mut self, text: &str, base: &Path) -> Result<(), String> {
        let path = |v: &str| {
            let p = PathBuf::from(v);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key = value", i + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "lexicon_path" => self.lexicon_path = Some(path(value)),
                "wordlist_path" => self.wordlist_path = Some(path(value)),
                "band_low" => self.band_low = parse_number(key, value)?,
                "band_high" => self.band_high = parse_number(key, value)?,
                "metadata_file" => self.metadata_file = Some(path(value)),
                "metadata_endpoint" => self.metadata_endpoint = Some(value.to_string()),
                "top_genres" => self.top_genres = parse_number(key, value)?,
                "regions" => self.regions = parse_list(value),
                "eras" => self.eras = parse_list(value),
                "output_dir" => self.output_dir = path(value),
                "parallelism" => self.parallelism = parse_number(key, value)?,
                _ => return Err(format!("line {}: unknown key {key:?}", i + 1)),
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut config = Config::default();
        config.apply_file(&text, path.parent().unwrap_or(Path::new(".")))?;
        Ok(config)
    }

    /// Invariants that do not touch the file system.
    pub fn validate(&self) -> Result<(), String> {
        if self.band_low.is_nan() || self.band_high.is_nan() || self.band_low >= self.band_high {
            return Err(format!(
                "band_low ({}) must be below band_high ({})",
                self.band_low, self.band_high
            ));
        }
        if self.top_genres == 0 {
            return Err("top_genres must be at least 1".to_string());
        }
        if self.parallelism == 0 {
            return Err("parallelism must be at least 1".to_string());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_and_paths() {
        let mut c = Config::default();
        c.apply_file(
            "# comment\nband_low = 2.5\nlexicon_path = lex.tsv\nregions = Asia, Scandinavia\n\noutput_dir=/tmp/out\n",
            Path::new("/etc/cl"),
        )
        .unwrap();
        assert_eq!(c.band_low, 2.5);
        assert_eq!(c.lexicon_path, Some(PathBuf::from("/etc/cl/lex.tsv")));
        assert_eq!(c.regions.len(), 2);
        assert_eq!(c.output_dir, PathBuf::from("/tmp/out"));
        assert_eq!(c.band_high, DEFAULT_BAND_HIGH);
    }

    #[test]
    fn bad_lines() {
        let mut c = Config::default();
        assert!(c.apply_file("nonsense", Path::new(".")).is_err());
        assert!(c.apply_file("colour = blue", Path::new(".")).is_err());
        assert!(c.apply_file("top_genres = many", Path::new(".")).is_err());
    }

    #[test]
    fn validation() {
        assert!(Config::default().validate().is_ok());
        let c = Config {
            band_low: 7.0,
            band_high: 3.0,
            ..Config::default()
        };
        assert!(c.validate().is_err());
    }
}
