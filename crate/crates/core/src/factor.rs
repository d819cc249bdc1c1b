use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// An explanatory factor a chord instance can be grouped by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    Category,
    Genre,
    Era,
    Region,
}

impl Factor {
    pub const ALL: [Factor; 4] = [Factor::Category, Factor::Genre, Factor::Era, Factor::Region];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Category => "category",
            Factor::Genre => "genre",
            Factor::Era => "era",
            Factor::Region => "region",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown factor {0:?} (expected category, genre, era or region)")]
pub struct UnknownFactor(pub String);

impl FromStr for Factor {
    type Err = UnknownFactor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Factor::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| UnknownFactor(s.to_string()))
    }
}

/// Formats factor sets as `category+genre`, or `intercept` when empty.
pub fn join_factors(factors: &[Factor]) -> String {
    if factors.is_empty() {
        "intercept".to_string()
    } else {
        factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("+")
    }
}
