//! Ring catalog configuration.
//!
//! The grammar is TOML:
//!
//! ```toml
//! timeout_secs = 60      # per (ring, form) search budget
//! max_card = 59049       # enumeration bound
//! format = "csv"         # or "json"
//! out = "report.csv"
//!
//! [[ring]]
//! kind = "Zps"           # Zps | ext | nilpotent | galois
//! p = 3
//! s = 2
//!
//! [[ring]]
//! kind = "ext"
//! p = 3
//! modulus = [1, 0, 1]    # constant term first: x^2 + 1
//! ```
//!
//! Unknown keys are rejected.

use std::path::PathBuf;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{LocalRing, RingSpec, DEFAULT_ENUMERATION_BOUND};

pub const DEFAULT_CATALOG: &str = include_str!("../catalog/default.toml");

pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_card: u64,
    pub timeout: Duration,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_card: DEFAULT_ENUMERATION_BOUND,
            timeout: Duration::from_secs(DEFAULT_TIMEOUT_SECS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct CatalogConfig {
    pub rings: Vec<RingSpec>,
    pub bounds: Bounds,
    pub output: Output,
    /// Which bounds and output fields the document set explicitly.
    pub explicit: Explicit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Explicit {
    pub max_card: bool,
    pub timeout: bool,
    pub format: bool,
}

impl CatalogConfig {
    /// Constructs every ring under the configured enumeration bound.
    pub fn build_rings(&self) -> Result<Vec<LocalRing>> {
        build_rings(&self.rings, self.bounds.max_card)
    }
}

fn build_rings(specs: &[RingSpec], max_card: u64) -> Result<Vec<LocalRing>> {
    specs
        .iter()
        .enumerate()
        .map(|(index, spec)| {
            LocalRing::with_bound(spec, max_card).map_err(|e| Error::Validation {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    timeout_secs: Option<u64>,
    max_card: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    #[serde(default)]
    ring: Vec<RingSpec>,
}

/// Parses and validates a catalog document.
pub fn parse_config(text: &str) -> Result<CatalogConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    if raw.ring.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "catalog must contain at least one [[ring]]".into(),
        });
    }
    let bounds = Bounds {
        max_card: raw.max_card.unwrap_or(DEFAULT_ENUMERATION_BOUND),
        timeout: Duration::from_secs(raw.timeout_secs.unwrap_or(DEFAULT_TIMEOUT_SECS)),
    };
    build_rings(&raw.ring, bounds.max_card)?;
    Ok(CatalogConfig {
        explicit: Explicit {
            max_card: raw.max_card.is_some(),
            timeout: raw.timeout_secs.is_some(),
            format: raw.format.is_some(),
        },
        rings: raw.ring,
        bounds,
        output: Output {
            format: raw.format.unwrap_or_default(),
            out: raw.out,
        },
    })
}

fn parse_error(text: &str, e: &toml::de::Error) -> Error {
    let (line, column) = match e.span() {
        Some(span) => line_column(text, span.start),
        None => (1, 1),
    };
    Error::Parse {
        line,
        column,
        message: e.message().to_owned(),
    }
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses a one-line ring literal, the body of a `[[ring]]` section with
/// entries separated by whitespace: `kind="Zps" p=3 s=2`. The quotes around
/// the kind may be omitted.
pub fn parse_ring_literal(text: &str) -> Result<RingSpec> {
    let mut doc = String::new();
    let mut depth = 0i32;
    let mut token = String::new();
    let mut tokens = Vec::new();
    for c in text.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if (c.is_whitespace() || c == ',' || c == ';') && depth == 0 {
            if !token.is_empty() {
                tokens.push(std::mem::take(&mut token));
            }
        } else {
            token.push(c);
        }
    }
    if !token.is_empty() {
        tokens.push(token);
    }
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::literal(text, format!("expected key=value, found {tok:?}")))?;
        let value = if key == "kind" && !value.starts_with('"') {
            format!("\"{value}\"")
        } else {
            value.to_owned()
        };
        doc.push_str(&format!("{key} = {value}\n"));
    }
    toml::from_str::<RingSpec>(&doc).map_err(|e| Error::literal(text, e.message().to_owned()))
}
