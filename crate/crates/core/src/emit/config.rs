//! Pipeline configuration, read from TOML.
//!
//! ```toml
//! dump = "Posts.xml"
//! api_tag = "swt"
//! out = "out"
//! # stopwords = "stopwords.txt"
//! # before = "2013-09-01"
//!
//! [model]
//! k = 15
//! alpha = "auto"
//! beta = 0.01
//! iterations = 1000
//! seed = 42
//!
//! [build]
//! r_min = 64
//! ta = 0.5
//! initial_max_rank = 200
//! rank_step = 10
//! min_chapter_size = 3
//! question_char_limit = 1300
//!
//! [links]
//! mode = "offline"          # or "live"
//! manifest = "links.json"
//! max_in_flight = 8
//!
//! [render]
//! formats = ["json", "markdown", "html"]
//! surface_titles = false
//!
//! [sample]
//! extras = 4
//! seed = 42
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.
//! Every section and every key inside a section is optional.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

use super::histogram::DEFAULT_EDGES;
use super::render::Format;
use super::sample::DEFAULT_EXTRAS;
use super::EmitError;
use crate::builder::BuildParams;
use crate::ingest::parse_dump_date;
use crate::topics::{LdaParams, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    #[default]
    Offline,
    Live,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    pub mode: LinkMode,
    /// URL → status map; required offline.
    pub manifest: Option<PathBuf>,
    pub max_in_flight: usize,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self { mode: LinkMode::Offline, manifest: None, max_in_flight: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub formats: Vec<Format>,
    /// Show chapter titles with surface words instead of stems.
    pub surface_titles: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self { formats: vec![Format::Json, Format::Markdown, Format::Html], surface_titles: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub extras: usize,
    pub seed: u64,
    pub injection: Option<PathBuf>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { extras: DEFAULT_EXTRAS, seed: DEFAULT_SEED, injection: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub dump: PathBuf,
    pub api_tag: String,
    pub out: PathBuf,
    /// Stopword file; the bundled list when absent.
    pub stopwords: Option<PathBuf>,
    /// Keep only posts created strictly before this date or timestamp.
    pub before: Option<String>,
    pub histogram_edges: Vec<usize>,
    pub model: LdaParams,
    pub build: BuildParams,
    pub links: LinkConfig,
    pub render: RenderConfig,
    pub sample: SampleConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dump: PathBuf::new(),
            api_tag: String::new(),
            out: PathBuf::from("out"),
            stopwords: None,
            before: None,
            histogram_edges: DEFAULT_EDGES.to_vec(),
            model: LdaParams::default(),
            build: BuildParams::default(),
            links: LinkConfig::default(),
            render: RenderConfig::default(),
            sample: SampleConfig::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() && !p.as_os_str().is_empty() {
        *p = base.join(&*p);
    }
}

/// `YYYY-MM-DD` (midnight) or a dump-style timestamp.
pub fn parse_before(raw: &str) -> Option<NaiveDateTime> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .or_else(|| parse_dump_date(raw.trim()))
}

impl PipelineConfig {
    pub fn from_toml(raw: &str) -> Result<Self, EmitError> {
        toml::from_str(raw).map_err(|e| EmitError::BadConfig(e.to_string()))
    }

    /// Reads a config file and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self, EmitError> {
        let raw = fs::read_to_string(path).map_err(|e| EmitError::Io { path: path.to_path_buf(), source: e })?;
        let mut cfg = Self::from_toml(&raw)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.dump);
        resolve(base, &mut self.out);
        for p in [&mut self.stopwords, &mut self.links.manifest, &mut self.sample.injection].into_iter().flatten() {
            resolve(base, p);
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn before_date(&self) -> Result<Option<NaiveDateTime>, EmitError> {
        self.before
            .as_deref()
            .map(|raw| parse_before(raw).ok_or_else(|| EmitError::BadConfig(format!("before: cannot read date {raw:?}"))))
            .transpose()
    }

    /// Checks the settings that do not depend on the file system.
    pub fn validate(&self) -> Result<(), EmitError> {
        let bad = |m: String| Err(EmitError::BadConfig(m));
        if self.api_tag.is_empty() {
            return bad("api_tag must not be empty".into());
        }
        if self.api_tag != self.api_tag.to_lowercase() || self.api_tag.contains(|c: char| c.is_whitespace() || c == '<' || c == '>') {
            return bad(format!("api_tag {:?} must be a lowercase tag", self.api_tag));
        }
        if self.links.mode == LinkMode::Offline && self.links.manifest.is_none() {
            return bad("links.manifest is required in offline mode".into());
        }
        if self.links.mode == LinkMode::Live && !cfg!(feature = "live-links") {
            return bad("live link checking needs the live-links feature".into());
        }
        if self.links.max_in_flight == 0 {
            return bad("links.max_in_flight must be at least 1".into());
        }
        self.build.validate().map_err(|e| EmitError::BadConfig(e.to_string()))?;
        self.before_date()?;
        Ok(())
    }
}
