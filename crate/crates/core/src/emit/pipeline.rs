//! The staged batch run: ingest, tag filter, classify, corpus, topics, curve,
//! histogram, build and render.
//!
//! Each stage reads checkpoints from the output directory and writes its own.
//! `stages.json` records, per stage, a digest of the stage inputs and of the
//! files it produced; a stage whose inputs and outputs are unchanged is
//! skipped unless forced. A lock file keeps a second run out of the same
//! output directory.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::config::{LinkMode, PipelineConfig};
use super::histogram::question_size_histogram;
use super::render::{load_cookbook, render, to_json};
use super::EmitError;
use crate::builder::{
    audit, build_cookbook, check_links_parallel, export_score_curve, extract_links, rank_pairs, select_pair,
    write_curve_csv, BuildError, CachedChecker, Cookbook, LinkChecker, ManifestChecker, Violation,
};
use crate::classify::{classify, ClassifiedThread, Label};
use crate::ingest::{assemble_threads, filter_by_tag, store, IngestError, PostReader, Thread};
use crate::textprep::{build_documents, Document, Preprocessor, StopwordList, SurfaceForms};
use crate::topics::{fit, load_model, save_model, Corpus, TopicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Ingest,
    FilterTag,
    Classify,
    Corpus,
    Topics,
    Curve,
    Histogram,
    Build,
    Render,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Ingest,
        Stage::FilterTag,
        Stage::Classify,
        Stage::Corpus,
        Stage::Topics,
        Stage::Curve,
        Stage::Histogram,
        Stage::Build,
        Stage::Render,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::FilterTag => "filter-tag",
            Stage::Classify => "classify",
            Stage::Corpus => "corpus",
            Stage::Topics => "topics",
            Stage::Curve => "curve",
            Stage::Histogram => "histogram",
            Stage::Build => "build",
            Stage::Render => "render",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checkpoint file names inside the output directory.
pub mod artifacts {
    pub const THREADS: &str = "threads.ndjson";
    pub const INGEST_REPORT: &str = "ingest_report.json";
    pub const TAGGED: &str = "tagged.ndjson";
    pub const CLASSIFIED: &str = "classified.ndjson";
    pub const HOWTO: &str = "howto.ndjson";
    pub const CORPUS: &str = "corpus.ndjson";
    pub const SURFACE_FORMS: &str = "surface_forms.json";
    pub const MODEL: &str = "model.json";
    pub const LINKS: &str = "links.json";
    pub const CURVE: &str = "curve.csv";
    pub const HISTOGRAM: &str = "histogram.csv";
    pub const COOKBOOK: &str = "cookbook.json";
    pub const RENDER_DIR: &str = "render";
    pub const STAGES: &str = "stages.json";
    pub const LOCK: &str = ".cookbook.lock";
}

#[derive(Debug, Error)]
pub enum StageFailure {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("missing input {0}; run the earlier stages first")]
    MissingInput(PathBuf),
    #[error("no threads tagged {0:?}")]
    NoTaggedThreads(String),
    #[error("no how-to-do-it threads left to model")]
    EmptyCorpus,
    #[error("cookbook audit found {} violations, first: {}", .0.len(), .0[0])]
    AuditFailed(Vec<Violation>),
    #[error("link checker: {0}")]
    LinkChecker(String),
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: StageFailure,
    },
    #[error("configuration: {0}")]
    Config(#[source] EmitError),
    #[error("output directory is in use by another run (remove {0} if that run is gone)")]
    Locked(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutcome {
    pub stage: Stage,
    pub skipped: bool,
    pub outputs: Vec<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
struct StageRecord {
    inputs: String,
    /// Output file (relative to the output directory) → content digest.
    outputs: BTreeMap<String, String>,
}

type StageResult<T> = Result<T, StageFailure>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StageFailure + '_ {
    move |source| StageFailure::Io { path: path.to_path_buf(), source }
}

fn file_digest(path: &Path) -> io::Result<String> {
    let mut hasher = Sha256::new();
    io::copy(&mut BufReader::new(File::open(path)?), &mut hasher)?;
    Ok(format!("{:x}", hasher.finalize()))
}

#[derive(Debug, Serialize)]
struct IngestReport {
    parse: crate::ingest::ParseStats,
    assembly: crate::ingest::AssemblyReport,
    dropped_by_date: usize,
}

/// Holds the output-directory lock while alive.
struct Lock(PathBuf);

impl Lock {
    fn acquire(out: &Path) -> Result<Self, PipelineError> {
        fs::create_dir_all(out).map_err(|source| PipelineError::Io { path: out.to_path_buf(), source })?;
        let path = out.join(artifacts::LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Lock(path))
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => Err(PipelineError::Locked(path)),
            Err(source) => Err(PipelineError::Io { path, source }),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

pub struct Pipeline {
    config: PipelineConfig,
    checker: Option<Box<dyn LinkChecker>>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self, PipelineError> {
        config.validate().map_err(PipelineError::Config)?;
        Ok(Self { config, checker: None })
    }

    /// Uses `checker` for link checks instead of the configured one.
    pub fn with_checker(mut self, checker: Box<dyn LinkChecker>) -> Self {
        self.checker = Some(checker);
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn path(&self, artifact: &str) -> PathBuf {
        self.config.out.join(artifact)
    }

    /// Runs every stage in order and returns the built cookbook.
    pub fn run(&self, force: bool) -> Result<(Cookbook, Vec<StageOutcome>), PipelineError> {
        let _lock = Lock::acquire(&self.config.out)?;
        let mut outcomes = Vec::new();
        for stage in Stage::ALL {
            outcomes.push(self.run_unlocked(stage, force)?);
        }
        let cookbook = load_cookbook(&self.path(artifacts::COOKBOOK))
            .map_err(|e| PipelineError::Stage { stage: Stage::Build, source: e.into() })?;
        Ok((cookbook, outcomes))
    }

    /// Runs one stage from the checkpoints already in the output directory.
    pub fn run_stage(&self, stage: Stage, force: bool) -> Result<StageOutcome, PipelineError> {
        let _lock = Lock::acquire(&self.config.out)?;
        self.run_unlocked(stage, force)
    }

    fn run_unlocked(&self, stage: Stage, force: bool) -> Result<StageOutcome, PipelineError> {
        let fail = |source: StageFailure| PipelineError::Stage { stage, source };
        let inputs = self.input_digest(stage).map_err(fail)?;
        let mut records = self.read_records();
        if !force {
            if let Some(rec) = records.get(stage.name()) {
                if rec.inputs == inputs && self.outputs_intact(rec) {
                    info!("{stage}: up to date, skipped");
                    let outputs = rec.outputs.keys().map(|f| self.path(f)).collect();
                    return Ok(StageOutcome { stage, skipped: true, outputs });
                }
            }
        }
        info!("{stage}: running");
        let outputs = self.execute(stage).map_err(fail)?;
        let mut rec = StageRecord { inputs, outputs: BTreeMap::new() };
        for path in &outputs {
            let digest = file_digest(path).map_err(|e| fail(io_err(path)(e)))?;
            let rel = path.strip_prefix(&self.config.out).unwrap_or(path).to_string_lossy().replace('\\', "/");
            rec.outputs.insert(rel, digest);
        }
        records.insert(stage.name().to_string(), rec);
        self.write_records(&records).map_err(fail)?;
        Ok(StageOutcome { stage, skipped: false, outputs })
    }

    fn read_records(&self) -> BTreeMap<String, StageRecord> {
        let path = self.path(artifacts::STAGES);
        match fs::read_to_string(&path) {
            Ok(raw) => serde_json::from_str(&raw).unwrap_or_else(|e| {
                warn!("ignoring unreadable {}: {e}", path.display());
                BTreeMap::new()
            }),
            Err(_) => BTreeMap::new(),
        }
    }

    fn write_records(&self, records: &BTreeMap<String, StageRecord>) -> StageResult<()> {
        let path = self.path(artifacts::STAGES);
        let mut json = serde_json::to_string_pretty(records).expect("stage records serialize");
        json.push('\n');
        fs::write(&path, json).map_err(io_err(&path))
    }

    fn outputs_intact(&self, rec: &StageRecord) -> bool {
        rec.outputs.iter().all(|(f, digest)| file_digest(&self.path(f)).is_ok_and(|d| &d == digest))
    }

    fn input_files(&self, stage: Stage) -> Vec<PathBuf> {
        use artifacts::*;
        let c = &self.config;
        let mut files: Vec<PathBuf> = match stage {
            Stage::Ingest => vec![c.dump.clone()],
            Stage::FilterTag => vec![self.path(THREADS)],
            Stage::Classify => vec![self.path(TAGGED)],
            Stage::Corpus => vec![self.path(HOWTO)],
            Stage::Topics => vec![self.path(CORPUS)],
            Stage::Curve => vec![self.path(CORPUS), self.path(HOWTO)],
            Stage::Histogram => vec![self.path(HOWTO)],
            Stage::Build => vec![self.path(CORPUS), self.path(MODEL), self.path(HOWTO), self.path(LINKS)],
            Stage::Render => vec![self.path(COOKBOOK), self.path(SURFACE_FORMS)],
        };
        match stage {
            Stage::Corpus => files.extend(c.stopwords.clone()),
            Stage::Curve if c.links.mode == LinkMode::Offline && self.checker.is_none() => {
                files.extend(c.links.manifest.clone())
            }
            _ => {}
        }
        files
    }

    /// Digest over the stage's settings and the contents of its input files.
    fn input_digest(&self, stage: Stage) -> StageResult<String> {
        let c = &self.config;
        let settings = match stage {
            Stage::Ingest => serde_json::json!({ "before": c.before }),
            Stage::FilterTag => serde_json::json!({ "api_tag": c.api_tag }),
            Stage::Topics => serde_json::to_value(c.model).expect("params serialize"),
            Stage::Curve => serde_json::json!({
                "limit": c.build.question_char_limit,
                "mode": c.links.mode,
                "custom_checker": self.checker.is_some(),
            }),
            Stage::Histogram => serde_json::json!({ "edges": c.histogram_edges }),
            Stage::Build => serde_json::json!({ "api_tag": c.api_tag, "params": c.build }),
            Stage::Render => serde_json::to_value(&c.render).expect("render config serializes"),
            Stage::Classify | Stage::Corpus => serde_json::Value::Null,
        };
        let mut hasher = Sha256::new();
        hasher.update(stage.name().as_bytes());
        hasher.update(settings.to_string().as_bytes());
        for file in self.input_files(stage) {
            if !file.is_file() {
                return Err(StageFailure::MissingInput(file));
            }
            hasher.update(file_digest(&file).map_err(io_err(&file))?.as_bytes());
        }
        Ok(format!("{:x}", hasher.finalize()))
    }

    fn execute(&self, stage: Stage) -> StageResult<Vec<PathBuf>> {
        match stage {
            Stage::Ingest => self.ingest(),
            Stage::FilterTag => self.filter_tag(),
            Stage::Classify => self.classify(),
            Stage::Corpus => self.corpus(),
            Stage::Topics => self.topics(),
            Stage::Curve => self.curve(),
            Stage::Histogram => self.histogram(),
            Stage::Build => self.build(),
            Stage::Render => self.render(),
        }
    }

    fn load_threads(&self, name: &str) -> StageResult<Vec<Thread>> {
        Ok(store::load(&self.path(name))?)
    }

    fn save<T: Serialize>(&self, name: &str, items: &[T]) -> StageResult<PathBuf> {
        let path = self.path(name);
        store::save(&path, items)?;
        Ok(path)
    }

    fn write_text(&self, name: &str, text: &str) -> StageResult<PathBuf> {
        let path = self.path(name);
        fs::write(&path, text).map_err(io_err(&path))?;
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> StageResult<PathBuf> {
        let mut json = serde_json::to_string_pretty(value).expect("checkpoint serializes");
        json.push('\n');
        self.write_text(name, &json)
    }

    fn ingest(&self) -> StageResult<Vec<PathBuf>> {
        let dump = &self.config.dump;
        let before = self.config.before_date()?;
        let mut reader = PostReader::new(BufReader::new(File::open(dump).map_err(io_err(dump))?));
        let mut posts = Vec::new();
        let mut dropped_by_date = 0;
        for post in reader.by_ref() {
            let post = post?;
            if before.is_some_and(|b| post.creation_date >= b) {
                dropped_by_date += 1;
                continue;
            }
            posts.push(post);
        }
        let parse = reader.stats();
        let (mut threads, assembly) = assemble_threads(posts);
        threads.sort_by_key(Thread::id);
        info!("ingest: {} rows, {} threads", parse.rows, threads.len());
        let report = IngestReport { parse, assembly, dropped_by_date };
        Ok(vec![self.save(artifacts::THREADS, &threads)?, self.write_json(artifacts::INGEST_REPORT, &report)?])
    }

    fn filter_tag(&self) -> StageResult<Vec<PathBuf>> {
        let tagged = filter_by_tag(&self.load_threads(artifacts::THREADS)?, &self.config.api_tag);
        if tagged.is_empty() {
            return Err(StageFailure::NoTaggedThreads(self.config.api_tag.clone()));
        }
        info!("filter-tag: {} threads tagged {}", tagged.len(), self.config.api_tag);
        Ok(vec![self.save(artifacts::TAGGED, &tagged)?])
    }

    fn classify(&self) -> StageResult<Vec<PathBuf>> {
        let labeled: Vec<ClassifiedThread> = self.load_threads(artifacts::TAGGED)?.iter().map(classify).collect();
        let howto: Vec<&Thread> =
            labeled.iter().filter(|c| c.label == Label::HowToDoIt).map(|c| &c.thread).collect();
        info!("classify: {} of {} threads are how-to-do-it", howto.len(), labeled.len());
        Ok(vec![self.save(artifacts::CLASSIFIED, &labeled)?, self.save(artifacts::HOWTO, &howto)?])
    }

    fn corpus(&self) -> StageResult<Vec<PathBuf>> {
        let stopwords = match &self.config.stopwords {
            Some(path) => StopwordList::load(path).map_err(io_err(path))?,
            None => StopwordList::default(),
        };
        let threads = self.load_threads(artifacts::HOWTO)?;
        let built = build_documents(&Preprocessor::new(stopwords), &threads);
        if !built.empty.is_empty() {
            info!("corpus: {} threads had no tokens left: {:?}", built.empty.len(), built.empty);
        }
        if built.documents.is_empty() {
            return Err(StageFailure::EmptyCorpus);
        }
        let corpus = Corpus::new(built.documents);
        Ok(vec![self.save(artifacts::CORPUS, corpus.documents())?, self.write_json(artifacts::SURFACE_FORMS, &built.forms)?])
    }

    fn load_corpus(&self) -> StageResult<Corpus> {
        let docs: Vec<Document> = store::load(&self.path(artifacts::CORPUS))?;
        Ok(Corpus::new(docs))
    }

    fn topics(&self) -> StageResult<Vec<PathBuf>> {
        let corpus = self.load_corpus()?;
        let model = fit(&corpus, self.config.model)?;
        let path = self.path(artifacts::MODEL);
        save_model(&path, &model)?;
        Ok(vec![path])
    }

    fn base_checker(&self) -> StageResult<Box<dyn LinkChecker + '_>> {
        if let Some(c) = &self.checker {
            return Ok(Box::new(c.as_ref()));
        }
        match self.config.links.mode {
            LinkMode::Offline => {
                let path = self.config.links.manifest.as_ref().expect("validated config has a manifest");
                Ok(Box::new(ManifestChecker::load(path).map_err(io_err(path))?))
            }
            #[cfg(feature = "live-links")]
            LinkMode::Live => Ok(Box::new(
                crate::builder::HttpChecker::new().map_err(|e| StageFailure::LinkChecker(e.to_string()))?,
            )),
            #[cfg(not(feature = "live-links"))]
            LinkMode::Live => Err(StageFailure::LinkChecker("built without the live-links feature".into())),
        }
    }

    /// Threads behind the corpus documents, in corpus order.
    fn corpus_threads(&self, corpus: &Corpus) -> StageResult<Vec<Thread>> {
        let mut by_id: BTreeMap<u64, Thread> =
            self.load_threads(artifacts::HOWTO)?.into_iter().map(|t| (t.id(), t)).collect();
        corpus
            .thread_ids()
            .into_iter()
            .map(|id| by_id.remove(&id).ok_or(StageFailure::Build(BuildError::MissingThread(id))))
            .collect()
    }

    /// Checks every link once, records the outcome as a manifest, and writes the score curve.
    fn curve(&self) -> StageResult<Vec<PathBuf>> {
        let corpus = self.load_corpus()?;
        let threads = self.corpus_threads(&corpus)?;
        let mut urls: Vec<String> = Vec::new();
        for t in &threads {
            for post in std::iter::once(&t.question).chain(&t.answers) {
                urls.extend(extract_links(&post.body));
            }
        }
        urls.sort();
        urls.dedup();
        let base = self.base_checker()?;
        let cached = CachedChecker::new(base);
        let statuses = check_links_parallel(&urls, &cached, self.config.links.max_in_flight);
        let resolved: BTreeMap<String, Option<u16>> =
            statuses.iter().map(|s| (s.url.clone(), if s.alive { s.status.or(Some(200)) } else { s.status })).collect();
        let dead = statuses.iter().filter(|s| !s.alive).count();
        info!("curve: {} links checked, {} dead", urls.len(), dead);
        let resolved = ManifestChecker::new(resolved);
        let limit = self.config.build.question_char_limit;
        let ranked = rank_pairs(threads.iter().filter_map(|t| select_pair(t, &resolved, limit)).collect());
        let curve_path = self.path(artifacts::CURVE);
        let mut buf = Vec::new();
        write_curve_csv(&export_score_curve(&ranked), &mut buf).map_err(|e| EmitError::Csv(e.to_string()))?;
        fs::write(&curve_path, buf).map_err(io_err(&curve_path))?;
        Ok(vec![self.write_text(artifacts::LINKS, &(resolved.to_json() + "\n"))?, curve_path])
    }

    fn histogram(&self) -> StageResult<Vec<PathBuf>> {
        let questions: Vec<_> = self.load_threads(artifacts::HOWTO)?.into_iter().map(|t| t.question).collect();
        let h = question_size_histogram(&questions, &self.config.histogram_edges)?;
        let path = self.path(artifacts::HISTOGRAM);
        let mut buf = Vec::new();
        h.write_csv(&mut buf).map_err(|e| EmitError::Csv(e.to_string()))?;
        fs::write(&path, buf).map_err(io_err(&path))?;
        Ok(vec![path])
    }

    fn build(&self) -> StageResult<Vec<PathBuf>> {
        let corpus = self.load_corpus()?;
        let model = load_model(&self.path(artifacts::MODEL))?;
        let threads = self.corpus_threads(&corpus)?;
        let links_path = self.path(artifacts::LINKS);
        let checker = ManifestChecker::load(&links_path).map_err(io_err(&links_path))?;
        let cookbook = build_cookbook(&self.config.api_tag, &corpus, &model, &threads, &self.config.build, &checker)?;
        let violations = audit(&cookbook, &checker, Some(&model));
        if !violations.is_empty() {
            return Err(StageFailure::AuditFailed(violations));
        }
        info!(
            "build: {} chapters, {} recipes, final max rank {}",
            cookbook.chapters.len(),
            cookbook.recipe_count(),
            cookbook.final_max_rank
        );
        Ok(vec![self.write_text(artifacts::COOKBOOK, &to_json(&cookbook))?])
    }

    fn render(&self) -> StageResult<Vec<PathBuf>> {
        let cookbook = load_cookbook(&self.path(artifacts::COOKBOOK))?;
        let forms: Option<SurfaceForms> = if self.config.render.surface_titles {
            let path = self.path(artifacts::SURFACE_FORMS);
            let raw = fs::read_to_string(&path).map_err(io_err(&path))?;
            Some(serde_json::from_str(&raw).map_err(|e| EmitError::BadCookbook(e.to_string()))?)
        } else {
            None
        };
        let dir = self.path(artifacts::RENDER_DIR);
        let mut files = Vec::new();
        for &format in &self.config.render.formats {
            files.extend(render(&cookbook, format, &dir, forms.as_ref())?);
        }
        Ok(files)
    }
}
