//! Pipeline orchestration and cookbook output.

mod config;
mod histogram;
mod pipeline;
mod render;
mod sample;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_before, LinkConfig, LinkMode, PipelineConfig, RenderConfig, SampleConfig};
pub use histogram::{bin_of, question_size_histogram, size_histogram, Histogram, DEFAULT_EDGES};
pub use pipeline::{artifacts, Pipeline, PipelineError, Stage, StageFailure, StageOutcome};
pub use render::{
    chapter_file, chapter_title, from_json, load_cookbook, recipe_number, render, render_chapter_html,
    render_index_html, render_markdown, thread_url, to_json, Format, THREAD_URL,
};
pub use sample::{splice, stratified_sample, Injection, Sample, SampledRecipe, CHAPTERS_PER_SIDE, DEFAULT_EXTRAS};

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("no questions to build a histogram from")]
    EmptyQuestionSet,
    #[error("histogram needs at least two strictly ascending bin edges")]
    BadBinEdges,
    #[error("cookbook has no chapters to sample")]
    EmptyCookbook,
    #[error("cannot write to {path}: {source}")]
    OutputDirNotWritable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("not a cookbook document: {0}")]
    BadCookbook(String),
    #[error("injection file: {0}")]
    BadInjection(String),
    #[error("config: {0}")]
    BadConfig(String),
    #[error("csv: {0}")]
    Csv(String),
}
