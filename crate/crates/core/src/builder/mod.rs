//! Recipe selection and cookbook assembly.

mod audit;
mod cookbook;
mod links;
mod pairs;

use thiserror::Error;

use crate::topics::TopicError;

pub use audit::{audit, Violation};
pub use cookbook::{
    build_cookbook, prepare_candidates, remove_small_chapters, run_rounds, BuildParams, Candidate, Chapter, Cookbook,
    Recipe, COOKBOOK_FORMAT_VERSION, TITLE_TERMS,
};
#[cfg(feature = "live-links")]
pub use links::HttpChecker;
pub use links::{
    check_links, check_links_parallel, extract_links, CachedChecker, LinkChecker, LinkStatus, ManifestChecker,
};
pub use pairs::{
    answer_has_code, export_score_curve, has_dead_links, pair_score, question_too_long, rank_pairs, select_pair,
    write_curve_csv, Pair, ANSWER_WEIGHT, QUESTION_WEIGHT,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("invalid build parameters: {0}")]
    InvalidParams(String),
    #[error("model was not fitted on this corpus")]
    ModelCorpusMismatch,
    #[error("thread {0} is in the corpus but not in the thread store")]
    MissingThread(u64),
    #[error(
        "only {recipes} recipes (need {r_min}) with the cutoff at {max_rank}, which already covers all {eligible_pairs} eligible pairs"
    )]
    InsufficientEligiblePairs { recipes: usize, r_min: usize, eligible_pairs: usize, max_rank: usize },
    #[error(transparent)]
    Topic(#[from] TopicError),
}
