//! Rule-based how-to-do-it question filter and its evaluation harness.

mod metrics;
mod rules;

use thiserror::Error;

pub use metrics::{evaluate, evaluate_with, join_gold, read_gold_labels, Confusion, EvalMetrics};
pub use rules::{
    classify, code_has_error, contains_how, has_debug_terms, ClassifiedThread, Classifier, Label, MatchPolicy, Rule,
    DEBUG_TERMS,
};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("cannot evaluate an empty labeled dataset")]
    EmptyDataset,
    #[error("gold label file: {0}")]
    BadGoldFile(String),
    #[error("gold label refers to unknown thread {0}")]
    UnknownThread(u64),
}
