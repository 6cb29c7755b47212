//! Topic discovery over the how-to-do-it corpus.

mod checkpoint;
mod corpus;
mod lda;

use thiserror::Error;

pub use checkpoint::{load_model, read_model, save_model, write_model, MODEL_FORMAT, MODEL_VERSION};
pub use corpus::{Corpus, Vocabulary};
pub use lda::{fit, Alpha, GibbsSampler, LdaParams, TopicModel, DEFAULT_SEED};

#[derive(Debug, Error)]
pub enum TopicError {
    #[error("corpus has {docs} documents, fewer than the {k} topics requested")]
    CorpusTooSmall { docs: usize, k: usize },
    #[error("document {doc} (thread {thread_id}) has no tokens")]
    EmptyDocumentInCorpus { doc: usize, thread_id: u64 },
    #[error("invalid LDA parameters: {0}")]
    InvalidParams(String),
    #[error("topic {topic} out of range (k = {k})")]
    TopicOutOfRange { topic: usize, k: usize },
    #[error("document {doc} out of range ({docs} documents)")]
    DocOutOfRange { doc: usize, docs: usize },
    #[error("topic assignments do not match the corpus")]
    AssignmentMismatch,
    #[error("model checkpoint: {0}")]
    Checkpoint(String),
}
