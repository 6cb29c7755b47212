//! Crowd cookbooks: API cookbooks mined from Stack Overflow.
//!
//! The pipeline selects the threads of one API tag from a Posts dump, keeps
//! the how-to-do-it questions, groups them into chapters with LDA and fills
//! each chapter with the best-scored eligible question–answer pairs.

pub mod builder;
pub mod classify;
pub mod emit;
pub mod ingest;
pub mod textprep;
pub mod topics;
