//! Turning threads into LDA-ready token documents.
//!
//! The path for every thread is: discard `<pre><code>` snippets, strip the
//! remaining markup, tokenize, drop stopwords and Porter-stem what is left.

mod html;
mod porter;
mod tokens;

use std::collections::BTreeMap;

use log::debug;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Thread;

pub(crate) use html::{pieces, Piece};
pub use html::{strip_code, strip_html, CleanedBody};
pub use porter::porter_stem;
pub(crate) use tokens::words;
pub use tokens::{tokenize, StopwordList, DEFAULT_STOPWORDS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextprepError {
    #[error("thread {thread_id} has no tokens left after preprocessing")]
    EmptyDocument { thread_id: u64 },
}

/// The preprocessed token stream of one thread.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub thread_id: u64,
    pub tokens: Vec<String>,
}

/// Natural-language text of a post body: code blocks removed, markup stripped.
pub fn prose(body: &str) -> String {
    strip_html(&strip_code(body).text)
}

/// Counts of the surface words that produced each stem.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceForms {
    forms: BTreeMap<String, BTreeMap<String, usize>>,
}

impl SurfaceForms {
    pub fn record(&mut self, stem: &str, surface: &str) {
        *self.forms.entry(stem.to_string()).or_default().entry(surface.to_string()).or_default() += 1;
    }

    /// Most frequent surface word for a stem; ties go to the alphabetically first word.
    pub fn most_frequent(&self, stem: &str) -> Option<&str> {
        self.forms.get(stem)?.iter().fold(None, |best: Option<(&str, usize)>, (w, &n)| match best {
            Some((_, m)) if m >= n => best,
            _ => Some((w.as_str(), n)),
        })
        .map(|(w, _)| w)
    }

    pub fn merge(&mut self, other: &SurfaceForms) {
        for (stem, forms) in &other.forms {
            let slot = self.forms.entry(stem.clone()).or_default();
            for (w, n) in forms {
                *slot.entry(w.clone()).or_default() += n;
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Preprocessor {
    pub stopwords: StopwordList,
}

impl Preprocessor {
    pub fn new(stopwords: StopwordList) -> Self {
        Self { stopwords }
    }

    /// Title, question body and each answer body, in thread order, as plain text.
    pub fn thread_text(thread: &Thread) -> String {
        let mut parts = Vec::with_capacity(thread.answers.len() + 2);
        // Dump titles are plain text already.
        parts.push(thread.question.title_or_empty().to_string());
        parts.push(prose(&thread.question.body));
        parts.extend(thread.answers.iter().map(|a| prose(&a.body)));
        parts.join(" ")
    }

    fn surface_tokens(&self, thread: &Thread) -> Vec<String> {
        self.stopwords.remove_stopwords(tokenize(&Self::thread_text(thread)))
    }

    pub fn build_document(&self, thread: &Thread) -> Result<Document, TextprepError> {
        let tokens: Vec<String> = self.surface_tokens(thread).iter().map(|t| porter_stem(t)).collect();
        if tokens.is_empty() {
            debug!("thread {} produced an empty document", thread.id());
            return Err(TextprepError::EmptyDocument { thread_id: thread.id() });
        }
        Ok(Document { thread_id: thread.id(), tokens })
    }

    /// Like [`build_document`](Self::build_document), also recording which surface words fed each stem.
    pub fn build_document_with_forms(
        &self,
        thread: &Thread,
        forms: &mut SurfaceForms,
    ) -> Result<Document, TextprepError> {
        let surface = self.surface_tokens(thread);
        let tokens: Vec<String> = surface
            .iter()
            .map(|t| {
                let stem = porter_stem(t);
                forms.record(&stem, t);
                stem
            })
            .collect();
        if tokens.is_empty() {
            return Err(TextprepError::EmptyDocument { thread_id: thread.id() });
        }
        Ok(Document { thread_id: thread.id(), tokens })
    }
}

/// Outcome of preprocessing a batch of threads.
#[derive(Debug, Clone, Default)]
pub struct CorpusBuild {
    pub documents: Vec<Document>,
    /// Threads excluded because nothing survived preprocessing.
    pub empty: Vec<u64>,
    pub forms: SurfaceForms,
}

pub fn build_documents(pre: &Preprocessor, threads: &[Thread]) -> CorpusBuild {
    let mut out = CorpusBuild::default();
    for thread in threads {
        match pre.build_document_with_forms(thread, &mut out.forms) {
            Ok(doc) => out.documents.push(doc),
            Err(TextprepError::EmptyDocument { thread_id }) => out.empty.push(thread_id),
        }
    }
    out
}
