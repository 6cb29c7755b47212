use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::textprep::Document;

/// Bidirectional token ↔ index map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: usize) -> Option<&str> {
        self.terms.get(id).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    fn intern(&mut self, term: &str) -> usize {
        if let Some(&id) = self.index.get(term) {
            return id;
        }
        self.terms.push(term.to_string());
        self.index.insert(term.to_string(), self.terms.len() - 1);
        self.terms.len() - 1
    }
}

impl From<Vec<String>> for Vocabulary {
    fn from(terms: Vec<String>) -> Self {
        let mut v = Vocabulary::default();
        for t in &terms {
            v.intern(t);
        }
        v
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.terms
    }
}

/// The LDA input: documents in ascending thread id order, with their tokens mapped to vocabulary ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    vocabulary: Vocabulary,
    doc_term_ids: Vec<Vec<usize>>,
}

impl Corpus {
    /// Builds a corpus. Documents are reordered by ascending thread id so the
    /// fitted model does not depend on input order; vocabulary ids follow first
    /// occurrence in that order.
    pub fn new(mut documents: Vec<Document>) -> Self {
        documents.sort_by_key(|d| d.thread_id);
        let mut vocabulary = Vocabulary::default();
        let doc_term_ids = documents
            .iter()
            .map(|d| d.tokens.iter().map(|t| vocabulary.intern(t)).collect())
            .collect();
        Self { documents, vocabulary, doc_term_ids }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn doc_term_ids(&self) -> &[Vec<usize>] {
        &self.doc_term_ids
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.doc_term_ids.iter().map(Vec::len).sum()
    }

    pub fn thread_ids(&self) -> Vec<u64> {
        self.documents.iter().map(|d| d.thread_id).collect()
    }

    /// Corpus frequency of every vocabulary term.
    pub fn term_frequencies(&self) -> Vec<usize> {
        let mut freq = vec![0; self.vocabulary.len()];
        for ids in &self.doc_term_ids {
            for &w in ids {
                freq[w] += 1;
            }
        }
        freq
    }
}
