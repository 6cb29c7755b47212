use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ingest::{Post, Thread};
use crate::textprep::{strip_code, strip_html, words};

/// Terms that mark a question as debug-corrective when they appear in its body.
pub const DEBUG_TERMS: [&str; 9] = ["fail", "problem", "error", "wrong", "fix", "bug", "issue", "solve", "trouble"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    HowToDoIt,
    Other,
}

/// A rule that failed for a question, excluding it from the how-to-do-it class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// "how" appears neither in the title nor in the body prose.
    NoHow,
    /// One of [`DEBUG_TERMS`] appears in the body prose.
    DebugTermInBody,
    /// "error" appears inside a code snippet.
    ErrorInCode,
}

/// How a rule term is looked for in a piece of text. Matching is always case-insensitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchPolicy {
    /// The term must be a whole token (text split on non-alphanumerics).
    WholeWord,
    /// The term may appear anywhere, e.g. inside `onError`.
    Substring,
}

impl MatchPolicy {
    pub fn matches(self, text: &str, term: &str) -> bool {
        let term = term.to_lowercase();
        match self {
            MatchPolicy::WholeWord => words(text).any(|w| w == term),
            MatchPolicy::Substring => text.to_lowercase().contains(&term),
        }
    }

    pub fn matches_any(self, text: &str, terms: &[&str]) -> bool {
        match self {
            MatchPolicy::WholeWord => words(text).any(|w| terms.contains(&w.as_str())),
            MatchPolicy::Substring => {
                let lower = text.to_lowercase();
                terms.iter().any(|t| lower.contains(t))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedThread {
    #[serde(flatten)]
    pub thread: Thread,
    pub label: Label,
    pub triggered_rules: BTreeSet<Rule>,
}

/// The three-rule how-to-do-it gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classifier {
    /// Policy for rules over prose (title and body text).
    pub prose: MatchPolicy,
    /// Policy for the rule over code snippets.
    pub code: MatchPolicy,
}

impl Default for Classifier {
    fn default() -> Self {
        Self { prose: MatchPolicy::WholeWord, code: MatchPolicy::Substring }
    }
}

struct QuestionText {
    title: String,
    prose: String,
    code: String,
}

impl QuestionText {
    fn of(question: &Post) -> Self {
        let cleaned = strip_code(&question.body);
        Self {
            title: question.title_or_empty().to_string(),
            prose: strip_html(&cleaned.text),
            code: cleaned.code_blocks.join("\n"),
        }
    }
}

impl Classifier {
    pub fn contains_how(&self, question: &Post) -> bool {
        self.how_in(&QuestionText::of(question))
    }

    pub fn has_debug_terms(&self, question: &Post) -> bool {
        self.debug_in(&QuestionText::of(question))
    }

    pub fn code_has_error(&self, question: &Post) -> bool {
        self.error_in(&QuestionText::of(question))
    }

    fn how_in(&self, q: &QuestionText) -> bool {
        self.prose.matches(&q.title, "how") || self.prose.matches(&q.prose, "how")
    }

    fn debug_in(&self, q: &QuestionText) -> bool {
        self.prose.matches_any(&q.prose, &DEBUG_TERMS)
    }

    fn error_in(&self, q: &QuestionText) -> bool {
        self.code.matches(&q.code, "error")
    }

    /// Failed rules for a question; empty means how-to-do-it.
    pub fn triggered_rules(&self, question: &Post) -> BTreeSet<Rule> {
        let text = QuestionText::of(question);
        let mut rules = BTreeSet::new();
        if !self.how_in(&text) {
            rules.insert(Rule::NoHow);
        }
        if self.debug_in(&text) {
            rules.insert(Rule::DebugTermInBody);
        }
        if self.error_in(&text) {
            rules.insert(Rule::ErrorInCode);
        }
        rules
    }

    pub fn label(&self, question: &Post) -> Label {
        if self.triggered_rules(question).is_empty() {
            Label::HowToDoIt
        } else {
            Label::Other
        }
    }

    pub fn classify(&self, thread: &Thread) -> ClassifiedThread {
        let triggered_rules = self.triggered_rules(&thread.question);
        let label = if triggered_rules.is_empty() { Label::HowToDoIt } else { Label::Other };
        ClassifiedThread { thread: thread.clone(), label, triggered_rules }
    }
}

pub fn contains_how(question: &Post) -> bool {
    Classifier::default().contains_how(question)
}

pub fn has_debug_terms(question: &Post) -> bool {
    Classifier::default().has_debug_terms(question)
}

pub fn code_has_error(question: &Post) -> bool {
    Classifier::default().code_has_error(question)
}

pub fn classify(thread: &Thread) -> ClassifiedThread {
    Classifier::default().classify(thread)
}
