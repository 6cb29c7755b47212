//! Post-hoc checks that a built cookbook obeys every inclusion rule.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cookbook::{Cookbook, TITLE_TERMS};
use super::links::LinkChecker;
use super::pairs::{answer_has_code, has_dead_links, question_too_long};
use crate::topics::TopicModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    AnswerWithoutCode { thread_id: u64 },
    DeadLink { thread_id: u64 },
    QuestionTooLong { thread_id: u64, chars: usize },
    LowAdherence { thread_id: u64, adherence: f64 },
    RankBeyondCutoff { thread_id: u64, rank: usize },
    WrongChapter { thread_id: u64, topic: usize, chapter: usize },
    DuplicateThread { thread_id: u64 },
    AnswerNotInThread { thread_id: u64 },
    SmallChapter { topic_id: usize, recipes: usize },
    BadTitle { topic_id: usize },
    TooFewRecipes { recipes: usize },
    /// Adherence or dominant topic disagrees with the model.
    ModelDisagrees { thread_id: u64 },
    UnorderedRecipes { topic_id: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Lists every rule a cookbook breaks. An empty list means the cookbook is sound.
///
/// With a model, each recipe's dominant topic and adherence are also
/// recomputed from theta and compared.
pub fn audit(cookbook: &Cookbook, checker: &dyn LinkChecker, model: Option<&TopicModel>) -> Vec<Violation> {
    let p = &cookbook.params;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let doc_index = model.map(|m| m.thread_ids.iter().enumerate().map(|(j, &t)| (t, j)).collect::<std::collections::HashMap<_, _>>());
    for chapter in &cookbook.chapters {
        if chapter.recipes.len() < p.min_chapter_size {
            out.push(Violation::SmallChapter { topic_id: chapter.topic_id, recipes: chapter.recipes.len() });
        }
        let distinct: HashSet<&String> = chapter.title_terms.iter().collect();
        if chapter.title_terms.len() != TITLE_TERMS || distinct.len() != TITLE_TERMS {
            out.push(Violation::BadTitle { topic_id: chapter.topic_id });
        }
        if chapter.recipes.windows(2).any(|w| w[0].pair.score < w[1].pair.score) {
            out.push(Violation::UnorderedRecipes { topic_id: chapter.topic_id });
        }
        for r in &chapter.recipes {
            let id = r.pair.thread_id;
            let (q, a) = (&r.pair.question, &r.pair.answer);
            if !seen.insert(id) {
                out.push(Violation::DuplicateThread { thread_id: id });
            }
            if a.parent_id != Some(q.id) || q.id != id {
                out.push(Violation::AnswerNotInThread { thread_id: id });
            }
            if !answer_has_code(a) {
                out.push(Violation::AnswerWithoutCode { thread_id: id });
            }
            if has_dead_links(q, checker) || has_dead_links(a, checker) {
                out.push(Violation::DeadLink { thread_id: id });
            }
            if question_too_long(q, p.question_char_limit) {
                out.push(Violation::QuestionTooLong { thread_id: id, chars: q.body_chars() });
            }
            if r.adherence < p.ta {
                out.push(Violation::LowAdherence { thread_id: id, adherence: r.adherence });
            }
            if r.pair.rank < 1 || r.pair.rank > cookbook.final_max_rank {
                out.push(Violation::RankBeyondCutoff { thread_id: id, rank: r.pair.rank });
            }
            if r.dominant_topic != chapter.topic_id {
                out.push(Violation::WrongChapter { thread_id: id, topic: r.dominant_topic, chapter: chapter.topic_id });
            }
            if let (Some(m), Some(index)) = (model, &doc_index) {
                let agrees = index
                    .get(&id)
                    .and_then(|&j| m.dominant_topic(j).ok())
                    .is_some_and(|(t, adh)| t == r.dominant_topic && adh == r.adherence);
                if !agrees {
                    out.push(Violation::ModelDisagrees { thread_id: id });
                }
            }
        }
    }
    let total = cookbook.recipe_count();
    if total < p.r_min {
        out.push(Violation::TooFewRecipes { recipes: total });
    }
    out
}
