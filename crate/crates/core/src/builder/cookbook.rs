//! Filling topics with ranked recipes until the cookbook is big enough.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::links::LinkChecker;
use super::pairs::{rank_pairs, select_pair, Pair};
use super::BuildError;
use crate::ingest::Thread;
use crate::topics::{Corpus, TopicModel};

/// Version of the cookbook JSON layout.
pub const COOKBOOK_FORMAT_VERSION: u32 = 1;

/// Number of top topic terms used as a chapter title.
pub const TITLE_TERMS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BuildParams {
    /// Minimum number of recipes the cookbook must reach.
    pub r_min: usize,
    /// Minimum adherence of a document to its dominant topic.
    pub ta: f64,
    /// Starting ranking cutoff.
    pub initial_max_rank: usize,
    /// Cutoff increase per relaxation round.
    pub rank_step: usize,
    pub min_chapter_size: usize,
    pub question_char_limit: usize,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self { r_min: 64, ta: 0.5, initial_max_rank: 200, rank_step: 10, min_chapter_size: 3, question_char_limit: 1300 }
    }
}

impl BuildParams {
    pub fn validate(&self) -> Result<(), BuildError> {
        let bad = |msg: &str| Err(BuildError::InvalidParams(msg.to_string()));
        if self.r_min < 1 {
            return bad("r_min must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.ta) {
            return bad("ta must lie in [0, 1]");
        }
        if self.rank_step < 1 {
            return bad("rank_step must be at least 1");
        }
        if self.min_chapter_size < 1 {
            return bad("min_chapter_size must be at least 1");
        }
        if self.question_char_limit < 1 {
            return bad("question_char_limit must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub pair: Pair,
    pub adherence: f64,
    pub dominant_topic: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chapter {
    pub topic_id: usize,
    /// Top topic terms, as stems.
    pub title_terms: Vec<String>,
    /// Best pair score first.
    pub recipes: Vec<Recipe>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cookbook {
    pub format_version: u32,
    pub api_tag: String,
    pub params: BuildParams,
    pub model_seed: u64,
    pub final_max_rank: usize,
    pub chapters: Vec<Chapter>,
}

impl Cookbook {
    pub fn recipe_count(&self) -> usize {
        self.chapters.iter().map(|c| c.recipes.len()).sum()
    }

    pub fn recipes(&self) -> impl Iterator<Item = &Recipe> {
        self.chapters.iter().flat_map(|c| c.recipes.iter())
    }
}

/// What one corpus document contributes to the build.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub thread_id: u64,
    pub dominant_topic: usize,
    pub adherence: f64,
    /// The document's eligible pair with its rank, if it has one.
    pub pair: Option<Pair>,
}

/// Drops chapters with fewer than `min_size` recipes, keeping the rest in order.
pub fn remove_small_chapters(mut cookbook: Cookbook, min_size: usize) -> Cookbook {
    cookbook.chapters = drop_small(cookbook.chapters, min_size);
    cookbook
}

fn drop_small(chapters: Vec<Chapter>, min_size: usize) -> Vec<Chapter> {
    chapters.into_iter().filter(|c| c.recipes.len() >= min_size).collect()
}

/// Dominant topics, adherences and ranked eligible pairs for every corpus document.
///
/// Eligibility (including link checks) is evaluated once per document here;
/// the relaxation loop only reads the result. Returns the candidates and the
/// number of ranked pairs.
pub fn prepare_candidates(
    corpus: &Corpus,
    model: &TopicModel,
    threads: &[Thread],
    params: &BuildParams,
    checker: &dyn LinkChecker,
) -> Result<(Vec<Candidate>, usize), BuildError> {
    if model.thread_ids != corpus.thread_ids() {
        return Err(BuildError::ModelCorpusMismatch);
    }
    let by_id: HashMap<u64, &Thread> = threads.iter().map(|t| (t.id(), t)).collect();
    let mut pairs = Vec::new();
    let mut topics = Vec::with_capacity(corpus.len());
    for (j, doc) in corpus.documents().iter().enumerate() {
        let thread = by_id.get(&doc.thread_id).ok_or(BuildError::MissingThread(doc.thread_id))?;
        topics.push(model.dominant_topic(j)?);
        if let Some(pair) = select_pair(thread, checker, params.question_char_limit) {
            pairs.push(pair);
        }
    }
    let ranked = rank_pairs(pairs);
    let total = ranked.len();
    let mut by_thread: HashMap<u64, Pair> = ranked.into_iter().map(|p| (p.thread_id, p)).collect();
    let candidates = corpus
        .documents()
        .iter()
        .zip(topics)
        .map(|(doc, (dominant_topic, adherence))| Candidate {
            thread_id: doc.thread_id,
            dominant_topic,
            adherence,
            pair: by_thread.remove(&doc.thread_id),
        })
        .collect();
    Ok((candidates, total))
}

/// The relaxation loop over prepared candidates.
///
/// Each round starts from an empty cookbook, admits every document whose
/// adherence reaches `ta` and whose pair ranks within the current cutoff,
/// removes small chapters, and stops once the remaining recipes reach
/// `r_min`. Otherwise the cutoff grows by `rank_step`. When the cutoff already
/// covers every ranked pair and the cookbook is still short, the build fails.
///
/// Returns the surviving chapters keyed by topic (recipes best first) and the final cutoff.
pub fn run_rounds(
    candidates: &[Candidate],
    total_pairs: usize,
    params: &BuildParams,
) -> Result<(BTreeMap<usize, Vec<Recipe>>, usize), BuildError> {
    params.validate()?;
    let mut max_rank = params.initial_max_rank;
    loop {
        let mut chapters: BTreeMap<usize, Vec<Recipe>> = BTreeMap::new();
        for c in candidates {
            if c.adherence < params.ta {
                continue;
            }
            let Some(pair) = &c.pair else { continue };
            if pair.rank <= max_rank {
                chapters.entry(c.dominant_topic).or_default().push(Recipe {
                    pair: pair.clone(),
                    adherence: c.adherence,
                    dominant_topic: c.dominant_topic,
                });
            }
        }
        chapters.retain(|_, recipes| recipes.len() >= params.min_chapter_size);
        let recipes: usize = chapters.values().map(Vec::len).sum();
        if recipes >= params.r_min {
            for recipes in chapters.values_mut() {
                recipes.sort_by_key(|r| r.pair.rank);
            }
            return Ok((chapters, max_rank));
        }
        if max_rank >= total_pairs {
            return Err(BuildError::InsufficientEligiblePairs {
                recipes,
                r_min: params.r_min,
                eligible_pairs: total_pairs,
                max_rank,
            });
        }
        max_rank += params.rank_step;
    }
}

/// Builds a cookbook for `api_tag` from a fitted model and the threads behind its corpus.
pub fn build_cookbook(
    api_tag: &str,
    corpus: &Corpus,
    model: &TopicModel,
    threads: &[Thread],
    params: &BuildParams,
    checker: &dyn LinkChecker,
) -> Result<Cookbook, BuildError> {
    params.validate()?;
    let (candidates, total) = prepare_candidates(corpus, model, threads, params, checker)?;
    let (by_topic, final_max_rank) = run_rounds(&candidates, total, params)?;
    let mut chapters = by_topic
        .into_iter()
        .map(|(topic_id, recipes)| {
            let title_terms = model.topic_terms(topic_id, TITLE_TERMS)?.into_iter().map(|(t, _)| t).collect();
            Ok(Chapter { topic_id, title_terms, recipes })
        })
        .collect::<Result<Vec<_>, BuildError>>()?;
    chapters.sort_by(|a, b| b.recipes.len().cmp(&a.recipes.len()).then(a.topic_id.cmp(&b.topic_id)));
    Ok(Cookbook {
        format_version: COOKBOOK_FORMAT_VERSION,
        api_tag: api_tag.to_string(),
        params: *params,
        model_seed: model.seed,
        final_max_rank,
        chapters,
    })
}
