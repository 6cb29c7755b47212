//! Cookbook build fixtures and an independent brute-force simulator of the relaxation loop.

use std::collections::BTreeMap;

use crowd_cookbook::builder::{build_cookbook, BuildError, BuildParams, Cookbook, ManifestChecker};
use crowd_cookbook::ingest::Thread;
use crowd_cookbook::textprep::Document;
use crowd_cookbook::topics::{Corpus, TopicModel};
use proptest::prelude::*;

use super::{answer, question, thread, CODE_BODY};

pub const TERMS: [&str; 6] = ["tabl", "column", "row", "cell", "viewer", "sort"];
pub const DEAD: &str = "http://dead.test/page";
pub const ALIVE: &str = "http://alive.test/page";

/// Everything a build needs, plus the raw inputs the simulator reads.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub threads: Vec<Thread>,
    pub theta: Vec<Vec<f64>>,
    pub k: usize,
}

impl Fixture {
    pub fn corpus(&self) -> Corpus {
        Corpus::new(
            self.threads
                .iter()
                .map(|t| Document { thread_id: t.id(), tokens: TERMS.iter().map(|s| s.to_string()).collect() })
                .collect(),
        )
    }

    pub fn model(&self) -> TopicModel {
        let corpus = self.corpus();
        let phi = (0..self.k)
            .map(|t| {
                let raw: Vec<f64> = (0..TERMS.len()).map(|w| 1.0 + ((w + 2 * t) % TERMS.len()) as f64).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / s).collect()
            })
            .collect();
        TopicModel {
            k: self.k,
            alpha: 0.1,
            beta: 0.01,
            seed: 42,
            iterations: 0,
            vocabulary: corpus.vocabulary().terms().to_vec(),
            thread_ids: corpus.thread_ids(),
            phi,
            theta: self.theta.clone(),
            assignments: corpus.doc_term_ids().iter().map(|d| vec![0; d.len()]).collect(),
        }
    }

    pub fn build(&self, params: &BuildParams) -> Result<Cookbook, BuildError> {
        build_cookbook("swt", &self.corpus(), &self.model(), &self.threads, params, &checker())
    }
}

pub fn checker() -> ManifestChecker {
    ManifestChecker::from_json(&format!(r#"{{"{DEAD}": 404, "{ALIVE}": 200}}"#)).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force relaxation loop, written against the raw fixture.

#[derive(Debug, Clone, PartialEq)]
pub struct SimPair {
    pub thread_id: u64,
    pub answer_id: u64,
    pub tenths: i64,
    pub answer_score: i64,
}

pub fn sim_eligible_answer(t: &Thread, limit: usize) -> Option<SimPair> {
    let q = &t.question;
    if q.body.chars().count() > limit || q.body.contains(DEAD) {
        return None;
    }
    let mut best: Option<&crowd_cookbook::ingest::Post> = None;
    for a in &t.answers {
        if !a.body.contains("<pre><code>") || a.body.contains(DEAD) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                let acc = |x: u64| q.accepted_answer_id == Some(x);
                a.score > b.score || (a.score == b.score && (acc(a.id), std::cmp::Reverse(a.id)) > (acc(b.id), std::cmp::Reverse(b.id)))
            }
        };
        if better {
            best = Some(a);
        }
    }
    best.map(|a| SimPair { thread_id: q.id, answer_id: a.id, tenths: 3 * q.score + 7 * a.score, answer_score: a.score })
}

pub fn sim_rank(f: &Fixture, limit: usize) -> BTreeMap<u64, usize> {
    let mut pairs: Vec<SimPair> = f.threads.iter().filter_map(|t| sim_eligible_answer(t, limit)).collect();
    pairs.sort_by_key(|p| (std::cmp::Reverse(p.tenths), std::cmp::Reverse(p.answer_score), p.thread_id, p.answer_id));
    pairs.iter().enumerate().map(|(i, p)| (p.thread_id, i + 1)).collect()
}

pub fn sim_dominant(row: &[f64]) -> (usize, f64) {
    let mut best = 0;
    for i in 0..row.len() {
        if row[i] > row[best] {
            best = i;
        }
    }
    (best, row[best])
}

/// (topic, thread ids in rank order) per chapter, in chapter order, and the final cutoff.
pub type SimBook = (Vec<(usize, Vec<u64>)>, usize);

pub fn sim_pass(f: &Fixture, p: &BuildParams, max_rank: usize) -> Vec<(usize, Vec<(usize, u64)>)> {
    let ranks = sim_rank(f, p.question_char_limit);
    let mut ids: Vec<u64> = f.threads.iter().map(Thread::id).collect();
    ids.sort_unstable();
    let mut chapters: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for (j, id) in ids.iter().enumerate() {
        let (topic, adherence) = sim_dominant(&f.theta[j]);
        if adherence >= p.ta {
            if let Some(&rank) = ranks.get(id) {
                if rank <= max_rank {
                    chapters.entry(topic).or_default().push((rank, *id));
                }
            }
        }
    }
    chapters.into_iter().filter(|(_, r)| r.len() >= p.min_chapter_size).collect()
}

pub fn simulate(f: &Fixture, p: &BuildParams) -> Option<SimBook> {
    let total = sim_rank(f, p.question_char_limit).len();
    let mut max_rank = p.initial_max_rank;
    loop {
        let chapters = sim_pass(f, p, max_rank);
        let count: usize = chapters.iter().map(|(_, r)| r.len()).sum();
        if count >= p.r_min {
            let mut out: Vec<(usize, Vec<u64>)> = chapters
                .into_iter()
                .map(|(t, mut r)| {
                    r.sort_unstable();
                    (t, r.into_iter().map(|(_, id)| id).collect())
                })
                .collect();
            out.sort_by_key(|(t, r)| (std::cmp::Reverse(r.len()), *t));
            return Some((out, max_rank));
        }
        if max_rank >= total {
            return None;
        }
        max_rank += p.rank_step;
    }
}

pub fn shape(c: &Cookbook) -> SimBook {
    (
        c.chapters.iter().map(|ch| (ch.topic_id, ch.recipes.iter().map(|r| r.pair.thread_id).collect())).collect(),
        c.final_max_rank,
    )
}

// ---------------------------------------------------------------------------
// Fixture generation.

#[derive(Debug, Clone)]
pub struct AnswerSpec {
    pub code: bool,
    pub dead: bool,
    pub score: i64,
}

#[derive(Debug, Clone)]
pub struct ThreadSpec {
    pub long: bool,
    pub dead: bool,
    pub score: i64,
    pub answers: Vec<AnswerSpec>,
    pub accepted: Option<usize>,
    pub weights: Vec<u32>,
}

pub fn make_fixture(k: usize, specs: &[ThreadSpec]) -> Fixture {
    let mut threads = Vec::new();
    let mut theta = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let qid = 100 + 10 * i as u64;
        let mut body = if s.long { "x".repeat(1301) } else { "<p>How do I sort rows?</p>".to_string() };
        body.push_str(&format!(r#"<a href="{}">ref</a>"#, if s.dead { DEAD } else { ALIVE }));
        let mut q = question(qid, "How to sort rows", &body, s.score);
        let answers: Vec<_> = s
            .answers
            .iter()
            .enumerate()
            .map(|(n, a)| {
                let mut b = if a.code { CODE_BODY.to_string() } else { "<p>use a sorter</p>".to_string() };
                if a.dead {
                    b.push_str(&format!(" see {DEAD} ."));
                }
                answer(qid + 1 + n as u64, qid, &b, a.score)
            })
            .collect();
        q.accepted_answer_id = s.accepted.and_then(|n| answers.get(n)).map(|a| a.id);
        threads.push(thread(q, answers));
        let w = &s.weights[..k];
        let sum: u32 = w.iter().sum();
        theta.push(w.iter().map(|&x| x as f64 / sum as f64).collect());
    }
    Fixture { threads, theta, k }
}

pub fn arb_answer() -> impl Strategy<Value = AnswerSpec> {
    (prop::bool::weighted(0.8), prop::bool::weighted(0.1), -3i64..15).prop_map(|(code, dead, score)| AnswerSpec { code, dead, score })
}

pub fn arb_thread() -> impl Strategy<Value = ThreadSpec> {
    (
        prop::bool::weighted(0.1),
        prop::bool::weighted(0.1),
        -3i64..15,
        prop::collection::vec(arb_answer(), 0..4),
        prop::option::of(0usize..4),
        prop::collection::vec(1u32..12, 4),
    )
        .prop_map(|(long, dead, score, answers, accepted, weights)| ThreadSpec { long, dead, score, answers, accepted, weights })
}

pub fn arb_params() -> impl Strategy<Value = BuildParams> {
    (1usize..20, prop::sample::select(vec![0.0, 0.25, 0.3, 0.4, 0.5, 0.7]), 1usize..12, 1usize..6, 1usize..5).prop_map(
        |(r_min, ta, initial_max_rank, rank_step, min_chapter_size)| BuildParams {
            r_min,
            ta,
            initial_max_rank,
            rank_step,
            min_chapter_size,
            question_char_limit: 1300,
        },
    )
}

pub fn arb_fixture() -> impl Strategy<Value = Fixture> {
    (2usize..5, prop::collection::vec(arb_thread(), 1..45)).prop_map(|(k, specs)| make_fixture(k, &specs))
}

/// Three topics, twelve eligible pairs with distinct scores, four per topic.
pub fn twelve_pairs() -> Fixture {
    let specs: Vec<ThreadSpec> = (0..12)
        .map(|i| {
            let topic = i % 3;
            let mut weights = vec![1, 1, 1, 1];
            weights[topic] = 6;
            ThreadSpec {
                long: false,
                dead: false,
                score: 2 * i as i64,
                answers: vec![AnswerSpec { code: true, dead: false, score: 30 - i as i64 }],
                accepted: None,
                weights,
            }
        })
        .collect();
    make_fixture(3, &specs)
}

