//! Recipe eligibility, pair scoring and the pair ranking.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::links::{extract_links, LinkChecker};
use crate::ingest::{Post, Thread};
use crate::textprep::strip_code;

/// Weight of the question score in the pair score.
pub const QUESTION_WEIGHT: f64 = 0.3;
/// Weight of the answer score in the pair score.
pub const ANSWER_WEIGHT: f64 = 0.7;

/// A question with one of its answers: a candidate recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub thread_id: u64,
    pub question: Post,
    pub answer: Post,
    pub score: f64,
    /// 1-based ranking position; 0 until [`rank_pairs`] assigns it.
    pub rank: usize,
}

impl Pair {
    pub fn new(question: Post, answer: Post) -> Self {
        Self {
            thread_id: question.id,
            score: pair_score(question.score, answer.score),
            question,
            answer,
            rank: 0,
        }
    }
}

/// Weighted mean `0.3 * question + 0.7 * answer`.
///
/// Computed as `(3q + 7a) / 10` in integer arithmetic first, so the result is
/// the correctly rounded value (e.g. exactly 17.0 for (10, 20)).
pub fn pair_score(question_score: i64, answer_score: i64) -> f64 {
    let tenths = 3 * question_score as i128 + 7 * answer_score as i128;
    tenths as f64 / 10.0
}

/// The answer carries at least one `<pre><code>` snippet.
pub fn answer_has_code(answer: &Post) -> bool {
    !strip_code(&answer.body).code_blocks.is_empty()
}

/// Raw dump body length (markup included) is strictly above `limit` characters.
pub fn question_too_long(question: &Post, limit: usize) -> bool {
    question.body_chars() > limit
}

pub fn has_dead_links(post: &Post, checker: &dyn LinkChecker) -> bool {
    extract_links(&post.body).iter().any(|u| !checker.check(u).alive)
}

/// Best eligible pair of a thread.
///
/// The question must not be too long and must have no dead links. Among
/// answers that carry code and have no dead links, the highest-scored wins;
/// ties go to the accepted answer, then to the lowest answer id.
pub fn select_pair(thread: &Thread, checker: &dyn LinkChecker, limit: usize) -> Option<Pair> {
    let question = &thread.question;
    if question_too_long(question, limit) || has_dead_links(question, checker) {
        return None;
    }
    thread
        .answers
        .iter()
        .filter(|a| answer_has_code(a) && !has_dead_links(a, checker))
        .min_by(|a, b| {
            b.score
                .cmp(&a.score)
                .then_with(|| thread.is_accepted(b).cmp(&thread.is_accepted(a)))
                .then_with(|| a.id.cmp(&b.id))
        })
        .map(|answer| Pair::new(question.clone(), answer.clone()))
}

/// Sorts pairs best first and assigns 1-based ranks.
///
/// Order: pair score descending, then answer score descending, then question id ascending.
pub fn rank_pairs(mut pairs: Vec<Pair>) -> Vec<Pair> {
    pairs.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| b.answer.score.cmp(&a.answer.score))
            .then_with(|| a.question.id.cmp(&b.question.id))
            .then_with(|| a.answer.id.cmp(&b.answer.id))
    });
    for (i, p) in pairs.iter_mut().enumerate() {
        p.rank = i + 1;
    }
    pairs
}

/// `(rank, score)` points of a ranking, for choosing the initial cutoff by eye.
pub fn export_score_curve(ranked: &[Pair]) -> Vec<(usize, f64)> {
    ranked.iter().map(|p| (p.rank, p.score)).collect()
}

pub fn write_curve_csv<W: Write>(curve: &[(usize, f64)], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank", "score"])?;
    for (rank, score) in curve {
        w.write_record([rank.to_string(), score.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::links::ManifestChecker;
    use crate::ingest::{parse_dump_date, PostType};

    fn post(id: u64, kind: PostType, score: i64, body: &str) -> Post {
        Post {
            id,
            post_type: kind,
            parent_id: (kind == PostType::Answer).then_some(1),
            title: (kind == PostType::Question).then(|| "How to sort".to_string()),
            body: body.into(),
            tags: vec![],
            score,
            accepted_answer_id: None,
            creation_date: parse_dump_date("2012-01-01T00:00:00").unwrap(),
        }
    }

    const CODE: &str = "<p>Use this:</p><pre><code>table.sort();</code></pre>";

    #[test]
    fn weighted_scores() {
        assert_eq!(pair_score(10, 20), 17.0);
        assert_eq!(pair_score(0, 0), 0.0);
        assert_eq!(pair_score(-2, 4), 2.2);
        assert_eq!(QUESTION_WEIGHT + ANSWER_WEIGHT, 1.0);
    }

    #[test]
    fn code_detection() {
        assert!(answer_has_code(&post(2, PostType::Answer, 0, CODE)));
        assert!(!answer_has_code(&post(2, PostType::Answer, 0, "<p>call <code>sort()</code></p>")));
        assert!(!answer_has_code(&post(2, PostType::Answer, 0, "just words")));
    }

    #[test]
    fn length_limit_is_strict() {
        let q = |n: usize| post(1, PostType::Question, 0, &"x".repeat(n));
        assert!(!question_too_long(&q(1300), 1300));
        assert!(question_too_long(&q(1301), 1300));
        assert!(!question_too_long(&q(0), 1300));
    }

    #[test]
    fn lower_scored_answer_with_code_wins() {
        let thread = Thread {
            question: post(1, PostType::Question, 3, "<p>q</p>"),
            answers: vec![post(2, PostType::Answer, 10, "no code"), post(3, PostType::Answer, 4, CODE)],
        };
        let pair = select_pair(&thread, &ManifestChecker::default(), 1300).unwrap();
        assert_eq!(pair.answer.id, 3);
        assert_eq!(pair.score, pair_score(3, 4));
    }

    #[test]
    fn long_question_has_no_pair() {
        let thread = Thread {
            question: post(1, PostType::Question, 3, &"y".repeat(2000)),
            answers: vec![post(2, PostType::Answer, 1, CODE)],
        };
        assert!(select_pair(&thread, &ManifestChecker::default(), 1300).is_none());
    }

    #[test]
    fn dead_links_disqualify() {
        let dead = format!("{CODE}<a href=\"http://gone.test/\">docs</a>");
        let thread = Thread {
            question: post(1, PostType::Question, 3, "<p>q</p>"),
            answers: vec![post(2, PostType::Answer, 1, &dead)],
        };
        let checker = ManifestChecker::from_json(r#"{"http://gone.test/": 404}"#).unwrap();
        assert!(select_pair(&thread, &checker, 1300).is_none());

        let alive = ManifestChecker::from_json(r#"{"http://gone.test/": 200}"#).unwrap();
        assert!(select_pair(&thread, &alive, 1300).is_some());

        let dead_question = Thread {
            question: post(1, PostType::Question, 3, "<a href=\"http://gone.test/\">x</a>"),
            answers: vec![post(2, PostType::Answer, 1, CODE)],
        };
        assert!(select_pair(&dead_question, &checker, 1300).is_none());
    }

    #[test]
    fn accepted_answer_breaks_ties() {
        let mut question = post(1, PostType::Question, 0, "q");
        question.accepted_answer_id = Some(5);
        let thread = Thread {
            question,
            answers: vec![post(4, PostType::Answer, 2, CODE), post(5, PostType::Answer, 2, CODE), post(3, PostType::Answer, 2, CODE)],
        };
        assert_eq!(select_pair(&thread, &ManifestChecker::default(), 1300).unwrap().answer.id, 5);
        let mut no_accept = thread.clone();
        no_accept.question.accepted_answer_id = None;
        assert_eq!(select_pair(&no_accept, &ManifestChecker::default(), 1300).unwrap().answer.id, 3);
    }

    fn pair(qid: u64, qs: i64, aid: u64, as_: i64) -> Pair {
        let mut q = post(qid, PostType::Question, qs, "");
        q.id = qid;
        Pair::new(q, post(aid, PostType::Answer, as_, ""))
    }

    #[test]
    fn ranking_order() {
        // 3.1, then 9.4 reached three ways with answer scores 7, 13 and 10.
        let pairs = vec![pair(1, 1, 10, 4), pair(2, 15, 11, 7), pair(3, 1, 12, 13), pair(4, 8, 13, 10)];
        assert_eq!(pairs[0].score, 3.1);
        assert!(pairs[1..].iter().all(|p| p.score == 9.4));
        let ranked = rank_pairs(pairs);
        let ids: Vec<u64> = ranked.iter().map(|p| p.question.id).collect();
        let ranks: Vec<usize> = ranked.iter().map(|p| p.rank).collect();
        assert_eq!(ids, vec![3, 4, 2, 1]);
        assert_eq!(ranks, vec![1, 2, 3, 4]);
        assert!(rank_pairs(vec![]).is_empty());
        assert_eq!(rank_pairs(vec![pair(7, 0, 8, 0)])[0].rank, 1);
    }

    #[test]
    fn curve_csv() {
        let ranked = rank_pairs(vec![pair(1, 0, 2, 1), pair(3, 0, 4, 5), pair(5, 0, 6, 3)]);
        let curve = export_score_curve(&ranked);
        assert_eq!(curve.len(), 3);
        assert!(curve.windows(2).all(|w| w[0].1 >= w[1].1));
        let mut buf = Vec::new();
        write_curve_csv(&curve, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "rank,score\n1,3.5\n2,2.1\n3,0.7\n");
        assert!(export_score_curve(&[]).is_empty());
    }
}
