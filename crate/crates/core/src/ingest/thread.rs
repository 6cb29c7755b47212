use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::post::Post;

/// A question together with all of its answers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thread {
    pub question: Post,
    #[serde(default)]
    pub answers: Vec<Post>,
}

impl Thread {
    pub fn id(&self) -> u64 {
        self.question.id
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.question.tags.iter().any(|t| t == tag)
    }

    pub fn is_accepted(&self, answer: &Post) -> bool {
        self.question.accepted_answer_id == Some(answer.id)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyReport {
    pub threads: usize,
    /// Answers whose parent question never appeared in the input.
    pub orphan_answers: usize,
    pub duplicate_answers: usize,
}

/// Groups posts into threads, one per question, in question input order.
///
/// Answers are attached to their parent and ordered by descending score, then
/// ascending id. Orphans and repeated answer ids are dropped and counted.
pub fn assemble_threads<I>(posts: I) -> (Vec<Thread>, AssemblyReport)
where
    I: IntoIterator<Item = Post>,
{
    let mut threads: Vec<Thread> = Vec::new();
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut pending: Vec<Post> = Vec::new();

    for post in posts {
        if post.is_question() {
            index.entry(post.id).or_insert_with(|| {
                threads.push(Thread { question: post, answers: Vec::new() });
                threads.len() - 1
            });
        } else {
            pending.push(post);
        }
    }

    let mut report = AssemblyReport { threads: threads.len(), ..Default::default() };
    for answer in pending {
        match answer.parent_id.and_then(|p| index.get(&p)) {
            Some(&slot) => {
                let thread = &mut threads[slot];
                if thread.answers.iter().any(|a| a.id == answer.id) {
                    report.duplicate_answers += 1;
                } else {
                    thread.answers.push(answer);
                }
            }
            None => report.orphan_answers += 1,
        }
    }
    for thread in &mut threads {
        thread.answers.sort_by(|a, b| b.score.cmp(&a.score).then(a.id.cmp(&b.id)));
    }
    (threads, report)
}

/// Keeps the threads whose question carries `api_tag` (exact match), preserving order.
pub fn filter_by_tag(threads: &[Thread], api_tag: &str) -> Vec<Thread> {
    threads.iter().filter(|t| t.has_tag(api_tag)).cloned().collect()
}
