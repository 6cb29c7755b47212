#![allow(dead_code)]

pub mod relax;

use std::path::{Path, PathBuf};

use crowd_cookbook::ingest::{parse_dump_date, Post, PostType, Thread};

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn question(id: u64, title: &str, body: &str, score: i64) -> Post {
    Post {
        id,
        post_type: PostType::Question,
        parent_id: None,
        title: Some(title.to_string()),
        body: body.to_string(),
        tags: vec!["swt".into()],
        score,
        accepted_answer_id: None,
        creation_date: parse_dump_date("2012-03-04T05:06:07.000").unwrap(),
    }
}

pub fn answer(id: u64, parent: u64, body: &str, score: i64) -> Post {
    Post {
        id,
        post_type: PostType::Answer,
        parent_id: Some(parent),
        title: None,
        body: body.to_string(),
        tags: vec![],
        score,
        accepted_answer_id: None,
        creation_date: parse_dump_date("2012-03-05T05:06:07.000").unwrap(),
    }
}

pub fn thread(q: Post, answers: Vec<Post>) -> Thread {
    Thread { question: q, answers }
}

pub const CODE_BODY: &str = "<p>Try this.</p><pre><code>viewer.refresh();</code></pre>";

use crowd_cookbook::textprep::Document;
use crowd_cookbook::topics::TopicModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Documents drawn from disjoint vocabularies, one vocabulary per group.
///
/// Each document takes `len` tokens uniformly from its group's `vocab` words,
/// except that a `noise` fraction comes from the union of all groups.
/// Returns the documents and each document's group.
pub fn grouped_corpus(
    groups: usize,
    docs: usize,
    vocab: usize,
    len: usize,
    noise: f64,
    seed: u64,
) -> (Vec<Document>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = |g: usize, i: usize| format!("g{g}w{i}");
    let mut out = Vec::new();
    let mut labels = Vec::new();
    for d in 0..docs {
        let g = d % groups;
        let tokens = (0..len)
            .map(|_| {
                let group = if rng.random::<f64>() < noise { rng.random_range(0..groups) } else { g };
                word(group, rng.random_range(0..vocab))
            })
            .collect();
        out.push(Document { thread_id: d as u64 + 1, tokens });
        labels.push(g);
    }
    (out, labels)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Share of documents whose dominant topic matches their group under the best
/// one-to-one topic↔group matching. `labels[j]` is the group of model document `j`.
pub fn purity(model: &TopicModel, labels: &[usize]) -> f64 {
    let dominant: Vec<usize> = (0..model.num_docs()).map(|j| model.dominant_topic(j).unwrap().0).collect();
    let best = permutations(model.k)
        .into_iter()
        .map(|perm| dominant.iter().zip(labels).filter(|(&t, &g)| perm[g] == t).count())
        .max()
        .unwrap();
    best as f64 / labels.len() as f64
}

pub fn row_sums_ok(rows: &[Vec<f64>], tol: f64) -> bool {
    rows.iter().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol)
}

/// A cookbook with one chapter per entry of `sizes`, topic ids 0.., recipes ranked in order.
pub fn cookbook(sizes: &[usize]) -> crowd_cookbook::builder::Cookbook {
    use crowd_cookbook::builder::{BuildParams, Chapter, Cookbook, Pair, Recipe, COOKBOOK_FORMAT_VERSION};
    let mut rank = 0;
    let chapters = sizes
        .iter()
        .enumerate()
        .map(|(t, &n)| Chapter {
            topic_id: t,
            title_terms: ["tabl", "column", "row", "cell", "sort"].iter().map(|s| format!("{s}{t}")).collect(),
            recipes: (0..n)
                .map(|i| {
                    rank += 1;
                    let qid = 1000 * (t as u64 + 1) + 10 * i as u64;
                    let mut pair = Pair::new(
                        question(qid, &format!("How to sort table {t}.{i}"), "<p>How do I sort?</p>", 20 - i as i64),
                        answer(qid + 1, qid, CODE_BODY, 30 - i as i64),
                    );
                    pair.rank = rank;
                    Recipe { pair, adherence: 0.6, dominant_topic: t }
                })
                .collect(),
        })
        .collect();
    Cookbook {
        format_version: COOKBOOK_FORMAT_VERSION,
        api_tag: "swt".into(),
        params: BuildParams { min_chapter_size: 1, r_min: 1, ..BuildParams::default() },
        model_seed: 42,
        final_max_rank: rank.max(1),
        chapters,
    }
}

/// The miniature dump's pipeline config, writing into `out`.
pub fn mini_config(out: &std::path::Path) -> crowd_cookbook::emit::PipelineConfig {
    let mut cfg = crowd_cookbook::emit::PipelineConfig::load(&data("mini_config.toml")).unwrap();
    cfg.out = out.to_path_buf();
    cfg
}

/// Every file under `dir`, relative path → contents.
pub fn tree(dir: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    fn walk(base: &std::path::Path, dir: &std::path::Path, out: &mut std::collections::BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(base, &path, out);
            } else {
                let rel = path.strip_prefix(base).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}
