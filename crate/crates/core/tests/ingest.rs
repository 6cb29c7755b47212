mod common;

use std::fs::File;
use std::io::BufReader;

use chrono::{DateTime, NaiveDateTime};
use crowd_cookbook::ingest::{
    assemble_threads, filter_by_tag, parse_posts, parse_tags, store, write_posts, IngestError, Post, PostType, Thread,
};
use proptest::prelude::*;

fn arb_text() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[a-zA-Z0-9 <>&\"'=/;#.\n\té€-]{0,80}").unwrap()
}

fn arb_date() -> impl Strategy<Value = NaiveDateTime> {
    (1_217_000_000_000i64..1_700_000_000_000).prop_map(|ms| DateTime::from_timestamp_millis(ms).unwrap().naive_utc())
}

fn arb_post() -> impl Strategy<Value = Post> {
    (
        1u64..1_000_000,
        any::<bool>(),
        1u64..1_000_000,
        arb_text(),
        arb_text(),
        proptest::collection::vec("[a-z][a-z0-9.#+-]{0,8}", 0..4),
        -1000i64..100_000,
        proptest::option::of(1u64..1_000_000),
        arb_date(),
    )
        .prop_map(|(id, is_q, parent, title, body, tags, score, accepted, creation_date)| {
            if is_q {
                Post {
                    id,
                    post_type: PostType::Question,
                    parent_id: None,
                    title: Some(title),
                    body,
                    tags,
                    score,
                    accepted_answer_id: accepted,
                    creation_date,
                }
            } else {
                Post {
                    id,
                    post_type: PostType::Answer,
                    parent_id: Some(parent),
                    title: None,
                    body,
                    tags: vec![],
                    score,
                    accepted_answer_id: None,
                    creation_date,
                }
            }
        })
}

fn round_trip(posts: &[Post]) -> Vec<Post> {
    let mut xml = Vec::new();
    write_posts(posts, &mut xml).unwrap();
    parse_posts(xml.as_slice()).unwrap().0
}

proptest! {
    #[test]
    fn xml_round_trip(posts in proptest::collection::vec(arb_post(), 0..20)) {
        prop_assert_eq!(round_trip(&posts), posts);
    }

    #[test]
    fn ndjson_round_trip(posts in proptest::collection::vec(arb_post(), 0..20)) {
        let (threads, _) = assemble_threads(posts);
        let mut buf = Vec::new();
        store::write_ndjson(&threads, &mut buf).unwrap();
        let back: Vec<Thread> = store::read_ndjson(buf.as_slice()).unwrap();
        prop_assert_eq!(back, threads);
    }

    #[test]
    fn tag_filter_is_idempotent(posts in proptest::collection::vec(arb_post(), 0..30), tag in "[a-c]") {
        let (threads, _) = assemble_threads(posts);
        let once = filter_by_tag(&threads, &tag);
        prop_assert_eq!(filter_by_tag(&once, &tag), once.clone());
        prop_assert!(once.iter().all(|t| t.question.tags.contains(&tag)));
        let expected = threads.iter().filter(|t| t.question.tags.iter().any(|x| x == &tag)).count();
        prop_assert_eq!(once.len(), expected);
    }

    #[test]
    fn threads_keep_answers_with_their_question(posts in proptest::collection::vec(arb_post(), 0..40)) {
        let (threads, report) = assemble_threads(posts.clone());
        let questions = posts.iter().filter(|p| p.is_question()).map(|p| p.id).collect::<std::collections::HashSet<_>>();
        prop_assert_eq!(threads.len(), questions.len());
        for t in &threads {
            let mut ids: Vec<u64> = t.answers.iter().map(|a| a.id).collect();
            prop_assert!(t.answers.iter().all(|a| a.parent_id == Some(t.id())));
            ids.sort_unstable();
            ids.dedup();
            prop_assert_eq!(ids.len(), t.answers.len());
        }
        let attached: usize = threads.iter().map(|t| t.answers.len()).sum();
        let answers = posts.iter().filter(|p| p.is_answer()).count();
        prop_assert_eq!(attached + report.orphan_answers + report.duplicate_answers, answers);
    }
}

#[test]
fn entities_are_decoded_once() {
    let xml = r#"<posts><row Id="1" PostTypeId="1" Score="0" CreationDate="2010-01-01T00:00:00.000"
        Title="A &amp;amp; B" Body="&lt;p&gt;x &amp;lt; y&lt;/p&gt;" Tags="&lt;swt&gt;&lt;java&gt;" /></posts>"#;
    let (posts, _) = parse_posts(xml.as_bytes()).unwrap();
    assert_eq!(posts[0].title.as_deref(), Some("A &amp; B"));
    assert_eq!(posts[0].body, "<p>x &lt; y</p>");
    assert_eq!(posts[0].tags, vec!["swt", "java"]);
}

#[test]
fn tag_attribute_decoding() {
    assert_eq!(parse_tags("<a><b>"), vec!["a", "b"]);
    assert!(parse_tags("").is_empty());
}

#[test]
fn other_post_types_are_counted() {
    let xml = r#"<posts>
      <row Id="1" PostTypeId="1" Score="3" CreationDate="2010-01-01T00:00:00.000" Title="t" Body="b" Tags="&lt;swt&gt;" />
      <row Id="2" PostTypeId="2" ParentId="1" Score="1" CreationDate="2010-01-02T00:00:00.000" Body="a" />
      <row Id="3" PostTypeId="4" Score="0" CreationDate="2010-01-02T00:00:00.000" Body="wiki" />
      <row Id="4" PostTypeId="2" Score="1" CreationDate="2010-01-02T00:00:00.000" Body="no parent" />
    </posts>"#;
    let (posts, stats) = parse_posts(xml.as_bytes()).unwrap();
    assert_eq!(posts.len(), 2);
    assert_eq!((stats.rows, stats.questions, stats.answers), (4, 1, 1));
    assert_eq!((stats.skipped_other_type, stats.skipped_missing_attribute), (1, 1));
}

#[test]
fn malformed_xml_is_an_error() {
    let xml = "<posts><row Id=\"1\" PostTypeId=\"1\" </posts>";
    assert!(matches!(parse_posts(xml.as_bytes()), Err(IngestError::MalformedXml { .. })));
}

#[test]
fn miniature_dump_parses() {
    let file = File::open(common::data("mini_posts.xml")).unwrap();
    let (posts, stats) = parse_posts(BufReader::new(file)).unwrap();
    assert_eq!(stats.rows, posts.len() + 2);
    assert_eq!(stats.skipped_other_type, 2);
    let (threads, report) = assemble_threads(posts);
    assert_eq!(report.orphan_answers, 0);
    let swt = filter_by_tag(&threads, "swt");
    assert!(swt.len() >= 80 && swt.len() < threads.len());
    assert!(filter_by_tag(&threads, "nosuchtag").is_empty());
}
