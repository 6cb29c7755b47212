//! Fit LDA on the how-to-do-it threads of a dump and print each topic's top terms.
//!
//! cargo run --release --example fit_topics -- [Posts.xml] [tag] [k]

use std::env;
use std::fs::File;
use std::io::BufReader;

use crowd_cookbook::classify::{classify, Label};
use crowd_cookbook::ingest::{assemble_threads, filter_by_tag, parse_posts};
use crowd_cookbook::textprep::{build_documents, Preprocessor};
use crowd_cookbook::topics::{fit, Corpus, LdaParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = env::args().skip(1);
    let dump = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/mini_posts.xml").into());
    let tag = args.next().unwrap_or_else(|| "swt".into());
    let k: usize = args.next().map_or(Ok(5), |s| s.parse())?;

    let (posts, _) = parse_posts(BufReader::new(File::open(dump)?))?;
    let (threads, _) = assemble_threads(posts);
    let howto: Vec<_> = filter_by_tag(&threads, &tag)
        .into_iter()
        .filter(|t| classify(t).label == Label::HowToDoIt)
        .collect();
    let built = build_documents(&Preprocessor::default(), &howto);
    let corpus = Corpus::new(built.documents);
    println!("{} documents, {} terms, {} tokens", corpus.len(), corpus.vocabulary().len(), corpus.token_count());

    let model = fit(&corpus, LdaParams { iterations: 500, ..LdaParams::new(k) })?;
    for topic in 0..model.k {
        let terms: Vec<String> = model.topic_terms(topic, 5)?.into_iter().map(|(t, p)| format!("{t} ({p:.3})")).collect();
        let docs = (0..model.num_docs()).filter(|&j| model.dominant_topic(j).is_ok_and(|(d, _)| d == topic)).count();
        println!("topic {topic}: {docs:>3} docs  {}", terms.join(", "));
    }
    Ok(())
}
