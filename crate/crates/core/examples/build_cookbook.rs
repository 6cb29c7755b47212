//! Everything in memory: threads to a ranked, audited cookbook.
//!
//! cargo run --release --example build_cookbook -- [Posts.xml] [links.json]

use std::env;
use std::fs::File;
use std::io::BufReader;

use crowd_cookbook::builder::{audit, build_cookbook, BuildParams, ManifestChecker};
use crowd_cookbook::classify::{classify, Label};
use crowd_cookbook::ingest::{assemble_threads, filter_by_tag, parse_posts};
use crowd_cookbook::textprep::{build_documents, Preprocessor};
use crowd_cookbook::topics::{fit, Corpus, LdaParams};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = env::args().skip(1);
    let dump = args.next().unwrap_or_else(|| format!("{DATA}/mini_posts.xml"));
    let links = args.next().unwrap_or_else(|| format!("{DATA}/mini_links.json"));

    let (posts, _) = parse_posts(BufReader::new(File::open(dump)?))?;
    let (threads, _) = assemble_threads(posts);
    let howto: Vec<_> = filter_by_tag(&threads, "swt")
        .into_iter()
        .filter(|t| classify(t).label == Label::HowToDoIt)
        .collect();
    let corpus = Corpus::new(build_documents(&Preprocessor::default(), &howto).documents);
    let model = fit(&corpus, LdaParams { iterations: 300, ..LdaParams::new(5) })?;

    // Small fixture, so a small cookbook.
    let params = BuildParams { r_min: 20, ta: 0.3, initial_max_rank: 10, rank_step: 5, min_chapter_size: 2, ..BuildParams::default() };
    let checker = ManifestChecker::load(links.as_ref())?;
    let book = build_cookbook("swt", &corpus, &model, &howto, &params, &checker)?;

    println!(
        "{} chapters, {} recipes, cutoff relaxed from {} to {}",
        book.chapters.len(),
        book.recipe_count(),
        params.initial_max_rank,
        book.final_max_rank
    );
    for ch in &book.chapters {
        println!("[{}]", ch.title_terms.join(", "));
        for r in &ch.recipes {
            println!("  rank {:>3}  score {:>5}  adherence {:.2}  {}", r.pair.rank, r.pair.score, r.adherence, r.pair.question.title_or_empty());
        }
    }
    let violations = audit(&book, &checker, Some(&model));
    println!("audit: {} violations", violations.len());
    Ok(())
}
