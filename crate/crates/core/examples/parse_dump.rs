//! Stream a Posts.xml dump, assemble threads and keep one API tag.
//!
//! cargo run --example parse_dump -- [Posts.xml] [tag]

use std::env;
use std::fs::File;
use std::io::BufReader;

use crowd_cookbook::ingest::{assemble_threads, filter_by_tag, PostReader};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = env::args().skip(1);
    let dump = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/mini_posts.xml").into());
    let tag = args.next().unwrap_or_else(|| "swt".into());

    let mut reader = PostReader::new(BufReader::new(File::open(&dump)?));
    let posts: Vec<_> = reader.by_ref().collect::<Result<_, _>>()?;
    let stats = reader.stats();
    let (threads, report) = assemble_threads(posts);
    let tagged = filter_by_tag(&threads, &tag);

    println!("{dump}: {} rows, {} questions, {} answers, {} other", stats.rows, stats.questions, stats.answers, stats.skipped_other_type);
    println!("{} threads, {} orphan answers", threads.len(), report.orphan_answers);
    println!("{} threads tagged {tag}", tagged.len());
    for t in tagged.iter().take(5) {
        println!("  #{:<6} {:>3} answers  {}", t.id(), t.answers.len(), t.question.title_or_empty());
    }
    Ok(())
}
