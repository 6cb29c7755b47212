//! Render a cookbook.json as Markdown and a static site, titles in surface words.
//!
//! cargo run --example render_site -- [cookbook.json] [out-dir]
//!
//! Without arguments it renders the cookbook of the `run_pipeline` example.

use std::env;
use std::fs;
use std::path::PathBuf;

use crowd_cookbook::emit::{chapter_title, load_cookbook, render, Format};
use crowd_cookbook::textprep::SurfaceForms;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mini_out = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../target/mini-out"));
    let mut args = env::args().skip(1);
    let input = args.next().map_or_else(|| mini_out.join("cookbook.json"), PathBuf::from);
    let out = args.next().map_or_else(|| mini_out.join("surface"), PathBuf::from);
    if !input.exists() {
        eprintln!("{} not found; run `cargo run --example run_pipeline` first", input.display());
        std::process::exit(1);
    }
    let book = load_cookbook(&input)?;
    let forms: Option<SurfaceForms> = input
        .parent()
        .map(|dir| dir.join("surface_forms.json"))
        .and_then(|p| fs::read_to_string(p).ok())
        .and_then(|raw| serde_json::from_str(&raw).ok());

    for (i, ch) in book.chapters.iter().enumerate() {
        println!("Chapter {}: {}  (stems: {})", i + 1, chapter_title(ch, forms.as_ref()), ch.title_terms.join(", "));
    }
    for format in [Format::Markdown, Format::Html] {
        for file in render(&book, format, &out, forms.as_ref())? {
            println!("wrote {}", file.display());
        }
    }
    Ok(())
}
