//! Cookbook output: canonical JSON, a Markdown book and a static HTML site.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use html_escape::encode_text;
use serde::{Deserialize, Serialize};

use super::EmitError;
use crate::builder::{Chapter, Cookbook, Recipe};
use crate::textprep::SurfaceForms;

pub const THREAD_URL: &str = "https://stackoverflow.com/questions/";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
    Html,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            "html" => Ok(Format::Html),
            other => Err(format!("unknown format {other:?} (expected json, markdown or html)")),
        }
    }
}

pub fn thread_url(thread_id: u64) -> String {
    format!("{THREAD_URL}{thread_id}")
}

/// Chapter display title: its top terms, optionally mapped back to surface words.
pub fn chapter_title(chapter: &Chapter, forms: Option<&SurfaceForms>) -> String {
    chapter
        .title_terms
        .iter()
        .map(|stem| forms.and_then(|f| f.most_frequent(stem)).unwrap_or(stem))
        .collect::<Vec<_>>()
        .join(", ")
}

/// `<chapter>.<recipe>` with both parts counted from 1.
pub fn recipe_number(chapter_index: usize, recipe_index: usize) -> String {
    format!("{}.{}", chapter_index + 1, recipe_index + 1)
}

pub fn to_json(cookbook: &Cookbook) -> String {
    let mut s = serde_json::to_string_pretty(cookbook).expect("cookbook serializes");
    s.push('\n');
    s
}

pub fn from_json(json: &str) -> Result<Cookbook, EmitError> {
    serde_json::from_str(json).map_err(|e| EmitError::BadCookbook(e.to_string()))
}

pub fn load_cookbook(path: &Path) -> Result<Cookbook, EmitError> {
    let raw = fs::read_to_string(path).map_err(|e| EmitError::Io { path: path.to_path_buf(), source: e })?;
    from_json(&raw)
}

fn summary_line(cookbook: &Cookbook) -> String {
    let p = &cookbook.params;
    format!(
        "{} chapters, {} recipes. Ta = {}, r_min = {}, min chapter size = {}, final max rank = {}, model seed = {}.",
        cookbook.chapters.len(),
        cookbook.recipe_count(),
        p.ta,
        p.r_min,
        p.min_chapter_size,
        cookbook.final_max_rank,
        cookbook.model_seed
    )
}

fn recipe_title(recipe: &Recipe) -> String {
    encode_text(recipe.pair.question.title_or_empty()).into_owned()
}

pub fn render_markdown(cookbook: &Cookbook, forms: Option<&SurfaceForms>) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# {} cookbook\n\n{}\n", cookbook.api_tag, summary_line(cookbook));
    for (ci, chapter) in cookbook.chapters.iter().enumerate() {
        let _ = writeln!(md, "## Chapter {}: {}\n", ci + 1, chapter_title(chapter, forms));
        for (ri, r) in chapter.recipes.iter().enumerate() {
            let (q, a) = (&r.pair.question, &r.pair.answer);
            let _ = writeln!(md, "### Recipe {}: {}\n", recipe_number(ci, ri), recipe_title(r));
            let _ = writeln!(
                md,
                "Question score {}, answer score {}, pair score {}, rank {}, adherence {:.4}. Source: <{}>\n",
                q.score,
                a.score,
                r.pair.score,
                r.pair.rank,
                r.adherence,
                thread_url(r.pair.thread_id)
            );
            let _ = writeln!(md, "#### Question\n\n{}\n\n#### Answer\n\n{}\n", q.body.trim(), a.body.trim());
        }
    }
    md
}

const STYLE: &str = "body{font-family:sans-serif;max-width:60em;margin:auto;padding:1em}\
pre{background:#f4f4f4;padding:.5em;overflow-x:auto}.meta{color:#555}";

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>{}</title>\n<style>{STYLE}</style>\n</head>\n<body>\n{body}</body>\n</html>\n",
        encode_text(title)
    )
}

pub fn chapter_file(chapter_index: usize) -> String {
    format!("chapter-{}.html", chapter_index + 1)
}

pub fn render_index_html(cookbook: &Cookbook, forms: Option<&SurfaceForms>) -> String {
    let mut body = String::new();
    let _ = writeln!(body, "<h1>{} cookbook</h1>", encode_text(&cookbook.api_tag));
    let _ = writeln!(body, "<p class=\"meta\">{}</p>", encode_text(&summary_line(cookbook)));
    body.push_str("<ol>\n");
    for (ci, chapter) in cookbook.chapters.iter().enumerate() {
        let _ = writeln!(
            body,
            "<li><a href=\"{}\">{}</a> ({} recipes)</li>",
            chapter_file(ci),
            encode_text(&chapter_title(chapter, forms)),
            chapter.recipes.len()
        );
    }
    body.push_str("</ol>\n");
    page(&format!("{} cookbook", cookbook.api_tag), &body)
}

/// One chapter page. Post bodies are dump HTML and are embedded as they are;
/// only plain-text fields are escaped.
pub fn render_chapter_html(cookbook: &Cookbook, chapter_index: usize, forms: Option<&SurfaceForms>) -> String {
    let chapter = &cookbook.chapters[chapter_index];
    let title = chapter_title(chapter, forms);
    let mut body = String::new();
    let _ = writeln!(body, "<p><a href=\"index.html\">{} cookbook</a></p>", encode_text(&cookbook.api_tag));
    let _ = writeln!(body, "<h1>Chapter {}: {}</h1>", chapter_index + 1, encode_text(&title));
    for (ri, r) in chapter.recipes.iter().enumerate() {
        let (q, a) = (&r.pair.question, &r.pair.answer);
        let number = recipe_number(chapter_index, ri);
        let _ = writeln!(body, "<section id=\"recipe-{number}\">");
        let _ = writeln!(body, "<h2><a href=\"#recipe-{number}\">Recipe {number}</a>: {}</h2>", recipe_title(r));
        let _ = writeln!(
            body,
            "<p class=\"meta\">Question score {}, answer score {}, pair score {}, rank {}, adherence {:.4}. <a href=\"{}\">Source thread</a></p>",
            q.score,
            a.score,
            r.pair.score,
            r.pair.rank,
            r.adherence,
            thread_url(r.pair.thread_id)
        );
        let _ = writeln!(body, "<h3>Question</h3>\n<div class=\"question\">\n{}\n</div>", q.body.trim());
        let _ = writeln!(body, "<h3>Answer</h3>\n<div class=\"answer\">\n{}\n</div>", a.body.trim());
        body.push_str("</section>\n");
    }
    page(&format!("Chapter {}: {}", chapter_index + 1, title), &body)
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf, EmitError> {
    fs::write(&path, contents).map_err(|e| EmitError::OutputDirNotWritable { path: path.clone(), source: e })?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<(), EmitError> {
    fs::create_dir_all(dir).map_err(|e| EmitError::OutputDirNotWritable { path: dir.to_path_buf(), source: e })
}

fn clear_chapter_pages(site: &Path) -> Result<(), EmitError> {
    let entries = fs::read_dir(site).map_err(|e| EmitError::OutputDirNotWritable { path: site.to_path_buf(), source: e })?;
    for entry in entries.flatten() {
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with("chapter-") && name.ends_with(".html") {
            fs::remove_file(entry.path())
                .map_err(|e| EmitError::OutputDirNotWritable { path: entry.path(), source: e })?;
        }
    }
    Ok(())
}

/// Writes one format into `out_dir` and returns the files written.
///
/// JSON goes to `cookbook.json`, Markdown to `cookbook.md`, HTML to `site/`.
pub fn render(
    cookbook: &Cookbook,
    format: Format,
    out_dir: &Path,
    forms: Option<&SurfaceForms>,
) -> Result<Vec<PathBuf>, EmitError> {
    ensure_dir(out_dir)?;
    match format {
        Format::Json => Ok(vec![write(out_dir.join("cookbook.json"), &to_json(cookbook))?]),
        Format::Markdown => Ok(vec![write(out_dir.join("cookbook.md"), &render_markdown(cookbook, forms))?]),
        Format::Html => {
            let site = out_dir.join("site");
            ensure_dir(&site)?;
            clear_chapter_pages(&site)?;
            let mut files = vec![write(site.join("index.html"), &render_index_html(cookbook, forms))?];
            for ci in 0..cookbook.chapters.len() {
                files.push(write(site.join(chapter_file(ci)), &render_chapter_html(cookbook, ci, forms))?);
            }
            Ok(files)
        }
    }
}
