//! Streaming reader and writer for the Stack Exchange `Posts.xml` layout.
//!
//! A dump is a single `<posts>` element holding one self-closing `<row .../>`
//! per post. Attribute names follow the public dump schema verbatim.

use std::io::{BufRead, Write};

use log::warn;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use super::post::{format_dump_date, format_tags, parse_dump_date, parse_tags, Post, PostType};
use super::IngestError;

/// Counters collected while reading a dump.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseStats {
    pub rows: usize,
    pub questions: usize,
    pub answers: usize,
    /// Rows whose `PostTypeId` is neither 1 nor 2 (tag wikis, moderator nominations, ...).
    pub skipped_other_type: usize,
    pub skipped_missing_attribute: usize,
}

/// Iterator over the posts of a dump stream.
///
/// Rows of other post types and rows lacking a required attribute are skipped
/// and counted in [`ParseStats`]. Malformed XML yields a single error and ends
/// the iteration.
pub struct PostReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    stats: ParseStats,
    done: bool,
}

impl<R: BufRead> PostReader<R> {
    pub fn new(input: R) -> Self {
        Self {
            reader: Reader::from_reader(input),
            buf: Vec::new(),
            stats: ParseStats::default(),
            done: false,
        }
    }

    pub fn stats(&self) -> ParseStats {
        self.stats
    }

    fn malformed(&self, message: impl Into<String>) -> IngestError {
        IngestError::MalformedXml {
            position: self.reader.error_position().max(self.reader.buffer_position()),
            message: message.into(),
        }
    }
}

impl<R: BufRead> Iterator for PostReader<R> {
    type Item = Result<Post, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            let position = self.reader.buffer_position();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev,
                Err(e) => {
                    self.done = true;
                    return Some(Err(self.malformed(e.to_string())));
                }
            };
            match event {
                Event::Empty(ref e) | Event::Start(ref e) if e.name().as_ref() == b"row" => {
                    self.stats.rows += 1;
                    match decode_row(e) {
                        Ok(RowOutcome::Post(post)) => {
                            match post.post_type {
                                PostType::Question => self.stats.questions += 1,
                                PostType::Answer => self.stats.answers += 1,
                            }
                            return Some(Ok(post));
                        }
                        Ok(RowOutcome::OtherType) => self.stats.skipped_other_type += 1,
                        Ok(RowOutcome::Missing(attribute)) => {
                            warn!("row at byte {position} lacks required attribute {attribute}; skipped");
                            self.stats.skipped_missing_attribute += 1;
                        }
                        Err(message) => {
                            self.done = true;
                            return Some(Err(IngestError::MalformedXml { position, message }));
                        }
                    }
                }
                Event::Eof => {
                    self.done = true;
                    return None;
                }
                _ => {}
            }
        }
    }
}

/// Reads every post of a dump, returning them with the final counters.
pub fn parse_posts<R: BufRead>(input: R) -> Result<(Vec<Post>, ParseStats), IngestError> {
    let mut reader = PostReader::new(input);
    let posts = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok((posts, reader.stats()))
}

enum RowOutcome {
    Post(Post),
    OtherType,
    Missing(&'static str),
}

#[derive(Default)]
struct RawRow {
    id: Option<String>,
    post_type_id: Option<String>,
    parent_id: Option<String>,
    title: Option<String>,
    body: Option<String>,
    tags: Option<String>,
    score: Option<String>,
    accepted_answer_id: Option<String>,
    creation_date: Option<String>,
}

fn decode_row(start: &BytesStart<'_>) -> Result<RowOutcome, String> {
    let mut raw = RawRow::default();
    for attr in start.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        let slot = match attr.key.as_ref() {
            b"Id" => &mut raw.id,
            b"PostTypeId" => &mut raw.post_type_id,
            b"ParentId" => &mut raw.parent_id,
            b"Title" => &mut raw.title,
            b"Body" => &mut raw.body,
            b"Tags" => &mut raw.tags,
            b"Score" => &mut raw.score,
            b"AcceptedAnswerId" => &mut raw.accepted_answer_id,
            b"CreationDate" => &mut raw.creation_date,
            _ => continue,
        };
        *slot = Some(attr.unescape_value().map_err(|e| e.to_string())?.into_owned());
    }

    let Some(type_id) = raw.post_type_id.as_deref() else {
        return Ok(RowOutcome::Missing("PostTypeId"));
    };
    let Some(post_type) = type_id.trim().parse().ok().and_then(PostType::from_type_id) else {
        return Ok(RowOutcome::OtherType);
    };
    let Some(id) = raw.id.as_deref().and_then(parse_positive) else {
        return Ok(RowOutcome::Missing("Id"));
    };
    let Some(score) = raw.score.as_deref().and_then(|s| s.trim().parse::<i64>().ok()) else {
        return Ok(RowOutcome::Missing("Score"));
    };
    let Some(creation_date) = raw.creation_date.as_deref().and_then(parse_dump_date) else {
        return Ok(RowOutcome::Missing("CreationDate"));
    };
    let Some(body) = raw.body else {
        return Ok(RowOutcome::Missing("Body"));
    };

    let post = match post_type {
        PostType::Question => Post {
            id,
            post_type,
            parent_id: None,
            title: raw.title,
            body,
            tags: raw.tags.as_deref().map(parse_tags).unwrap_or_default(),
            score,
            accepted_answer_id: raw.accepted_answer_id.as_deref().and_then(parse_positive),
            creation_date,
        },
        PostType::Answer => {
            let Some(parent_id) = raw.parent_id.as_deref().and_then(parse_positive) else {
                return Ok(RowOutcome::Missing("ParentId"));
            };
            Post {
                id,
                post_type,
                parent_id: Some(parent_id),
                title: None,
                body,
                tags: Vec::new(),
                score,
                accepted_answer_id: None,
                creation_date,
            }
        }
    };
    Ok(RowOutcome::Post(post))
}

fn parse_positive(raw: &str) -> Option<u64> {
    raw.trim().parse::<u64>().ok().filter(|&v| v > 0)
}

/// Writes posts in the dump layout. Reading the output back with
/// [`parse_posts`] reproduces every retained field.
pub fn write_posts<W: Write>(posts: &[Post], mut out: W) -> std::io::Result<()> {
    writeln!(out, "<?xml version=\"1.0\" encoding=\"utf-8\"?>")?;
    writeln!(out, "<posts>")?;
    for post in posts {
        write!(out, "  <row Id=\"{}\" PostTypeId=\"{}\"", post.id, post.post_type.type_id())?;
        if let Some(parent) = post.parent_id {
            write!(out, " ParentId=\"{parent}\"")?;
        }
        if let Some(accepted) = post.accepted_answer_id {
            write!(out, " AcceptedAnswerId=\"{accepted}\"")?;
        }
        write!(
            out,
            " CreationDate=\"{}\" Score=\"{}\" Body=\"{}\"",
            format_dump_date(&post.creation_date),
            post.score,
            escape_attr(&post.body)
        )?;
        if let Some(title) = &post.title {
            write!(out, " Title=\"{}\"", escape_attr(title))?;
        }
        if !post.tags.is_empty() {
            write!(out, " Tags=\"{}\"", escape_attr(&format_tags(&post.tags)))?;
        }
        writeln!(out, " />")?;
    }
    writeln!(out, "</posts>")
}

/// Attribute escaping as the dumps do it: markup characters plus line breaks as character references.
pub fn escape_attr(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len() + raw.len() / 8);
    for c in raw.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#xA;"),
            '\r' => out.push_str("&#xD;"),
            '\t' => out.push_str("&#x9;"),
            c => out.push(c),
        }
    }
    out
}
