//! Lenient HTML handling for Stack Overflow post bodies.
//!
//! Post bodies are small, mostly well-formed fragments. Instead of building a
//! DOM we scan for tags and treat everything else as text.

use serde::{Deserialize, Serialize};

/// A post body split into prose and `<pre><code>` blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanedBody {
    /// The body with every `<pre><code>` region removed. Still HTML.
    pub text: String,
    /// Raw contents of each code block, in document order.
    pub code_blocks: Vec<String>,
    /// Code blocks missing their closing `</pre>`; each ran to the end of input.
    pub unclosed_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TagSpan {
    pub start: usize,
    pub end: usize,
    /// Lowercased element name.
    pub name: String,
    pub closing: bool,
}

impl TagSpan {
    /// Value of an attribute inside the tag, quotes removed, entities left as written.
    pub fn attr<'a>(&self, html: &'a str, attr: &str) -> Option<&'a str> {
        let inner_end = if html[..self.end].ends_with('>') { self.end - 1 } else { self.end };
        let inner = &html[self.start + 1..inner_end.max(self.start + 1)];
        let bytes = inner.as_bytes();
        let mut i = inner.find(|c: char| c.is_whitespace() || c == '/')?;
        while i < bytes.len() {
            while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'/') {
                i += 1;
            }
            let name_start = i;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'=' && bytes[i] != b'/' {
                i += 1;
            }
            let name = &inner[name_start..i];
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'=' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                let (value, next) = match bytes.get(i) {
                    Some(&q @ (b'"' | b'\'')) => {
                        let close = inner[i + 1..].find(q as char).map_or(bytes.len(), |p| i + 1 + p);
                        (&inner[i + 1..close], close + 1)
                    }
                    _ => {
                        let close = inner[i..]
                            .find(|c: char| c.is_whitespace())
                            .map_or(bytes.len(), |p| i + p);
                        (&inner[i..close], close)
                    }
                };
                if name.eq_ignore_ascii_case(attr) {
                    return Some(value);
                }
                i = next;
            } else if name.is_empty() {
                break;
            }
        }
        None
    }
}

/// Pieces of an HTML fragment in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Piece {
    Text { start: usize, end: usize },
    Tag(TagSpan),
    /// Comments, doctype and processing instructions.
    Other,
}

/// Finds the tag-like construct starting at `at`, if `at` is a `<` that opens one.
fn markup_at(html: &str, at: usize) -> Option<(usize, Piece)> {
    let rest = &html[at..];
    let bytes = rest.as_bytes();
    if bytes.first() != Some(&b'<') {
        return None;
    }
    if let Some(comment) = rest.strip_prefix("<!--") {
        let end = comment.find("-->").map_or(html.len(), |p| at + 4 + p + 3);
        return Some((end, Piece::Other));
    }
    match bytes.get(1) {
        Some(b'!') | Some(b'?') => {
            let end = rest.find('>').map_or(html.len(), |p| at + p + 1);
            Some((end, Piece::Other))
        }
        Some(c) if c.is_ascii_alphabetic() || (*c == b'/' && bytes.get(2).is_some_and(u8::is_ascii_alphabetic)) => {
            let closing = *c == b'/';
            let name_start = if closing { 2 } else { 1 };
            let name_len = rest[name_start..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '-' || ch == ':'))
                .unwrap_or(rest.len() - name_start);
            let name = rest[name_start..name_start + name_len].to_ascii_lowercase();
            // Quoted attribute values may contain '>'.
            let mut quote: Option<u8> = None;
            let mut end = html.len();
            for (i, &b) in bytes.iter().enumerate().skip(name_start + name_len) {
                match quote {
                    Some(q) if b == q => quote = None,
                    Some(_) => {}
                    None if b == b'"' || b == b'\'' => quote = Some(b),
                    None if b == b'>' => {
                        end = at + i + 1;
                        break;
                    }
                    None => {}
                }
            }
            Some((end, Piece::Tag(TagSpan { start: at, end, name, closing })))
        }
        _ => None,
    }
}

pub(crate) fn pieces(html: &str) -> Vec<Piece> {
    let mut out = Vec::new();
    let mut text_start = 0;
    let mut i = 0;
    while let Some(off) = html[i..].find('<') {
        let at = i + off;
        match markup_at(html, at) {
            Some((end, piece)) => {
                if at > text_start {
                    out.push(Piece::Text { start: text_start, end: at });
                }
                out.push(piece);
                text_start = end;
                i = end;
            }
            None => i = at + 1,
        }
    }
    if text_start < html.len() {
        out.push(Piece::Text { start: text_start, end: html.len() });
    }
    out
}

fn next_tag(html: &str, from: usize) -> Option<TagSpan> {
    let mut i = from;
    while let Some(off) = html[i..].find('<') {
        let at = i + off;
        match markup_at(html, at) {
            Some((_, Piece::Tag(t))) => return Some(t),
            Some((end, _)) => i = end,
            None => i = at + 1,
        }
    }
    None
}

fn find_ci(html: &str, needle: &str, from: usize) -> Option<usize> {
    let hay = html.as_bytes();
    let n = needle.as_bytes();
    if n.len() > hay.len() {
        return None;
    }
    (from..=hay.len() - n.len()).find(|&i| hay[i..i + n.len()].eq_ignore_ascii_case(n))
}

fn rfind_ci(html: &str, needle: &str, from: usize, to: usize) -> Option<usize> {
    let hay = html.as_bytes();
    let n = needle.as_bytes();
    if to < from + n.len() {
        return None;
    }
    (from..=to - n.len()).rev().find(|&i| hay[i..i + n.len()].eq_ignore_ascii_case(n))
}

/// Removes `<pre><code>` regions from a body, collecting their contents.
///
/// Inline `<code>` spans that are not wrapped in `<pre>` stay in the text.
pub fn strip_code(html: &str) -> CleanedBody {
    let mut out = CleanedBody::default();
    let mut cursor = 0;
    let mut search = 0;
    while let Some(tag) = next_tag(html, search) {
        search = tag.end;
        if tag.name != "pre" || tag.closing {
            continue;
        }
        let after = tag.end + html[tag.end..].len() - html[tag.end..].trim_start().len();
        let code = match markup_at(html, after) {
            Some((_, Piece::Tag(t))) if t.name == "code" && !t.closing => t,
            _ => continue,
        };
        out.text.push_str(&html[cursor..tag.start]);
        let content_start = code.end;
        let (content_end, resume) = match find_ci(html, "</pre", content_start) {
            Some(close) => {
                let close_end = html[close..].find('>').map_or(html.len(), |p| close + p + 1);
                let end = rfind_ci(html, "</code", content_start, close).unwrap_or(close);
                (end, close_end)
            }
            None => {
                out.unclosed_blocks += 1;
                let end = find_ci(html, "</code", content_start).unwrap_or(html.len());
                (end, html.len())
            }
        };
        out.code_blocks.push(html[content_start..content_end].to_string());
        cursor = resume;
        search = resume;
    }
    out.text.push_str(&html[cursor..]);
    out
}

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "dd", "div", "dl", "dt", "figcaption",
    "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "head", "header", "hr", "html",
    "img", "li", "main", "nav", "ol", "p", "pre", "section", "table", "tbody", "td", "tfoot", "th",
    "thead", "title", "tr", "ul",
];

fn is_block(name: &str) -> bool {
    BLOCK_TAGS.binary_search(&name).is_ok()
}

/// Converts an HTML fragment to plain text.
///
/// Tags are dropped, block-level tags leave a single space behind, and
/// entities are decoded. Angle brackets that survive decoding become spaces so
/// the result never contains `<` or `>`.
pub fn strip_html(html: &str) -> String {
    let mut out = String::with_capacity(html.len());
    for piece in pieces(html) {
        match piece {
            Piece::Text { start, end } => {
                let decoded = html_escape::decode_html_entities(&html[start..end]);
                out.extend(decoded.chars().map(|c| if c == '<' || c == '>' { ' ' } else { c }));
            }
            Piece::Tag(t) if is_block(&t.name) => out.push(' '),
            Piece::Tag(_) | Piece::Other => {}
        }
    }
    out
}
