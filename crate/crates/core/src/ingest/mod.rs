//! Reading a Stack Overflow Posts dump into threads and selecting threads by API tag.

mod post;
mod thread;
mod xml;

pub mod store;

use thiserror::Error;

pub use post::{format_dump_date, parse_dump_date, parse_tags, Post, PostType, DUMP_DATE_FORMAT};
pub use thread::{assemble_threads, filter_by_tag, AssemblyReport, Thread};
pub use xml::{escape_attr, parse_posts, write_posts, ParseStats, PostReader};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed XML at byte {position}: {message}")]
    MalformedXml { position: u64, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    BadRecord {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}
