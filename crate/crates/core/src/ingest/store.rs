//! Newline-delimited JSON checkpoints.
//!
//! Every pipeline checkpoint (threads, labeled threads, documents) is one JSON
//! object per line. A thread record looks like
//!
//! ```json
//! {"question":{"id":1,"post_type":"Question","title":"...","body":"<p>...</p>","tags":["swt"],"score":4,"creation_date":"2010-01-01T00:00:00.000"},"answers":[...]}
//! ```
//!
//! Optional post fields (`parent_id`, `title`, `accepted_answer_id`) are omitted when absent.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::IngestError;

pub fn write_ndjson<T: Serialize, W: Write>(items: &[T], out: W) -> Result<(), IngestError> {
    let mut out = BufWriter::new(out);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ndjson<T: DeserializeOwned, R: BufRead>(input: R) -> Result<Vec<T>, IngestError> {
    let mut items = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .map_err(|source| IngestError::BadRecord { line: n + 1, source })?;
        items.push(item);
    }
    Ok(items)
}

pub fn save<T: Serialize>(path: &Path, items: &[T]) -> Result<(), IngestError> {
    write_ndjson(items, File::create(path)?)
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, IngestError> {
    read_ndjson(BufReader::new(File::open(path)?))
}
