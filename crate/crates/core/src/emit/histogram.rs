//! Question sizes per character-count range.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::EmitError;
use crate::ingest::Post;

/// Bins 0–100, 100–300, ..., 1,100–1,300 and the tail above 1,300.
pub const DEFAULT_EDGES: [usize; 9] = [0, 100, 300, 500, 700, 900, 1100, 1300, 26900];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<usize>,
    pub counts: Vec<usize>,
    /// Percent of questions per bin, in `[0, 100]`.
    pub percentages: Vec<f64>,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Percent of questions of at most `size` characters, when `size` is a bin edge.
    pub fn percent_below(&self, size: usize) -> Option<f64> {
        let bins = self.bin_edges.iter().position(|&e| e == size)?;
        Some(self.percentages[..bins].iter().sum())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lo", "hi", "count", "percent"])?;
        for (i, (&count, pct)) in self.counts.iter().zip(&self.percentages).enumerate() {
            let (lo, hi) = (self.bin_edges[i], self.bin_edges[i + 1]);
            w.write_record([lo.to_string(), hi.to_string(), count.to_string(), format!("{pct:.4}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Bin index of a size. Bins are half-open `(lo, hi]`, so a 1,300-character
/// question sits below the tail bin. The last bin also takes everything past its
/// upper edge, and sizes at or below the first edge land in the first bin.
pub fn bin_of(size: usize, edges: &[usize]) -> usize {
    let bins = edges.len() - 1;
    edges[1..bins].iter().take_while(|&&e| e < size).count()
}

pub fn size_histogram(sizes: &[usize], edges: &[usize]) -> Result<Histogram, EmitError> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EmitError::BadBinEdges);
    }
    if sizes.is_empty() {
        return Err(EmitError::EmptyQuestionSet);
    }
    let mut counts = vec![0; edges.len() - 1];
    for &s in sizes {
        counts[bin_of(s, edges)] += 1;
    }
    let n = sizes.len() as f64;
    let percentages = counts.iter().map(|&c| c as f64 * 100.0 / n).collect();
    Ok(Histogram { bin_edges: edges.to_vec(), counts, percentages })
}

/// Histogram of raw question body lengths, markup included.
pub fn question_size_histogram(questions: &[Post], edges: &[usize]) -> Result<Histogram, EmitError> {
    let sizes: Vec<usize> = questions.iter().map(Post::body_chars).collect();
    size_histogram(&sizes, edges)
}
