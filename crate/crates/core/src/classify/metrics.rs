use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::rules::{Classifier, Label};
use super::ClassifyError;
use crate::ingest::Thread;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: Label, gold: Label) {
        match (predicted, gold) {
            (Label::HowToDoIt, Label::HowToDoIt) => self.tp += 1,
            (Label::HowToDoIt, Label::Other) => self.fp += 1,
            (Label::Other, Label::Other) => self.tn += 1,
            (Label::Other, Label::HowToDoIt) => self.fn_ += 1,
        }
    }
}

/// Classifier quality with how-to-do-it as the positive class.
///
/// Precision (recall) is reported as 0 when nothing was predicted (labeled) positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub confusion: Confusion,
}

impl From<Confusion> for EvalMetrics {
    fn from(c: Confusion) -> Self {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        Self {
            accuracy: ratio(c.tp + c.tn, c.total()),
            precision: ratio(c.tp, c.tp + c.fp),
            recall: ratio(c.tp, c.tp + c.fn_),
            confusion: c,
        }
    }
}

pub fn evaluate_with(classifier: &Classifier, labeled: &[(Thread, Label)]) -> Result<EvalMetrics, ClassifyError> {
    if labeled.is_empty() {
        return Err(ClassifyError::EmptyDataset);
    }
    let mut confusion = Confusion::default();
    for (thread, gold) in labeled {
        confusion.record(classifier.label(&thread.question), *gold);
    }
    Ok(confusion.into())
}

pub fn evaluate(labeled: &[(Thread, Label)]) -> Result<EvalMetrics, ClassifyError> {
    evaluate_with(&Classifier::default(), labeled)
}

fn parse_label(raw: &str) -> Option<Label> {
    match raw.trim().to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
        "howtodoit" | "howto" | "1" | "true" | "yes" => Some(Label::HowToDoIt),
        "other" | "0" | "false" | "no" => Some(Label::Other),
        _ => None,
    }
}

#[derive(Debug, Deserialize)]
struct GoldRow {
    thread_id: u64,
    gold_label: String,
}

/// Reads a `thread_id,gold_label` CSV with a header row.
pub fn read_gold_labels<R: Read>(input: R) -> Result<Vec<(u64, Label)>, ClassifyError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for (n, row) in reader.deserialize::<GoldRow>().enumerate() {
        let row = row.map_err(|e| ClassifyError::BadGoldFile(e.to_string()))?;
        let label = parse_label(&row.gold_label)
            .ok_or_else(|| ClassifyError::BadGoldFile(format!("row {}: unknown label {:?}", n + 2, row.gold_label)))?;
        out.push((row.thread_id, label));
    }
    Ok(out)
}

/// Pairs gold labels with their threads, in gold-file order.
pub fn join_gold(threads: &[Thread], gold: &[(u64, Label)]) -> Result<Vec<(Thread, Label)>, ClassifyError> {
    let by_id: HashMap<u64, &Thread> = threads.iter().map(|t| (t.id(), t)).collect();
    gold.iter()
        .map(|(id, label)| {
            by_id
                .get(id)
                .map(|t| ((*t).clone(), *label))
                .ok_or(ClassifyError::UnknownThread(*id))
        })
        .collect()
}
