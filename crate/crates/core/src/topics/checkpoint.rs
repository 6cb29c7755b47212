//! JSON container for fitted models.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::lda::TopicModel;
use super::TopicError;

pub const MODEL_FORMAT: &str = "crowd-cookbook/lda";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    k: usize,
    alpha: f64,
    beta: f64,
    seed: u64,
    iterations: usize,
    vocabulary: Vec<String>,
    thread_ids: Vec<u64>,
    phi: Vec<Vec<f64>>,
    theta: Vec<Vec<f64>>,
    assignments: Vec<Vec<usize>>,
}

pub fn write_model<W: Write>(model: &TopicModel, out: W) -> Result<(), TopicError> {
    let cp = Checkpoint {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        k: model.k,
        alpha: model.alpha,
        beta: model.beta,
        seed: model.seed,
        iterations: model.iterations,
        vocabulary: model.vocabulary.clone(),
        thread_ids: model.thread_ids.clone(),
        phi: model.phi.clone(),
        theta: model.theta.clone(),
        assignments: model.assignments.clone(),
    };
    let mut out = BufWriter::new(out);
    serde_json::to_writer(&mut out, &cp).map_err(|e| TopicError::Checkpoint(e.to_string()))?;
    out.flush().map_err(|e| TopicError::Checkpoint(e.to_string()))
}

pub fn read_model<R: Read>(input: R) -> Result<TopicModel, TopicError> {
    let cp: Checkpoint = serde_json::from_reader(input).map_err(|e| TopicError::Checkpoint(e.to_string()))?;
    if cp.format != MODEL_FORMAT || cp.version != MODEL_VERSION {
        return Err(TopicError::Checkpoint(format!("unsupported container {} v{}", cp.format, cp.version)));
    }
    let v = cp.vocabulary.len();
    let shape_ok = cp.phi.len() == cp.k
        && cp.phi.iter().all(|r| r.len() == v)
        && cp.theta.len() == cp.thread_ids.len()
        && cp.theta.iter().all(|r| r.len() == cp.k)
        && cp.assignments.len() == cp.thread_ids.len();
    if !shape_ok {
        return Err(TopicError::Checkpoint("matrix shapes do not match k, vocabulary and documents".into()));
    }
    Ok(TopicModel {
        k: cp.k,
        alpha: cp.alpha,
        beta: cp.beta,
        seed: cp.seed,
        iterations: cp.iterations,
        vocabulary: cp.vocabulary,
        thread_ids: cp.thread_ids,
        phi: cp.phi,
        theta: cp.theta,
        assignments: cp.assignments,
    })
}

pub fn save_model(path: &Path, model: &TopicModel) -> Result<(), TopicError> {
    let file = File::create(path).map_err(|e| TopicError::Checkpoint(format!("{}: {e}", path.display())))?;
    write_model(model, file)
}

pub fn load_model(path: &Path) -> Result<TopicModel, TopicError> {
    let file = File::open(path).map_err(|e| TopicError::Checkpoint(format!("{}: {e}", path.display())))?;
    read_model(BufReader::new(file))
}
