//! Latent Dirichlet Allocation by collapsed Gibbs sampling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::corpus::Corpus;
use super::TopicError;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 42;

/// Symmetric document–topic prior, per topic.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Alpha {
    /// `50 / K`.
    #[default]
    Auto,
    Fixed(f64),
}

impl Alpha {
    pub fn value(self, k: usize) -> f64 {
        match self {
            Alpha::Auto => 50.0 / k as f64,
            Alpha::Fixed(a) => a,
        }
    }
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Alpha::Auto);
        }
        s.parse::<f64>().map(Alpha::Fixed).map_err(|_| format!("alpha must be \"auto\" or a number, got {s:?}"))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Auto => f.write_str("auto"),
            Alpha::Fixed(a) => write!(f, "{a}"),
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Alpha::Auto => s.serialize_str("auto"),
            Alpha::Fixed(a) => s.serialize_f64(*a),
        }
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Ok(Alpha::Fixed(a)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdaParams {
    pub k: usize,
    #[serde(default)]
    pub alpha: Alpha,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_beta() -> f64 {
    0.01
}
fn default_iterations() -> usize {
    1000
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl Default for LdaParams {
    fn default() -> Self {
        Self { k: 15, alpha: Alpha::Auto, beta: default_beta(), iterations: default_iterations(), seed: DEFAULT_SEED }
    }
}

impl LdaParams {
    pub fn new(k: usize) -> Self {
        Self { k, ..Default::default() }
    }
}

/// A fitted topic model.
///
/// `phi[i][w]` is the probability of term `w` under topic `i`; `theta[j][i]` is
/// the adherence of document `j` to topic `i`. Both are smoothed count estimates
/// from the final Gibbs sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub vocabulary: Vec<String>,
    /// Thread id of each document row in `theta`.
    pub thread_ids: Vec<u64>,
    pub phi: Vec<Vec<f64>>,
    pub theta: Vec<Vec<f64>>,
    pub assignments: Vec<Vec<usize>>,
}

impl TopicModel {
    /// Derives phi and theta from per-token topic assignments.
    pub fn from_assignments(
        corpus: &Corpus,
        k: usize,
        alpha: f64,
        beta: f64,
        seed: u64,
        iterations: usize,
        assignments: Vec<Vec<usize>>,
    ) -> Result<Self, TopicError> {
        let ids = corpus.doc_term_ids();
        if assignments.len() != ids.len()
            || assignments.iter().zip(ids).any(|(z, w)| z.len() != w.len())
            || assignments.iter().flatten().any(|&t| t >= k)
        {
            return Err(TopicError::AssignmentMismatch);
        }
        let counts = Counts::tally(corpus, k, &assignments);
        Ok(counts.model(corpus, alpha, beta, seed, iterations, assignments))
    }

    pub fn num_docs(&self) -> usize {
        self.theta.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    /// The `n` most probable terms of a topic, ties broken by term.
    pub fn topic_terms(&self, topic: usize, n: usize) -> Result<Vec<(String, f64)>, TopicError> {
        let row = self.phi.get(topic).ok_or(TopicError::TopicOutOfRange { topic, k: self.k })?;
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| self.vocabulary[a].cmp(&self.vocabulary[b])));
        Ok(order.into_iter().take(n).map(|w| (self.vocabulary[w].clone(), row[w])).collect())
    }

    pub fn doc_topic_dist(&self, doc: usize) -> Result<&[f64], TopicError> {
        self.theta
            .get(doc)
            .map(Vec::as_slice)
            .ok_or(TopicError::DocOutOfRange { doc, docs: self.theta.len() })
    }

    /// Topic with the highest adherence for a document (lowest id on ties), with that adherence.
    pub fn dominant_topic(&self, doc: usize) -> Result<(usize, f64), TopicError> {
        Ok(argmax(self.doc_topic_dist(doc)?))
    }
}

pub(crate) fn argmax(row: &[f64]) -> (usize, f64) {
    let mut best = (0, row[0]);
    for (i, &p) in row.iter().enumerate().skip(1) {
        if p > best.1 {
            best = (i, p);
        }
    }
    best
}

/// Sufficient statistics of a topic assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Counts {
    k: usize,
    vocab: usize,
    /// D×K
    doc_topic: Vec<Vec<u32>>,
    /// K×V, row-major.
    topic_term: Vec<u32>,
    topic_total: Vec<u32>,
}

impl Counts {
    fn tally(corpus: &Corpus, k: usize, assignments: &[Vec<usize>]) -> Self {
        let vocab = corpus.vocabulary().len();
        let mut c = Counts {
            k,
            vocab,
            doc_topic: vec![vec![0; k]; corpus.len()],
            topic_term: vec![0; k * vocab],
            topic_total: vec![0; k],
        };
        for (d, (words, topics)) in corpus.doc_term_ids().iter().zip(assignments).enumerate() {
            for (&w, &t) in words.iter().zip(topics) {
                c.doc_topic[d][t] += 1;
                c.topic_term[t * vocab + w] += 1;
                c.topic_total[t] += 1;
            }
        }
        c
    }

    fn model(
        &self,
        corpus: &Corpus,
        alpha: f64,
        beta: f64,
        seed: u64,
        iterations: usize,
        assignments: Vec<Vec<usize>>,
    ) -> TopicModel {
        let v = self.vocab;
        let v_beta = v as f64 * beta;
        let k_alpha = self.k as f64 * alpha;
        let phi = (0..self.k)
            .map(|t| {
                let denom = self.topic_total[t] as f64 + v_beta;
                (0..v).map(|w| (self.topic_term[t * v + w] as f64 + beta) / denom).collect()
            })
            .collect();
        let theta = self
            .doc_topic
            .iter()
            .map(|row| {
                let len: u32 = row.iter().sum();
                let denom = len as f64 + k_alpha;
                row.iter().map(|&n| (n as f64 + alpha) / denom).collect()
            })
            .collect();
        TopicModel {
            k: self.k,
            alpha,
            beta,
            seed,
            iterations,
            vocabulary: corpus.vocabulary().terms().to_vec(),
            thread_ids: corpus.thread_ids(),
            phi,
            theta,
            assignments,
        }
    }
}

/// Collapsed Gibbs sampler over a corpus.
///
/// [`fit`] drives it for the requested number of sweeps; it is public so
/// callers can inspect the chain between sweeps.
pub struct GibbsSampler<'c> {
    corpus: &'c Corpus,
    params: LdaParams,
    alpha: f64,
    rng: ChaCha8Rng,
    assignments: Vec<Vec<usize>>,
    counts: Counts,
    sweeps: usize,
    weights: Vec<f64>,
}

impl<'c> GibbsSampler<'c> {
    /// Validates the inputs and draws a uniformly random initial assignment from the seed.
    pub fn new(corpus: &'c Corpus, params: LdaParams) -> Result<Self, TopicError> {
        let k = params.k;
        if k < 2 {
            return Err(TopicError::InvalidParams(format!("k must be at least 2, got {k}")));
        }
        if params.iterations < 1 {
            return Err(TopicError::InvalidParams("iterations must be at least 1".into()));
        }
        let alpha = params.alpha.value(k);
        if !(alpha > 0.0 && alpha.is_finite()) || !(params.beta > 0.0 && params.beta.is_finite()) {
            return Err(TopicError::InvalidParams(format!("priors must be positive (alpha={alpha}, beta={})", params.beta)));
        }
        if corpus.len() < k {
            return Err(TopicError::CorpusTooSmall { docs: corpus.len(), k });
        }
        if let Some(doc) = corpus.doc_term_ids().iter().position(Vec::is_empty) {
            return Err(TopicError::EmptyDocumentInCorpus { doc, thread_id: corpus.documents()[doc].thread_id });
        }

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let assignments: Vec<Vec<usize>> = corpus
            .doc_term_ids()
            .iter()
            .map(|words| words.iter().map(|_| rng.random_range(0..k)).collect())
            .collect();
        let counts = Counts::tally(corpus, k, &assignments);
        Ok(Self { corpus, params, alpha, rng, assignments, counts, sweeps: 0, weights: vec![0.0; k] })
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    /// Resamples the topic of every token once, documents and tokens in order.
    pub fn sweep(&mut self) {
        let k = self.params.k;
        let v = self.counts.vocab;
        let beta = self.params.beta;
        let v_beta = v as f64 * beta;
        let alpha = self.alpha;
        let c = &mut self.counts;
        for (d, words) in self.corpus.doc_term_ids().iter().enumerate() {
            let doc_topic = &mut c.doc_topic[d];
            for (pos, &w) in words.iter().enumerate() {
                let old = self.assignments[d][pos];
                doc_topic[old] -= 1;
                c.topic_term[old * v + w] -= 1;
                c.topic_total[old] -= 1;

                let mut total = 0.0;
                for (t, &n_dt) in doc_topic.iter().enumerate() {
                    total += (n_dt as f64 + alpha) * (c.topic_term[t * v + w] as f64 + beta)
                        / (c.topic_total[t] as f64 + v_beta);
                    self.weights[t] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.weights.iter().position(|&cum| u < cum).unwrap_or(k - 1);

                self.assignments[d][pos] = new;
                doc_topic[new] += 1;
                c.topic_term[new * v + w] += 1;
                c.topic_total[new] += 1;
            }
        }
        self.sweeps += 1;
        debug_assert!(self.counts_consistent(), "count conservation broken after sweep {}", self.sweeps);
    }

    /// Topic counts summed per term equal corpus term frequencies, and per
    /// document equal document lengths.
    pub fn counts_consistent(&self) -> bool {
        let k = self.params.k;
        let v = self.counts.vocab;
        let freq = self.corpus.term_frequencies();
        let terms_ok = (0..v).all(|w| (0..k).map(|t| self.counts.topic_term[t * v + w] as usize).sum::<usize>() == freq[w]);
        let docs_ok = self
            .corpus
            .doc_term_ids()
            .iter()
            .zip(&self.counts.doc_topic)
            .all(|(words, row)| row.iter().map(|&n| n as usize).sum::<usize>() == words.len());
        let totals_ok = (0..k).all(|t| {
            (0..v).map(|w| self.counts.topic_term[t * v + w]).sum::<u32>() == self.counts.topic_total[t]
        });
        terms_ok && docs_ok && totals_ok && self.counts == Counts::tally(self.corpus, k, &self.assignments)
    }

    /// The model implied by the current sample.
    pub fn model(&self) -> TopicModel {
        self.counts.model(
            self.corpus,
            self.alpha,
            self.params.beta,
            self.params.seed,
            self.sweeps,
            self.assignments.clone(),
        )
    }

    pub fn into_model(self) -> TopicModel {
        let Self { corpus, params, alpha, assignments, counts, sweeps, .. } = self;
        counts.model(corpus, alpha, params.beta, params.seed, sweeps, assignments)
    }
}

/// Runs `params.iterations` Gibbs sweeps from a seeded random start.
///
/// The same corpus and parameters always produce a bit-identical model.
pub fn fit(corpus: &Corpus, params: LdaParams) -> Result<TopicModel, TopicError> {
    let mut sampler = GibbsSampler::new(corpus, params)?;
    for _ in 0..params.iterations {
        sampler.sweep();
    }
    Ok(sampler.into_model())
}
