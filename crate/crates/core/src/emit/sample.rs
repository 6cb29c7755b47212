//! Random recipe and chapter samples for reviewing a cookbook.

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EmitError;
use crate::builder::{Chapter, Cookbook, Recipe};

pub const DEFAULT_EXTRAS: usize = 4;
/// Chapters drawn from each side of the median.
pub const CHAPTERS_PER_SIDE: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledRecipe {
    pub topic_id: usize,
    pub recipe: Recipe,
    #[serde(default)]
    pub injected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub seed: u64,
    pub recipes: Vec<SampledRecipe>,
    /// Topic ids of the sampled chapters, in cookbook order.
    pub chapters: Vec<usize>,
    /// Hand-made chapters spliced in from an injection file.
    #[serde(default)]
    pub injected_chapters: Vec<Chapter>,
}

/// Hand-built recipes and chapters to mix into a sample.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Injection {
    #[serde(default)]
    pub recipes: Vec<SampledRecipe>,
    #[serde(default)]
    pub chapters: Vec<Chapter>,
}

impl Injection {
    pub fn load(path: &Path) -> Result<Self, EmitError> {
        let raw = fs::read_to_string(path).map_err(|e| EmitError::Io { path: path.to_path_buf(), source: e })?;
        serde_json::from_str(&raw).map_err(|e| EmitError::BadInjection(e.to_string()))
    }
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, from: &[T], n: usize) -> Vec<T> {
    let n = n.min(from.len());
    let mut idx = index::sample(rng, from.len(), n).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| from[i]).collect()
}

/// Chapter indices: two below and two above the median recipe count when the
/// cookbook has at least four chapters (topped up from chapters at the median
/// when a side is short), otherwise every chapter.
fn sample_chapters(rng: &mut ChaCha8Rng, chapters: &[Chapter]) -> Vec<usize> {
    let want = 2 * CHAPTERS_PER_SIDE;
    if chapters.len() < want {
        return (0..chapters.len()).collect();
    }
    let mut sizes: Vec<usize> = chapters.iter().map(|c| 2 * c.recipes.len()).collect();
    sizes.sort_unstable();
    let mid = sizes.len() / 2;
    // Twice the median, to stay in integers.
    let median2 = if sizes.len() % 2 == 1 { sizes[mid] } else { (sizes[mid - 1] + sizes[mid]) / 2 };
    let side = |pred: &dyn Fn(usize) -> bool| -> Vec<usize> {
        (0..chapters.len()).filter(|&i| pred(2 * chapters[i].recipes.len())).collect()
    };
    let below = side(&|s| s < median2);
    let above = side(&|s| s > median2);
    let at = side(&|s| s == median2);
    let mut chosen = pick(rng, &below, CHAPTERS_PER_SIDE);
    chosen.extend(pick(rng, &above, CHAPTERS_PER_SIDE));
    let short = want - chosen.len();
    chosen.extend(pick(rng, &at, short));
    chosen.sort_unstable();
    chosen
}

/// One recipe per chapter plus `extras` more from the rest, all distinct,
/// and a chapter sample around the median. Deterministic for a given seed.
pub fn stratified_sample(cookbook: &Cookbook, extras: usize, seed: u64) -> Result<Sample, EmitError> {
    if cookbook.chapters.is_empty() {
        return Err(EmitError::EmptyCookbook);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taken: Vec<(usize, usize)> = Vec::new();
    for (ci, chapter) in cookbook.chapters.iter().enumerate() {
        if !chapter.recipes.is_empty() {
            taken.push((ci, rng.random_range(0..chapter.recipes.len())));
        }
    }
    let rest: Vec<(usize, usize)> = cookbook
        .chapters
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.recipes.len()).map(move |ri| (ci, ri)))
        .filter(|p| !taken.contains(p))
        .collect();
    taken.extend(pick(&mut rng, &rest, extras));
    let chapters = sample_chapters(&mut rng, &cookbook.chapters);
    let recipes = taken
        .into_iter()
        .map(|(ci, ri)| SampledRecipe {
            topic_id: cookbook.chapters[ci].topic_id,
            recipe: cookbook.chapters[ci].recipes[ri].clone(),
            injected: false,
        })
        .collect();
    Ok(Sample {
        seed,
        recipes,
        chapters: chapters.into_iter().map(|i| cookbook.chapters[i].topic_id).collect(),
        injected_chapters: Vec::new(),
    })
}

/// Appends injected recipes and chapters to a sample.
pub fn splice(mut sample: Sample, injection: Injection) -> Sample {
    sample.recipes.extend(injection.recipes.into_iter().map(|r| SampledRecipe { injected: true, ..r }));
    sample.injected_chapters.extend(injection.chapters);
    sample
}
