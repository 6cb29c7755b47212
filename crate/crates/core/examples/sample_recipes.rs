//! Draw a review sample: one recipe per chapter, a few extras and chapters around the median.

use crowd_cookbook::builder::{BuildParams, Chapter, Cookbook, Pair, Recipe, COOKBOOK_FORMAT_VERSION};
use crowd_cookbook::emit::stratified_sample;
use crowd_cookbook::ingest::{parse_dump_date, Post, PostType};

fn post(id: u64, kind: PostType, title: Option<String>) -> Post {
    Post {
        id,
        post_type: kind,
        parent_id: (kind == PostType::Answer).then_some(id - 1),
        title,
        body: "<pre><code>table.setSortColumn(col);</code></pre>".into(),
        tags: vec!["swt".into()],
        score: 5,
        accepted_answer_id: None,
        creation_date: parse_dump_date("2012-05-01T10:00:00").unwrap(),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sizes = [9, 8, 8, 7, 6, 6, 5, 5, 4, 3, 3, 3];
    let mut rank = 0;
    let chapters = sizes
        .iter()
        .enumerate()
        .map(|(topic_id, &n)| Chapter {
            topic_id,
            title_terms: vec![format!("topic{topic_id}"), "tabl".into(), "column".into(), "row".into(), "cell".into()],
            recipes: (0..n)
                .map(|i| {
                    rank += 1;
                    let id = 1000 * topic_id as u64 + 2 * i as u64 + 2;
                    let mut pair = Pair::new(
                        post(id, PostType::Question, Some(format!("How to do thing {i} of topic {topic_id}"))),
                        post(id + 1, PostType::Answer, None),
                    );
                    pair.rank = rank;
                    Recipe { pair, adherence: 0.6, dominant_topic: topic_id }
                })
                .collect(),
        })
        .collect();
    let book = Cookbook {
        format_version: COOKBOOK_FORMAT_VERSION,
        api_tag: "swt".into(),
        params: BuildParams::default(),
        model_seed: 42,
        final_max_rank: rank,
        chapters,
    };

    let sample = stratified_sample(&book, 4, 7)?;
    println!("{} recipes from {} chapters:", sample.recipes.len(), book.chapters.len());
    for r in &sample.recipes {
        println!("  topic {:>2}  {}", r.topic_id, r.recipe.pair.question.title_or_empty());
    }
    let sizes: Vec<String> = sample.chapters.iter().map(|&t| format!("topic {t} ({} recipes)", sizes[t])).collect();
    println!("chapters to review: {}", sizes.join(", "));
    Ok(())
}
