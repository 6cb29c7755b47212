//! The staged batch run driven by a TOML config. Run it twice to see stages skipped.
//!
//! cargo run --release --example run_pipeline -- [config.toml] [out-dir]

use std::env;
use std::path::PathBuf;

use crowd_cookbook::emit::{Pipeline, PipelineConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let mut args = env::args().skip(1);
    let config = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/mini_config.toml").into());
    let mut cfg = PipelineConfig::load(config.as_ref())?;
    if let Some(out) = args.next() {
        cfg.out = PathBuf::from(out);
    }

    let pipeline = Pipeline::new(cfg)?;
    let (book, outcomes) = pipeline.run(false)?;
    for o in &outcomes {
        println!("{:<10} {}", o.stage.name(), if o.skipped { "skipped" } else { "ran" });
    }
    println!("{} chapters, {} recipes in {}", book.chapters.len(), book.recipe_count(), pipeline.config().out.display());
    Ok(())
}
