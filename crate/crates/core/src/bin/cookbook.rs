//! Command-line front end for the cookbook pipeline.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 when a stage fails.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crowd_cookbook::builder::BuildParams;
use crowd_cookbook::classify::{evaluate, join_gold, read_gold_labels};
use crowd_cookbook::emit::{
    artifacts, load_cookbook, splice, stratified_sample, Format, Injection, LinkMode, Pipeline, PipelineConfig, Stage,
    StageOutcome,
};
use crowd_cookbook::ingest::{store, Thread};
use crowd_cookbook::topics::Alpha;

#[derive(Parser)]
#[command(name = "cookbook", version, about = "Build API cookbooks from Stack Overflow dumps")]
struct Cli {
    /// TOML pipeline configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for topic fitting and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for checkpoints and rendered files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Re-run stages even when their inputs are unchanged.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the Posts dump into the thread store.
    Ingest {
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Keep only posts created before this date (YYYY-MM-DD).
        #[arg(long)]
        before: Option<String>,
    },
    /// Keep the threads whose question carries the API tag.
    FilterTag {
        #[arg(long)]
        tag: Option<String>,
    },
    /// Label threads how-to-do-it or other.
    Classify {
        /// CSV of thread_id,gold_label to evaluate the classifier against.
        #[arg(long)]
        gold: Option<PathBuf>,
    },
    /// Preprocess how-to-do-it threads into token documents.
    Corpus {
        #[arg(long)]
        stopwords: Option<PathBuf>,
    },
    /// Topic model commands.
    Topics {
        #[command(subcommand)]
        command: TopicsCommand,
    },
    /// Check links, rank eligible pairs and write the score curve.
    Curve {
        #[command(flatten)]
        links: LinkArgs,
    },
    /// Question size histogram.
    Histogram {
        /// Comma-separated ascending bin edges.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// Fill chapters with ranked recipes.
    Build {
        #[command(flatten)]
        params: BuildArgs,
    },
    /// Write the cookbook as JSON, Markdown and/or HTML.
    Render {
        #[arg(long, value_delimiter = ',')]
        format: Option<Vec<Format>>,
        /// Show surface words instead of stems in chapter titles.
        #[arg(long)]
        surface_titles: bool,
    },
    /// Draw a review sample of recipes and chapters.
    Sample {
        #[arg(long)]
        extras: Option<usize>,
        /// JSON file of hand-made recipes and chapters to add.
        #[arg(long)]
        injection: Option<PathBuf>,
        /// Write the sample here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every stage.
    Run {
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        tag: Option<String>,
        #[command(flatten)]
        links: LinkArgs,
        #[command(flatten)]
        params: BuildArgs,
    },
}

#[derive(Subcommand)]
enum TopicsCommand {
    /// Fit LDA on the corpus.
    Fit {
        #[arg(long)]
        k: Option<usize>,
        /// "auto" (50/K) or a number.
        #[arg(long)]
        alpha: Option<Alpha>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        iters: Option<usize>,
    },
}

#[derive(Args)]
struct LinkArgs {
    /// Offline URL → status manifest.
    #[arg(long, conflicts_with = "live")]
    manifest: Option<PathBuf>,
    /// Check links over HTTP.
    #[arg(long)]
    live: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    r_min: Option<usize>,
    #[arg(long)]
    ta: Option<f64>,
    #[arg(long)]
    initial_max_rank: Option<usize>,
    #[arg(long)]
    rank_step: Option<usize>,
    #[arg(long)]
    min_chapter_size: Option<usize>,
    #[arg(long)]
    question_char_limit: Option<usize>,
}

impl LinkArgs {
    fn apply(self, cfg: &mut PipelineConfig) {
        if let Some(m) = self.manifest {
            cfg.links.mode = LinkMode::Offline;
            cfg.links.manifest = Some(m);
        }
        if self.live {
            cfg.links.mode = LinkMode::Live;
        }
    }
}

impl BuildArgs {
    fn apply(self, p: &mut BuildParams) {
        let set = |slot: &mut usize, v: Option<usize>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut p.r_min, self.r_min);
        set(&mut p.initial_max_rank, self.initial_max_rank);
        set(&mut p.rank_step, self.rank_step);
        set(&mut p.min_chapter_size, self.min_chapter_size);
        set(&mut p.question_char_limit, self.question_char_limit);
        if let Some(ta) = self.ta {
            p.ta = ta;
        }
    }
}

enum Failure {
    Usage(String),
    Stage(String),
}

fn load_config(cli: &Cli) -> Result<PipelineConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => PipelineConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.model.seed = seed;
        cfg.sample.seed = seed;
    }
    Ok(cfg)
}

fn report(outcome: &StageOutcome) {
    let state = if outcome.skipped { "up to date" } else { "done" };
    println!("{}: {state}", outcome.stage);
    for path in &outcome.outputs {
        println!("  {}", path.display());
    }
}

fn pipeline(cfg: PipelineConfig) -> Result<Pipeline, Failure> {
    Pipeline::new(cfg).map_err(|e| Failure::Usage(e.to_string()))
}

fn stage(cfg: PipelineConfig, stage: Stage, force: bool) -> Result<(), Failure> {
    let outcome = pipeline(cfg)?.run_stage(stage, force).map_err(|e| Failure::Stage(e.to_string()))?;
    report(&outcome);
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let mut cfg = load_config(&cli)?;
    let force = cli.force;
    match cli.command {
        Command::Ingest { dump, before } => {
            if let Some(d) = dump {
                cfg.dump = d;
            }
            if before.is_some() {
                cfg.before = before;
            }
            stage(cfg, Stage::Ingest, force)
        }
        Command::FilterTag { tag } => {
            if let Some(t) = tag {
                cfg.api_tag = t;
            }
            stage(cfg, Stage::FilterTag, force)
        }
        Command::Classify { gold } => {
            let out = cfg.out.clone();
            stage(cfg, Stage::Classify, force)?;
            if let Some(gold) = gold {
                let threads: Vec<Thread> =
                    store::load(&out.join(artifacts::TAGGED)).map_err(|e| Failure::Stage(e.to_string()))?;
                let file = File::open(&gold).map_err(|e| Failure::Usage(format!("{}: {e}", gold.display())))?;
                let labels = read_gold_labels(file).map_err(|e| Failure::Usage(e.to_string()))?;
                let labeled = join_gold(&threads, &labels).map_err(|e| Failure::Usage(e.to_string()))?;
                let metrics = evaluate(&labeled).map_err(|e| Failure::Stage(e.to_string()))?;
                println!("{}", serde_json::to_string_pretty(&metrics).expect("metrics serialize"));
            }
            Ok(())
        }
        Command::Corpus { stopwords } => {
            if stopwords.is_some() {
                cfg.stopwords = stopwords;
            }
            stage(cfg, Stage::Corpus, force)
        }
        Command::Topics { command: TopicsCommand::Fit { k, alpha, beta, iters } } => {
            let m = &mut cfg.model;
            m.k = k.unwrap_or(m.k);
            m.alpha = alpha.unwrap_or(m.alpha);
            m.beta = beta.unwrap_or(m.beta);
            m.iterations = iters.unwrap_or(m.iterations);
            stage(cfg, Stage::Topics, force)
        }
        Command::Curve { links } => {
            links.apply(&mut cfg);
            stage(cfg, Stage::Curve, force)
        }
        Command::Histogram { edges } => {
            if let Some(e) = edges {
                cfg.histogram_edges = e;
            }
            stage(cfg, Stage::Histogram, force)
        }
        Command::Build { params } => {
            params.apply(&mut cfg.build);
            stage(cfg, Stage::Build, force)
        }
        Command::Render { format, surface_titles } => {
            if let Some(f) = format {
                cfg.render.formats = f;
            }
            cfg.render.surface_titles |= surface_titles;
            stage(cfg, Stage::Render, force)
        }
        Command::Sample { extras, injection, output } => {
            let cookbook =
                load_cookbook(&cfg.out.join(artifacts::COOKBOOK)).map_err(|e| Failure::Stage(e.to_string()))?;
            let extras = extras.unwrap_or(cfg.sample.extras);
            let mut sample =
                stratified_sample(&cookbook, extras, cfg.sample.seed).map_err(|e| Failure::Stage(e.to_string()))?;
            if let Some(path) = injection.or(cfg.sample.injection) {
                sample = splice(sample, Injection::load(&path).map_err(|e| Failure::Usage(e.to_string()))?);
            }
            let json = serde_json::to_string_pretty(&sample).expect("sample serializes") + "\n";
            match output {
                Some(path) => std::fs::write(&path, json).map_err(|e| Failure::Stage(format!("{}: {e}", path.display()))),
                None => {
                    print!("{json}");
                    Ok(())
                }
            }
        }
        Command::Run { dump, tag, links, params } => {
            if let Some(d) = dump {
                cfg.dump = d;
            }
            if let Some(t) = tag {
                cfg.api_tag = t;
            }
            links.apply(&mut cfg);
            params.apply(&mut cfg.build);
            let (cookbook, outcomes) = pipeline(cfg)?.run(force).map_err(|e| Failure::Stage(e.to_string()))?;
            outcomes.iter().for_each(report);
            println!(
                "{} cookbook: {} chapters, {} recipes (ta {}, final max rank {})",
                cookbook.api_tag,
                cookbook.chapters.len(),
                cookbook.recipe_count(),
                cookbook.params.ta,
                cookbook.final_max_rank
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Stage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
