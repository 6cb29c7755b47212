//! Label threads how-to-do-it or other and score the rules against a gold file.
//!
//! cargo run --example classify_threads -- [threads.ndjson] [gold.csv]

use std::collections::BTreeMap;
use std::env;
use std::fs::File;

use crowd_cookbook::classify::{classify, evaluate, join_gold, read_gold_labels, Label};
use crowd_cookbook::ingest::{store, Thread};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = env::args().skip(1);
    let threads = args.next().unwrap_or_else(|| format!("{DATA}/classifier_threads.ndjson"));
    let gold = args.next().unwrap_or_else(|| format!("{DATA}/classifier_gold.csv"));
    let threads: Vec<Thread> = store::load(threads.as_ref())?;

    let mut fired: BTreeMap<String, usize> = BTreeMap::new();
    let mut howto = 0;
    for t in &threads {
        let c = classify(t);
        howto += usize::from(c.label == Label::HowToDoIt);
        for r in &c.triggered_rules {
            *fired.entry(format!("{r:?}")).or_default() += 1;
        }
    }
    println!("{howto} of {} threads are how-to-do-it", threads.len());
    for (rule, n) in &fired {
        println!("  {rule:<16} fired {n} times");
    }

    let labeled = join_gold(&threads, &read_gold_labels(File::open(gold)?)?)?;
    let m = evaluate(&labeled)?;
    println!(
        "accuracy {:.2}%  precision {:.2}  recall {:.2}  (tp {} fp {} tn {} fn {})",
        100.0 * m.accuracy,
        m.precision,
        m.recall,
        m.confusion.tp,
        m.confusion.fp,
        m.confusion.tn,
        m.confusion.fn_
    );
    Ok(())
}
