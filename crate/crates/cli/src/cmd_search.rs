//! `agmon search`: maximize the main-inequality ratio over a box.
//!
//! Multi-start coordinate ascent over unit-norm sequences. The inequality
//! says the ratio never exceeds 1; the search reports how close it gets,
//! and a ratio past 1 + tolerance exits 1 because it would be a
//! counterexample.

use std::path::PathBuf;

use agmon_core::{search, seq_json_value, seq_to_json, Json, SearchConfig};

use crate::emit::{float_cell, print_json, Format};
use crate::UsageError;

pub struct Args {
    pub format: Format,
    pub tolerance: f64,
    pub seed: u64,
    pub d: usize,
    pub p: u128,
    pub box_extent: usize,
    pub restarts: u64,
    pub iters: u64,
    pub step_init: f64,
    pub out: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<i32, UsageError> {
    let cfg = SearchConfig {
        d: args.d,
        p: args.p,
        box_shape: vec![args.box_extent; args.d],
        restarts: args.restarts,
        iters: args.iters,
        step_init: args.step_init,
        seed: args.seed,
    };
    let result = search(&cfg)?;
    for (i, r) in result.history.iter().enumerate() {
        eprintln!("restart {i}: best ratio {}", float_cell(*r));
    }

    if let Some(path) = &args.out {
        std::fs::write(path, seq_to_json(&result.best_seq) + "\n")?;
    }

    let gap = 1.0 - result.best_ratio;
    match args.format {
        Format::Json => {
            let doc = Json::Obj(vec![
                ("d".into(), Json::Int(args.d as i128)),
                ("p".into(), agmon_core::json_u128(args.p)),
                (
                    "box".into(),
                    Json::Arr(
                        cfg.box_shape
                            .iter()
                            .map(|&s| Json::Int(s as i128))
                            .collect(),
                    ),
                ),
                (
                    "restarts".into(),
                    agmon_core::json_u128(args.restarts as u128),
                ),
                ("iters".into(), agmon_core::json_u128(args.iters as u128)),
                ("step_init".into(), Json::Float(args.step_init)),
                ("seed".into(), agmon_core::json_u128(args.seed as u128)),
                ("tolerance".into(), Json::Float(args.tolerance)),
                ("best_ratio".into(), Json::Float(result.best_ratio)),
                ("gap_to_one".into(), Json::Float(gap)),
                (
                    "history".into(),
                    Json::Arr(result.history.iter().map(|&r| Json::Float(r)).collect()),
                ),
                ("best_seq".into(), seq_json_value(&result.best_seq)),
            ]);
            print_json(&doc);
        }
        Format::Table => {
            println!(
                "search d = {}, p = {}, box extent {}, {} restarts x {} iters",
                args.d, args.p, args.box_extent, args.restarts, args.iters
            );
            println!("  best ratio  {}", float_cell(result.best_ratio));
            println!("  gap to one  {}", float_cell(gap));
            if let Some(path) = &args.out {
                println!("  best sequence written to {}", path.display());
            }
        }
    }

    // A certified ratio above 1 would refute the inequality.
    Ok(if result.best_ratio > 1.0 + args.tolerance {
        1
    } else {
        0
    })
}
