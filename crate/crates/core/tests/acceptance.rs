//! Acceptance criteria at their stated sizes. Prints one PASS/FAIL line
//! per criterion and exits nonzero if any criterion fails.
//!
//! Pass criterion ids as arguments to run a subset, e.g.
//! `cargo test -p qdlab --test acceptance -- E1 P1`.

use std::process::ExitCode;

use qdlab::lab::experiments::{self, Check, Scale};
use qdlab::Result;

type Criterion = (&'static str, fn() -> Result<Check>);

const CRITERIA: [Criterion; 8] = [
    ("P1", || experiments::p1(false)),
    ("P2", || experiments::p2(Scale::Full)),
    ("E1", || experiments::e1(Scale::Full)),
    ("E2", || experiments::e2(Scale::Full)),
    ("E3", || experiments::e3(Scale::Full)),
    ("E4", || experiments::e4(Scale::Full)),
    ("E5", || experiments::e5(Scale::Full)),
    ("E6", || experiments::e6(Scale::Full)),
];

fn main() -> ExitCode {
    let wanted: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .map(|a| a.to_uppercase())
        .collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (id, run) in CRITERIA {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == id) {
            continue;
        }
        ran += 1;
        match run() {
            Ok(check) => {
                println!("{}", check.summary_line());
                for note in &check.notes {
                    println!("    note: {note}");
                }
                if !check.passed() {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("FAIL {id} :: error: {e}");
                failed.push(id);
            }
        }
    }
    println!(
        "acceptance: {} of {ran} criteria passed{}",
        ran - failed.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failed: {}", failed.join(", "))
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
