//! Runs every acceptance item at the default precision and prints one line each.
//! Exits non-zero when any item fails.

use g2zeta::verify::{run_item, ITEMS};

fn main() {
    let digits = 40;
    let mut failed = Vec::new();
    for id in ITEMS {
        match run_item(id, digits) {
            Ok(report) => {
                println!("{report}");
                if !report.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("FAIL {id:<10} error: {e}");
                failed.push(id);
            }
        }
    }
    println!("{} of {} acceptance items passed", ITEMS.len() - failed.len(), ITEMS.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
