//! Runs the ten reproduction checks on the bundled curves, or on curve files
//! from a directory.
//!
//! ```text
//! cargo run --release --example paper_suite -- [curve-dir]
//! ```

use hklab::suite::{run_all, Catalog};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = match std::env::args().nth(1) {
        Some(dir) => Catalog::with_overrides(dir.as_ref())?,
        None => Catalog::bundled(),
    };
    let reports = run_all(&cat);
    for r in &reports {
        println!("{}", r.timed_line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} of {} passed", reports.len() - failed, reports.len());
    Ok(())
}
