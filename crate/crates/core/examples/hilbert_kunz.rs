//! Hilbert-Kunz function of a plane curve and the quadratic-fit estimate
//! of its multiplicity.
//!
//! ```text
//! cargo run --release --example hilbert_kunz -- curves/h_char3.curve "X,Y,Z" 3
//! ```

use std::time::Instant;

use hklab::curve::CurveFile;
use hklab::hk::{ehk_estimate, hk_function, IdealGens};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map_or("curves/h_char3.curve", String::as_str);
    let ideal = args.get(1).map_or("X,Y,Z", String::as_str);
    let e_max: u32 = args.get(2).map_or(Ok(3), |s| s.parse())?;

    let file = CurveFile::parse(&std::fs::read_to_string(path)?)?;
    let curve = file.build()?;
    let gens = IdealGens::parse(curve.field(), ideal)?;
    println!(
        "curve {}  (degree {}, genus {})",
        curve.equation(),
        curve.degree(),
        curve.genus()
    );

    let start = Instant::now();
    let table = hk_function(&curve, &gens, e_max)?;
    for row in &table.rows {
        let ratio = row.phi as f64 / (row.q * row.q) as f64;
        println!(
            "e={} q={:<4} phi={:<8} phi/q^2={:.6}",
            row.e, row.q, row.phi, ratio
        );
    }
    if let Ok(est) = ehk_estimate(&table) {
        println!(
            "e_HK fit = {}{}",
            est.value,
            if est.unstable { "  (unstable)" } else { "" }
        );
    }
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
