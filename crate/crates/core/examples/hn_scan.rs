//! Strong Harder-Narasimhan scan of a rank-2 syzygy bundle along Frobenius
//! pull-backs.
//!
//! ```text
//! cargo run --release --example hn_scan -- curves/g_char2.curve "X^2,Y^2,Z^2" 3 3
//! ```

use std::time::Instant;

use hklab::curve::CurveFile;
use hklab::hk::IdealGens;
use hklab::hn::{ehk_from_hn, strong_hn_scan};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let path = args.first().map_or("curves/g_char2.curve", String::as_str);
    let ideal = args.get(1).map_or("X^2,Y^2,Z^2", String::as_str);
    let twist: Option<i32> = args.get(2).map(|s| s.parse()).transpose()?;
    let e_max: u32 = args.get(3).map_or(Ok(2), |s| s.parse())?;

    let curve = CurveFile::parse(&std::fs::read_to_string(path)?)?.build()?;
    let gens = IdealGens::parse(curve.field(), ideal)?;
    let start = Instant::now();
    let scan = strong_hn_scan(&curve, &gens, twist, e_max)?;
    for entry in &scan.entries {
        let d = &entry.data;
        print!(
            "e={} q={} Syz(..)({}) deg={} {:?}",
            entry.e, entry.q, entry.twist, d.degree, d.verdict
        );
        if let Some(x) = &d.destabilizer {
            print!(
                "  sub deg {} (section in twist {}, {} zeros), alpha {}",
                x.sub_degree, x.twist, x.vanishing_degree, x.alpha
            );
            if gens.max_degree() == 1 && gens.min_degree() == 1 {
                print!(", e_HK {}", ehk_from_hn(curve.degree(), x.alpha, entry.q)?);
            }
        }
        println!();
    }
    println!(
        "first destabilizing e: {:?}; pull-back compatible: {}",
        scan.first_destabilizing, scan.frobenius_compatible
    );
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
