//! Counting constants, the slope threshold and trigger margins for a
//! sequence of Frobenius descents.
//!
//! ```text
//! cargo run --release --example descent_bounds -- 2 3 "2:1,2:2,2:3"
//! ```

use hklab::descent::{
    bundle_count_bound, pigeonhole_window, theorem_margin, BoundContext, DescentSequence,
};
use num_bigint::BigInt;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let r: i64 = args.first().map_or(Ok(2), |s| s.parse())?;
    let g: i64 = args.get(1).map_or(Ok(3), |s| s.parse())?;
    let seq = DescentSequence::parse(args.get(2).map_or("2:1,2:2,2:3,2:4", String::as_str))?;

    // a rank-r bundle of degree 0 on a plane quartic
    let ctx = BoundContext::new(r, g, 0, 3, 4)?;
    let c = &ctx.count;
    println!(
        "l={} s={} k={} m={} n={} c={}",
        c.ell, c.s, c.k, c.m, c.n, c.c
    );
    let t = &ctx.threshold;
    println!(
        "b={}  t = log2({}) ~ {:.4}, in [{}, {}]",
        ctx.b, t.argument, t.log2, t.floor, t.ceil
    );

    for q in [2u64, 4, 9] {
        let bound = bundle_count_bound(q, &c.c)?;
        println!(
            "at most q^c bundles over F_{q}: a {}-bit number",
            bound.bits
        );
    }

    let report = theorem_margin(&seq, &c.c, t);
    for (entry, margin) in seq.entries.iter().zip(&report.margins) {
        let digits = margin.to_string().len();
        println!(
            "q={} e={}  margin has {digits} digits, sign {:?}",
            entry.q,
            entry.e,
            margin.sign()
        );
    }
    println!("trigger: {:?}", report.trigger);

    let w = pigeonhole_window(&BigInt::from(10), &BigInt::from(5), &4u32.into());
    println!(
        "window of size {} forces a repetition: {}",
        w.size, w.forced
    );
    Ok(())
}
