//! The homogeneous coordinate ring of a plane curve: normal forms, graded
//! pieces, cohomology dimensions and the smoothness probe.
//!
//! ```text
//! cargo run --release --example curve_ring -- curves/g_char2.curve
//! ```

use hklab::curve::{CurveFile, Smoothness};
use hklab::gf::Elem;
use hklab::parse::parse_poly;
use hklab::poly::HomogPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "curves/g_char2.curve".into());
    let file = CurveFile::parse(&std::fs::read_to_string(&path)?)?;
    let curve = file.build()?;
    let delta = curve.degree();
    println!("{}  over F_{}", curve.equation(), curve.field().size());
    println!("degree {delta}, genus {}", curve.genus());

    match curve.is_smooth_probe() {
        Smoothness::Smooth => println!("smooth"),
        Smoothness::Singular(p) => println!("singular at ({}:{}:{})", p[0], p[1], p[2]),
        Smoothness::Inconclusive => println!("smoothness not decided"),
    }

    for k in [delta, delta + 1, 3 * delta] {
        let z = parse_poly(curve.field(), &format!("Z^{k}"))?;
        println!("Z^{k} = {}", curve.normal_form(&z));
    }

    let piece = curve.graded_piece(delta);
    let basis: Vec<String> = piece
        .basis
        .iter()
        .map(|m| HomogPoly::monomial(curve.field(), *m, Elem::ONE).to_string())
        .collect();
    println!(
        "R_{delta} has {} monomials: {}",
        piece.dim(),
        basis.join(", ")
    );

    println!(
        "{:>4} {:>6} {:>6} {:>6} {:>10}",
        "m", "HF", "h0", "h1", "h0-h1"
    );
    for m in -3..=2 * delta {
        let (h0, h1) = (curve.h0(m), curve.h1(m));
        println!(
            "{m:>4} {:>6} {h0:>6} {h1:>6} {:>10}",
            curve.hilbert_function(m),
            h0 - h1
        );
    }
    Ok(())
}
