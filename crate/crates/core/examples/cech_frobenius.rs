//! Frobenius on H^1(C, O_C): Hasse-Witt matrix, p-rank, fixed classes and
//! the orbit of a one-parameter family of classes.
//!
//! ```text
//! cargo run --release --example cech_frobenius -- curves/fermat4_f625.curve
//! ```

use hklab::cech::{
    detect_repetition, fixed_classes, flat_class, frobenius_on_class, h1_basis, hasse_witt, orbit,
    CechClass,
};
use hklab::curve::CurveFile;
use hklab::gf::Field;
use hklab::poly::HomogPoly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "curves/fermat4_f625.curve".into());
    let curve = CurveFile::parse(&std::fs::read_to_string(&path)?)?.build()?;
    let field = curve.field();
    println!("{}  over F_{}", curve.equation(), field.size());

    let basis: Vec<String> = h1_basis(&curve, 0)
        .iter()
        .map(|m| HomogPoly::monomial(field, *m, hklab::gf::Elem::ONE).to_string())
        .collect();
    println!("H^1(O_C) basis: {}", basis.join(", "));

    let hw = hasse_witt(&curve);
    println!("Hasse-Witt matrix (columns are F^*(b_j)):");
    for r in 0..hw.matrix.rows() {
        let row: Vec<String> = (0..hw.matrix.cols())
            .map(|c| format!("{:?}", field.coords(hw.matrix.get(r, c))))
            .collect();
        println!("  {}", row.join(" "));
    }
    println!(
        "p-rank {}, semisimple part {}",
        hw.p_rank, hw.semisimple_dim
    );

    let fixed = fixed_classes(&curve);
    println!("fixed classes: F_p-dimension {}", fixed.fp_dimension);
    for k in &fixed.classes {
        println!("  {k}  (F^* k = k: {})", frobenius_on_class(k) == *k);
    }

    if fixed.classes.len() >= 2 {
        let (v, w): (&CechClass<Field>, _) = (&fixed.classes[0], &fixed.classes[1]);
        let flat = flat_class(v, w)?;
        let orb = orbit(&flat, 5);
        for (e, k) in orb.iter().enumerate() {
            println!("F^{e}*: {k}");
        }
        match detect_repetition(&orb) {
            None => println!("no two members of the orbit are proportional"),
            Some((i, j)) => println!("members {i} and {j} are proportional"),
        }
    }
    Ok(())
}
