//! Pulling a destabilizing syzygy back along a cover of curves.
//!
//! The quartic `Z^4 - XY(X+Y)(X+tY)` is pulled back along
//! `(U, V, W) -> (U^4, V^4, UVW^2)`, which yields the octic
//! `W^8 - (U^4+V^4)(U^4+tV^4)` times `U^4 V^4`.
//!
//! ```text
//! cargo run --release --example cover_splitting
//! ```

use hklab::catalog;
use hklab::cech::extension_splits;
use hklab::hk::{syzygy_dim, IdealGens, Syzygy};
use hklab::hn::{semistable_rank2, SyzBundle};
use hklab::parse::parse_poly;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = catalog::load(catalog::H_CHAR3)?;
    let d = catalog::load(catalog::OCTIC_D_CHAR3)?;
    let f = h.field().clone();
    let images = [
        parse_poly(&f, "X^4")?,
        parse_poly(&f, "Y^4")?,
        parse_poly(&f, "X*Y*Z^2")?,
    ];
    let vars = ["U", "V", "W"];

    let pulled = h.equation().substitute(&images)?;
    println!("H(U^4, V^4, UVW^2) = {}", pulled.format_with(vars));
    println!(
        "U^4 V^4 * D        = {}",
        d.equation()
            .mul(&parse_poly(&f, "X^4*Y^4")?)
            .format_with(vars)
    );

    let gens = IdealGens::parse(&f, "X^9,Y^9,Z^9")?;
    let hn = semistable_rank2(&SyzBundle::new(&h, &gens, 12)?)?;
    let destab = hn.destabilizer.ok_or("expected a destabilizing section")?;
    println!(
        "on H: section {} in twist {}, alpha {}",
        destab.section.format_with(["X", "Y", "Z"]),
        destab.twist,
        destab.alpha
    );

    let gens_d = IdealGens::new(
        gens.gens()
            .iter()
            .map(|g| g.substitute(&images))
            .collect::<Result<_, _>>()?,
    )?;
    let section = Syzygy {
        m: 48,
        components: destab
            .section
            .components
            .iter()
            .map(|a| a.substitute(&images))
            .collect::<Result<_, _>>()?,
    };
    println!("pulled back: {}", section.format_with(vars));
    println!(
        "is a syzygy of {} on D: {}",
        gens_d.format_with(vars),
        section.verify(&d, &gens_d)
    );
    println!("h0(Syz(...)(48)) on D = {}", syzygy_dim(&d, &gens_d, 48));
    println!(
        "h1(O_D(12)) = {}, extension splits: {}",
        d.h1(12),
        extension_splits(&d, 12)
    );
    Ok(())
}
