//! Independent checks over prime fields: dense Macaulay matrices in the full
//! polynomial ring `F_p[X,Y,Z]` and the Cartier-Manin matrix from the
//! coefficients of `F^(p-1)`. Nothing here uses normal forms or the Čech
//! model of the library.

use std::collections::HashMap;

use hklab::catalog;
use hklab::cech::p_rank;
use hklab::curve::PlaneCurve;
use hklab::gf::Field;
use hklab::hk::{hk_function, syzygy_dim, IdealGens};
use hklab::hn::{semistable_rank2, vanishing_degree, SyzBundle, Verdict};
use hklab::poly::HomogPoly;

type Mono = (u32, u32, u32);
type Poly = HashMap<Mono, u64>;

fn monomials(m: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    let m = m as u32;
    for i in (0..=m).rev() {
        for j in (0..=m - i).rev() {
            out.push((i, j, m - i - j));
        }
    }
    out
}

fn degree(f: &Poly) -> i64 {
    f.keys().next().map_or(0, |&(a, b, c)| (a + b + c) as i64)
}

fn from_lib(f: &HomogPoly<Field>) -> Poly {
    f.terms()
        .map(|(m, c)| ((m.x as u32, m.y as u32, m.z as u32), c.0 as u64))
        .collect()
}

fn from_terms(terms: &[(i64, Mono)], p: u64) -> Poly {
    let mut f = Poly::new();
    for &(c, m) in terms {
        let c = c.rem_euclid(p as i64) as u64;
        if c != 0 {
            f.insert(m, c);
        }
    }
    f
}

fn mul(f: &Poly, g: &Poly, p: u64) -> Poly {
    let mut out = Poly::new();
    for (a, x) in f {
        for (b, y) in g {
            let k = (a.0 + b.0, a.1 + b.1, a.2 + b.2);
            let v = out.entry(k).or_insert(0);
            *v = (*v + x * y) % p;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn pow(f: &Poly, n: u32, p: u64) -> Poly {
    let mut out = from_terms(&[(1, (0, 0, 0))], p);
    for _ in 0..n {
        out = mul(&out, f, p);
    }
    out
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let mut r = 1;
        let (mut b, mut e) = (a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = *x * s % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - k * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim (F_p[X,Y,Z] / (gens))_m` from the Macaulay matrix in degree `m`.
fn quotient_dim(gens: &[Poly], m: i64, p: u64) -> usize {
    let cols = monomials(m);
    let index: HashMap<Mono, usize> = cols.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        for shift in monomials(m - degree(g)) {
            let mut row = vec![0u64; cols.len()];
            for (&(a, b, c), &v) in g {
                row[index[&(a + shift.0, b + shift.1, c + shift.2)]] = v;
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return cols.len();
    }
    cols.len() - rank_mod(rows, p)
}

/// Length of `F_p[X,Y,Z] / (G, gens)`; all generators positive degree.
fn total_length(gens: &[Poly], p: u64) -> usize {
    let mut total = 0;
    let mut zeros = 0;
    let mut m = 0;
    while zeros < 2 {
        let d = quotient_dim(gens, m, p);
        total += d;
        zeros = if d == 0 { zeros + 1 } else { 0 };
        m += 1;
    }
    total
}

fn g_char2() -> Poly {
    // Z^4 + XYZ^2 + X^3 Z + Y^3 Z + X^2 Y^2
    from_terms(
        &[
            (1, (0, 0, 4)),
            (1, (1, 1, 2)),
            (1, (3, 0, 1)),
            (1, (0, 3, 1)),
            (1, (2, 2, 0)),
        ],
        2,
    )
}

fn h_char3() -> Poly {
    // Z^4 - XY(X+Y)(X+2Y) = Z^4 - X^3 Y - 3 X^2 Y^2 - 2 X Y^3
    from_terms(
        &[
            (1, (0, 0, 4)),
            (-1, (3, 1, 0)),
            (-3, (2, 2, 0)),
            (-2, (1, 3, 0)),
        ],
        3,
    )
}

fn fermat(delta: u32, p: u64, z: i64) -> Poly {
    from_terms(
        &[(1, (delta, 0, 0)), (1, (0, delta, 0)), (z, (0, 0, delta))],
        p,
    )
}

fn phi_oracle(curve: &Poly, q: u32, p: u64) -> usize {
    let gens = vec![
        curve.clone(),
        from_terms(&[(1, (q, 0, 0))], p),
        from_terms(&[(1, (0, q, 0))], p),
        from_terms(&[(1, (0, 0, q))], p),
    ];
    total_length(&gens, p)
}

fn check_phi(curve: &PlaneCurve, oracle: &Poly, e_max: u32) {
    let p = curve.field().characteristic() as u64;
    let table = hk_function(curve, &IdealGens::maximal(curve.field()), e_max).unwrap();
    for row in &table.rows {
        assert_eq!(
            row.phi as usize,
            phi_oracle(oracle, row.q as u32, p),
            "q = {}",
            row.q
        );
    }
}

#[test]
fn phi_matches_macaulay_oracle_char2() {
    check_phi(&catalog::load(catalog::G_CHAR2).unwrap(), &g_char2(), 3);
}

#[test]
fn phi_matches_macaulay_oracle_char3() {
    check_phi(&catalog::load(catalog::H_CHAR3).unwrap(), &h_char3(), 2);
}

#[test]
fn phi_matches_macaulay_oracle_fermat() {
    check_phi(
        &catalog::load(catalog::FERMAT4_F5).unwrap(),
        &fermat(4, 5, -1),
        1,
    );
    check_phi(
        &catalog::load(catalog::FERMAT5_F7).unwrap(),
        &fermat(5, 7, 1),
        1,
    );
}

/// `h0(Syz(f_i)(m))` on the curve as `Σ h0(m - d_i) - dim (f_i)_m` with
/// everything measured in the polynomial ring.
fn syz_dim_oracle(curve: &Poly, gens: &[Poly], m: i64, p: u64) -> usize {
    let r_dim = |k: i64| quotient_dim(std::slice::from_ref(curve), k, p);
    let sum: usize = gens.iter().map(|g| r_dim(m - degree(g))).sum();
    let mut with_curve = gens.to_vec();
    with_curve.push(curve.clone());
    let ideal_in_r = r_dim(m) - quotient_dim(&with_curve, m, p);
    sum - ideal_in_r
}

#[test]
fn syzygy_dimensions_match_oracle() {
    let h = catalog::load(catalog::H_CHAR3).unwrap();
    let gens = IdealGens::parse(h.field(), "X^3,Y^3,Z^3").unwrap();
    let oracle_gens: Vec<Poly> = gens.gens().iter().map(from_lib).collect();
    for m in 2..=9 {
        assert_eq!(
            syzygy_dim(&h, &gens, m),
            syz_dim_oracle(&h_char3(), &oracle_gens, m as i64, 3),
            "m = {m}"
        );
    }
    let g = catalog::load(catalog::G_CHAR2).unwrap();
    let gens = IdealGens::parse(g.field(), "X^4,Y^4,Z^4").unwrap();
    let oracle_gens: Vec<Poly> = gens.gens().iter().map(from_lib).collect();
    for m in 4..=10 {
        assert_eq!(
            syzygy_dim(&g, &gens, m),
            syz_dim_oracle(&g_char2(), &oracle_gens, m as i64, 2),
            "m = {m}"
        );
    }
}

/// Checks a destabilizing section against the polynomial ring: it is a
/// relation modulo the curve equation, and `F_p[X,Y,Z]/(G, a, b, c)` has
/// stable Hilbert function equal to the reported number of zeros.
fn check_destabilizer(
    curve: &PlaneCurve,
    oracle: &Poly,
    gens: &str,
    twist: i32,
    zeros: i64,
    sub: i64,
) {
    let p = curve.field().characteristic() as u64;
    let g = IdealGens::parse(curve.field(), gens).unwrap();
    let hn = semistable_rank2(&SyzBundle::new(curve, &g, twist).unwrap()).unwrap();
    assert_eq!(hn.verdict, Verdict::Destabilized);
    let d = hn.destabilizer.unwrap();
    assert_eq!(d.sub_degree, sub);
    assert_eq!(d.vanishing_degree, zeros);
    assert_eq!(vanishing_degree(curve, &d.section).unwrap(), zeros);

    let comps: Vec<Poly> = d.section.components.iter().map(from_lib).collect();
    let mut relation = Poly::new();
    for (a, f) in comps.iter().zip(g.gens()) {
        for (k, v) in mul(a, &from_lib(f), p) {
            let e = relation.entry(k).or_insert(0);
            *e = (*e + v) % p;
        }
    }
    relation.retain(|_, v| *v != 0);
    if !relation.is_empty() {
        let m = degree(&relation);
        let base = quotient_dim(std::slice::from_ref(oracle), m, p);
        let with = quotient_dim(&[oracle.clone(), relation], m, p);
        assert_eq!(
            base, with,
            "relation is not a multiple of the curve equation"
        );
    }

    let mut ideal = comps.clone();
    ideal.retain(|c| !c.is_empty());
    ideal.push(oracle.clone());
    let top = comps.iter().map(degree).max().unwrap().max(degree(oracle)) + 6;
    let values: Vec<usize> = (top..top + 3).map(|m| quotient_dim(&ideal, m, p)).collect();
    assert!(
        values.iter().all(|&v| v as i64 == zeros),
        "stable values {values:?}"
    );
}

#[test]
fn char2_first_pullback_destabilizer_is_genuine() {
    let g = catalog::load(catalog::G_CHAR2).unwrap();
    check_destabilizer(&g, &g_char2(), "X^4,Y^4,Z^4", 6, 6, 2);
    check_destabilizer(&g, &g_char2(), "X^8,Y^8,Z^8", 12, 0, 4);
}

#[test]
fn char3_destabilizer_is_zero_free() {
    let h = catalog::load(catalog::H_CHAR3).unwrap();
    check_destabilizer(&h, &h_char3(), "X^9,Y^9,Z^9", 12, 0, 0);
}

/// Cartier-Manin matrix of a smooth plane curve `F = 0` of degree `δ`:
/// entry `(u, v)` is the coefficient of `X^{p u_1 - v_1} Y^{p u_2 - v_2}
/// Z^{p u_3 - v_3}` in `F^{p-1}`, for `u, v` positive with sum `δ`.
fn cartier_manin(f: &Poly, p: u64) -> Vec<Vec<u64>> {
    let delta = degree(f) as u32;
    let interior: Vec<Mono> = monomials(delta as i64)
        .into_iter()
        .filter(|&(a, b, c)| a >= 1 && b >= 1 && c >= 1)
        .collect();
    let fp = pow(f, (p - 1) as u32, p);
    let pu = p as u32;
    interior
        .iter()
        .map(|u| {
            interior
                .iter()
                .map(|v| {
                    let k = (pu * u.0 - v.0, pu * u.1 - v.1, pu * u.2 - v.2);
                    fp.get(&k).copied().unwrap_or(0)
                })
                .collect()
        })
        .collect()
}

/// Over a prime field the p-rank is the rank of `A^g`.
fn p_rank_oracle(f: &Poly, p: u64) -> usize {
    let a = cartier_manin(f, p);
    let g = a.len();
    let mut acc = a.clone();
    for _ in 1..g {
        acc = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| (0..g).map(|k| acc[i][k] * a[k][j]).sum::<u64>() % p)
                    .collect()
            })
            .collect();
    }
    rank_mod(acc, p)
}

#[test]
fn p_rank_matches_cartier_manin() {
    let cases: [(&str, Poly, u64); 4] = [
        (catalog::G_CHAR2, g_char2(), 2),
        (catalog::H_CHAR3, h_char3(), 3),
        (catalog::FERMAT4_F5, fermat(4, 5, -1), 5),
        (catalog::FERMAT5_F7, fermat(5, 7, 1), 7),
    ];
    for (text, f, p) in cases {
        let curve = catalog::load(text).unwrap();
        assert_eq!(p_rank(&curve), p_rank_oracle(&f, p), "{}", curve.equation());
    }
}

#[test]
fn hilbert_function_matches_polynomial_ring() {
    for (text, f, p) in [
        (catalog::G_CHAR2, g_char2(), 2),
        (catalog::FERMAT5_F7, fermat(5, 7, 1), 7),
    ] {
        let curve = catalog::load(text).unwrap();
        for m in 0..=20 {
            assert_eq!(
                curve.hilbert_function(m) as usize,
                quotient_dim(std::slice::from_ref(&f), m as i64, p)
            );
        }
    }
}
