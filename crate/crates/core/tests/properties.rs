use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use hklab::catalog;
use hklab::cech::{frobenius_on_class, h1_basis, CechClass};
use hklab::curve::{hilbert_function_closed, PlaneCurve};
use hklab::descent::{
    count_constant, descent_threshold, pigeonhole_window, theorem_margin, DescentSequence,
};
use hklab::gf::{Elem, Field};
use hklab::hk::{colength_piece_raw, IdealGens};
use hklab::poly::{HomogPoly, Monomial};

fn curves() -> Vec<PlaneCurve> {
    catalog::ALL
        .iter()
        .map(|(_, t)| catalog::load(t).unwrap())
        .filter(|c| c.is_smooth_probe() == hklab::curve::Smoothness::Smooth)
        .collect()
}

fn random_poly(field: &Field, m: i32, coeffs: &[u32]) -> HomogPoly<Field> {
    let mut terms = Vec::new();
    let mut k = 0;
    for i in (0..=m).rev() {
        for j in (0..=m - i).rev() {
            terms.push((
                Monomial::new(i, j, m - i - j),
                Elem(coeffs[k % coeffs.len()] % field.size()),
            ));
            k += 1;
        }
    }
    HomogPoly::from_terms(field, m, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent_and_linear(
        idx in 0usize..6,
        m in 0i32..14,
        a in prop::collection::vec(any::<u32>(), 1..40),
        b in prop::collection::vec(any::<u32>(), 1..40),
    ) {
        let c = &curves()[idx];
        let f = random_poly(c.field(), m, &a);
        let g = random_poly(c.field(), m, &b);
        let nf = c.normal_form(&f);
        prop_assert_eq!(c.normal_form(&nf), nf.clone());
        prop_assert!(nf.terms().all(|(mono, _)| mono.z < c.degree()));
        let sum = c.normal_form(&f.add(&g).unwrap());
        prop_assert_eq!(sum, nf.add(&c.normal_form(&g)).unwrap());
    }

    #[test]
    fn riemann_roch_and_serre(idx in 0usize..6, m in -10i32..=30) {
        let c = &curves()[idx];
        let delta = c.degree();
        prop_assert_eq!(c.h0(m) - c.h1(m), delta as i64 * m as i64 + 1 - c.genus());
        prop_assert_eq!(h1_basis(c, m).len() as i64, c.h0(delta - 3 - m));
        prop_assert_eq!(c.graded_piece(m.max(0)).dim() as i64, hilbert_function_closed(delta, m.max(0)));
    }

    #[test]
    fn frobenius_is_p_linear(
        idx in 0usize..6,
        m in -5i32..=0,
        x in prop::collection::vec(any::<u32>(), 1..8),
        y in prop::collection::vec(any::<u32>(), 1..8),
        l in any::<u32>(),
    ) {
        let c = &curves()[idx];
        let f = c.field();
        let n = h1_basis(c, m).len();
        prop_assume!(n > 0);
        let coords = |v: &[u32]| (0..n).map(|i| Elem(v[i % v.len()] % f.size())).collect::<Vec<_>>();
        let u = CechClass::from_coordinates(c, m, &coords(&x));
        let w = CechClass::from_coordinates(c, m, &coords(&y));
        let lambda = Elem(l % f.size());
        prop_assert_eq!(
            frobenius_on_class(&u.scale(&lambda)),
            frobenius_on_class(&u).scale(&f.frobenius(lambda, 1))
        );
        prop_assert_eq!(
            frobenius_on_class(&u.add(&w).unwrap()),
            frobenius_on_class(&u).add(&frobenius_on_class(&w)).unwrap()
        );
    }

    #[test]
    fn colength_identity_holds(e in 0u32..3, m in 0i32..40) {
        let h = catalog::load(catalog::H_CHAR3).unwrap();
        let gens = IdealGens::maximal(h.field()).bracket_power(e);
        prop_assert!(colength_piece_raw(&h, &gens, m).identity_holds());
    }

    #[test]
    fn count_constant_equations(r in 1i64..6, g in 2i64..12) {
        let c = count_constant(r, g).unwrap();
        prop_assert_eq!(c.ell, 2 * g);
        prop_assert_eq!(c.s, r * c.ell + r * (1 - g));
        prop_assert_eq!(c.k, c.ell * (c.s + 1));
        prop_assert_eq!(c.m, -c.ell * c.s + (c.s - r) * c.k + (c.s - r) * (1 - g));
        prop_assert_eq!(c.n, c.ell * c.s + 1 - g);
        prop_assert_eq!(c.c, BigInt::from(c.n) * c.m * c.s);
    }

    #[test]
    fn trigger_is_monotone(
        entries in prop::collection::vec((prop::sample::select(vec![2u64, 3, 4]), 0u64..200), 0..12),
        extra in prop::collection::vec((prop::sample::select(vec![2u64, 3, 4]), 0u64..200), 0..6),
        c in 0i64..6,
        rb in 1i64..60,
    ) {
        let t = descent_threshold(1, rb).unwrap();
        let c = BigInt::from(c);
        let short = DescentSequence::from_small(&entries).unwrap();
        let mut all = entries.clone();
        all.extend(extra);
        let long = DescentSequence::from_small(&all).unwrap();
        let a = theorem_margin(&short, &c, &t);
        let b = theorem_margin(&long, &c, &t);
        prop_assert_eq!(&b.margins[..a.margins.len()], &a.margins[..]);
        if let Some(n) = a.trigger {
            prop_assert_eq!(b.trigger, Some(n));
        }
    }

    #[test]
    fn threshold_bracket_is_exact(rb in 1i64..100_000) {
        let t = descent_threshold(1, rb).unwrap();
        let lo = BigInt::from(2).pow(t.floor as u32);
        prop_assert!(lo <= BigInt::from(rb));
        prop_assert!(BigInt::from(2).pow(t.ceil as u32) >= BigInt::from(rb));
        prop_assert!(t.ceil - t.floor <= 1);
    }

    #[test]
    fn pigeonhole_compares_exactly(e in 0i64..1000, t in 0i64..50, bound in 0u64..1000) {
        let w = pigeonhole_window(&BigInt::from(e), &BigInt::from(t), &BigUint::from(bound));
        prop_assert_eq!(w.forced, e - t >= bound as i64);
    }

    #[test]
    fn extension_field_axioms(a in 0u32..625, b in 0u32..625, c in 0u32..625) {
        let f = Field::extension(5, 4).unwrap();
        let (a, b, c) = (Elem(a), Elem(b), Elem(c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, 4), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }
}
