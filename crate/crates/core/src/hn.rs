//! Semistability and Harder-Narasimhan filtrations of rank-2 syzygy bundles
//! `Syz(f_1, f_2, f_3)(m_0)` on a plane curve.
//!
//! A line subbundle is found as the saturation of a global section of a
//! twist `S(m)`; its degree is `-m·δ + z` where `z` is the length of the
//! zero scheme of the section. If `L ⊂ S` has `deg L >= ⌊deg S/2⌋ + 1` then
//! Riemann-Roch gives `h^0(L(m)) > 0` as soon as `deg L + mδ >= g`, which
//! bounds the twists that need to be scanned.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::curve::PlaneCurve;
use crate::gf::Elem;
use crate::hk::{self, HkError, IdealGens, Syzygy};
use crate::linalg;

/// Projective section counts above this are not enumerated.
pub const ENUMERATION_CAP: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnError {
    #[error("rank-2 syzygy bundles need exactly three generators, got {0}")]
    NotRankTwo(usize),
    #[error("zero section has no vanishing degree")]
    ZeroSection,
    #[error("Hilbert function of R/(a,b,c) did not stabilize by degree {0}")]
    Unstable(i32),
    #[error("e_HK from the HN gap is only implemented for quartics (degree {0})")]
    UnsupportedDegree(i32),
    #[error(transparent)]
    Hk(#[from] HkError),
}

/// `Syz(f_1, f_2, f_3)(m_0)`, of rank 2 and degree `(2 m_0 - Σ d_i)·δ`.
#[derive(Debug, Clone)]
pub struct SyzBundle {
    pub curve: PlaneCurve,
    pub gens: IdealGens,
    pub twist: i32,
}

impl SyzBundle {
    pub fn new(curve: &PlaneCurve, gens: &IdealGens, twist: i32) -> Result<Self, HnError> {
        if gens.len() != 3 {
            return Err(HnError::NotRankTwo(gens.len()));
        }
        Ok(SyzBundle {
            curve: curve.clone(),
            gens: gens.clone(),
            twist,
        })
    }

    pub fn rank(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn degree(&self) -> i64 {
        let sum: i64 = self.gens.degrees().iter().map(|&d| d as i64).sum();
        (self.rank() as i64 * self.twist as i64 - sum) * self.curve.degree() as i64
    }

    /// `h^0(S(m))`.
    pub fn h0(&self, m: i32) -> usize {
        hk::syzygy_dim(&self.curve, &self.gens, self.twist + m)
    }

    /// Basis of `H^0(S(m))`.
    pub fn sections(&self, m: i32) -> Vec<Syzygy> {
        hk::syzygy_space(&self.curve, &self.gens, self.twist + m)
            .expect("field checked at construction")
    }

    /// The lowest `m` with possibly nonzero sections in `S(m)`.
    pub fn lowest_twist(&self) -> i32 {
        self.gens.min_degree() - self.twist
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionTable {
    /// `(m, h^0(S(m)))`.
    pub h0: Vec<(i32, usize)>,
    pub first: Option<i32>,
}

/// `h^0(S(m))` from the lowest possible twist up to `m_max`.
pub fn min_section_twist(bundle: &SyzBundle, m_max: i32) -> SectionTable {
    let mut h0 = Vec::new();
    let mut first = None;
    for m in bundle.lowest_twist()..=m_max {
        let h = bundle.h0(m);
        if h > 0 && first.is_none() {
            first = Some(m);
        }
        h0.push((m, h));
    }
    SectionTable { h0, first }
}

/// Length of the zero scheme of the section `(a_1, ..., a_n)`: the eventual
/// value of `dim (R/(a_1, ..., a_n))_k`.
///
/// Stabilization is certified by Gotzmann persistence: once every generator
/// of `(G, a_i)` has degree `<= k` and `HF(k) = HF(k+1) = c <= k`, the
/// Hilbert function is constant from `k` on.
pub fn vanishing_degree(curve: &PlaneCurve, section: &Syzygy) -> Result<i64, HnError> {
    let comps: Vec<_> = section
        .components
        .iter()
        .filter(|a| !a.is_zero())
        .cloned()
        .collect();
    if comps.is_empty() {
        return Err(HnError::ZeroSection);
    }
    let ideal = IdealGens::new(comps)?;
    let start = ideal.max_degree().max(curve.degree());
    let cap = 2 * start + 2 * curve.degree() * (ideal.min_degree() + 1) + 2;
    let colength = |k: i32| -> i64 {
        let mat = hk::multiplication_matrix(curve, &ideal, k);
        curve.hilbert_function(k) - linalg::rank(curve.field(), &mat) as i64
    };
    let mut prev = colength(start);
    for k in start..cap {
        let next = colength(k + 1);
        if next == prev && prev <= k as i64 {
            return Ok(prev);
        }
        prev = next;
    }
    Err(HnError::Unstable(cap))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Semistable,
    Destabilized,
    Inconclusive,
}

/// The maximal destabilizing line subbundle `L ⊂ S` with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Destabilizer {
    /// `L = O_C(Z)(-m*)` where the section lives in `S(m*)`.
    pub twist: i32,
    pub section: Syzygy,
    pub vanishing_degree: i64,
    pub sub_degree: i64,
    pub quotient_degree: i64,
    /// `deg L - deg S / 2`.
    pub alpha: Ratio<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HNData {
    pub verdict: Verdict,
    pub degree: i64,
    /// Twist up to which sections were scanned.
    pub scan_limit: i32,
    pub h0: Vec<(i32, usize)>,
    pub destabilizer: Option<Destabilizer>,
    /// Twists whose section space was too large to enumerate.
    pub overflow_twists: Vec<i32>,
}

impl HNData {
    pub fn alpha(&self) -> Option<Ratio<i64>> {
        self.destabilizer.as_ref().map(|d| d.alpha)
    }
}

/// Nonzero vectors of `F_q^h` with first nonzero coordinate 1.
fn projective_combinations(field_size: u32, h: usize) -> impl Iterator<Item = Vec<u32>> {
    let q = field_size as u64;
    (0..h).rev().flat_map(move |lead| {
        let tail = q.pow(lead as u32);
        (0..tail).map(move |mut n| {
            let mut v = vec![0u32; h];
            v[h - 1 - lead] = 1;
            for slot in v.iter_mut().skip(h - lead) {
                *slot = (n % q) as u32;
                n /= q;
            }
            v
        })
    })
}

fn combine(bundle: &SyzBundle, basis: &[Vec<Elem>], coeffs: &[u32], m: i32) -> Syzygy {
    let field = bundle.curve.field();
    let mut v = vec![Elem::ZERO; basis[0].len()];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = Elem(c);
        for (x, y) in v.iter_mut().zip(b) {
            *x = field.add(*x, field.mul(c, *y));
        }
    }
    Syzygy::from_coefficient_vector(&bundle.curve, &bundle.gens, bundle.twist + m, &v)
}

/// Decides semistability of a rank-2 syzygy bundle and returns the HN
/// destabilizer if there is one.
pub fn semistable_rank2(bundle: &SyzBundle) -> Result<HNData, HnError> {
    let curve = &bundle.curve;
    let field = curve.field();
    let delta = curve.degree() as i64;
    let degree = bundle.degree();
    let threshold = degree.div_euclid(2) + 1;
    let genus = curve.genus();
    // least m with threshold + mδ >= g
    let limit = (genus - threshold).div_euclid(delta)
        + i64::from((genus - threshold).rem_euclid(delta) != 0);
    let limit = limit as i32;
    let mut data = HNData {
        verdict: Verdict::Semistable,
        degree,
        scan_limit: limit,
        h0: Vec::new(),
        destabilizer: None,
        overflow_twists: Vec::new(),
    };
    for m in bundle.lowest_twist()..=limit {
        let internal = bundle.twist + m;
        if internal < 0 {
            data.h0.push((m, 0));
            continue;
        }
        let mat = hk::multiplication_matrix(curve, &bundle.gens, internal);
        let basis = linalg::left_kernel(field, &mat);
        data.h0.push((m, basis.len()));
        if basis.is_empty() {
            continue;
        }
        let h = basis.len();
        let q = field.size() as u64;
        let count = q
            .checked_pow(h as u32)
            .map(|x| (x - 1) / (q - 1))
            .unwrap_or(u64::MAX);
        let candidates: Box<dyn Iterator<Item = Vec<u32>>> = if count <= ENUMERATION_CAP {
            Box::new(projective_combinations(field.size(), h))
        } else {
            data.overflow_twists.push(m);
            Box::new((0..h).map(move |i| {
                let mut v = vec![0u32; h];
                v[i] = 1;
                v
            }))
        };
        for coeffs in candidates {
            let section = combine(bundle, &basis, &coeffs, m);
            let z = vanishing_degree(curve, &section)?;
            let sub_degree = z - m as i64 * delta;
            if sub_degree >= threshold {
                data.verdict = Verdict::Destabilized;
                data.destabilizer = Some(Destabilizer {
                    twist: m,
                    section,
                    vanishing_degree: z,
                    sub_degree,
                    quotient_degree: degree - sub_degree,
                    alpha: Ratio::new(2 * sub_degree - degree, 2),
                });
                return Ok(data);
            }
        }
    }
    if !data.overflow_twists.is_empty() {
        data.verdict = Verdict::Inconclusive;
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub e: u32,
    /// Bracket power relative to the given generators.
    pub q: u64,
    pub twist: i32,
    pub data: HNData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HnScan {
    pub entries: Vec<ScanEntry>,
    pub first_destabilizing: Option<u32>,
    /// `alpha(e+1) = p·alpha(e)` for all consecutive destabilized entries.
    pub frobenius_compatible: bool,
}

/// Applies [`semistable_rank2`] to `Syz(f_i^{p^e})(p^e·twist)` for
/// `e = 0..=e_max`. Without a base twist the balanced twist
/// `⌊p^e·Σd_i / 2⌋` is used.
pub fn strong_hn_scan(
    curve: &PlaneCurve,
    gens: &IdealGens,
    twist: Option<i32>,
    e_max: u32,
) -> Result<HnScan, HnError> {
    let p = curve.field().characteristic() as u64;
    let sum: i32 = gens.degrees().iter().sum();
    let mut entries = Vec::new();
    for e in 0..=e_max {
        let q = p.pow(e);
        let powered = gens.bracket_power(e);
        let t = match twist {
            Some(t) => t * q as i32,
            None => (sum * q as i32).div_euclid(2),
        };
        let data = semistable_rank2(&SyzBundle::new(curve, &powered, t)?)?;
        entries.push(ScanEntry {
            e,
            q,
            twist: t,
            data,
        });
    }
    let first_destabilizing = entries
        .iter()
        .find(|x| x.data.verdict == Verdict::Destabilized)
        .map(|x| x.e);
    let pr = Ratio::from_integer(p as i64);
    let frobenius_compatible =
        entries
            .windows(2)
            .all(|w| match (w[0].data.alpha(), w[1].data.alpha()) {
                (Some(a), Some(b)) => b == a * pr,
                (Some(_), None) => false,
                _ => true,
            });
    Ok(HnScan {
        entries,
        first_destabilizing,
        frobenius_compatible,
    })
}

/// `e_HK(R)` of a plane quartic from the HN gap `alpha` of
/// `Syz(X^q, Y^q, Z^q)`: `3 + (2α/q)^2 / (4δ)`.
pub fn ehk_from_hn(delta: i32, alpha: Ratio<i64>, q: u64) -> Result<Ratio<i64>, HnError> {
    if delta != 4 {
        return Err(HnError::UnsupportedDegree(delta));
    }
    let gap = alpha * Ratio::new(2, q as i64);
    Ok(Ratio::from_integer(3) + gap * gap / Ratio::from_integer(4 * delta as i64))
}

/// Re-checks the certificate: the section solves the syzygy equation and the
/// degrees add up.
pub fn verify_destabilizer(bundle: &SyzBundle, d: &Destabilizer) -> bool {
    d.section.verify(&bundle.curve, &bundle.gens)
        && !d.section.is_zero()
        && d.sub_degree + d.quotient_degree == bundle.degree()
        && d.alpha > Ratio::from_integer(0)
        && Ratio::from_integer(2 * d.sub_degree) > Ratio::from_integer(bundle.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn curve(p: u32, eq: &str, t: Option<u32>) -> PlaneCurve {
        PlaneCurve::parse(&Field::prime(p).unwrap(), eq, t.map(Elem)).unwrap()
    }

    fn g2() -> PlaneCurve {
        curve(2, "Z^4+X*Y*Z^2+Z*(X^3+Y^3)+X^2*Y^2", None)
    }

    #[test]
    fn projective_enumeration_counts() {
        assert_eq!(projective_combinations(3, 2).count(), 4);
        assert_eq!(projective_combinations(2, 3).count(), 7);
        let all: Vec<_> = projective_combinations(2, 2).collect();
        assert_eq!(all, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn bundle_degree() {
        let c = g2();
        let gens = IdealGens::parse(c.field(), "X^2,Y^2,Z^2").unwrap();
        assert_eq!(SyzBundle::new(&c, &gens, 3).unwrap().degree(), 0);
        assert_eq!(
            SyzBundle::new(&c, &gens.bracket_power(2), 12)
                .unwrap()
                .degree(),
            0
        );
    }

    #[test]
    fn char2_pullback_destabilizes_at_e2() {
        let c = g2();
        let gens = IdealGens::parse(c.field(), "X^8,Y^8,Z^8").unwrap();
        let b = SyzBundle::new(&c, &gens, 12).unwrap();
        let table = min_section_twist(&b, 0);
        assert_eq!(table.first, Some(-1));
        assert_eq!(b.h0(-1), 1);
        let hn = semistable_rank2(&b).unwrap();
        assert_eq!(hn.verdict, Verdict::Destabilized);
        let d = hn.destabilizer.unwrap();
        assert_eq!(d.sub_degree, 4);
        assert_eq!(d.vanishing_degree, 0);
        assert_eq!(d.alpha, Ratio::from_integer(4));
        assert!(verify_destabilizer(&b, &d));
    }

    #[test]
    fn vanishing_degree_examples() {
        let c = curve(3, "Z^4-X*Y*(X+Y)*(X+t*Y)", Some(2));
        let gens = IdealGens::maximal(c.field());
        let f = c.field().clone();
        let p = |s: &str| crate::parse::parse_poly(&f, s).unwrap();
        // (Y, -X, 0): V(X, Y) misses every curve monic in Z
        let s1 = Syzygy {
            m: 2,
            components: vec![p("Y"), p("-X"), crate::poly::HomogPoly::zero(&f, 1)],
        };
        assert!(s1.verify(&c, &gens));
        assert_eq!(vanishing_degree(&c, &s1).unwrap(), 0);
        // (Z, 0, -X) vanishes on V(X, Z) ∩ H = {(0:1:0)}, a simple point
        let s2 = Syzygy {
            m: 2,
            components: vec![p("Z"), crate::poly::HomogPoly::zero(&f, 1), p("-X")],
        };
        assert!(s2.verify(&c, &gens));
        assert_eq!(vanishing_degree(&c, &s2).unwrap(), 1);
        assert_eq!(vanishing_degree(&c, &s2.scale(Elem(2))).unwrap(), 1);
    }

    #[test]
    fn ehk_formula() {
        assert_eq!(
            ehk_from_hn(4, Ratio::from_integer(4), 8).unwrap(),
            Ratio::new(49, 16)
        );
        assert_eq!(
            ehk_from_hn(4, Ratio::from_integer(0), 5).unwrap(),
            Ratio::from_integer(3)
        );
        assert_eq!(
            ehk_from_hn(4, Ratio::from_integer(6), 9).unwrap(),
            Ratio::new(28, 9)
        );
        assert!(ehk_from_hn(5, Ratio::from_integer(1), 7).is_err());
    }
}
