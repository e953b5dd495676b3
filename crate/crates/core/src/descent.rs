//! Exact bound arithmetic for Frobenius descent sequences: the slope bound
//! `b`, the threshold `log2(r·b)`, the count exponent `c` and the margins
//! `e_n - q_n^c`.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentError {
    #[error("r·b must be at least 1, got {0}")]
    NonPositive(i64),
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("rank must be at least 1, got {0}")]
    RankTooSmall(i64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("bad sequence entry {0:?}, expected q:e")]
    BadEntry(String),
    #[error("field size must be at least 2, got {0}")]
    FieldTooSmall(u64),
}

/// `max(0, deg E) + r·m·deg O(1)`.
pub fn mu_max_bound(deg_e: i64, r: i64, m_gg: i64, deg_o1: i64) -> i64 {
    deg_e.max(0) + r * m_gg * deg_o1
}

/// `log2(N)` for an integer `N >= 1` with an exact integer bracket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub argument: u64,
    /// Approximate value, for display only.
    pub log2: f64,
    pub floor: u64,
    /// Least integer `k` with `2^k >= N`; for integers `x`,
    /// `x >= log2(N)` iff `x >= ceil`.
    pub ceil: u64,
    pub exact: bool,
}

/// `t = log2(r·b)`.
pub fn descent_threshold(r: i64, b: i64) -> Result<Threshold, DescentError> {
    let n = r.checked_mul(b).unwrap_or(i64::MAX);
    if n < 1 {
        return Err(DescentError::NonPositive(n));
    }
    let n = n as u64;
    let floor = 63 - n.leading_zeros() as u64;
    let exact = n.is_power_of_two();
    Ok(Threshold {
        argument: n,
        log2: (n as f64).log2(),
        floor,
        ceil: if exact { floor } else { floor + 1 },
        exact,
    })
}

/// The intermediates of the bundle-count estimate for rank `r`, genus `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountConstant {
    pub r: i64,
    pub g: i64,
    pub ell: i64,
    pub s: i64,
    pub k: i64,
    pub m: i64,
    pub n: i64,
    #[serde(serialize_with = "serialize_display")]
    pub c: BigInt,
}

impl CountConstant {
    pub fn as_tuple(&self) -> (i64, i64, i64, i64, i64, BigInt) {
        (self.ell, self.s, self.k, self.m, self.n, self.c.clone())
    }
}

/// `ℓ = 2g`, `s = rℓ + r(1-g)`, `k = ℓ(s+1)`,
/// `m = -ℓs + (s-r)k + (s-r)(1-g)`, `n = ℓs + 1 - g`, `c = nms`.
pub fn count_constant(r: i64, g: i64) -> Result<CountConstant, DescentError> {
    if g < 2 {
        return Err(DescentError::GenusTooSmall(g));
    }
    if r < 1 {
        return Err(DescentError::RankTooSmall(r));
    }
    Ok(count_constant_with_ell(r, g, 2 * g))
}

/// As [`count_constant`] with an explicit `ℓ > 2g - 1`.
pub fn count_constant_with_ell(r: i64, g: i64, ell: i64) -> CountConstant {
    let s = r * ell + r * (1 - g);
    let k = ell * (s + 1);
    let m = -ell * s + (s - r) * k + (s - r) * (1 - g);
    let n = ell * s + 1 - g;
    let c = BigInt::from(n) * BigInt::from(m) * BigInt::from(s);
    CountConstant {
        r,
        g,
        ell,
        s,
        k,
        m,
        n,
        c,
    }
}

/// All bounds for one bundle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundContext {
    pub r: i64,
    pub g: i64,
    pub deg_e: i64,
    pub m_gg: i64,
    pub deg_o1: i64,
    pub b: i64,
    pub threshold: Threshold,
    pub count: CountConstant,
}

impl BoundContext {
    pub fn new(r: i64, g: i64, deg_e: i64, m_gg: i64, deg_o1: i64) -> Result<Self, DescentError> {
        let b = mu_max_bound(deg_e, r, m_gg, deg_o1);
        Ok(BoundContext {
            r,
            g,
            deg_e,
            m_gg,
            deg_o1,
            b,
            threshold: descent_threshold(r, b)?,
            count: count_constant(r, g)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountBound {
    #[serde(serialize_with = "serialize_display")]
    pub value: BigUint,
    pub bits: u64,
}

fn serialize_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `|K|^c`.
pub fn bundle_count_bound(field_size: u64, c: &BigInt) -> Result<CountBound, DescentError> {
    if field_size < 2 {
        return Err(DescentError::FieldTooSmall(field_size));
    }
    let exp = c.to_u32().expect("exponent fits in u32");
    let value = BigUint::from(field_size).pow(exp);
    Ok(CountBound {
        bits: value.bits(),
        value,
    })
}

fn prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).expect("q >= 2");
    let mut x = q;
    while x % p == 0 {
        x /= p;
    }
    x == 1
}

/// Closed point with residue field size `q` and descent depth `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentEntry {
    pub q: u64,
    #[serde(serialize_with = "serialize_display")]
    pub e: BigUint,
}

/// A Frobenius descent sequence `(q_n, e_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DescentSequence {
    pub entries: Vec<DescentEntry>,
}

impl DescentSequence {
    pub fn new(entries: Vec<(u64, BigUint)>) -> Result<Self, DescentError> {
        if let Some((q, _)) = entries.iter().find(|(q, _)| !prime_power(*q)) {
            return Err(DescentError::NotPrimePower(*q));
        }
        Ok(DescentSequence {
            entries: entries
                .into_iter()
                .map(|(q, e)| DescentEntry { q, e })
                .collect(),
        })
    }

    pub fn from_small(entries: &[(u64, u64)]) -> Result<Self, DescentError> {
        DescentSequence::new(
            entries
                .iter()
                .map(|&(q, e)| (q, BigUint::from(e)))
                .collect(),
        )
    }

    /// `"4:1,4:2,8:3"`.
    pub fn parse(src: &str) -> Result<Self, DescentError> {
        let mut entries = Vec::new();
        for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || DescentError::BadEntry(item.to_string());
            let (q, e) = item.split_once(':').ok_or_else(bad)?;
            entries.push((
                q.trim().parse().map_err(|_| bad())?,
                e.trim().parse().map_err(|_| bad())?,
            ));
        }
        DescentSequence::new(entries)
    }

    pub fn push(&mut self, q: u64, e: BigUint) -> Result<(), DescentError> {
        if !prime_power(q) {
            return Err(DescentError::NotPrimePower(q));
        }
        self.entries.push(DescentEntry { q, e });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarginReport {
    #[serde(serialize_with = "serialize_margins")]
    pub margins: Vec<BigInt>,
    /// First index with `e_n - q_n^c >= t`.
    pub trigger: Option<usize>,
}

fn serialize_margins<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Margins `e_n - q_n^c` and the first index where the margin reaches `t`.
pub fn theorem_margin(seq: &DescentSequence, c: &BigInt, t: &Threshold) -> MarginReport {
    let exp = c.to_u32().expect("exponent fits in u32");
    let t = BigInt::from(t.ceil);
    let margins: Vec<BigInt> = seq
        .entries
        .iter()
        .map(|x| BigInt::from(x.e.clone()) - BigInt::from(x.q).pow(exp))
        .collect();
    let trigger = margins.iter().position(|m| *m >= t);
    MarginReport { margins, trigger }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Window {
    #[serde(serialize_with = "serialize_display")]
    pub size: BigInt,
    pub forced: bool,
}

/// Pulls back `F^{k*}` for `k < e_n - t` must repeat once the window is at
/// least the number of isomorphism classes.
pub fn pigeonhole_window(e_n: &BigInt, t: &BigInt, count_bound: &BigUint) -> Window {
    let size = e_n - t;
    let forced = size >= BigInt::from(count_bound.clone());
    Window { size, forced }
}

/// `true` when `x >= log2(N)` for the threshold `N`.
pub fn reaches_threshold(x: &BigInt, t: &Threshold) -> bool {
    *x >= BigInt::from(t.ceil)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_bound() {
        assert_eq!(mu_max_bound(0, 2, 3, 4), 24);
        assert_eq!(mu_max_bound(-5, 2, 3, 4), 24);
        assert_eq!(mu_max_bound(8, 3, 1, 1), 11);
    }

    #[test]
    fn thresholds() {
        let t = descent_threshold(2, 16).unwrap();
        assert_eq!((t.floor, t.ceil, t.exact), (5, 5, true));
        assert_eq!(descent_threshold(1, 1).unwrap().ceil, 0);
        let t = descent_threshold(2, 24).unwrap();
        assert_eq!((t.floor, t.ceil), (5, 6));
        assert!((t.log2 - 5.585).abs() < 1e-3);
        assert!(descent_threshold(0, 5).is_err());
    }

    #[test]
    fn count_constants() {
        let a = count_constant(2, 3).unwrap();
        assert_eq!(a.as_tuple(), (6, 8, 54, 264, 46, BigInt::from(97152)));
        let b = count_constant(1, 2).unwrap();
        assert_eq!(b.as_tuple(), (4, 3, 16, 18, 11, BigInt::from(594)));
        assert!(a.c > b.c);
        assert!(count_constant(2, 1).is_err());
    }

    #[test]
    fn count_bounds() {
        assert_eq!(
            bundle_count_bound(2, &BigInt::from(10)).unwrap().value,
            BigUint::from(1024u32)
        );
        assert_eq!(
            bundle_count_bound(4, &BigInt::from(3)).unwrap().value,
            BigUint::from(64u32)
        );
        assert_eq!(
            bundle_count_bound(2, &BigInt::from(97152)).unwrap().bits,
            97153
        );
    }

    #[test]
    fn margins() {
        let t = descent_threshold(2, 16).unwrap();
        let seq =
            DescentSequence::from_small(&(1..=12).map(|n| (2, n)).collect::<Vec<_>>()).unwrap();
        let rep = theorem_margin(&seq, &BigInt::from(1), &t);
        assert_eq!(rep.margins[0], BigInt::from(-1));
        // n - 2 >= 5 first at n = 7
        assert_eq!(rep.trigger, Some(6));
        let empty = theorem_margin(&DescentSequence::default(), &BigInt::from(1), &t);
        assert_eq!(empty.trigger, None);
        assert!(DescentSequence::parse("6:1").is_err());
        assert_eq!(
            DescentSequence::parse("4:1, 8:2").unwrap(),
            DescentSequence::from_small(&[(4, 1), (8, 2)]).unwrap()
        );
    }

    #[test]
    fn windows() {
        let w = pigeonhole_window(&BigInt::from(10), &BigInt::from(5), &BigUint::from(4u32));
        assert!(w.forced);
        assert_eq!(w.size, BigInt::from(5));
        assert!(
            !pigeonhole_window(&BigInt::from(10), &BigInt::from(5), &BigUint::from(6u32)).forced
        );
    }
}
