//! Finite fields `F_p[a]/(f)` and the parameter ring `F_q[t]`.
//!
//! A [`Field`] is a cheap handle (an `Arc`) around the field tables; raw
//! elements are [`Elem`] values that only make sense together with the field
//! that produced them. Elements are packed as the integer `sum c_i p^i` of
//! their coordinates in the basis `1, a, ..., a^{d-1}`.
//!
//! [`FieldElement`] and [`ParamPoly`] are the self-contained value types of
//! the public API and report mixed-field use as an error.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field we build log tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    BadModulus { expected: u32, got: usize },
    #[error("modulus coefficient {0} is not reduced mod p")]
    UnreducedCoefficient(u32),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("field of size {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
}

/// Serialized description of a finite field: `p`, `d` and the modulus
/// coefficients, little-endian in the extension generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    /// The prime field, with the `X - 0` modulus convention.
    pub fn prime(p: u32) -> Self {
        FieldSpec {
            p,
            d: 1,
            modulus: vec![0, 1],
        }
    }

    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.d)
    }
}

/// A raw field element. Meaningless without its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    spec: FieldSpec,
    q: u32,
    // exp[i] = g^i for i in 0..q-1 and log[exp[i]] = i; only for d > 1.
    exp: Vec<u32>,
    log: Vec<u32>,
    // powers of p for digit manipulation
    pow_p: Vec<u32>,
}

/// A finite field `F_{p^d}`.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.0.spec;
        if s.d == 1 {
            write!(f, "F_{}", s.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", s.p, s.d, s.modulus)
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n as u64 {
        if n as u64 % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field, GfError> {
        Field::new(FieldSpec::prime(p))
    }

    /// Builds the field after certifying that `p` is prime and the modulus is
    /// monic and irreducible.
    pub fn new(spec: FieldSpec) -> Result<Field, GfError> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if spec.d == 0 {
            return Err(GfError::ZeroDegree);
        }
        if spec.modulus.len() != spec.d as usize + 1 || spec.modulus[spec.d as usize] != 1 {
            return Err(GfError::BadModulus {
                expected: spec.d,
                got: spec.modulus.len(),
            });
        }
        if let Some(&c) = spec.modulus.iter().find(|&&c| c >= p) {
            return Err(GfError::UnreducedCoefficient(c));
        }
        let size = spec.size();
        if size > MAX_FIELD_SIZE {
            return Err(GfError::TooLarge(size));
        }
        if spec.d > 1 && !fp_poly::is_irreducible(p, &spec.modulus) {
            return Err(GfError::Reducible(p));
        }
        let q = size as u32;
        let mut pow_p = Vec::with_capacity(spec.d as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=spec.d {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let (exp, log) = if spec.d > 1 {
            build_log_tables(&spec, q)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Field(Arc::new(FieldInner {
            spec,
            q,
            exp,
            log,
            pow_p,
        })))
    }

    /// The field `F_p[a]/(f)` with `f` the first irreducible found by
    /// [`find_irreducible`].
    pub fn extension(p: u32, d: u32) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if d == 0 {
            return Err(GfError::ZeroDegree);
        }
        Field::new(FieldSpec {
            p,
            d,
            modulus: find_irreducible(p, d),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.spec.d
    }

    #[inline]
    pub fn size(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.spec.d == 1
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of the extension generator `a`; in a prime field the root of
    /// the modulus `X - 0`, i.e. zero.
    pub fn generator(&self) -> Elem {
        if self.is_prime_field() {
            Elem((self.0.spec.p - self.0.spec.modulus[0]) % self.0.spec.p)
        } else {
            Elem(self.0.spec.p)
        }
    }

    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.0.spec.p as i64;
        Elem(n.rem_euclid(p) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn coords(&self, x: Elem) -> Vec<u32> {
        let p = self.0.spec.p;
        let mut v = x.0;
        (0..self.0.spec.d)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Elem {
        let p = self.0.spec.p;
        let mut v = 0u32;
        for (i, &c) in coords.iter().enumerate().take(self.0.spec.d as usize) {
            v += (c % p) * self.0.pow_p[i];
        }
        Elem(v)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.spec.p;
        if self.0.spec.d == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for i in 0..self.0.spec.d as usize {
            let s = (x % p + y % p) % p;
            out += s * self.0.pow_p[i];
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.spec.p;
        if self.0.spec.d == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0u32);
        for i in 0..self.0.spec.d as usize {
            let c = x % p;
            out += ((p - c) % p) * self.0.pow_p[i];
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.0.spec.d == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.0.spec.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.0.q as u64 - 1;
        let l = (self.0.log[a.0 as usize] as u64 + self.0.log[b.0 as usize] as u64) % n;
        Elem(self.0.exp[l as usize])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        if self.0.spec.d == 1 {
            let p = self.0.spec.p as u64;
            return Some(Elem(mod_pow(a.0 as u64, p - 2, p) as u32));
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Some(Elem(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x^{p^e}`.
    pub fn frobenius(&self, x: Elem, e: u64) -> Elem {
        if self.0.spec.d == 1 || x.is_zero() {
            return x;
        }
        let n = self.0.q as u64 - 1;
        let k = mod_pow(self.0.spec.p as u64, e, n);
        let l = (self.0.log[x.0 as usize] as u64 * k) % n;
        Elem(self.0.exp[l as usize])
    }

    /// Roots of a polynomial (coefficients little-endian in `X`) in this field.
    pub fn roots(&self, poly: &[Elem]) -> Vec<Elem> {
        self.elements()
            .filter(|&x| {
                let mut acc = Elem::ZERO;
                for &c in poly.iter().rev() {
                    acc = self.add(self.mul(acc, x), c);
                }
                acc.is_zero()
            })
            .collect()
    }

    pub fn format(&self, x: Elem) -> String {
        if self.is_prime_field() {
            return x.0.to_string();
        }
        let coords = self.coords(x);
        let mut parts = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn build_log_tables(spec: &FieldSpec, q: u32) -> (Vec<u32>, Vec<u32>) {
    let p = spec.p;
    let d = spec.d as usize;
    let pack = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &x| acc * p + x) };
    let n = q - 1;
    // candidate generators in increasing packed order, skipping 0 and 1
    for cand in 2..q {
        let mut g = vec![0u32; d];
        let mut v = cand;
        for c in g.iter_mut() {
            *c = v % p;
            v /= p;
        }
        let mut exp = Vec::with_capacity(n as usize);
        let mut cur = vec![0u32; d];
        cur[0] = 1;
        let mut ok = true;
        for i in 0..n {
            let packed = pack(&cur);
            if i > 0 && packed == 1 {
                ok = false;
                break;
            }
            exp.push(packed);
            cur = fp_poly::mul_mod(p, &cur, &g, &spec.modulus);
            cur.resize(d, 0);
        }
        if !ok {
            continue;
        }
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        return (exp, log);
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

/// Dense polynomials over a prime field, used for irreducibility
/// certificates and table construction. Coefficients little-endian.
pub mod fp_poly {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut mm = m.to_vec();
        trim(&mut mm);
        let dm = mm.len() - 1;
        let lead_inv = super::mod_pow(mm[dm] as u64, p as u64 - 2, p as u64) as u32;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv as u64 % p as u64) as u32;
            if c != 0 {
                let shift = top - dm;
                for (i, &mc) in mm.iter().enumerate() {
                    let sub = (c as u64 * mc as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        rem(p, &out, m)
    }

    pub fn pow_mod(p: u32, a: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut base = rem(p, a, m);
        let mut acc = vec![1u32];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(p, &acc, &base, m);
            }
            base = mul_mod(p, &base, &base, m);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(p, &x, &y);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or certificate: `f` of degree `d` is irreducible iff
    /// `gcd(f, X^{p^e} - X) = 1` for every `1 <= e <= d/2`.
    pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
        let mut f = f.to_vec();
        trim(&mut f);
        if f.len() < 2 {
            return false;
        }
        let d = f.len() - 1;
        if d == 1 {
            return true;
        }
        let x = vec![0u32, 1];
        let mut xp = x.clone();
        for _ in 1..=d / 2 {
            xp = pow_mod(p, &xp, p as u64, &f);
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(p, &f, &diff);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// First monic irreducible polynomial of degree `d` over `F_p`, iterating
/// the lower coefficients as the base-`p` digits of `0, 1, 2, ...`.
pub fn find_irreducible(p: u32, d: u32) -> Vec<u32> {
    assert!(d >= 1, "degree must be positive");
    let d = d as usize;
    let mut n: u64 = 0;
    loop {
        let mut f = vec![0u32; d + 1];
        let mut v = n;
        for c in f.iter_mut().take(d) {
            *c = (v % p as u64) as u32;
            v /= p as u64;
        }
        f[d] = 1;
        if fp_poly::is_irreducible(p, &f) {
            return f;
        }
        n += 1;
    }
}

/// An embedding `F_{p^d} -> F_{p^D}` for `d | D`, sending the generator to
/// the first root of its modulus in the larger field.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    source: Field,
    target: Field,
    image_of_generator: Elem,
}

impl FieldEmbedding {
    pub fn new(source: &Field, target: &Field) -> Option<FieldEmbedding> {
        if source.characteristic() != target.characteristic()
            || target.degree() % source.degree() != 0
        {
            return None;
        }
        let modulus: Vec<Elem> = source
            .spec()
            .modulus
            .iter()
            .map(|&c| target.from_int(c as i64))
            .collect();
        let root = *target.roots(&modulus).first()?;
        Some(FieldEmbedding {
            source: source.clone(),
            target: target.clone(),
            image_of_generator: root,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        let t = &self.target;
        self.source
            .coords(x)
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| {
                t.add(t.mul(acc, self.image_of_generator), t.from_int(c as i64))
            })
    }
}

/// A field element bundled with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Elem) -> Self {
        assert!(value.0 < field.size(), "element out of range");
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    pub fn from_coords(field: &Field, coords: &[u32]) -> Self {
        FieldElement::new(field, field.from_coords(coords))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(FieldElement::new(
            &self.field,
            self.field.add(self.value, other.value),
        ))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(FieldElement::new(
            &self.field,
            self.field.sub(self.value, other.value),
        ))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(FieldElement::new(
            &self.field,
            self.field.mul(self.value, other.value),
        ))
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement::new(&self.field, self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        self.field
            .inv(self.value)
            .map(|v| FieldElement::new(&self.field, v))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement::new(&self.field, self.field.pow(self.value, e))
    }

    /// `x^{p^e}`.
    pub fn frobenius(&self, e: u64) -> FieldElement {
        FieldElement::new(&self.field, self.field.frobenius(self.value, e))
    }
}

/// A polynomial in the free parameter `t` with coefficients in a finite
/// field. Sparse; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    field: Field,
    coeffs: BTreeMap<u64, Elem>,
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl ParamPoly {
    pub fn zero(field: &Field) -> Self {
        ParamPoly {
            field: field.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Elem) -> Self {
        Self::monomial(field, c, 0)
    }

    /// `c * t^k`.
    pub fn monomial(field: &Field, c: Elem, k: u64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        ParamPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn t(field: &Field) -> Self {
        Self::monomial(field, Elem::ONE, 1)
    }

    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (u64, Elem)>) -> Self {
        let mut out = Self::zero(field);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: u64, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        let v = match self.coeffs.get(&k) {
            Some(&old) => f.add(old, c),
            None => c,
        };
        if v.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, v);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Elem)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, k: u64) -> Elem {
        self.coeffs.get(&k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.coeffs.keys().next_back().copied()
    }

    /// The constant value when the polynomial does not involve `t`.
    pub fn as_constant(&self) -> Option<Elem> {
        match self.coeffs.len() {
            0 => Some(Elem::ZERO),
            1 => self.coeffs.get(&0).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        assert!(self.field == other.field, "ParamPoly field mismatch");
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        assert!(self.field == other.field, "ParamPoly field mismatch");
        let f = &self.field;
        let mut out = Self::zero(f);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.add_term(i + j, f.mul(a, b));
            }
        }
        out
    }

    pub fn scale(&self, c: Elem) -> ParamPoly {
        let f = &self.field;
        Self::from_terms(f, self.terms().map(|(k, a)| (k, f.mul(a, c))))
    }

    /// Absolute Frobenius: `a t^k -> a^p t^{kp}`.
    pub fn frobenius(&self) -> ParamPoly {
        let f = &self.field;
        let p = f.characteristic() as u64;
        ParamPoly {
            field: f.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &c)| (k * p, f.frobenius(c, 1)))
                .collect(),
        }
    }

    /// Specializes `t := value`.
    pub fn evaluate(&self, value: Elem) -> Elem {
        let f = &self.field;
        self.terms().fold(Elem::ZERO, |acc, (k, c)| {
            f.add(acc, f.mul(c, f.pow(value, k)))
        })
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&k, &c)| {
                let cs = f.format(c);
                let cs = if cs.contains('+') {
                    format!("({cs})")
                } else {
                    cs
                };
                match (k, cs.as_str()) {
                    (0, _) => cs,
                    (1, "1") => "t".to_string(),
                    (_, "1") => format!("t^{k}"),
                    (1, _) => format!("{cs}*t"),
                    _ => format!("{cs}*t^{k}"),
                }
            })
            .collect();
        parts.join("+")
    }
}

/// Absolute Frobenius on the parameter ring.
pub fn absolute_frobenius_param(f: &ParamPoly) -> ParamPoly {
    f.frobenius()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.mul(Elem(2), Elem(3)), Elem(1));
        assert_eq!(f5.inv(Elem(2)), Some(Elem(3)));
        assert_eq!(f5.neg(Elem(0)), Elem(0));
        assert_eq!(f5.from_int(-2), Elem(3));
    }

    #[test]
    fn f4_examples() {
        let f4 = Field::new(FieldSpec {
            p: 2,
            d: 2,
            modulus: vec![1, 1, 1],
        })
        .unwrap();
        let u = f4.generator();
        let u1 = f4.add(u, Elem::ONE);
        assert_eq!(f4.mul(u, u1), Elem::ONE);
        assert_eq!(f4.frobenius(u, 1), u1);
        assert_eq!(f4.frobenius(u, 2), u);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(Field::prime(6).unwrap_err(), GfError::NotPrime(6));
        let reducible = FieldSpec {
            p: 2,
            d: 2,
            modulus: vec![1, 0, 1],
        };
        assert_eq!(Field::new(reducible).unwrap_err(), GfError::Reducible(2));
        let not_monic = FieldSpec {
            p: 3,
            d: 2,
            modulus: vec![1, 0, 2],
        };
        assert!(matches!(
            Field::new(not_monic),
            Err(GfError::BadModulus { .. })
        ));
    }

    #[test]
    fn element_errors() {
        let f5 = Field::prime(5).unwrap();
        let f7 = Field::prime(7).unwrap();
        let a = FieldElement::new(&f5, Elem(2));
        let b = FieldElement::new(&f7, Elem(2));
        assert_eq!(a.add(&b).unwrap_err(), GfError::FieldMismatch);
        assert_eq!(
            FieldElement::new(&f5, Elem(0)).inv().unwrap_err(),
            GfError::DivisionByZero
        );
    }

    #[test]
    fn find_irreducible_small_cases() {
        assert_eq!(find_irreducible(2, 2), vec![1, 1, 1]);
        let lin = find_irreducible(3, 1);
        assert_eq!(lin.len(), 2);
        assert_eq!(lin[1], 1);
    }

    #[test]
    fn param_poly_frobenius() {
        let f2 = Field::prime(2).unwrap();
        let t1 = ParamPoly::t(&f2).add(&ParamPoly::constant(&f2, Elem::ONE));
        let img = absolute_frobenius_param(&t1);
        assert_eq!(
            img.terms().collect::<Vec<_>>(),
            vec![(0, Elem::ONE), (2, Elem::ONE)]
        );
    }

    #[test]
    fn formatting() {
        let f = Field::new(FieldSpec {
            p: 5,
            d: 4,
            modulus: vec![3, 0, 0, 0, 1],
        })
        .unwrap();
        let x = f.from_coords(&[1, 0, 2, 1]);
        assert_eq!(f.format(x), "a^3+2*a^2+1");
        let pp = ParamPoly::monomial(&f, f.generator(), 5);
        assert_eq!(pp.format(), "a*t^5");
    }
}
