//! Homogeneous polynomials in three variables.
//!
//! Coefficients live in a [`CoeffRing`]: either a finite [`Field`] or the
//! parameter ring [`ParamRing`] (`F_q[t]`). Terms are kept in a `BTreeMap`
//! keyed by [`Monomial`], whose ordering is graded lex with `X > Y > Z`,
//! largest first, so every matrix assembled from these maps is reproducible.
//!
//! Exponents are signed so the same type carries the Laurent representatives
//! used for Čech classes; ordinary polynomials never store negative
//! exponents.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gf::{Elem, Field, ParamPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot add polynomials of degrees {0} and {1}")]
    DegreeMismatch(i32, i32),
    #[error("substitution images must share one degree, got {0:?}")]
    NonUniformImages([i32; 3]),
    #[error("substitution needs non-negative exponents, found {0}")]
    NegativeExponent(Monomial),
}

/// `X^x Y^y Z^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0, z: 0 };

    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Monomial { x, y, z }
    }

    pub fn degree(&self) -> i32 {
        self.x + self.y + self.z
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn scale(&self, k: i32) -> Monomial {
        Monomial::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn is_polynomial(&self) -> bool {
        self.x >= 0 && self.y >= 0 && self.z >= 0
    }

    pub fn exponents(&self) -> [i32; 3] {
        [self.x, self.y, self.z]
    }

    pub fn format_with(&self, vars: [&str; 3]) -> String {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (e, v) in self.exponents().into_iter().zip(vars) {
            let target = if e > 0 { &mut num } else { &mut den };
            match e.abs() {
                0 => {}
                1 => target.push(v.to_string()),
                k => target.push(format!("{v}^{k}")),
            }
        }
        let n = if num.is_empty() {
            "1".to_string()
        } else {
            num.join("*")
        };
        match den.len() {
            0 => n,
            1 => format!("{n}/{}", den[0]),
            _ => format!("{n}/({})", den.join("*")),
        }
    }
}

impl Ord for Monomial {
    // Largest first: higher degree, then higher X exponent, then higher Y.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then(other.x.cmp(&self.x))
            .then(other.y.cmp(&self.y))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(["X", "Y", "Z"]))
    }
}

/// All monomials of degree `m` in canonical order, `X^m` first.
pub fn monomials_of_degree(m: i32) -> Vec<Monomial> {
    if m < 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(((m + 1) * (m + 2) / 2) as usize);
    for x in (0..=m).rev() {
        for y in (0..=m - x).rev() {
            out.push(Monomial::new(x, y, m - x - y));
        }
    }
    out
}

/// Coefficient rings for [`HomogPoly`].
pub trait CoeffRing: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn field(&self) -> &Field;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// The absolute Frobenius `c -> c^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    fn embed(&self, c: Elem) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;

    fn one(&self) -> Self::Elem {
        self.embed(Elem::ONE)
    }
}

impl CoeffRing for Field {
    type Elem = Elem;

    fn field(&self) -> &Field {
        self
    }
    fn zero(&self) -> Elem {
        Elem::ZERO
    }
    fn is_zero(&self, a: &Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        Field::add(self, *a, *b)
    }
    fn neg(&self, a: &Elem) -> Elem {
        Field::neg(self, *a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Field::mul(self, *a, *b)
    }
    fn frobenius(&self, a: &Elem) -> Elem {
        Field::frobenius(self, *a, 1)
    }
    fn embed(&self, c: Elem) -> Elem {
        c
    }
    fn format(&self, a: &Elem) -> String {
        Field::format(self, *a)
    }
}

/// `F_q[t]` with `t` a free variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRing {
    field: Field,
}

impl ParamRing {
    pub fn new(field: &Field) -> Self {
        ParamRing {
            field: field.clone(),
        }
    }
}

impl CoeffRing for ParamRing {
    type Elem = ParamPoly;

    fn field(&self) -> &Field {
        &self.field
    }
    fn zero(&self) -> ParamPoly {
        ParamPoly::zero(&self.field)
    }
    fn is_zero(&self, a: &ParamPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.add(b)
    }
    fn neg(&self, a: &ParamPoly) -> ParamPoly {
        a.neg()
    }
    fn mul(&self, a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
        a.mul(b)
    }
    fn frobenius(&self, a: &ParamPoly) -> ParamPoly {
        a.frobenius()
    }
    fn embed(&self, c: Elem) -> ParamPoly {
        ParamPoly::constant(&self.field, c)
    }
    fn format(&self, a: &ParamPoly) -> String {
        a.format()
    }
}

/// A homogeneous polynomial of fixed degree; the zero polynomial keeps its
/// degree.
#[derive(Clone, PartialEq)]
pub struct HomogPoly<R: CoeffRing> {
    ring: R,
    degree: i32,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: CoeffRing> fmt::Debug for HomogPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(["X", "Y", "Z"]))
    }
}

impl<R: CoeffRing> fmt::Display for HomogPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(["X", "Y", "Z"]))
    }
}

impl<R: CoeffRing> HomogPoly<R> {
    pub fn zero(ring: &R, degree: i32) -> Self {
        HomogPoly {
            ring: ring.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(ring: &R, mono: Monomial, c: R::Elem) -> Self {
        let mut out = Self::zero(ring, mono.degree());
        out.add_term(mono, c);
        out
    }

    /// Panics if a monomial has the wrong degree.
    pub fn from_terms(
        ring: &R,
        degree: i32,
        terms: impl IntoIterator<Item = (Monomial, R::Elem)>,
    ) -> Self {
        let mut out = Self::zero(ring, degree);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Adds `c * mono` in place.
    pub fn add_term(&mut self, mono: Monomial, c: R::Elem) {
        assert_eq!(
            mono.degree(),
            self.degree,
            "monomial {mono} does not have degree {}",
            self.degree
        );
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(old) => {
                let v = self.ring.add(old, &c);
                if self.ring.is_zero(&v) {
                    self.terms.remove(&mono);
                } else {
                    *old = v;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> R::Elem {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HomogPoly {
            ring: self.ring.clone(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, c: &R::Elem) -> Self {
        Self::from_terms(
            &self.ring,
            self.degree,
            self.terms.iter().map(|(m, a)| (*m, self.ring.mul(a, c))),
        )
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        HomogPoly {
            ring: self.ring.clone(),
            degree: self.degree + mono.degree(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring, self.degree + other.degree);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), self.ring.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::monomial(&self.ring, Monomial::ONE, self.ring.one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f^p` computed termwise: coefficients go through the absolute
    /// Frobenius and exponents are multiplied by `p`.
    pub fn p_power(&self) -> Self {
        let p = self.ring.field().characteristic() as i32;
        HomogPoly {
            ring: self.ring.clone(),
            degree: self.degree * p,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.scale(p), self.ring.frobenius(c)))
                .collect(),
        }
    }

    /// `f^{p^e}`.
    pub fn frobenius_power(&self, e: u32) -> Self {
        (0..e).fold(self.clone(), |f, _| f.p_power())
    }

    /// Substitutes `X, Y, Z` by `images`, which must share a degree.
    pub fn substitute(&self, images: &[HomogPoly<R>; 3]) -> Result<Self, PolyError> {
        let degs = [images[0].degree, images[1].degree, images[2].degree];
        if degs[0] != degs[1] || degs[1] != degs[2] {
            return Err(PolyError::NonUniformImages(degs));
        }
        let k = degs[0];
        let mut out = Self::zero(&self.ring, self.degree * k);
        let mut powers: [Vec<HomogPoly<R>>; 3] = Default::default();
        for (m, c) in self.terms() {
            if !m.is_polynomial() {
                return Err(PolyError::NegativeExponent(*m));
            }
            let mut term = Self::monomial(&self.ring, Monomial::ONE, c.clone());
            for (v, e) in m.exponents().into_iter().enumerate() {
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(Self::monomial(&self.ring, Monomial::ONE, self.ring.one()));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[v]);
                    cache.push(next);
                }
                term = term.mul(&cache[e as usize]);
            }
            for (m2, c2) in term.terms() {
                out.add_term(*m2, c2.clone());
            }
        }
        Ok(out)
    }

    /// Applies a coefficient map into another ring.
    pub fn map_coeffs<S: CoeffRing>(
        &self,
        ring: &S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> HomogPoly<S> {
        HomogPoly::from_terms(
            ring,
            self.degree,
            self.terms.iter().map(|(m, c)| (*m, f(c))),
        )
    }

    /// Exact division by a monomial, if every term is divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<Self> {
        let inv = mono.scale(-1);
        let out = self.mul_monomial(&inv);
        if out.is_polynomial() {
            Some(out)
        } else {
            None
        }
    }

    pub fn format_with(&self, vars: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = self.ring.format(c);
            let cs = if cs.contains('+') {
                format!("({cs})")
            } else {
                cs
            };
            let ms = m.format_with(vars);
            if i > 0 {
                s.push('+');
            }
            match (cs.as_str(), ms.as_str()) {
                (_, "1") => s.push_str(&cs),
                ("1", _) => s.push_str(&ms),
                _ if ms.starts_with("1/") => s.push_str(&format!("{cs}{}", &ms[1..])),
                _ => s.push_str(&format!("{cs}*{ms}")),
            }
        }
        s
    }
}

impl HomogPoly<Field> {
    /// Specializes nothing; convenience to lift into the parameter ring.
    pub fn to_param(&self) -> HomogPoly<ParamRing> {
        let ring = ParamRing::new(&self.ring);
        self.map_coeffs(&ring, |c| ParamPoly::constant(&self.ring, *c))
    }
}

impl HomogPoly<ParamRing> {
    /// Specializes `t := value`.
    pub fn specialize(&self, value: Elem) -> HomogPoly<Field> {
        let field = self.ring.field().clone();
        self.map_coeffs(&field, |c| c.evaluate(value))
    }

    /// The polynomial over the base field when no coefficient involves `t`.
    pub fn constant_coeffs(&self) -> Option<HomogPoly<Field>> {
        let field = self.ring.field().clone();
        let mut out = HomogPoly::zero(&field, self.degree);
        for (m, c) in self.terms() {
            out.add_term(*m, c.as_constant()?);
        }
        Some(out)
    }
}
