//! `H^1(C, O_C(m))` in the Čech model of the cover `{X ≠ 0}, {Y ≠ 0}`.
//!
//! A class is represented by a Laurent polynomial in normal form whose
//! monomials `X^i Y^j Z^a` have `i, j <= -1` and `0 <= a < δ`; monomials with
//! `i >= 0` or `j >= 0` are coboundaries and are dropped. The Frobenius sends
//! `H^1(O(m))` to `H^1(O(pm))` and is `p`-linear.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::curve::PlaneCurve;
use crate::gf::{Elem, Field, ParamPoly};
use crate::linalg::{self, Matrix};
use crate::parse::{self, ParseError};
use crate::poly::{CoeffRing, HomogPoly, Monomial, ParamRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("class is not fixed by the Frobenius")]
    NotFixed,
    #[error("classes are linearly dependent")]
    Dependent,
    #[error("classes live in different twists ({0} and {1})")]
    TwistMismatch(i32, i32),
    #[error("class coefficients live over a different field than the curve")]
    FieldMismatch,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Monomial basis of `H^1(C, O_C(m))`, in monomial order.
pub fn h1_basis(curve: &PlaneCurve, m: i32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..curve.degree() {
        // i + j = m - a with i, j <= -1
        let s = m - a;
        for i in (s + 1)..=-1 {
            out.push(Monomial::new(i, s - i, a));
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

fn is_cech_monomial(m: &Monomial, delta: i32) -> bool {
    m.x <= -1 && m.y <= -1 && (0..delta).contains(&m.z)
}

/// An element of `H^1(C, O_C(m))` with coefficients in `R`.
#[derive(Clone, PartialEq)]
pub struct CechClass<R: CoeffRing> {
    curve: PlaneCurve,
    rep: HomogPoly<R>,
}

impl<R: CoeffRing> fmt::Debug for CechClass<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CechClass({})", self.rep)
    }
}

impl<R: CoeffRing> fmt::Display for CechClass<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl<R: CoeffRing> CechClass<R> {
    /// The class of an arbitrary Laurent cochain on `{XY ≠ 0}`.
    pub fn from_cochain(curve: &PlaneCurve, cochain: &HomogPoly<R>) -> Result<Self, CechError> {
        if cochain.ring().field() != curve.field() {
            return Err(CechError::FieldMismatch);
        }
        let reduced = curve.normal_form(cochain);
        let delta = curve.degree();
        let mut rep = HomogPoly::zero(reduced.ring(), reduced.degree());
        for (m, c) in reduced.terms() {
            if is_cech_monomial(m, delta) {
                rep.add_term(*m, c.clone());
            }
        }
        Ok(CechClass {
            curve: curve.clone(),
            rep,
        })
    }

    pub fn zero(curve: &PlaneCurve, ring: &R, m: i32) -> Self {
        CechClass {
            curve: curve.clone(),
            rep: HomogPoly::zero(ring, m),
        }
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn twist(&self) -> i32 {
        self.rep.degree()
    }

    pub fn representative(&self) -> &HomogPoly<R> {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.rep.terms()
    }

    pub fn add(&self, other: &Self) -> Result<Self, CechError> {
        let rep = self
            .rep
            .add(&other.rep)
            .map_err(|_| CechError::TwistMismatch(self.twist(), other.twist()))?;
        Ok(CechClass {
            curve: self.curve.clone(),
            rep,
        })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        CechClass {
            curve: self.curve.clone(),
            rep: self.rep.scalar_mul(c),
        }
    }

    /// Coordinates in [`h1_basis`] order.
    pub fn coordinates(&self) -> Vec<R::Elem> {
        h1_basis(&self.curve, self.twist())
            .iter()
            .map(|m| self.rep.coeff(m))
            .collect()
    }

    pub fn format_with(&self, vars: [&str; 3]) -> String {
        self.rep.format_with(vars)
    }
}

impl CechClass<Field> {
    pub fn from_coordinates(curve: &PlaneCurve, m: i32, coords: &[Elem]) -> Self {
        let basis = h1_basis(curve, m);
        assert_eq!(basis.len(), coords.len());
        CechClass {
            curve: curve.clone(),
            rep: HomogPoly::from_terms(
                curve.field(),
                m,
                basis.into_iter().zip(coords.iter().copied()),
            ),
        }
    }

    /// Parses a cochain such as `"a*Z^3/(X^2*Y)"`.
    pub fn parse(curve: &PlaneCurve, src: &str) -> Result<Self, CechError> {
        let poly = parse::parse(curve.field(), src)?.into_field()?;
        CechClass::from_cochain(curve, &poly)
    }

    pub fn to_param(&self) -> CechClass<ParamRing> {
        CechClass {
            curve: self.curve.clone(),
            rep: self.rep.to_param(),
        }
    }
}

impl CechClass<ParamRing> {
    /// Parses a cochain that may involve the free parameter `t`.
    pub fn parse(curve: &PlaneCurve, src: &str) -> Result<Self, CechError> {
        let poly = parse::parse(curve.field(), src)?.into_param()?;
        CechClass::from_cochain(curve, &poly)
    }
}

/// `F^*`: raise the representative to the `p`-th power and drop
/// coboundaries. Sends twist `m` to `p·m`.
pub fn frobenius_on_class<R: CoeffRing>(class: &CechClass<R>) -> CechClass<R> {
    CechClass::from_cochain(&class.curve, &class.rep.p_power()).expect("same curve")
}

/// `F^{e*}`.
pub fn frobenius_iterate<R: CoeffRing>(class: &CechClass<R>, e: u32) -> CechClass<R> {
    (0..e).fold(class.clone(), |c, _| frobenius_on_class(&c))
}

/// `[c, F^*c, ..., F^{n*}c]`.
pub fn orbit<R: CoeffRing>(class: &CechClass<R>, steps: usize) -> Vec<CechClass<R>> {
    let mut out = vec![class.clone()];
    for _ in 0..steps {
        let next = frobenius_on_class(out.last().unwrap());
        out.push(next);
    }
    out
}

/// The Frobenius on `H^1(C, O_C)` in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseWitt {
    /// Column `j` holds the coordinates of `F^*(b_j)`.
    pub matrix: Matrix,
    pub p_rank: usize,
    pub semisimple_dim: usize,
}

/// Matrix of [`frobenius_on_class`] from `h1_basis(curve, m)` to
/// `h1_basis(curve, p·m)`.
pub fn frobenius_matrix(curve: &PlaneCurve, m: i32) -> Matrix {
    let field = curve.field();
    let p = field.characteristic() as i32;
    let basis = h1_basis(curve, m);
    let mut mat = Matrix::zeros(h1_basis(curve, p * m).len(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        let class = CechClass::from_cochain(curve, &HomogPoly::monomial(field, *b, Elem::ONE))
            .expect("same field");
        for (i, c) in frobenius_on_class(&class)
            .coordinates()
            .into_iter()
            .enumerate()
        {
            mat.set(i, j, c);
        }
    }
    mat
}

/// Matrix of [`frobenius_on_class`] on `h1_basis(curve, 0)`.
pub fn hasse_witt_matrix(curve: &PlaneCurve) -> Matrix {
    frobenius_matrix(curve, 0)
}

/// Entrywise `p^e`-th power.
fn twist_matrix(field: &Field, m: &Matrix, e: u64) -> Matrix {
    let mut out = m.clone();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.set(r, c, field.frobenius(m.get(r, c), e));
        }
    }
    out
}

/// Hasse-Witt matrix and the stable rank
/// `rank(M · M^(p) · ... · M^(p^{g-1}))`.
pub fn hasse_witt(curve: &PlaneCurve) -> HasseWitt {
    let field = curve.field();
    let matrix = hasse_witt_matrix(curve);
    let g = matrix.rows();
    let mut prod = matrix.clone();
    for e in 1..g as u64 {
        prod = prod.mul(field, &twist_matrix(field, &matrix, e));
    }
    let p_rank = if g == 0 {
        0
    } else {
        linalg::rank(field, &prod)
    };
    HasseWitt {
        matrix,
        p_rank,
        semisimple_dim: p_rank,
    }
}

pub fn p_rank(curve: &PlaneCurve) -> usize {
    hasse_witt(curve).p_rank
}

/// `{v ∈ H^1(C, O_C) : F^*v = v}` as a vector space over the prime field.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedClasses {
    /// A basis over `F_p`.
    pub classes: Vec<CechClass<Field>>,
    pub fp_dimension: usize,
}

/// Solves the `p`-linear system `M x^(p) = x` by viewing `H^1(C, O_C)` as an
/// `F_p`-space of dimension `d·g`.
pub fn fixed_classes(curve: &PlaneCurve) -> FixedClasses {
    let field = curve.field();
    let p = field.characteristic();
    let d = field.degree() as usize;
    let m = hasse_witt_matrix(curve);
    let g = m.rows();
    let n = d * g;
    let fp = Field::prime(p).expect("characteristic is prime");
    // column k: image of the k-th F_p basis vector e_{k / d} * a^{k % d}
    let mut lin = Matrix::zeros(n, n);
    for k in 0..n {
        let (j, l) = (k / d, k % d);
        let mut coords = vec![0u32; d];
        coords[l] = 1;
        let scalar = field.from_coords(&coords);
        let mut x = vec![Elem::ZERO; g];
        x[j] = scalar;
        let xp: Vec<Elem> = x.iter().map(|&c| field.frobenius(c, 1)).collect();
        let image = m.mul_vec(field, &xp);
        for i in 0..g {
            let diff = field.sub(image[i], x[i]);
            for (t, c) in field.coords(diff).into_iter().enumerate() {
                lin.set(i * d + t, k, Elem(c));
            }
        }
    }
    let kernel = linalg::right_kernel(&fp, &lin);
    let classes: Vec<CechClass<Field>> = kernel
        .iter()
        .map(|v| {
            let coords: Vec<Elem> = (0..g)
                .map(|j| {
                    let c: Vec<u32> = (0..d).map(|l| v[j * d + l].0).collect();
                    field.from_coords(&c)
                })
                .collect();
            CechClass::from_coordinates(curve, 0, &coords)
        })
        .collect();
    FixedClasses {
        fp_dimension: classes.len(),
        classes,
    }
}

fn linearly_independent(v: &CechClass<Field>, w: &CechClass<Field>) -> bool {
    let field = v.curve.field();
    let rows = vec![v.coordinates(), w.coordinates()];
    let cols = rows[0].len();
    linalg::rank(field, &Matrix::from_rows(rows, cols)) == 2
}

/// `c = v + t·w` for Frobenius-fixed, independent `v, w`; then
/// `F^{e*}(c) = v + t^{p^e} w`.
pub fn flat_class(
    v: &CechClass<Field>,
    w: &CechClass<Field>,
) -> Result<CechClass<ParamRing>, CechError> {
    flat_class_member(v, w, 1)
}

/// `v + t^k·w`.
pub fn flat_class_member(
    v: &CechClass<Field>,
    w: &CechClass<Field>,
    k: u64,
) -> Result<CechClass<ParamRing>, CechError> {
    if v.twist() != w.twist() {
        return Err(CechError::TwistMismatch(v.twist(), w.twist()));
    }
    if frobenius_on_class(v) != *v || frobenius_on_class(w) != *w {
        return Err(CechError::NotFixed);
    }
    if !linearly_independent(v, w) {
        return Err(CechError::Dependent);
    }
    let field = v.curve.field();
    let tk = ParamPoly::monomial(field, Elem::ONE, k);
    let wt = w.to_param().scale(&tk);
    Ok(v.to_param().add(&wt).expect("same twist"))
}

/// Coefficient rings where "equal up to a nonzero constant" can be decided.
pub trait ProjectiveCoeff: CoeffRing {
    /// The constant `λ` with `a = λ·b`, if there is one.
    fn constant_ratio(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Elem>;
}

impl ProjectiveCoeff for Field {
    fn constant_ratio(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.div(*a, *b)
    }
}

impl ProjectiveCoeff for ParamRing {
    fn constant_ratio(&self, a: &ParamPoly, b: &ParamPoly) -> Option<Elem> {
        let (da, db) = (a.degree()?, b.degree()?);
        if da != db {
            return None;
        }
        self.field().div(a.coeff(da), b.coeff(db))
    }
}

/// `a = λ·b` for a nonzero constant `λ`. Classes in different twists are
/// never equal.
pub fn projectively_equal<R: ProjectiveCoeff>(a: &CechClass<R>, b: &CechClass<R>) -> bool {
    if a.twist() != b.twist() {
        return false;
    }
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let ring = a.rep.ring();
    let (ma, ca) = a.terms().next().expect("nonzero");
    let cb = b.rep.coeff(ma);
    if ring.is_zero(&cb) {
        return false;
    }
    let Some(lambda) = ring.constant_ratio(ca, &cb) else {
        return false;
    };
    if lambda.is_zero() {
        return false;
    }
    b.scale(&ring.embed(lambda)) == *a
}

/// First pair `(s, t)`, `s < t`, of projectively equal classes in the orbit.
pub fn detect_repetition<R: ProjectiveCoeff>(orbit: &[CechClass<R>]) -> Option<(usize, usize)> {
    for t in 1..orbit.len() {
        for s in 0..t {
            if projectively_equal(&orbit[s], &orbit[t]) {
                return Some((s, t));
            }
        }
    }
    None
}

/// An extension of `O(-b)` by `O(a)` with `a + b = m` splits for every class
/// when `H^1(O(m)) = 0`.
pub fn extension_splits(curve: &PlaneCurve, m: i32) -> bool {
    curve.h1(m) == 0
}

/// The extension given by `class` splits.
pub fn class_splits<R: CoeffRing>(class: &CechClass<R>) -> bool {
    class.is_zero() || extension_splits(class.curve(), class.twist())
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, each as coordinates over the prime field.
    pub entries: Vec<Vec<u32>>,
}

impl MatrixDump {
    pub fn new(field: &Field, m: &Matrix) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                entries.push(field.coords(m.get(r, c)));
            }
        }
        MatrixDump {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn fermat_f625() -> PlaneCurve {
        let f = Field::new(FieldSpec {
            p: 5,
            d: 4,
            modulus: vec![3, 0, 0, 0, 1],
        })
        .unwrap();
        PlaneCurve::parse(&f, "X^4+Y^4-Z^4", None).unwrap()
    }

    #[test]
    fn basis_sizes() {
        let f5 = Field::prime(5).unwrap();
        let c = PlaneCurve::parse(&f5, "X^4+Y^4-Z^4", None).unwrap();
        let b0 = h1_basis(&c, 0);
        assert_eq!(b0.len(), 3);
        assert!(b0.contains(&Monomial::new(-1, -1, 2)));
        assert!(b0.contains(&Monomial::new(-2, -1, 3)));
        assert!(b0.contains(&Monomial::new(-1, -2, 3)));
        assert!(h1_basis(&c, 2).is_empty());
        assert_eq!(h1_basis(&c, -1).len(), 6);
    }

    #[test]
    fn displayed_classes_are_fixed() {
        let c = fermat_f625();
        for src in ["a*Z^3/(X^2*Y)", "a*Z^3/(X*Y^2)"] {
            let class = CechClass::<Field>::parse(&c, src).unwrap();
            assert!(!class.is_zero());
            assert_eq!(frobenius_on_class(&class), class);
        }
        let zero = CechClass::zero(&c, c.field(), 0);
        assert!(frobenius_on_class(&zero).is_zero());
    }

    #[test]
    fn fermat_prank_and_fixed_space() {
        let f5 = Field::prime(5).unwrap();
        let c = PlaneCurve::parse(&f5, "X^4+Y^4-Z^4", None).unwrap();
        assert_eq!(p_rank(&c), 3);
        let c4 = fermat_f625();
        let fixed = fixed_classes(&c4);
        assert_eq!(fixed.fp_dimension, 3);
        for v in &fixed.classes {
            assert_eq!(frobenius_on_class(v), *v);
        }
    }

    #[test]
    fn conic_has_no_h1() {
        let f3 = Field::prime(3).unwrap();
        let c = PlaneCurve::parse(&f3, "Z^2-X*Y", None).unwrap();
        let hw = hasse_witt(&c);
        assert_eq!(hw.matrix.rows(), 0);
        assert_eq!(hw.p_rank, 0);
        assert!(fixed_classes(&c).classes.is_empty());
    }

    #[test]
    fn flat_orbit_exponents() {
        let c = fermat_f625();
        let v = CechClass::<Field>::parse(&c, "a*Z^3/(X^2*Y)").unwrap();
        let w = CechClass::<Field>::parse(&c, "a*Z^3/(X*Y^2)").unwrap();
        let flat = flat_class(&v, &w).unwrap();
        let orb = orbit(&flat, 3);
        for (e, class) in orb.iter().enumerate() {
            let expected = flat_class_member(&v, &w, 5u64.pow(e as u32)).unwrap();
            assert_eq!(*class, expected);
        }
        assert_eq!(detect_repetition(&orb), None);
        assert_eq!(
            flat_class(&v, &v.scale(&Elem(2))),
            Err(CechError::Dependent)
        );
        let zero = CechClass::zero(&c, c.field(), 0);
        assert_eq!(flat_class(&v, &zero), Err(CechError::Dependent));
    }

    #[test]
    fn fixed_class_repeats_immediately() {
        let c = fermat_f625();
        let v = CechClass::<Field>::parse(&c, "a*Z^3/(X^2*Y)").unwrap();
        assert_eq!(detect_repetition(&orbit(&v, 3)), Some((0, 1)));
    }

    #[test]
    fn splitting() {
        let f5 = Field::prime(5).unwrap();
        let c = PlaneCurve::parse(&f5, "X^4+Y^4-Z^4", None).unwrap();
        assert!(extension_splits(&c, 2));
        let class = CechClass::<Field>::parse(&c, "Z^2/(X*Y)").unwrap();
        assert!(!class_splits(&class));
    }
}
