//! Syzygy spaces and the Hilbert-Kunz function of `R/(f_1, ..., f_n)`.
//!
//! Everything reduces to the multiplication map
//! `⊕ R_{m - d_i} → R_m, (a_i) ↦ Σ a_i f_i`: its left kernel is
//! `H^0(Syz(f_1, ..., f_n)(m))`, its cokernel is `(R/(f_i))_m`.

use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, PlaneCurve};
use crate::gf::{Elem, Field};
use crate::linalg::{self, Matrix};
use crate::parse::{self, ParseError};
use crate::poly::{HomogPoly, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HkError {
    #[error("ideal needs at least one generator")]
    EmptyIdeal,
    #[error("generator {0} is zero or not a polynomial")]
    BadGenerator(usize),
    #[error("generators live over a different field than the curve")]
    FieldMismatch,
    #[error("ideal is not primary to the irrelevant ideal: (R/I^[{q}])_m nonzero up to m = {cap}")]
    NonPrimary { q: u64, cap: i32 },
    #[error("need at least three table rows, got {0}")]
    TooFewRows(usize),
    #[error("degenerate fit: sample points are not distinct")]
    DegenerateFit,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Homogeneous generators `f_1, ..., f_n` of an ideal of `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealGens {
    gens: Vec<HomogPoly<Field>>,
}

impl IdealGens {
    pub fn new(gens: Vec<HomogPoly<Field>>) -> Result<Self, HkError> {
        if gens.is_empty() {
            return Err(HkError::EmptyIdeal);
        }
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() || !g.is_polynomial() || g.degree() < 0 {
                return Err(HkError::BadGenerator(i));
            }
        }
        let field = gens[0].ring();
        if gens.iter().any(|g| g.ring() != field) {
            return Err(HkError::FieldMismatch);
        }
        Ok(IdealGens { gens })
    }

    /// Comma-separated list, e.g. `"X^2,Y^2,Z^2"`.
    pub fn parse(field: &Field, src: &str) -> Result<Self, HkError> {
        IdealGens::new(parse::parse_poly_list(field, src)?)
    }

    /// The maximal ideal `(X, Y, Z)`.
    pub fn maximal(field: &Field) -> Self {
        let v = |m| HomogPoly::monomial(field, m, Elem::ONE);
        IdealGens {
            gens: vec![
                v(Monomial::new(1, 0, 0)),
                v(Monomial::new(0, 1, 0)),
                v(Monomial::new(0, 0, 1)),
            ],
        }
    }

    pub fn gens(&self) -> &[HomogPoly<Field>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn field(&self) -> &Field {
        self.gens[0].ring()
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.gens.iter().map(|g| g.degree()).collect()
    }

    pub fn max_degree(&self) -> i32 {
        self.gens.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> i32 {
        self.gens.iter().map(|g| g.degree()).min().unwrap_or(0)
    }

    /// `I^{[p^e]} = (f_1^{p^e}, ..., f_n^{p^e})`.
    pub fn bracket_power(&self, e: u32) -> IdealGens {
        IdealGens {
            gens: self.gens.iter().map(|g| g.frobenius_power(e)).collect(),
        }
    }

    pub fn format_with(&self, vars: [&str; 3]) -> String {
        self.gens
            .iter()
            .map(|g| g.format_with(vars))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn check_field(&self, curve: &PlaneCurve) -> Result<(), HkError> {
        if self.field() != curve.field() {
            return Err(HkError::FieldMismatch);
        }
        Ok(())
    }
}

/// The matrix of `(a_i) ↦ Σ a_i f_i` in degree `m`: one row per pair
/// (generator, basis monomial of `R_{m - d_i}`), columns indexed by the
/// basis of `R_m`.
pub fn multiplication_matrix(curve: &PlaneCurve, gens: &IdealGens, m: i32) -> Matrix {
    let target = curve.graded_piece(m);
    let mut rows = Vec::new();
    for f in gens.gens() {
        let source = curve.graded_piece(m - f.degree());
        for b in &source.basis {
            let mut row = vec![Elem::ZERO; target.dim()];
            curve.reduce_into(f, b, &target, &mut row);
            rows.push(row);
        }
    }
    Matrix::from_rows(rows, target.dim())
}

/// A global section `(a_1, ..., a_n)` of `Syz(f_1, ..., f_n)(m)`, with
/// `a_i ∈ R_{m - d_i}` in normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct Syzygy {
    pub m: i32,
    pub components: Vec<HomogPoly<Field>>,
}

impl Syzygy {
    /// Re-checks `Σ a_i f_i = 0` in `R_m` by multiplying out.
    pub fn verify(&self, curve: &PlaneCurve, gens: &IdealGens) -> bool {
        let mut sum = HomogPoly::zero(curve.field(), self.m);
        for (a, f) in self.components.iter().zip(gens.gens()) {
            match sum.add(&a.mul(f)) {
                Ok(s) => sum = s,
                Err(_) => return false,
            }
        }
        curve.normal_form(&sum).is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|a| a.is_zero())
    }

    /// Concatenated coordinates of the components in the monomial bases.
    pub fn coefficient_vector(&self, curve: &PlaneCurve) -> Vec<Elem> {
        self.components
            .iter()
            .flat_map(|a| curve.coordinates(a))
            .collect()
    }

    pub fn from_coefficient_vector(
        curve: &PlaneCurve,
        gens: &IdealGens,
        m: i32,
        v: &[Elem],
    ) -> Syzygy {
        let mut offset = 0;
        let mut components = Vec::with_capacity(gens.len());
        for d in gens.degrees() {
            let n = curve.graded_piece(m - d).dim();
            components.push(curve.from_coordinates(m - d, &v[offset..offset + n]));
            offset += n;
        }
        Syzygy { m, components }
    }

    pub fn scale(&self, c: Elem) -> Syzygy {
        Syzygy {
            m: self.m,
            components: self.components.iter().map(|a| a.scalar_mul(&c)).collect(),
        }
    }

    pub fn format_with(&self, vars: [&str; 3]) -> String {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|a| a.format_with(vars))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Basis of `H^0(Syz(f_1, ..., f_n)(m))`; empty for `m < 0`.
pub fn syzygy_space(curve: &PlaneCurve, gens: &IdealGens, m: i32) -> Result<Vec<Syzygy>, HkError> {
    gens.check_field(curve)?;
    if m < 0 {
        return Ok(Vec::new());
    }
    let mat = multiplication_matrix(curve, gens, m);
    Ok(linalg::left_kernel(curve.field(), &mat)
        .into_iter()
        .map(|v| Syzygy::from_coefficient_vector(curve, gens, m, &v))
        .collect())
}

/// `dim H^0(Syz(f_1, ..., f_n)(m))` without building the vectors.
pub fn syzygy_dim(curve: &PlaneCurve, gens: &IdealGens, m: i32) -> usize {
    if m < 0 {
        return 0;
    }
    let mat = multiplication_matrix(curve, gens, m);
    mat.rows() - linalg::rank(curve.field(), &mat)
}

/// One graded piece of `R/I` together with the data of both length formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ColengthPiece {
    pub m: i32,
    pub hf: i64,
    pub rank: i64,
    pub syz_dim: i64,
    /// `h0(m) - Σ h0(m - d_i) + syz_dim`.
    pub alternating: i64,
}

impl ColengthPiece {
    pub fn length(&self) -> i64 {
        self.hf - self.rank
    }

    pub fn identity_holds(&self) -> bool {
        self.length() == self.alternating
    }
}

/// `(R/I)_m` for `I` given by `gens` (already bracket-powered). The rank is
/// taken on the matrix, the syzygy count on its transpose.
pub fn colength_piece_raw(curve: &PlaneCurve, gens: &IdealGens, m: i32) -> ColengthPiece {
    let hf = curve.hilbert_function(m);
    let sources: i64 = gens.degrees().iter().map(|&d| curve.h0(m - d)).sum();
    if sources == 0 {
        return ColengthPiece {
            m,
            hf,
            rank: 0,
            syz_dim: 0,
            alternating: curve.h0(m),
        };
    }
    let mat = multiplication_matrix(curve, gens, m);
    let field = curve.field();
    let rank = linalg::rank(field, &mat) as i64;
    let syz_dim = linalg::left_kernel(field, &mat).len() as i64;
    ColengthPiece {
        m,
        hf,
        rank,
        syz_dim,
        alternating: curve.h0(m) - sources + syz_dim,
    }
}

/// `length((R/(f_1^q, ..., f_n^q))_m)`, `q` a power of the characteristic.
pub fn colength_piece(
    curve: &PlaneCurve,
    gens: &IdealGens,
    q: u64,
    m: i32,
) -> Result<ColengthPiece, HkError> {
    gens.check_field(curve)?;
    let e = exponent_of(curve.field().characteristic() as u64, q);
    Ok(colength_piece_raw(curve, &gens.bracket_power(e), m))
}

fn exponent_of(p: u64, q: u64) -> u32 {
    let mut e = 0;
    let mut x = 1u64;
    while x < q {
        x *= p;
        e += 1;
    }
    assert_eq!(x, q, "{q} is not a power of {p}");
    e
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HkRow {
    pub e: u32,
    pub q: u64,
    pub phi: u64,
    /// Degrees `0..=top` were summed; `(R/I^[q])_m = 0` beyond.
    pub top: i32,
    /// Every piece satisfied the alternating-sum identity.
    pub identity_checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HKTable {
    pub p: u32,
    pub rows: Vec<HkRow>,
}

impl HKTable {
    pub fn phi(&self, q: u64) -> Option<u64> {
        self.rows.iter().find(|r| r.q == q).map(|r| r.phi)
    }
}

/// All graded pieces of `R/I^[p^e]` up to the first vanishing pair past
/// `q·max d_i + δ`.
pub fn colength_pieces(
    curve: &PlaneCurve,
    gens: &IdealGens,
    e: u32,
) -> Result<Vec<ColengthPiece>, HkError> {
    gens.check_field(curve)?;
    let q = (curve.field().characteristic() as u64).pow(e);
    let powered = gens.bracket_power(e);
    let delta = curve.degree();
    let maxd = powered.max_degree();
    let floor = maxd + delta;
    let cap = 3 * maxd + 3 * delta;
    let batch = rayon::current_num_threads().max(2) as i32;
    let mut pieces: Vec<ColengthPiece> = Vec::new();
    let mut m = 0;
    while m <= cap {
        let hi = (m + batch - 1).min(cap);
        let mut chunk: Vec<ColengthPiece> = (m..=hi)
            .into_par_iter()
            .map(|k| colength_piece_raw(curve, &powered, k))
            .collect();
        chunk.sort_by_key(|p| p.m);
        for p in chunk {
            let done = p.length() == 0
                && p.m - 1 > floor
                && pieces.last().is_some_and(|prev| prev.length() == 0);
            pieces.push(p);
            if done {
                while pieces.last().is_some_and(|x| x.length() == 0) {
                    pieces.pop();
                }
                return Ok(pieces);
            }
        }
        m = hi + 1;
    }
    Err(HkError::NonPrimary { q, cap })
}

/// `φ(p^e) = length(R/I^{[p^e]})` for `e = 0, ..., e_max`.
pub fn hk_function(curve: &PlaneCurve, gens: &IdealGens, e_max: u32) -> Result<HKTable, HkError> {
    let p = curve.field().characteristic();
    let mut rows = Vec::new();
    for e in 0..=e_max {
        let pieces = colength_pieces(curve, gens, e)?;
        let phi: i64 = pieces.iter().map(|x| x.length()).sum();
        rows.push(HkRow {
            e,
            q: (p as u64).pow(e),
            phi: phi as u64,
            top: pieces.last().map_or(-1, |x| x.m),
            identity_checked: pieces.iter().all(|x| x.identity_holds()),
        });
    }
    Ok(HKTable { p, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    ExactFit,
}

/// `φ(q) ≈ e_HK·q² + β·q + γ` fitted through the last three rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EHKEstimate {
    pub value: Ratio<i128>,
    pub beta: Ratio<i128>,
    pub gamma: Ratio<i128>,
    pub method: EstimateMethod,
    /// Some earlier row misses the fit by more than `|β q|`.
    pub unstable: bool,
}

impl EHKEstimate {
    pub fn predict(&self, q: u64) -> Ratio<i128> {
        let q = Ratio::from_integer(q as i128);
        self.value * q * q + self.beta * q + self.gamma
    }
}

pub fn ehk_estimate(table: &HKTable) -> Result<EHKEstimate, HkError> {
    let n = table.rows.len();
    if n < 3 {
        return Err(HkError::TooFewRows(n));
    }
    let pts: Vec<(Ratio<i128>, Ratio<i128>)> = table.rows[n - 3..]
        .iter()
        .map(|r| {
            (
                Ratio::from_integer(r.q as i128),
                Ratio::from_integer(r.phi as i128),
            )
        })
        .collect();
    let (x0, y0) = pts[0];
    let (x1, y1) = pts[1];
    let (x2, y2) = pts[2];
    if x0 == x1 || x1 == x2 || x0 == x2 {
        return Err(HkError::DegenerateFit);
    }
    // Newton divided differences
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    let b = d01 - a * (x0 + x1);
    let c = y0 - a * x0 * x0 - b * x0;
    let mut est = EHKEstimate {
        value: a,
        beta: b,
        gamma: c,
        method: EstimateMethod::ExactFit,
        unstable: false,
    };
    est.unstable = table.rows[..n - 3].iter().any(|r| {
        let resid = Ratio::from_integer(r.phi as i128) - est.predict(r.q);
        let lin = b * Ratio::from_integer(r.q as i128);
        resid.abs() > lin.abs()
    });
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(p: u32, eq: &str, t: Option<u32>) -> PlaneCurve {
        let f = Field::prime(p).unwrap();
        PlaneCurve::parse(&f, eq, t.map(Elem)).unwrap()
    }

    #[test]
    fn linear_gens_have_no_linear_syzygies() {
        let c = quartic(5, "X^4+Y^4-Z^4", None);
        let gens = IdealGens::maximal(c.field());
        assert!(syzygy_space(&c, &gens, 1).unwrap().is_empty());
        let koszul = syzygy_space(&c, &gens, 2).unwrap();
        assert_eq!(koszul.len(), 3);
        for s in &koszul {
            assert!(s.verify(&c, &gens));
        }
    }

    #[test]
    fn phi_of_one_is_one() {
        let c = quartic(5, "X^4+Y^4-Z^4", None);
        let table = hk_function(&c, &IdealGens::maximal(c.field()), 0).unwrap();
        assert_eq!(table.rows[0].phi, 1);
    }

    #[test]
    fn char3_phi9() {
        let c = quartic(3, "Z^4-X*Y*(X+Y)*(X+t*Y)", Some(2));
        let gens = IdealGens::maximal(c.field());
        let table = hk_function(&c, &gens, 2).unwrap();
        assert_eq!(table.phi(9), Some(252));
        assert!(table.rows.iter().all(|r| r.identity_checked));
        let total: i64 = (0..40)
            .map(|m| colength_piece(&c, &gens, 9, m).unwrap().length())
            .sum();
        assert_eq!(total, 252);
    }

    #[test]
    fn non_primary_rejected() {
        let c = quartic(5, "X^4+Y^4-Z^4", None);
        let gens = IdealGens::parse(c.field(), "X").unwrap();
        assert!(matches!(
            hk_function(&c, &gens, 0),
            Err(HkError::NonPrimary { .. })
        ));
    }

    #[test]
    fn fit_recovers_quadratic() {
        let rows = [(1u64, 7u64), (2, 19), (4, 55), (8, 199)]
            .iter()
            .enumerate()
            .map(|(e, &(q, phi))| HkRow {
                e: e as u32,
                q,
                phi,
                top: 0,
                identity_checked: true,
            })
            .collect();
        // 3q^2 + 0q + 7 except the first row
        let table = HKTable { p: 2, rows };
        let est = ehk_estimate(&table).unwrap();
        assert_eq!(est.value, Ratio::from_integer(3));
        assert_eq!(est.gamma, Ratio::from_integer(7));
        assert!(est.unstable);
        let short = HKTable {
            p: 2,
            rows: table.rows[..2].to_vec(),
        };
        assert_eq!(ehk_estimate(&short), Err(HkError::TooFewRows(2)));
    }
}
