//! Plane curves `C = V(G) ⊂ P^2` and their homogeneous coordinate rings
//! `R = k[X,Y,Z]/(G)`.
//!
//! Every curve is required to be monic in `Z` (after scaling): the
//! coefficient of `Z^δ` in `G` must be nonzero. Then `R` is free over
//! `k[X,Y]` with basis `1, Z, ..., Z^{δ-1}`, the normal form of an element is
//! obtained by rewriting `Z^δ`, and the point `(0:0:1)` is off the curve so
//! `{X ≠ 0}, {Y ≠ 0}` covers `C`.
//!
//! `h0` silently uses projective normality of smooth plane curves, i.e.
//! `h^0(O_C(m)) = dim R_m` for `m >= 0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, FieldElement, FieldEmbedding, FieldSpec, GfError};
use crate::linalg::{self, Matrix};
use crate::parse::{self, ParseError};
use crate::poly::{monomials_of_degree, CoeffRing, HomogPoly, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(
        "coefficient of Z^{0} is zero; the two-chart model needs G monic in Z \
         (apply a linear change of coordinates first)"
    )]
    NotMonicInZ(i32),
    #[error("curve equation must be a nonconstant polynomial")]
    BadEquation,
    #[error("curve file: {0}")]
    File(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The monomial basis `X^i Y^j Z^a`, `a < δ`, of `R_m`.
#[derive(Debug, Clone)]
pub struct GradedPiece {
    pub m: i32,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    fn new(m: i32, delta: i32) -> Self {
        let basis: Vec<Monomial> = monomials_of_degree(m)
            .into_iter()
            .filter(|mo| mo.z < delta)
            .collect();
        let index = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        GradedPiece { m, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, mono: &Monomial) -> Option<usize> {
        self.index.get(mono).copied()
    }
}

struct CurveInner {
    field: Field,
    equation: HomogPoly<Field>,
    delta: i32,
    // Z^δ ≡ tail, every monomial of tail has Z-exponent < δ
    tail: HomogPoly<Field>,
    // normal forms of Z^k, k = 0, 1, ...
    zpow: RwLock<Vec<Arc<HomogPoly<Field>>>>,
    pieces: RwLock<HashMap<i32, Arc<GradedPiece>>>,
}

/// A plane curve over a finite field, monic in `Z`.
#[derive(Clone)]
pub struct PlaneCurve(Arc<CurveInner>);

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneCurve({} over {:?})", self.0.equation, self.0.field)
    }
}

impl PartialEq for PlaneCurve {
    fn eq(&self, other: &Self) -> bool {
        self.0.equation == other.0.equation
    }
}

impl PlaneCurve {
    pub fn new(equation: HomogPoly<Field>) -> Result<PlaneCurve, CurveError> {
        let delta = equation.degree();
        if delta < 1 || !equation.is_polynomial() || equation.is_zero() {
            return Err(CurveError::BadEquation);
        }
        let field = equation.ring().clone();
        let lead = equation.coeff(&Monomial::new(0, 0, delta));
        let inv = field.inv(lead).ok_or(CurveError::NotMonicInZ(delta))?;
        let minus_inv = field.neg(inv);
        let mut tail = HomogPoly::zero(&field, delta);
        for (m, c) in equation.terms() {
            if m.z < delta {
                tail.add_term(*m, field.mul(*c, minus_inv));
            }
        }
        Ok(PlaneCurve(Arc::new(CurveInner {
            field,
            equation,
            delta,
            tail,
            zpow: RwLock::new(Vec::new()),
            pieces: RwLock::new(HashMap::new()),
        })))
    }

    /// Parses `equation` over `field`; `t` is specialized to `param` if given.
    pub fn parse(
        field: &Field,
        equation: &str,
        param: Option<Elem>,
    ) -> Result<PlaneCurve, CurveError> {
        let parsed = parse::parse(field, equation)?;
        let poly = match param {
            Some(v) => parsed.specialize(v)?,
            None => parsed.into_field()?,
        };
        PlaneCurve::new(poly)
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn equation(&self) -> &HomogPoly<Field> {
        &self.0.equation
    }

    /// Curve degree δ.
    pub fn degree(&self) -> i32 {
        self.0.delta
    }

    pub fn genus(&self) -> i64 {
        let d = self.0.delta as i64;
        (d - 1) * (d - 2) / 2
    }

    /// The same curve over a larger field.
    pub fn base_change(&self, embedding: &FieldEmbedding) -> Result<PlaneCurve, CurveError> {
        let target = embedding.target().clone();
        PlaneCurve::new(self.0.equation.map_coeffs(&target, |c| embedding.apply(*c)))
    }

    /// Normal form of `Z^k`.
    pub fn z_power(&self, k: i32) -> Arc<HomogPoly<Field>> {
        assert!(k >= 0);
        {
            let cache = self.0.zpow.read().unwrap();
            if let Some(p) = cache.get(k as usize) {
                return p.clone();
            }
        }
        let mut cache = self.0.zpow.write().unwrap();
        let field = &self.0.field;
        let delta = self.0.delta;
        while cache.len() <= k as usize {
            let n = cache.len() as i32;
            let next = if n < delta {
                HomogPoly::monomial(field, Monomial::new(0, 0, n), Elem::ONE)
            } else {
                let prev = cache[n as usize - 1].mul_monomial(&Monomial::new(0, 0, 1));
                let mut out = HomogPoly::zero(field, n);
                for (m, c) in prev.terms() {
                    if m.z < delta {
                        out.add_term(*m, *c);
                    } else {
                        let shift = Monomial::new(m.x, m.y, m.z - delta);
                        for (tm, tc) in self.0.tail.terms() {
                            out.add_term(tm.mul(&shift), field.mul(*c, *tc));
                        }
                    }
                }
                out
            };
            cache.push(Arc::new(next));
        }
        cache[k as usize].clone()
    }

    /// Reduces every `Z`-exponent below δ. Works on Laurent representatives
    /// (negative `X`/`Y` exponents) as well.
    pub fn normal_form<R: CoeffRing>(&self, f: &HomogPoly<R>) -> HomogPoly<R> {
        let ring = f.ring();
        let mut out = HomogPoly::zero(ring, f.degree());
        for (m, c) in f.terms() {
            if m.z < self.0.delta {
                out.add_term(*m, c.clone());
                continue;
            }
            let shift = Monomial::new(m.x, m.y, 0);
            for (zm, zc) in self.z_power(m.z).terms() {
                out.add_term(zm.mul(&shift), ring.mul(c, &ring.embed(*zc)));
            }
        }
        out
    }

    /// Monomial basis of `R_m` (empty for `m < 0`).
    pub fn graded_piece(&self, m: i32) -> Arc<GradedPiece> {
        if let Some(p) = self.0.pieces.read().unwrap().get(&m) {
            return p.clone();
        }
        let piece = Arc::new(GradedPiece::new(m, self.0.delta));
        self.0
            .pieces
            .write()
            .unwrap()
            .entry(m)
            .or_insert(piece)
            .clone()
    }

    /// Coordinates of `X^i Y^j Z^a * f` in the basis of `R_{m}`, where
    /// `m = deg f + deg(shift)`.
    pub fn reduce_into(
        &self,
        f: &HomogPoly<Field>,
        shift: &Monomial,
        piece: &GradedPiece,
        row: &mut [Elem],
    ) {
        let field = &self.0.field;
        for (m, c) in f.terms() {
            let mono = m.mul(shift);
            if mono.z < self.0.delta {
                let i = piece.index_of(&mono).expect("monomial in graded piece");
                row[i] = field.add(row[i], *c);
            } else {
                let s = Monomial::new(mono.x, mono.y, 0);
                for (zm, zc) in self.z_power(mono.z).terms() {
                    let i = piece
                        .index_of(&zm.mul(&s))
                        .expect("monomial in graded piece");
                    row[i] = field.add(row[i], field.mul(*c, *zc));
                }
            }
        }
    }

    /// Coordinate vector of a polynomial of degree `m` in the basis of `R_m`.
    pub fn coordinates(&self, f: &HomogPoly<Field>) -> Vec<Elem> {
        let piece = self.graded_piece(f.degree());
        let mut row = vec![Elem::ZERO; piece.dim()];
        self.reduce_into(f, &Monomial::ONE, &piece, &mut row);
        row
    }

    /// The element of `R_m` with the given coordinates.
    pub fn from_coordinates(&self, m: i32, coords: &[Elem]) -> HomogPoly<Field> {
        let piece = self.graded_piece(m);
        HomogPoly::from_terms(
            &self.0.field,
            m,
            piece.basis.iter().zip(coords).map(|(mo, c)| (*mo, *c)),
        )
    }

    /// `dim R_m`.
    pub fn hilbert_function(&self, m: i32) -> i64 {
        hilbert_function_closed(self.0.delta, m)
    }

    /// `h^0(C, O_C(m))`.
    pub fn h0(&self, m: i32) -> i64 {
        if m < 0 {
            0
        } else {
            self.hilbert_function(m)
        }
    }

    /// `h^1(C, O_C(m)) = h^0(C, O_C(δ - 3 - m))`.
    pub fn h1(&self, m: i32) -> i64 {
        self.h0(self.0.delta - 3 - m)
    }

    /// Decides smoothness by a Jacobian-ideal certificate, then a singular-point
    /// search over the base field and over the quadratic extension.
    pub fn is_smooth_probe(&self) -> Smoothness {
        if self.jacobian_quotient_vanishes() {
            return Smoothness::Smooth;
        }
        if let Some(pt) = self.singular_point(&self.0.field, None) {
            return Smoothness::Singular(pt);
        }
        let q = self.0.field.size() as u64;
        if q.pow(4) <= 1 << 22 {
            let big = Field::extension(self.0.field.characteristic(), 2 * self.0.field.degree());
            if let Ok(big) = big {
                if let Some(emb) = FieldEmbedding::new(&self.0.field, &big) {
                    if let Some(pt) = self.singular_point(&big, Some(&emb)) {
                        return Smoothness::Singular(pt);
                    }
                }
            }
        }
        Smoothness::Inconclusive
    }

    fn partials(&self) -> [HomogPoly<Field>; 3] {
        let field = &self.0.field;
        let g = &self.0.equation;
        let mut out: [HomogPoly<Field>; 3] =
            std::array::from_fn(|_| HomogPoly::zero(field, g.degree() - 1));
        for (m, c) in g.terms() {
            let e = m.exponents();
            for v in 0..3 {
                if e[v] > 0 {
                    let mut ne = e;
                    ne[v] -= 1;
                    out[v].add_term(
                        Monomial::new(ne[0], ne[1], ne[2]),
                        field.mul(*c, field.from_int(e[v] as i64)),
                    );
                }
            }
        }
        out
    }

    fn singular_point(
        &self,
        field: &Field,
        emb: Option<&FieldEmbedding>,
    ) -> Option<[FieldElement; 3]> {
        let map = |c: Elem| emb.map_or(c, |e| e.apply(c));
        let mut polys = vec![self.0.equation.clone()];
        polys.extend(self.partials());
        let polys: Vec<Vec<(Monomial, Elem)>> = polys
            .iter()
            .map(|p| p.terms().map(|(m, c)| (*m, map(*c))).collect())
            .collect();
        let eval = |terms: &[(Monomial, Elem)], pt: [Elem; 3]| -> Elem {
            terms.iter().fold(Elem::ZERO, |acc, (m, c)| {
                let v = field.mul(
                    field.mul(field.pow(pt[0], m.x as u64), field.pow(pt[1], m.y as u64)),
                    field.pow(pt[2], m.z as u64),
                );
                field.add(acc, field.mul(*c, v))
            })
        };
        for pt in projective_points(field) {
            if polys.iter().all(|p| eval(p, pt).is_zero()) {
                return Some(pt.map(|c| FieldElement::new(field, c)));
            }
        }
        None
    }

    /// `(k[X,Y,Z]/(G, G_X, G_Y, G_Z))_k = 0` for some `k <= 3(δ-1)`.
    fn jacobian_quotient_vanishes(&self) -> bool {
        let field = &self.0.field;
        let mut gens = vec![self.0.equation.clone()];
        gens.extend(self.partials().into_iter().filter(|p| !p.is_zero()));
        let top = 3 * (self.0.delta - 1);
        for k in 0..=top {
            let target = monomials_of_degree(k);
            let index: HashMap<Monomial, usize> =
                target.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut rows = Vec::new();
            for g in &gens {
                for shift in monomials_of_degree(k - g.degree()) {
                    let mut row = vec![Elem::ZERO; target.len()];
                    for (m, c) in g.terms() {
                        let i = index[&m.mul(&shift)];
                        row[i] = field.add(row[i], *c);
                    }
                    rows.push(row);
                }
            }
            if rows.is_empty() {
                continue;
            }
            let mat = Matrix::from_rows(rows, target.len());
            if linalg::rank(field, &mat) == target.len() {
                return true;
            }
        }
        false
    }
}

/// Closed-form `dim R_m` for a plane curve of degree `delta`.
pub fn hilbert_function_closed(delta: i32, m: i32) -> i64 {
    let tri = |n: i64| if n < 0 { 0 } else { (n + 1) * (n + 2) / 2 };
    tri(m as i64) - tri((m - delta) as i64)
}

/// Representatives of `P^2(F)`, normalized with first nonzero coordinate 1.
pub fn projective_points(field: &Field) -> impl Iterator<Item = [Elem; 3]> + '_ {
    let all = move || field.elements();
    let finite = all().flat_map(move |x| all().map(move |y| [x, y, Elem::ONE]));
    let at_z0 = all().map(|x| [x, Elem::ONE, Elem::ZERO]);
    finite
        .chain(at_z0)
        .chain(std::iter::once([Elem::ONE, Elem::ZERO, Elem::ZERO]))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Smoothness {
    Smooth,
    /// A projective point where `G` and all partials vanish.
    Singular([FieldElement; 3]),
    Inconclusive,
}

/// Key-value curve description: `p`, `ext_degree`, `modulus`, `equation`,
/// optional `param_value` and `variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveFile {
    pub name: Option<String>,
    pub p: u32,
    pub ext_degree: u32,
    pub modulus: Vec<u32>,
    pub equation: String,
    pub param_value: Option<String>,
    pub variables: [String; 3],
}

/// Canonical echo of a parsed curve file.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CurveDump {
    pub p: u32,
    pub ext_degree: u32,
    pub modulus: Vec<u32>,
    pub equation: String,
    pub param_value: Option<String>,
    pub variables: [String; 3],
    pub degree: i32,
    pub genus: i64,
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<CurveFile, CurveError> {
        let mut map: HashMap<String, String> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    CurveError::File(format!("line {}: expected key = value", lineno + 1))
                })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get_u32 = |key: &str| -> Result<Option<u32>, CurveError> {
            map.get(key)
                .map(|v| {
                    v.parse::<u32>()
                        .map_err(|_| CurveError::File(format!("{key}: not an integer: {v}")))
                })
                .transpose()
        };
        let p = get_u32("p")?.ok_or_else(|| CurveError::File("missing key p".into()))?;
        let ext_degree = get_u32("ext_degree")?.unwrap_or(1);
        let modulus = match map.get("modulus") {
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| CurveError::File(format!("modulus: bad coefficient {s}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None if ext_degree == 1 => FieldSpec::prime(p).modulus,
            None => {
                if !crate::gf::is_prime(p) {
                    return Err(GfError::NotPrime(p).into());
                }
                crate::gf::find_irreducible(p, ext_degree)
            }
        };
        let equation = map
            .get("equation")
            .cloned()
            .ok_or_else(|| CurveError::File("missing key equation".into()))?;
        let variables = match map.get("variables") {
            Some(v) => {
                let parts: Vec<String> = v.split(',').map(|s| s.trim().to_string()).collect();
                <[String; 3]>::try_from(parts)
                    .map_err(|_| CurveError::File("variables: expected three names".into()))?
            }
            None => ["X".into(), "Y".into(), "Z".into()],
        };
        Ok(CurveFile {
            name: map.get("name").cloned(),
            p,
            ext_degree,
            modulus,
            equation,
            param_value: map.get("param_value").cloned(),
            variables,
        })
    }

    pub fn field_spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            d: self.ext_degree,
            modulus: self.modulus.clone(),
        }
    }

    pub fn build(&self) -> Result<PlaneCurve, CurveError> {
        let field = Field::new(self.field_spec())?;
        let param = self
            .param_value
            .as_deref()
            .map(|v| parse::parse_constant(&field, v, None))
            .transpose()?;
        PlaneCurve::parse(&field, &self.equation, param)
    }

    pub fn dump(&self) -> Result<CurveDump, CurveError> {
        let curve = self.build()?;
        let vars = [
            self.variables[0].as_str(),
            self.variables[1].as_str(),
            self.variables[2].as_str(),
        ];
        Ok(CurveDump {
            p: self.p,
            ext_degree: self.ext_degree,
            modulus: self.modulus.clone(),
            equation: curve.equation().format_with(vars),
            param_value: self.param_value.clone(),
            variables: self.variables.clone(),
            degree: curve.degree(),
            genus: curve.genus(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn fermat_quartic_f5() -> PlaneCurve {
        let f5 = Field::prime(5).unwrap();
        PlaneCurve::parse(&f5, "X^4+Y^4-Z^4", None).unwrap()
    }

    #[test]
    fn z4_reduces_to_relation() {
        let c = fermat_quartic_f5();
        let f5 = c.field().clone();
        let z4 = parse_poly(&f5, "Z^4").unwrap();
        assert_eq!(c.normal_form(&z4), parse_poly(&f5, "X^4+Y^4").unwrap());
    }

    #[test]
    fn z12_is_cube_of_relation() {
        // The homogeneous expansion has 3*X^4*Y^8 as its third term.
        let c = fermat_quartic_f5();
        let f5 = c.field().clone();
        let z12 = parse_poly(&f5, "Z^12").unwrap();
        let expected = parse_poly(&f5, "X^12+3*X^8*Y^4+3*X^4*Y^8+Y^12").unwrap();
        assert_eq!(c.normal_form(&z12), expected);
    }

    #[test]
    fn normal_form_idempotent() {
        let c = fermat_quartic_f5();
        let f = parse_poly(c.field(), "X*Z^3+2*Y^2*Z^2").unwrap();
        assert_eq!(c.normal_form(&f), f);
        let g = parse_poly(c.field(), "Z^9+X*Y*Z^7").unwrap();
        let once = c.normal_form(&g);
        assert_eq!(c.normal_form(&once), once);
    }

    #[test]
    fn hilbert_function_values() {
        let c = fermat_quartic_f5();
        let hf: Vec<i64> = (0..6).map(|m| c.hilbert_function(m)).collect();
        assert_eq!(hf, vec![1, 3, 6, 10, 14, 18]);
        assert_eq!(c.hilbert_function(-1), 0);
        assert_eq!(hilbert_function_closed(5, 3), 10);
        for m in 0..12 {
            assert_eq!(c.graded_piece(m).dim() as i64, c.hilbert_function(m));
        }
    }

    #[test]
    fn cohomology_dims() {
        let c = fermat_quartic_f5();
        assert_eq!(c.h1(2), 0);
        assert_eq!(c.h1(0), 3);
        let f7 = Field::prime(7).unwrap();
        let quintic = PlaneCurve::parse(&f7, "X^5+Y^5+Z^5", None).unwrap();
        assert_eq!(quintic.h1(2), 1);
    }

    #[test]
    fn not_monic_rejected() {
        let f3 = Field::prime(3).unwrap();
        let err = PlaneCurve::parse(&f3, "X^3+Y^3+X*Y*Z", None).unwrap_err();
        assert_eq!(err, CurveError::NotMonicInZ(3));
    }

    #[test]
    fn smoothness_probe() {
        assert_eq!(fermat_quartic_f5().is_smooth_probe(), Smoothness::Smooth);
        let f3 = Field::prime(3).unwrap();
        let eq = "Z^4 - X*Y*(X+Y)*(X+t*Y)";
        let h0 = PlaneCurve::parse(&f3, eq, Some(Elem(0))).unwrap();
        match h0.is_smooth_probe() {
            Smoothness::Singular(pt) => {
                let p: Vec<Elem> = pt.iter().map(|e| e.value()).collect();
                assert_eq!(p, vec![Elem(0), Elem(1), Elem(0)]);
            }
            other => panic!("expected singular, got {other:?}"),
        }
        let h2 = PlaneCurve::parse(&f3, eq, Some(Elem(2))).unwrap();
        assert_eq!(h2.is_smooth_probe(), Smoothness::Smooth);
    }

    #[test]
    fn curve_file_round_trip() {
        let text = "# char 3\np = 3\next_degree = 1\nequation = Z^4 - X*Y*(X+Y)*(X+t*Y)\nparam_value = 2\n";
        let cf = CurveFile::parse(text).unwrap();
        let dump = cf.dump().unwrap();
        assert_eq!(dump.degree, 4);
        assert_eq!(dump.genus, 3);
        assert_eq!(dump.modulus, vec![0, 1]);
        assert!(CurveFile::parse("p = 3\n").is_err());
        assert!(CurveFile::parse("garbage\n").is_err());
    }
}
