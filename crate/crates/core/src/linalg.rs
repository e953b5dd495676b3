//! Dense Gaussian elimination over a finite field.
//!
//! Pivoting is deterministic (first nonzero entry in the lowest column), so
//! echelon forms and kernel bases are reproducible.

use crate::gf::{Elem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `v^T * M` for a row vector `v`.
    pub fn vec_mul(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Elem::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = field.add(*o, field.mul(a, self.get(r, c)));
            }
        }
        out
    }

    /// `M * v` for a column vector `v`.
    pub fn mul_vec(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

trait Ops {
    fn inv(&self, a: u32) -> u32;
    /// `dst[k] -= f * src[k]` for all `k`.
    fn axpy_neg(&self, dst: &mut [Elem], src: &[Elem], f: u32);
    fn scale(&self, row: &mut [Elem], f: u32);
}

struct PrimeOps {
    p: u32,
}

impl Ops for PrimeOps {
    fn inv(&self, a: u32) -> u32 {
        let p = self.p as u64;
        let (mut b, mut e, mut acc) = (a as u64, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc as u32
    }

    #[inline]
    fn axpy_neg(&self, dst: &mut [Elem], src: &[Elem], f: u32) {
        let p = self.p as u64;
        let nf = (p - f as u64) % p;
        for (d, s) in dst.iter_mut().zip(src) {
            if s.0 != 0 {
                d.0 = ((d.0 as u64 + nf * s.0 as u64) % p) as u32;
            }
        }
    }

    fn scale(&self, row: &mut [Elem], f: u32) {
        let p = self.p as u64;
        for x in row.iter_mut() {
            x.0 = (x.0 as u64 * f as u64 % p) as u32;
        }
    }
}

struct ExtOps<'a> {
    field: &'a Field,
}

impl Ops for ExtOps<'_> {
    fn inv(&self, a: u32) -> u32 {
        self.field.inv(Elem(a)).expect("pivot is nonzero").0
    }

    fn axpy_neg(&self, dst: &mut [Elem], src: &[Elem], f: u32) {
        let nf = self.field.neg(Elem(f));
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d = self.field.add(*d, self.field.mul(nf, *s));
            }
        }
    }

    fn scale(&self, row: &mut [Elem], f: u32) {
        for x in row.iter_mut() {
            *x = self.field.mul(*x, Elem(f));
        }
    }
}

fn eliminate_with<O: Ops>(ops: &O, m: &mut Matrix, reduced: bool) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for k in 0..cols {
                m.data.swap(piv * cols + k, r * cols + k);
            }
        }
        let inv = ops.inv(m.get(r, c).0);
        ops.scale(&mut m.row_mut(r)[c..], inv);
        let (head, tail) = m.data.split_at_mut((r + 1) * cols);
        let pivot_row = &head[r * cols + c..(r + 1) * cols];
        for chunk in tail.chunks_mut(cols) {
            let f = chunk[c].0;
            if f != 0 {
                ops.axpy_neg(&mut chunk[c..], pivot_row, f);
            }
        }
        if reduced {
            let (above, rest) = m.data.split_at_mut(r * cols);
            let pivot_row = &rest[c..cols];
            for chunk in above.chunks_mut(cols) {
                let f = chunk[c].0;
                if f != 0 {
                    ops.axpy_neg(&mut chunk[c..], pivot_row, f);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-reduces in place and returns the pivot columns. With `reduced` the
/// result is the reduced row echelon form.
pub fn eliminate(field: &Field, m: &mut Matrix, reduced: bool) -> Vec<usize> {
    if field.is_prime_field() {
        eliminate_with(
            &PrimeOps {
                p: field.characteristic(),
            },
            m,
            reduced,
        )
    } else {
        eliminate_with(&ExtOps { field }, m, reduced)
    }
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut work = m.clone();
    eliminate(field, &mut work, false).len()
}

/// Basis of `{v : M v = 0}`, one vector per free column, in RREF order.
pub fn right_kernel(field: &Field, m: &Matrix) -> Vec<Vec<Elem>> {
    let mut work = m.clone();
    let pivots = eliminate(field, &mut work, true);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Elem::ZERO; m.cols];
        v[free] = Elem::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(work.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Basis of `{v : v^T M = 0}`.
pub fn left_kernel(field: &Field, m: &Matrix) -> Vec<Vec<Elem>> {
    right_kernel(field, &m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn m(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn rank_small() {
        let f5 = Field::prime(5).unwrap();
        let a = m(&f5, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&f5, &a), 2);
        let f2 = Field::prime(2).unwrap();
        let b = m(&f2, &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(rank(&f2, &b), 2);
    }

    #[test]
    fn kernels_annihilate() {
        let f = Field::new(FieldSpec {
            p: 3,
            d: 2,
            modulus: vec![1, 0, 1],
        })
        .unwrap();
        let a = f.generator();
        let mat = Matrix::from_rows(
            vec![
                vec![Elem::ONE, a, f.mul(a, a), Elem::ZERO],
                vec![a, f.mul(a, a), f.pow(a, 3), Elem::ZERO],
            ],
            4,
        );
        let ker = right_kernel(&f, &mat);
        assert_eq!(ker.len(), 3);
        for v in &ker {
            assert!(mat.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
        let lk = left_kernel(&f, &mat);
        assert_eq!(lk.len(), 1);
        assert!(mat.vec_mul(&f, &lk[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn empty_shapes() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(rank(&f2, &Matrix::zeros(0, 5)), 0);
        assert_eq!(right_kernel(&f2, &Matrix::zeros(0, 3)).len(), 3);
        assert_eq!(left_kernel(&f2, &Matrix::zeros(4, 0)).len(), 4);
    }
}
