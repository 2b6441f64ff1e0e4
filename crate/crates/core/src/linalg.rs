//! Dense exact linear algebra over `Q` and `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Precondition("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| q(rows[i][j]))
    }

    pub fn diagonal(entries: &[Q]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = &self[(r, j)] * &f;
                    self[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Q::one()
            } else {
                Q::zero()
            }
        });
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solve `A x = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let inv = self.inverse()?;
        Some(inv.apply(b))
    }

    /// Characteristic polynomial `det(t I - A)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> UniPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &coeffs[n + 1 - k];
            }
            m = next;
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / q(k as i64);
        }
        UniPoly::new(coeffs)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(fmt_q).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_strings())
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Matrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

/// Dense univariate polynomial over `Q`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> UniPoly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Rational roots of a polynomial of degree at most two.
    pub fn low_degree_rational_roots(&self) -> Vec<Q> {
        match self.degree() {
            None | Some(0) => vec![],
            Some(1) => vec![-&self.coeffs[0] / &self.coeffs[1]],
            Some(2) => {
                let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
                let disc = b * b - q(4) * a * c;
                match crate::rational::sqrt_exact(&disc) {
                    Some(s) => {
                        let two_a = q(2) * a;
                        let mut r = vec![(-b + &s) / &two_a, (-b - &s) / &two_a];
                        r.sort();
                        r.dedup();
                        r
                    }
                    None => vec![],
                }
            }
            Some(_) => panic!("low_degree_rational_roots called on degree > 2"),
        }
    }

    /// Multiplicity of `x` as a root.
    pub fn root_multiplicity(&self, x: &Q) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        while p.degree().is_some_and(|d| d > 0) && p.eval(x).is_zero() {
            p = p.derivative();
            k += 1;
        }
        k
    }
}

/// Invariant factors of an integer matrix (Smith normal form diagonal),
/// nonnegative, in divisibility order, including zeros for rank deficiency.
pub fn smith_diagonal(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let f = a[i][t].div_floor(&a[t][t]);
            for j in t..cols {
                let v = &a[t][j] * &f;
                a[i][j] -= v;
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let f = a[t][j].div_floor(&a[t][t]);
            for i in t..rows {
                let v = &a[i][t] * &f;
                a[i][j] -= v;
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the whole trailing block
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for k in t..cols {
                        let v = a[i][k].clone();
                        a[t][k] += v;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            diag.push(a[t][t].abs());
            t += 1;
        }
    }
    while diag.len() < rows.min(cols) {
        diag.push(BigInt::zero());
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn charpoly_of_diagonal() {
        // (t-1)(t+2) = t^2 + t - 2
        let m = Matrix::diagonal(&[q(1), q(-2)]);
        assert_eq!(m.charpoly().coeffs(), &[q(-2), q(1), q(1)]);
        assert_eq!(m.determinant(), q(-2));
    }

    #[test]
    fn charpoly_matches_determinant_at_points() {
        let m = Matrix::from_i64(&[&[1, 2, 0], &[3, -1, 4], &[0, 5, 2]]);
        let p = m.charpoly();
        for t in [-2i64, 0, 1, 3] {
            let shifted = Matrix::identity(3).scale(&q(t)).sub(&m);
            assert_eq!(p.eval(&q(t)), shifted.determinant());
        }
    }

    #[test]
    fn quadratic_roots() {
        // 2t^2 - 3t + 1 = (2t-1)(t-1)
        let p = UniPoly::new(vec![q(1), q(-3), q(2)]);
        assert_eq!(p.low_degree_rational_roots(), vec![frac(1, 2), q(1)]);
        assert!(UniPoly::new(vec![q(-2), q(0), q(1)])
            .low_degree_rational_roots()
            .is_empty());
        let cube = UniPoly::new(vec![q(-1), q(3), q(-3), q(1)]);
        assert_eq!(cube.root_multiplicity(&q(1)), 3);
    }

    #[test]
    fn smith_small() {
        let b = |v: i64| BigInt::from(v);
        let d = smith_diagonal(&[vec![b(2), b(0)], vec![b(0), b(2)]]);
        assert_eq!(d, vec![b(2), b(2)]);
        let d = smith_diagonal(&[
            vec![b(2), b(4), b(4)],
            vec![b(-6), b(6), b(12)],
            vec![b(10), b(-4), b(-16)],
        ]);
        assert_eq!(d, vec![b(2), b(6), b(12)]);
    }
}
