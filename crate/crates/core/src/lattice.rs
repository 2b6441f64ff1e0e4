//! Lattice arithmetic for the free-field identification.
//!
//! A weight `lambda in Z^n` splits as `rho(lambda0) + rho_vee(lambda_vee)`,
//! where `rho` is the all-ones column and `rho_vee` the bidiagonal
//! `n x (n-1)` matrix with `1` on the diagonal and `-1` just below. Both
//! pieces live in `(1/n)`-lattices and carry the same class in
//! `H = Z/nZ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{smith_diagonal, Matrix};
use crate::rational::{fmt_q, frac, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralLattice {
    pub gram: Matrix,
}

impl IntegralLattice {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() || gram.transpose() != gram {
            return Err(Error::Precondition("gram matrix must be square and symmetric".into()));
        }
        Ok(IntegralLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_integral(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| self.gram[(i, j)].is_integer()))
    }

    pub fn pairing(&self, x: &[Q], y: &[Q]) -> Q {
        let gy = self.gram.apply(y);
        x.iter().zip(&gy).fold(Q::zero(), |a, (u, v)| a + u * v)
    }
}

/// Cartan matrix of `sl(n)`.
pub fn cartan_matrix(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let r = n - 1;
    Ok(Matrix::from_fn(r, r, |i, j| {
        if i == j {
            q(2)
        } else if i.abs_diff(j) == 1 {
            q(-1)
        } else {
            Q::zero()
        }
    }))
}

/// Root lattice with gram `+C_n` or `-C_n`.
pub fn cartan_lattice(n: usize, positive: bool) -> Result<IntegralLattice> {
    let c = cartan_matrix(n)?;
    IntegralLattice::new(if positive { c } else { c.scale(&-Q::one()) })
}

/// Invariant factors of `L*/L`, with the trivial ones dropped.
pub fn discriminant_group(l: &IntegralLattice) -> Result<Vec<BigInt>> {
    if !l.is_integral() {
        return Err(Error::Precondition("gram matrix is not integral".into()));
    }
    if l.gram.determinant().is_zero() {
        return Err(Error::SingularLattice);
    }
    let rows: Vec<Vec<BigInt>> = (0..l.rank())
        .map(|i| (0..l.rank()).map(|j| l.gram[(i, j)].numer().clone()).collect())
        .collect();
    Ok(smith_diagonal(&rows)
        .into_iter()
        .map(|d| d.abs())
        .filter(|d| !d.is_one())
        .collect())
}

/// All-ones column `n x 1`.
pub fn rho(n: usize) -> Matrix {
    Matrix::from_fn(n, 1, |_, _| Q::one())
}

/// Bidiagonal `n x (n-1)`: `1` on the diagonal, `-1` below it.
pub fn rho_vee(n: usize) -> Matrix {
    Matrix::from_fn(n, n - 1, |i, j| {
        if i == j {
            Q::one()
        } else if i == j + 1 {
            -Q::one()
        } else {
            Q::zero()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub lambda0: Q,
    pub lambda_vee: Vec<Q>,
    /// `j in {0..n-1}` with `j = -sum(lambda) mod n`.
    pub j: u64,
}

impl WeightDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "lambda0": fmt_q(&self.lambda0),
            "lambda_vee": self.lambda_vee.iter().map(fmt_q).collect::<Vec<_>>(),
            "j": self.j,
        })
    }
}

/// Closed forms:
/// `lambda0 = (1/n) sum lambda_i`,
/// `lambda_vee_k = (1/n) sum_i w_k(i) (lambda_i - lambda_{i+1})` with
/// `w_k(i) = i(n-k)` for `i <= k` and `k(n-i)` for `i > k`.
pub fn decompose_weight(lambda: &[i64]) -> Result<WeightDecomposition> {
    let n = lambda.len();
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let ni = n as i64;
    let sum: i64 = lambda.iter().sum();
    let lambda0 = frac(sum, ni);
    let lambda_vee: Vec<Q> = (1..n)
        .map(|k| {
            let s: i64 = (1..n)
                .map(|i| {
                    let w = if i <= k { i * (n - k) } else { k * (n - i) } as i64;
                    w * (lambda[i - 1] - lambda[i])
                })
                .sum();
            frac(s, ni)
        })
        .collect();
    let rebuilt = reconstruct(n, &lambda0, &lambda_vee);
    if rebuilt.iter().zip(lambda).any(|(a, b)| a != &q(*b)) {
        return Err(Error::Internal(format!("weight {lambda:?} does not reconstruct")));
    }
    let j = (-sum).rem_euclid(ni) as u64;
    Ok(WeightDecomposition { lambda0, lambda_vee, j })
}

/// `rho(lambda0) + rho_vee(lambda_vee)`.
pub fn reconstruct(n: usize, lambda0: &Q, lambda_vee: &[Q]) -> Vec<Q> {
    (0..n)
        .map(|i| {
            let mut x = lambda0.clone();
            if i < n - 1 {
                x += &lambda_vee[i];
            }
            if i > 0 {
                x -= &lambda_vee[i - 1];
            }
            x
        })
        .collect()
}

/// `lambda_vee` by solving `C x = (lambda_k - lambda_{k+1})_k`, i.e.
/// through the fundamental-weight change of basis.
pub fn lambda_vee_by_cartan(lambda: &[i64]) -> Result<Vec<Q>> {
    let n = lambda.len();
    let c = cartan_matrix(n)?;
    let rhs: Vec<Q> = (0..n - 1).map(|k| q(lambda[k] - lambda[k + 1])).collect();
    c.solve(&rhs).ok_or(Error::SingularLattice)
}

fn mod_n(x: &Q, n: i64) -> Result<i64> {
    let y = x * q(n);
    if !y.is_integer() {
        return Err(Error::Precondition(format!("{} is not in (1/{n})Z", fmt_q(x))));
    }
    let r = y.numer().mod_floor(&BigInt::from(n));
    Ok(i64::try_from(r).expect("residue fits"))
}

/// Class of `lambda0 in (1/n)Z` in `Z/nZ`.
pub fn class_of_lambda0(lambda0: &Q, n: usize) -> Result<i64> {
    mod_n(lambda0, n as i64)
}

/// Class `c` of `lambda_vee` in `N_vee / Z^{n-1}`: `n lambda_vee_k = -c k (mod n)`.
/// Errors if `lambda_vee` is not in `N_vee`.
pub fn class_of_lambda_vee(lv: &[Q], n: usize) -> Result<i64> {
    let ni = n as i64;
    let c = (-mod_n(&lv[0], ni)?).rem_euclid(ni);
    for (k, x) in lv.iter().enumerate() {
        let expect = (-c * (k as i64 + 1)).rem_euclid(ni);
        if mod_n(x, ni)? != expect {
            return Err(Error::Precondition(
                "lambda_vee is not in the dual lattice class set".into(),
            ));
        }
    }
    Ok(c)
}

/// `H` is cyclic of order `n`, generated by `lambda_vee(e_1)`, and every
/// `lambda_vee(e_j)` lies in that class.
pub fn h_is_cyclic(n: usize) -> Result<bool> {
    let e = |j: usize| -> Vec<i64> { (0..n).map(|i| i64::from(i == j)).collect() };
    let g = decompose_weight(&e(0))?.lambda_vee;
    let order = (1..=n)
        .find(|&m| g.iter().all(|x| (x * q(m as i64)).is_integer()))
        .unwrap_or(0);
    let same = (0..n).all(|j| {
        decompose_weight(&e(j))
            .map(|d| d.lambda_vee.iter().zip(&g).all(|(a, b)| (a - b).is_integer()))
            .unwrap_or(false)
    });
    Ok(order == n && same)
}

/// `p` (all entries `1/n`) and `p_perp = Id - p`.
pub fn projections(n: usize) -> Result<(Matrix, Matrix)> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let p = Matrix::from_fn(n, n, |_, _| frac(1, n as i64));
    let perp = Matrix::identity(n).sub(&p);
    Ok((p, perp))
}

/// Integer tuples with `|lambda_i| <= bound` and sum `m`, lexicographic.
pub fn enumerate_p(m: i64, n: usize, bound: i64) -> Vec<Vec<i64>> {
    fn rec(left: usize, target: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if target == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let reach = bound * (left as i64 - 1);
        for x in -bound..=bound {
            let rest = target - x;
            if rest.abs() > reach {
                continue;
            }
            cur.push(x);
            rec(left - 1, rest, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if bound >= 0 {
        rec(n, m, bound, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan_lattice(2, true).unwrap().gram, Matrix::from_i64(&[&[2]]));
        let c3 = Matrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(cartan_lattice(3, true).unwrap().gram, c3);
        assert_eq!(cartan_lattice(3, false).unwrap().gram, c3.scale(&q(-1)));
    }

    #[test]
    fn discriminants() {
        for n in 2..=6 {
            assert_eq!(
                discriminant_group(&cartan_lattice(n, true).unwrap()).unwrap(),
                vec![BigInt::from(n)]
            );
        }
        let id = IntegralLattice::new(Matrix::identity(3)).unwrap();
        assert!(discriminant_group(&id).unwrap().is_empty());
        let two = IntegralLattice::new(Matrix::from_i64(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(
            discriminant_group(&two).unwrap(),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        let deg = IntegralLattice::new(Matrix::from_i64(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(discriminant_group(&deg), Err(Error::SingularLattice));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_weight(&[1, -1]).unwrap();
        assert_eq!((d.lambda0, d.lambda_vee, d.j), (q(0), vec![q(1)], 0));
        let d = decompose_weight(&[1, 0, 0]).unwrap();
        assert_eq!(
            (d.lambda0.clone(), d.lambda_vee.clone(), d.j),
            (frac(1, 3), vec![frac(2, 3), frac(1, 3)], 2)
        );
        assert_eq!(class_of_lambda0(&d.lambda0, 3).unwrap(), 1);
        assert_eq!(class_of_lambda_vee(&d.lambda_vee, 3).unwrap(), 1);
        let d = decompose_weight(&[0, 0, 0]).unwrap();
        assert_eq!((d.lambda0, d.lambda_vee, d.j), (q(0), vec![q(0), q(0)], 0));
    }

    #[test]
    fn projection_identities() {
        let (p, pp) = projections(2).unwrap();
        assert_eq!(
            pp,
            Matrix::from_rows(vec![vec![frac(1, 2), frac(-1, 2)], vec![frac(-1, 2), frac(1, 2)]]).unwrap()
        );
        assert_eq!(p.add(&pp), Matrix::identity(2));
        assert!(p.mul(&pp).is_zero());
        assert_eq!(p.mul(&p), p);
        assert!(pp.mul(&rho(2)).is_zero());
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_p(0, 2, 1), vec![vec![-1, 1], vec![0, 0], vec![1, -1]]);
        assert_eq!(enumerate_p(1, 2, 1), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(enumerate_p(0, 3, 1).len(), 7);
    }

    #[test]
    fn cyclic_h() {
        for n in 2..=6 {
            assert!(h_is_cyclic(n).unwrap());
        }
    }
}
