//! Type-A orbit and sheet geometry over the rationals.
//!
//! The minimal nilpotent orbit closure of `sl(n)` is the set of traceless
//! matrices of rank at most one. The closure of its sheet consists of the
//! traceless matrices `a Id + u v^T`. Minors live in the span of
//! `Z[i,j] Z[k,l] - Z[i,l] Z[k,j]` (`i<k`, `j<l`), which splits as
//! `V12 + U22`: `U22` is the kernel of the index contraction to `E* (x) E`,
//! `V12` the span of the images of `e_i* (x) e_j`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, UniPoly};
use crate::poly::Poly;
use crate::rational::{q, Q};

/// Entry variable `Z[i,j]`, 1-based.
pub type Entry = (usize, usize);

/// Quadratic form in the entries.
pub type MinorForm = Poly<Entry>;

fn require_traceless(z: &Matrix) -> Result<()> {
    if !z.is_square() {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if !z.trace().is_zero() {
        return Err(Error::Precondition("matrix is not traceless".into()));
    }
    Ok(())
}

pub fn entry(i: usize, j: usize) -> MinorForm {
    Poly::var((i, j))
}

/// `Z[i,j] Z[k,l] - Z[i,l] Z[k,j]`.
pub fn minor_form(i: usize, k: usize, j: usize, l: usize) -> MinorForm {
    entry(i, j).mul(&entry(k, l)).sub(&entry(i, l).mul(&entry(k, j)))
}

/// Index quadruples `(i,k,j,l)`, `i<k`, `j<l`, in lexicographic order.
pub fn minor_indices(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 1..=n {
        for k in i + 1..=n {
            for j in 1..=n {
                for l in j + 1..=n {
                    v.push((i, k, j, l));
                }
            }
        }
    }
    v
}

/// All `C(n,2)^2` minors, indices shifted by `offset`.
pub fn minor_generators(n: usize, offset: usize) -> Result<Vec<MinorForm>> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    Ok(minor_indices(n)
        .into_iter()
        .map(|(i, k, j, l)| minor_form(i + offset, k + offset, j + offset, l + offset))
        .collect())
}

pub fn eval_form(f: &MinorForm, z: &Matrix) -> Q {
    f.eval(|&(i, j)| z[(i - 1, j - 1)].clone())
}

pub fn in_min_orbit_closure(z: &Matrix) -> Result<bool> {
    require_traceless(z)?;
    Ok(z.rank() <= 1)
}

/// The same test through the vanishing of every 2x2 minor.
pub fn in_min_orbit_closure_by_minors(z: &Matrix) -> Result<bool> {
    require_traceless(z)?;
    let n = z.rows();
    if n < 2 {
        return Ok(true);
    }
    Ok(minor_generators(n, 0)?.iter().all(|f| eval_form(f, z).is_zero()))
}

/// `Z = a Id + u v^T` for some rational `a`.
pub fn in_sheet_closure(z: &Matrix) -> Result<bool> {
    require_traceless(z)?;
    let n = z.rows();
    if n <= 2 {
        // every traceless 2x2 matrix is a Id + (rank <= 1) with a an eigenvalue
        return Ok(true);
    }
    Ok(sheet_shift(z).is_some())
}

/// A rational `a` with `rank(Z - a Id) <= 1`, if one exists (`n >= 3`).
/// Such an `a` is an eigenvalue of multiplicity at least `n-1`, hence a
/// root of the quadratic `(n-2)`-th derivative of the characteristic
/// polynomial.
pub fn sheet_shift(z: &Matrix) -> Option<Q> {
    let n = z.rows();
    let mut candidates = vec![Q::zero()];
    if n >= 2 {
        let d: UniPoly = z.charpoly().nth_derivative(n - 2);
        candidates.extend(d.low_degree_rational_roots());
    }
    candidates
        .into_iter()
        .find(|a| z.sub(&Matrix::identity(n).scale(a)).rank() <= 1)
}

/// The block matrix with diagonal `(Y1(n-1), -Y1, ..., -Y1)` and first row
/// `(Y1(n-1), Y2, ..., Yn)`.
pub fn sheet_matrix(y: &[Q]) -> Result<Matrix> {
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        if i == 0 && j == 0 {
            &y[0] * q(n as i64 - 1)
        } else if i == 0 {
            y[j].clone()
        } else if i == j {
            -y[0].clone()
        } else {
            Q::zero()
        }
    }))
}

/// Integer unipotent `Id + c E[a,b]` factors and their product.
#[derive(Clone, Debug)]
pub struct Conjugator {
    pub factors: Vec<(usize, usize, i64)>,
}

impl Conjugator {
    pub fn identity() -> Self {
        Conjugator { factors: Vec::new() }
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let factors = (0..2 * n)
            .map(|_| {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
                (a, b, c)
            })
            .collect();
        Conjugator { factors }
    }

    pub fn matrix(&self, n: usize) -> Matrix {
        let mut r = Matrix::identity(n);
        for &(a, b, c) in &self.factors {
            let mut e = Matrix::identity(n);
            e[(a, b)] = q(c);
            r = r.mul(&e);
        }
        r
    }

    /// Exact inverse from the reversed negated factors.
    pub fn inverse_matrix(&self, n: usize) -> Matrix {
        let mut r = Matrix::identity(n);
        for &(a, b, c) in self.factors.iter().rev() {
            let mut e = Matrix::identity(n);
            e[(a, b)] = q(-c);
            r = r.mul(&e);
        }
        r
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SheetSample {
    pub y: Vec<String>,
    pub z: Matrix,
    #[serde(skip)]
    pub shift: Q,
    #[serde(skip)]
    pub u: Vec<Q>,
    #[serde(skip)]
    pub v: Vec<Q>,
}

impl SheetSample {
    /// `Z - shift Id = u v^T` exactly.
    pub fn decomposition_holds(&self) -> bool {
        let n = self.z.rows();
        let uv = Matrix::from_fn(n, n, |i, j| &self.u[i] * &self.v[j]);
        self.z.sub(&Matrix::identity(n).scale(&self.shift)) == uv
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_q(rng: &mut impl Rng) -> Q {
    Q::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=3).into())
}

/// Conjugate the sheet matrix of `y` by `r`.
pub fn sheet_element(y: &[Q], r: &Conjugator) -> Result<SheetSample> {
    let n = y.len();
    let m = sheet_matrix(y)?;
    let rm = r.matrix(n);
    let ri = r.inverse_matrix(n);
    let z = rm.mul(&m).mul(&ri);
    let u: Vec<Q> = (0..n).map(|i| rm[(i, 0)].clone()).collect();
    let mut w: Vec<Q> = y.to_vec();
    w[0] = &y[0] * q(n as i64);
    let v: Vec<Q> = (0..n)
        .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &w[k] * &ri[(k, j)]))
        .collect();
    Ok(SheetSample {
        y: y.iter().map(crate::rational::fmt_q).collect(),
        z,
        shift: -y[0].clone(),
        u,
        v,
    })
}

/// Sample number `index` for a base seed.
pub fn sample_sheet_element(n: usize, seed: u64, index: u64) -> Result<SheetSample> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let mut rng = rng_for(seed, index);
    let y: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
    let r = Conjugator::random(n, &mut rng);
    sheet_element(&y, &r)
}

/// Random traceless `u v^T` with `v . u = 0`.
pub fn sample_min_orbit_element(n: usize, seed: u64, index: u64) -> Matrix {
    let mut rng = rng_for(seed ^ 0x6d69_6e6f, index);
    let u: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
    let mut v: Vec<Q> = (0..n).map(|_| random_q(&mut rng)).collect();
    // fix one coordinate of v to force v . u = 0
    if let Some(p) = u.iter().position(|x| !x.is_zero()) {
        let dot: Q = (0..n).filter(|&k| k != p).fold(Q::zero(), |a, k| a + &u[k] * &v[k]);
        v[p] = -dot / &u[p];
    }
    Matrix::from_fn(n, n, |i, j| &u[i] * &v[j])
}

/// Random traceless matrix with small rational entries.
pub fn sample_traceless(n: usize, seed: u64, index: u64) -> Matrix {
    let mut rng = rng_for(seed ^ 0x7472_6163, index);
    let mut z = Matrix::from_fn(n, n, |_, _| random_q(&mut rng));
    let t = z.trace();
    z[(n - 1, n - 1)] -= t;
    z
}

/// Vector of a form in the minor basis (coefficient of the increasing
/// monomial `Z[i,j] Z[k,l]`). Errors if the form is not in the span.
pub fn minor_coordinates(n: usize, f: &MinorForm) -> Result<Vec<Q>> {
    let idx = minor_indices(n);
    let coords: Vec<Q> = idx
        .iter()
        .map(|&(i, k, j, l)| f.coefficient(&[(i, j), (k, l)]))
        .collect();
    let back = idx.iter().zip(&coords).fold(Poly::zero(), |acc, (&(i, k, j, l), c)| {
        acc.add(&minor_form(i, k, j, l).scale(c))
    });
    if &back != f {
        return Err(Error::Precondition("form is not a combination of 2x2 minors".into()));
    }
    Ok(coords)
}

pub fn from_minor_coordinates(n: usize, c: &[Q]) -> MinorForm {
    minor_indices(n)
        .iter()
        .zip(c)
        .fold(Poly::zero(), |acc, (&(i, k, j, l), x)| {
            acc.add(&minor_form(i, k, j, l).scale(x))
        })
}

/// Contraction of one paired index, `minor space -> E* (x) E` (row-major
/// `n x n`). Entry `(a,b)` of a minor `[i,k | j,l]` collects
/// `d_ij [k,l] - d_il [k,j] - d_kj [i,l] + d_kl [i,j]`.
pub fn contraction_matrix(n: usize) -> Matrix {
    let idx = minor_indices(n);
    let mut m = Matrix::zeros(n * n, idx.len());
    for (col, &(i, k, j, l)) in idx.iter().enumerate() {
        let mut put = |a: usize, b: usize, c: i64| m[((a - 1) * n + (b - 1), col)] += q(c);
        if i == j {
            put(k, l, 1);
        }
        if i == l {
            put(k, j, -1);
        }
        if k == j {
            put(i, l, -1);
        }
        if k == l {
            put(i, j, 1);
        }
    }
    m
}

/// Image of `e_i* (x) e_j`: `sum_k Z[i,j] Z[k,k] - Z[k,j] Z[i,k]`.
pub fn v12_image(n: usize, i: usize, j: usize) -> MinorForm {
    (1..=n).fold(Poly::zero(), |acc, k| {
        acc.add(&entry(i, j).mul(&entry(k, k)).sub(&entry(k, j).mul(&entry(i, k))))
    })
}

/// `Z[1,n] Z[2,n-1] - Z[1,n-1] Z[2,n]`.
pub fn generator_g(n: usize) -> MinorForm {
    entry(1, n)
        .mul(&entry(2, n - 1))
        .sub(&entry(1, n - 1).mul(&entry(2, n)))
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorDecomposition {
    pub n: usize,
    pub minor_space_dim: usize,
    pub dim_v12: usize,
    pub dim_u22: usize,
    pub direct: bool,
    pub g_in_u22: bool,
    #[serde(skip)]
    pub v12: Vec<MinorForm>,
    #[serde(skip)]
    pub u22: Vec<MinorForm>,
}

pub fn minor_decomposition(n: usize) -> Result<MinorDecomposition> {
    if n < 4 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "the V12 + U22 splitting needs n >= 4".into(),
        });
    }
    let total = minor_indices(n).len();
    let c = contraction_matrix(n);
    let kernel = c.kernel();
    let u22: Vec<MinorForm> = kernel.iter().map(|v| from_minor_coordinates(n, v)).collect();
    let mut v12 = Vec::with_capacity(n * n);
    let mut v12_coords = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            let f = v12_image(n, i, j);
            v12_coords.push(minor_coordinates(n, &f)?);
            v12.push(f);
        }
    }
    let dim_v12 = Matrix::from_rows(v12_coords.clone())?.rank();
    let mut all = v12_coords;
    all.extend(kernel.iter().cloned());
    let joint = Matrix::from_rows(all)?.rank();
    let g = minor_coordinates(n, &generator_g(n))?;
    let g_in_u22 = c.apply(&g).iter().all(Zero::is_zero);
    Ok(MinorDecomposition {
        n,
        minor_space_dim: total,
        dim_v12,
        dim_u22: kernel.len(),
        direct: joint == dim_v12 + kernel.len() && joint == total,
        g_in_u22,
        v12,
        u22,
    })
}

/// Every evaluation of `f` on `samples` seeded sheet samples is exactly 0.
pub fn vanishes_on_sheet(f: &MinorForm, n: usize, samples: usize, seed: u64) -> Result<bool> {
    if n < 4 {
        return Err(Error::UnsupportedRank {
            n,
            reason: "sheet vanishing is stated for n >= 4".into(),
        });
    }
    let zs: Vec<Matrix> = (0..samples as u64)
        .into_par_iter()
        .map(|k| sample_sheet_element(n, seed, k).map(|s| s.z))
        .collect::<Result<_>>()?;
    Ok(zs.iter().all(|z| eval_form(f, z).is_zero()))
}

/// Pull `f` back along `Z -> R Z R^{-1}`.
pub fn conjugate_form(f: &MinorForm, r: &Matrix, r_inv: &Matrix) -> MinorForm {
    let n = r.rows();
    f.substitute(|&(i, j)| {
        let mut lin = Poly::zero();
        for a in 0..n {
            for b in 0..n {
                let c = &r[(i - 1, a)] * &r_inv[(b, j - 1)];
                if !c.is_zero() {
                    lin = lin.add(&entry(a + 1, b + 1).scale(&c));
                }
            }
        }
        lin
    })
}

/// The semisimple sheet point `diag(n-1, -1, ..., -1)`.
pub fn semisimple_point(n: usize) -> Matrix {
    let mut d = vec![-Q::one(); n];
    d[0] = q(n as i64 - 1);
    Matrix::diagonal(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_examples() {
        let mut e = Matrix::zeros(3, 3);
        e[(0, 2)] = q(1);
        assert!(in_min_orbit_closure(&e).unwrap());
        let d = Matrix::diagonal(&[q(1), q(-1), q(0)]);
        assert!(!in_min_orbit_closure(&d).unwrap());
        assert!(!in_min_orbit_closure_by_minors(&d).unwrap());
        assert!(matches!(
            in_min_orbit_closure(&Matrix::identity(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sheet_matrix_examples() {
        let mut y = vec![q(0); 3];
        y[1] = q(1);
        let s = sheet_element(&y, &Conjugator::identity()).unwrap();
        let mut e12 = Matrix::zeros(3, 3);
        e12[(0, 1)] = q(1);
        assert_eq!(s.z, e12);
        let mut y = vec![q(0); 4];
        y[0] = q(1);
        let s = sheet_element(&y, &Conjugator::identity()).unwrap();
        assert_eq!(s.z, semisimple_point(4));
        assert_eq!(s.z.rank(), 4);
        assert!(!in_min_orbit_closure(&s.z).unwrap());
        assert!(in_sheet_closure(&s.z).unwrap());
    }

    #[test]
    fn samples_decompose() {
        for k in 0..10 {
            let s = sample_sheet_element(4, 7, k).unwrap();
            assert!(s.z.trace().is_zero());
            assert!(s.decomposition_holds());
            assert!(in_sheet_closure(&s.z).unwrap());
        }
    }

    #[test]
    fn three_eigenvalue_groups_fail() {
        let z = Matrix::diagonal(&[q(1), q(1), q(-2), q(0)]);
        assert!(!in_sheet_closure(&z).unwrap());
        assert!(in_sheet_closure(&Matrix::zeros(4, 4)).unwrap());
    }

    #[test]
    fn minor_counts() {
        assert_eq!(
            minor_generators(2, 0).unwrap(),
            vec![entry(1, 1).mul(&entry(2, 2)).sub(&entry(1, 2).mul(&entry(2, 1)))]
        );
        assert_eq!(minor_generators(3, 0).unwrap().len(), 9);
        assert_eq!(minor_generators(2, 2).unwrap()[0], minor_form(3, 4, 3, 4));
    }

    #[test]
    fn decomposition_n4() {
        let d = minor_decomposition(4).unwrap();
        assert_eq!(d.dim_u22, 20);
        assert_eq!(d.dim_v12, 16);
        assert!(d.direct);
        assert!(d.g_in_u22);
        let f = v12_image(4, 1, 1);
        assert_eq!(eval_form(&f, &semisimple_point(4)), q(-9));
        assert!(matches!(minor_decomposition(3), Err(Error::UnsupportedRank { .. })));
    }
}
