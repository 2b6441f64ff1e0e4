//! Zhu C2 reduction for universal affine vertex algebras.
//!
//! `R_{V^k(g)} = C[g*]`: a PBW monomial whose modes all sit at depth `-1`
//! maps to the product of its generator variables, anything with a deeper
//! mode lies in `C2` and maps to zero. The reduced map additionally kills
//! the odd variables and writes the result in matrix coordinates
//! `X[p,q]` of the even part.
//!
//! Coordinate chart: an even root `E[p,q]` gives `X[p,q]`; a Cartan element
//! `h_i` gives `X[i,i] - X[i+1,i+1]`. Each diagonal block is normalised to
//! trace zero, so the last diagonal coordinate of every block is eliminated:
//! `X[n,n] = -(X[1,1] + ... + X[n-1,n-1])` and likewise for `X[2n,2n]`.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::affine::{vectors, Mode, ModeCalculus, State};
use crate::error::{Error, Result};
use crate::liesuper::{BasisKind, Family, LieSuperalgebra};
use crate::poly::Poly;
use crate::rational::{q, sign, Q};

/// True iff the monomial has some mode at depth `<= -2`.
pub fn c2_member(mono: &[Mode]) -> bool {
    mono.iter().any(|md| md.m <= -2)
}

/// Supercommutative polynomial in the generator variables `X_a`.
/// Monomials are sorted basis indices; odd indices never repeat.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperPolynomial {
    terms: BTreeMap<Vec<usize>, Q>,
}

impl SuperPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c * X_{vars[0]} ... X_{vars[r-1]}`, reordering with Koszul signs.
    pub fn add_product(&mut self, alg: &LieSuperalgebra, vars: &[usize], c: Q) {
        let mut v = vars.to_vec();
        let mut odd_swaps = false;
        // insertion sort tracking transpositions of odd pairs
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if alg.is_odd(v[j - 1]) && alg.is_odd(v[j]) {
                    odd_swaps = !odd_swaps;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1] && alg.is_odd(w[0])) {
            return;
        }
        let c = c * sign(odd_swaps);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(v.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    /// Parities of the monomials (true = odd), deduplicated.
    pub fn parities(&self, alg: &LieSuperalgebra) -> Vec<bool> {
        let mut p: Vec<bool> = self
            .terms
            .keys()
            .map(|m| m.iter().filter(|a| alg.is_odd(**a)).count() % 2 == 1)
            .collect();
        p.sort();
        p.dedup();
        p
    }

    /// `sigma`: set every odd variable to zero.
    pub fn drop_odd(&self, alg: &LieSuperalgebra) -> Poly<usize> {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| !m.iter().any(|a| alg.is_odd(*a)))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn format(&self, alg: &LieSuperalgebra) -> String {
        let p: Poly<usize> = Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())));
        // monomials are already canonical, so the commutative printer keeps their order
        p.format_with(|a| format!("X<{}>", alg.generator_name(*a)))
    }
}

/// `Psi`: the C2 quotient map on states.
pub fn psi(alg: &LieSuperalgebra, s: &State) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero();
    for (mono, c) in s.terms() {
        if c2_member(mono) || mono.iter().any(|md| md.m >= 0) {
            continue;
        }
        let vars: Vec<usize> = mono.iter().map(|md| md.gen).collect();
        out.add_product(alg, &vars, c.clone());
    }
    out
}

/// Matrix coordinate `X[row,col]` of the even part (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X[{},{}]", self.row, self.col)
    }
}

pub type EvenPolynomial = Poly<Coord>;

/// Even diagonal blocks of the defining matrices, as inclusive ranges.
pub fn blocks(alg: &LieSuperalgebra) -> Vec<(usize, usize)> {
    match alg.family() {
        Family::Sl(n) => vec![(1, n)],
        Family::Psl(n) => vec![(1, n), (n + 1, 2 * n)],
    }
}

/// `X[p,q]` in the chart (diagonal entries eliminated where needed).
pub fn coord(alg: &LieSuperalgebra, p: usize, q_: usize) -> Result<EvenPolynomial> {
    let size = alg.matrix_size();
    let bl = blocks(alg);
    let block_of = |i: usize| bl.iter().copied().find(|(lo, hi)| *lo <= i && i <= *hi);
    let (bp, bq) = match (block_of(p), block_of(q_)) {
        (Some(a), Some(b)) if p <= size && q_ <= size => (a, b),
        _ => return Err(Error::Index(format!("X[{p},{q_}] outside the matrix"))),
    };
    if bp != bq {
        return Err(Error::Index(format!("X[{p},{q_}] is not an even coordinate")));
    }
    if p != q_ || p != bp.1 {
        return Ok(Poly::var(Coord { row: p, col: q_ }));
    }
    let mut out = Poly::zero();
    for i in bp.0..bp.1 {
        out = out.sub(&Poly::var(Coord { row: i, col: i }));
    }
    Ok(out)
}

/// Linear form of an even basis generator in the chart.
pub fn chart(alg: &LieSuperalgebra, gen: usize) -> Result<EvenPolynomial> {
    let g = alg.basis()[gen];
    if g.odd {
        return Err(Error::Precondition(format!("{} is odd", g.kind)));
    }
    match g.kind {
        BasisKind::Root(p, q_) => coord(alg, p, q_),
        BasisKind::Cartan(i) => Ok(coord(alg, i, i)?.sub(&coord(alg, i + 1, i + 1)?)),
    }
}

/// `Psi~ = sigma . Psi`, written in matrix coordinates.
pub fn psi_reduced(alg: &LieSuperalgebra, s: &State) -> EvenPolynomial {
    psi(alg, s)
        .drop_odd(alg)
        .substitute(|a| chart(alg, *a).expect("even generator has a chart image"))
}

/// Set every coordinate of the top diagonal block to zero (`psl` only).
pub fn restrict_to_bottom(alg: &LieSuperalgebra, p: &EvenPolynomial) -> EvenPolynomial {
    match alg.family() {
        Family::Psl(n) => p.kill_vars(|c| c.row <= n),
        Family::Sl(_) => p.clone(),
    }
}

/// `X[i,j] X[k,l] - X[k,j] X[i,l]` in the chart.
pub fn minor(alg: &LieSuperalgebra, i: usize, k: usize, j: usize, l: usize) -> Result<EvenPolynomial> {
    Ok(coord(alg, i, j)?
        .mul(&coord(alg, k, l)?)
        .sub(&coord(alg, k, j)?.mul(&coord(alg, i, l)?)))
}

pub fn format_even(p: &EvenPolynomial) -> String {
    p.format_with(|c| c.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorEntry {
    pub indices: [usize; 4],
    pub image: String,
    /// +1 or -1 if the image equals that multiple of the minor, else 0.
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorCoverReport {
    pub n: usize,
    pub vectors: usize,
    pub minors: usize,
    pub covered: bool,
    /// Minors not produced by any vector.
    pub missing: Vec<String>,
    /// Vectors whose image is not plus or minus its minor.
    pub mismatched: Vec<MinorEntry>,
    pub entries: Vec<MinorEntry>,
}

/// Build every `u[i,k,j,l]`, reduce it, restrict to the bottom block and
/// compare with the corresponding 2x2 minor of the bottom `sl(n)` block.
pub fn minor_cover_check(n: usize) -> Result<MinorCoverReport> {
    let alg = LieSuperalgebra::psl(n)?;
    let quads = vectors::u_indices(n);
    let entries: Vec<Result<MinorEntry>> = quads
        .par_iter()
        .map_init(
            || ModeCalculus::new(&alg, alg.default_level()),
            |calc, &(i, k, j, l)| {
                let u = vectors::u_vector(calc, i, k, j, l)?;
                let image = restrict_to_bottom(&alg, &psi_reduced(&alg, &u));
                let target = minor(&alg, i, k, j, l)?;
                let sign = if image == target {
                    1
                } else if image == target.neg() {
                    -1
                } else {
                    0
                };
                Ok(MinorEntry {
                    indices: [i, k, j, l],
                    image: format_even(&image),
                    sign,
                })
            },
        )
        .collect();
    let entries: Vec<MinorEntry> = entries.into_iter().collect::<Result<_>>()?;
    let mismatched: Vec<MinorEntry> = entries.iter().filter(|e| e.sign == 0).cloned().collect();
    let missing: Vec<String> = entries
        .iter()
        .filter(|e| e.sign == 0)
        .map(|e| {
            let [i, k, j, l] = e.indices;
            format!("X[{i},{j}]X[{k},{l}] - X[{k},{j}]X[{i},{l}]")
        })
        .collect();
    let minors = {
        let c = n * (n - 1) / 2;
        c * c
    };
    Ok(MinorCoverReport {
        n,
        vectors: entries.len(),
        minors,
        covered: missing.is_empty() && entries.len() == minors,
        missing,
        mismatched,
        entries,
    })
}

/// Convenience: `Psi~(u)` for the level-one vacuum module.
pub fn reduced_u_image(alg: &LieSuperalgebra, i: usize, k: usize, j: usize, l: usize) -> Result<EvenPolynomial> {
    let calc = ModeCalculus::new(alg, q(1));
    Ok(psi_reduced(alg, &vectors::u_vector(&calc, i, k, j, l)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_membership() {
        let g = LieSuperalgebra::psl(2).unwrap();
        let e13 = g.e(1, 3).unwrap();
        let e14 = g.e(1, 4).unwrap();
        assert!(c2_member(&[Mode::new(e13, -2)]));
        assert!(!c2_member(&[Mode::new(e13, -1), Mode::new(e14, -1)]));
    }

    #[test]
    fn psi_of_chi() {
        for n in 2..=3 {
            let g = LieSuperalgebra::psl(n).unwrap();
            let c = ModeCalculus::new(&g, q(1));
            let chi = vectors::chi(&c).unwrap();
            let p = psi(&g, &chi);
            let mut expect = SuperPolynomial::zero();
            expect.add_product(&g, &[g.e(1, 2 * n - 1).unwrap(), g.e(1, 2 * n).unwrap()], q(1));
            assert_eq!(p, expect);
            assert!(psi_reduced(&g, &chi).is_zero());
        }
    }

    #[test]
    fn koszul_sign() {
        let g = LieSuperalgebra::psl(2).unwrap();
        let a = g.e(1, 3).unwrap();
        let b = g.e(1, 4).unwrap();
        let mut p = SuperPolynomial::zero();
        p.add_product(&g, &[a, b], q(1));
        p.add_product(&g, &[b, a], q(1));
        assert!(p.is_zero());
        p.add_product(&g, &[a, a], q(1));
        assert!(p.is_zero());
    }

    #[test]
    fn chart_of_d() {
        // D[i,1] -> X[1,1] + X[i,i]
        let g = LieSuperalgebra::psl(3).unwrap();
        for i in 4..=6 {
            let d = g.d_ij(i, 1).unwrap();
            let mut img = Poly::zero();
            for (a, c) in &d {
                img = img.add(&chart(&g, *a).unwrap().scale(c));
            }
            let expect = coord(&g, 1, 1).unwrap().add(&coord(&g, i, i).unwrap());
            assert_eq!(img, expect, "i = {i}");
        }
    }

    #[test]
    fn cover_small() {
        let r = minor_cover_check(2).unwrap();
        assert!(r.covered, "{r:?}");
        assert_eq!(r.minors, 1);
        let r = minor_cover_check(3).unwrap();
        assert!(r.covered, "{:?}", r.mismatched);
        assert_eq!(r.vectors, 9);
    }
}
