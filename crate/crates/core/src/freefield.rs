//! Symplectic bosons and free fermions.
//!
//! Fields `a(z) = sum a_(j) z^{-j-1}` with
//!
//! ```text
//! [beta^i_(m), gamma^j_(p)] = delta_{ij} delta_{m+p,-1}
//! {b^i_(m), c^j_(p)}        = delta_{ij} delta_{m+p,-1}
//! ```
//!
//! and `a_(m)|0> = 0` for `m >= 0`. Bilinear currents are linear
//! combinations of normally ordered products `:ab:`. With the `:gamma beta:`
//! ordering a single boson pair has self-level `-1` and a single fermion pair
//! `:b c:` has `+1`.

use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Field {
    Beta(usize),
    Gamma(usize),
    B(usize),
    C(usize),
}

impl Field {
    pub fn is_odd(self) -> bool {
        matches!(self, Field::B(_) | Field::C(_))
    }

    /// Coefficient of `1/(z-w)` in `self(z) other(w)`.
    pub fn pairing(self, other: Field) -> Q {
        match (self, other) {
            (Field::Beta(i), Field::Gamma(j)) if i == j => Q::one(),
            (Field::Gamma(i), Field::Beta(j)) if i == j => -Q::one(),
            (Field::B(i), Field::C(j)) | (Field::C(i), Field::B(j)) if i == j => Q::one(),
            _ => Q::zero(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Beta(i) => write!(f, "beta[{i}]"),
            Field::Gamma(i) => write!(f, "gamma[{i}]"),
            Field::B(i) => write!(f, "b[{i}]"),
            Field::C(i) => write!(f, "c[{i}]"),
        }
    }
}

/// `n` boson pairs and `n` fermion pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeFieldSystem {
    pub n: usize,
}

impl FreeFieldSystem {
    pub fn new(n: usize) -> Self {
        FreeFieldSystem { n }
    }

    pub fn fields(&self) -> Vec<Field> {
        let mut v = Vec::with_capacity(4 * self.n);
        for i in 1..=self.n {
            v.extend([Field::Beta(i), Field::Gamma(i), Field::B(i), Field::C(i)]);
        }
        v
    }
}

/// `sum c_{ab} :ab:` over ordered pairs of fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BilinearCurrent {
    terms: BTreeMap<(Field, Field), Q>,
}

impl BilinearCurrent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: Field, b: Field, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(Field, Field), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v * c);
        }
        out
    }

    fn filtered(&self, keep: impl Fn(Field) -> bool) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            if keep(*a) && keep(*b) {
                out.add_term(*a, *b, c.clone());
            }
        }
        out
    }

    pub fn boson_part(&self) -> Self {
        self.filtered(|f| !f.is_odd())
    }

    pub fn fermion_part(&self) -> Self {
        self.filtered(Field::is_odd)
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((a, b), c)| format!("{} :{a} {b}:", crate::rational::fmt_q(c)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `:gamma^i beta^i:`
pub fn boson_current(i: usize) -> BilinearCurrent {
    let mut j = BilinearCurrent::zero();
    j.add_term(Field::Gamma(i), Field::Beta(i), Q::one());
    j
}

/// `:b^i c^i:`
pub fn fermion_current(i: usize) -> BilinearCurrent {
    let mut j = BilinearCurrent::zero();
    j.add_term(Field::B(i), Field::C(i), Q::one());
    j
}

/// `J^i = sum_j rho[j][i] (:gamma^j beta^j: + :b^j c^j:)` for an `n x r`
/// integer weight matrix.
pub fn current_from_weights(rho: &[Vec<i64>]) -> Result<Vec<BilinearCurrent>> {
    let r = rho.first().map(Vec::len).unwrap_or(0);
    if rho.iter().any(|row| row.len() != r) {
        return Err(Error::Precondition("weight matrix rows differ in length".into()));
    }
    Ok((0..r)
        .map(|i| {
            let mut cur = BilinearCurrent::zero();
            for (j, row) in rho.iter().enumerate() {
                let w = q(row[i]);
                cur = cur.add(&boson_current(j + 1).add(&fermion_current(j + 1)).scale(&w));
            }
            cur
        })
        .collect())
}

/// Coefficient of `(z-w)^{-2}` in `a(z) b(w)` by double Wick contraction.
pub fn ope_level(a: &BilinearCurrent, b: &BilinearCurrent) -> Q {
    let mut total = Q::zero();
    for ((a1, b1), c1) in a.terms() {
        for ((a2, b2), c2) in b.terms() {
            // nested pairing a1-b2, b1-a2
            let nested = a1.pairing(*b2) * b1.pairing(*a2);
            // crossed pairing a1-a2, b1-b2; odd crossing costs a sign
            let mut crossed = a1.pairing(*a2) * b1.pairing(*b2);
            if b1.is_odd() && a2.is_odd() {
                crossed = -crossed;
            }
            total += c1 * c2 * (nested + crossed);
        }
    }
    total
}

/// Matrix of levels between the currents of a weight matrix.
pub fn level_matrix(rho: &[Vec<i64>]) -> Result<Matrix> {
    let cur = current_from_weights(rho)?;
    let r = cur.len();
    Ok(Matrix::from_fn(r, r, |i, j| ope_level(&cur[i], &cur[j])))
}

/// Mode-level oracle: a Fock space over the free fields.
pub mod fock {
    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct FMode {
        pub m: i64,
        pub field: Field,
    }

    pub type FState = BTreeMap<Vec<FMode>, Q>;

    pub fn vacuum() -> FState {
        let mut s = FState::new();
        s.insert(Vec::new(), Q::one());
        s
    }

    fn add(acc: &mut HashMap<Vec<FMode>, Q>, k: Vec<FMode>, c: Q) {
        if c.is_zero() {
            return;
        }
        *acc.entry(k).or_insert_with(Q::zero) += c;
    }

    /// `[x_(m), y_(p)]` (anti-commutator for two fermions), a scalar.
    pub fn bracket(x: FMode, y: FMode) -> Q {
        if x.m + y.m == -1 {
            x.field.pairing(y.field)
        } else {
            Q::zero()
        }
    }

    fn act_mono(x: FMode, mono: &[FMode]) -> Vec<(Vec<FMode>, Q)> {
        if x.m < 0 {
            // creators supercommute: insert with the Koszul sign of the moves
            let pos = mono.partition_point(|y| *y < x);
            if x.field.is_odd() && mono.get(pos) == Some(&x) {
                return Vec::new();
            }
            let passes = mono[..pos].iter().filter(|y| y.field.is_odd()).count();
            let s = if x.field.is_odd() && passes % 2 == 1 {
                -Q::one()
            } else {
                Q::one()
            };
            let mut out = mono.to_vec();
            out.insert(pos, x);
            return vec![(out, s)];
        }
        let mut res = Vec::new();
        let mut prefix_odd = false;
        for (k, y) in mono.iter().enumerate() {
            let c = bracket(x, *y);
            if !c.is_zero() {
                let mut rest = mono[..k].to_vec();
                rest.extend_from_slice(&mono[k + 1..]);
                let s = if x.field.is_odd() && prefix_odd { -c } else { c };
                res.push((rest, s));
            }
            if y.field.is_odd() {
                prefix_odd = !prefix_odd;
            }
        }
        res
    }

    pub fn apply(x: FMode, s: &FState) -> FState {
        let mut acc = HashMap::new();
        for (mono, c) in s {
            for (m2, c2) in act_mono(x, mono) {
                add(&mut acc, m2, c * c2);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn plus(a: &FState, b: &FState, scale: &Q) -> FState {
        let mut out = a.clone();
        for (k, v) in b {
            let e = out.entry(k.clone()).or_insert_with(Q::zero);
            *e += v * scale;
            if e.is_zero() {
                out.remove(k);
            }
        }
        out
    }

    fn max_depth(s: &FState) -> i64 {
        s.keys().flatten().map(|md| -md.m).max().unwrap_or(0)
    }

    /// `:ab:_(p) s = sum_{j<0} a_(j) b_(p-j-1) s + eps sum_{j>=0} b_(p-j-1) a_(j) s`.
    pub fn apply_normal_ordered(a: Field, b: Field, p: i64, s: &FState) -> FState {
        let k = max_depth(s) + 1;
        let eps = if a.is_odd() && b.is_odd() { -Q::one() } else { Q::one() };
        let mut out = FState::new();
        // beyond these bounds the rightmost operator already annihilates s
        for j in (p - 1 - k).min(-1)..=-1 {
            let t = apply(FMode { m: j, field: a }, &apply(FMode { m: p - j - 1, field: b }, s));
            out = plus(&out, &t, &Q::one());
        }
        for j in 0..=k {
            let t = apply(FMode { m: p - j - 1, field: b }, &apply(FMode { m: j, field: a }, s));
            out = plus(&out, &t, &eps);
        }
        out
    }

    pub fn apply_current(cur: &BilinearCurrent, p: i64, s: &FState) -> FState {
        let mut out = FState::new();
        for ((a, b), c) in cur.terms() {
            out = plus(&out, &apply_normal_ordered(*a, *b, p, s), c);
        }
        out
    }

    /// Level via `J1_(1) J2_(-1) |0>`.
    pub fn level(j1: &BilinearCurrent, j2: &BilinearCurrent) -> Q {
        let state = apply_current(j2, -1, &vacuum());
        let img = apply_current(j1, 1, &state);
        img.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_levels() {
        assert_eq!(ope_level(&boson_current(1), &boson_current(1)), q(-1));
        assert_eq!(ope_level(&fermion_current(1), &fermion_current(1)), q(1));
        assert_eq!(fock::level(&boson_current(1), &boson_current(1)), q(-1));
        assert_eq!(fock::level(&fermion_current(1), &fermion_current(1)), q(1));
        assert_eq!(ope_level(&boson_current(1), &boson_current(2)), q(0));
    }

    #[test]
    fn sqed_level_zero() {
        for n in 1..=4 {
            let rho: Vec<Vec<i64>> = vec![vec![1]; n];
            let j = &current_from_weights(&rho).unwrap()[0];
            assert_eq!(ope_level(j, j), q(0));
            assert_eq!(fock::level(j, j), q(0));
            assert_eq!(ope_level(&j.boson_part(), &j.boson_part()), q(-(n as i64)));
            assert_eq!(fock::level(&j.fermion_part(), &j.fermion_part()), q(n as i64));
        }
    }

    #[test]
    fn zero_and_unit_weights() {
        let cur = current_from_weights(&[vec![0], vec![0]]).unwrap();
        assert!(cur[0].is_zero());
        let cur = current_from_weights(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(cur.len(), 2);
        assert_eq!(cur[0], boson_current(1).add(&fermion_current(1)));
        assert!(level_matrix(&[vec![1, 2], vec![3, -1]]).unwrap().is_zero());
    }

    #[test]
    fn fock_pairing() {
        use fock::*;
        let s = apply(
            FMode {
                m: -1,
                field: Field::Gamma(1),
            },
            &vacuum(),
        );
        let back = apply(
            FMode {
                m: 0,
                field: Field::Beta(1),
            },
            &s,
        );
        assert_eq!(back, vacuum());
        let two = apply(
            FMode {
                m: -1,
                field: Field::B(1),
            },
            &apply(
                FMode {
                    m: -1,
                    field: Field::B(1),
                },
                &vacuum(),
            ),
        );
        assert!(two.is_empty());
    }
}
