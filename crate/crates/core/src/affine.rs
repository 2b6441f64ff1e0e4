//! Mode calculus of the universal affine vertex algebra `V^k(g)`.
//!
//! States are finite rational combinations of PBW monomials
//! `x1_(m1) ... xr_(mr) |0>` with all `m < 0`, stored in canonical order:
//! ascending mode index (deepest first), ties broken by basis order. An odd
//! mode never repeats inside a canonical monomial.
//!
//! Modes act through
//!
//! ```text
//! [x_(m), y_(p)]  = [x,y]_(m+p) + m delta_{m+p,0} k (x,y)
//! ```
//!
//! where the left side is the super-commutator, and `x_(m) |0> = 0` for
//! `m >= 0`. The translation operator satisfies `[T, x_(m)] = -m x_(m-1)` and
//! `T |0> = 0`.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::liesuper::{Element, LieSuperalgebra};
use crate::rational::{fmt_q, q, sign, Q};

/// `x_(m)` for a basis element `x`. Field order gives the canonical
/// ordering: mode index first, basis index second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mode {
    pub m: i64,
    pub gen: usize,
}

impl Mode {
    pub fn new(gen: usize, m: i64) -> Self {
        Mode { m, gen }
    }
}

pub type Monomial = Vec<Mode>;

pub fn monomial_degree(mono: &[Mode]) -> u64 {
    mono.iter().map(|md| md.m.unsigned_abs()).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    terms: BTreeMap<Monomial, Q>,
    level: Q,
}

impl State {
    pub fn zero(level: Q) -> Self {
        State {
            terms: BTreeMap::new(),
            level,
        }
    }

    pub fn vacuum(level: Q) -> Self {
        let mut s = Self::zero(level);
        s.terms.insert(Vec::new(), Q::one());
        s
    }

    /// Build from canonical monomials. Callers holding arbitrary mode
    /// sequences should go through [`ModeCalculus::product`].
    pub fn from_canonical(level: Q, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut s = Self::zero(level);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
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

    pub fn add_term(&mut self, mono: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &State) -> State {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> State {
        if c.is_zero() {
            return State::zero(self.level.clone());
        }
        State {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
            level: self.level.clone(),
        }
    }

    /// The set of degrees occurring in the state.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.terms.keys().map(|m| monomial_degree(m)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Degree if homogeneous (the zero state counts as degree 0).
    pub fn degree(&self) -> Option<u64> {
        match self.degrees().as_slice() {
            [] => Some(0),
            [d] => Some(*d),
            _ => None,
        }
    }

    /// `Some(c)` if `self == c * other` for a nonzero rational `c`.
    pub fn proportionality(&self, other: &State) -> Option<Q> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next()?;
        let c = self.terms.get(m0)? / c0;
        (self == &other.scale(&c)).then_some(c)
    }

    pub fn is_canonical(&self, alg: &LieSuperalgebra) -> bool {
        self.terms.keys().all(|m| {
            m.iter().all(|md| md.m < 0)
                && m.windows(2)
                    .all(|w| w[0] < w[1] || (w[0] == w[1] && !alg.is_odd(w[0].gen)))
        })
    }
}

/// One token of an operator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordToken {
    /// `x_(m)` for an element `x` (usually a single basis vector).
    Mode(Element, i64),
    T,
}

/// Operators applied right to left, as written.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorWord(pub Vec<WordToken>);

impl OperatorWord {
    pub fn new(tokens: Vec<WordToken>) -> Self {
        OperatorWord(tokens)
    }

    pub fn tokens(&self) -> &[WordToken] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

type Terms = Vec<(Monomial, Q)>;
type CacheKey = (usize, i64, Monomial);

/// Normal-ordering engine for a fixed algebra and level. Holds a memo table
/// of single-mode actions on monomials; not shared across threads.
pub struct ModeCalculus<'a> {
    alg: &'a LieSuperalgebra,
    level: Q,
    cache: RefCell<HashMap<CacheKey, Rc<Terms>>>,
}

fn accumulate(acc: &mut HashMap<Monomial, Q>, mono: &Monomial, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(mono) {
        Some(v) => *v += c,
        None => {
            acc.insert(mono.clone(), c);
        }
    }
}

fn into_terms(acc: HashMap<Monomial, Q>) -> Terms {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl<'a> ModeCalculus<'a> {
    pub fn new(alg: &'a LieSuperalgebra, level: Q) -> Self {
        ModeCalculus {
            alg,
            level,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &LieSuperalgebra {
        self.alg
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn vacuum(&self) -> State {
        State::vacuum(self.level.clone())
    }

    pub fn zero(&self) -> State {
        State::zero(self.level.clone())
    }

    /// `x_(m)` applied to the canonical monomial `mono |0>`.
    fn act(&self, x: usize, m: i64, mono: &[Mode]) -> Rc<Terms> {
        let key = (x, m, mono.to_vec());
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Rc::clone(hit);
        }
        let result = Rc::new(self.act_uncached(x, m, mono));
        self.cache.borrow_mut().insert(key, Rc::clone(&result));
        result
    }

    fn act_uncached(&self, x: usize, m: i64, mono: &[Mode]) -> Terms {
        let alg = self.alg;
        let mode = Mode::new(x, m);
        let Some((&a, rest)) = mono.split_first() else {
            return if m < 0 {
                vec![(vec![mode], Q::one())]
            } else {
                Vec::new()
            };
        };
        let x_odd = alg.is_odd(x);
        if m < 0 && (mode < a || (mode == a && !x_odd)) {
            let mut out = Vec::with_capacity(mono.len() + 1);
            out.push(mode);
            out.extend_from_slice(mono);
            return vec![(out, Q::one())];
        }
        let mut acc = HashMap::new();
        if m < 0 && mode == a {
            // x_(m) x_(m) = 1/2 [x,x]_(2m) for odd x; central term vanishes as 2m != 0
            let half = Q::new(1.into(), 2.into());
            for (b, c) in alg.bracket(x, x) {
                for (mono2, c2) in self.act(*b, 2 * m, rest).iter() {
                    accumulate(&mut acc, mono2, &half * c * c2);
                }
            }
            return into_terms(acc);
        }
        // x a rest = [x,a] rest + central + (-1)^{|x||a|} a (x rest)
        for (b, c) in alg.bracket(x, a.gen) {
            for (mono2, c2) in self.act(*b, m + a.m, rest).iter() {
                accumulate(&mut acc, mono2, c * c2);
            }
        }
        if m + a.m == 0 {
            let central = q(m) * &self.level * alg.form(x, a.gen);
            if !central.is_zero() {
                accumulate(&mut acc, &rest.to_vec(), central);
            }
        }
        let s = sign(x_odd && alg.is_odd(a.gen));
        for (mono2, c2) in self.act(x, m, rest).iter() {
            for (mono3, c3) in self.act(a.gen, a.m, mono2).iter() {
                accumulate(&mut acc, mono3, &s * c2 * c3);
            }
        }
        into_terms(acc)
    }

    /// `x_(m) s` for a basis element `x`.
    pub fn apply_mode(&self, mode: Mode, s: &State) -> State {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (mono, c) in s.terms() {
            for (mono2, c2) in self.act(mode.gen, mode.m, mono).iter() {
                accumulate(&mut acc, mono2, c * c2);
            }
        }
        State::from_canonical(s.level.clone(), into_terms(acc))
    }

    /// `x_(m) s` for an arbitrary element `x`.
    pub fn apply_element(&self, x: &Element, m: i64, s: &State) -> State {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (gen, cx) in x {
            for (mono, c) in s.terms() {
                for (mono2, c2) in self.act(*gen, m, mono).iter() {
                    accumulate(&mut acc, mono2, cx * c * c2);
                }
            }
        }
        State::from_canonical(s.level.clone(), into_terms(acc))
    }

    /// Ordered product `modes[0] modes[1] ... |0>` in canonical form. Modes
    /// may be given in any order and with any index.
    pub fn product(&self, modes: &[Mode]) -> State {
        modes
            .iter()
            .rev()
            .fold(self.vacuum(), |st, md| self.apply_mode(*md, &st))
    }

    /// Re-normalise a state whose monomials may be out of order.
    pub fn canonicalize(&self, s: &State) -> State {
        let mut out = State::zero(s.level.clone());
        for (mono, c) in s.terms() {
            out = out.add(&self.product(mono).scale(c));
        }
        out
    }

    /// Translation operator (a derivation killing the vacuum).
    pub fn apply_t(&self, s: &State) -> State {
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        for (mono, c) in s.terms() {
            for i in 0..mono.len() {
                let mut shifted = mono.clone();
                let md = shifted[i];
                shifted[i] = Mode::new(md.gen, md.m - 1);
                let factor = c * q(-md.m);
                let st = self.product(&shifted);
                for (m2, c2) in st.terms() {
                    accumulate(&mut acc, m2, &factor * c2);
                }
            }
        }
        State::from_canonical(s.level.clone(), into_terms(acc))
    }

    /// Apply the word right to left.
    pub fn apply_word(&self, w: &OperatorWord, s: &State) -> State {
        w.tokens().iter().rev().fold(s.clone(), |st, tok| match tok {
            WordToken::T => self.apply_t(&st),
            WordToken::Mode(x, m) => self.apply_element(x, *m, &st),
        })
    }

    pub fn format(&self, s: &State) -> String {
        format_state(self.alg, s)
    }
}

pub fn format_mode(alg: &LieSuperalgebra, md: &Mode) -> String {
    format!("{}({})", alg.generator_name(md.gen), md.m)
}

/// Canonical text form, e.g. `E[1,3](-1) E[1,4](-1) |0> - 1/2 h[1](-2) |0>`.
pub fn format_state(alg: &LieSuperalgebra, s: &State) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (mono, c)) in s.terms().iter().enumerate() {
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&fmt_q(&mag));
            out.push(' ');
        }
        for md in mono {
            out.push_str(&format_mode(alg, md));
            out.push(' ');
        }
        out.push_str("|0>");
    }
    out
}

pub fn format_word(alg: &LieSuperalgebra, w: &OperatorWord) -> String {
    w.tokens()
        .iter()
        .map(|t| match t {
            WordToken::T => "T".to_string(),
            WordToken::Mode(x, m) => {
                if let [(g, c)] = x.as_slice() {
                    if c.is_one() {
                        return format!("{}({m})", alg.generator_name(*g));
                    }
                }
                format!("({})({m})", alg.format_element(x))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub mode: String,
    pub image: String,
}

#[derive(Clone, Debug)]
pub struct SingularCheck {
    pub singular: bool,
    pub degree: u64,
    pub modes_checked: usize,
    /// First non-annihilating mode in checking order, with its image.
    pub witness: Option<(Mode, State)>,
    /// Every non-annihilating mode, in checking order.
    pub failing_modes: Vec<Mode>,
}

/// The finite sufficient set of annihilators for a degree-`d` state:
/// `x_(0)` for `x` in the positive nilpotent part, then every basis `x_(m)`
/// with `1 <= m <= d`. Deeper modes kill by grading.
pub fn sufficient_modes(alg: &LieSuperalgebra, degree: u64) -> Vec<Mode> {
    let mut modes: Vec<Mode> = alg.positive_roots().into_iter().map(|g| Mode::new(g, 0)).collect();
    for m in 1..=degree as i64 {
        modes.extend((0..alg.dim()).map(|g| Mode::new(g, m)));
    }
    modes
}

/// Check whether `s` is killed by the positive part of the affine algebra.
pub fn is_singular(alg: &LieSuperalgebra, s: &State) -> Result<SingularCheck> {
    let degree = s
        .degree()
        .ok_or_else(|| Error::Precondition(format!("state is not homogeneous (degrees {:?})", s.degrees())))?;
    let modes = sufficient_modes(alg, degree);
    let images: Vec<(Mode, State)> = modes
        .par_iter()
        .map_init(
            || ModeCalculus::new(alg, s.level().clone()),
            |calc, md| (*md, calc.apply_mode(*md, s)),
        )
        .filter(|(_, img)| !img.is_zero())
        .collect();
    Ok(SingularCheck {
        singular: images.is_empty(),
        degree,
        modes_checked: modes.len(),
        failing_modes: images.iter().map(|(m, _)| *m).collect(),
        witness: images.into_iter().next(),
    })
}

/// Named vectors of `V^1(psl(n|n))`.
pub mod vectors {
    use super::*;

    fn psl_n(alg: &LieSuperalgebra) -> Result<usize> {
        alg.psl_rank()
            .ok_or_else(|| Error::Precondition(format!("{} is not psl(n|n)", alg.name())))
    }

    fn em(alg: &LieSuperalgebra, i: usize, j: usize, m: i64) -> Result<Mode> {
        Ok(Mode::new(alg.e(i, j)?, m))
    }

    fn ew(alg: &LieSuperalgebra, i: usize, j: usize, m: i64) -> Result<WordToken> {
        Ok(WordToken::Mode(alg.basis_element(alg.e(i, j)?), m))
    }

    /// `chi = E[1,2n-1](-1) E[1,2n](-1) |0>`.
    pub fn chi(calc: &ModeCalculus) -> Result<State> {
        let alg = calc.algebra();
        let n = psl_n(alg)?;
        Ok(calc.product(&[em(alg, 1, 2 * n - 1, -1)?, em(alg, 1, 2 * n, -1)?]))
    }

    /// `chi_+ = E[1,n](-1)^2 |0>`.
    pub fn chi_plus(calc: &ModeCalculus) -> Result<State> {
        let alg = calc.algebra();
        let n = psl_n(alg)?;
        let e = em(alg, 1, n, -1)?;
        Ok(calc.product(&[e, e]))
    }

    /// `chi_- = (E[n+1,2n](-1) E[n+2,2n-1](-1) - E[n+1,2n-1](-1) E[n+2,2n](-1)) |0>`, `n >= 4`.
    pub fn chi_minus(calc: &ModeCalculus) -> Result<State> {
        let alg = calc.algebra();
        let n = psl_n(alg)?;
        if n < 4 {
            return Err(Error::UnsupportedRank {
                n,
                reason: "chi_- is defined for n >= 4".into(),
            });
        }
        let a = calc.product(&[em(alg, n + 1, 2 * n, -1)?, em(alg, n + 2, 2 * n - 1, -1)?]);
        let b = calc.product(&[em(alg, n + 1, 2 * n - 1, -1)?, em(alg, n + 2, 2 * n, -1)?]);
        Ok(a.sub(&b))
    }

    /// `E[2n-1,n](1) T E[2n,n](1) T`, which maps chi to a multiple of chi_+.
    pub fn chi_plus_word(alg: &LieSuperalgebra) -> Result<OperatorWord> {
        let n = psl_n(alg)?;
        Ok(OperatorWord::new(vec![
            ew(alg, 2 * n - 1, n, 1)?,
            WordToken::T,
            ew(alg, 2 * n, n, 1)?,
            WordToken::T,
        ]))
    }

    /// `E[n+2,1](1) T E[n+1,1](1) T`, which maps chi to a multiple of chi_-.
    pub fn chi_minus_word(alg: &LieSuperalgebra) -> Result<OperatorWord> {
        let n = psl_n(alg)?;
        Ok(OperatorWord::new(vec![
            ew(alg, n + 2, 1, 1)?,
            WordToken::T,
            ew(alg, n + 1, 1, 1)?,
            WordToken::T,
        ]))
    }

    /// Operator word producing `u_{i,k,j,l}` from chi. Admissible range:
    /// `n+1 <= i < k <= 2n`, `n+1 <= j < l <= 2n`. The zero-mode prefix
    /// turns chi into a multiple of `E[1,j](-1) E[1,l](-1) |0>`:
    ///
    /// * `l <= 2n-1`: `E[2n,l](0) E[2n-1,j](0)`
    /// * `l = 2n, j < 2n-1`: `E[2n-1,j](0)`
    /// * `(j,l) = (2n-1,2n)`: nothing.
    pub fn u_word(alg: &LieSuperalgebra, i: usize, k: usize, j: usize, l: usize) -> Result<OperatorWord> {
        let n = psl_n(alg)?;
        let lo = n + 1;
        let hi = 2 * n;
        if !(lo <= i && i < k && k <= hi && lo <= j && j < l && l <= hi) {
            return Err(Error::Index(format!(
                "u[{i},{k},{j},{l}] outside n+1 <= i < k <= 2n, n+1 <= j < l <= 2n (n = {n})"
            )));
        }
        let mut toks = vec![ew(alg, k, 1, 1)?, WordToken::T, ew(alg, i, 1, 1)?, WordToken::T];
        if l < hi {
            toks.push(ew(alg, hi, l, 0)?);
            toks.push(ew(alg, hi - 1, j, 0)?);
        } else if j < hi - 1 {
            toks.push(ew(alg, hi - 1, j, 0)?);
        }
        Ok(OperatorWord::new(toks))
    }

    pub fn u_vector(calc: &ModeCalculus, i: usize, k: usize, j: usize, l: usize) -> Result<State> {
        let w = u_word(calc.algebra(), i, k, j, l)?;
        Ok(calc.apply_word(&w, &chi(calc)?))
    }

    /// All admissible `(i,k,j,l)` quadruples.
    pub fn u_indices(n: usize) -> Vec<(usize, usize, usize, usize)> {
        let r = n + 1..=2 * n;
        let mut out = Vec::new();
        for i in r.clone() {
            for k in i + 1..=2 * n {
                for j in r.clone() {
                    for l in j + 1..=2 * n {
                        out.push((i, k, j, l));
                    }
                }
            }
        }
        out
    }

    /// The annihilation identities for chi, one entry per (operator, mode).
    /// Zero modes are included only for operators in the positive
    /// nilpotent part, where they belong to the positive affine part.
    pub fn chi_annihilators(alg: &LieSuperalgebra, max_m: i64) -> Result<Vec<(String, Element, i64)>> {
        let n = psl_n(alg)?;
        let top = 2 * n;
        let mut ops: Vec<(String, Element, bool)> = Vec::new();
        let root = |i: usize, j: usize| -> Result<(Element, bool)> { Ok((alg.basis_element(alg.e(i, j)?), i < j)) };
        for j in 2..=top {
            if j != top - 1 {
                let (x, pos) = root(top - 1, j)?;
                ops.push((format!("E[{},{j}]", top - 1), x, pos));
            }
            if j != top {
                let (x, pos) = root(top, j)?;
                ops.push((format!("E[{top},{j}]"), x, pos));
            }
        }
        for i in 2..top - 1 {
            let (x, pos) = root(i, 1)?;
            ops.push((format!("E[{i},1]"), x, pos));
        }
        let (x, pos) = root(top - 1, 1)?;
        ops.push((format!("E[{},1]", top - 1), x, pos));
        let (x, pos) = root(top, 1)?;
        ops.push((format!("E[{top},1]"), x, pos));
        for (a, b) in [(top - 2, top - 1), (top - 1, top), (1, 2)] {
            // for n = 2, H[2,3] straddles the blocks and is not in the algebra
            if n == 2 && a == 2 {
                continue;
            }
            ops.push((format!("H[{a},{b}]"), alg.h_ij(a, b)?, false));
        }
        let mut out = Vec::new();
        for (label, x, positive) in ops {
            let start = if positive { 0 } else { 1 };
            for m in start..=max_m {
                out.push((label.clone(), x.clone(), m));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::vectors::*;
    use super::*;
    use crate::rational::frac;

    fn psl(n: usize) -> LieSuperalgebra {
        LieSuperalgebra::psl(n).unwrap()
    }

    #[test]
    fn vacuum_is_annihilated() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        for gen in 0..g.dim() {
            for m in 0..3 {
                assert!(c.apply_mode(Mode::new(gen, m), &c.vacuum()).is_zero());
            }
        }
        assert!(c.apply_t(&c.vacuum()).is_zero());
    }

    #[test]
    fn chi_n2_literal() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let chi = chi(&c).unwrap();
        assert_eq!(format_state(&g, &chi), "E[1,3](-1) E[1,4](-1) |0>");
        assert_eq!(chi.degree(), Some(2));
    }

    #[test]
    fn degree_zero_identity() {
        for n in 2..=4 {
            let g = psl(n);
            let c = ModeCalculus::new(&g, q(1));
            let e = g.e(2 * n - 1, 2 * n).unwrap();
            assert!(c.apply_mode(Mode::new(e, 0), &chi(&c).unwrap()).is_zero());
        }
    }

    #[test]
    fn translation_of_chi() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let t = c.apply_t(&chi(&c).unwrap());
        let e13 = g.e(1, 3).unwrap();
        let e14 = g.e(1, 4).unwrap();
        let expect = c
            .product(&[Mode::new(e13, -2), Mode::new(e14, -1)])
            .add(&c.product(&[Mode::new(e13, -1), Mode::new(e14, -2)]));
        assert_eq!(t, expect);
        assert_eq!(t.degree(), Some(3));
    }

    #[test]
    fn translation_single_factor() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let h = g.h(1).unwrap();
        let s = c.product(&[Mode::new(h, -2)]);
        assert_eq!(c.apply_t(&s), c.product(&[Mode::new(h, -3)]).scale(&q(2)));
    }

    #[test]
    fn even_square_survives_odd_square_dies() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let chi_p = chi_plus(&c).unwrap();
        assert_eq!(format_state(&g, &chi_p), "E[1,2](-1) E[1,2](-1) |0>");
        let odd = Mode::new(g.e(1, 3).unwrap(), -1);
        assert!(c.product(&[odd, odd]).is_zero());
    }

    #[test]
    fn central_term() {
        // E[1,2](1) E[2,1](-1)|0> = k (E12, E21) |0> = k
        let g = LieSuperalgebra::sl(2).unwrap();
        let c = ModeCalculus::new(&g, frac(3, 2));
        let s = c.product(&[Mode::new(g.e(1, 2).unwrap(), 1), Mode::new(g.e(2, 1).unwrap(), -1)]);
        assert_eq!(s, c.vacuum().scale(&frac(3, 2)));
    }

    #[test]
    fn chain_for_e_2n_1() {
        // E[2n,1](m) chi = (E[2n,2n-1](m-1) E[1,2n](-1) - E[1,2n-1](-1) E[2n,1](m) E[1,2n](-1)) |0>
        for n in 2..=3 {
            let g = psl(n);
            let c = ModeCalculus::new(&g, q(1));
            let chi = chi(&c).unwrap();
            for m in 1..=2 {
                let lhs = c.apply_mode(Mode::new(g.e(2 * n, 1).unwrap(), m), &chi);
                let a = c.product(&[
                    Mode::new(g.e(2 * n, 2 * n - 1).unwrap(), m - 1),
                    Mode::new(g.e(1, 2 * n).unwrap(), -1),
                ]);
                let b = c.product(&[
                    Mode::new(g.e(1, 2 * n - 1).unwrap(), -1),
                    Mode::new(g.e(2 * n, 1).unwrap(), m),
                    Mode::new(g.e(1, 2 * n).unwrap(), -1),
                ]);
                assert_eq!(lhs, a.sub(&b));
                assert!(lhs.is_zero());
            }
        }
    }

    #[test]
    fn singular_checks() {
        for n in 2..=3 {
            let g = psl(n);
            let c = ModeCalculus::new(&g, q(1));
            assert!(is_singular(&g, &chi(&c).unwrap()).unwrap().singular);
            let r = is_singular(&g, &chi_plus(&c).unwrap()).unwrap();
            assert!(!r.singular);
            assert_eq!(r.witness.unwrap().0, Mode::new(g.e(n, n + 1).unwrap(), 0));
        }
        let g = psl(2);
        assert!(is_singular(&g, &State::vacuum(q(1))).unwrap().singular);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let s = chi(&c).unwrap().add(&c.product(&[Mode::new(0, -1)]));
        assert!(matches!(is_singular(&g, &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn chi_plus_from_word() {
        for n in 2..=3 {
            let g = psl(n);
            let c = ModeCalculus::new(&g, q(1));
            let w = chi_plus_word(&g).unwrap();
            let img = c.apply_word(&w, &chi(&c).unwrap());
            let scalar = img.proportionality(&chi_plus(&c).unwrap()).expect("proportional");
            assert_eq!(scalar.clone() * scalar, q(1));
        }
    }

    #[test]
    fn empty_word_is_identity() {
        let g = psl(2);
        let c = ModeCalculus::new(&g, q(1));
        let chi = chi(&c).unwrap();
        assert_eq!(c.apply_word(&OperatorWord::default(), &chi), chi);
    }

    #[test]
    fn u_index_errors() {
        let g = psl(3);
        assert!(matches!(u_word(&g, 4, 4, 4, 5), Err(Error::Index(_))));
        assert!(matches!(u_word(&g, 3, 4, 4, 5), Err(Error::Index(_))));
        assert!(u_word(&g, 4, 5, 4, 6).is_ok());
        let c = ModeCalculus::new(&g, q(1));
        assert!(matches!(chi_minus(&c), Err(Error::UnsupportedRank { .. })));
    }
}
