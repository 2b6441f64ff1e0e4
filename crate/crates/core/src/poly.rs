//! Commutative polynomials with rational coefficients over an ordered
//! variable type. Monomials are sorted variable lists (repeats allowed).

use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::rational::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<V: Ord> {
    terms: BTreeMap<Vec<V>, Q>,
}

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn var(v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![v], Q::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<V>, Q)>) -> Self {
        let mut p = Self::zero();
        for (mut m, c) in terms {
            m.sort();
            p.add_term(m, c);
        }
        p
    }

    /// `mono` must already be sorted.
    pub fn add_term(&mut self, mono: Vec<V>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<V>, Q> {
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

    pub fn coefficient(&self, mono: &[V]) -> Q {
        self.terms.get(mono).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.terms.keys().map(Vec::len);
        match d.next() {
            None => true,
            Some(first) => d.all(|x| x == first),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                m.sort();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Replace every variable by a polynomial.
    pub fn substitute<W: Ord + Clone>(&self, mut f: impl FnMut(&V) -> Poly<W>) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for v in m {
                t = t.mul(&f(v));
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, mut f: impl FnMut(&V) -> Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in m {
                t *= f(v);
            }
            acc += t;
        }
        acc
    }

    /// Drop every monomial touching a variable with `kill(v)`.
    pub fn kill_vars(&self, kill: impl Fn(&V) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.iter().any(&kill))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `Some(c)` with `self = c * other`, `c != 0`.
    pub fn ratio_to(&self, other: &Self) -> Option<Q> {
        let (m0, c0) = other.terms.iter().next()?;
        let c = self.terms.get(m0)? / c0;
        (self == &other.scale(&c)).then_some(c)
    }

    pub fn equal_up_to_sign(&self, other: &Self) -> bool {
        self == other || self == &other.neg()
    }

    pub fn format_with(&self, fmt_var: impl Fn(&V) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m.iter().map(&fmt_var).collect();
            match (mag.is_one(), vars.is_empty()) {
                (_, true) => out.push_str(&fmt_q(&mag)),
                (true, false) => out.push_str(&vars.join("*")),
                (false, false) => {
                    out.push_str(&fmt_q(&mag));
                    out.push('*');
                    out.push_str(&vars.join("*"));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic() {
        let x = Poly::var('x');
        let y = Poly::var('y');
        let s = x.add(&y);
        let d = x.sub(&y);
        let prod = s.mul(&d);
        assert_eq!(prod, x.mul(&x).sub(&y.mul(&y)));
        assert_eq!(prod.degree(), Some(2));
        assert!(prod.is_homogeneous());
        assert_eq!(prod.eval(|v| if *v == 'x' { q(3) } else { q(2) }), q(5));
        assert_eq!(prod.format_with(|v| v.to_string()), "x*x - y*y");
    }

    #[test]
    fn substitution_and_kill() {
        let p = Poly::var(0usize).mul(&Poly::var(1usize)).add(&Poly::var(2usize));
        let r = p.substitute(|v| if *v == 1 { Poly::constant(q(5)) } else { Poly::var(*v) });
        assert_eq!(r, Poly::var(0usize).scale(&q(5)).add(&Poly::var(2usize)));
        assert_eq!(p.kill_vars(|v| *v == 2), Poly::var(0usize).mul(&Poly::var(1usize)));
        assert_eq!(p.neg().ratio_to(&p), Some(q(-1)));
        assert!(p.neg().equal_up_to_sign(&p));
    }
}
