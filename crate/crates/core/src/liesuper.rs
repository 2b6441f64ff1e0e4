//! Finite-dimensional Lie superalgebras as exact structure-constant tables.
//!
//! Two families are built in: `sl(n)` and `psl(n|n)`. Both are realised
//! inside matrices (`n x n`, resp. `2n x 2n` supermatrices) and every
//! bracket is computed there, then expressed back in the fixed basis.
//!
//! Basis order is total and fixed: Cartan elements `h[i]` ascending, then
//! root vectors `E[i,j]` lexicographically. All indices are 1-based, as in
//! the usual matrix notation.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, q, sign, Q};

/// Which basis element a slot of the table is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisKind {
    /// `h_i = E[i,i] - E[i+1,i+1]`.
    Cartan(usize),
    /// Elementary matrix `E[i,j]`, `i != j`.
    Root(usize, usize),
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Cartan(i) => write!(f, "h[{i}]"),
            BasisKind::Root(i, j) => write!(f, "E[{i},{j}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub kind: BasisKind,
    pub odd: bool,
}

/// Sparse element: `(basis index, coefficient)` sorted by index, no zeros.
pub type Element = Vec<(usize, Q)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Sl(usize),
    Psl(usize),
}

#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    name: String,
    family: Family,
    basis: Vec<Generator>,
    index: HashMap<BasisKind, usize>,
    brackets: Vec<Element>,
    form: Vec<Q>,
}

type SparseMat = BTreeMap<(usize, usize), Q>;

fn add_into(acc: &mut BTreeMap<usize, Q>, idx: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(idx).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&idx);
    }
}

fn finish(acc: BTreeMap<usize, Q>) -> Element {
    acc.into_iter().collect()
}

impl LieSuperalgebra {
    /// `sl(n)` with the trace form of the defining representation.
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        Ok(Self::from_matrices(Family::Sl(n)))
    }

    /// `psl(n|n)` with the supertrace form. Brackets are taken in `gl(n|n)`
    /// and reduced to the coset representative of ordinary trace zero.
    pub fn psl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        Ok(Self::from_matrices(Family::Psl(n)))
    }

    /// Look up a preset by name: `sl(3)`, `psl(2|2)`.
    pub fn preset(name: &str) -> Result<Self> {
        let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Precondition(format!("unknown algebra preset {name:?}"));
        let inner = |pre: &str| -> Option<&str> { s.strip_prefix(pre)?.strip_suffix(')') };
        if let Some(body) = inner("psl(") {
            let (a, b) = body.split_once('|').ok_or_else(bad)?;
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.parse().map_err(|_| bad())?;
            if a != b {
                return Err(bad());
            }
            return Self::psl(a);
        }
        if let Some(body) = inner("sl(") {
            return Self::sl(body.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }

    fn from_matrices(family: Family) -> Self {
        let (size, name) = match family {
            Family::Sl(n) => (n, format!("sl({n})")),
            Family::Psl(n) => (2 * n, format!("psl({n}|{n})")),
        };
        let mut kinds: Vec<BasisKind> = Vec::new();
        for i in 1..size {
            if matches!(family, Family::Psl(n) if i == n) {
                continue;
            }
            kinds.push(BasisKind::Cartan(i));
        }
        for i in 1..=size {
            for j in 1..=size {
                if i != j {
                    kinds.push(BasisKind::Root(i, j));
                }
            }
        }
        let odd_row = |i: usize| matches!(family, Family::Psl(n) if i > n);
        let basis: Vec<Generator> = kinds
            .iter()
            .map(|&kind| Generator {
                kind,
                odd: match kind {
                    BasisKind::Cartan(_) => false,
                    BasisKind::Root(i, j) => odd_row(i) != odd_row(j),
                },
            })
            .collect();
        let index = kinds.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        let mut alg = LieSuperalgebra {
            name,
            family,
            basis,
            index,
            brackets: Vec::new(),
            form: Vec::new(),
        };
        let mats: Vec<SparseMat> = (0..alg.dim()).map(|a| alg.sparse_matrix(a)).collect();
        let dim = alg.dim();
        let mut brackets = Vec::with_capacity(dim * dim);
        let mut form = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let ab = sparse_mul(&mats[a], &mats[b]);
                let ba = sparse_mul(&mats[b], &mats[a]);
                let s = sign(alg.basis[a].odd && alg.basis[b].odd);
                let mut comm = ab.clone();
                for (k, v) in ba {
                    let e = comm.entry(k).or_insert_with(Q::zero);
                    *e -= &s * v;
                }
                comm.retain(|_, v| !v.is_zero());
                brackets.push(
                    alg.decompose_sparse(&comm)
                        .expect("bracket of basis elements stays in the algebra"),
                );
                form.push(alg.supertrace_sparse(&ab));
            }
        }
        alg.brackets = brackets;
        alg.form = form;
        alg
    }

    fn sparse_matrix(&self, a: usize) -> SparseMat {
        let mut m = SparseMat::new();
        match self.basis[a].kind {
            BasisKind::Cartan(i) => {
                m.insert((i, i), Q::one());
                m.insert((i + 1, i + 1), -Q::one());
            }
            BasisKind::Root(i, j) => {
                m.insert((i, j), Q::one());
            }
        }
        m
    }

    fn row_sign(&self, i: usize) -> Q {
        match self.family {
            Family::Psl(n) if i > n => -Q::one(),
            _ => Q::one(),
        }
    }

    fn supertrace_sparse(&self, m: &SparseMat) -> Q {
        m.iter()
            .filter(|((i, j), _)| i == j)
            .map(|((i, _), v)| self.row_sign(*i) * v)
            .sum()
    }

    /// Express a matrix (given sparsely) in the basis. For `psl(n|n)` the
    /// identity component is discarded first (ordinary-trace-zero
    /// representative); the remaining diagonal must be traceless per block.
    fn decompose_sparse(&self, m: &SparseMat) -> Result<Element> {
        let size = self.matrix_size();
        let mut acc = BTreeMap::new();
        let mut diag = vec![Q::zero(); size + 1];
        for (&(i, j), v) in m {
            if i == j {
                diag[i] += v;
            } else {
                add_into(&mut acc, self.index[&BasisKind::Root(i, j)], v.clone());
            }
        }
        if let Family::Psl(n) = self.family {
            let shift: Q = diag.iter().sum::<Q>() / q(2 * n as i64);
            for d in diag.iter_mut().skip(1) {
                *d -= &shift;
            }
        }
        let blocks: Vec<(usize, usize)> = match self.family {
            Family::Sl(n) => vec![(1, n)],
            Family::Psl(n) => vec![(1, n), (n + 1, 2 * n)],
        };
        for (lo, hi) in blocks {
            let mut running = Q::zero();
            for i in lo..hi {
                running += &diag[i];
                add_into(&mut acc, self.index[&BasisKind::Cartan(i)], running.clone());
            }
            running += &diag[hi];
            if !running.is_zero() {
                return Err(Error::Precondition(format!(
                    "diagonal block {lo}..{hi} is not traceless"
                )));
            }
        }
        Ok(finish(acc))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `n` for `psl(n|n)`.
    pub fn psl_rank(&self) -> Option<usize> {
        match self.family {
            Family::Psl(n) => Some(n),
            Family::Sl(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Side length of the defining (super)matrices.
    pub fn matrix_size(&self) -> usize {
        match self.family {
            Family::Sl(n) => n,
            Family::Psl(n) => 2 * n,
        }
    }

    pub fn basis(&self) -> &[Generator] {
        &self.basis
    }

    pub fn is_odd(&self, a: usize) -> bool {
        self.basis[a].odd
    }

    pub fn element_parity(&self, x: &Element) -> Option<bool> {
        let mut it = x.iter().map(|(a, _)| self.is_odd(*a));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn index_of(&self, kind: BasisKind) -> Option<usize> {
        self.index.get(&kind).copied()
    }

    pub fn generator_name(&self, a: usize) -> String {
        self.basis[a].kind.to_string()
    }

    pub fn bracket(&self, a: usize, b: usize) -> &Element {
        &self.brackets[a * self.dim() + b]
    }

    pub fn form(&self, a: usize, b: usize) -> &Q {
        &self.form[a * self.dim() + b]
    }

    /// Default level of the vacuum module.
    pub fn default_level(&self) -> Q {
        Q::one()
    }

    /// Basis of the positive nilpotent subalgebra: `E[i,j]` with `i < j`.
    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&a| matches!(self.basis[a].kind, BasisKind::Root(i, j) if i < j))
            .collect()
    }

    pub fn bracket_elements(&self, x: &Element, y: &Element) -> Element {
        let mut acc = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let c = ca * cb;
                for (k, v) in self.bracket(*a, *b) {
                    add_into(&mut acc, *k, &c * v);
                }
            }
        }
        finish(acc)
    }

    pub fn form_elements(&self, x: &Element, y: &Element) -> Q {
        let mut s = Q::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                s += ca * cb * self.form(*a, *b);
            }
        }
        s
    }

    pub fn basis_element(&self, a: usize) -> Element {
        vec![(a, Q::one())]
    }

    /// `E[i,j]` as an element (1-based matrix indices, `i != j`).
    pub fn e(&self, i: usize, j: usize) -> Result<usize> {
        self.index_of(BasisKind::Root(i, j))
            .ok_or_else(|| Error::UnknownGenerator(format!("E[{i},{j}]")))
    }

    pub fn h(&self, i: usize) -> Result<usize> {
        self.index_of(BasisKind::Cartan(i))
            .ok_or_else(|| Error::UnknownGenerator(format!("h[{i}]")))
    }

    /// `H[i,j] = E[i,i] - E[j,j]`, reduced into the algebra.
    pub fn h_ij(&self, i: usize, j: usize) -> Result<Element> {
        let size = self.matrix_size();
        if i == 0 || j == 0 || i > size || j > size {
            return Err(Error::UnknownGenerator(format!("H[{i},{j}]")));
        }
        let mut m = SparseMat::new();
        m.insert((i, i), Q::one());
        let e = m.entry((j, j)).or_insert_with(Q::zero);
        *e -= Q::one();
        m.retain(|_, v| !v.is_zero());
        self.decompose_sparse(&m)
            .map_err(|_| Error::UnknownGenerator(format!("H[{i},{j}]")))
    }

    /// `D[i,j] = [E[i,j], E[j,i]]`.
    pub fn d_ij(&self, i: usize, j: usize) -> Result<Element> {
        let a = self.e(i, j)?;
        let b = self.e(j, i)?;
        Ok(self.bracket(a, b).clone())
    }

    /// Embed an element as its defining matrix (trace-zero representative).
    pub fn to_matrix(&self, x: &Element) -> Matrix {
        let size = self.matrix_size();
        let mut m = Matrix::zeros(size, size);
        for (a, c) in x {
            for ((i, j), v) in self.sparse_matrix(*a) {
                m[(i - 1, j - 1)] += c * v;
            }
        }
        m
    }

    /// Inverse of [`to_matrix`] (modulo the identity for `psl`).
    pub fn from_matrix(&self, m: &Matrix) -> Result<Element> {
        let mut s = SparseMat::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    s.insert((i + 1, j + 1), m[(i, j)].clone());
                }
            }
        }
        self.decompose_sparse(&s)
    }

    pub fn format_element(&self, x: &Element) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|(a, c)| format!("{} {}", fmt_q(c), self.generator_name(*a)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Copy of the table with the sign of one ordered bracket flipped.
    /// Used for fault-injection runs of the structure checker.
    pub fn with_corrupted_bracket(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        let d = self.dim();
        for (_, c) in out.brackets[a * d + b].iter_mut() {
            *c = -c.clone();
        }
        if out.brackets[a * d + b].is_empty() {
            // flipping zero does nothing; plant a spurious term instead
            out.brackets[a * d + b] = vec![(0, Q::one())];
        }
        out.name = format!(
            "{}[corrupted {},{}]",
            self.name,
            self.generator_name(a),
            self.generator_name(b)
        );
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dim = self.dim();
        let names: Vec<String> = (0..dim).map(|a| self.generator_name(a)).collect();
        let mut brackets = Vec::new();
        let mut form = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                let br = self.bracket(a, b);
                if !br.is_empty() {
                    let value: Vec<(String, String)> = br.iter().map(|(k, c)| (names[*k].clone(), fmt_q(c))).collect();
                    brackets.push(serde_json::json!({"x": names[a], "y": names[b], "value": value}));
                }
                let f = self.form(a, b);
                if !f.is_zero() {
                    form.push(serde_json::json!({"x": names[a], "y": names[b], "value": fmt_q(f)}));
                }
            }
        }
        serde_json::json!({
            "name": self.name,
            "basis": names,
            "parities": self.basis.iter().map(|g| u8::from(g.odd)).collect::<Vec<_>>(),
            "brackets": brackets,
            "form": form,
        })
    }
}

fn sparse_mul(a: &SparseMat, b: &SparseMat) -> SparseMat {
    let mut out = SparseMat::new();
    for (&(i, k), va) in a {
        for (&(k2, j), vb) in b.range((k, 0)..(k + 1, 0)) {
            debug_assert_eq!(k, k2);
            let e = out.entry((i, j)).or_insert_with(Q::zero);
            *e += va * vb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: &'static str,
    pub elements: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub algebra: String,
    pub dim: usize,
    pub passed: bool,
    pub violations: Vec<Violation>,
}

const MAX_REPORTED: usize = 20;

/// Exhaustively verify super-antisymmetry, super-Jacobi, invariance and
/// parity/supersymmetry of the form.
pub fn check_structure(alg: &LieSuperalgebra) -> StructureReport {
    let dim = alg.dim();
    let name = |a: usize| alg.generator_name(a);
    let p = |a: usize| alg.is_odd(a);
    let mut violations = Vec::new();

    for a in 0..dim {
        for b in 0..dim {
            let s = sign(p(a) && p(b));
            let lhs = alg.bracket(a, b);
            let rhs: Element = alg.bracket(b, a).iter().map(|(k, c)| (*k, -&s * c)).collect();
            if lhs != &rhs {
                violations.push(Violation {
                    property: "super-antisymmetry",
                    elements: vec![name(a), name(b)],
                    residual: alg.format_element(&subtract(lhs, &rhs)),
                });
            }
            let f = alg.form(a, b);
            if p(a) != p(b) && !f.is_zero() {
                violations.push(Violation {
                    property: "form-parity",
                    elements: vec![name(a), name(b)],
                    residual: fmt_q(f),
                });
            }
            if f != &(&s * alg.form(b, a)) {
                violations.push(Violation {
                    property: "form-supersymmetry",
                    elements: vec![name(a), name(b)],
                    residual: fmt_q(&(f - &s * alg.form(b, a))),
                });
            }
        }
    }

    let triple: Vec<Violation> = (0..dim)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut out = Vec::new();
            for y in 0..dim {
                for z in 0..dim {
                    let yz = alg.bracket(y, z);
                    let zx = alg.bracket(z, x);
                    let xy = alg.bracket(x, y);
                    let mut acc = BTreeMap::new();
                    let terms = [
                        (x, yz, sign(p(x) && p(z))),
                        (y, zx, sign(p(x) && p(y))),
                        (z, xy, sign(p(y) && p(z))),
                    ];
                    for (outer, inner, s) in terms {
                        for (k, c) in inner {
                            for (r, v) in alg.bracket(outer, *k) {
                                add_into(&mut acc, *r, &s * c * v);
                            }
                        }
                    }
                    if !acc.is_empty() {
                        out.push(Violation {
                            property: "super-Jacobi",
                            elements: vec![name(x), name(y), name(z)],
                            residual: alg.format_element(&finish(acc)),
                        });
                    }
                    let left = alg.form_elements(xy, &alg.basis_element(z));
                    let right = alg.form_elements(&alg.basis_element(x), yz);
                    if left != right {
                        out.push(Violation {
                            property: "form-invariance",
                            elements: vec![name(x), name(y), name(z)],
                            residual: fmt_q(&(left - right)),
                        });
                    }
                }
            }
            out
        })
        .collect();
    violations.extend(triple);

    let passed = violations.is_empty();
    violations.truncate(MAX_REPORTED);
    StructureReport {
        algebra: alg.name().to_string(),
        dim,
        passed,
        violations,
    }
}

fn subtract(x: &Element, y: &Element) -> Element {
    let mut acc = BTreeMap::new();
    for (k, c) in x {
        add_into(&mut acc, *k, c.clone());
    }
    for (k, c) in y {
        add_into(&mut acc, *k, -c.clone());
    }
    finish(acc)
}

/// Compare every bracket with the dense matrix super-commutator. For
/// `psl(n|n)` the difference may be a multiple of the identity. Returns the
/// offending basis pairs.
pub fn matrix_oracle_mismatches(alg: &LieSuperalgebra) -> Vec<(String, String)> {
    let dim = alg.dim();
    let size = alg.matrix_size();
    let mats: Vec<Matrix> = (0..dim).map(|a| alg.to_matrix(&alg.basis_element(a))).collect();
    (0..dim)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mats = &mats;
            (0..dim).filter_map(move |b| {
                let s = sign(alg.is_odd(a) && alg.is_odd(b));
                let comm = mats[a].mul(&mats[b]).sub(&mats[b].mul(&mats[a]).scale(&s));
                let diff = comm.sub(&alg.to_matrix(alg.bracket(a, b)));
                let scalar = diff[(0, 0)].clone();
                let ok = match alg.family() {
                    Family::Sl(_) => diff.is_zero(),
                    Family::Psl(_) => diff.sub(&Matrix::identity(size).scale(&scalar)).is_zero(),
                };
                (!ok).then(|| (alg.generator_name(a), alg.generator_name(b)))
            })
        })
        .collect()
}
