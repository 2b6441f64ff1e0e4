//! Text grammars.
//!
//! ```text
//! state   := "0" | term (("+" | "-") term)*
//! term    := ["-"] [rational ["*"]] factor* "|0>"
//! factor  := gen "(" int ")"
//! gen     := "E[" i "," j "]" | "h[" i "]" | "H[" i "," j "]" | "D[" i "," j "]"
//! word    := (factor | "T")*
//! ```
//!
//! Matrices, weights and weight matrices are JSON arrays; matrix entries
//! are integers or `"p/q"` strings.

use num_traits::One;

use crate::affine::{ModeCalculus, OperatorWord, State, WordToken};
use crate::error::{Error, Result};
use crate::liesuper::{Element, LieSuperalgebra};
use crate::linalg::Matrix;
use crate::rational::{parse_q, Q};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn location(&self, at: usize) -> (usize, usize) {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let col = before
            .rfind('\n')
            .map_or(before.chars().count(), |k| before[k + 1..].chars().count())
            + 1;
        (line, col)
    }

    fn err_at(&self, at: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(at);
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        self.err_at(self.pos, message)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected {s:?}")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        let mut end = self.pos;
        let bytes = self.src.as_bytes();
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let text = &self.src[start..end];
        let v = text.parse::<i64>().map_err(|_| self.err("expected an integer"))?;
        self.pos = end;
        Ok(v)
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.integer()?;
        usize::try_from(v).map_err(|_| self.err_at(at, "index must be nonnegative"))
    }

    fn rational(&mut self) -> Result<Option<Q>> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'/') {
            end += 1;
        }
        if end == start {
            return Ok(None);
        }
        let text = &self.src[start..end];
        let v = parse_q(text).map_err(|_| self.err_at(start, format!("bad coefficient {text:?}")))?;
        self.pos = end;
        Ok(Some(v))
    }
}

/// One `gen(m)` factor.
fn factor(cur: &mut Cursor, alg: &LieSuperalgebra) -> Result<(Element, i64)> {
    let start = cur.pos;
    let elem = if cur.eat("E[") {
        let i = cur.index()?;
        cur.expect(",")?;
        let j = cur.index()?;
        cur.expect("]")?;
        alg.basis_element(alg.e(i, j)?)
    } else if cur.eat("h[") {
        let i = cur.index()?;
        cur.expect("]")?;
        alg.basis_element(alg.h(i)?)
    } else if cur.eat("H[") {
        let i = cur.index()?;
        cur.expect(",")?;
        let j = cur.index()?;
        cur.expect("]")?;
        alg.h_ij(i, j)?
    } else if cur.eat("D[") {
        let i = cur.index()?;
        cur.expect(",")?;
        let j = cur.index()?;
        cur.expect("]")?;
        alg.d_ij(i, j)?
    } else {
        return Err(cur.err_at(start, "expected a generator"));
    };
    cur.skip_ws();
    cur.expect("(")?;
    cur.skip_ws();
    let m = cur.integer()?;
    cur.skip_ws();
    cur.expect(")")?;
    Ok((elem, m))
}

fn starts_factor(cur: &Cursor) -> bool {
    ["E[", "h[", "H[", "D["].iter().any(|p| cur.rest().starts_with(p))
}

/// Parse a state; factors are applied right to left to the vacuum.
pub fn parse_state(alg: &LieSuperalgebra, level: &Q, src: &str) -> Result<State> {
    let calc = ModeCalculus::new(alg, level.clone());
    let mut cur = Cursor::new(src);
    cur.skip_ws();
    if cur.eat("0") && cur.at_end() {
        return Ok(calc.zero());
    }
    cur.pos = 0;
    let mut total = calc.zero();
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut neg = false;
        if cur.eat("-") {
            neg = true;
        } else if cur.eat("+") {
            if first {
                return Err(cur.err_at(cur.pos - 1, "unexpected '+'"));
            }
        } else if !first {
            return Err(cur.err("expected '+' or '-'"));
        }
        cur.skip_ws();
        let mut coef = cur.rational()?.unwrap_or_else(Q::one);
        if neg {
            coef = -coef;
        }
        cur.skip_ws();
        cur.eat("*");
        let mut factors = Vec::new();
        loop {
            cur.skip_ws();
            if !starts_factor(&cur) {
                break;
            }
            factors.push(factor(&mut cur, alg)?);
        }
        cur.skip_ws();
        cur.expect("|0>")?;
        let mut st = calc.vacuum();
        for (x, m) in factors.iter().rev() {
            st = calc.apply_element(x, *m, &st);
        }
        total = total.add(&st.scale(&coef));
        first = false;
        if cur.at_end() {
            break;
        }
    }
    Ok(total)
}

/// Parse an operator word.
pub fn parse_word(alg: &LieSuperalgebra, src: &str) -> Result<OperatorWord> {
    let mut cur = Cursor::new(src);
    let mut toks = Vec::new();
    while !cur.at_end() {
        if cur.rest().starts_with('T') && !cur.rest()[1..].starts_with('[') {
            cur.pos += 1;
            toks.push(WordToken::T);
            continue;
        }
        let (x, m) = factor(&mut cur, alg)?;
        if cur.peek().is_some_and(|c| !c.is_whitespace()) {
            return Err(cur.err("expected whitespace between tokens"));
        }
        toks.push(WordToken::Mode(x, m));
    }
    Ok(OperatorWord::new(toks))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn q_from_json(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) => n.as_i64().map(crate::rational::q).ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("entry {n} is not an integer"),
        }),
        other => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("matrix entry {other} is neither an integer nor a \"p/q\" string"),
        }),
    }
}

/// `[[a, b], [c, d]]` with integer or `"p/q"` entries.
pub fn parse_matrix(src: &str) -> Result<Matrix> {
    let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(src).map_err(json_error)?;
    let rows: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(q_from_json).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Matrix::from_rows(rows)
}

/// `[l1, ..., ln]`.
pub fn parse_weight(src: &str) -> Result<Vec<i64>> {
    serde_json::from_str(src).map_err(json_error)
}

/// `[[..], ..]` integer matrix, rows of equal length.
pub fn parse_int_matrix(src: &str) -> Result<Vec<Vec<i64>>> {
    let m: Vec<Vec<i64>> = serde_json::from_str(src).map_err(json_error)?;
    if let Some(first) = m.first() {
        if m.iter().any(|r| r.len() != first.len()) {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "rows differ in length".into(),
            });
        }
    }
    Ok(m)
}

pub fn format_matrix(m: &Matrix) -> String {
    serde_json::to_string(&m.to_strings()).expect("strings serialize")
}

/// Canonicalise a state given as text: `print(parse(x))`.
pub fn canonical_state_text(alg: &LieSuperalgebra, level: &Q, src: &str) -> Result<String> {
    Ok(crate::affine::format_state(alg, &parse_state(alg, level, src)?))
}

pub fn is_zero_text(s: &str) -> bool {
    s.trim() == "0"
}
