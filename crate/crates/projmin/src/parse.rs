//! Map file format and the polynomial expression parser.
//!
//! A map file is a JSON object with keys `N` (projective dimension), `d`
//! (common degree), `coords` (N+1 distinct variable names) and `forms`
//! (N+1 polynomial expressions). Expressions support `+`, `-` (binary and
//! unary), `*`, `^` with nonnegative integer exponents, parentheses, and
//! exact rational literals written `a` or `a/b`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::Error;
use crate::forms::{canonical_coords, Exponents, Form, HomogeneousLift};
use crate::Result;

#[derive(Serialize, Deserialize)]
struct MapFile {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    coords: Vec<String>,
    forms: Vec<String>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a map file into a lift, checking shape, homogeneity, and that all
/// forms share the declared degree.
pub fn parse_map(text: &str) -> Result<HomogeneousLift> {
    let file: MapFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad map file: {e}")))?;
    if file.n < 1 {
        return Err(Error::Parse("N must be at least 1".into()));
    }
    if file.d < 1 {
        return Err(Error::Parse("d must be at least 1".into()));
    }
    let num_vars = file.n + 1;
    if file.coords.len() != num_vars {
        return Err(Error::Parse(format!(
            "expected {} coords for N = {}, found {}",
            num_vars,
            file.n,
            file.coords.len()
        )));
    }
    if file.forms.len() != num_vars {
        return Err(Error::Parse(format!(
            "expected {} forms for N = {}, found {}",
            num_vars,
            file.n,
            file.forms.len()
        )));
    }
    for c in &file.coords {
        if !is_identifier(c) {
            return Err(Error::Parse(format!("bad variable name {c:?}")));
        }
    }
    for (i, a) in file.coords.iter().enumerate() {
        if file.coords[..i].contains(a) {
            return Err(Error::Parse(format!("duplicate variable name {a:?}")));
        }
    }

    let mut parsed: Vec<(String, BTreeMap<Exponents, Rational>)> = Vec::new();
    for text in &file.forms {
        let terms = parse_polynomial(text, &file.coords)?;
        check_homogeneous(text, &terms, &file.coords)?;
        parsed.push((text.clone(), terms));
    }

    // All nonzero forms must agree on degree, and that degree must be d.
    let mut seen: Option<usize> = None;
    for (_, terms) in &parsed {
        if let Some(exps) = terms.keys().next() {
            let deg = exps.iter().map(|&e| e as usize).sum::<usize>();
            match seen {
                None => seen = Some(deg),
                Some(first) if first != deg => {
                    return Err(Error::DegreeMismatch(first, deg));
                }
                _ => {}
            }
        }
    }
    if let Some(deg) = seen {
        if deg != file.d {
            return Err(Error::DegreeMismatch(deg, file.d));
        }
    }

    let forms: Vec<Form> = parsed
        .into_iter()
        .map(|(_, terms)| Form::new(num_vars, file.d, terms))
        .collect::<Result<_>>()?;
    HomogeneousLift::new(forms)
}

/// Renders a lift back to the map file format with canonical variable names.
/// `parse_map(&render_map(&lift))` reproduces the lift exactly.
pub fn render_map(lift: &HomogeneousLift) -> String {
    let coords = canonical_coords(lift.num_vars());
    let file = MapFile {
        n: lift.n(),
        d: lift.degree(),
        coords: coords.clone(),
        forms: lift.render(&coords),
    };
    serde_json::to_string_pretty(&file).expect("map file serializes")
}

fn check_homogeneous(
    text: &str,
    terms: &BTreeMap<Exponents, Rational>,
    coords: &[String],
) -> Result<()> {
    let mut iter = terms.iter().rev();
    let reference = match iter.next() {
        Some((exps, _)) => exps,
        None => return Ok(()),
    };
    let expected = reference.iter().map(|&e| e as usize).sum::<usize>();
    for (exps, _) in iter {
        let found = exps.iter().map(|&e| e as usize).sum::<usize>();
        if found != expected {
            return Err(Error::NotHomogeneous {
                form: text.to_string(),
                term: render_monomial(exps, coords),
                found,
                reference: render_monomial(reference, coords),
                expected,
            });
        }
    }
    Ok(())
}

fn render_monomial(exps: &Exponents, coords: &[String]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                coords[i].clone()
            } else {
                format!("{}^{}", coords[i], e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Int(BigUint),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits
                    .parse::<BigUint>()
                    .map_err(|e| Error::Parse(format!("bad integer {digits:?}: {e}")))?;
                toks.push(Tok::Int(value));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in {text:?}"
                )));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    coords: &'a [String],
    text: &'a str,
}

type Poly = BTreeMap<Exponents, Rational>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, what: &str) -> Error {
        Error::Parse(format!("{} in {:?}", what, self.text))
    }

    fn num_vars(&self) -> usize {
        self.coords.len()
    }

    fn poly_const(&self, c: Rational) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.num_vars()], c);
        }
        p
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate_first = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = poly_neg(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = poly_add(acc, t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = poly_add(acc, poly_neg(t));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = crate::forms::term_map_mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let f = self.factor()?;
            return Ok(poly_neg(f));
        }
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = match self.bump() {
                Some(Tok::Int(v)) => v,
                _ => return Err(self.fail("expected integer exponent after '^'")),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| self.fail("exponent too large"))?;
            if e > 64 {
                return Err(self.fail("exponent too large"));
            }
            return Ok(poly_pow(&base, e, self.num_vars()));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly> {
        match self.bump() {
            Some(Tok::Int(num)) => {
                // Optional '/ INT' makes an exact rational literal.
                let mut value = Rational::from_integer(BigInt::from(num));
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let den = match self.bump() {
                        Some(Tok::Int(v)) => v,
                        _ => return Err(self.fail("expected integer after '/'")),
                    };
                    if den.is_zero() {
                        return Err(self.fail("division by zero"));
                    }
                    value /= Rational::from_integer(BigInt::from(den));
                }
                Ok(self.poly_const(value))
            }
            Some(Tok::Ident(name)) => {
                let idx = self
                    .coords
                    .iter()
                    .position(|c| *c == name)
                    .ok_or(Error::UnknownVariable(name))?;
                let mut exps = vec![0u32; self.num_vars()];
                exps[idx] = 1;
                let mut p = Poly::new();
                p.insert(exps, Rational::one());
                Ok(p)
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(self.fail("missing ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.fail("expected a number, variable, or '('")),
        }
    }
}

fn poly_add(mut a: Poly, b: Poly) -> Poly {
    for (e, c) in b {
        crate::forms::term_map_add(&mut a, e, c);
    }
    a
}

fn poly_neg(a: Poly) -> Poly {
    a.into_iter().map(|(e, c)| (e, -c)).collect()
}

fn poly_pow(base: &Poly, e: u32, num_vars: usize) -> Poly {
    if e == 0 {
        let mut p = Poly::new();
        p.insert(vec![0; num_vars], Rational::one());
        return p;
    }
    let mut acc = base.clone();
    for _ in 1..e {
        acc = crate::forms::term_map_mul(&acc, base);
    }
    acc
}

/// Parses a single polynomial expression in the given variables.
pub(crate) fn parse_polynomial(text: &str, coords: &[String]) -> Result<Poly> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        coords,
        text,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.fail("trailing input"));
    }
    Ok(poly)
}
