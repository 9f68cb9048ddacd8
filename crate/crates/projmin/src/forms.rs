//! Homogeneous forms, lifts of projective endomorphisms, models, and
//! reduction modulo a prime.
//!
//! A lift of an endomorphism of `P^N` is a tuple of `N+1` forms of a common
//! degree `d >= 1` in `N+1` variables. Conjugation by an invertible matrix
//! `A` acts as `Φ ↦ A ∘ Φ ∘ A^{-1}`, expanded exactly (the inverse is
//! computed as adjugate over determinant, then substituted symbolically).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{content_and_primitive, ord_p, Prime, Rational, Valuation};
use crate::error::Error;
use crate::matrix::RatMatrix;
use crate::Result;

pub use crate::parse::{parse_map, render_map};

/// Monomial exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// Sparse polynomial scratch representation used during expansion.
pub(crate) type TermMap = BTreeMap<Exponents, Rational>;

pub(crate) fn term_map_add(acc: &mut TermMap, exps: Exponents, coef: Rational) {
    if coef.is_zero() {
        return;
    }
    match acc.entry(exps) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += coef;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(coef);
        }
    }
}

pub(crate) fn term_map_mul(a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let exps: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            term_map_add(&mut out, exps, ca * cb);
        }
    }
    out
}

fn term_map_pow(base: &TermMap, e: u32) -> TermMap {
    assert!(e >= 1);
    let mut acc = base.clone();
    for _ in 1..e {
        acc = term_map_mul(&acc, base);
    }
    acc
}

/// Variable names used when rendering a lift that has no remembered names.
pub fn canonical_coords(num_vars: usize) -> Vec<String> {
    match num_vars {
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (0..num_vars).map(|i| format!("x{i}")).collect(),
    }
}

/// A homogeneous form over `Q`: nonzero sparse terms, all of one degree.
///
/// The zero form is representable (no terms) and carries its declared degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    num_vars: usize,
    degree: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Form {
    pub fn new(num_vars: usize, degree: usize, terms: BTreeMap<Exponents, Rational>) -> Result<Self> {
        for (exps, coef) in &terms {
            if exps.len() != num_vars {
                return Err(Error::Invalid(format!(
                    "exponent vector {exps:?} does not have {num_vars} entries"
                )));
            }
            if exps.iter().map(|&e| e as usize).sum::<usize>() != degree {
                return Err(Error::Invalid(format!(
                    "term {exps:?} does not have degree {degree}"
                )));
            }
            if coef.is_zero() {
                return Err(Error::Invalid("zero coefficient stored".into()));
            }
        }
        Ok(Form {
            num_vars,
            degree,
            terms,
        })
    }

    /// Builds from a scratch term map, dropping exact zeros.
    pub(crate) fn from_term_map(num_vars: usize, degree: usize, terms: TermMap) -> Result<Self> {
        Form::new(
            num_vars,
            degree,
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        )
    }

    pub fn zero(num_vars: usize, degree: usize) -> Self {
        Form {
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Convenience constructor from `(coefficient, exponents)` pairs.
    pub fn from_terms(num_vars: usize, degree: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        let mut map = TermMap::new();
        for (coef, exps) in terms {
            term_map_add(
                &mut map,
                exps.to_vec(),
                Rational::from_integer(BigInt::from(*coef)),
            );
        }
        Form::from_term_map(num_vars, degree, map)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficients in descending lexicographic exponent order (the display
    /// order, leading term first).
    pub fn coefficients_desc(&self) -> Vec<Rational> {
        self.terms.iter().rev().map(|(_, c)| c.clone()).collect()
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.num_vars {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.num_vars
            )));
        }
        let mut acc = Rational::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    #[cfg(test)]
    pub(crate) fn term_map(&self) -> TermMap {
        self.terms.clone()
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Result<Form> {
        let mut map = TermMap::new();
        for (exps, coef) in &self.terms {
            term_map_add(&mut map, exps.clone(), f(coef));
        }
        Form::from_term_map(self.num_vars, self.degree, map)
    }

    /// Renders one term as `coef*mono` with the usual cosmetic rules.
    fn render_term(exps: &Exponents, coef: &Rational, coords: &[String]) -> String {
        let mono: Vec<String> = exps
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
        let mono = mono.join("*");
        if mono.is_empty() {
            coef.to_string()
        } else if coef.is_one() {
            mono
        } else {
            format!("{coef}*{mono}")
        }
    }

    /// Canonical text rendering: terms in descending lexicographic order of
    /// exponents, explicit `*`, `^` for powers, exact rational coefficients.
    /// Parsing this string back reproduces the form bit for bit.
    pub fn render(&self, coords: &[String]) -> String {
        assert_eq!(coords.len(), self.num_vars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exps, coef)) in self.terms.iter().rev().enumerate() {
            let mag = coef.abs();
            let piece = Form::render_term(exps, &mag, coords);
            if i == 0 {
                if coef.is_negative() {
                    out.push('-');
                }
                out.push_str(&piece);
            } else {
                out.push_str(if coef.is_negative() { " - " } else { " + " });
                out.push_str(&piece);
            }
        }
        out
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form({})", self.render(&canonical_coords(self.num_vars)))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&canonical_coords(self.num_vars)))
    }
}

/// A homogeneous lift of an endomorphism of `P^N`: `N+1` forms of one
/// degree `d >= 1` in `N+1` variables, not all zero.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousLift {
    forms: Vec<Form>,
}

impl HomogeneousLift {
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::Invalid(
                "a lift needs at least two forms (N >= 1)".into(),
            ));
        }
        let num_vars = forms[0].num_vars();
        let degree = forms[0].degree();
        if num_vars != forms.len() {
            return Err(Error::Invalid(format!(
                "{} forms but {} variables",
                forms.len(),
                num_vars
            )));
        }
        if degree == 0 {
            return Err(Error::Invalid("degree must be at least 1".into()));
        }
        for f in &forms {
            if f.num_vars() != num_vars {
                return Err(Error::Invalid("mixed variable counts".into()));
            }
            if f.degree() != degree {
                return Err(Error::DegreeMismatch(degree, f.degree()));
            }
        }
        if forms.iter().all(|f| f.is_zero()) {
            return Err(Error::ZeroLift);
        }
        Ok(HomogeneousLift { forms })
    }

    /// Projective dimension `N`.
    pub fn n(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.forms[0].degree()
    }

    pub fn num_vars(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.forms.iter().map(|f| f.evaluate(point)).collect()
    }

    /// All coefficients, forms in order, each form's terms leading-first.
    pub fn coefficient_list(&self) -> Vec<Rational> {
        self.forms
            .iter()
            .flat_map(|f| f.coefficients_desc())
            .collect()
    }

    /// Minimum p-adic order over all coefficients (infinite never occurs:
    /// a lift has a nonzero form).
    pub fn min_ord(&self, p: &Prime) -> i64 {
        self.coefficient_list()
            .iter()
            .map(|c| ord_p(c, p))
            .min()
            .expect("lift has coefficients")
            .finite()
    }

    /// Splits off the joint content: `self = content * primitive` with the
    /// primitive lift integral, of coefficient gcd 1, and leading nonzero
    /// coefficient of the first nonzero form positive.
    pub fn content_normalized(&self) -> Result<(Rational, HomogeneousLift)> {
        let coeffs = self.coefficient_list();
        let (content, _) = content_and_primitive(&coeffs)?;
        let inv = Rational::one() / &content;
        let forms: Vec<Form> = self
            .forms
            .iter()
            .map(|f| f.map_coefficients(|c| c * &inv))
            .collect::<Result<_>>()?;
        let normalized = HomogeneousLift::new(forms)?;
        Ok((content, normalized))
    }

    pub fn render(&self, coords: &[String]) -> Vec<String> {
        self.forms.iter().map(|f| f.render(coords)).collect()
    }
}

impl fmt::Debug for HomogeneousLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = canonical_coords(self.num_vars());
        write!(f, "({})", self.render(&coords).join(", "))
    }
}

impl fmt::Display for HomogeneousLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = canonical_coords(self.num_vars());
        write!(f, "({})", self.render(&coords).join(", "))
    }
}

/// Conjugation `A ∘ Φ ∘ A^{-1}`, expanded exactly.
pub fn conjugate(lift: &HomogeneousLift, a: &RatMatrix) -> Result<HomogeneousLift> {
    let n = lift.num_vars();
    if a.n_rows() != n || a.n_cols() != n {
        return Err(Error::Dimension(a.n_rows(), a.n_cols(), n, n));
    }
    let a_inv = a.inverse()?;
    // Variable k is replaced by the linear form given by row k of A^{-1}.
    let linears: Vec<TermMap> = (0..n)
        .map(|k| {
            let mut poly = TermMap::new();
            for j in 0..n {
                let mut exps = vec![0u32; n];
                exps[j] = 1;
                term_map_add(&mut poly, exps, a_inv.get(k, j).clone());
            }
            poly
        })
        .collect();
    let substituted: Vec<TermMap> = lift
        .forms()
        .iter()
        .map(|f| {
            let mut acc = TermMap::new();
            for (exps, coef) in f.terms() {
                let mut term_poly = TermMap::new();
                term_poly.insert(vec![0u32; n], coef.clone());
                for (k, &e) in exps.iter().enumerate() {
                    if e > 0 {
                        term_poly = term_map_mul(&term_poly, &term_map_pow(&linears[k], e));
                    }
                }
                for (e, c) in term_poly {
                    term_map_add(&mut acc, e, c);
                }
            }
            acc
        })
        .collect();
    let degree = lift.degree();
    let forms: Vec<Form> = (0..n)
        .map(|i| {
            let mut acc = TermMap::new();
            for (j, sub) in substituted.iter().enumerate() {
                let aij = a.get(i, j);
                if aij.is_zero() {
                    continue;
                }
                for (e, c) in sub {
                    term_map_add(&mut acc, e.clone(), c * aij);
                }
            }
            Form::from_term_map(n, degree, acc)
        })
        .collect::<Result<_>>()?;
    HomogeneousLift::new(forms)
}

/// Multiplies every coefficient by a nonzero scalar.
pub fn scale(lift: &HomogeneousLift, c: &Rational) -> Result<HomogeneousLift> {
    if c.is_zero() {
        return Err(Error::ScaleByZero);
    }
    let forms: Vec<Form> = lift
        .forms()
        .iter()
        .map(|f| f.map_coefficients(|v| v * c))
        .collect::<Result<_>>()?;
    HomogeneousLift::new(forms)
}

/// A form over the residue field `F_p`, coefficients reduced into `[0, p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueForm {
    prime: Prime,
    num_vars: usize,
    degree: usize,
    terms: BTreeMap<Exponents, BigUint>,
}

impl ResidueForm {
    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigUint)> {
        self.terms.iter()
    }

    /// Evaluates over `F_p` (inputs taken mod p).
    pub fn evaluate(&self, point: &[BigUint]) -> BigUint {
        assert_eq!(point.len(), self.num_vars);
        let p = self.prime.value();
        let mut acc = BigUint::zero();
        for (exps, coef) in &self.terms {
            let mut term = coef.clone();
            for (x, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = term * x % p;
                }
            }
            acc = (acc + term) % p;
        }
        acc
    }
}

/// Reduces every coefficient mod p. Fails (naming the coefficient) when any
/// coefficient has negative p-adic order; zero residues are dropped.
pub fn reduce_mod_p(lift: &HomogeneousLift, p: &Prime) -> Result<Vec<ResidueForm>> {
    let p_int = p.to_bigint();
    // Fermat exponent p - 2; for p = 2 this is 0 and modpow gives 1, the
    // correct inverse of the only unit in F_2.
    let fermat_exp = p.value() - BigUint::from(2u32);
    lift.forms()
        .iter()
        .map(|f| {
            let mut terms = BTreeMap::new();
            for (exps, coef) in f.terms() {
                if ord_p(coef, p) < Valuation::Finite(0) {
                    return Err(Error::NotIntegral {
                        coefficient: coef.to_string(),
                        prime: p.value().clone(),
                    });
                }
                let num = coef.numer().mod_floor(&p_int).magnitude().clone();
                let den = coef.denom().mod_floor(&p_int).magnitude().clone();
                // denominator is a p-unit here; invert by Fermat.
                let den_inv = den.modpow(&fermat_exp, p.value());
                let residue = num * den_inv % p.value();
                if !residue.is_zero() {
                    terms.insert(exps.clone(), residue);
                }
            }
            Ok(ResidueForm {
                prime: p.clone(),
                num_vars: f.num_vars(),
                degree: f.degree(),
                terms,
            })
        })
        .collect()
}

/// A model of a lift: the exact identity
/// `lift == scalar · (conjugator ∘ base ∘ conjugator^{-1})`, established by
/// construction (the right side is expanded to produce `lift`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    base: HomogeneousLift,
    conjugator: RatMatrix,
    scalar: Rational,
    lift: HomogeneousLift,
}

impl Model {
    pub fn new(base: HomogeneousLift, conjugator: RatMatrix, scalar: Rational) -> Result<Self> {
        let lift = scale(&conjugate(&base, &conjugator)?, &scalar)?;
        Ok(Model {
            base,
            conjugator,
            scalar,
            lift,
        })
    }

    pub fn identity(base: HomogeneousLift) -> Self {
        let n = base.num_vars();
        Model {
            lift: base.clone(),
            base,
            conjugator: RatMatrix::identity(n),
            scalar: Rational::one(),
        }
    }

    pub fn base(&self) -> &HomogeneousLift {
        &self.base
    }

    pub fn conjugator(&self) -> &RatMatrix {
        &self.conjugator
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn lift(&self) -> &HomogeneousLift {
        &self.lift
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(v: u64) -> Prime {
        Prime::from_u64(v).unwrap()
    }

    /// (x^2 + y^2, 2xy)
    fn lift_sum_sq() -> HomogeneousLift {
        HomogeneousLift::new(vec![
            Form::from_terms(2, 2, &[(1, &[2, 0]), (1, &[0, 2])]).unwrap(),
            Form::from_terms(2, 2, &[(2, &[1, 1])]).unwrap(),
        ])
        .unwrap()
    }

    fn lift_diag(a: i64, b: i64) -> HomogeneousLift {
        HomogeneousLift::new(vec![
            Form::from_terms(2, 2, &[(a, &[2, 0])]).unwrap(),
            Form::from_terms(2, 2, &[(b, &[0, 2])]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn evaluate_matches_hand_expansion() {
        let l = lift_sum_sq();
        let out = l.evaluate(&[rat(1, 1), rat(2, 1)]).unwrap();
        assert_eq!(out, vec![rat(5, 1), rat(4, 1)]);
        let out = l.evaluate(&[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(out, vec![rat(0, 1), rat(0, 1)]);
        let cubes = HomogeneousLift::new(vec![
            Form::from_terms(2, 3, &[(1, &[3, 0])]).unwrap(),
            Form::from_terms(2, 3, &[(1, &[0, 3])]).unwrap(),
        ])
        .unwrap();
        let out = cubes.evaluate(&[rat(2, 1), rat(-1, 1)]).unwrap();
        assert_eq!(out, vec![rat(8, 1), rat(-1, 1)]);
    }

    #[test]
    fn conjugate_by_identity_is_identity() {
        let l = lift_sum_sq();
        assert_eq!(conjugate(&l, &RatMatrix::identity(2)).unwrap(), l);
    }

    #[test]
    fn conjugate_diagonal() {
        // diag(1, 3) on (x^2, 9 y^2) gives (x^2, 3 y^2).
        let l = lift_diag(1, 9);
        let a = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 3]]);
        assert_eq!(conjugate(&l, &a).unwrap(), lift_diag(1, 3));
    }

    #[test]
    fn conjugate_splits_sum_of_squares() {
        let a = RatMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        assert_eq!(conjugate(&lift_sum_sq(), &a).unwrap(), lift_diag(1, 1));
    }

    #[test]
    fn conjugate_rejects_singular() {
        let a = RatMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(conjugate(&lift_sum_sq(), &a).unwrap_err(), Error::Singular);
    }

    #[test]
    fn scale_examples() {
        let l = HomogeneousLift::new(vec![
            Form::new(
                2,
                2,
                [(vec![2, 0], rat(1, 2))].into_iter().collect(),
            )
            .unwrap(),
            Form::new(
                2,
                2,
                [(vec![0, 2], rat(1, 3))].into_iter().collect(),
            )
            .unwrap(),
        ])
        .unwrap();
        assert_eq!(scale(&l, &rat(6, 1)).unwrap(), lift_diag(3, 2));
        assert_eq!(scale(&l, &rat(0, 1)).unwrap_err(), Error::ScaleByZero);
        assert_eq!(
            scale(&scale(&l, &rat(-1, 1)).unwrap(), &rat(-1, 1)).unwrap(),
            l
        );
    }

    #[test]
    fn reduce_examples() {
        // (x^2 + 3 y^2, 7 x y) mod 3 -> (x^2, x y)
        let l = HomogeneousLift::new(vec![
            Form::from_terms(2, 2, &[(1, &[2, 0]), (3, &[0, 2])]).unwrap(),
            Form::from_terms(2, 2, &[(7, &[1, 1])]).unwrap(),
        ])
        .unwrap();
        let r = reduce_mod_p(&l, &p(3)).unwrap();
        assert_eq!(
            r[0].terms().collect::<Vec<_>>(),
            vec![(&vec![2, 0], &BigUint::one())]
        );
        assert_eq!(
            r[1].terms().collect::<Vec<_>>(),
            vec![(&vec![1, 1], &BigUint::one())]
        );

        // 1/2 is 2 mod 3
        let l = HomogeneousLift::new(vec![
            Form::new(2, 2, [(vec![2, 0], rat(1, 2))].into_iter().collect()).unwrap(),
            Form::from_terms(2, 2, &[(1, &[0, 2])]).unwrap(),
        ])
        .unwrap();
        let r = reduce_mod_p(&l, &p(3)).unwrap();
        assert_eq!(
            r[0].terms().collect::<Vec<_>>(),
            vec![(&vec![2, 0], &BigUint::from(2u32))]
        );

        // 1/3 is not 3-integral
        let l = HomogeneousLift::new(vec![
            Form::new(2, 2, [(vec![2, 0], rat(1, 3))].into_iter().collect()).unwrap(),
            Form::from_terms(2, 2, &[(1, &[0, 2])]).unwrap(),
        ])
        .unwrap();
        match reduce_mod_p(&l, &p(3)).unwrap_err() {
            Error::NotIntegral { coefficient, prime } => {
                assert_eq!(coefficient, "1/3");
                assert_eq!(prime, BigUint::from(3u32));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn residue_evaluation() {
        let l = lift_sum_sq();
        let r = reduce_mod_p(&l, &p(5)).unwrap();
        // (x^2+y^2)(2, 3) = 13 = 3 mod 5
        let point = vec![BigUint::from(2u32), BigUint::from(3u32)];
        assert_eq!(r[0].evaluate(&point), BigUint::from(3u32));
        assert_eq!(r[1].evaluate(&point), BigUint::from(2u32));
    }

    #[test]
    fn content_normalization() {
        let l = HomogeneousLift::new(vec![
            Form::from_terms(2, 2, &[(-6, &[2, 0])]).unwrap(),
            Form::from_terms(2, 2, &[(-10, &[0, 2])]).unwrap(),
        ])
        .unwrap();
        let (content, prim) = l.content_normalized().unwrap();
        assert_eq!(content, rat(-2, 1));
        assert_eq!(prim, lift_diag(3, 5));
        // Already-normalized input is a fixed point.
        let (c2, p2) = prim.content_normalized().unwrap();
        assert_eq!(c2, rat(1, 1));
        assert_eq!(p2, prim);
    }

    #[test]
    fn model_invariant_holds_by_construction() {
        let base = lift_sum_sq();
        let a = RatMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let m = Model::new(base.clone(), a, rat(3, 1)).unwrap();
        assert_eq!(m.lift(), &lift_diag(3, 3));
        assert_eq!(m.base(), &base);
        let id = Model::identity(base.clone());
        assert_eq!(id.lift(), &base);
    }

    #[test]
    fn zero_lift_rejected() {
        let z = Form::zero(2, 2);
        assert_eq!(
            HomogeneousLift::new(vec![z.clone(), z]).unwrap_err(),
            Error::ZeroLift
        );
    }

    #[test]
    fn degree_zero_rejected() {
        let c = Form::from_terms(2, 0, &[(1, &[0, 0])]).unwrap();
        assert!(HomogeneousLift::new(vec![c.clone(), c]).is_err());
    }

    #[test]
    fn rendering_round_trips_by_eye() {
        let f = Form::from_terms(2, 2, &[(1, &[2, 0]), (-2, &[1, 1]), (1, &[0, 2])]).unwrap();
        assert_eq!(f.render(&canonical_coords(2)), "x^2 - 2*x*y + y^2");
        let g = Form::new(2, 2, [(vec![2, 0], rat(-1, 2))].into_iter().collect()).unwrap();
        assert_eq!(g.render(&canonical_coords(2)), "-1/2*x^2");
        assert_eq!(Form::zero(2, 2).render(&canonical_coords(2)), "0");
    }

    fn arb_matrix_2() -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec(-5i64..6, 4).prop_filter_map("invertible", |v| {
            let m = RatMatrix::from_i64_rows(&[&[v[0], v[1]], &[v[2], v[3]]]);
            if m.det().is_zero() {
                None
            } else {
                Some(m)
            }
        })
    }

    fn arb_lift_2() -> impl Strategy<Value = HomogeneousLift> {
        proptest::collection::vec(-4i64..5, 6).prop_filter_map("nonzero lift", |v| {
            let f0 = Form::from_terms(2, 2, &[(v[0], &[2, 0]), (v[1], &[1, 1]), (v[2], &[0, 2])])
                .unwrap();
            let f1 = Form::from_terms(2, 2, &[(v[3], &[2, 0]), (v[4], &[1, 1]), (v[5], &[0, 2])])
                .unwrap();
            HomogeneousLift::new(vec![f0, f1]).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugation_is_a_left_action(l in arb_lift_2(), a in arb_matrix_2(), b in arb_matrix_2()) {
            let ab = a.mul(&b).unwrap();
            let lhs = conjugate(&l, &ab).unwrap();
            let rhs = conjugate(&conjugate(&l, &b).unwrap(), &a).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_commutes_with_evaluation(l in arb_lift_2(), a in arb_matrix_2(),
                                                x in -5i64..6, y in -5i64..6) {
            let conj = conjugate(&l, &a).unwrap();
            let point = vec![rat(x, 1), rat(y, 1)];
            let lhs = conj.evaluate(&point).unwrap();
            let pre = a.inverse().unwrap().mul_vec(&point).unwrap();
            let rhs = a.mul_vec(&l.evaluate(&pre).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scaling_commutes_with_conjugation(l in arb_lift_2(), a in arb_matrix_2(),
                                             num in 1i64..5, den in 1i64..5) {
            let c = rat(num, den);
            let lhs = scale(&conjugate(&l, &a).unwrap(), &c).unwrap();
            let rhs = conjugate(&scale(&l, &c).unwrap(), &a).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_is_additive_on_coefficients(u in arb_lift_2(), v in arb_lift_2()) {
            // Add termwise, then reduce; compare with reducing then adding.
            let q = p(7);
            let sum_forms: Vec<Form> = u.forms().iter().zip(v.forms()).map(|(a, b)| {
                let mut map = a.term_map();
                for (e, c) in b.term_map() {
                    term_map_add(&mut map, e, c);
                }
                Form::from_term_map(2, 2, map).unwrap()
            }).collect();
            if let Ok(sum) = HomogeneousLift::new(sum_forms) {
                let ru = reduce_mod_p(&u, &q).unwrap();
                let rv = reduce_mod_p(&v, &q).unwrap();
                let rs = reduce_mod_p(&sum, &q).unwrap();
                for i in 0..2 {
                    for (exps, coef) in rs[i].terms() {
                        let a = ru[i].terms.get(exps).cloned().unwrap_or_default();
                        let b = rv[i].terms.get(exps).cloned().unwrap_or_default();
                        prop_assert_eq!(coef.clone(), (a + b) % q.value());
                    }
                }
            }
        }
    }
}
