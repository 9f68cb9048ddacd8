//! Exact resultants of homogeneous lifts.
//!
//! For `N = 1` the resultant is a Sylvester determinant. In general it is
//! computed as the Macaulay quotient `det(M) / det(M')` at the critical
//! degree `ν = (N+1)(d-1) + 1`: rows of `M` are indexed by monomials `m` of
//! degree `ν` and hold the coefficients of `(m / x_i^d) · F_i` where `i` is
//! the least index with `m_i >= d`; `M'` deletes the rows and columns of the
//! monomials divisible by `x_i^d` for exactly one `i`. The sign is pinned by
//! `Res(x_0^d, …, x_N^d) = +1`, which this construction yields by design
//! (the matrix of the diagonal lift is the identity).
//!
//! When the denominator determinant vanishes (a 0/0 specialization), the
//! forms are rewritten through a deterministic unimodular change of
//! variables — which leaves the resultant fixed — and the quotient is
//! retried a bounded number of times.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{content_and_primitive, Rational};
use crate::error::Error;
use crate::forms::{Exponents, Form, HomogeneousLift};
use crate::matrix::IntMatrix;
use crate::Result;

/// Retry budget for 0/0 Macaulay specializations.
const MAX_SPECIALIZATION_RETRIES: usize = 20;

type IntTermMap = BTreeMap<Exponents, BigInt>;

fn int_map_add(acc: &mut IntTermMap, exps: Exponents, coef: BigInt) {
    if coef.is_zero() {
        return;
    }
    let entry = acc.entry(exps).or_insert_with(BigInt::zero);
    *entry += coef;
    if entry.is_zero() {
        // cancelled; removing lazily keeps the borrow simple
        let dead: Vec<Exponents> = acc
            .iter()
            .filter(|(_, c)| c.is_zero())
            .map(|(e, _)| e.clone())
            .collect();
        for e in dead {
            acc.remove(&e);
        }
    }
}

fn int_map_mul(a: &IntTermMap, b: &IntTermMap) -> IntTermMap {
    let mut out = IntTermMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let exps: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            int_map_add(&mut out, exps, ca * cb);
        }
    }
    out
}

/// Substitutes `x_k ← Σ_j u[k][j] x_j` in every form: the composition `F ∘ U`.
fn compose_linear(forms: &[IntTermMap], u: &IntMatrix) -> Vec<IntTermMap> {
    let n = u.n_rows();
    let linears: Vec<IntTermMap> = (0..n)
        .map(|k| {
            let mut poly = IntTermMap::new();
            for j in 0..n {
                let mut exps = vec![0u32; n];
                exps[j] = 1;
                int_map_add(&mut poly, exps, u.get(k, j).clone());
            }
            poly
        })
        .collect();
    forms
        .iter()
        .map(|f| {
            let mut acc = IntTermMap::new();
            for (exps, coef) in f {
                let mut term = IntTermMap::new();
                term.insert(vec![0u32; n], coef.clone());
                for (k, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        term = int_map_mul(&term, &linears[k]);
                    }
                }
                for (e, c) in term {
                    int_map_add(&mut acc, e, c);
                }
            }
            acc
        })
        .collect()
}

fn xorshift(state: &mut u64) -> u64 {
    let mut x = *state;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    *state = x;
    x
}

/// Deterministic unimodular matrix with entries in `[-3, 3]` and
/// determinant exactly `+1`, distinct per attempt number.
fn unimodular_substitution(num_vars: usize, attempt: usize) -> IntMatrix {
    let mut state =
        0x9E37_79B9_7F4A_7C15u64 ^ (attempt as u64 + 1).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    if state == 0 {
        state = 1;
    }
    loop {
        let mut m = IntMatrix::zero(num_vars, num_vars);
        for i in 0..num_vars {
            for j in 0..num_vars {
                let v = (xorshift(&mut state) % 7) as i64 - 3;
                m.set(i, j, BigInt::from(v));
            }
        }
        let det = m.det_bareiss();
        if det.is_one() {
            return m;
        }
        if det == BigInt::from(-1) {
            // negate the first row: determinant flips to +1, entries stay small
            for j in 0..num_vars {
                let v = -m.get(0, j).clone();
                m.set(0, j, v);
            }
            return m;
        }
    }
}

/// Monomials of the given total degree in descending lexicographic order.
fn monomials_desc(num_vars: usize, total: u32) -> Vec<Exponents> {
    fn rec(out: &mut Vec<Exponents>, cur: &mut Exponents, idx: usize, remaining: u32) {
        if idx + 1 == cur.len() {
            cur[idx] = remaining;
            out.push(cur.clone());
            cur[idx] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            cur[idx] = e;
            rec(out, cur, idx + 1, remaining - e);
            cur[idx] = 0;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; num_vars];
    rec(&mut out, &mut cur, 0, total);
    out
}

/// One Macaulay quotient attempt; `None` signals the 0/0 case.
fn macaulay_quotient(forms: &[IntTermMap], num_vars: usize, d: usize) -> Option<BigInt> {
    let n = num_vars - 1;
    let nu = ((n + 1) * (d - 1) + 1) as u32;
    let monos = monomials_desc(num_vars, nu);
    let index: BTreeMap<&Exponents, usize> =
        monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let size = monos.len();
    let mut m = IntMatrix::zero(size, size);
    let mut non_reduced: Vec<usize> = Vec::new();
    for (r, mono) in monos.iter().enumerate() {
        let divisible = mono.iter().filter(|&&e| e as usize >= d).count();
        debug_assert!(divisible >= 1, "critical degree guarantees a divisor");
        if divisible >= 2 {
            non_reduced.push(r);
        }
        let i = mono
            .iter()
            .position(|&e| e as usize >= d)
            .expect("critical degree guarantees a divisor");
        let mut shifted = mono.clone();
        shifted[i] -= d as u32;
        for (exps, coef) in &forms[i] {
            let target: Exponents = shifted.iter().zip(exps).map(|(a, b)| a + b).collect();
            let c = index[&target];
            m.set(r, c, coef.clone());
        }
    }
    let det_minor = if non_reduced.is_empty() {
        BigInt::one()
    } else {
        m.submatrix(&non_reduced, &non_reduced).det_bareiss()
    };
    if det_minor.is_zero() {
        return None;
    }
    let det_full = m.det_bareiss();
    let (q, r) = det_full.div_rem(&det_minor);
    assert!(r.is_zero(), "Macaulay quotient must be exact");
    Some(q)
}

/// Macaulay quotient with retries over unimodular changes of variables.
fn macaulay_core(forms: &[IntTermMap], num_vars: usize, d: usize) -> Result<BigInt> {
    if let Some(v) = macaulay_quotient(forms, num_vars, d) {
        return Ok(v);
    }
    for attempt in 1..=MAX_SPECIALIZATION_RETRIES {
        let u = unimodular_substitution(num_vars, attempt);
        let transformed = compose_linear(forms, &u);
        if let Some(v) = macaulay_quotient(&transformed, num_vars, d) {
            return Ok(v);
        }
    }
    Err(Error::DegenerateSpecialization {
        retries: MAX_SPECIALIZATION_RETRIES,
    })
}

/// Raises a rational to an integer power; negative powers need nonzero base.
fn rational_pow(base: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        k >>= 1;
    }
    if e < 0 {
        assert!(!acc.is_zero(), "negative power of zero");
        acc = acc.recip();
    }
    acc
}

fn dense_binary_coeffs(f: &Form) -> Vec<Rational> {
    let d = f.degree();
    (0..=d)
        .map(|i| f.coefficient(&vec![(d - i) as u32, i as u32]))
        .collect()
}

fn sylvester_det(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let d = a.len() - 1;
    let mut m = IntMatrix::zero(2 * d, 2 * d);
    for r in 0..d {
        for (k, v) in a.iter().enumerate() {
            m.set(r, r + k, v.clone());
        }
        for (k, v) in b.iter().enumerate() {
            m.set(d + r, r + k, v.clone());
        }
    }
    m.det_bareiss()
}

/// Resultant of two binary forms of a common degree `d >= 1`, via the
/// `2d × 2d` Sylvester determinant, normalized so `Res(x^d, y^d) = +1`.
pub fn sylvester_resultant(f: &Form, g: &Form) -> Result<Rational> {
    if f.num_vars() != 2 {
        return Err(Error::NotBinary(f.num_vars()));
    }
    if g.num_vars() != 2 {
        return Err(Error::NotBinary(g.num_vars()));
    }
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch(f.degree(), g.degree()));
    }
    if f.degree() == 0 {
        return Err(Error::Invalid("resultant needs degree at least 1".into()));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Rational::zero());
    }
    let d = f.degree();
    let (cf, af) = content_and_primitive(&dense_binary_coeffs(f))?;
    let (cg, ag) = content_and_primitive(&dense_binary_coeffs(g))?;
    let det = sylvester_det(&af, &ag);
    // each form's content enters with exponent d (= d^N with N = 1)
    let scale = rational_pow(&cf, d as i64) * rational_pow(&cg, d as i64);
    Ok(scale * Rational::from_integer(det))
}

/// Resultant of a lift by the Macaulay quotient (any `N >= 1`).
pub fn macaulay_resultant(lift: &HomogeneousLift) -> Result<Rational> {
    if lift.forms().iter().any(|f| f.is_zero()) {
        return Ok(Rational::zero());
    }
    let num_vars = lift.num_vars();
    let d = lift.degree();
    let e = (d as u64)
        .checked_pow(lift.n() as u32)
        .and_then(|v| i64::try_from(v).ok())
        .ok_or_else(|| Error::Invalid("degree power overflows".into()))?;
    let mut contents = Vec::with_capacity(num_vars);
    let mut prim_maps: Vec<IntTermMap> = Vec::with_capacity(num_vars);
    for f in lift.forms() {
        let coeffs: Vec<Rational> = f.coefficients_desc();
        let (c, prim) = content_and_primitive(&coeffs)?;
        contents.push(c);
        // coefficients_desc pairs with terms in reverse order
        let map: IntTermMap = f
            .terms()
            .rev()
            .map(|(exps, _)| exps.clone())
            .zip(prim)
            .collect();
        prim_maps.push(map);
    }
    let core = macaulay_core(&prim_maps, num_vars, d)?;
    let mut scale = Rational::one();
    for c in &contents {
        scale *= rational_pow(c, e);
    }
    Ok(scale * Rational::from_integer(core))
}

/// Resultant of a lift: Sylvester for `N = 1`, Macaulay otherwise. The two
/// agree exactly where both apply.
pub fn resultant(lift: &HomogeneousLift) -> Result<Rational> {
    if lift.n() == 1 {
        sylvester_resultant(&lift.forms()[0], &lift.forms()[1])
    } else {
        macaulay_resultant(lift)
    }
}

/// Whether the lift defines a morphism of `P^N`: the forms have no common
/// nontrivial zero over the algebraic closure, i.e. the resultant is nonzero.
pub fn is_morphism(lift: &HomogeneousLift) -> Result<bool> {
    Ok(!resultant(lift)?.is_zero())
}

/// Exponent of `det(A)` in `Res(A ∘ Φ ∘ A^{-1}) = det(A)^e · Res(Φ)`:
/// `e = d^N - d^{N+1}`. Zero when `d = 1`.
pub fn conjugation_exponent(n: usize, d: usize) -> i64 {
    let dn = (d as i128)
        .checked_pow(n as u32)
        .expect("exponent overflow");
    let dn1 = dn.checked_mul(d as i128).expect("exponent overflow");
    i64::try_from(dn - dn1).expect("exponent overflow")
}

/// Exponent of `c` in `Res(c · Φ) = c^e · Res(Φ)`: `e = (N+1) d^N`.
pub fn scaling_exponent(n: usize, d: usize) -> i64 {
    let dn = (d as i128)
        .checked_pow(n as u32)
        .expect("exponent overflow");
    let e = (n as i128 + 1).checked_mul(dn).expect("exponent overflow");
    i64::try_from(e).expect("exponent overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{conjugate, scale};
    use crate::matrix::RatMatrix;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn binary_lift(f: &[(i64, &[u32])], g: &[(i64, &[u32])], d: usize) -> HomogeneousLift {
        HomogeneousLift::new(vec![
            Form::from_terms(2, d, f).unwrap(),
            Form::from_terms(2, d, g).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn sylvester_fixtures() {
        // diagonal normalization
        let l = binary_lift(&[(1, &[2, 0])], &[(1, &[0, 2])], 2);
        assert_eq!(resultant(&l).unwrap(), rat(1, 1));
        // scaling a diagonal pair
        let l = binary_lift(&[(3, &[2, 0])], &[(3, &[0, 2])], 2);
        assert_eq!(resultant(&l).unwrap(), rat(81, 1));
        // two linear forms: the determinant of their coefficients
        let l = binary_lift(&[(2, &[1, 0]), (3, &[0, 1])], &[(5, &[1, 0]), (7, &[0, 1])], 1);
        assert_eq!(resultant(&l).unwrap(), rat(-1, 1));
        // swapping x and y in the diagonal pair keeps the value for d = 2
        let l = binary_lift(&[(1, &[0, 2])], &[(1, &[2, 0])], 2);
        assert_eq!(resultant(&l).unwrap(), rat(1, 1));
    }

    #[test]
    fn sylvester_known_quadratic() {
        let l = binary_lift(&[(1, &[2, 0]), (1, &[0, 2])], &[(2, &[1, 1])], 2);
        assert_eq!(resultant(&l).unwrap(), rat(4, 1));
        // and tripling the lift multiplies by 3^4
        let tripled = scale(&l, &rat(3, 1)).unwrap();
        assert_eq!(resultant(&tripled).unwrap(), rat(324, 1));
    }

    #[test]
    fn common_factor_kills_the_resultant() {
        // (x·(x - y), y·(x - y)) share a linear factor
        let l = binary_lift(
            &[(1, &[2, 0]), (-1, &[1, 1])],
            &[(1, &[1, 1]), (-1, &[0, 2])],
            2,
        );
        assert_eq!(resultant(&l).unwrap(), rat(0, 1));
        assert!(!is_morphism(&l).unwrap());
    }

    #[test]
    fn zero_form_short_circuits() {
        let l = HomogeneousLift::new(vec![
            Form::from_terms(2, 2, &[(1, &[2, 0])]).unwrap(),
            Form::zero(2, 2),
        ])
        .unwrap();
        assert_eq!(resultant(&l).unwrap(), rat(0, 1));
    }

    #[test]
    fn rational_coefficients_enter_through_content() {
        // (x^2/2, y^2/3): contents 1/2 and 1/3, each to the power d = 2
        let l = HomogeneousLift::new(vec![
            Form::new(2, 2, [(vec![2, 0], rat(1, 2))].into_iter().collect()).unwrap(),
            Form::new(2, 2, [(vec![0, 2], rat(1, 3))].into_iter().collect()).unwrap(),
        ])
        .unwrap();
        assert_eq!(resultant(&l).unwrap(), rat(1, 36));
    }

    fn trinomial_lift(v: &[i64]) -> Option<HomogeneousLift> {
        let f0 = Form::from_terms(2, 2, &[(v[0], &[2, 0]), (v[1], &[1, 1]), (v[2], &[0, 2])])
            .unwrap();
        let f1 = Form::from_terms(2, 2, &[(v[3], &[2, 0]), (v[4], &[1, 1]), (v[5], &[0, 2])])
            .unwrap();
        HomogeneousLift::new(vec![f0, f1]).ok()
    }

    #[test]
    fn macaulay_diagonal_fixtures() {
        let l = HomogeneousLift::new(vec![
            Form::from_terms(3, 2, &[(1, &[2, 0, 0])]).unwrap(),
            Form::from_terms(3, 2, &[(1, &[0, 2, 0])]).unwrap(),
            Form::from_terms(3, 2, &[(1, &[0, 0, 2])]).unwrap(),
        ])
        .unwrap();
        assert_eq!(macaulay_resultant(&l).unwrap(), rat(1, 1));
        // scaled diagonal: (abc)^{d^N} = 6^4
        let l = HomogeneousLift::new(vec![
            Form::from_terms(3, 2, &[(1, &[2, 0, 0])]).unwrap(),
            Form::from_terms(3, 2, &[(2, &[0, 2, 0])]).unwrap(),
            Form::from_terms(3, 2, &[(3, &[0, 0, 2])]).unwrap(),
        ])
        .unwrap();
        assert_eq!(macaulay_resultant(&l).unwrap(), rat(1296, 1));
    }

    #[test]
    fn macaulay_linear_forms_give_the_determinant() {
        let l = HomogeneousLift::new(vec![
            Form::from_terms(3, 1, &[(1, &[1, 0, 0]), (2, &[0, 1, 0]), (3, &[0, 0, 1])])
                .unwrap(),
            Form::from_terms(3, 1, &[(4, &[1, 0, 0]), (5, &[0, 1, 0]), (6, &[0, 0, 1])])
                .unwrap(),
            Form::from_terms(3, 1, &[(7, &[1, 0, 0]), (8, &[0, 1, 0]), (10, &[0, 0, 1])])
                .unwrap(),
        ])
        .unwrap();
        assert_eq!(macaulay_resultant(&l).unwrap(), rat(-3, 1));
    }

    #[test]
    fn macaulay_three_variables_with_common_zero() {
        // (yz, xz, xy) vanish together at the coordinate points
        let l = HomogeneousLift::new(vec![
            Form::from_terms(3, 2, &[(1, &[0, 1, 1])]).unwrap(),
            Form::from_terms(3, 2, &[(1, &[1, 0, 1])]).unwrap(),
            Form::from_terms(3, 2, &[(1, &[1, 1, 0])]).unwrap(),
        ])
        .unwrap();
        match macaulay_resultant(&l) {
            Ok(v) => assert_eq!(v, rat(0, 1)),
            Err(e) => assert!(e.is_budget(), "unexpected error {e:?}"),
        }
    }

    #[test]
    fn exponent_closed_forms() {
        assert_eq!(conjugation_exponent(1, 2), -2);
        assert_eq!(conjugation_exponent(2, 2), -4);
        assert_eq!(conjugation_exponent(1, 3), -6);
        assert_eq!(conjugation_exponent(3, 1), 0);
        assert_eq!(conjugation_exponent(5, 1), 0);
        assert_eq!(scaling_exponent(1, 2), 4);
        assert_eq!(scaling_exponent(2, 2), 12);
        assert_eq!(scaling_exponent(1, 1), 2);
        assert_eq!(scaling_exponent(2, 3), 27);
    }

    #[test]
    fn unimodular_substitutions_are_unimodular() {
        for attempt in 1..=20 {
            for num_vars in 2..=4 {
                let u = unimodular_substitution(num_vars, attempt);
                assert!(u.det_bareiss().is_one());
                for e in 0..num_vars * num_vars {
                    let v = u.get(e / num_vars, e % num_vars);
                    assert!(num_traits::Signed::abs(v) <= BigInt::from(3));
                }
            }
        }
    }

    #[test]
    fn composition_with_unimodular_preserves_the_resultant() {
        let l = trinomial_lift(&[1, 0, 1, 0, 2, 0]).unwrap(); // (x^2+y^2, 2xy)
        let maps: Vec<IntTermMap> = l
            .forms()
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(e, c)| (e.clone(), c.numer().clone()))
                    .collect()
            })
            .collect();
        for attempt in 1..=5 {
            let u = unimodular_substitution(2, attempt);
            let composed = compose_linear(&maps, &u);
            let forms: Vec<Form> = composed
                .into_iter()
                .map(|m| {
                    Form::new(
                        2,
                        2,
                        m.into_iter()
                            .map(|(e, c)| (e, Rational::from_integer(c)))
                            .collect(),
                    )
                    .unwrap()
                })
                .collect();
            let composed_lift = HomogeneousLift::new(forms).unwrap();
            assert_eq!(
                resultant(&composed_lift).unwrap(),
                resultant(&l).unwrap(),
                "attempt {attempt}"
            );
        }
    }

    fn arb_matrix_2() -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec(-4i64..5, 4).prop_filter_map("invertible", |v| {
            let m = RatMatrix::from_i64_rows(&[&[v[0], v[1]], &[v[2], v[3]]]);
            if m.det().is_zero() {
                None
            } else {
                Some(m)
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn macaulay_agrees_with_sylvester(v in proptest::collection::vec(-6i64..7, 6)) {
            if let Some(l) = trinomial_lift(&v) {
                let s = sylvester_resultant(&l.forms()[0], &l.forms()[1]).unwrap();
                let m = macaulay_resultant(&l).unwrap();
                prop_assert_eq!(s, m);
            }
        }

        #[test]
        fn conjugation_law_binary_quadratics(v in proptest::collection::vec(-4i64..5, 6),
                                             a in arb_matrix_2()) {
            if let Some(l) = trinomial_lift(&v) {
                let before = resultant(&l).unwrap();
                let after = resultant(&conjugate(&l, &a).unwrap()).unwrap();
                let e = conjugation_exponent(1, 2);
                prop_assert_eq!(after, rational_pow(&a.det(), e) * before);
            }
        }

        #[test]
        fn scaling_law_binary_quadratics(v in proptest::collection::vec(-4i64..5, 6),
                                         num in -5i64..6, den in 1i64..5) {
            prop_assume!(num != 0);
            if let Some(l) = trinomial_lift(&v) {
                let c = rat(num, den);
                let before = resultant(&l).unwrap();
                let after = resultant(&scale(&l, &c).unwrap()).unwrap();
                let e = scaling_exponent(1, 2);
                prop_assert_eq!(after, rational_pow(&c, e) * before);
            }
        }

        #[test]
        fn left_multiplication_law(v in proptest::collection::vec(-3i64..4, 6),
                                   a in arb_matrix_2()) {
            // Res(A · Φ) = det(A)^{d^N} · Res(Φ): combine the forms linearly.
            if let Some(l) = trinomial_lift(&v) {
                let mixed: Vec<Form> = (0..2).map(|i| {
                    let mut map = crate::forms::TermMap::new();
                    for (j, f) in l.forms().iter().enumerate() {
                        for (exps, coef) in f.terms() {
                            crate::forms::term_map_add(&mut map, exps.clone(),
                                                       coef * a.get(i, j));
                        }
                    }
                    Form::from_term_map(2, 2, map).unwrap()
                }).collect();
                if let Ok(mixed_lift) = HomogeneousLift::new(mixed) {
                    let before = resultant(&l).unwrap();
                    let after = resultant(&mixed_lift).unwrap();
                    prop_assert_eq!(after, rational_pow(&a.det(), 2) * before);
                }
            }
        }
    }
}
