//! End-to-end minimization: run the local search at every bad prime, glue the
//! local conjugators into a single rational one, and return one integral
//! model that attains every local minimum simultaneously.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{factor, ord_p, Prime, Rational};
use crate::error::Error;
use crate::forms::{HomogeneousLift, Model};
use crate::lattice::glue_local;
use crate::matrix::RatMatrix;
use crate::reduction::minimize_local;
use crate::resultant::resultant;
use crate::Result;

/// One prime's line in a reduction report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionRow {
    pub prime: Prime,
    /// `ord_p(Res)` of the content-normalized input.
    pub input_valuation: i64,
    /// Best valuation the bounded search found.
    pub best_valuation: i64,
    /// True iff the best valuation is zero.
    pub good_reduction: bool,
    /// True when the search radius ran out without certifying zero.
    pub radius_exhausted: bool,
}

/// Per-prime summary of a minimization run; empty when the input already has
/// unit resultant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub radius: u32,
    pub rows: Vec<ReductionRow>,
}

impl ReductionReport {
    pub fn all_good(&self) -> bool {
        self.rows.iter().all(|r| r.good_reduction)
    }

    /// Fixed-width table; numeric columns right-aligned.
    pub fn to_text(&self) -> String {
        if self.rows.is_empty() {
            return "(no bad primes)\n".to_string();
        }
        let headers = ["prime", "input_ord", "best_ord", "reduction", "exhausted"];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.prime.value().to_string(),
                    r.input_valuation.to_string(),
                    r.best_valuation.to_string(),
                    if r.good_reduction { "good" } else { "bad" }.to_string(),
                    if r.radius_exhausted { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..5)
            .map(|j| {
                cells
                    .iter()
                    .map(|row| row[j].len())
                    .chain([headers[j].len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let mut out = String::new();
        let mut push_row = |fields: [&str; 5]| {
            for (j, field) in fields.iter().enumerate() {
                if j > 0 {
                    out.push_str("  ");
                }
                // numbers right-aligned, verdicts left-aligned
                if j < 3 {
                    out.push_str(&" ".repeat(widths[j] - field.len()));
                    out.push_str(field);
                } else {
                    out.push_str(field);
                    if j < 4 {
                        out.push_str(&" ".repeat(widths[j] - field.len()));
                    }
                }
            }
            out.push('\n');
        };
        push_row(headers);
        for row in &cells {
            push_row([&row[0], &row[1], &row[2], &row[3], &row[4]]);
        }
        out
    }

    /// JSON array of row objects; primes are decimal strings so they stay
    /// lossless past 64 bits.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "prime": r.prime.value().to_string(),
                        "input_valuation": r.input_valuation,
                        "best_valuation": r.best_valuation,
                        "good_reduction": r.good_reduction,
                        "radius_exhausted": r.radius_exhausted,
                    })
                })
                .collect(),
        )
    }
}

/// Outcome of asking for an everywhere-unit-resultant model.
#[derive(Clone, Debug)]
pub enum EgrResult {
    /// A model whose resultant is ±1.
    UnitModel(Model),
    /// No such model within the search radius; the report says how close the
    /// search got at each prime.
    NoUnitModelFound(ReductionReport),
}

/// Minimizes `ord_p(Res)` at every bad prime and glues the local conjugators
/// into one global model.  The returned model has integer coefficients of
/// content 1 with the leading coefficient of the first form positive, and
/// for each bad prime its resultant valuation equals the local search's best
/// value exactly (zero at all other primes).
pub fn global_minimal_model(
    lift: &HomogeneousLift,
    radius: u32,
) -> Result<(Model, ReductionReport)> {
    let (content, normalized) = lift.content_normalized()?;
    let res0 = resultant(&normalized)?;
    if res0.is_zero() {
        return Err(Error::NotMorphism);
    }
    debug_assert!(res0.is_integer());
    let bad: Vec<Prime> = factor(&res0.to_integer())?.into_keys().collect();

    let mut rows = Vec::new();
    let mut generators: BTreeMap<Prime, RatMatrix> = BTreeMap::new();
    let mut scalar = Rational::one() / &content;
    let mut expected_res = Rational::one();
    for p in &bad {
        let local = minimize_local(&normalized, p, radius)?;
        rows.push(ReductionRow {
            prime: p.clone(),
            input_valuation: ord_p(&res0, p).finite(),
            best_valuation: local.valuation,
            good_reduction: local.valuation == 0,
            radius_exhausted: local.radius_exhausted,
        });
        generators.insert(p.clone(), local.model.conjugator().inverse()?);
        scalar *= local.model.scalar();
        expected_res *= crate::lattice::p_power(p, local.valuation);
    }

    let n = lift.num_vars();
    // B·Z^n localizes to A_p^{-1}·Z_p^n at each bad prime and to Z_q^n
    // elsewhere, so A = B^{-1} matches every local conjugator up to a
    // p-unimodular factor — checked before conjugating.
    let glued = glue_local(n, &generators)?;
    let conjugator = glued.column_basis().inverse()?;
    for (p, a_p_inv) in &generators {
        let v = a_p_inv.inverse()?.mul(&conjugator.inverse()?)?;
        assert!(
            v.is_p_unimodular(p),
            "global conjugator mismatches the local one at {p}"
        );
    }

    let model = Model::new(lift.clone(), conjugator, scalar)?;
    // the glued conjugate is integral and primitive up to sign; flip if the
    // leading coefficient came out negative
    let leading = model.lift().forms()[0]
        .coefficients_desc()
        .first()
        .cloned()
        .expect("morphisms have no zero forms");
    let model = if leading.is_negative() {
        Model::new(
            model.base().clone(),
            model.conjugator().clone(),
            -model.scalar().clone(),
        )?
    } else {
        model
    };

    let out_coeffs = model.lift().coefficient_list();
    assert!(
        out_coeffs.iter().all(|c| c.is_integer()),
        "global model must be integral"
    );
    let (out_content, _) = crate::arith::content_and_primitive(&out_coeffs)?;
    assert!(out_content.is_one(), "global model must be primitive");
    let out_res = resultant(model.lift())?;
    for row in &rows {
        assert_eq!(
            ord_p(&out_res, &row.prime).finite(),
            row.best_valuation,
            "glued model misses the local minimum at {}",
            row.prime
        );
    }
    assert_eq!(
        out_res.abs(),
        expected_res,
        "global model's resultant carries a prime outside the bad set"
    );

    Ok((model, ReductionReport { radius, rows }))
}

/// The global minimal model when it attains unit resultant at every bad
/// prime, or the report saying where the search fell short.
pub fn everywhere_good_reduction_model(lift: &HomogeneousLift, radius: u32) -> Result<EgrResult> {
    let (model, report) = global_minimal_model(lift, radius)?;
    if report.all_good() {
        debug_assert!(resultant(model.lift())?.abs().is_one());
        Ok(EgrResult::UnitModel(model))
    } else {
        Ok(EgrResult::NoUnitModelFound(report))
    }
}

/// Per-prime minimization summary without the model.
pub fn reduction_report(lift: &HomogeneousLift, radius: u32) -> Result<ReductionReport> {
    Ok(global_minimal_model(lift, radius)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Form;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(v: u64) -> Prime {
        Prime::from_u64(v).unwrap()
    }

    fn int_binary(f: [i64; 3], g: [i64; 3]) -> HomogeneousLift {
        let form = |c: [i64; 3]| {
            let terms: Vec<(Vec<u32>, Rational)> = [[2u32, 0], [1, 1], [0, 2]]
                .iter()
                .zip(c)
                .filter(|(_, n)| *n != 0)
                .map(|(e, n)| (e.to_vec(), rat(n, 1)))
                .collect();
            Form::new(2, 2, terms.into_iter().collect()).unwrap()
        };
        HomogeneousLift::new(vec![form(f), form(g)]).unwrap()
    }

    #[test]
    fn no_bad_primes_is_a_fixed_point() {
        let plain = int_binary([1, 0, 0], [0, 0, 1]);
        let (model, report) = global_minimal_model(&plain, 3).unwrap();
        assert_eq!(model.lift(), &plain);
        assert!(model.conjugator().is_identity());
        assert!(report.rows.is_empty());
        assert_eq!(report.to_text(), "(no bad primes)\n");
    }

    #[test]
    fn glues_two_primes_into_one_conjugator() {
        // (9x², 4y²) needs diag(1/9, 1) at 3 and diag(1, 4)-type data at 2;
        // glued, the conjugator class is diag(9,4)⁻¹ and the model (x², y²)
        let lift = int_binary([9, 0, 0], [0, 0, 4]);
        let (model, report) = global_minimal_model(&lift, 3).unwrap();
        assert_eq!(model.lift(), &int_binary([1, 0, 0], [0, 0, 1]));
        assert_eq!(resultant(model.lift()).unwrap().abs(), Rational::one());
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert!(row.good_reduction);
            assert!(!row.radius_exhausted);
            assert_eq!(row.best_valuation, 0);
        }
        assert_eq!(report.rows[0].prime, p(2));
        assert_eq!(report.rows[0].input_valuation, 4);
        assert_eq!(report.rows[1].prime, p(3));
        assert_eq!(report.rows[1].input_valuation, 4);
    }

    #[test]
    fn cross_term_reaches_unit_resultant() {
        let lift = int_binary([1, 0, 1], [0, 2, 0]);
        let (model, report) = global_minimal_model(&lift, 1).unwrap();
        assert_eq!(resultant(model.lift()).unwrap().abs(), Rational::one());
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].input_valuation, 2);
        assert_eq!(report.rows[0].best_valuation, 0);
    }

    #[test]
    fn gmm_is_idempotent_on_fixtures() {
        for lift in [
            int_binary([9, 0, 0], [0, 0, 4]),
            int_binary([1, 0, 1], [0, 2, 0]),
            int_binary([1, 0, 0], [0, 0, 4]),
            int_binary([2, 0, 1], [0, 0, 2]), // stays at valuation 2: still a fixed point
        ] {
            let (model, _) = global_minimal_model(&lift, 2).unwrap();
            let (again, _) = global_minimal_model(model.lift(), 2).unwrap();
            assert_eq!(again.lift(), model.lift());
            assert!(again.conjugator().is_identity());
        }
    }

    #[test]
    fn egr_splits_on_attained_valuation() {
        match everywhere_good_reduction_model(&int_binary([9, 0, 0], [0, 0, 4]), 3).unwrap() {
            EgrResult::UnitModel(m) => {
                assert_eq!(resultant(m.lift()).unwrap().abs(), Rational::one());
            }
            EgrResult::NoUnitModelFound(_) => panic!("diag(9,4) glues to a unit model"),
        }
        match everywhere_good_reduction_model(&int_binary([2, 0, 1], [0, 0, 2]), 2).unwrap() {
            EgrResult::UnitModel(_) => panic!("no unit model exists within radius 2"),
            EgrResult::NoUnitModelFound(report) => {
                assert_eq!(report.rows.len(), 1);
                assert_eq!(report.rows[0].prime, p(2));
                assert_eq!(report.rows[0].input_valuation, 4);
                assert_eq!(report.rows[0].best_valuation, 2);
                assert!(report.rows[0].radius_exhausted);
            }
        }
    }

    #[test]
    fn report_formats_are_deterministic() {
        let report = reduction_report(&int_binary([1, 0, 1], [0, 2, 0]), 3).unwrap();
        assert_eq!(
            report.to_text(),
            "prime  input_ord  best_ord  reduction  exhausted\n\
             \u{20}   2          2         0  good       no\n"
        );
        let json = report.to_json();
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            "[{\"best_valuation\":0,\"good_reduction\":true,\"input_valuation\":2,\
             \"prime\":\"2\",\"radius_exhausted\":false}]"
        );
    }

    #[test]
    fn scalar_and_conjugator_reproduce_the_model() {
        // the Model invariant end-to-end: lift == scalar·(A ∘ base ∘ A⁻¹)
        let lift = int_binary([9, 0, 0], [0, 0, 4]);
        let (model, _) = global_minimal_model(&lift, 3).unwrap();
        let rebuilt = Model::new(
            model.base().clone(),
            model.conjugator().clone(),
            model.scalar().clone(),
        )
        .unwrap();
        assert_eq!(rebuilt.lift(), model.lift());
        assert_eq!(model.base(), &lift);
    }

    #[test]
    fn rational_inputs_are_normalized_first() {
        // same morphism as (9x², 4y²) up to content
        let lift = HomogeneousLift::new(vec![
            Form::new(2, 2, [(vec![2, 0], rat(9, 2))].into_iter().collect()).unwrap(),
            Form::new(2, 2, [(vec![0, 2], rat(2, 1))].into_iter().collect()).unwrap(),
        ])
        .unwrap();
        let (model, _) = global_minimal_model(&lift, 3).unwrap();
        assert_eq!(model.lift(), &int_binary([1, 0, 0], [0, 0, 1]));
    }
}
