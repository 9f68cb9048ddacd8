//! How the resultant transforms under conjugation and scaling.
//!
//! For a degree-`d` lift on `P^N`:
//!   Res(A ∘ Φ ∘ A⁻¹) = det(A)^(d^N − d^(N+1)) · Res(Φ)
//!   Res(c · Φ)       = c^((N+1)·d^N)          · Res(Φ)

use num_bigint::BigInt;
use num_traits::One;

use projmin::arith::Rational;
use projmin::forms::{conjugate, parse_map, scale};
use projmin::matrix::RatMatrix;
use projmin::resultant::{conjugation_exponent, resultant, scaling_exponent};

fn pow(base: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn main() -> Result<(), projmin::Error> {
    let lift = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["x^2 + 3*y^2", "5*x*y"]}"#,
    )?;
    let res = resultant(&lift)?;
    println!("lift: {lift}");
    println!("Res = {res}");

    let a = RatMatrix::from_i64_rows(&[&[3, 1], &[1, 1]]);
    let conj = conjugate(&lift, &a)?;
    let c_exp = conjugation_exponent(lift.n(), lift.degree());
    println!("\nconjugator determinant {} and exponent {c_exp}:", a.det());
    println!("conjugated lift: {conj}");
    println!("Res(conjugate)          = {}", resultant(&conj)?);
    println!("det^exponent · Res      = {}", pow(&a.det(), c_exp) * &res);

    let c = Rational::new(BigInt::from(3), BigInt::from(2));
    let scaled = scale(&lift, &c)?;
    let e = scaling_exponent(lift.n(), lift.degree());
    println!("\nscalar {c} and exponent {e}:");
    println!("scaled lift: {scaled}");
    println!("Res(scaled)             = {}", resultant(&scaled)?);
    println!("c^exponent · Res        = {}", pow(&c, e) * &res);
    Ok(())
}
