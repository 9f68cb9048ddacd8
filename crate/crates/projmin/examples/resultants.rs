//! Resultants of homogeneous lifts: the two computation routes and the
//! morphism test.

use projmin::forms::parse_map;
use projmin::resultant::{is_morphism, macaulay_resultant, resultant, sylvester_resultant};

fn main() -> Result<(), projmin::Error> {
    let lift = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["x^2 + y^2", "2*x*y"]}"#,
    )?;
    println!("lift: {lift}");
    println!("resultant: {}", resultant(&lift)?);

    // the Sylvester determinant and the Macaulay quotient are independent
    // constructions; for binary forms both apply and must agree
    let f = &lift.forms()[0];
    let g = &lift.forms()[1];
    println!("  via Sylvester: {}", sylvester_resultant(f, g)?);
    println!("  via Macaulay:  {}", macaulay_resultant(&lift)?);

    // a common zero at (1 : -1) forces the resultant to vanish
    let degenerate = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["x^2 - y^2", "x^2 + x*y"]}"#,
    )?;
    println!("degenerate lift: {degenerate}");
    println!("resultant: {}", resultant(&degenerate)?);
    println!("morphism? {}", is_morphism(&degenerate)?);

    // three quadrics on P^2 with no common zero
    let plane = parse_map(
        r#"{"N": 2, "d": 2, "coords": ["x", "y", "z"],
            "forms": ["x^2 + y^2", "y^2 + z^2", "z^2 + x^2"]}"#,
    )?;
    println!("plane lift: {plane}");
    println!("resultant: {}", resultant(&plane)?);
    Ok(())
}
