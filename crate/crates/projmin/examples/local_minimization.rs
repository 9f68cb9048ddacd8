//! Minimizing ord_p of the resultant over lattice classes at one prime.

use projmin::arith::{ord_p, Prime};
use projmin::forms::parse_map;
use projmin::matrix::RatMatrix;
use projmin::reduction::{bad_primes, minimize_local, neighbor_moves};
use projmin::resultant::resultant;

fn rows(m: &RatMatrix) -> String {
    let body: Vec<String> = (0..m.n_rows())
        .map(|i| {
            let cells: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", body.join(", "))
}

fn main() -> Result<(), projmin::Error> {
    let two = Prime::from_u64(2)?;

    let lift = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["x^2", "4*y^2"]}"#,
    )?;
    println!("lift: {lift}");
    let bad: Vec<String> = bad_primes(&lift)?.iter().map(ToString::to_string).collect();
    println!("bad primes: {}", bad.join(" "));
    println!(
        "ord_2(Res) before: {}",
        ord_p(&resultant(&lift)?, &two).finite()
    );

    // each neighbor move rescales one index-p sublattice direction; the
    // search walks the class graph breadth-first
    println!("neighbor moves at p = 2: {}", neighbor_moves(2, &two).len());

    let found = minimize_local(&lift, &two, 2)?;
    println!("\nafter searching radius 2:");
    println!("  model: {}", found.model.lift());
    println!("  conjugator: {}", rows(found.model.conjugator()));
    println!("  scalar: {}", found.model.scalar());
    println!("  ord_2(Res) attained: {}", found.valuation);
    println!("  classes visited: {}", found.visited);
    println!("  radius exhausted: {}", found.radius_exhausted);

    // this one cannot reach a 2-adic unit resultant; the report says so
    // instead of pretending otherwise
    let stuck = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["2*x^2 + y^2", "2*y^2"]}"#,
    )?;
    let honest = minimize_local(&stuck, &two, 2)?;
    println!("\nlift: {stuck}");
    println!("  best model: {}", honest.model.lift());
    println!("  ord_2(Res) attained: {}", honest.valuation);
    println!("  radius exhausted: {}", honest.radius_exhausted);
    Ok(())
}
