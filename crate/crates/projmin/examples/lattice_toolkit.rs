//! Lattices in Q^n: canonical bases, localization data, intersections.

use num_bigint::BigInt;

use projmin::arith::{Prime, Rational};
use projmin::lattice::{hermite_normal_form, smith_normal_form, Lattice};
use projmin::matrix::{IntMatrix, RatMatrix};

fn main() -> Result<(), projmin::Error> {
    let m = IntMatrix::from_i64_rows(&[&[4, 2], &[2, 4]]);
    println!("integer matrix rows: {:?}", (m.row(0), m.row(1)));
    let h = hermite_normal_form(&m)?;
    println!("row Hermite form:    {:?}", (h.row(0), h.row(1)));
    let (_, s, _) = smith_normal_form(&m)?;
    println!("Smith diagonal:      ({}, {})", s.get(0, 0), s.get(1, 1));

    // generators may be redundant and rational; the stored basis is the
    // content-1 Hermite form with the scale split off
    let gens = RatMatrix::from_rows(vec![
        vec![rat(1, 2), rat(0, 1)],
        vec![rat(0, 1), rat(3, 1)],
        vec![rat(1, 2), rat(3, 1)],
    ])?;
    let l = Lattice::from_generators(&gens)?;
    println!("\nlattice from generators: {l}");
    println!("scale {} times basis {:?}", l.scale(), (l.basis().row(0), l.basis().row(1)));
    println!("determinant: {}", l.det());

    for p in l.support()? {
        let data = l.localize(&p)?;
        println!("at p = {p}: elementary orders {:?}", data.elementary_orders());
    }
    let seven = Prime::from_u64(7)?;
    println!(
        "at p = 7: elementary orders {:?} (trivial: localization is Z_7^2)",
        l.localize(&seven)?.elementary_orders()
    );

    let other = Lattice::from_generators(&RatMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]))?;
    println!("\nintersection with {other}: {}", l.intersect(&other)?);
    println!(
        "contains (1/2, 3)? {}",
        l.contains(&[rat(1, 2), rat(3, 1)])?
    );
    println!("contains (1/2, 1)? {}", l.contains(&[rat(1, 2), rat(1, 1)])?);
    Ok(())
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
