//! Gluing prescribed local lattices and factoring adelic matrices.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use projmin::arith::{Prime, Rational};
use projmin::lattice::{adelic_factorize, glue_local, AdeleMatrix};
use projmin::matrix::RatMatrix;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

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
    let three = Prime::from_u64(3)?;

    // one lattice in Q^2 whose localization at 2 is spanned by (1/2, 0), (0, 1)
    // and whose localization at 3 is spanned by (1, 0), (0, 3)
    let mut data = BTreeMap::new();
    data.insert(
        two.clone(),
        RatMatrix::from_rows(vec![vec![rat(1, 2), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]])?,
    );
    data.insert(three.clone(), RatMatrix::from_i64_rows(&[&[1, 0], &[0, 3]]));
    let glued = glue_local(2, &data)?;
    println!("glued lattice: {glued}");
    for p in [&two, &three] {
        println!("  orders at {p}: {:?}", glued.localize(p)?.elementary_orders());
    }

    // an adelic matrix: a prescribed component at 2, identity elsewhere
    let mut entries = BTreeMap::new();
    entries.insert(
        two.clone(),
        RatMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]),
    );
    let a = AdeleMatrix::new(2, entries)?;

    // split off a single rational matrix so the remaining family is
    // integral with unit determinant at every prime
    let (c, b) = adelic_factorize(&a)?;
    println!("\nfactorizing the family with one entry at 2:");
    println!("rational part b:        {}", rows(&b));
    println!("unimodular part c at 2: {}", rows(c.component(&two)));
    println!("tail of c:              {}", rows(c.tail()));

    let product = c.mul(&AdeleMatrix::principal(&b)?)?;
    println!("c · b reassembles the input: {}", product == a);
    for q in [2u64, 3, 5, 7] {
        let p = Prime::from_u64(q)?;
        println!(
            "  component at {q} is {q}-unimodular: {}",
            c.component(&p).is_p_unimodular(&p)
        );
    }
    Ok(())
}
