//! One integral model that is minimal at every prime simultaneously.

use projmin::forms::{parse_map, render_map};
use projmin::matrix::RatMatrix;
use projmin::pipeline::{everywhere_good_reduction_model, global_minimal_model, EgrResult};
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
    let lift = parse_map(
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["9*x^2", "4*y^2"]}"#,
    )?;
    println!("input: {lift}");
    println!("Res = {}\n", resultant(&lift)?);

    let (model, report) = global_minimal_model(&lift, 3)?;
    println!("global minimal model: {}", model.lift());
    println!("conjugator: {}", rows(model.conjugator()));
    println!("scalar: {}", model.scalar());
    println!("Res = {}", resultant(model.lift())?);
    println!("{}", report.to_text());

    // the same model in the JSON exchange format
    println!("{}\n", render_map(model.lift()));

    // everywhere-good-reduction search, including an honest failure
    for source in [
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["x^2 + y^2", "2*x*y"]}"#,
        r#"{"N": 1, "d": 2, "coords": ["x", "y"], "forms": ["2*x^2 + y^2", "2*y^2"]}"#,
    ] {
        let candidate = parse_map(source)?;
        println!("candidate: {candidate}");
        match everywhere_good_reduction_model(&candidate, 2)? {
            EgrResult::UnitModel(m) => {
                println!("unit-resultant model: {} (Res = {})\n", m.lift(), resultant(m.lift())?)
            }
            EgrResult::NoUnitModelFound(r) => {
                println!("no unit-resultant model within radius 2:\n{}", r.to_text())
            }
        }
    }
    Ok(())
}
