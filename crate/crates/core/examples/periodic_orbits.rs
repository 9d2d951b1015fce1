//! Exact periodic-orbit census, with a proof when one applies.
use relent::gallery::{gallery, Params};
use relent::orbits::{cycles_of_finite, orbit_census};

fn main() {
    for name in ["tent", "H_thm2", "taletoti", "joj5_B"] {
        let g = gallery(name, &Params::default()).unwrap();
        let census = orbit_census(&g, 6).unwrap();
        println!("{name}: {} orbit(s) up to period 6, {:?}", census.orbits.len(), census.proof_level);
        for o in census.orbits.iter().take(5) {
            let pts: Vec<String> = o.points.iter().map(|p| p.to_string()).collect();
            println!("  period {}: ({})", o.period, pts.join(", "));
        }
        if let Some(arg) = &census.argument {
            println!("  argument: {arg}");
        }
    }
    let gc = gallery("counterexample", &Params::default()).unwrap();
    println!("counterexample simple cycles: {:?}", cycles_of_finite(&gc).unwrap().iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
}
