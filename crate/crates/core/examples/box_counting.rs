//! Grid box counts N_m, the subadditive estimate min a_m/m and the spectral enclosure.
use relent::gallery::{gallery, Params};
use relent::mahavier::{entropy_sequence, resolution_sweep};

fn main() {
    for name in ["full_shift", "counterexample", "tent", "H_ab"] {
        let g = gallery(name, &Params::default()).unwrap();
        let rep = entropy_sequence(&g, 32, 8).unwrap();
        println!(
            "{name:>14}: N_1..N_4 = {:?}  min a_m/m = {:.4}  log ρ ∈ [{:.6}, {:.6}]  subadditive: {}",
            rep.counts.iter().take(4).map(|c| c.to_string()).collect::<Vec<_>>(),
            rep.estimate,
            rep.spectral.lower,
            rep.spectral.upper,
            rep.subadditive
        );
    }
    let tent = gallery("tent", &Params::default()).unwrap();
    println!("\ntent resolution sweep:");
    for (n, est) in resolution_sweep(&tent, &[8, 32, 128, 512]).unwrap() {
        println!("  n = {n:>3}: {:.9}", est.value);
    }
    println!("\nCSV for the full shift:\n{}", entropy_sequence(&gallery("full_shift", &Params::default()).unwrap(), 2, 5).unwrap().to_csv());
}
