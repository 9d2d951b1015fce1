//! Searching for a well-aligned pair and reading off the entropy lower bound.
use relent::gallery::{gallery, Params};
use relent::wellaligned::{certify_search, check_well_aligned};

fn main() {
    let h = gallery("H_ab", &Params::default()).unwrap();
    let search = certify_search(&h, &[]).unwrap();
    let cert = search.certificate.expect("H_ab is well aligned");
    println!("H_ab: b = {}, ψ = {}, ε = {}, uniform k = {}", cert.b, cert.psi, cert.epsilon, cert.uniform_k);
    println!("      entropy ≥ log 2/(ψ+2) = {:.6}", cert.lower_bound);
    cert.verify(&h).unwrap();

    // swapping the roles of L and R breaks the first alignment clause
    match check_well_aligned(&cert.r, &cert.l, &cert.b).unwrap() {
        Ok(()) => println!("swapped pair unexpectedly aligned"),
        Err(v) => println!("swapped pair: {v}"),
    }

    let gc = gallery("counterexample", &Params::default()).unwrap();
    let s = certify_search(&gc, &[]).unwrap();
    println!("counterexample: certificate {:?}, exhaustive search: {}", s.certificate.map(|c| c.b), s.exhaustive);
}
