//! Mapping a relation through a homeomorphism and transferring orbits and counts.
use relent::conjugacy::{apply_homeo, conjugate_orbit, entropy_transfer_check};
use relent::gallery::{gallery, joj5_phi, Params};
use relent::orbits::orbit_census;

fn main() {
    let b = gallery("joj5_B", &Params::default()).unwrap();
    let phi = joj5_phi();
    let a = apply_homeo(&b, &phi).unwrap();
    println!("φ(B) = A: {}", a == gallery("joj5_A", &Params::default()).unwrap());
    for n in [4, 16] {
        let t = entropy_transfer_check(&b, &a, &phi, n, 6).unwrap();
        println!("grid {}: {:?} mode, counts agree: {} ({:?})", t.grid, t.mode, t.agree, t.counts_g.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    for o in orbit_census(&b, 8).unwrap().orbits {
        let image = conjugate_orbit(&o, &phi, &a).unwrap();
        println!("orbit {:?} of B ↦ {:?} of A", o.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(), image.points.iter().map(|p| p.to_string()).collect::<Vec<_>>());
    }
    println!("\nφ as a file:\n{}", phi.to_json());
}
