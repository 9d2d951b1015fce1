//! Replays the branching construction behind the entropy lower bound: from a
//! certificate, every height splits into two separated Mahavier prefixes.
use relent::gallery::{gallery, Params};
use relent::wellaligned::{certify, is_mahavier_prefix, pairwise_separated, Replayer};
use relent::Scalar;

fn main() {
    let h = gallery("H_ab", &Params::default()).unwrap();
    let cert = certify(&h, &[]).unwrap().unwrap();
    let rep = Replayer::new(&cert).unwrap();
    let t = Scalar::rational(1, 2);
    let br = rep.branch(std::slice::from_ref(&t)).unwrap();
    let show = |v: &[Scalar]| v.iter().map(|x| format!("{:.4}", x.to_f64())).collect::<Vec<_>>().join(" ");
    println!("from t = 1/2:\n  t0 branch: {}\n  t1 branch: {}", show(&br.left), show(&br.right));
    println!("  t1 − t0 = {} ≥ ε = {}", &br.t1 - &br.t0, cert.epsilon);
    for depth in [2, 4, 6] {
        let (prefixes, gap) = rep.tree(&t, depth).unwrap();
        let ok = prefixes.iter().all(|p| is_mahavier_prefix(&h, p)) && pairwise_separated(&prefixes);
        println!("depth {depth}: {} prefixes, all valid and separated: {ok}, min gap ~{:.4}", prefixes.len(), gap.to_f64());
    }
}
