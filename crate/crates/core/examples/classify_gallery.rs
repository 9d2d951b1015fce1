//! Embedding verdicts for every gallery relation, with what is proven.
use relent::classify::classify_embedding;
use relent::gallery::{gallery_entry, Params, NAMES};

fn main() {
    for name in NAMES {
        let e = gallery_entry(name, &Params::default()).unwrap();
        let c = classify_embedding(&e.relation, &e.witnesses, &e.hints, 10, 64).unwrap();
        println!("{name:>14}: {:<18} {}", c.verdict.as_str(), c.reason);
    }
}
