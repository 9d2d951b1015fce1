//! Building relations by hand and using the JSON file format.
use relent::{AmbientInterval, Relation, Scalar, Segment};

fn main() {
    let q = Scalar::rational;
    // a graph piece y = 2x on [0, 1/2] and a vertical piece x = 1 for y ∈ [0, 1]
    let g = Relation::segments(
        AmbientInterval::unit(),
        vec![Segment::graph(q(2, 1), q(0, 1), q(0, 1), q(1, 2)), Segment::vertical(q(1, 1), q(0, 1), q(1, 1))],
    )
    .unwrap();
    let text = g.to_json();
    println!("{text}");
    let back = Relation::from_json(&text).unwrap();
    println!("round trip exact: {}", back == g);
    println!("(1/4, 1/2) ∈ G: {}", g.contains(&q(1, 4), &q(1, 2)).unwrap());
    println!("usc graph kind: {:?}", g.is_usc_graph().unwrap());
    println!("G⁻¹ ⊆ G: {}", g.inverse().subset_of(&g).unwrap());

    let f = Relation::points(AmbientInterval::unit(), vec![(q(0, 1), q(1, 1)), (q(1, 1), q(0, 1))]).unwrap();
    println!("finite relation file:\n{}", f.to_json());
}
