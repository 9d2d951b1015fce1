use relent::gallery::{gallery_entry, Params, NAMES};
use relent::mahavier::{box_counts, entropy_sequence};
use relent::orbits::orbit_census;
use relent::wellaligned::certify;
use relent::{Relation, Scalar};

#[test]
fn every_entry_round_trips_bit_exactly() {
    for name in NAMES {
        let e = gallery_entry(name, &Params::default()).unwrap();
        let text = e.relation.to_json();
        let back = Relation::from_json(&text).unwrap();
        assert_eq!(back, e.relation, "{name}");
        assert_eq!(back.to_json(), text, "{name}");
        assert_eq!(gallery_entry(name, &Params::default()).unwrap().relation, e.relation, "{name}: rebuild differs");
    }
}

#[test]
fn witnesses_are_sub_relations() {
    for name in NAMES {
        let e = gallery_entry(name, &Params::default()).unwrap();
        for w in &e.witnesses {
            assert!(w.subset_of(&e.relation).unwrap(), "{name}");
            assert!(certify(w, &e.hints).unwrap().is_some(), "{name}: witness not certified");
        }
    }
}

#[test]
fn parameter_overrides_rebuild_exactly() {
    let b = Scalar::rational(1, 4);
    let e = gallery_entry("H_ab", &Params { a: None, b: Some(b.clone()) }).unwrap();
    assert_eq!(e.b, Some(b));
    let cert = certify(&e.relation, &e.hints).unwrap().expect("certificate for b = 1/4");
    cert.verify(&e.relation).unwrap();
    assert!(orbit_census(&e.relation, 10).unwrap().orbits.is_empty());
}

#[test]
fn empty_relation_has_zero_entropy_report() {
    let r = Relation::empty_points(relent::AmbientInterval::unit());
    let rep = entropy_sequence(&r, 8, 4).unwrap();
    assert!(rep.empty && rep.counts.is_empty() && rep.estimate == 0.0);
    assert!(box_counts(&r, 8, 4).is_err());
}
