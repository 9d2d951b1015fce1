//! Named example relations, rebuilt exactly from their parameters.

use serde::Serialize;
use thiserror::Error;

use crate::classify::Verdict;
use crate::conjugacy::apply_homeo;
use crate::homeo::Homeomorphism;
use crate::interval::AmbientInterval;
use crate::orbits::powers_all_irrational;
use crate::relation::{Relation, RelationError, Segment};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("unknown gallery entry {0:?}; known: {1}")]
    Unknown(String, String),
    #[error("{0} takes no parameters")]
    NoParameters(String),
    #[error("{0}")]
    Constraint(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

pub const NAMES: [&str; 9] =
    ["H_ab", "H_thm11", "H_thm2", "taletoti", "joj5_A", "joj5_B", "counterexample", "tent", "full_shift"];

/// Optional overrides of the builder parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Scalar>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        self.a.is_none() && self.b.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateExpectation {
    /// `certify` succeeds on the relation itself.
    Direct,
    /// Only a listed sub-relation is certified; positivity is inherited.
    ViaWitness,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expected {
    pub certificate: CertificateExpectation,
    /// Number of periodic points; `None` when there are at least two (possibly infinitely many).
    pub periodic_points: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub relation: Relation,
    /// Sub-relations whose certificates transfer to `relation` by monotonicity.
    pub witnesses: Vec<Relation>,
    /// Levels worth trying first in `certify`.
    pub hints: Vec<Scalar>,
    pub expected: Expected,
}

fn s(x: &str) -> Scalar {
    x.parse().expect("literal scalar")
}

fn q(p: i64, r: i64) -> Scalar {
    Scalar::rational(p, r)
}

fn constraint(msg: impl Into<String>) -> GalleryError {
    GalleryError::Constraint(msg.into())
}

fn line(slope: Scalar, intercept: Scalar, xlo: Scalar, xhi: Scalar) -> Segment {
    Segment::graph(slope, intercept, xlo, xhi)
}

/// `1 + √2` and `1/3`.
pub fn default_pair() -> (Scalar, Scalar) {
    (s("1+sqrt(2)"), q(1, 3))
}

/// `6√2/7` and `2/3`.
pub fn default_window_pair() -> (Scalar, Scalar) {
    (s("6/7*sqrt(2)"), q(2, 3))
}

fn validate_pair(a: &Scalar, b: &Scalar) -> Result<(), GalleryError> {
    if a <= &Scalar::one() {
        return Err(constraint(format!("a must exceed 1 (a = {a})")));
    }
    if !powers_all_irrational(a) {
        return Err(constraint(format!("every power of a must be irrational (a = {a})")));
    }
    if !b.is_rational() || b.signum() <= 0 || b >= &Scalar::one() {
        return Err(constraint(format!("b must be a rational number in (0,1) (b = {b})")));
    }
    if &a.recip() <= b {
        return Err(constraint(format!("1/a > b fails (a = {a}, b = {b})")));
    }
    Ok(())
}

fn validate_window_a(a: &Scalar) -> Result<(), GalleryError> {
    if a <= &Scalar::one() || (a * a) >= Scalar::from_int(2) {
        return Err(constraint(format!("a must be in (1,√2) (a = {a})")));
    }
    let one = Scalar::one();
    // the two window inequalities, checked rather than assumed
    if &(a - &one) / &(a + &one) >= a.recip() {
        return Err(constraint("(a−1)/(a+1) < 1/a fails"));
    }
    if a / &(a + &one) >= &(a + &one) / &(a * &Scalar::from_int(2)) {
        return Err(constraint("a/(a+1) < (1+a)/(2a) fails"));
    }
    let steep = &(a * &Scalar::from_int(2)) / &(a + &one);
    if !powers_all_irrational(&steep) {
        return Err(constraint(format!("every power of 2a/(1+a) = {steep} must be irrational")));
    }
    Ok(())
}

fn validate_window_b(a: &Scalar, b: &Scalar, upper: &Scalar, upper_name: &str) -> Result<(), GalleryError> {
    let lower = a / &(a + &Scalar::one());
    if !b.is_rational() {
        return Err(constraint(format!("b must be rational (b = {b})")));
    }
    if b <= &lower || b >= upper {
        return Err(constraint(format!("b must be in (a/(a+1), {upper_name}) (b = {b})")));
    }
    Ok(())
}

pub fn h_ab(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    validate_pair(a, b)?;
    let a2 = a * a;
    Ok(Relation::segments(
        AmbientInterval::unit(),
        vec![line(a.clone(), Scalar::zero(), b / &a2, a.recip()), line(b.clone(), Scalar::zero(), a2.recip(), Scalar::one())],
    )?)
}

pub fn h_thm11(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    let base = h_ab(a, b)?;
    let a2 = a * a;
    let flat = Relation::segments(AmbientInterval::unit(), vec![line(Scalar::zero(), b / a, Scalar::zero(), b / &a2)])?;
    Ok(base.union(&flat)?)
}

pub fn h_thm2(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    validate_pair(a, b)?;
    Ok(Relation::segments(
        AmbientInterval::unit(),
        vec![line(a.clone(), Scalar::zero(), Scalar::zero(), a.recip()), line(b.clone(), Scalar::zero(), Scalar::zero(), Scalar::one())],
    )?)
}

fn window_lines(a: &Scalar, b: &Scalar) -> (Scalar, Scalar, Scalar, Scalar) {
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let steep = &(a * &two) / &(a + &one);
    let lift = &(a - &one) / &(a + &one);
    let shallow = &(b + &one) / &two;
    let drop = &(b - &one) / &two;
    (steep, lift, shallow, drop)
}

pub fn taletoti(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    validate_window_a(a)?;
    validate_window_b(a, b, &a.recip(), "1/a")?;
    let (steep, lift, shallow, drop) = window_lines(a, b);
    let one = Scalar::one();
    let start = &(&one - b) / &(&one + b);
    Ok(Relation::segments(
        AmbientInterval::unit(),
        vec![line(steep, lift, Scalar::zero(), a.recip()), line(shallow, drop, start, one)],
    )?)
}

fn joj5_b_window(a: &Scalar, b: &Scalar) -> Result<(), GalleryError> {
    validate_window_a(a)?;
    let one = Scalar::one();
    let upper = &(&one + a) / &(a * &Scalar::from_int(2));
    validate_window_b(a, b, &upper, "(1+a)/(2a)")
}

pub fn joj5_a(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    joj5_b_window(a, b)?;
    let (steep, _, shallow, _) = window_lines(a, b);
    Ok(Relation::segments(
        AmbientInterval::unit(),
        vec![
            line(steep.clone(), Scalar::zero(), Scalar::zero(), steep.recip()),
            line(shallow, Scalar::zero(), Scalar::zero(), Scalar::one()),
        ],
    )?)
}

pub fn joj5_b(a: &Scalar, b: &Scalar) -> Result<Relation, GalleryError> {
    joj5_b_window(a, b)?;
    let (steep, lift, shallow, drop) = window_lines(a, b);
    let m1 = Scalar::from_int(-1);
    Ok(Relation::segments(
        AmbientInterval::symmetric(),
        vec![line(steep, lift, m1.clone(), a.recip()), line(shallow, drop, m1, Scalar::one())],
    )?)
}

/// `φ(t) = t/2 + 1/2` from `[−1, 1]` onto `[0, 1]`.
pub fn joj5_phi() -> Homeomorphism {
    Homeomorphism::affine(AmbientInterval::symmetric(), AmbientInterval::unit())
}

pub fn counterexample() -> Relation {
    Relation::points(AmbientInterval::unit(), vec![(q(0, 1), q(1, 1)), (q(0, 1), q(3, 4)), (q(3, 4), q(0, 1)), (q(1, 1), q(0, 1))])
        .expect("fixed points")
}

pub fn tent() -> Relation {
    Relation::segments(
        AmbientInterval::unit(),
        vec![line(q(2, 1), q(0, 1), q(0, 1), q(1, 2)), line(q(-2, 1), q(2, 1), q(1, 2), q(1, 1))],
    )
    .expect("fixed segments")
}

pub fn full_shift() -> Relation {
    let (z, o) = (Scalar::zero(), Scalar::one());
    Relation::points(AmbientInterval::unit(), vec![(z.clone(), z.clone()), (z.clone(), o.clone()), (o.clone(), z), (o.clone(), o)])
        .expect("fixed points")
}

fn expected(certificate: CertificateExpectation, periodic_points: Option<usize>, verdict: Verdict) -> Expected {
    Expected { certificate, periodic_points, verdict }
}

pub fn gallery_entry(name: &str, overrides: &Params) -> Result<GalleryEntry, GalleryError> {
    let (da, db) = default_pair();
    let (wa, wb) = default_window_pair();
    let pick = |d: &Scalar, o: &Option<Scalar>| o.clone().unwrap_or_else(|| d.clone());
    let no_params = |n: &str| -> Result<(), GalleryError> {
        if overrides.is_empty() {
            Ok(())
        } else {
            Err(GalleryError::NoParameters(n.into()))
        }
    };
    use CertificateExpectation::{Direct, ViaWitness};
    let entry = match name {
        "H_ab" | "H_thm11" | "H_thm2" => {
            let (a, b) = (pick(&da, &overrides.a), pick(&db, &overrides.b));
            let base = h_ab(&a, &b)?;
            let (relation, witnesses, description, exp) = match name {
                "H_ab" => (
                    base,
                    vec![],
                    "two lines through the origin, y = ax over [b/a², 1/a] and y = bx over [1/a², 1]",
                    expected(Direct, Some(0), Verdict::IEmbedded),
                ),
                "H_thm11" => (
                    h_thm11(&a, &b)?,
                    vec![base],
                    "H_ab with the horizontal piece [0, b/a²] × {b/a}: an upper semicontinuous function",
                    expected(Direct, Some(0), Verdict::IEmbedded),
                ),
                _ => (
                    h_thm2(&a, &b)?,
                    vec![base],
                    "the full lines y = ax and y = bx in the unit square: a surjective continuum",
                    expected(ViaWitness, Some(1), Verdict::AlmostIEmbedded),
                ),
            };
            GalleryEntry { name: NAMES[NAMES.iter().position(|n| *n == name).expect("known")], description, a: Some(a), b: Some(b.clone()), relation, witnesses, hints: vec![b], expected: exp }
        }
        "taletoti" => {
            let (a, b) = (pick(&wa, &overrides.a), pick(&wb, &overrides.b));
            GalleryEntry {
                name: "taletoti",
                description: "two lines through (−1, −1) clipped to the unit square: a surjective function graph without periodic points",
                relation: taletoti(&a, &b)?,
                witnesses: vec![],
                hints: vec![b.clone()],
                a: Some(a),
                b: Some(b),
                expected: expected(Direct, Some(0), Verdict::IEmbedded),
            }
        }
        "joj5_A" | "joj5_B" => {
            let (a, b) = (pick(&wa, &overrides.a), pick(&wb, &overrides.b));
            // the clipped window relation sits inside B, and its image inside A
            let inner = taletoti(&a, &b).ok().map(|h| h.with_ambient(AmbientInterval::symmetric())).transpose()?;
            let (relation, witnesses, name, description) = if name == "joj5_A" {
                let w = inner.map(|h| apply_homeo(&h, &joj5_phi()).expect("affine image")).into_iter().collect();
                (joj5_a(&a, &b)?, w, "joj5_A", "two lines through the origin on [0, 1], conjugate to joj5_B")
            } else {
                (joj5_b(&a, &b)?, inner.into_iter().collect(), "joj5_B", "two lines through (−1, −1) on [−1, 1]")
            };
            let hint = if name == "joj5_A" { joj5_phi().apply(&b) } else { b.clone() };
            GalleryEntry {
                name,
                description,
                relation,
                witnesses,
                hints: vec![hint],
                a: Some(a),
                b: Some(b),
                expected: expected(ViaWitness, Some(1), Verdict::AlmostIEmbedded),
            }
        }
        "counterexample" => {
            no_params(name)?;
            GalleryEntry {
                name: "counterexample",
                description: "four points with positive entropy and no well-aligned subsets of it or its inverse",
                relation: counterexample(),
                witnesses: vec![],
                hints: vec![],
                a: None,
                b: None,
                expected: expected(CertificateExpectation::None, None, Verdict::Neither),
            }
        }
        "tent" => {
            no_params(name)?;
            GalleryEntry {
                name: "tent",
                description: "graph of the full tent map",
                relation: tent(),
                witnesses: vec![],
                hints: vec![q(1, 2)],
                a: None,
                b: None,
                expected: expected(Direct, None, Verdict::Neither),
            }
        }
        "full_shift" => {
            no_params(name)?;
            GalleryEntry {
                name: "full_shift",
                description: "the four corners of the unit square: the full 2-shift",
                relation: full_shift(),
                witnesses: vec![],
                hints: vec![],
                a: None,
                b: None,
                expected: expected(CertificateExpectation::None, None, Verdict::Neither),
            }
        }
        other => return Err(GalleryError::Unknown(other.into(), NAMES.join(", "))),
    };
    Ok(entry)
}

pub fn gallery(name: &str, overrides: &Params) -> Result<Relation, GalleryError> {
    Ok(gallery_entry(name, overrides)?.relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::are_conjugate;
    use crate::relation::UscKind;

    #[test]
    fn every_entry_builds_and_round_trips() {
        for name in NAMES {
            let e = gallery_entry(name, &Params::default()).unwrap();
            let back = Relation::from_json(&e.relation.to_json()).unwrap();
            assert_eq!(back, e.relation, "{name}");
            assert_eq!(back.to_json(), e.relation.to_json());
            for w in &e.witnesses {
                assert!(w.subset_of(&e.relation).unwrap(), "{name} witness");
            }
        }
    }

    #[test]
    fn window_parameters_are_checked() {
        let p = Params { a: Some(q(3, 2)), b: None };
        assert_eq!(gallery("taletoti", &p).unwrap_err().to_string(), "a must be in (1,√2) (a = 3/2)");
        let p = Params { a: None, b: Some(q(9, 10)) };
        assert!(gallery("taletoti", &p).unwrap_err().to_string().contains("b must be in (a/(a+1), 1/a)"));
        let p = Params { a: Some(s("sqrt(2)+1")), b: Some(q(1, 2)) };
        assert!(gallery("H_ab", &p).unwrap_err().to_string().contains("1/a > b"));
        let p = Params { a: Some(s("sqrt(3)")), b: None };
        assert!(gallery("H_ab", &p).unwrap_err().to_string().contains("irrational"));
        assert!(matches!(gallery("nope", &Params::default()), Err(GalleryError::Unknown(..))));
        assert!(matches!(gallery("tent", &Params { a: Some(q(2, 1)), b: None }), Err(GalleryError::NoParameters(_))));
    }

    #[test]
    fn window_steep_slope_is_exact() {
        let (a, b) = default_window_pair();
        let (steep, ..) = window_lines(&a, &b);
        assert_eq!(steep, s("144/23-84/23*sqrt(2)"));
    }

    #[test]
    fn graph_types() {
        let d = Params::default();
        assert_eq!(gallery("H_thm11", &d).unwrap().is_usc_graph().unwrap(), UscKind::Graph);
        assert_eq!(gallery("H_thm2", &d).unwrap().is_usc_graph().unwrap(), UscKind::SurjectiveGraph);
        assert_eq!(gallery("taletoti", &d).unwrap().is_usc_graph().unwrap(), UscKind::SurjectiveGraph);
        assert_eq!(gallery("H_ab", &d).unwrap().is_usc_graph().unwrap(), UscKind::NotGraph);
    }

    #[test]
    fn joj5_pair_is_conjugate() {
        let d = Params::default();
        assert!(are_conjugate(&gallery("joj5_B", &d).unwrap(), &gallery("joj5_A", &d).unwrap(), &joj5_phi()));
    }
}
