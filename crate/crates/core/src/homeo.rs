//! Piecewise-affine homeomorphisms between ambient intervals.

use serde::{Deserialize, Serialize};

use crate::interval::{AmbientInterval, ClosedInterval};
use crate::relation::{Affine, RelationError};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomeoPiece {
    pub dom: ClosedInterval,
    pub map: Affine,
}

/// A strictly monotone, continuous, piecewise-affine bijection `source → target`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homeomorphism {
    source: AmbientInterval,
    target: AmbientInterval,
    pieces: Vec<HomeoPiece>,
}

fn invalid(msg: impl Into<String>) -> RelationError {
    RelationError::Invalid(msg.into())
}

impl Homeomorphism {
    pub fn new(source: AmbientInterval, target: AmbientInterval, mut pieces: Vec<HomeoPiece>) -> Result<Self, RelationError> {
        if pieces.is_empty() {
            return Err(invalid("homeomorphism needs at least one piece"));
        }
        pieces.sort_by(|a, b| a.dom.lo.cmp(&b.dom.lo));
        if &pieces[0].dom.lo != source.lo() || &pieces[pieces.len() - 1].dom.hi != source.hi() {
            return Err(invalid("pieces must cover the source interval"));
        }
        let sign = pieces[0].map.coef.signum();
        for (k, p) in pieces.iter().enumerate() {
            if p.dom.lo >= p.dom.hi {
                return Err(invalid("homeomorphism pieces need nondegenerate domains"));
            }
            if p.map.coef.signum() != sign || sign == 0 {
                return Err(invalid("homeomorphism must be strictly monotone"));
            }
            if k > 0 {
                let prev = &pieces[k - 1];
                if prev.dom.hi != p.dom.lo {
                    return Err(invalid("pieces must be contiguous"));
                }
                if prev.map.eval(&prev.dom.hi) != p.map.eval(&p.dom.lo) {
                    return Err(invalid("pieces disagree at a shared endpoint"));
                }
            }
        }
        let h = Homeomorphism { source, target, pieces };
        let (a, b) = (h.apply(h.source.lo()), h.apply(h.source.hi()));
        let (lo, hi) = if sign > 0 { (a, b) } else { (b, a) };
        if &lo != h.target.lo() || &hi != h.target.hi() {
            return Err(invalid("image does not equal the target interval"));
        }
        Ok(h)
    }

    /// The increasing affine map of `source` onto `target`.
    pub fn affine(source: AmbientInterval, target: AmbientInterval) -> Self {
        let coef = &target.width() / &source.width();
        let off = target.lo() - &(&coef * source.lo());
        let dom = source.as_closed();
        Homeomorphism { source, target, pieces: vec![HomeoPiece { dom, map: Affine::new(coef, off) }] }
    }

    pub fn identity(amb: AmbientInterval) -> Self {
        Self::affine(amb.clone(), amb)
    }

    pub fn source(&self) -> &AmbientInterval {
        &self.source
    }

    pub fn target(&self) -> &AmbientInterval {
        &self.target
    }

    pub fn pieces(&self) -> &[HomeoPiece] {
        &self.pieces
    }

    pub fn single_affine(&self) -> Option<&Affine> {
        (self.pieces.len() == 1).then(|| &self.pieces[0].map)
    }

    pub fn is_increasing(&self) -> bool {
        self.pieces[0].map.coef.signum() > 0
    }

    fn piece_for(&self, x: &Scalar) -> &HomeoPiece {
        self.pieces
            .iter()
            .find(|p| p.dom.contains(x))
            .unwrap_or_else(|| panic!("{x} is outside the homeomorphism's source"))
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        self.piece_for(x).map.eval(x)
    }

    /// The affine piece acting on a neighbourhood of `(lo, hi)`, which must lie in one domain.
    pub fn piece_on(&self, lo: &Scalar, hi: &Scalar) -> &Affine {
        let mid = lo.midpoint(hi);
        &self.piece_for(&mid).map
    }

    /// Interior breakpoints of the source.
    pub fn breakpoints(&self) -> Vec<Scalar> {
        self.pieces.iter().skip(1).map(|p| p.dom.lo.clone()).collect()
    }

    pub fn inverse(&self) -> Homeomorphism {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let a = p.map.eval(&p.dom.lo);
                let b = p.map.eval(&p.dom.hi);
                let dom = if a <= b { ClosedInterval::new(a, b) } else { ClosedInterval::new(b, a) };
                let coef = p.map.coef.recip();
                let off = -(&p.map.off * &coef);
                HomeoPiece { dom, map: Affine::new(coef, off) }
            })
            .collect();
        Homeomorphism::new(self.target.clone(), self.source.clone(), pieces).expect("inverse of a homeomorphism")
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homeomorphism) -> Result<Homeomorphism, RelationError> {
        if self.target != other.source {
            return Err(RelationError::AmbientMismatch);
        }
        let mut cuts: Vec<Scalar> = vec![self.source.lo().clone(), self.source.hi().clone()];
        cuts.extend(self.breakpoints());
        let inv = self.inverse();
        cuts.extend(other.breakpoints().iter().map(|b| inv.apply(b)));
        cuts.sort();
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let f = self.piece_on(&w[0], &w[1]);
                let mid = self.apply(&w[0].midpoint(&w[1]));
                let g = &other.piece_for(&mid).map;
                HomeoPiece { dom: ClosedInterval::new(w[0].clone(), w[1].clone()), map: g.compose(f) }
            })
            .collect();
        Homeomorphism::new(self.source.clone(), other.target.clone(), pieces)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&HomeoFile::from(self)).expect("homeomorphism serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, RelationError> {
        let f: HomeoFile = serde_json::from_str(s).map_err(|e| invalid(e.to_string()))?;
        let pieces = f
            .pieces
            .into_iter()
            .map(|p| {
                if p.dom[0] > p.dom[1] {
                    return Err(invalid("piece domain reversed"));
                }
                let [lo, hi] = p.dom;
                Ok(HomeoPiece { dom: ClosedInterval::new(lo, hi), map: Affine::new(p.slope, p.intercept) })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Homeomorphism::new(f.source, f.target, pieces)
    }
}

#[derive(Serialize, Deserialize)]
struct PieceFile {
    dom: [Scalar; 2],
    slope: Scalar,
    intercept: Scalar,
}

#[derive(Serialize, Deserialize)]
struct HomeoFile {
    source: AmbientInterval,
    target: AmbientInterval,
    pieces: Vec<PieceFile>,
}

impl From<&Homeomorphism> for HomeoFile {
    fn from(h: &Homeomorphism) -> Self {
        HomeoFile {
            source: h.source.clone(),
            target: h.target.clone(),
            pieces: h
                .pieces
                .iter()
                .map(|p| PieceFile {
                    dom: [p.dom.lo.clone(), p.dom.hi.clone()],
                    slope: p.map.coef.clone(),
                    intercept: p.map.off.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> Scalar {
        Scalar::rational(p, r)
    }

    #[test]
    fn halving_map_onto_the_unit_interval() {
        let phi = Homeomorphism::affine(AmbientInterval::symmetric(), AmbientInterval::unit());
        assert_eq!(phi.apply(&q(-1, 1)), q(0, 1));
        assert_eq!(phi.apply(&q(0, 1)), q(1, 2));
        assert_eq!(phi.inverse().apply(&q(1, 4)), q(-1, 2));
        let back = Homeomorphism::from_json(&phi.to_json()).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn two_piece_map_composes_with_its_inverse() {
        let u = AmbientInterval::unit();
        let phi = Homeomorphism::new(
            u.clone(),
            u.clone(),
            vec![
                HomeoPiece { dom: ClosedInterval::new(q(0, 1), q(1, 2)), map: Affine::new(q(1, 2), q(0, 1)) },
                HomeoPiece { dom: ClosedInterval::new(q(1, 2), q(1, 1)), map: Affine::new(q(3, 2), q(-1, 2)) },
            ],
        )
        .unwrap();
        let id = phi.then(&phi.inverse()).unwrap();
        for k in 0..=8 {
            assert_eq!(id.apply(&q(k, 8)), q(k, 8));
        }
    }

    #[test]
    fn rejects_non_monotone_or_gapped_maps() {
        let u = AmbientInterval::unit();
        let bad = Homeomorphism::new(
            u.clone(),
            u.clone(),
            vec![
                HomeoPiece { dom: ClosedInterval::new(q(0, 1), q(1, 2)), map: Affine::new(q(2, 1), q(0, 1)) },
                HomeoPiece { dom: ClosedInterval::new(q(1, 2), q(1, 1)), map: Affine::new(q(-2, 1), q(2, 1)) },
            ],
        );
        assert!(bad.is_err());
    }
}
