//! Topological conjugacy of relations by piecewise-affine homeomorphisms.
//!
//! `H` is the image of `G` under `φ` when `(x, y) ∈ G ⇔ (φ(x), φ(y)) ∈ H`.

use serde::Serialize;
use thiserror::Error;

use crate::homeo::Homeomorphism;
use crate::mahavier::{box_counts, finite_entropy, spectral_entropy, transition_matrix, rasterize, EntropyError, FiniteDigraph};
use crate::orbits::PeriodicOrbit;
use crate::relation::{Body, GridCells, Relation, RelationError, Segment};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugacyError {
    #[error("homeomorphism source {0} does not match the relation's ambient {1}")]
    SourceMismatch(String, String),
    #[error("grid relation under a non-affine homeomorphism; rasterize after mapping instead")]
    GridIncompatible,
    #[error("conjugacy broken: {0}")]
    Broken(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

fn check_source(g: &Relation, phi: &Homeomorphism) -> Result<(), ConjugacyError> {
    if g.ambient() != phi.source() {
        return Err(ConjugacyError::SourceMismatch(format!("{:?}", phi.source()), format!("{:?}", g.ambient())));
    }
    Ok(())
}

/// Parameter values inside `piece` where `x` or `y` crosses a breakpoint of `phi`.
fn cut_params(piece: &Segment, phi: &Homeomorphism) -> Vec<Scalar> {
    let range = piece.param_range();
    let (cx, cy) = piece.coords();
    let mut cuts = vec![range.lo.clone(), range.hi.clone()];
    for b in phi.breakpoints() {
        for c in [&cx, &cy] {
            if !c.is_constant() {
                let p = (&b - &c.off) / &c.coef;
                if range.lo < p && p < range.hi {
                    cuts.push(p);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    cuts
}

/// The image `{(φ(x), φ(y)) : (x, y) ∈ G}` on `φ`'s target.
pub fn apply_homeo(g: &Relation, phi: &Homeomorphism) -> Result<Relation, ConjugacyError> {
    check_source(g, phi)?;
    let target = phi.target().clone();
    match g.body() {
        Body::Points(pts) => {
            let img = pts.iter().map(|(x, y)| (phi.apply(x), phi.apply(y))).collect();
            Ok(Relation::points(target, img)?)
        }
        Body::Segments(segs) => {
            let mut out = Vec::new();
            for s in segs {
                if s.is_point() {
                    let (x, y) = s.point_at(&s.lo);
                    out.push(Segment::point(phi.apply(&x), phi.apply(&y)));
                    continue;
                }
                // φ is affine on each sub-piece, so its image is the chord between the mapped ends
                for w in cut_params(s, phi).windows(2) {
                    let (x0, y0) = s.point_at(&w[0]);
                    let (x1, y1) = s.point_at(&w[1]);
                    out.push(Segment::between(&(phi.apply(&x0), phi.apply(&y0)), &(phi.apply(&x1), phi.apply(&y1))));
                }
            }
            Ok(Relation::segments(target, out)?)
        }
        Body::Grid(grid) => {
            if phi.single_affine().is_none() {
                return Err(ConjugacyError::GridIncompatible);
            }
            // an affine bijection of the ambient intervals sends cell i to cell i, or to n−1−i when reversing
            let n = grid.n;
            let flip = |i: usize| if phi.is_increasing() { i } else { n - 1 - i };
            let cells = grid.cells.iter().map(|&(i, j)| (flip(i), flip(j))).collect();
            Ok(Relation::grid(target, n, cells)?)
        }
    }
}

pub fn are_conjugate(g: &Relation, h: &Relation, phi: &Homeomorphism) -> bool {
    if phi.target() != h.ambient() {
        return false;
    }
    match apply_homeo(g, phi) {
        Ok(img) => img.body() == h.body(),
        Err(_) => false,
    }
}

/// Pointwise image of an orbit of `G`, re-verified as an orbit of `H`.
pub fn conjugate_orbit(orbit: &PeriodicOrbit, phi: &Homeomorphism, h: &Relation) -> Result<PeriodicOrbit, ConjugacyError> {
    let map = |v: &[Scalar]| v.iter().map(|x| phi.apply(x)).collect::<Vec<_>>();
    let image = PeriodicOrbit {
        period: orbit.period,
        points: map(&orbit.points),
        branch: Vec::new(),
        family_end: orbit.family_end.as_deref().map(map),
    };
    if !image.verify(h) {
        return Err(ConjugacyError::Broken(format!("image of {:?} is not an orbit", orbit.points)));
    }
    let pieces = h.pieces()?;
    let p = image.period;
    let branch = (0..p)
        .map(|i| {
            let (x, y) = (&image.points[(i + 1) % p], &image.points[i]);
            pieces.iter().position(|s| s.contains(x, y)).expect("verified above")
        })
        .collect();
    Ok(PeriodicOrbit { branch, ..image })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransferMode {
    Exact,
    Tolerance,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyTransfer {
    pub mode: TransferMode,
    pub grid: usize,
    /// Box counts of `G` and `H` at the compared grid (exact mode only).
    #[serde(serialize_with = "ser_counts")]
    pub counts_g: Vec<num_bigint::BigUint>,
    #[serde(serialize_with = "ser_counts")]
    pub counts_h: Vec<num_bigint::BigUint>,
    pub spectral_g: f64,
    pub spectral_h: f64,
    pub tolerance: f64,
    pub agree: bool,
}

fn ser_counts<S: serde::Serializer>(v: &[num_bigint::BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// Default tolerance between spectral estimates when `φ` does not map grids to grids.
pub const TRANSFER_TOLERANCE: f64 = 0.05;

/// Compares grid entropy data of `G` and its conjugate `H` at the `2n`-grid.
/// A single affine `φ` maps grid boxes bijectively onto grid boxes, so the box
/// counts must agree as integers; otherwise only the spectral estimates are
/// compared, within [`TRANSFER_TOLERANCE`].
pub fn entropy_transfer_check(
    g: &Relation,
    h: &Relation,
    phi: &Homeomorphism,
    n: usize,
    m_max: usize,
) -> Result<EntropyTransfer, ConjugacyError> {
    if !are_conjugate(g, h, phi) {
        return Err(ConjugacyError::Broken("H is not the image of G".into()));
    }
    let grid = 2 * n;
    let spectral = |r: &Relation| -> Result<f64, ConjugacyError> {
        if r.as_points().is_some() {
            return Ok(finite_entropy(r)?.value);
        }
        Ok(spectral_entropy(&transition_matrix(&rasterize(r, grid))?).value)
    };
    let (sg, sh) = (spectral(g)?, spectral(h)?);
    if phi.single_affine().is_some() {
        let cg = box_counts(g, grid, m_max)?;
        let ch = box_counts(h, grid, m_max)?;
        let agree = cg == ch;
        return Ok(EntropyTransfer {
            mode: TransferMode::Exact,
            grid,
            counts_g: cg,
            counts_h: ch,
            spectral_g: sg,
            spectral_h: sh,
            tolerance: 0.0,
            agree,
        });
    }
    Ok(EntropyTransfer {
        mode: TransferMode::Tolerance,
        grid,
        counts_g: Vec::new(),
        counts_h: Vec::new(),
        spectral_g: sg,
        spectral_h: sh,
        tolerance: TRANSFER_TOLERANCE,
        agree: (sg - sh).abs() <= TRANSFER_TOLERANCE,
    })
}

/// Image of a finite `F ⊆ G`, checked to carry an isomorphic digraph.
pub fn finitely_generated_transfer(f: &Relation, phi: &Homeomorphism) -> Result<Relation, ConjugacyError> {
    if f.as_points().is_none() {
        return Err(RelationError::KindMismatch(f.kind(), "points").into());
    }
    let img = apply_homeo(f, phi)?;
    let (a, b) = (FiniteDigraph::of(f)?, FiniteDigraph::of(&img)?);
    let iso = a.vertices.len() == b.vertices.len()
        && a.adjacency.nnz() == b.adjacency.nnz()
        && a.adjacency.entries().iter().all(|&(i, j)| {
            let (vi, vj) = (phi.apply(&a.vertices[i]), phi.apply(&a.vertices[j]));
            match (b.index_of(&vi), b.index_of(&vj)) {
                (Some(p), Some(q)) => b.has_edge(p, q),
                _ => false,
            }
        });
    if !iso {
        return Err(ConjugacyError::Broken("image digraph is not isomorphic".into()));
    }
    Ok(img)
}

/// Grid cells occupied by the image of a grid under an affine `φ` (exposed for tests).
pub fn map_grid(grid: &GridCells, phi: &Homeomorphism) -> Option<GridCells> {
    phi.single_affine()?;
    let n = grid.n;
    let flip = |i: usize| if phi.is_increasing() { i } else { n - 1 - i };
    Some(GridCells { n, cells: grid.cells.iter().map(|&(i, j)| (flip(i), flip(j))).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::HomeoPiece;
    use crate::interval::{AmbientInterval, ClosedInterval};
    use crate::relation::Affine;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn halving() -> Homeomorphism {
        Homeomorphism::affine(AmbientInterval::symmetric(), AmbientInterval::unit())
    }

    #[test]
    fn second_branch_moves_through_the_origin() {
        let b = s("2/3");
        let k = (&b + &Scalar::one()) / Scalar::from_int(2);
        let e = (&b - &Scalar::one()) / Scalar::from_int(2);
        let g = Relation::segments(AmbientInterval::symmetric(), vec![Segment::graph(k.clone(), e, s("-1"), s("1"))]).unwrap();
        let img = apply_homeo(&g, &halving()).unwrap();
        let want = Relation::segments(AmbientInterval::unit(), vec![Segment::graph(k, Scalar::zero(), s("0"), s("1"))]).unwrap();
        assert_eq!(img, want);
    }

    #[test]
    fn identity_and_functoriality() {
        let g = Relation::segments(
            AmbientInterval::unit(),
            vec![Segment::graph(s("2"), s("0"), s("0"), s("1/2")), Segment::graph(s("-2"), s("2"), s("1/2"), s("1"))],
        )
        .unwrap();
        let id = Homeomorphism::identity(AmbientInterval::unit());
        assert!(are_conjugate(&g, &g, &id));
        let u = AmbientInterval::unit();
        let bent = Homeomorphism::new(
            u.clone(),
            u.clone(),
            vec![
                HomeoPiece { dom: ClosedInterval::new(s("0"), s("1/2")), map: Affine::new(s("1/2"), s("0")) },
                HomeoPiece { dom: ClosedInterval::new(s("1/2"), s("1")), map: Affine::new(s("3/2"), s("-1/2")) },
            ],
        )
        .unwrap();
        let twice = apply_homeo(&apply_homeo(&g, &bent).unwrap(), &bent).unwrap();
        let composed = apply_homeo(&g, &bent.then(&bent).unwrap()).unwrap();
        assert_eq!(twice, composed);
        assert!(are_conjugate(&g, &apply_homeo(&g, &bent).unwrap(), &bent));
        let back = apply_homeo(&apply_homeo(&g, &bent).unwrap(), &bent.inverse()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn grids_need_affine_maps() {
        let u = AmbientInterval::unit();
        let grid = Relation::grid(u.clone(), 4, [(0, 1), (3, 2)].into_iter().collect()).unwrap();
        let bent = Homeomorphism::new(
            u.clone(),
            u.clone(),
            vec![
                HomeoPiece { dom: ClosedInterval::new(s("0"), s("1/2")), map: Affine::new(s("1/2"), s("0")) },
                HomeoPiece { dom: ClosedInterval::new(s("1/2"), s("1")), map: Affine::new(s("3/2"), s("-1/2")) },
            ],
        )
        .unwrap();
        let err = apply_homeo(&grid, &bent).unwrap_err();
        assert!(err.to_string().contains("rasterize after mapping instead"));
        let flip = Homeomorphism::from_json(
            r#"{"source":["0","1"],"target":["0","1"],"pieces":[{"dom":["0","1"],"slope":"-1","intercept":"1"}]}"#,
        )
        .unwrap();
        let img = apply_homeo(&grid, &flip).unwrap();
        assert_eq!(img.as_grid().unwrap().cells, [(3, 2), (0, 1)].into_iter().collect());
    }

    #[test]
    fn counterexample_transfers_to_the_symmetric_interval() {
        let gc = Relation::points(
            AmbientInterval::unit(),
            vec![(s("0"), s("1")), (s("0"), s("3/4")), (s("3/4"), s("0")), (s("1"), s("0"))],
        )
        .unwrap();
        let img = finitely_generated_transfer(&gc, &halving().inverse()).unwrap();
        assert_eq!(img.as_points().unwrap().len(), 4);
        assert!(img.contains(&s("-1"), &s("1")).unwrap());
        assert!((finite_entropy(&img).unwrap().value - finite_entropy(&gc).unwrap().value).abs() < 1e-12);
    }

    #[test]
    fn broken_conjugacy_is_reported() {
        let g = Relation::points(AmbientInterval::unit(), vec![(s("0"), s("0"))]).unwrap();
        let h = Relation::points(AmbientInterval::unit(), vec![(s("1"), s("1"))]).unwrap();
        let o = PeriodicOrbit { period: 1, points: vec![s("0")], branch: vec![0], family_end: None };
        let id = Homeomorphism::identity(AmbientInterval::unit());
        let err = conjugate_orbit(&o, &id, &h).unwrap_err();
        assert!(err.to_string().starts_with("conjugacy broken"));
        assert!(conjugate_orbit(&o, &id, &g).is_ok());
    }
}
