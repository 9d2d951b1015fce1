//! Combines entropy positivity and the periodic-point census into an embedding
//! verdict, keeping track of which half is proven and which is only evidence.

use serde::Serialize;
use thiserror::Error;

use crate::mahavier::{rasterize, spectral_entropy, transition_matrix, EntropyError, FiniteDigraph};
use crate::orbits::{orbit_census, OrbitCensus, OrbitError, ProofLevel};
use crate::relation::{Relation, RelationError};
use crate::scalar::Scalar;
use crate::wellaligned::{certify, Certificate, WellAlignedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Orbits(#[from] OrbitError),
    #[error(transparent)]
    Alignment(#[from] WellAlignedError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    IEmbedded,
    AlmostIEmbedded,
    Neither,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::IEmbedded => "i_embedded",
            Verdict::AlmostIEmbedded => "almost_i_embedded",
            Verdict::Neither => "neither",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EntropyStatus {
    ProvenPositive {
        argument: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        lower_bound: Option<f64>,
    },
    EvidencePositive { spectral: f64, grid: usize },
    ProvenZero { argument: String },
    EvidenceZero { spectral: f64, grid: usize },
}

impl EntropyStatus {
    pub fn is_positive(&self) -> bool {
        matches!(self, EntropyStatus::ProvenPositive { .. } | EntropyStatus::EvidencePositive { .. })
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, EntropyStatus::ProvenPositive { .. } | EntropyStatus::ProvenZero { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub entropy: EntropyStatus,
    pub entropy_proven: bool,
    /// Periodic points found; `None` for infinitely many (a family) or no census.
    pub periodic_points: Option<usize>,
    pub periodic_proven: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<OrbitCensus>,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
    pub reason: String,
}

impl Classification {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("classification serializes");
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json_value();
        }
        serde_json::to_string_pretty(&v).expect("json")
    }
}

/// Spectral estimates below this are read as "no growth" evidence.
pub const SPECTRAL_FLOOR: f64 = 1e-6;

/// Entropy status from, in order: the exact finite-digraph test, a certificate
/// for `G`, a certificate for a witness `W ⊆ G` (counts are monotone), and
/// finally the spectral estimate at grid `n`.
pub fn entropy_status(g: &Relation, witnesses: &[Relation], hints: &[Scalar], n: usize) -> Result<(EntropyStatus, Option<Certificate>), ClassifyError> {
    if g.is_empty() {
        return Ok((EntropyStatus::ProvenZero { argument: "the relation is empty".into() }, None));
    }
    if g.as_points().is_some() {
        let dg = FiniteDigraph::of(g)?;
        return Ok(if dg.has_branching_component() {
            (EntropyStatus::ProvenPositive { argument: "finite digraph with a component having more edges than vertices".into(), lower_bound: None }, None)
        } else {
            (EntropyStatus::ProvenZero { argument: "every component of the finite digraph is at most a simple cycle".into() }, None)
        });
    }
    if g.as_segments().is_some() {
        if let Some(c) = certify(g, hints)? {
            let arg = format!("well-aligned pair at b = {} inside {}", c.b, if c.target == crate::wellaligned::Target::G { "G" } else { "G⁻¹" });
            return Ok((EntropyStatus::ProvenPositive { argument: arg, lower_bound: Some(c.lower_bound) }, Some(c)));
        }
        for w in witnesses {
            if w.ambient() == g.ambient() && w.subset_of(g)? {
                if let Some(c) = certify(w, hints)? {
                    let arg = format!("inherited from a certified sub-relation (well-aligned at b = {})", c.b);
                    return Ok((EntropyStatus::ProvenPositive { argument: arg, lower_bound: Some(c.lower_bound) }, Some(c)));
                }
            }
        }
    }
    let est = spectral_entropy(&transition_matrix(&rasterize(g, n))?);
    Ok((
        if est.lower > SPECTRAL_FLOOR {
            EntropyStatus::EvidencePositive { spectral: est.value, grid: n }
        } else {
            EntropyStatus::EvidenceZero { spectral: est.value, grid: n }
        },
        None,
    ))
}

pub fn classify_embedding(
    g: &Relation,
    witnesses: &[Relation],
    hints: &[Scalar],
    max_period: usize,
    n: usize,
) -> Result<Classification, ClassifyError> {
    let (entropy, certificate) = entropy_status(g, witnesses, hints, n)?;
    let census = if g.as_grid().is_some() { None } else { Some(orbit_census(g, max_period)?) };
    let periodic_points = census.as_ref().and_then(OrbitCensus::point_count);
    let has_family = census.as_ref().is_some_and(|c| c.orbits.iter().any(|o| o.is_family()));
    let periodic_proven = census.as_ref().is_some_and(|c| c.proof_level == ProofLevel::Proven);
    let entropy_proven = entropy.is_proven();

    let (verdict, reason) = if has_family || periodic_points.is_some_and(|k| k >= 2) {
        (Verdict::Neither, "at least two periodic points are generated (verified orbits)".to_string())
    } else if matches!(entropy, EntropyStatus::ProvenZero { .. }) {
        (Verdict::Neither, "entropy is zero".to_string())
    } else if matches!(entropy, EntropyStatus::EvidenceZero { .. }) {
        (Verdict::Inconclusive, "no positive entropy evidence at this resolution".to_string())
    } else if census.is_none() {
        (Verdict::Inconclusive, "no periodic-point census for grid relations".to_string())
    } else if !(entropy_proven || periodic_proven) {
        (Verdict::Inconclusive, "entropy and periodic census are both evidence only".to_string())
    } else {
        let k = periodic_points.expect("finite count");
        let scope = if periodic_proven { "for all periods".to_string() } else { format!("up to period {max_period}") };
        let ent = if entropy_proven { "proven" } else { "evidence" };
        let v = if k == 0 { Verdict::IEmbedded } else { Verdict::AlmostIEmbedded };
        (v, format!("positive entropy ({ent}); {k} periodic point(s) {scope}"))
    };
    Ok(Classification { verdict, entropy, entropy_proven, periodic_points, periodic_proven, census, certificate, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gallery_entry, CertificateExpectation, Params, NAMES};

    #[test]
    fn gallery_verdicts_match_expectations() {
        for name in NAMES {
            let e = gallery_entry(name, &Params::default()).unwrap();
            let c = classify_embedding(&e.relation, &e.witnesses, &e.hints, 8, 64).unwrap();
            assert_eq!(c.verdict, e.expected.verdict, "{name}: {}", c.reason);
            if let Some(k) = e.expected.periodic_points {
                assert_eq!(c.periodic_points, Some(k), "{name}");
                assert!(c.periodic_proven, "{name}");
            }
            let has_cert = c.certificate.is_some();
            assert_eq!(has_cert, e.expected.certificate != CertificateExpectation::None, "{name}");
            if let Some(cert) = &c.certificate {
                let target = if e.expected.certificate == CertificateExpectation::Direct { &e.relation } else { &e.witnesses[0] };
                cert.verify(target).unwrap();
            }
        }
    }

    #[test]
    fn finite_zero_entropy_is_neither() {
        let (z, o) = (Scalar::from(0), Scalar::from(1));
        let g = Relation::points(crate::AmbientInterval::unit(), vec![(z.clone(), o.clone()), (o, z)]).unwrap();
        let c = classify_embedding(&g, &[], &[], 6, 16).unwrap();
        assert_eq!(c.verdict, Verdict::Neither);
        assert!(matches!(c.entropy, EntropyStatus::ProvenZero { .. }));
    }
}
