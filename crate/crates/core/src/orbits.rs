//! Periodic points generated by a relation.
//!
//! A periodic orbit is a cycle `(x₁, …, x_p)` with `(x_{i+1}, x_i) ∈ G` cyclically.
//! For point and segment relations the search walks branch words (one piece per
//! step) while tracking, exactly, the set of starting points for which every step
//! is admissible; for finite relations it also works on the digraph
//! `x → y ⇔ (x, y) ∈ F`, whose cycles read backwards are the orbits.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conjugacy::apply_homeo;
use crate::homeo::{HomeoPiece, Homeomorphism};
use crate::interval::{merge_intervals, AmbientInterval, ClosedInterval};
use crate::mahavier::FiniteDigraph;
use crate::relation::{Affine, Relation, RelationError, Segment};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_PERIOD: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("branch not invertible: piece {0} has slope 0")]
    NotInvertible(usize),
    #[error("branch index {0} out of range")]
    BadIndex(usize),
    #[error("empty branch word")]
    EmptyWord,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("orbit search needs a point or segment relation")]
    GridRelation,
    #[error("search found an orbit the proof excludes: {0}")]
    ProofMismatch(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// A periodic orbit together with the branch word (piece indices) that produced it.
/// A one-parameter family of orbits stores its two extreme members in `points`
/// and `family_end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicOrbit {
    pub period: usize,
    pub points: Vec<Scalar>,
    pub branch: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_end: Option<Vec<Scalar>>,
}

impl PeriodicOrbit {
    pub fn is_family(&self) -> bool {
        self.family_end.is_some()
    }

    /// Every consecutive pair, read cyclically, lies in `g`.
    pub fn verify(&self, g: &Relation) -> bool {
        let ok = |pts: &[Scalar]| {
            let p = pts.len();
            (0..p).all(|i| g.contains(&pts[(i + 1) % p], &pts[i]).unwrap_or(false))
        };
        ok(&self.points) && self.family_end.as_deref().is_none_or(ok)
    }
}

/// The composed inverse branch `x₁ ↦ c·x₁ + e` and the starting points on which it is admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchMap {
    pub c: Scalar,
    pub e: Scalar,
    pub domain: Option<ClosedInterval>,
}

pub fn branch_compose(g: &Relation, word: &[usize]) -> Result<BranchMap, OrbitError> {
    if word.is_empty() {
        return Err(OrbitError::EmptyWord);
    }
    let pieces = g.pieces().map_err(|_| OrbitError::GridRelation)?;
    let mut map = Affine::identity();
    let mut domain = Some(g.ambient().as_closed());
    for &k in word {
        let p = pieces.get(k).ok_or(OrbitError::BadIndex(k))?;
        if !p.is_invertible_graph() {
            return Err(OrbitError::NotInvertible(k));
        }
        domain = domain.and_then(|d| map.preimage(&p.y_range(), &d));
        let inv = Affine::new(p.slope.recip(), -(&p.intercept / &p.slope));
        map = inv.compose(&map);
    }
    Ok(BranchMap { c: map.coef, e: map.off, domain })
}

#[derive(Clone)]
struct SearchState {
    t: ClosedInterval,
    exprs: Vec<Affine>,
    word: Vec<usize>,
}

impl SearchState {
    fn pin(&mut self, t: Scalar) {
        for e in &mut self.exprs {
            *e = Affine::constant(e.eval(&t));
        }
        self.t = ClosedInterval::point(t);
    }

    fn is_fixed(&self) -> bool {
        self.t.is_point() || self.exprs.iter().all(Affine::is_constant)
    }

    /// Requires the last coordinate to equal `v`.
    fn require(&mut self, v: &Scalar) -> bool {
        let b = self.exprs.last().expect("nonempty").clone();
        if b.is_constant() {
            return &b.off == v;
        }
        let t = (v - &b.off) / &b.coef;
        if !self.t.contains(&t) {
            return false;
        }
        self.pin(t);
        true
    }

    /// Extends by one piece; `Err(())` flags a two-parameter continuation.
    fn step(&self, k: usize, p: &Segment) -> Result<Option<SearchState>, ()> {
        let mut s = self.clone();
        s.word.push(k);
        let b = s.exprs.last().expect("nonempty").clone();
        if p.is_point() {
            let (x, y) = p.point_at(&p.lo);
            if !s.require(&y) {
                return Ok(None);
            }
            s.exprs.push(Affine::constant(x));
        } else if p.is_invertible_graph() {
            let next = Affine::new(&b.coef / &p.slope, &(&b.off - &p.intercept) / &p.slope);
            match next.preimage(&p.param_range(), &s.t) {
                None => return Ok(None),
                Some(t) => s.t = t,
            }
            s.exprs.push(next);
        } else if p.is_horizontal() {
            if !s.require(&p.intercept) {
                return Ok(None);
            }
            if !s.is_fixed() {
                return Err(());
            }
            s.t = p.param_range();
            s.exprs.push(Affine::identity());
        } else {
            // vertical: x = intercept over y ∈ [lo, hi]
            match b.preimage(&p.param_range(), &s.t) {
                None => return Ok(None),
                Some(t) => s.t = t,
            }
            s.exprs.push(Affine::constant(p.intercept.clone()));
        }
        Ok(Some(s))
    }

    /// Closing condition `x_{p+1} = x₁` on the current word.
    fn close(&self) -> Option<PeriodicOrbit> {
        let p = self.exprs.len() - 1;
        let a = &self.exprs[0];
        let b = &self.exprs[p];
        let dc = &a.coef - &b.coef;
        let doff = &b.off - &a.off;
        let eval = |t: &Scalar| self.exprs[..p].iter().map(|e| e.eval(t)).collect::<Vec<_>>();
        if !dc.is_zero() {
            let t = &doff / &dc;
            if !self.t.contains(&t) {
                return None;
            }
            return Some(PeriodicOrbit { period: p, points: eval(&t), branch: self.word.clone(), family_end: None });
        }
        if !doff.is_zero() {
            return None;
        }
        let lo = eval(&self.t.lo);
        let hi = eval(&self.t.hi);
        let family_end = (lo != hi).then_some(hi);
        Some(PeriodicOrbit { period: p, points: lo, branch: self.word.clone(), family_end })
    }
}

fn minimal_period(pts: &[Scalar]) -> usize {
    let p = pts.len();
    (1..=p).find(|&q| p.is_multiple_of(q) && (0..p).all(|i| pts[i] == pts[(i + q) % p])).expect("p itself works")
}

fn rotate<T: Clone>(v: &[T], r: usize) -> Vec<T> {
    v[r..].iter().chain(v[..r].iter()).cloned().collect()
}

/// Rotates the orbit so its points are the lexicographically smallest rotation;
/// families are keyed by both ends.
fn canonical(orbit: PeriodicOrbit) -> (Vec<Vec<Scalar>>, PeriodicOrbit) {
    let p = orbit.period;
    let key_of = |o: &PeriodicOrbit| {
        let mut k = vec![o.points.clone()];
        if let Some(e) = &o.family_end {
            k.push(e.clone());
            k.sort();
        }
        k
    };
    (0..p)
        .map(|r| {
            let o = PeriodicOrbit {
                period: p,
                points: rotate(&orbit.points, r),
                branch: rotate(&orbit.branch, r),
                family_end: orbit.family_end.as_ref().map(|e| rotate(e, r)),
            };
            (key_of(&o), o)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.branch.cmp(&b.1.branch)))
        .expect("period >= 1")
}

/// Result of the exhaustive branch-word search.
#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub orbits: Vec<PeriodicOrbit>,
    /// Words whose continuation needs two free parameters; not searched further.
    pub unsupported_words: usize,
}

fn dfs(pieces: &[Segment], state: SearchState, max_period: usize, found: &mut Vec<PeriodicOrbit>, unsupported: &mut usize) {
    if !state.word.is_empty() {
        if let Some(o) = state.close() {
            found.push(o);
        }
    }
    if state.word.len() == max_period {
        return;
    }
    for (k, p) in pieces.iter().enumerate() {
        match state.step(k, p) {
            Ok(Some(next)) => dfs(pieces, next, max_period, found, unsupported),
            Ok(None) => {}
            Err(()) => *unsupported += 1,
        }
    }
}

pub fn search_periodic_orbits(g: &Relation, max_period: usize) -> Result<SearchOutcome, OrbitError> {
    let pieces = g.pieces().map_err(|_| OrbitError::GridRelation)?;
    let root = SearchState {
        t: g.ambient().as_closed(),
        exprs: vec![Affine::identity()],
        word: Vec::new(),
    };
    let results: Vec<(Vec<PeriodicOrbit>, usize)> = (0..pieces.len())
        .into_par_iter()
        .map(|k| {
            let mut found = Vec::new();
            let mut unsupported = 0;
            match root.step(k, &pieces[k]) {
                Ok(Some(s)) if max_period >= 1 => dfs(&pieces, s, max_period, &mut found, &mut unsupported),
                Err(()) => unsupported += 1,
                _ => {}
            }
            (found, unsupported)
        })
        .collect();
    let mut unique: BTreeMap<Vec<Vec<Scalar>>, PeriodicOrbit> = BTreeMap::new();
    let mut unsupported_words = 0;
    for (found, u) in results {
        unsupported_words += u;
        for o in found {
            let fam_ok = o.family_end.as_deref().is_none_or(|e| minimal_period(e) == o.period);
            if minimal_period(&o.points) != o.period || !fam_ok {
                continue;
            }
            debug_assert!(o.verify(g), "search produced an invalid orbit {o:?}");
            let (key, o) = canonical(o);
            match unique.get(&key) {
                Some(prev) if prev.branch <= o.branch => {}
                _ => {
                    unique.insert(key, o);
                }
            }
        }
    }
    let mut orbits: Vec<PeriodicOrbit> = unique.into_values().collect();
    orbits.sort_by(|a, b| a.period.cmp(&b.period).then_with(|| a.points.cmp(&b.points)).then_with(|| a.branch.cmp(&b.branch)));
    Ok(SearchOutcome { orbits, unsupported_words })
}

/// All periodic orbits of period at most `max_period`, up to rotation.
pub fn find_periodic_orbits(g: &Relation, max_period: usize) -> Result<Vec<PeriodicOrbit>, OrbitError> {
    Ok(search_periodic_orbits(g, max_period)?.orbits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NoPeriodicProof {
    /// Every periodic orbit is the fixed point at the origin, which exists iff `origin_fixed`.
    Proven { argument: String, origin_fixed: bool },
    NotApplicable { reason: String },
}

impl NoPeriodicProof {
    pub fn is_proven(&self) -> bool {
        matches!(self, NoPeriodicProof::Proven { .. })
    }
}

fn not_applicable(reason: impl Into<String>) -> NoPeriodicProof {
    NoPeriodicProof::NotApplicable { reason: reason.into() }
}

/// Whether every positive power of `a` is irrational: `a^k` rational forces
/// `a^k = ā^k`, hence `|a| = |ā|` and `a = ±ā`, i.e. a vanishing rational or
/// irrational part.
pub fn powers_all_irrational(a: &Scalar) -> bool {
    !a.is_rational() && !num_traits::Zero::is_zero(a.rational_part())
}

/// Periodic points of a union of lines through the origin: a cycle composes to
/// `x₁ = (∏ 1/s) x₁`, so it sits at 0 unless a product of slopes equals 1. That
/// is ruled out when at most one slope is irrational with all powers irrational
/// and the rational slopes lie strictly on one side of 1 in absolute value.
pub fn prove_no_nonzero_periodic(g: &Relation) -> NoPeriodicProof {
    let pieces = match g.pieces() {
        Ok(p) if !p.is_empty() => p,
        _ => return not_applicable("needs a nonempty point or segment relation"),
    };
    let mut slopes: Vec<Scalar> = Vec::new();
    for p in &pieces {
        if !p.is_invertible_graph() {
            return not_applicable("a piece is a point, horizontal or vertical");
        }
        if !p.intercept.is_zero() {
            return not_applicable("a piece does not pass through the origin");
        }
        slopes.push(p.slope.clone());
    }
    slopes.sort();
    slopes.dedup();
    let (irr, rat): (Vec<Scalar>, Vec<Scalar>) = slopes.into_iter().partition(|s| !s.is_rational());
    if irr.len() > 1 {
        return not_applicable("more than one irrational slope");
    }
    if let Some(a) = irr.first() {
        if !powers_all_irrational(a) {
            return not_applicable(format!("slope {a} has a rational power"));
        }
    }
    let one = Scalar::one();
    let above = rat.iter().all(|r| r.abs() > one);
    let below = rat.iter().all(|r| r.abs() < one);
    if !(above || below) {
        return not_applicable("rational slopes can multiply to 1");
    }
    let zero = Scalar::zero();
    let origin_fixed = g.ambient().contains(&zero) && g.contains(&zero, &zero).unwrap_or(false);
    let mut names: Vec<String> = irr.iter().chain(rat.iter()).map(|s| s.to_string()).collect();
    names.sort();
    NoPeriodicProof::Proven {
        argument: format!(
            "lines through the origin with slopes {{{}}}: no product of positive powers equals 1",
            names.join(", ")
        ),
        origin_fixed,
    }
}

/// Shrinks the relation to the part that can carry an infinite backward orbit:
/// iterate `K ← p₁(G ∩ K²) ∩ p₂(G ∩ K²)`. Periodic points survive every round.
pub fn recurrent_core(g: &Relation, max_rounds: usize) -> Result<Relation, OrbitError> {
    let mut cur = g.clone();
    let mut k = vec![g.ambient().as_closed()];
    for _ in 0..max_rounds {
        let restricted = cur.restrict(&k)?;
        let p1 = restricted.project(1).intervals();
        let p2 = restricted.project(2).intervals();
        let next = crate::interval::intersect_unions(&merge_intervals(p1), &merge_intervals(p2));
        if next == k && restricted == cur {
            break;
        }
        k = next;
        cur = restricted;
    }
    Ok(cur.restrict(&k)?)
}

/// A point `c` with `(c, c)` on the line of every piece, when all pieces are
/// non-vertical lines with slope ≠ 1 sharing one.
pub fn common_line_fixed_point(g: &Relation) -> Option<Scalar> {
    let pieces = g.pieces().ok()?;
    let mut c: Option<Scalar> = None;
    for p in &pieces {
        if !p.is_invertible_graph() || p.slope == Scalar::one() {
            return None;
        }
        let here = &p.intercept / &(&Scalar::one() - &p.slope);
        match &c {
            None => c = Some(here),
            Some(prev) if *prev == here => {}
            Some(_) => return None,
        }
    }
    c
}

/// The affine map sending `c` to 0 used to move a common fixed point of the
/// branch lines to the origin, with the widened ambient interval it acts on.
pub fn recentering_map(amb: &AmbientInterval, c: &Scalar) -> Homeomorphism {
    let lo = amb.lo().min_of(c).clone();
    let hi = amb.hi().max_of(c).clone();
    let source = AmbientInterval::new(lo.clone(), hi.clone()).expect("nondegenerate");
    if c == &lo {
        Homeomorphism::affine(source, AmbientInterval::unit())
    } else if c == &hi {
        let w = &hi - &lo;
        let map = Affine::new(-(Scalar::one() / &w), &hi / &w);
        Homeomorphism::new(source.clone(), AmbientInterval::unit(), vec![HomeoPiece { dom: source.as_closed(), map }])
            .expect("decreasing affine map")
    } else {
        let target = AmbientInterval::new(&lo - c, &hi - c).expect("nondegenerate");
        let map = Affine::new(Scalar::one(), -c);
        Homeomorphism::new(source.clone(), target, vec![HomeoPiece { dom: source.as_closed(), map }]).expect("translation")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofLevel {
    Proven,
    BoundedSearch,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub max_period: usize,
    pub orbits: Vec<PeriodicOrbit>,
    pub proof_level: ProofLevel,
    /// How the census was proven complete for all periods, when it was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argument: Option<String>,
    #[serde(skip_serializing_if = "is_zero")]
    pub unsupported_words: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl OrbitCensus {
    /// Number of periodic points found; `None` when a family makes it infinite.
    pub fn point_count(&self) -> Option<usize> {
        if self.orbits.iter().any(PeriodicOrbit::is_family) {
            return None;
        }
        Some(self.orbits.iter().map(|o| o.period).sum())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serializes")
    }
}

/// Tries to prove the census complete: directly, on the recurrent core, and after
/// moving a common fixed point of the branch lines to the origin. Returns the
/// argument and the single allowed fixed point, if any.
fn prove_census(g: &Relation) -> Result<Option<(String, Option<Scalar>)>, OrbitError> {
    let zero = Scalar::zero();
    if let NoPeriodicProof::Proven { argument, origin_fixed } = prove_no_nonzero_periodic(g) {
        return Ok(Some((argument, origin_fixed.then_some(zero))));
    }
    let core = recurrent_core(g, 64)?;
    if core.is_empty() {
        return Ok(Some(("the recurrent core is empty".into(), None)));
    }
    if core != *g {
        if let NoPeriodicProof::Proven { argument, origin_fixed } = prove_no_nonzero_periodic(&core) {
            return Ok(Some((format!("on the recurrent core, {argument}"), origin_fixed.then_some(zero))));
        }
    }
    if let Some(c) = common_line_fixed_point(&core) {
        let phi = recentering_map(core.ambient(), &c);
        let widened = core.with_ambient(phi.source().clone())?;
        let image = apply_homeo(&widened, &phi).map_err(|e| OrbitError::Relation(RelationError::Invalid(e.to_string())))?;
        if let NoPeriodicProof::Proven { argument, .. } = prove_no_nonzero_periodic(&image) {
            let c_fixed = g.ambient().contains(&c) && g.contains(&c, &c).unwrap_or(false);
            return Ok(Some((
                format!("branch lines share the fixed point {c}; conjugating it to 0: {argument}"),
                c_fixed.then_some(c),
            )));
        }
    }
    Ok(None)
}

/// Complete-census test for finite relations: no cycle, or exactly one simple cycle.
fn prove_finite_census(f: &Relation) -> Result<Option<String>, OrbitError> {
    let dg = FiniteDigraph::of(f).map_err(|e| OrbitError::Relation(RelationError::Invalid(e.to_string())))?;
    let cyc = cycles_of_finite(f)?;
    Ok(match cyc.len() {
        0 => Some("the digraph is acyclic".into()),
        1 if !dg.has_branching_component() => Some("the digraph has exactly one simple cycle".into()),
        _ => None,
    })
}

pub fn orbit_census(g: &Relation, max_period: usize) -> Result<OrbitCensus, OrbitError> {
    let search = search_periodic_orbits(g, max_period)?;
    let mut census = OrbitCensus {
        max_period,
        orbits: search.orbits,
        proof_level: ProofLevel::BoundedSearch,
        argument: None,
        unsupported_words: search.unsupported_words,
    };
    if g.as_points().is_some() {
        if let Some(arg) = prove_finite_census(g)? {
            let longest = cycles_of_finite(g)?.iter().map(Vec::len).max().unwrap_or(0);
            if longest <= max_period {
                census.proof_level = ProofLevel::Proven;
                census.argument = Some(arg);
            }
        }
        return Ok(census);
    }
    if let Some((argument, fixed)) = prove_census(g)? {
        let expected: Vec<Vec<Scalar>> = fixed.into_iter().map(|c| vec![c]).collect();
        let got: Vec<Vec<Scalar>> = census.orbits.iter().map(|o| o.points.clone()).collect();
        if census.orbits.iter().any(PeriodicOrbit::is_family) || got != expected {
            return Err(OrbitError::ProofMismatch(format!("{got:?} vs {expected:?}")));
        }
        census.proof_level = ProofLevel::Proven;
        census.argument = Some(argument);
    }
    Ok(census)
}

/// Simple cycles of the digraph `x → y ⇔ (x, y) ∈ F`, each starting at its smallest vertex.
pub fn cycles_of_finite(f: &Relation) -> Result<Vec<Vec<Scalar>>, OrbitError> {
    let dg = FiniteDigraph::of(f).map_err(|e| OrbitError::Relation(RelationError::Invalid(e.to_string())))?;
    let n = dg.vertices.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    fn walk(dg: &FiniteDigraph, start: usize, path: &mut Vec<usize>, on: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        for &w in dg.adjacency.row(last) {
            if w == start {
                out.push(path.clone());
            } else if w > start && !on[w] {
                on[w] = true;
                path.push(w);
                walk(dg, start, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        walk(&dg, s, &mut vec![s], &mut on, &mut out);
    }
    let mut cycles: Vec<Vec<Scalar>> =
        out.into_iter().map(|c| c.into_iter().map(|i| dg.vertices[i].clone()).collect()).collect();
    cycles.sort();
    Ok(cycles)
}

/// The periodic point obtained by running a digraph cycle backwards forever.
pub fn build_periodic_from_cycle(f: &Relation, cycle: &[Scalar]) -> Result<PeriodicOrbit, OrbitError> {
    if cycle.is_empty() {
        return Err(OrbitError::InvalidCycle("empty cycle".into()));
    }
    let dg = FiniteDigraph::of(f).map_err(|e| OrbitError::Relation(RelationError::Invalid(e.to_string())))?;
    let idx = cycle
        .iter()
        .map(|v| dg.index_of(v).ok_or_else(|| OrbitError::InvalidCycle(format!("{v} is not a vertex"))))
        .collect::<Result<Vec<_>, _>>()?;
    let p = idx.len();
    for i in 0..p {
        if !dg.has_edge(idx[i], idx[(i + 1) % p]) {
            return Err(OrbitError::InvalidCycle(format!("no edge {} -> {}", cycle[i], cycle[(i + 1) % p])));
        }
    }
    let points: Vec<Scalar> = cycle.iter().rev().cloned().collect();
    let seq: Vec<Scalar> = (0..3 * p).map(|k| points[k % p].clone()).collect();
    let in_product = (0..seq.len() - 1).all(|k| f.contains(&seq[k + 1], &seq[k]).unwrap_or(false));
    let shift_fixed = (0..2 * p).all(|k| seq[k + p] == seq[k]);
    if !in_product || !shift_fixed {
        return Err(OrbitError::InvalidCycle("repetition leaves the Mahavier product".into()));
    }
    let q = minimal_period(&points);
    let pieces = f.pieces()?;
    let branch = (0..q)
        .map(|i| {
            let (x, y) = (&points[(i + 1) % q], &points[i]);
            pieces.iter().position(|s| s.contains(x, y)).expect("edge is a point of F")
        })
        .collect();
    let orbit = PeriodicOrbit { period: q, points: points[..q].to_vec(), branch, family_end: None };
    Ok(canonical(orbit).1)
}

/// A finite digraph has an infinite walk iff it has a cycle.
pub fn infinite_product_nonempty(f: &Relation) -> Result<bool, OrbitError> {
    let dg = FiniteDigraph::of(f).map_err(|e| OrbitError::Relation(RelationError::Invalid(e.to_string())))?;
    Ok(dg.components().iter().any(|c| {
        let inside: BTreeSet<usize> = c.iter().copied().collect();
        c.iter().any(|&i| dg.adjacency.row(i).iter().any(|j| inside.contains(j)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn pts(v: &[(&str, &str)]) -> Relation {
        Relation::points(AmbientInterval::unit(), v.iter().map(|(x, y)| (s(x), s(y))).collect()).unwrap()
    }

    fn lines(v: &[(&str, &str, &str, &str)]) -> Relation {
        Relation::segments(
            AmbientInterval::unit(),
            v.iter().map(|(m, c, lo, hi)| Segment::graph(s(m), s(c), s(lo), s(hi))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn two_cycle_of_points() {
        let f = pts(&[("0", "1"), ("1", "0")]);
        let o = find_periodic_orbits(&f, 2).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].points, vec![s("0"), s("1")]);
        assert_eq!(o[0].period, 2);
    }

    #[test]
    fn full_shift_cycles_and_orbits() {
        let f4 = pts(&[("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]);
        assert_eq!(cycles_of_finite(&f4).unwrap(), vec![vec![s("0")], vec![s("0"), s("1")], vec![s("1")]]);
        // primitive binary necklaces: 2, 1, 2, 3 of lengths 1..4
        let o = find_periodic_orbits(&f4, 4).unwrap();
        assert_eq!(o.len(), 2 + 1 + 2 + 3);
        assert!(o.iter().all(|o| o.verify(&f4)));
    }

    #[test]
    fn counterexample_cycles() {
        let gc = pts(&[("0", "1"), ("0", "3/4"), ("3/4", "0"), ("1", "0")]);
        let c = cycles_of_finite(&gc).unwrap();
        assert_eq!(c, vec![vec![s("0"), s("3/4")], vec![s("0"), s("1")]]);
        let o = build_periodic_from_cycle(&gc, &c[1]).unwrap();
        assert_eq!((o.period, o.points.clone()), (2, vec![s("0"), s("1")]));
        assert!(infinite_product_nonempty(&gc).unwrap());
        assert!(!infinite_product_nonempty(&pts(&[("0", "1")])).unwrap());
        assert!(build_periodic_from_cycle(&gc, &[s("1"), s("3/4")]).is_err());
    }

    #[test]
    fn identity_diagonal_is_a_family() {
        let d = lines(&[("1", "0", "0", "1")]);
        let o = find_periodic_orbits(&d, 3).unwrap();
        assert_eq!(o.len(), 1);
        assert!(o[0].is_family());
        assert_eq!(o[0].period, 1);
    }

    #[test]
    fn tent_has_two_fixed_points_and_one_two_cycle() {
        let tent = lines(&[("2", "0", "0", "1/2"), ("-2", "2", "1/2", "1")]);
        let o = find_periodic_orbits(&tent, 2).unwrap();
        let fixed: Vec<_> = o.iter().filter(|o| o.period == 1).map(|o| o.points[0].clone()).collect();
        assert_eq!(fixed, vec![s("0"), s("2/3")]);
        let two: Vec<_> = o.iter().filter(|o| o.period == 2).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].points, vec![s("2/5"), s("4/5")]);
    }

    #[test]
    fn branch_composition_through_the_origin() {
        let a = s("1+sqrt(2)");
        let b = s("1/3");
        let g = Relation::segments(
            AmbientInterval::unit(),
            vec![
                Segment::graph(a.clone(), Scalar::zero(), Scalar::zero(), a.recip()),
                Segment::graph(b.clone(), Scalar::zero(), Scalar::zero(), Scalar::one()),
            ],
        )
        .unwrap();
        // canonical order sorts by slope: b < a
        let m = branch_compose(&g, &[1, 0]).unwrap();
        assert_eq!(m.c, (&a * &b).recip());
        assert!(m.e.is_zero());
        let flat = lines(&[("0", "1/2", "0", "1")]);
        assert_eq!(branch_compose(&flat, &[0]).unwrap_err(), OrbitError::NotInvertible(0));
    }

    #[test]
    fn irrationality_prover_scope() {
        assert!(powers_all_irrational(&s("1+sqrt(2)")));
        assert!(!powers_all_irrational(&s("sqrt(2)")));
        assert!(!powers_all_irrational(&s("3/2")));
        let root2 = Relation::segments(
            AmbientInterval::unit(),
            vec![
                Segment::graph(s("sqrt(2)"), Scalar::zero(), Scalar::zero(), s("1/2")),
                Segment::graph(s("1/2"), Scalar::zero(), Scalar::zero(), s("1")),
            ],
        )
        .unwrap();
        assert!(!prove_no_nonzero_periodic(&root2).is_proven());
        let rational = lines(&[("3/2", "0", "0", "1/2"), ("1/3", "0", "0", "1")]);
        assert!(!prove_no_nonzero_periodic(&rational).is_proven());
        let same_side = lines(&[("1/2", "0", "0", "1"), ("1/3", "0", "0", "1")]);
        assert!(prove_no_nonzero_periodic(&same_side).is_proven());
    }

    #[test]
    fn horizontal_piece_reparametrizes() {
        // y = 1/2 on x ∈ [0, 1], plus the vertical x = 1/2 for y ∈ [0, 1]: fixed point (1/2, 1/2) and
        // a family of 2-cycles (1/2, t).
        let g = Relation::segments(
            AmbientInterval::unit(),
            vec![Segment::graph(Scalar::zero(), s("1/2"), s("0"), s("1")), Segment::vertical(s("1/2"), s("0"), s("1"))],
        )
        .unwrap();
        let o = find_periodic_orbits(&g, 2).unwrap();
        assert!(o.iter().any(|o| o.period == 1 && o.points == vec![s("1/2")]));
        assert!(o.iter().all(|o| o.verify(&g)));
    }
}
