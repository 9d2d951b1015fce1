//! Well-aligned pairs `(L, R)` split by a level `b`, the fiber functions
//! `r_G` / `ℓ_G`, the iteration count `ψ`, the separation gap `ε`, and a
//! certificate search whose success bounds the entropy below by `log 2/(ψ+2)`.
//!
//! Everything is exact: the fiber functions of a union of pieces are piecewise
//! affine in the height `t`, so sets like `{t : r_L(t) > b}` are finite unions
//! of intervals with open or closed ends.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::interval::{merge_intervals, AmbientInterval, ClosedInterval, Span, SpanSet};
use crate::relation::{Affine, Relation, RelationError, Segment};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellAlignedError {
    #[error("{0} is outside range projection")]
    OutsideRange(Box<Scalar>),
    #[error("alignment invariant broken: {0}")]
    InvariantBroken(String),
    #[error("L_b⁺∪L_b touches Δ")]
    TouchesDiagonal,
    #[error("level b = {0} must be positive and inside the ambient interval")]
    BadLevel(Box<Scalar>),
    #[error("p₂(L) ∩ p₂(R) is empty")]
    EmptyIntersection,
    #[error("not well-aligned: {0}")]
    NotAligned(Box<Violation>),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// One side of a split by the level `y = b`: the closure of the part and whether
/// its point on `y = b` is excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPart {
    pub closure: Segment,
    pub excludes_level_point: bool,
}

/// `A⁺_b` (`y > b`), `A⁻_b` (`y < b`) and `A_b` (`y = b`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaSplit {
    pub plus: Vec<SplitPart>,
    pub minus: Vec<SplitPart>,
    pub level: Vec<Segment>,
}

pub fn delta_split(a: &Relation, b: &Scalar) -> Result<DeltaSplit, RelationError> {
    Ok(split_pieces(&a.pieces()?, b))
}

fn split_pieces(pieces: &[Segment], b: &Scalar) -> DeltaSplit {
    let mut out = DeltaSplit::default();
    for p in pieces {
        let (_, cy) = p.coords();
        let range = p.param_range();
        let whole = |out: &mut DeltaSplit, y: &Scalar| match y.cmp(b) {
            Ordering::Greater => out.plus.push(SplitPart { closure: p.clone(), excludes_level_point: false }),
            Ordering::Less => out.minus.push(SplitPart { closure: p.clone(), excludes_level_point: false }),
            Ordering::Equal => out.level.push(p.clone()),
        };
        if cy.is_constant() {
            whole(&mut out, &cy.off);
            continue;
        }
        let t = (b - &cy.off) / &cy.coef;
        if !range.contains(&t) {
            whole(&mut out, &cy.eval(&range.lo));
            continue;
        }
        out.level.push(p.sub(&ClosedInterval::point(t.clone())));
        let up_is_hi = cy.coef.signum() > 0;
        for (lo, hi, is_hi_side) in [(range.lo.clone(), t.clone(), false), (t.clone(), range.hi.clone(), true)] {
            if lo == hi {
                continue;
            }
            let part = SplitPart { closure: p.sub(&ClosedInterval::new(lo, hi)), excludes_level_point: true };
            if is_hi_side == up_is_hi {
                out.plus.push(part);
            } else {
                out.minus.push(part);
            }
        }
    }
    out
}

/// `(ℓ_G(t), r_G(t))`: the least and greatest `x` with `(x, t) ∈ G`.
pub fn r_ell(g: &Relation, t: &Scalar) -> Result<(Scalar, Scalar), WellAlignedError> {
    fiber_bounds(&g.pieces()?, t).ok_or_else(|| WellAlignedError::OutsideRange(Box::new(t.clone())))
}

fn fiber_bounds(pieces: &[Segment], t: &Scalar) -> Option<(Scalar, Scalar)> {
    let mut acc: Option<(Scalar, Scalar)> = None;
    for p in pieces {
        if let Some(f) = p.fiber(t) {
            acc = Some(match acc {
                None => (f.lo, f.hi),
                Some((lo, hi)) => (lo.min(f.lo), hi.max(f.hi)),
            });
        }
    }
    acc
}

fn r_of(pieces: &[Segment], t: &Scalar) -> Result<Scalar, WellAlignedError> {
    fiber_bounds(pieces, t).map(|f| f.1).ok_or_else(|| WellAlignedError::OutsideRange(Box::new(t.clone())))
}

fn ell_of(pieces: &[Segment], t: &Scalar) -> Result<Scalar, WellAlignedError> {
    fiber_bounds(pieces, t).map(|f| f.0).ok_or_else(|| WellAlignedError::OutsideRange(Box::new(t.clone())))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Max,
    Min,
}

/// `r_G` or `ℓ_G` as an exact piecewise-affine function of the height: exact
/// values at the breakpoints and one affine formula on each open gap between them.
#[derive(Clone, Debug)]
struct Envelope {
    bps: Vec<Scalar>,
    vals: Vec<Option<Scalar>>,
    gaps: Vec<Option<Affine>>,
}

impl Envelope {
    fn build(pieces: &[Segment], side: Side) -> Envelope {
        let pick = |a: Scalar, b: Scalar| match side {
            Side::Max => a.max(b),
            Side::Min => a.min(b),
        };
        let mut parts: Vec<(Affine, ClosedInterval)> = Vec::new();
        let mut isolated: Vec<(Scalar, Scalar)> = Vec::new();
        for p in pieces {
            if p.is_invertible_graph() {
                parts.push((Affine::new(p.slope.recip(), -(&p.intercept / &p.slope)), p.y_range()));
            } else if p.is_vertical() {
                parts.push((Affine::constant(p.intercept.clone()), p.param_range()));
            } else {
                let xr = p.x_range();
                let x = if side == Side::Max { xr.hi } else { xr.lo };
                isolated.push((p.intercept.clone(), x));
            }
        }
        let mut bps: Vec<Scalar> = isolated.iter().map(|(t, _)| t.clone()).collect();
        for (i, (f, d)) in parts.iter().enumerate() {
            bps.push(d.lo.clone());
            bps.push(d.hi.clone());
            for (g, e) in &parts[i + 1..] {
                if f.coef != g.coef {
                    let t = (&g.off - &f.off) / (&f.coef - &g.coef);
                    if d.contains(&t) && e.contains(&t) {
                        bps.push(t);
                    }
                }
            }
        }
        bps.sort();
        bps.dedup();
        let vals = bps
            .iter()
            .map(|t| {
                let from_parts = parts.iter().filter(|(_, d)| d.contains(t)).map(|(f, _)| f.eval(t));
                let from_points = isolated.iter().filter(|(u, _)| u == t).map(|(_, x)| x.clone());
                from_parts.chain(from_points).reduce(pick)
            })
            .collect();
        let gaps = bps
            .windows(2)
            .map(|w| {
                let mid = w[0].midpoint(&w[1]);
                parts
                    .iter()
                    .filter(|(_, d)| d.contains(&mid))
                    .map(|(f, _)| (f.eval(&mid), f))
                    .reduce(|a, b| {
                        let better = match side {
                            Side::Max => b.0 > a.0,
                            Side::Min => b.0 < a.0,
                        };
                        if better {
                            b
                        } else {
                            a
                        }
                    })
                    .map(|(_, f)| f.clone())
            })
            .collect();
        Envelope { bps, vals, gaps }
    }

    fn domain(&self) -> SpanSet {
        let points = self
            .bps
            .iter()
            .zip(&self.vals)
            .filter(|(_, v)| v.is_some())
            .map(|(t, _)| Span::closed(t.clone(), t.clone()));
        let gaps = self
            .bps
            .windows(2)
            .zip(&self.gaps)
            .filter(|(_, f)| f.is_some())
            .map(|(w, _)| Span::open(w[0].clone(), w[1].clone()));
        SpanSet::from_spans(points.chain(gaps))
    }

    /// The affine formula on the open gap containing `t`, which must not be a breakpoint.
    fn gap_at(&self, t: &Scalar) -> Option<&Affine> {
        match self.bps.binary_search(t) {
            Ok(_) => None,
            Err(0) => None,
            Err(i) if i == self.bps.len() => None,
            Err(i) => self.gaps[i - 1].as_ref(),
        }
    }

    /// `{t ∈ dom : env(t) ∈ s}`.
    fn preimage(&self, s: &SpanSet) -> SpanSet {
        let mut spans = Vec::new();
        for (t, v) in self.bps.iter().zip(&self.vals) {
            if v.as_ref().is_some_and(|v| s.contains(v)) {
                spans.push(Span::closed(t.clone(), t.clone()));
            }
        }
        for (w, f) in self.bps.windows(2).zip(&self.gaps) {
            let Some(f) = f else { continue };
            let gap = Span::open(w[0].clone(), w[1].clone());
            if f.is_constant() {
                if s.contains(&f.off) {
                    spans.push(gap);
                }
                continue;
            }
            for piece in s.spans() {
                spans.push(piece.preimage_affine(&f.coef, &f.off).intersect(&gap));
            }
        }
        SpanSet::from_spans(spans)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Point { x: Scalar, y: Scalar },
    Value { t: Scalar },
    Missing { what: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: u8,
    pub witness: Witness,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "clause ({}) fails: {}", self.clause, self.detail)
    }
}

fn missing(clause: u8, what: &str) -> Violation {
    Violation { clause, witness: Witness::Missing { what: what.into() }, detail: format!("{what} is empty") }
}

/// A point of `iv` outside the merged closed union `cover`, preferring interior points.
fn uncovered_point(iv: &ClosedInterval, cover: &[ClosedInterval]) -> Option<Scalar> {
    if iv.is_point() {
        return (!cover.iter().any(|c| c.contains(&iv.lo))).then(|| iv.lo.clone());
    }
    // everything in [iv.lo, pos) is covered; pos itself is still undecided
    let mut pos = iv.lo.clone();
    for c in cover {
        if c.hi < pos {
            continue;
        }
        if c.lo > pos {
            return Some(pos.midpoint(&c.lo.clone().min(iv.hi.clone())));
        }
        pos = c.hi.clone();
        if pos >= iv.hi {
            return None;
        }
    }
    Some(pos.midpoint(&iv.hi))
}

fn projection(pieces: &[Segment], axis: u8) -> Vec<ClosedInterval> {
    merge_intervals(pieces.iter().map(|p| if axis == 1 { p.x_range() } else { p.y_range() }).collect())
}

struct Parts {
    upper: Vec<Segment>,
    lower: Vec<Segment>,
    plus_closure: Vec<Segment>,
}

fn l_parts(l: &[Segment], amb: &AmbientInterval, b: &Scalar) -> Parts {
    let all = amb.as_closed();
    let up = ClosedInterval::new(b.clone(), amb.hi().clone());
    let down = ClosedInterval::new(amb.lo().clone(), b.clone());
    let upper: Vec<Segment> = l.iter().filter_map(|p| p.clip(&all, &up)).collect();
    let lower: Vec<Segment> = l.iter().filter_map(|p| p.clip(&all, &down)).collect();
    let plus_closure = l
        .iter()
        .filter(|p| &p.y_range().hi > b)
        .filter_map(|p| p.clip(&all, &up))
        .collect();
    Parts { upper, lower, plus_closure }
}

fn segment_violations(l: &[Segment], r: &[Segment], amb: &AmbientInterval, b: &Scalar, first_only: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    macro_rules! report {
        ($v:expr) => {{
            out.push($v);
            if first_only {
                return out;
            }
        }};
    }
    let parts = l_parts(l, amb, b);
    let endpoints = |ps: &[Segment]| -> Vec<(Scalar, Scalar)> {
        ps.iter().flat_map(|p| {
            let (a, c) = p.endpoints();
            [a, c]
        })
        .collect()
    };

    // (1)
    if parts.plus_closure.is_empty() {
        report!(missing(1, "L_b⁺"));
    }
    if parts.lower.is_empty() {
        report!(missing(1, "L_b⁻ ∪ L_b"));
    }
    if let Some((x, y)) = endpoints(r).into_iter().find(|(_, y)| y > b) {
        report!(Violation { clause: 1, detail: format!("R has a point above b at ({x}, {y})"), witness: Witness::Point { x, y } });
    }

    // (2)
    if let Some((x, y)) = endpoints(&parts.upper).into_iter().find(|(x, y)| y <= x) {
        report!(Violation { clause: 2, detail: format!("L_b⁺ ∪ L_b meets y ≤ x at ({x}, {y})"), witness: Witness::Point { x, y } });
    }
    if let Some((x, y)) = endpoints(&parts.lower).into_iter().find(|(x, y)| y < x) {
        report!(Violation { clause: 2, detail: format!("L_b⁻ meets y < x at ({x}, {y})"), witness: Witness::Point { x, y } });
    }
    if let Some((x, y)) = endpoints(r).into_iter().find(|(x, y)| y >= x) {
        report!(Violation { clause: 2, detail: format!("R meets y ≥ x at ({x}, {y})"), witness: Witness::Point { x, y } });
    }

    // (3)
    let p2r = projection(r, 2);
    for iv in projection(&parts.lower, 2).into_iter().chain(projection(&parts.lower, 1)) {
        if let Some(t) = uncovered_point(&iv, &p2r) {
            report!(Violation {
                clause: 3,
                detail: format!("{t} lies in p₂ ∪ p₁ of L_b⁻ ∪ L_b but not in p₂(R)"),
                witness: Witness::Value { t }
            });
            break;
        }
    }

    // (4): p₂(L) is closed, so testing the closure of p₁(L_b⁺) is equivalent
    let p2l = projection(l, 2);
    for iv in projection(&parts.plus_closure, 1).into_iter().chain(projection(r, 1)) {
        if let Some(t) = uncovered_point(&iv, &p2l) {
            report!(Violation {
                clause: 4,
                detail: format!("{t} lies in p₁(L_b⁺) ∪ p₁(R) but not in p₂(L)"),
                witness: Witness::Value { t }
            });
            break;
        }
    }
    out
}

fn same_ambient(l: &Relation, r: &Relation) -> Result<(), WellAlignedError> {
    if l.ambient() != r.ambient() {
        return Err(RelationError::AmbientMismatch.into());
    }
    Ok(())
}

/// `Ok(())` when `L` and `R` are well-aligned by `b`; otherwise the first failing clause.
pub fn check_well_aligned(l: &Relation, r: &Relation, b: &Scalar) -> Result<Result<(), Violation>, WellAlignedError> {
    same_ambient(l, r)?;
    let v = segment_violations(&l.pieces()?, &r.pieces()?, l.ambient(), b, true);
    Ok(match v.into_iter().next() {
        None => Ok(()),
        Some(v) => Err(v),
    })
}

/// Every failing condition, one witness per check.
pub fn violations(l: &Relation, r: &Relation, b: &Scalar) -> Result<Vec<Violation>, WellAlignedError> {
    same_ambient(l, r)?;
    Ok(segment_violations(&l.pieces()?, &r.pieces()?, l.ambient(), b, false))
}

fn require_aligned(l: &[Segment], r: &[Segment], amb: &AmbientInterval, b: &Scalar) -> Result<(), WellAlignedError> {
    match segment_violations(l, r, amb, b, true).into_iter().next() {
        None => Ok(()),
        Some(v) => Err(WellAlignedError::NotAligned(Box::new(v))),
    }
}

/// Smallest `k` with `a^k · hi ≤ b`, where `a = sup r_L(t)/t` over heights `t ≥ b`.
fn uniform_bound(l: &[Segment], amb: &AmbientInterval, b: &Scalar) -> Result<usize, WellAlignedError> {
    if b.signum() <= 0 || !amb.contains(b) {
        return Err(WellAlignedError::BadLevel(Box::new(b.clone())));
    }
    let env = Envelope::build(l, Side::Max);
    let mut ratios: Vec<Scalar> = Vec::new();
    for (t, v) in env.bps.iter().zip(&env.vals) {
        if let (true, Some(v)) = (t >= b, v) {
            ratios.push(v / t);
        }
    }
    for (w, f) in env.bps.windows(2).zip(&env.gaps) {
        let Some(f) = f else { continue };
        if &w[1] <= b {
            continue;
        }
        let lo = w[0].clone().max(b.clone());
        for t in [lo, w[1].clone()] {
            ratios.push(&f.eval(&t) / &t);
        }
    }
    let a = ratios.into_iter().max().ok_or_else(|| WellAlignedError::InvariantBroken("L has no height above b".into()))?;
    if a >= Scalar::one() {
        return Err(WellAlignedError::TouchesDiagonal);
    }
    let mut power = a.clone();
    for k in 1..=100_000 {
        if &(&power * amb.hi()) <= b {
            return Ok(k);
        }
        power = &power * &a;
    }
    Err(WellAlignedError::InvariantBroken("contraction bound exceeds 100000 steps".into()))
}

/// `ψ(t)`: 0 at heights `t ≤ b`, otherwise the number of `r_L` steps needed to reach height `≤ b`.
pub fn psi_value(l: &Relation, r: &Relation, b: &Scalar, t: &Scalar) -> Result<usize, WellAlignedError> {
    same_ambient(l, r)?;
    let (lp, rp) = (l.pieces()?, r.pieces()?);
    require_aligned(&lp, &rp, l.ambient(), b)?;
    let k = uniform_bound(&lp, l.ambient(), b)?;
    psi_of(&lp, b, t, k)
}

fn psi_of(l: &[Segment], b: &Scalar, t: &Scalar, bound: usize) -> Result<usize, WellAlignedError> {
    if fiber_bounds(l, t).is_none() {
        return Err(WellAlignedError::OutsideRange(Box::new(t.clone())));
    }
    let mut cur = t.clone();
    let mut k = 0;
    while &cur > b {
        cur = r_of(l, &cur)?;
        k += 1;
        if k > bound {
            return Err(WellAlignedError::InvariantBroken(format!("ψ({t}) exceeds the uniform bound {bound}")));
        }
    }
    Ok(k)
}

/// `(ψ, uniform_k)`: `ψ` is the largest `k` for which `{t : t, r_L(t), …, r_L^{k−1}(t) > b}`
/// is nonempty, found by pulling these level sets back through `r_L` exactly.
pub fn psi_max(l: &Relation, r: &Relation, b: &Scalar) -> Result<(usize, usize), WellAlignedError> {
    same_ambient(l, r)?;
    let (lp, rp) = (l.pieces()?, r.pieces()?);
    require_aligned(&lp, &rp, l.ambient(), b)?;
    psi_and_bound(&lp, l.ambient(), b)
}

fn psi_and_bound(l: &[Segment], amb: &AmbientInterval, b: &Scalar) -> Result<(usize, usize), WellAlignedError> {
    let bound = uniform_bound(l, amb, b)?;
    let env = Envelope::build(l, Side::Max);
    let above = env.domain().intersect_span(&Span { lo: b.clone(), hi: amb.hi().clone(), lo_open: true, hi_open: false });
    let mut level = above.clone();
    let mut psi = 0;
    while !level.is_empty() {
        psi += 1;
        if psi > bound {
            return Err(WellAlignedError::InvariantBroken(format!("ψ exceeds the uniform bound {bound}")));
        }
        level = above.intersect(&env.preimage(&level));
    }
    Ok((psi, bound))
}

/// `inf {ℓ_R(t) − r_L(t) : t ∈ p₂(L) ∩ p₂(R)}`, exactly.
pub fn epsilon_gap(l: &Relation, r: &Relation) -> Result<Scalar, WellAlignedError> {
    same_ambient(l, r)?;
    gap_of(&l.pieces()?, &r.pieces()?)
}

fn gap_of(l: &[Segment], r: &[Segment]) -> Result<Scalar, WellAlignedError> {
    let el = Envelope::build(l, Side::Max);
    let er = Envelope::build(r, Side::Min);
    let dom = el.domain().intersect(&er.domain());
    if dom.is_empty() {
        return Err(WellAlignedError::EmptyIntersection);
    }
    let mut bps: Vec<Scalar> = el.bps.iter().chain(&er.bps).cloned().collect();
    bps.sort();
    bps.dedup();
    let at = |env: &Envelope, t: &Scalar| -> Scalar {
        let i = env.bps.binary_search(t).expect("breakpoint");
        env.vals[i].clone().expect("in domain")
    };
    let mut best: Option<Scalar> = None;
    let mut push = |v: Scalar| {
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    };
    for t in &bps {
        if !dom.contains(t) {
            continue;
        }
        let lv = match el.bps.binary_search(t) {
            Ok(_) => at(&el, t),
            Err(_) => el.gap_at(t).expect("inside the domain").eval(t),
        };
        let rv = match er.bps.binary_search(t) {
            Ok(_) => at(&er, t),
            Err(_) => er.gap_at(t).expect("inside the domain").eval(t),
        };
        push(&rv - &lv);
    }
    for w in bps.windows(2) {
        let mid = w[0].midpoint(&w[1]);
        if !dom.contains(&mid) {
            continue;
        }
        let (f, g) = (el.gap_at(&mid).expect("gap formula"), er.gap_at(&mid).expect("gap formula"));
        for t in w {
            push(&g.eval(t) - &f.eval(t));
        }
    }
    Ok(best.expect("nonempty domain"))
}

/// `T₁ ⊕ T₂ ⊕ …`.
pub fn concat<T: Clone>(parts: &[&[T]]) -> Vec<T> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    #[serde(rename = "G")]
    G,
    #[serde(rename = "G_inverse")]
    GInverse,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub b: Scalar,
    pub psi: usize,
    pub uniform_k: usize,
    pub epsilon: Scalar,
    pub lower_bound: f64,
    pub l: Relation,
    pub r: Relation,
    pub target: Target,
    /// `L_b ≠ ∅`: some point of L sits exactly at height `b`.
    pub level_nonempty: bool,
}

impl Certificate {
    /// Re-derives every field from `(L, R, b)` and checks `L ∪ R ⊆ G` (or `G⁻¹`).
    pub fn verify(&self, g: &Relation) -> Result<bool, WellAlignedError> {
        let host = match self.target {
            Target::G => g.clone(),
            Target::GInverse => g.inverse(),
        };
        if !self.l.subset_of(&host)? || !self.r.subset_of(&host)? {
            return Ok(false);
        }
        if check_well_aligned(&self.l, &self.r, &self.b)?.is_err() {
            return Ok(false);
        }
        let (psi, k) = psi_max(&self.l, &self.r, &self.b)?;
        let eps = epsilon_gap(&self.l, &self.r)?;
        Ok(psi == self.psi && k == self.uniform_k && eps == self.epsilon && eps.signum() > 0)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rel = |r: &Relation| serde_json::from_str::<serde_json::Value>(&r.to_json()).expect("relation json");
        serde_json::json!({
            "b": self.b,
            "psi": self.psi,
            "uniform_k": self.uniform_k,
            "epsilon": self.epsilon,
            "lower_bound": self.lower_bound,
            "L": rel(&self.l),
            "R": rel(&self.r),
            "target": self.target,
            "level_nonempty": self.level_nonempty,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("certificate serializes")
    }
}

pub fn lower_bound(psi: usize) -> f64 {
    std::f64::consts::LN_2 / (psi as f64 + 2.0)
}

/// Candidate pieces beyond which only the full candidate sets are tried.
pub const SUBSET_GUARD: usize = 12;

#[derive(Clone, Debug)]
pub struct CertifySearch {
    pub certificate: Option<Certificate>,
    /// No certificate exists at all (finite relations within the guard).
    pub exhaustive: bool,
    pub levels_tried: usize,
}

/// Splits pieces where they cross the diagonal.
fn split_at_diagonal(pieces: &[Segment]) -> Vec<Segment> {
    let mut out = Vec::new();
    for p in pieces {
        let (cx, cy) = p.coords();
        let d = Affine::new(&cy.coef - &cx.coef, &cy.off - &cx.off);
        let r = p.param_range();
        if !d.is_constant() {
            let t = -(&d.off / &d.coef);
            if r.lo < t && t < r.hi {
                out.push(p.sub(&ClosedInterval::new(r.lo.clone(), t.clone())));
                out.push(p.sub(&ClosedInterval::new(t, r.hi.clone())));
                continue;
            }
        }
        out.push(p.clone());
    }
    out
}

fn above_diagonal(p: &Segment) -> bool {
    let ((x0, y0), (x1, y1)) = p.endpoints();
    y0 >= x0 && y1 >= x1
}

fn below_diagonal(p: &Segment) -> bool {
    let ((x0, y0), (x1, y1)) = p.endpoints();
    y0 <= x0 && y1 <= x1
}

fn candidate_levels(pieces: &[Segment], amb: &AmbientInterval, hints: &[Scalar], finite: bool) -> Vec<Scalar> {
    let mut ys: Vec<Scalar> = Vec::new();
    for p in pieces {
        let yr = p.y_range();
        ys.push(yr.lo);
        ys.push(yr.hi);
        let (cx, cy) = p.coords();
        let d = Affine::new(&cy.coef - &cx.coef, &cy.off - &cx.off);
        if !d.is_constant() {
            let t = -(&d.off / &d.coef);
            if p.param_range().contains(&t) {
                ys.push(cy.eval(&t));
            }
        }
    }
    if finite {
        // one representative per way of sorting the heights into y > b, y = b, y < b
        ys.push(amb.lo().clone());
        ys.push(amb.hi().clone());
        ys.sort();
        ys.dedup();
        let mids: Vec<Scalar> = ys.windows(2).map(|w| w[0].midpoint(&w[1])).collect();
        ys.extend(mids);
    }
    ys.sort();
    ys.dedup();
    let ok = |b: &Scalar| b.signum() > 0 && amb.lo() < b && b < amb.hi();
    let mut out: Vec<Scalar> = hints.iter().filter(|b| ok(b)).cloned().collect();
    for y in ys {
        if ok(&y) && !out.contains(&y) {
            out.push(y);
        }
    }
    out
}

fn subsets(n: usize, guarded: bool) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let full = (1usize << n) - 1;
    if guarded {
        return vec![full];
    }
    (1..=full).rev().collect()
}

fn pick(v: &[Segment], mask: usize) -> Vec<Segment> {
    v.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect()
}

fn try_level(host: &Relation, target: Target, lc: &[Segment], rc: &[Segment], b: &Scalar) -> Result<Option<Certificate>, WellAlignedError> {
    let amb = host.ambient();
    let all = amb.as_closed();
    let down = ClosedInterval::new(amb.lo().clone(), b.clone());
    let mut rb: Vec<Segment> = rc.iter().filter_map(|p| p.clip(&all, &down)).collect();
    rb.sort();
    rb.dedup();
    let guarded = lc.len() + rb.len() > SUBSET_GUARD;
    for lm in subsets(lc.len(), guarded) {
        let l = pick(lc, lm);
        for rm in subsets(rb.len(), guarded) {
            let r = pick(&rb, rm);
            if !segment_violations(&l, &r, amb, b, true).is_empty() {
                continue;
            }
            let (psi, uniform_k) = psi_and_bound(&l, amb, b)?;
            let epsilon = gap_of(&l, &r)?;
            if epsilon.signum() <= 0 {
                return Err(WellAlignedError::InvariantBroken(format!("ε = {epsilon} on a well-aligned pair")));
            }
            let level_nonempty = !split_pieces(&l, b).level.is_empty();
            return Ok(Some(Certificate {
                b: b.clone(),
                psi,
                uniform_k,
                epsilon,
                lower_bound: lower_bound(psi),
                l: host.with_pieces(l)?,
                r: host.with_pieces(r)?,
                target,
                level_nonempty,
            }));
        }
    }
    Ok(None)
}

/// Searches for a well-aligned pair inside `G` or `G⁻¹`. Levels are the hints
/// followed by the piece heights and diagonal crossings (every height class for
/// finite relations); `L` ranges over pieces on or above the diagonal and `R`
/// over pieces on or below it, clipped to heights `≤ b`.
pub fn certify_search(g: &Relation, hints: &[Scalar]) -> Result<CertifySearch, WellAlignedError> {
    let finite = g.as_points().is_some();
    if g.as_grid().is_some() {
        return Err(RelationError::KindMismatch("grid", "points or segments").into());
    }
    let hosts = [(Target::G, g.clone()), (Target::GInverse, g.inverse())];
    let mut jobs: Vec<(usize, Scalar, Vec<Segment>, Vec<Segment>)> = Vec::new();
    let mut guarded = false;
    for (h, (_, host)) in hosts.iter().enumerate() {
        let pieces = split_at_diagonal(&host.pieces()?);
        let lc: Vec<Segment> = pieces.iter().filter(|p| above_diagonal(p)).cloned().collect();
        let rc: Vec<Segment> = pieces.iter().filter(|p| below_diagonal(p)).cloned().collect();
        guarded |= lc.len() + rc.len() > SUBSET_GUARD;
        for b in candidate_levels(&pieces, host.ambient(), hints, finite) {
            jobs.push((h, b, lc.clone(), rc.clone()));
        }
    }
    let levels_tried = jobs.len();
    let found = jobs
        .par_iter()
        .map(|(h, b, lc, rc)| try_level(&hosts[*h].1, hosts[*h].0, lc, rc, b))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let certificate = match found {
        None => None,
        Some(r) => r?,
    };
    Ok(CertifySearch { exhaustive: finite && !guarded && certificate.is_none(), certificate, levels_tried })
}

pub fn certify(g: &Relation, hints: &[Scalar]) -> Result<Option<Certificate>, WellAlignedError> {
    Ok(certify_search(g, hints)?.certificate)
}

/// One branching step of the entropy argument from a prefix ending at a ready
/// height `u ∈ p₂(L)`: follow `r_L` down to height `≤ b`, then either take one
/// more `r_L` step (`t₀`, followed by `ℓ_R(t₀)`) or one `ℓ_R` step (`t₁`).
#[derive(Clone, Debug)]
pub struct Branching {
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
    pub t0: Scalar,
    pub t1: Scalar,
}

pub struct Replayer {
    l: Vec<Segment>,
    r: Vec<Segment>,
    b: Scalar,
    bound: usize,
}

impl Replayer {
    pub fn new(cert: &Certificate) -> Result<Replayer, WellAlignedError> {
        Ok(Replayer { l: cert.l.pieces()?, r: cert.r.pieces()?, b: cert.b.clone(), bound: cert.uniform_k })
    }

    pub fn branch(&self, prefix: &[Scalar]) -> Result<Branching, WellAlignedError> {
        let u = prefix.last().ok_or_else(|| WellAlignedError::InvariantBroken("empty prefix".into()))?;
        let k = psi_of(&self.l, &self.b, u, self.bound)?;
        let mut walk = vec![u.clone()];
        for _ in 0..k {
            let next = r_of(&self.l, walk.last().expect("nonempty"))?;
            walk.push(next);
        }
        let w = walk.last().expect("nonempty").clone();
        let t0 = r_of(&self.l, &w)?;
        let t1 = ell_of(&self.r, &w)?;
        let ready0 = ell_of(&self.r, &t0)?;
        let left = concat(&[prefix, &walk[1..], &[t0.clone(), ready0]]);
        let right = concat(&[prefix, &walk[1..], std::slice::from_ref(&t1)]);
        Ok(Branching { left, right, t0, t1 })
    }

    /// All `2^depth` prefixes of the branching tree rooted at height `t`, with the smallest `t₁ − t₀` seen.
    pub fn tree(&self, t: &Scalar, depth: usize) -> Result<(Vec<Vec<Scalar>>, Scalar), WellAlignedError> {
        let mut level = vec![vec![t.clone()]];
        let mut gap: Option<Scalar> = None;
        for _ in 0..depth {
            let next: Vec<Result<Branching, WellAlignedError>> = level.par_iter().map(|p| self.branch(p)).collect();
            level = Vec::with_capacity(2 * next.len());
            for br in next {
                let br = br?;
                let d = &br.t1 - &br.t0;
                if gap.as_ref().is_none_or(|g| &d < g) {
                    gap = Some(d);
                }
                level.push(br.left);
                level.push(br.right);
            }
        }
        Ok((level, gap.unwrap_or_else(Scalar::zero)))
    }
}

/// `(x_{k+1}, x_k) ∈ G` for every consecutive pair.
pub fn is_mahavier_prefix(g: &Relation, seq: &[Scalar]) -> bool {
    seq.windows(2).all(|w| g.contains(&w[1], &w[0]).unwrap_or(false))
}

/// True when no sequence is a prefix of (or equal to) another.
pub fn pairwise_separated(seqs: &[Vec<Scalar>]) -> bool {
    let mut v: Vec<&Vec<Scalar>> = seqs.iter().collect();
    v.sort();
    v.windows(2).all(|w| !w[1].starts_with(w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn hab() -> (Relation, Relation, Relation, Scalar) {
        let a = s("1+sqrt(2)");
        let b = s("1/3");
        let u = AmbientInterval::unit();
        let lseg = Segment::graph(a.clone(), Scalar::zero(), &b / &(&a * &a), a.recip());
        let rseg = Segment::graph(b.clone(), Scalar::zero(), (&a * &a).recip(), Scalar::one());
        let l = Relation::segments(u.clone(), vec![lseg.clone()]).unwrap();
        let r = Relation::segments(u.clone(), vec![rseg.clone()]).unwrap();
        let g = Relation::segments(u, vec![lseg, rseg]).unwrap();
        (g, l, r, b)
    }

    #[test]
    fn split_of_the_steep_branch() {
        let (_, l, _, b) = hab();
        let a = s("1+sqrt(2)");
        let sp = delta_split(&l, &b).unwrap();
        assert_eq!(sp.level.len(), 1);
        assert_eq!(sp.level[0].lo, &b / &a);
        assert_eq!(sp.plus[0].closure.x_range(), ClosedInterval::new(&b / &a, a.recip()));
        assert_eq!(sp.minus[0].closure.x_range(), ClosedInterval::new(&b / &(&a * &a), &b / &a));
        assert!(sp.plus[0].excludes_level_point && sp.minus[0].excludes_level_point);
    }

    #[test]
    fn split_of_the_counterexample() {
        let gc = Relation::points(
            AmbientInterval::unit(),
            vec![(s("0"), s("1")), (s("0"), s("3/4")), (s("3/4"), s("0")), (s("1"), s("0"))],
        )
        .unwrap();
        let sp = delta_split(&gc, &s("1/2")).unwrap();
        assert_eq!((sp.plus.len(), sp.minus.len(), sp.level.len()), (2, 2, 0));
    }

    #[test]
    fn fibers() {
        let (g, l, _, _) = hab();
        let a = s("1+sqrt(2)");
        assert_eq!(r_ell(&l, &s("1")).unwrap(), (a.recip(), a.recip()));
        assert_eq!(r_ell(&g, &s("3/10")).unwrap(), (&s("3/10") / &a, s("9/10")));
        assert!(r_ell(&l, &s("1/100")).unwrap_err().to_string().contains("outside range projection"));
    }

    #[test]
    fn steep_and_shallow_branches_are_aligned() {
        let (_, l, r, b) = hab();
        assert_eq!(check_well_aligned(&l, &r, &b).unwrap(), Ok(()));
        let v = check_well_aligned(&r, &l, &b).unwrap().unwrap_err();
        assert_eq!(v.clause, 1);
        assert!(violations(&r, &l, &b).unwrap().iter().any(|v| v.clause == 2));
        let high = check_well_aligned(&l, &r, &s("9/10")).unwrap().unwrap_err();
        assert_eq!(high.clause, 3);
    }

    #[test]
    fn psi_and_gap_exact() {
        let (_, l, r, b) = hab();
        assert_eq!(psi_value(&l, &r, &b, &s("1")).unwrap(), 2);
        assert_eq!(psi_value(&l, &r, &b, &s("2/5")).unwrap(), 1);
        assert_eq!(psi_value(&l, &r, &b, &s("3/10")).unwrap(), 0);
        assert_eq!(psi_max(&l, &r, &b).unwrap(), (2, 2));
        assert_eq!(epsilon_gap(&l, &r).unwrap(), s("-2+5/3*sqrt(2)"));
        assert_eq!(epsilon_gap(&l, &l).unwrap(), Scalar::zero());
        let far = Relation::segments(AmbientInterval::unit(), vec![Segment::graph(s("1"), s("0"), s("0"), s("1/100"))]).unwrap();
        assert_eq!(epsilon_gap(&l, &far).unwrap_err(), WellAlignedError::EmptyIntersection);
    }

    #[test]
    fn certificate_for_the_pair() {
        let (g, _, _, b) = hab();
        let c = certify(&g, &[]).unwrap().unwrap();
        assert_eq!(c.b, b);
        assert_eq!((c.psi, c.uniform_k), (2, 2));
        assert_eq!(c.target, Target::G);
        assert!((c.lower_bound - std::f64::consts::LN_2 / 4.0).abs() < 1e-15);
        assert!(c.verify(&g).unwrap());
    }

    #[test]
    fn counterexample_has_no_certificate() {
        let gc = Relation::points(
            AmbientInterval::unit(),
            vec![(s("0"), s("1")), (s("0"), s("3/4")), (s("3/4"), s("0")), (s("1"), s("0"))],
        )
        .unwrap();
        let out = certify_search(&gc, &[]).unwrap();
        assert!(out.certificate.is_none());
        assert!(out.exhaustive);
    }

    #[test]
    fn replay_branches_separate() {
        let (g, _, _, _) = hab();
        let c = certify(&g, &[]).unwrap().unwrap();
        let rp = Replayer::new(&c).unwrap();
        let br = rp.branch(&[s("1")]).unwrap();
        assert!(is_mahavier_prefix(&g, &br.left) && is_mahavier_prefix(&g, &br.right));
        assert!(&br.t1 - &br.t0 >= c.epsilon);
        let (tree, gap) = rp.tree(&s("1"), 4).unwrap();
        assert_eq!(tree.len(), 16);
        assert!(pairwise_separated(&tree));
        assert!(gap >= c.epsilon);
    }

    #[test]
    fn concat_is_flat() {
        assert_eq!(concat(&[&[1, 2][..], &[3][..]]), vec![1, 2, 3]);
        assert_eq!(concat::<i32>(&[&[][..], &[7][..]]), vec![7]);
    }

    #[test]
    fn uncovered_points_are_interior() {
        let cover = vec![ClosedInterval::new(s("0"), s("1/4")), ClosedInterval::new(s("1/2"), s("1"))];
        assert_eq!(uncovered_point(&ClosedInterval::new(s("0"), s("1")), &cover), Some(s("3/8")));
        assert_eq!(uncovered_point(&ClosedInterval::new(s("1/8"), s("3/4")), &cover), Some(s("3/8")));
        assert_eq!(uncovered_point(&ClosedInterval::new(s("1/2"), s("3/4")), &cover), None);
        assert_eq!(uncovered_point(&ClosedInterval::new(s("-1"), s("1/8")), &cover), Some(s("-1/2")));
        assert_eq!(uncovered_point(&ClosedInterval::point(s("1/3")), &cover), Some(s("1/3")));
    }
}
