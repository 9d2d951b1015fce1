//! Ambient intervals, closed-interval unions and sets of intervals with
//! open or closed ends.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// The compact interval `[lo, hi]` a relation lives on.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[Scalar; 2]", into = "[Scalar; 2]")]
pub struct AmbientInterval {
    lo: Scalar,
    hi: Scalar,
}

impl AmbientInterval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self, String> {
        if lo.try_cmp(&hi).map_err(|e| e.to_string())? != std::cmp::Ordering::Less {
            return Err(format!("ambient interval needs lo < hi, got [{lo}, {hi}]"));
        }
        Ok(AmbientInterval { lo, hi })
    }

    pub fn unit() -> Self {
        AmbientInterval { lo: Scalar::zero(), hi: Scalar::one() }
    }

    pub fn symmetric() -> Self {
        AmbientInterval { lo: Scalar::from_int(-1), hi: Scalar::one() }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn width(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn as_closed(&self) -> ClosedInterval {
        ClosedInterval::new(self.lo.clone(), self.hi.clone())
    }
}

impl TryFrom<[Scalar; 2]> for AmbientInterval {
    type Error = String;
    fn try_from([lo, hi]: [Scalar; 2]) -> Result<Self, String> {
        AmbientInterval::new(lo, hi)
    }
}

impl From<AmbientInterval> for [Scalar; 2] {
    fn from(a: AmbientInterval) -> Self {
        [a.lo, a.hi]
    }
}

impl fmt::Debug for AmbientInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `[lo, hi]` with `lo <= hi`; a single point when equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosedInterval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl ClosedInterval {
    pub fn new(lo: Scalar, hi: Scalar) -> Self {
        debug_assert!(lo <= hi, "reversed interval [{lo}, {hi}]");
        ClosedInterval { lo, hi }
    }

    pub fn point(x: Scalar) -> Self {
        ClosedInterval { lo: x.clone(), hi: x }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &ClosedInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &ClosedInterval) -> Option<ClosedInterval> {
        let lo = self.lo.max_of(&other.lo).clone();
        let hi = self.hi.min_of(&other.hi).clone();
        (lo <= hi).then_some(ClosedInterval { lo, hi })
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Debug for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Sorts and merges overlapping or touching intervals.
pub fn merge_intervals(mut v: Vec<ClosedInterval>) -> Vec<ClosedInterval> {
    v.sort();
    let mut out: Vec<ClosedInterval> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// `iv ⊆ ∪set`, where `set` is merged.
pub fn union_covers(set: &[ClosedInterval], iv: &ClosedInterval) -> bool {
    set.iter().any(|s| s.contains_interval(iv))
}

pub fn union_contains(set: &[ClosedInterval], x: &Scalar) -> bool {
    set.iter().any(|s| s.contains(x))
}

/// Intersection of two merged unions.
pub fn intersect_unions(a: &[ClosedInterval], b: &[ClosedInterval]) -> Vec<ClosedInterval> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(z) = x.intersect(y) {
                out.push(z);
            }
        }
    }
    merge_intervals(out)
}

/// An interval whose ends may each be open or closed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Span {
    pub lo: Scalar,
    pub hi: Scalar,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Span {
    pub fn closed(lo: Scalar, hi: Scalar) -> Self {
        Span { lo, hi, lo_open: false, hi_open: false }
    }

    pub fn open(lo: Scalar, hi: Scalar) -> Self {
        Span { lo, hi, lo_open: true, hi_open: true }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.lo_open || self.hi_open,
            std::cmp::Ordering::Greater => true,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        let above = if self.lo_open { x > &self.lo } else { x >= &self.lo };
        let below = if self.hi_open { x < &self.hi } else { x <= &self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Span) -> Span {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_open),
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_open),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_open),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_open),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Span { lo, hi, lo_open, hi_open }
    }

    /// `{t : a·t + c ∈ self}` for `a != 0`.
    pub fn preimage_affine(&self, a: &Scalar, c: &Scalar) -> Span {
        let l = (&self.lo - c) / a;
        let h = (&self.hi - c) / a;
        if a.signum() > 0 {
            Span { lo: l, hi: h, lo_open: self.lo_open, hi_open: self.hi_open }
        } else {
            Span { lo: h, hi: l, lo_open: self.hi_open, hi_open: self.lo_open }
        }
    }
}

/// A finite union of [`Span`]s, kept sorted, disjoint and merged.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SpanSet {
    spans: Vec<Span>,
}

impl SpanSet {
    pub fn empty() -> Self {
        SpanSet { spans: Vec::new() }
    }

    pub fn from_spans(spans: impl IntoIterator<Item = Span>) -> Self {
        let mut v: Vec<Span> = spans.into_iter().filter(|s| !s.is_empty()).collect();
        v.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.lo_open.cmp(&b.lo_open)));
        let mut out: Vec<Span> = Vec::with_capacity(v.len());
        for s in v {
            if let Some(last) = out.last_mut() {
                let touches = s.lo < last.hi || (s.lo == last.hi && !(s.lo_open && last.hi_open));
                if touches {
                    match s.hi.cmp(&last.hi) {
                        std::cmp::Ordering::Greater => {
                            last.hi = s.hi;
                            last.hi_open = s.hi_open;
                        }
                        std::cmp::Ordering::Equal => last.hi_open = last.hi_open && s.hi_open,
                        std::cmp::Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(s);
        }
        SpanSet { spans: out }
    }

    pub fn from_closed(ivs: &[ClosedInterval]) -> Self {
        Self::from_spans(ivs.iter().map(|iv| Span::closed(iv.lo.clone(), iv.hi.clone())))
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.spans.iter().any(|s| s.contains(x))
    }

    pub fn intersect(&self, other: &SpanSet) -> SpanSet {
        let mut v = Vec::new();
        for a in &self.spans {
            for b in &other.spans {
                v.push(a.intersect(b));
            }
        }
        Self::from_spans(v)
    }

    pub fn intersect_span(&self, s: &Span) -> SpanSet {
        Self::from_spans(self.spans.iter().map(|a| a.intersect(s)))
    }

    pub fn union(&self, other: &SpanSet) -> SpanSet {
        Self::from_spans(self.spans.iter().chain(other.spans.iter()).cloned())
    }

    /// Some member, preferring a left endpoint when it is included.
    pub fn sample_point(&self) -> Option<Scalar> {
        let s = self.spans.first()?;
        Some(if !s.lo_open {
            s.lo.clone()
        } else if !s.hi_open {
            s.hi.clone()
        } else {
            s.lo.midpoint(&s.hi)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, r: i64) -> Scalar {
        Scalar::rational(p, r)
    }

    #[test]
    fn merging_closed_intervals() {
        let m = merge_intervals(vec![
            ClosedInterval::new(q(1, 2), q(1, 1)),
            ClosedInterval::new(q(0, 1), q(1, 2)),
            ClosedInterval::new(q(2, 1), q(3, 1)),
        ]);
        assert_eq!(m, vec![ClosedInterval::new(q(0, 1), q(1, 1)), ClosedInterval::new(q(2, 1), q(3, 1))]);
        assert!(union_covers(&m, &ClosedInterval::new(q(1, 3), q(2, 3))));
        assert!(!union_covers(&m, &ClosedInterval::new(q(1, 2), q(5, 2))));
    }

    #[test]
    fn open_ends_do_not_glue() {
        let s = SpanSet::from_spans([
            Span { lo: q(0, 1), hi: q(1, 2), lo_open: false, hi_open: true },
            Span { lo: q(1, 2), hi: q(1, 1), lo_open: true, hi_open: false },
        ]);
        assert_eq!(s.spans().len(), 2);
        assert!(!s.contains(&q(1, 2)));
        let glued = s.union(&SpanSet::from_closed(&[ClosedInterval::point(q(1, 2))]));
        assert_eq!(glued.spans().len(), 1);
    }

    #[test]
    fn affine_preimage_flips_for_negative_slopes() {
        let s = Span { lo: q(0, 1), hi: q(1, 1), lo_open: true, hi_open: false };
        let p = s.preimage_affine(&q(-2, 1), &q(1, 1));
        assert_eq!(p.lo, q(0, 1));
        assert_eq!(p.hi, q(1, 2));
        assert!(!p.lo_open && p.hi_open);
    }

    #[test]
    fn ambient_rejects_reversed_bounds() {
        assert!(AmbientInterval::new(q(1, 1), q(0, 1)).is_err());
        let a: AmbientInterval = serde_json::from_str(r#"["-1/1","1/1"]"#).unwrap();
        assert_eq!(a, AmbientInterval::symmetric());
    }
}
