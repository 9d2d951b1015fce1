//! Closed relations on a compact interval: finite point sets, unions of
//! affine segments, and grid bitmaps.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{merge_intervals, union_covers, AmbientInterval, ClosedInterval};
use crate::scalar::{Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("point ({0}, {1}) lies outside the ambient square")]
    OutsideAmbient(String, String),
    #[error("relation is empty")]
    Empty,
    #[error("representation kinds differ ({0} vs {1}); convert first")]
    KindMismatch(&'static str, &'static str),
    #[error("ambient intervals differ")]
    AmbientMismatch,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{0}")]
    Invalid(String),
}

pub type Point = (Scalar, Scalar);

/// An affine piece. With `transposed == false` it is `{(x, slope·x + intercept) : x ∈ [lo, hi]}`;
/// with `transposed == true` it is `{(slope·y + intercept, y) : y ∈ [lo, hi]}`, which in
/// canonical form only occurs for vertical pieces (`slope == 0`). A single point is the
/// non-transposed piece with `slope = 0`, `intercept = y`, `lo = hi = x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub transposed: bool,
    pub slope: Scalar,
    pub intercept: Scalar,
    pub lo: Scalar,
    pub hi: Scalar,
}

/// `coef·p + off`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Affine {
    pub coef: Scalar,
    pub off: Scalar,
}

impl Affine {
    pub fn new(coef: Scalar, off: Scalar) -> Self {
        Affine { coef, off }
    }

    pub fn identity() -> Self {
        Affine::new(Scalar::one(), Scalar::zero())
    }

    pub fn constant(c: Scalar) -> Self {
        Affine::new(Scalar::zero(), c)
    }

    pub fn eval(&self, p: &Scalar) -> Scalar {
        &(&self.coef * p) + &self.off
    }

    pub fn is_constant(&self) -> bool {
        self.coef.is_zero()
    }

    /// `{p : self(p) ∈ range}` intersected with `within`, when nonempty.
    pub fn preimage(&self, range: &ClosedInterval, within: &ClosedInterval) -> Option<ClosedInterval> {
        if self.coef.is_zero() {
            return range.contains(&self.off).then(|| within.clone());
        }
        let a = (&range.lo - &self.off) / &self.coef;
        let b = (&range.hi - &self.off) / &self.coef;
        let iv = if a <= b { ClosedInterval::new(a, b) } else { ClosedInterval::new(b, a) };
        iv.intersect(within)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine) -> Affine {
        Affine::new(&self.coef * &other.coef, &(&self.coef * &other.off) + &self.off)
    }
}

impl Segment {
    pub fn graph(slope: Scalar, intercept: Scalar, xlo: Scalar, xhi: Scalar) -> Self {
        assert!(xlo <= xhi, "segment with xlo > xhi");
        Segment { transposed: false, slope, intercept, lo: xlo, hi: xhi }.normalized()
    }

    pub fn vertical(x: Scalar, ylo: Scalar, yhi: Scalar) -> Self {
        assert!(ylo <= yhi, "segment with ylo > yhi");
        Segment { transposed: true, slope: Scalar::zero(), intercept: x, lo: ylo, hi: yhi }.normalized()
    }

    pub fn point(x: Scalar, y: Scalar) -> Self {
        Segment { transposed: false, slope: Scalar::zero(), intercept: y, lo: x.clone(), hi: x }
    }

    /// The straight piece joining two points.
    pub fn between(p: &Point, q: &Point) -> Self {
        if p.0 == q.0 {
            let (lo, hi) = if p.1 <= q.1 { (&p.1, &q.1) } else { (&q.1, &p.1) };
            return Segment::vertical(p.0.clone(), lo.clone(), hi.clone());
        }
        let slope = (&q.1 - &p.1) / (&q.0 - &p.0);
        let intercept = &p.1 - &(&slope * &p.0);
        let (lo, hi) = if p.0 < q.0 { (&p.0, &q.0) } else { (&q.0, &p.0) };
        Segment::graph(slope, intercept, lo.clone(), hi.clone())
    }

    fn normalized(self) -> Self {
        if self.lo == self.hi {
            let (x, y) = self.point_at(&self.lo);
            return Segment::point(x, y);
        }
        if self.transposed && !self.slope.is_zero() {
            // x = s·y + c  ⇔  y = x/s - c/s
            let s = &self.slope;
            let a = (&self.lo * s) + &self.intercept;
            let b = (&self.hi * s) + &self.intercept;
            let (xlo, xhi) = if a <= b { (a, b) } else { (b, a) };
            return Segment {
                transposed: false,
                slope: s.recip(),
                intercept: -(&self.intercept / s),
                lo: xlo,
                hi: xhi,
            };
        }
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_vertical(&self) -> bool {
        self.transposed && !self.is_point()
    }

    pub fn is_horizontal(&self) -> bool {
        !self.transposed && self.slope.is_zero() && !self.is_point()
    }

    /// Graph piece with a nonzero slope: the fiber over each `y` is a single point.
    pub fn is_invertible_graph(&self) -> bool {
        !self.transposed && !self.slope.is_zero() && !self.is_point()
    }

    /// Coordinates as affine functions of the parameter (`x` for graph pieces, `y` for vertical ones).
    pub fn coords(&self) -> (Affine, Affine) {
        let id = Affine::identity();
        let line = Affine::new(self.slope.clone(), self.intercept.clone());
        if self.transposed {
            (line, id)
        } else {
            (id, line)
        }
    }

    pub fn param_range(&self) -> ClosedInterval {
        ClosedInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn point_at(&self, p: &Scalar) -> Point {
        let (x, y) = self.coords();
        (x.eval(p), y.eval(p))
    }

    pub fn endpoints(&self) -> (Point, Point) {
        (self.point_at(&self.lo), self.point_at(&self.hi))
    }

    pub fn x_range(&self) -> ClosedInterval {
        let ((x0, _), (x1, _)) = self.endpoints();
        if x0 <= x1 {
            ClosedInterval::new(x0, x1)
        } else {
            ClosedInterval::new(x1, x0)
        }
    }

    pub fn y_range(&self) -> ClosedInterval {
        let ((_, y0), (_, y1)) = self.endpoints();
        if y0 <= y1 {
            ClosedInterval::new(y0, y1)
        } else {
            ClosedInterval::new(y1, y0)
        }
    }

    pub fn contains(&self, x: &Scalar, y: &Scalar) -> bool {
        let (cx, cy) = self.coords();
        let (p, other, other_val) = if self.transposed { (y, &cx, x) } else { (x, &cy, y) };
        self.param_range().contains(p) && &other.eval(p) == other_val
    }

    /// The x-values of the piece above height `y`, if any.
    pub fn fiber(&self, y: &Scalar) -> Option<ClosedInterval> {
        if self.transposed {
            return self.param_range().contains(y).then(|| ClosedInterval::point(self.intercept.clone()));
        }
        if self.slope.is_zero() {
            return (y == &self.intercept).then(|| self.param_range());
        }
        let x = (y - &self.intercept) / &self.slope;
        self.param_range().contains(&x).then(|| ClosedInterval::point(x))
    }

    pub fn inverse(&self) -> Segment {
        if self.is_point() {
            let (x, y) = self.point_at(&self.lo);
            return Segment::point(y, x);
        }
        if self.transposed {
            // vertical x = c becomes horizontal y = c
            return Segment::graph(Scalar::zero(), self.intercept.clone(), self.lo.clone(), self.hi.clone());
        }
        if self.slope.is_zero() {
            return Segment::vertical(self.intercept.clone(), self.lo.clone(), self.hi.clone());
        }
        let yr = self.y_range();
        Segment::graph(self.slope.recip(), -(&self.intercept / &self.slope), yr.lo, yr.hi)
    }

    /// Sub-piece over a parameter sub-range.
    pub fn sub(&self, range: &ClosedInterval) -> Segment {
        Segment { lo: range.lo.clone(), hi: range.hi.clone(), ..self.clone() }.normalized()
    }

    /// Closed sub-piece whose x-values lie in `xs` and y-values in `ys`.
    pub fn clip(&self, xs: &ClosedInterval, ys: &ClosedInterval) -> Option<Segment> {
        let (cx, cy) = self.coords();
        let r = cx.preimage(xs, &self.param_range())?;
        let r = cy.preimage(ys, &r)?;
        Some(self.sub(&r))
    }

    pub fn same_line(&self, other: &Segment) -> bool {
        !self.is_point()
            && !other.is_point()
            && self.transposed == other.transposed
            && self.slope == other.slope
            && self.intercept == other.intercept
    }

    pub fn scalars(&self) -> [&Scalar; 4] {
        [&self.slope, &self.intercept, &self.lo, &self.hi]
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((x0, y0), (x1, y1)) = self.endpoints();
        write!(f, "({:.4},{:.4})--({:.4},{:.4})", x0.to_f64(), y0.to_f64(), x1.to_f64(), y1.to_f64())
    }
}

/// Occupied cells `(i, j)` of an `n × n` grid: column `i` (x), row `j` (y).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GridCells {
    pub n: usize,
    pub cells: BTreeSet<(usize, usize)>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Body {
    Points(Vec<Point>),
    Segments(Vec<Segment>),
    Grid(GridCells),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Points(_) => "points",
            Body::Segments(_) => "segments",
            Body::Grid(_) => "grid",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UscKind {
    NotGraph,
    Graph,
    SurjectiveGraph,
}

/// Projection onto one axis: a finite set for point relations, a merged union of
/// closed intervals otherwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Projection {
    Finite(Vec<Scalar>),
    Intervals(Vec<ClosedInterval>),
}

impl Projection {
    pub fn intervals(&self) -> Vec<ClosedInterval> {
        match self {
            Projection::Finite(v) => v.iter().cloned().map(ClosedInterval::point).collect(),
            Projection::Intervals(v) => v.clone(),
        }
    }
}

/// A closed relation on `ambient`. All constructors canonicalize, so structural
/// equality is set equality within one representation.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    ambient: AmbientInterval,
    d: u32,
    body: Body,
}

const DEFAULT_D: u32 = 2;

fn check_field(d: u32, xs: &[&Scalar]) -> Result<(), RelationError> {
    for x in xs {
        let e = x.discriminant();
        if e != 0 && e != d {
            return Err(ScalarError::FieldMismatch { left: d, right: e }.into());
        }
    }
    Ok(())
}

/// The discriminant used by a collection of scalars, defaulting to 2.
fn infer_d<'a>(xs: impl Iterator<Item = &'a Scalar>) -> Result<u32, RelationError> {
    let mut d = 0;
    for x in xs {
        let e = x.discriminant();
        if e != 0 {
            if d != 0 && d != e {
                return Err(ScalarError::FieldMismatch { left: d, right: e }.into());
            }
            d = e;
        }
    }
    Ok(if d == 0 { DEFAULT_D } else { d })
}

fn canonical_segments(segs: Vec<Segment>) -> Vec<Segment> {
    let mut segs: Vec<Segment> = segs.into_iter().map(Segment::normalized).collect();
    segs.sort();
    segs.dedup();
    let mut lines: Vec<Segment> = Vec::new();
    let mut points: Vec<Segment> = Vec::new();
    for s in segs {
        if s.is_point() {
            points.push(s);
            continue;
        }
        match lines.last_mut() {
            Some(last) if last.same_line(&s) && s.lo <= last.hi => {
                if s.hi > last.hi {
                    last.hi = s.hi;
                }
            }
            _ => lines.push(s),
        }
    }
    points.retain(|p| {
        let (x, y) = p.point_at(&p.lo);
        !lines.iter().any(|l| l.contains(&x, &y))
    });
    lines.extend(points);
    lines.sort();
    lines
}

impl Relation {
    pub fn points(ambient: AmbientInterval, pts: Vec<Point>) -> Result<Self, RelationError> {
        let d = infer_d(pts.iter().flat_map(|(x, y)| [x, y]))?;
        Self::points_in(ambient, d, pts)
    }

    pub fn points_in(ambient: AmbientInterval, d: u32, mut pts: Vec<Point>) -> Result<Self, RelationError> {
        check_field(d, &[ambient.lo(), ambient.hi()])?;
        for (x, y) in &pts {
            check_field(d, &[x, y])?;
            if !ambient.contains(x) || !ambient.contains(y) {
                return Err(RelationError::OutsideAmbient(x.to_string(), y.to_string()));
            }
        }
        pts.sort();
        pts.dedup();
        Ok(Relation { ambient, d, body: Body::Points(pts) })
    }

    pub fn segments(ambient: AmbientInterval, segs: Vec<Segment>) -> Result<Self, RelationError> {
        let d = infer_d(segs.iter().flat_map(|s| s.scalars()))?;
        Self::segments_in(ambient, d, segs)
    }

    pub fn segments_in(ambient: AmbientInterval, d: u32, segs: Vec<Segment>) -> Result<Self, RelationError> {
        check_field(d, &[ambient.lo(), ambient.hi()])?;
        for s in &segs {
            check_field(d, &s.scalars())?;
            let (p, q) = s.endpoints();
            for (x, y) in [p, q] {
                if !ambient.contains(&x) || !ambient.contains(&y) {
                    return Err(RelationError::OutsideAmbient(x.to_string(), y.to_string()));
                }
            }
        }
        Ok(Relation { ambient, d, body: Body::Segments(canonical_segments(segs)) })
    }

    pub fn grid(ambient: AmbientInterval, n: usize, cells: BTreeSet<(usize, usize)>) -> Result<Self, RelationError> {
        if n == 0 {
            return Err(RelationError::Invalid("grid resolution must be positive".into()));
        }
        if let Some(c) = cells.iter().find(|(i, j)| *i >= n || *j >= n) {
            return Err(RelationError::Invalid(format!("cell {c:?} outside a {n}x{n} grid")));
        }
        let d = infer_d([ambient.lo(), ambient.hi()].into_iter())?;
        Ok(Relation { ambient, d, body: Body::Grid(GridCells { n, cells }) })
    }

    pub fn empty_points(ambient: AmbientInterval) -> Self {
        Relation { ambient, d: DEFAULT_D, body: Body::Points(Vec::new()) }
    }

    pub fn ambient(&self) -> &AmbientInterval {
        &self.ambient
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn kind(&self) -> &'static str {
        self.body.kind()
    }

    pub fn is_empty(&self) -> bool {
        match &self.body {
            Body::Points(p) => p.is_empty(),
            Body::Segments(s) => s.is_empty(),
            Body::Grid(g) => g.cells.is_empty(),
        }
    }

    pub fn as_points(&self) -> Option<&[Point]> {
        match &self.body {
            Body::Points(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_segments(&self) -> Option<&[Segment]> {
        match &self.body {
            Body::Segments(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_grid(&self) -> Option<&GridCells> {
        match &self.body {
            Body::Grid(g) => Some(g),
            _ => None,
        }
    }

    /// Points and segments as a uniform list of pieces (points become degenerate pieces).
    pub fn pieces(&self) -> Result<Vec<Segment>, RelationError> {
        match &self.body {
            Body::Points(p) => Ok(p.iter().map(|(x, y)| Segment::point(x.clone(), y.clone())).collect()),
            Body::Segments(s) => Ok(s.clone()),
            Body::Grid(_) => Err(RelationError::KindMismatch("grid", "points or segments")),
        }
    }

    /// Same kind, same ambient, new contents.
    pub fn with_pieces(&self, pieces: Vec<Segment>) -> Result<Relation, RelationError> {
        match &self.body {
            Body::Points(_) => {
                let pts = pieces
                    .into_iter()
                    .map(|s| {
                        if s.is_point() {
                            Ok(s.point_at(&s.lo))
                        } else {
                            Err(RelationError::Invalid("segment in a point relation".into()))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Relation::points_in(self.ambient.clone(), self.d, pts)
            }
            Body::Segments(_) => Relation::segments_in(self.ambient.clone(), self.d, pieces),
            Body::Grid(_) => Err(RelationError::KindMismatch("grid", "points or segments")),
        }
    }

    pub fn with_ambient(&self, ambient: AmbientInterval) -> Result<Relation, RelationError> {
        match &self.body {
            Body::Points(p) => Relation::points_in(ambient, self.d, p.clone()),
            Body::Segments(s) => Relation::segments_in(ambient, self.d, s.clone()),
            Body::Grid(_) => Err(RelationError::Invalid("cannot re-embed a grid relation".into())),
        }
    }

    pub fn inverse(&self) -> Relation {
        let body = match &self.body {
            Body::Points(p) => {
                let mut v: Vec<Point> = p.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
                v.sort();
                Body::Points(v)
            }
            Body::Segments(s) => Body::Segments(canonical_segments(s.iter().map(Segment::inverse).collect())),
            Body::Grid(g) => Body::Grid(GridCells { n: g.n, cells: g.cells.iter().map(|&(i, j)| (j, i)).collect() }),
        };
        Relation { ambient: self.ambient.clone(), d: self.d, body }
    }

    fn cell_interval(&self, n: usize, i: usize) -> ClosedInterval {
        let w = &self.ambient.width() / &Scalar::from_int(n as i64);
        let lo = self.ambient.lo() + &(&w * &Scalar::from_int(i as i64));
        let hi = &lo + &w;
        ClosedInterval::new(lo, hi)
    }

    pub fn project(&self, axis: u8) -> Projection {
        assert!(axis == 1 || axis == 2, "axis must be 1 or 2");
        match &self.body {
            Body::Points(p) => {
                let mut v: Vec<Scalar> = p.iter().map(|(x, y)| if axis == 1 { x.clone() } else { y.clone() }).collect();
                v.sort();
                v.dedup();
                Projection::Finite(v)
            }
            Body::Segments(s) => Projection::Intervals(merge_intervals(
                s.iter().map(|s| if axis == 1 { s.x_range() } else { s.y_range() }).collect(),
            )),
            Body::Grid(g) => {
                let idx: BTreeSet<usize> = g.cells.iter().map(|&(i, j)| if axis == 1 { i } else { j }).collect();
                Projection::Intervals(merge_intervals(idx.into_iter().map(|i| self.cell_interval(g.n, i)).collect()))
            }
        }
    }

    pub fn contains(&self, x: &Scalar, y: &Scalar) -> Result<bool, RelationError> {
        if !self.ambient.contains(x) || !self.ambient.contains(y) {
            return Err(RelationError::OutsideAmbient(x.to_string(), y.to_string()));
        }
        Ok(match &self.body {
            Body::Points(p) => p.binary_search(&(x.clone(), y.clone())).is_ok(),
            Body::Segments(s) => s.iter().any(|s| s.contains(x, y)),
            Body::Grid(g) => {
                let cols = self.cells_containing(g.n, x);
                let rows = self.cells_containing(g.n, y);
                cols.iter().any(|&i| rows.iter().any(|&j| g.cells.contains(&(i, j))))
            }
        })
    }

    /// Indices of the closed cells of an `n`-grid containing `v` (two on a shared boundary).
    pub fn cells_containing(&self, n: usize, v: &Scalar) -> Vec<usize> {
        let u = &(v - self.ambient.lo()) * &(&Scalar::from_int(n as i64) / &self.ambient.width());
        let k = u.floor();
        let k: i64 = k.try_into().expect("cell index fits in i64");
        let on_line = Scalar::from_int(k) == u;
        let mut out = Vec::with_capacity(2);
        if on_line && k >= 1 && (k as usize) <= n {
            out.push(k as usize - 1);
        }
        if k >= 0 && (k as usize) < n {
            out.push(k as usize);
        }
        out
    }

    pub fn is_usc_graph(&self) -> Result<UscKind, RelationError> {
        if self.is_empty() {
            return Err(RelationError::Empty);
        }
        let whole = self.ambient.as_closed();
        let covers = |axis| union_covers(&self.project(axis).intervals(), &whole);
        Ok(match (covers(1), covers(2)) {
            (false, _) => UscKind::NotGraph,
            (true, false) => UscKind::Graph,
            (true, true) => UscKind::SurjectiveGraph,
        })
    }

    /// `self ⊆ other`, exactly.
    pub fn subset_of(&self, other: &Relation) -> Result<bool, RelationError> {
        if self.ambient != other.ambient {
            return Err(RelationError::AmbientMismatch);
        }
        match (&self.body, &other.body) {
            (Body::Grid(a), Body::Grid(b)) => {
                if a.n == b.n {
                    Ok(a.cells.is_subset(&b.cells))
                } else {
                    Ok(crate::mahavier::regrid(self, b.n).cells.is_subset(&b.cells))
                }
            }
            (Body::Grid(a), _) => Ok(a.cells.is_empty()),
            (_, Body::Grid(_)) => {
                let pieces = self.pieces()?;
                for p in &pieces {
                    if !crate::mahavier::piece_inside_grid(other, p) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => {
                let mine = self.pieces()?;
                let theirs = other.pieces()?;
                for p in &mine {
                    if p.is_point() {
                        let (x, y) = p.point_at(&p.lo);
                        if !theirs.iter().any(|s| s.contains(&x, &y)) {
                            return Ok(false);
                        }
                        continue;
                    }
                    let ranges = merge_intervals(
                        theirs.iter().filter(|s| s.same_line(p)).map(Segment::param_range).collect(),
                    );
                    if !union_covers(&ranges, &p.param_range()) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn union(&self, other: &Relation) -> Result<Relation, RelationError> {
        if self.ambient != other.ambient {
            return Err(RelationError::AmbientMismatch);
        }
        let d = if self.d == other.d { self.d } else { infer_d([&Scalar::sqrt(self.d), &Scalar::sqrt(other.d)].into_iter())? };
        match (&self.body, &other.body) {
            (Body::Points(a), Body::Points(b)) => {
                Relation::points_in(self.ambient.clone(), d, a.iter().chain(b).cloned().collect())
            }
            (Body::Segments(a), Body::Segments(b)) => {
                Relation::segments_in(self.ambient.clone(), d, a.iter().chain(b).cloned().collect())
            }
            (Body::Grid(a), Body::Grid(b)) if a.n == b.n => {
                Relation::grid(self.ambient.clone(), a.n, a.cells.union(&b.cells).cloned().collect())
            }
            (a, b) => Err(RelationError::KindMismatch(a.kind(), b.kind())),
        }
    }

    /// Points or segments as a segment relation.
    pub fn to_segments(&self) -> Result<Relation, RelationError> {
        Relation::segments_in(self.ambient.clone(), self.d, self.pieces()?)
    }

    /// The part of the relation inside `K × K` for a union of closed intervals `K`.
    pub fn restrict(&self, k: &[ClosedInterval]) -> Result<Relation, RelationError> {
        let mut out = Vec::new();
        for p in self.pieces()? {
            for a in k {
                for b in k {
                    if let Some(s) = p.clip(a, b) {
                        out.push(s);
                    }
                }
            }
        }
        self.with_pieces(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RelationFile::from(self)).expect("relation serializes")
    }

    pub fn from_json(s: &str) -> Result<Relation, RelationError> {
        let f: RelationFile = serde_json::from_str(s).map_err(|e| RelationError::Invalid(e.to_string()))?;
        f.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SegmentJson {
    Graph { slope: Scalar, intercept: Scalar, xlo: Scalar, xhi: Scalar },
    Vertical { x: Scalar, ylo: Scalar, yhi: Scalar },
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    n: usize,
    cells: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct RelationFile {
    ambient: AmbientInterval,
    #[serde(default = "default_d")]
    d: u32,
    kind: String,
    data: serde_json::Value,
}

fn default_d() -> u32 {
    DEFAULT_D
}

impl From<&Relation> for RelationFile {
    fn from(r: &Relation) -> Self {
        let data = match &r.body {
            Body::Points(p) => serde_json::to_value(p),
            Body::Segments(s) => serde_json::to_value(
                s.iter()
                    .map(|s| {
                        if s.transposed {
                            SegmentJson::Vertical { x: s.intercept.clone(), ylo: s.lo.clone(), yhi: s.hi.clone() }
                        } else {
                            SegmentJson::Graph {
                                slope: s.slope.clone(),
                                intercept: s.intercept.clone(),
                                xlo: s.lo.clone(),
                                xhi: s.hi.clone(),
                            }
                        }
                    })
                    .collect::<Vec<_>>(),
            ),
            Body::Grid(g) => serde_json::to_value(GridJson { n: g.n, cells: g.cells.iter().map(|&(i, j)| [i, j]).collect() }),
        }
        .expect("relation data serializes");
        RelationFile { ambient: r.ambient.clone(), d: r.d, kind: r.kind().to_string(), data }
    }
}

impl TryFrom<RelationFile> for Relation {
    type Error = RelationError;
    fn try_from(f: RelationFile) -> Result<Self, RelationError> {
        let bad = |e: serde_json::Error| RelationError::Invalid(e.to_string());
        match f.kind.as_str() {
            "points" => {
                let pts: Vec<Point> = serde_json::from_value(f.data).map_err(bad)?;
                let n = pts.len();
                let r = Relation::points_in(f.ambient, f.d, pts)?;
                if r.as_points().map(|p| p.len()) != Some(n) {
                    return Err(RelationError::Invalid("duplicate points".into()));
                }
                Ok(r)
            }
            "segments" => {
                let raw: Vec<SegmentJson> = serde_json::from_value(f.data).map_err(bad)?;
                let mut segs = Vec::with_capacity(raw.len());
                for s in raw {
                    segs.push(match s {
                        SegmentJson::Graph { slope, intercept, xlo, xhi } => {
                            if xlo > xhi {
                                return Err(RelationError::Invalid("segment with xlo > xhi".into()));
                            }
                            Segment::graph(slope, intercept, xlo, xhi)
                        }
                        SegmentJson::Vertical { x, ylo, yhi } => {
                            if ylo > yhi {
                                return Err(RelationError::Invalid("segment with ylo > yhi".into()));
                            }
                            Segment::vertical(x, ylo, yhi)
                        }
                    });
                }
                Relation::segments_in(f.ambient, f.d, segs)
            }
            "grid" => {
                let g: GridJson = serde_json::from_value(f.data).map_err(bad)?;
                let mut r = Relation::grid(f.ambient, g.n, g.cells.into_iter().map(|[i, j]| (i, j)).collect())?;
                r.d = f.d;
                Ok(r)
            }
            other => Err(RelationError::Invalid(format!("unknown relation kind {other:?}"))),
        }
    }
}

/// Free-standing forms of the relation predicates.
pub fn inverse(g: &Relation) -> Relation {
    g.inverse()
}

pub fn project(g: &Relation, axis: u8) -> Projection {
    g.project(axis)
}

pub fn contains(g: &Relation, x: &Scalar, y: &Scalar) -> Result<bool, RelationError> {
    g.contains(x, y)
}

pub fn is_usc_graph(g: &Relation) -> Result<UscKind, RelationError> {
    g.is_usc_graph()
}

pub fn subset(h: &Relation, g: &Relation) -> Result<bool, RelationError> {
    h.subset_of(g)
}

pub fn union(g: &Relation, h: &Relation) -> Result<Relation, RelationError> {
    g.union(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn unit_points(pts: &[(&str, &str)]) -> Relation {
        Relation::points(AmbientInterval::unit(), pts.iter().map(|(x, y)| (s(x), s(y))).collect()).unwrap()
    }

    #[test]
    fn inverse_of_a_point() {
        let g = unit_points(&[("0", "1")]);
        assert_eq!(g.inverse(), unit_points(&[("1", "0")]));
    }

    #[test]
    fn inverse_of_a_line_through_the_origin() {
        let a = s("1+sqrt(2)");
        let seg = Segment::graph(a.clone(), Scalar::zero(), s("1/10"), s("1/5"));
        let inv = seg.inverse();
        assert_eq!(inv, Segment::graph(a.recip(), Scalar::zero(), &a * &s("1/10"), &a * &s("1/5")));
    }

    #[test]
    fn horizontal_pieces_invert_to_vertical_ones_and_back() {
        let h = Segment::graph(Scalar::zero(), s("1/2"), s("0"), s("1/3"));
        let v = h.inverse();
        assert!(v.is_vertical());
        assert!(v.contains(&s("1/2"), &s("1/4")));
        assert_eq!(v.inverse(), h);
    }

    #[test]
    fn points_on_segments_are_absorbed() {
        let r = Relation::segments(
            AmbientInterval::unit(),
            vec![
                Segment::graph(s("1"), s("0"), s("0"), s("1/2")),
                Segment::graph(s("1"), s("0"), s("1/4"), s("1")),
                Segment::point(s("1/3"), s("1/3")),
                Segment::point(s("1/3"), s("0")),
            ],
        )
        .unwrap();
        assert_eq!(r.as_segments().unwrap().len(), 2);
    }

    #[test]
    fn finite_projection() {
        let g = unit_points(&[("0", "1"), ("3/4", "0")]);
        assert_eq!(g.project(1), Projection::Finite(vec![s("0"), s("3/4")]));
    }

    #[test]
    fn full_grid_projects_onto_ambient() {
        let cells = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).collect();
        let g = Relation::grid(AmbientInterval::unit(), 3, cells).unwrap();
        assert_eq!(g.project(2), Projection::Intervals(vec![ClosedInterval::new(s("0"), s("1"))]));
        assert!(g.contains(&s("1/3"), &s("1")).unwrap());
    }

    #[test]
    fn contains_outside_is_an_error() {
        let g = unit_points(&[("0", "1")]);
        assert!(matches!(g.contains(&s("2"), &s("0")), Err(RelationError::OutsideAmbient(..))));
    }

    #[test]
    fn union_of_mixed_kinds_fails() {
        let p = unit_points(&[("0", "1")]);
        let q = Relation::segments(AmbientInterval::unit(), vec![Segment::point(s("0"), s("1"))]).unwrap();
        let err = p.union(&q).unwrap_err();
        assert!(err.to_string().contains("convert first"));
        assert_eq!(p.union(&Relation::empty_points(AmbientInterval::unit())).unwrap(), p);
    }

    #[test]
    fn subset_needs_collinear_cover() {
        let big = Relation::segments(
            AmbientInterval::unit(),
            vec![Segment::graph(s("1/2"), s("0"), s("0"), s("1/2")), Segment::graph(s("1/2"), s("0"), s("1/2"), s("1"))],
        )
        .unwrap();
        let small = Relation::segments(AmbientInterval::unit(), vec![Segment::graph(s("1/2"), s("0"), s("1/4"), s("3/4"))]).unwrap();
        assert!(small.subset_of(&big).unwrap());
        assert!(!big.subset_of(&small).unwrap());
        let cross = Relation::segments(AmbientInterval::unit(), vec![Segment::graph(s("1"), s("0"), s("0"), s("1"))]).unwrap();
        assert!(!cross.subset_of(&big).unwrap());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let a = s("1+sqrt(2)");
        let lo = &s("1/3") / &(&a * &a);
        let r = Relation::segments(
            AmbientInterval::unit(),
            vec![
                Segment::graph(a.clone(), s("0"), lo, a.recip()),
                Segment::vertical(s("1/2"), s("0"), s("1/4")),
                Segment::point(s("1"), s("1")),
            ],
        )
        .unwrap();
        let text = r.to_json();
        let back = Relation::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_foreign_fields() {
        let text = r#"{"ambient":["0/1","1/1"],"d":2,"kind":"points","data":[["0/1+1/2*sqrt(3)","0/1"]]}"#;
        let err = Relation::from_json(text).unwrap_err();
        assert!(err.to_string().contains("field mismatch"));
    }
}
