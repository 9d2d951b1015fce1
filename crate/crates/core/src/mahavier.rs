//! Grid covers, box counting over Mahavier products, and entropy estimates.
//!
//! A sequence `(x₁, …, x_{m+1})` belongs to the m-th Mahavier product when
//! `(x_{k+1}, x_k) ∈ G` for every `k`. On a grid, cell `(i, j)` (column `i` for
//! `x`, row `j` for `y`) is an entry of the transition matrix, and the number of
//! cell sequences `(c₁, …, c_{m+1})` with every `(c_{k+1}, c_k)` an entry is the
//! sum of the entries of `T^m`.
//!
//! Rasterization marks a closed cell when the relation meets it in a set of
//! positive length; an isolated point marks every closed cell containing it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::AmbientInterval;
use crate::relation::{Body, GridCells, Relation, RelationError, Segment};
use crate::scalar::Scalar;

pub const MAX_M: usize = 32;
const MEMBER_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntropyError {
    #[error("entropy of ∅ is 0 by definition, no counts")]
    EmptyRelation,
    #[error("m must be between 1 and {MAX_M}, got {0}")]
    BadM(usize),
    #[error("m_max must be at least 2, got {0}")]
    MMaxTooSmall(usize),
    #[error("grid resolution must be positive")]
    ZeroGrid,
    #[error("Mahavier product enumeration exceeds {0} sequences")]
    Guard(usize),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

fn grid_coord(amb: &AmbientInterval, n: usize, v: &Scalar) -> Scalar {
    &(v - amb.lo()) * &(&Scalar::from_int(n as i64) / &amb.width())
}

fn grid_line(amb: &AmbientInterval, n: usize, k: i64) -> Scalar {
    amb.lo() + &(&amb.width() * &Scalar::rational(k, n as i64))
}

fn cell_indices(amb: &AmbientInterval, n: usize, v: &Scalar) -> Vec<usize> {
    let u = grid_coord(amb, n, v);
    let k: i64 = u.floor().try_into().expect("cell index fits in i64");
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

/// For each open sub-piece between consecutive grid crossings (or for the point
/// itself), the closed cells that contain it.
pub fn piece_cell_groups(amb: &AmbientInterval, n: usize, piece: &Segment) -> Vec<Vec<(usize, usize)>> {
    let product = |x: &Scalar, y: &Scalar| {
        let cols = cell_indices(amb, n, x);
        let rows = cell_indices(amb, n, y);
        cols.iter().flat_map(|&i| rows.iter().map(move |&j| (i, j))).collect::<Vec<_>>()
    };
    if piece.is_point() {
        let (x, y) = piece.point_at(&piece.lo);
        return vec![product(&x, &y)];
    }
    let (cx, cy) = piece.coords();
    let mut params = vec![piece.lo.clone(), piece.hi.clone()];
    for coord in [&cx, &cy] {
        if coord.is_constant() {
            continue;
        }
        let a = coord.eval(&piece.lo);
        let b = coord.eval(&piece.hi);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let k0: i64 = grid_coord(amb, n, &a).floor().try_into().expect("grid index");
        let k1: i64 = grid_coord(amb, n, &b).ceil().try_into().expect("grid index");
        for k in (k0 + 1)..k1 {
            params.push((&grid_line(amb, n, k) - &coord.off) / &coord.coef);
        }
    }
    params.sort();
    params.dedup();
    params
        .windows(2)
        .map(|w| {
            let (x, y) = piece.point_at(&w[0].midpoint(&w[1]));
            product(&x, &y)
        })
        .collect()
}

/// Cells of an `n`-grid of `target`'s ambient meeting `source`'s cells in positive area.
pub fn regrid(source: &Relation, n: usize) -> GridCells {
    let g = source.as_grid().expect("regrid needs a grid relation");
    let mut cells = BTreeSet::new();
    // cell i of the g.n grid spans [i/g.n, (i+1)/g.n]; overlap with k-cells of the n grid
    let span = |i: usize| -> std::ops::Range<usize> {
        let lo = (i * n) / g.n;
        let hi = ((i + 1) * n).div_ceil(g.n);
        lo..hi.min(n)
    };
    for &(i, j) in &g.cells {
        for a in span(i) {
            for b in span(j) {
                cells.insert((a, b));
            }
        }
    }
    GridCells { n, cells }
}

/// Whether a point or segment lies inside the occupied closed cells of a grid relation.
pub fn piece_inside_grid(grid: &Relation, piece: &Segment) -> bool {
    let g = grid.as_grid().expect("grid relation");
    piece_cell_groups(grid.ambient(), g.n, piece)
        .iter()
        .all(|group| group.iter().any(|c| g.cells.contains(c)))
}

/// Outer grid approximation of a relation.
pub fn rasterize(g: &Relation, n: usize) -> Relation {
    assert!(n >= 1, "grid resolution must be positive");
    let cells: BTreeSet<(usize, usize)> = match g.body() {
        Body::Grid(grid) if grid.n == n => grid.cells.clone(),
        Body::Grid(_) => regrid(g, n).cells,
        _ => {
            let pieces = g.pieces().expect("points or segments");
            pieces
                .par_iter()
                .map(|p| piece_cell_groups(g.ambient(), n, p).into_iter().flatten().collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        }
    };
    Relation::grid(g.ambient().clone(), n, cells).expect("cells within grid")
}

/// Sparse 0/1 matrix with entry `(i, j)` for each occupied cell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl TransitionMatrix {
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows = vec![Vec::new(); n];
        for (i, j) in entries {
            assert!(i < n && j < n, "entry ({i},{j}) outside {n}x{n}");
            rows[i].push(j);
        }
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
        }
        TransitionMatrix { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&j| (i, j))).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.n, self.entries().into_iter().map(|(i, j)| (j, i)))
    }

    /// `N_1, …, N_{m_max}`: sums of the entries of `T^m`.
    pub fn walk_counts(&self, m_max: usize) -> Vec<BigUint> {
        let mut f: Vec<BigUint> = vec![BigUint::from(1u32); self.n];
        let mut out = Vec::with_capacity(m_max);
        for _ in 0..m_max {
            f = self
                .rows
                .par_iter()
                .map(|r| r.iter().fold(BigUint::zero(), |acc, &j| acc + &f[j]))
                .collect();
            out.push(f.iter().sum());
        }
        out
    }
}

pub fn transition_matrix(g: &Relation) -> Result<TransitionMatrix, EntropyError> {
    let grid = g
        .as_grid()
        .ok_or(RelationError::KindMismatch(g.kind(), "grid"))?;
    Ok(TransitionMatrix::from_entries(grid.n, grid.cells.iter().copied()))
}

/// Number of `(m+1)`-cell sequences realizable on the rasterized relation.
pub fn box_count(g: &Relation, n: usize, m: usize) -> Result<BigUint, EntropyError> {
    if g.is_empty() {
        return Err(EntropyError::EmptyRelation);
    }
    if m == 0 || m > MAX_M {
        return Err(EntropyError::BadM(m));
    }
    if n == 0 {
        return Err(EntropyError::ZeroGrid);
    }
    let t = transition_matrix(&rasterize(g, n))?;
    Ok(t.walk_counts(m).pop().expect("m >= 1"))
}

pub fn box_counts(g: &Relation, n: usize, m_max: usize) -> Result<Vec<BigUint>, EntropyError> {
    if g.is_empty() {
        return Err(EntropyError::EmptyRelation);
    }
    if m_max == 0 || m_max > MAX_M {
        return Err(EntropyError::BadM(m_max));
    }
    if n == 0 {
        return Err(EntropyError::ZeroGrid);
    }
    Ok(transition_matrix(&rasterize(g, n))?.walk_counts(m_max))
}

/// The digraph of a finite relation: vertices are the distinct coordinates, `x → y` iff `(x, y) ∈ F`.
#[derive(Clone, Debug)]
pub struct FiniteDigraph {
    pub vertices: Vec<Scalar>,
    pub adjacency: TransitionMatrix,
}

impl FiniteDigraph {
    pub fn of(f: &Relation) -> Result<Self, EntropyError> {
        let pts = f
            .as_points()
            .ok_or(RelationError::KindMismatch(f.kind(), "points"))?;
        let mut vertices: Vec<Scalar> = pts.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
        vertices.sort();
        vertices.dedup();
        let idx = |v: &Scalar| vertices.binary_search(v).expect("vertex");
        let entries: Vec<(usize, usize)> = pts.iter().map(|(x, y)| (idx(x), idx(y))).collect();
        let adjacency = TransitionMatrix::from_entries(vertices.len(), entries);
        Ok(FiniteDigraph { vertices, adjacency })
    }

    pub fn index_of(&self, v: &Scalar) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.row(i).binary_search(&j).is_ok()
    }

    /// Strongly connected components, each sorted, in a deterministic order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        sccs(&self.adjacency)
    }

    /// Exact test for a spectral radius above 1: some component has more edges than vertices.
    pub fn has_branching_component(&self) -> bool {
        self.components().iter().any(|c| {
            let inside: BTreeSet<usize> = c.iter().copied().collect();
            let edges: usize = c
                .iter()
                .map(|&i| self.adjacency.row(i).iter().filter(|j| inside.contains(j)).count())
                .sum();
            edges > c.len()
        })
    }
}

fn sccs(t: &TransitionMatrix) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(t.n(), t.nnz());
    let nodes: Vec<_> = (0..t.n()).map(|_| g.add_node(())).collect();
    for (i, j) in t.entries() {
        g.add_edge(nodes[i], nodes[j], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort();
    comps
}

/// All sequences of coordinate values in the m-th Mahavier product, sorted.
pub fn mahavier_members(f: &Relation, m: usize) -> Result<Vec<Vec<Scalar>>, EntropyError> {
    if m == 0 {
        return Err(EntropyError::BadM(m));
    }
    let dg = FiniteDigraph::of(f)?;
    // (x_{k+1}, x_k) ∈ F means the digraph edge x_{k+1} → x_k; walk the transpose forward.
    let back = dg.adjacency.transpose();
    let mut paths: Vec<Vec<usize>> = (0..dg.vertices.len()).map(|v| vec![v]).collect();
    for _ in 0..m {
        let mut next = Vec::new();
        for p in &paths {
            let last = *p.last().expect("nonempty path");
            for &w in back.row(last) {
                let mut q = p.clone();
                q.push(w);
                next.push(q);
            }
            if next.len() > MEMBER_GUARD {
                return Err(EntropyError::Guard(MEMBER_GUARD));
            }
        }
        paths = next;
    }
    let mut out: Vec<Vec<Scalar>> = paths
        .into_iter()
        .map(|p| p.into_iter().map(|i| dg.vertices[i].clone()).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Enclosure of `log ρ(T)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// No cycle: walk counts eventually vanish and the value is reported as 0.
    pub no_growth: bool,
    pub iterations: usize,
}

impl SpectralEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    fn no_growth() -> Self {
        SpectralEstimate { value: 0.0, lower: 0.0, upper: 0.0, no_growth: true, iterations: 0 }
    }
}

const SPECTRAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 2_000_000;

/// Collatz–Wielandt bounds for the Perron root of an irreducible block, via power
/// iteration on `A + I` (aperiodic, same Perron vector).
fn perron_bounds(rows: &[Vec<usize>]) -> (f64, f64, usize) {
    let n = rows.len();
    let mut v = vec![1.0f64; n];
    let mut best = (0.0f64, f64::INFINITY);
    for it in 1..=MAX_ITER {
        let w: Vec<f64> = rows
            .par_iter()
            .enumerate()
            .map(|(i, r)| v[i] + r.iter().map(|&j| v[j]).sum::<f64>())
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = w[i] / v[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        best = (best.0.max(lo), best.1.min(hi));
        let scale = w.iter().cloned().fold(0.0, f64::max);
        v = w.into_iter().map(|x| (x / scale).max(f64::MIN_POSITIVE)).collect();
        if best.1 - best.0 <= SPECTRAL_TOL * best.1 {
            return (best.0 - 1.0, best.1 - 1.0, it);
        }
    }
    (best.0 - 1.0, best.1 - 1.0, MAX_ITER)
}

pub fn spectral_entropy(t: &TransitionMatrix) -> SpectralEstimate {
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::NEG_INFINITY;
    let mut iterations = 0;
    for comp in sccs(t) {
        let pos: std::collections::HashMap<usize, usize> = comp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let rows: Vec<Vec<usize>> = comp
            .iter()
            .map(|&i| t.row(i).iter().filter_map(|j| pos.get(j).copied()).collect())
            .collect();
        if rows.iter().all(Vec::is_empty) {
            continue;
        }
        let (lo, hi, it) = perron_bounds(&rows);
        iterations = iterations.max(it);
        lower = lower.max(lo);
        upper = upper.max(hi);
    }
    if upper == f64::NEG_INFINITY {
        return SpectralEstimate::no_growth();
    }
    // a cyclic component has ρ ≥ 1; allow for rounding in the f64 iteration
    let slack = 1e-13;
    let lo = (lower.max(1.0) * (1.0 - slack)).ln();
    let hi = (upper * (1.0 + slack)).ln();
    let lo = lo.max(0.0).min(hi);
    SpectralEstimate { value: 0.5 * (lo + hi), lower: lo, upper: hi, no_growth: false, iterations }
}

/// `log ρ` of the digraph of a finite relation.
pub fn finite_entropy(f: &Relation) -> Result<SpectralEstimate, EntropyError> {
    Ok(spectral_entropy(&FiniteDigraph::of(f)?.adjacency))
}

/// Walk counts of the finite digraph; equal to the number of Mahavier sequences.
pub fn finite_walk_counts(f: &Relation, m_max: usize) -> Result<Vec<BigUint>, EntropyError> {
    Ok(FiniteDigraph::of(f)?.adjacency.walk_counts(m_max))
}

pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigUint = n >> shift;
    top.to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

fn big_strings<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Box counts, their normalized logarithms and the spectral estimate of one grid.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub m_max: usize,
    #[serde(serialize_with = "big_strings")]
    pub counts: Vec<BigUint>,
    /// `a_m / m` with `a_m = log N_m`.
    pub ratios: Vec<f64>,
    /// `min_m a_m / m`, the finite-m estimate.
    pub estimate: f64,
    pub spectral: SpectralEstimate,
    pub subadditive: bool,
    pub obs1_bound: bool,
    /// Counts over-approximate the relation (anything but a bitmap).
    pub outer: bool,
    pub empty: bool,
}

impl EntropyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,N_m,a_m_over_m\n");
        for (k, (c, r)) in self.counts.iter().zip(&self.ratios).enumerate() {
            out.push_str(&format!("{},{},{:.12}\n", k + 1, c, r));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `N_{m+k} ≤ N_m · N_k` whenever `m + k ≤ len`; counts are `N_1, N_2, …`.
pub fn subadditive(counts: &[BigUint]) -> bool {
    let l = counts.len();
    (1..=l).all(|m| (1..=l - m).all(|k| m + k > l || counts[m + k - 1] <= &counts[m - 1] * &counts[k - 1]))
}

pub fn entropy_sequence(g: &Relation, n: usize, m_max: usize) -> Result<EntropyReport, EntropyError> {
    if m_max < 2 {
        return Err(EntropyError::MMaxTooSmall(m_max));
    }
    if m_max > MAX_M {
        return Err(EntropyError::BadM(m_max));
    }
    if n == 0 {
        return Err(EntropyError::ZeroGrid);
    }
    if g.is_empty() {
        return Ok(EntropyReport {
            n,
            m_max,
            counts: Vec::new(),
            ratios: Vec::new(),
            estimate: 0.0,
            spectral: SpectralEstimate::no_growth(),
            subadditive: true,
            obs1_bound: true,
            outer: g.as_grid().is_none(),
            empty: true,
        });
    }
    let t = transition_matrix(&rasterize(g, n))?;
    let counts = t.walk_counts(m_max);
    let ratios: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(k, c)| if c.is_zero() { f64::NEG_INFINITY } else { ln_big(c) / (k + 1) as f64 })
        .collect();
    let estimate = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let nb = BigUint::from(n);
    let obs1_bound = counts.iter().enumerate().all(|(k, c)| c <= &nb.pow((k + 2) as u32));
    Ok(EntropyReport {
        n,
        m_max,
        subadditive: subadditive(&counts),
        counts,
        ratios,
        estimate,
        spectral: spectral_entropy(&t),
        obs1_bound,
        outer: g.as_grid().is_none(),
        empty: false,
    })
}

/// `N_m(G) = N_m(G⁻¹)` for every `m ≤ m_max`.
pub fn check_inverse_invariance(g: &Relation, n: usize, m_max: usize) -> Result<bool, EntropyError> {
    Ok(box_counts(g, n, m_max)? == box_counts(&g.inverse(), n, m_max)?)
}

/// Spectral estimates over a list of resolutions.
pub fn resolution_sweep(g: &Relation, ns: &[usize]) -> Result<Vec<(usize, SpectralEstimate)>, EntropyError> {
    ns.iter()
        .map(|&n| Ok((n, spectral_entropy(&transition_matrix(&rasterize(g, n))?))))
        .collect()
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

    fn f4() -> Relation {
        pts(&[("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")])
    }

    fn tent() -> Relation {
        Relation::segments(
            AmbientInterval::unit(),
            vec![
                Segment::graph(s("2"), s("0"), s("0"), s("1/2")),
                Segment::graph(s("-2"), s("2"), s("1/2"), s("1")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn corner_point_lands_in_one_cell() {
        let r = rasterize(&pts(&[("0", "1")]), 4);
        assert_eq!(r.as_grid().unwrap().cells, [(0, 3)].into_iter().collect());
    }

    #[test]
    fn interior_grid_point_touches_four_cells() {
        let r = rasterize(&pts(&[("1/2", "1/2")]), 2);
        assert_eq!(r.as_grid().unwrap().cells.len(), 4);
    }

    #[test]
    fn tent_fills_the_coarse_grid() {
        let r = rasterize(&tent(), 2);
        assert_eq!(r.as_grid().unwrap().cells.len(), 4);
        let t = transition_matrix(&r).unwrap();
        assert_eq!(t.nnz(), 4);
    }

    #[test]
    fn horizontal_line_on_a_grid_line_marks_both_rows() {
        let g = Relation::segments(AmbientInterval::unit(), vec![Segment::graph(s("0"), s("1/2"), s("0"), s("1/4"))]).unwrap();
        let cells = rasterize(&g, 4).as_grid().unwrap().cells.clone();
        assert_eq!(cells, [(0, 1), (0, 2)].into_iter().collect());
    }

    #[test]
    fn full_shift_counts() {
        for m in 1..=10 {
            assert_eq!(box_count(&f4(), 2, m).unwrap(), BigUint::from(1u32) << (m + 1));
        }
        let e = finite_entropy(&f4()).unwrap();
        assert!((e.value - std::f64::consts::LN_2).abs() < 1e-12 && e.width() < 1e-9);
    }

    #[test]
    fn counterexample_counts_and_entropy() {
        let gc = pts(&[("0", "1"), ("0", "3/4"), ("3/4", "0"), ("1", "0")]);
        assert_eq!(box_count(&gc, 4, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(mahavier_members(&gc, 2).unwrap().len(), 6);
        let e = finite_entropy(&gc).unwrap();
        assert!((e.value - 0.5 * std::f64::consts::LN_2).abs() < 1e-9);
        let e = entropy_sequence(&gc, 4, 6).unwrap();
        assert!((e.spectral.value - 0.5 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn members_of_a_two_cycle() {
        let f = pts(&[("0", "1"), ("1", "0")]);
        let m = mahavier_members(&f, 2).unwrap();
        assert_eq!(m, vec![vec![s("0"), s("1"), s("0")], vec![s("1"), s("0"), s("1")]]);
        let e = finite_entropy(&f).unwrap();
        assert!(e.value.abs() < 1e-12 && !e.no_growth);
    }

    #[test]
    fn spectral_edge_cases() {
        let loop1 = TransitionMatrix::from_entries(3, [(0, 0)]);
        assert!(spectral_entropy(&loop1).value.abs() < 1e-12);
        let chain = TransitionMatrix::from_entries(2, [(0, 1)]);
        assert!(spectral_entropy(&chain).no_growth);
        let full = TransitionMatrix::from_entries(2, [(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!((spectral_entropy(&full).value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn empty_relation_has_no_counts() {
        let e = Relation::empty_points(AmbientInterval::unit());
        assert_eq!(box_count(&e, 4, 2).unwrap_err(), EntropyError::EmptyRelation);
        let r = entropy_sequence(&e, 4, 3).unwrap();
        assert!(r.empty && r.counts.is_empty() && r.spectral.value == 0.0);
    }

    #[test]
    fn tent_sweep_sits_on_log_two() {
        for (_, e) in resolution_sweep(&tent(), &[16, 64]).unwrap() {
            assert!((e.value - std::f64::consts::LN_2).abs() < 1e-8, "{e:?}");
        }
    }

    #[test]
    fn regrid_refines() {
        let coarse = rasterize(&tent(), 4);
        let fine = regrid(&coarse, 8);
        assert_eq!(fine.cells.len(), 4 * coarse.as_grid().unwrap().cells.len());
        assert!(rasterize(&tent(), 8).subset_of(&coarse).unwrap());
    }

    #[test]
    fn csv_has_a_row_per_m() {
        let r = entropy_sequence(&f4(), 2, 3).unwrap();
        assert_eq!(r.to_csv().lines().count(), 4);
        assert!(r.subadditive && r.obs1_bound);
    }
}
