//! Deterministic SVG rendering of relations and of low-dimensional Mahavier
//! prefix projections. Output depends only on the input data: fixed float
//! formatting, no timestamps, sorted drawing order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::interval::AmbientInterval;
use crate::mahavier::{mahavier_members, EntropyError};
use crate::relation::{Body, Relation};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("prefix plots need a finite relation")]
    NotFinite,
    #[error("prefix plots support 1 ≤ m ≤ 3 (got {0})")]
    BadM(usize),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

pub const MAX_PREFIX_M: usize = 3;

#[derive(Clone, Debug)]
pub struct PlotOptions {
    pub size: u32,
    pub title: Option<String>,
    pub diagonal: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { size: 480, title: None, diagonal: true }
    }
}

const MARGIN: f64 = 40.0;

/// Maps an ambient square onto a pixel panel with y pointing up.
struct Frame {
    lo: f64,
    width: f64,
    x0: f64,
    side: f64,
}

impl Frame {
    fn new(amb: &AmbientInterval, x0: f64, side: f64) -> Self {
        Frame { lo: amb.lo().to_f64(), width: amb.width().to_f64(), x0, side }
    }

    fn px(&self, x: f64) -> f64 {
        self.x0 + (x - self.lo) / self.width * self.side
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + self.side - (y - self.lo) / self.width * self.side
    }

    fn panel(&self, out: &mut String, amb: &AmbientInterval, labels: (&str, &str), diagonal: bool) {
        let (l, r, t, b) = (self.x0, self.x0 + self.side, MARGIN, MARGIN + self.side);
        let _ = writeln!(out, r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444" stroke-width="1"/>"##, f(l), f(t), f(self.side), f(self.side));
        if diagonal {
            let _ = writeln!(out, r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#aaa" stroke-width="0.8" stroke-dasharray="4 3"/>"##, f(l), f(b), f(r), f(t));
        }
        let (lo, hi) = (amb.lo().to_string(), amb.hi().to_string());
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#, f(l), f(b + 14.0), esc(&lo));
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#, f(r), f(b + 14.0), esc(&hi));
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, f(l - 4.0), f(t + 4.0), esc(&hi));
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, f((l + r) / 2.0), f(b + 28.0), esc(labels.0));
        let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#, f(l - 18.0), f((t + b) / 2.0), f(l - 18.0), f((t + b) / 2.0), esc(labels.1));
    }
}

fn f(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(out: &mut String, w: f64, h: f64, title: Option<&str>) {
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif">"#, f(w), f(h), f(w), f(h));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = title {
        let _ = writeln!(out, r#"<text x="{}" y="24" font-size="14" text-anchor="middle">{}</text>"#, f(w / 2.0), esc(t));
    }
}

/// The relation drawn in its ambient square: segments as lines, points as dots,
/// grid cells as filled squares.
pub fn relation_svg(g: &Relation, opts: &PlotOptions) -> String {
    let side = opts.size as f64;
    let (w, h) = (side + 2.0 * MARGIN, side + 2.0 * MARGIN);
    let frame = Frame::new(g.ambient(), MARGIN, side);
    let mut out = String::new();
    header(&mut out, w, h, opts.title.as_deref());
    frame.panel(&mut out, g.ambient(), ("x", "y"), opts.diagonal);
    match g.body() {
        Body::Grid(grid) => {
            let cell = side / grid.n as f64;
            for &(i, j) in &grid.cells {
                let (x, y) = (MARGIN + i as f64 * cell, MARGIN + side - (j + 1) as f64 * cell);
                let _ = writeln!(out, r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#3465a4" fill-opacity="0.7"/>"##, f(x), f(y), f(cell), f(cell));
            }
        }
        Body::Points(pts) => dots(&mut out, &frame, pts.iter().map(|(x, y)| (x, y))),
        Body::Segments(segs) => {
            for s in segs {
                let ((x0, y0), (x1, y1)) = s.endpoints();
                if s.is_point() {
                    dots(&mut out, &frame, [(&x0, &y0)].into_iter());
                } else {
                    let _ = writeln!(
                        out,
                        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c4262e" stroke-width="2" stroke-linecap="round"/>"##,
                        f(frame.px(x0.to_f64())),
                        f(frame.py(y0.to_f64())),
                        f(frame.px(x1.to_f64())),
                        f(frame.py(y1.to_f64()))
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn dots<'a>(out: &mut String, frame: &Frame, pts: impl Iterator<Item = (&'a Scalar, &'a Scalar)>) {
    for (x, y) in pts {
        let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="4" fill="#c4262e"/>"##, f(frame.px(x.to_f64())), f(frame.py(y.to_f64())));
    }
}

/// Scatter of the m-th Mahavier product of a finite relation, one panel per
/// coordinate pair `(x_i, x_j)`, `i < j ≤ m+1`.
pub fn prefix_svg(g: &Relation, m: usize, opts: &PlotOptions) -> Result<String, PlotError> {
    if g.as_points().is_none() {
        return Err(PlotError::NotFinite);
    }
    if m == 0 || m > MAX_PREFIX_M {
        return Err(PlotError::BadM(m));
    }
    let members = mahavier_members(g, m)?;
    let pairs: Vec<(usize, usize)> = (0..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect();
    let side = (opts.size as f64 / 2.0).max(160.0);
    let w = MARGIN + pairs.len() as f64 * (side + MARGIN);
    let h = side + 2.0 * MARGIN;
    let mut out = String::new();
    let counts = format!("m = {m}: {} sequences", members.len());
    let title = opts.title.as_ref().map_or(counts.clone(), |t| format!("{t}, {counts}"));
    header(&mut out, w, h, Some(&title));
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let frame = Frame::new(g.ambient(), MARGIN + k as f64 * (side + MARGIN), side);
        frame.panel(&mut out, g.ambient(), (&format!("x{}", i + 1), &format!("x{}", j + 1)), false);
        let mut seen: Vec<(&Scalar, &Scalar)> = members.iter().map(|s| (&s[i], &s[j])).collect();
        seen.sort();
        seen.dedup();
        dots(&mut out, &frame, seen.into_iter());
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gallery, Params};

    #[test]
    fn deterministic_and_well_formed() {
        let g = gallery("H_ab", &Params::default()).unwrap();
        let a = relation_svg(&g, &PlotOptions::default());
        let b = relation_svg(&g.clone(), &PlotOptions::default());
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<line").count(), 2 + 1); // two pieces plus the diagonal
    }

    #[test]
    fn grid_cells_become_rects() {
        let g = crate::mahavier::rasterize(&gallery("tent", &Params::default()).unwrap(), 4);
        let svg = relation_svg(&g, &PlotOptions { diagonal: false, ..Default::default() });
        let cells = g.as_grid().unwrap().cells.len();
        assert_eq!(svg.matches("<rect").count(), cells + 2);
    }

    #[test]
    fn prefix_panels() {
        let g = gallery("counterexample", &Params::default()).unwrap();
        let svg = prefix_svg(&g, 2, &PlotOptions::default()).unwrap();
        assert!(svg.contains("x1") && svg.contains("x3"));
        assert!(matches!(prefix_svg(&g, 4, &PlotOptions::default()), Err(PlotError::BadM(4))));
        let h = gallery("H_ab", &Params::default()).unwrap();
        assert!(matches!(prefix_svg(&h, 1, &PlotOptions::default()), Err(PlotError::NotFinite)));
    }
}
