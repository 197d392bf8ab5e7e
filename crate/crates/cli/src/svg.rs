//! SVG 1.1 rendering of polytopes of affine dimension at most two.

use std::fmt::Write;

use num_traits::ToPrimitive;
use polychow_core::linalg::{fmt_vec, sub, Matrix, RatVec};
use polychow_core::Polytope;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// A point to mark, with its caption.
pub struct Marker {
    pub point: RatVec,
    pub label: String,
}

/// Two coordinates on which the affine hull projects injectively.
fn chart(p: &Polytope) -> Option<(usize, usize)> {
    let verts = p.vertices();
    let dim = p.affine_dim();
    let n = p.ambient_dim();
    if dim > 2 || verts.is_empty() {
        return None;
    }
    if n == 1 {
        return Some((0, 0));
    }
    let dirs: Vec<RatVec> = verts[1..].iter().map(|v| sub(v, &verts[0])).collect();
    for i in 0..n {
        for j in i + 1..n {
            let rank = if dirs.is_empty() {
                0
            } else {
                Matrix::from_rows(dirs.iter().map(|d| vec![d[i].clone(), d[j].clone()]).collect())
                    .map(|m| m.rank())
                    .unwrap_or(0)
            };
            if rank as isize == dim {
                return Some((i, j));
            }
        }
    }
    None
}

fn to_f64(x: &polychow_core::Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `None` when the polytope is more than two-dimensional.
pub fn render(p: &Polytope, markers: &[Marker], title: &str) -> Option<String> {
    let (i, j) = chart(p)?;
    let flat = |v: &RatVec| -> (f64, f64) {
        if i == j {
            (to_f64(&v[i]), 0.0)
        } else {
            (to_f64(&v[i]), to_f64(&v[j]))
        }
    };
    let all: Vec<(f64, f64)> = p.vertices().iter().chain(markers.iter().map(|m| &m.point)).map(flat).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    // flip y so the picture reads with the usual orientation
    let px = |(x, y): (f64, f64)| (MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "  <title>{}</title>", escape(title));
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);

    let ring = boundary(p, flat);
    if ring.len() >= 2 {
        let pts: Vec<String> = ring.iter().map(|&q| px(q)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let shape = if ring.len() == 2 { "polyline" } else { "polygon" };
        let _ = writeln!(
            svg,
            r##"  <{shape} points="{}" fill="#dde8f6" stroke="#1f4e8c" stroke-width="2"/>"##,
            pts.join(" ")
        );
    }
    for m in markers {
        let (x, y) = px(flat(&m.point));
        let fill = if p.is_vertex(&m.point) { "#1f4e8c" } else { "#c0392b" };
        let _ = writeln!(svg, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{fill}"/>"#);
        let _ = writeln!(
            svg,
            r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{}</text>"#,
            x + 8.0,
            y - 8.0,
            escape(&m.label)
        );
    }
    let _ = writeln!(svg, "</svg>");
    Some(svg)
}

/// Hull vertices in cyclic order around their centroid.
fn boundary(p: &Polytope, flat: impl Fn(&RatVec) -> (f64, f64)) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = p.vertices().iter().map(flat).collect();
    if pts.len() <= 2 {
        return pts;
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|q| q.0).sum::<f64>() / n;
    let cy = pts.iter().map(|q| q.1).sum::<f64>() / n;
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    pts
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn vertex_markers(p: &Polytope) -> Vec<Marker> {
    p.vertices().iter().map(|v| Marker { point: v.clone(), label: fmt_vec(v) }).collect()
}
