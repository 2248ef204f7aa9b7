//! SVG rendering of planar maps.

use super::{DrawnCurve, Origin};
use crate::depth::Piece;
use crate::geom::{Point2, Scene, Triangle};
use std::fmt::Write as _;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 12.0;

struct Frame {
    lo: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: impl IntoIterator<Item = [f64; 2]>) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for i in 0..2 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let ext = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        Frame { lo, scale: (SIZE - 2.0 * MARGIN) / ext }
    }

    /// Screen coordinates; `y` grows downwards.
    fn map(&self, p: &Point2) -> (f64, f64) {
        let [x, y] = p.to_f64();
        (MARGIN + (x - self.lo[0]) * self.scale, SIZE - MARGIN - (y - self.lo[1]) * self.scale)
    }

    fn points(&self, poly: &[Point2]) -> String {
        poly.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn colour(o: Origin) -> &'static str {
    match o {
        Origin::ZeroSet => "#c0392b",
        Origin::Curtain => "#2471a3",
        Origin::PlaneTrace => "#7d3c98",
        Origin::CylinderTrace => "#d68910",
        Origin::LeafBsp => "#1e8449",
    }
}

fn header(s: &mut String) {
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##).unwrap();
}

/// One triangle in its chart: pieces outlined, drawn curves coloured by origin.
pub fn triangle_svg(t: &Triangle, curves: &[DrawnCurve], pieces: &[&Piece]) -> String {
    let proj = t.proj();
    let f = Frame::fit(proj.iter().map(|p| p.to_f64()));
    let mut s = String::new();
    header(&mut s);
    writeln!(s, r##"<polygon points="{}" fill="#f4f6f7" stroke="#000" stroke-width="1.5"/>"##, f.points(&proj)).unwrap();
    for p in pieces {
        writeln!(s, r##"<polygon points="{}" fill="none" stroke="#aab7b8" stroke-width="0.6"/>"##, f.points(&p.poly)).unwrap();
    }
    for c in curves {
        if let Some((a, b)) = c.as_segment() {
            let (x1, y1) = f.map(a);
            let (x2, y2) = f.map(b);
            writeln!(
                s,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{}" stroke-width="1.2"><title>{} node {}</title></line>"#,
                colour(c.origin),
                c.origin.tag(),
                c.node
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Scene projection; with a painter order the triangles are shaded from
/// light (back) to dark (front) and drawn in that order.
pub fn scene_svg(scene: &Scene, painter_order: Option<&[usize]>) -> String {
    let f = Frame::fit(scene.triangles.iter().flat_map(|t| t.proj().map(|p| p.to_f64())));
    let mut s = String::new();
    header(&mut s);
    let ids: Vec<usize> = match painter_order {
        Some(o) => o.to_vec(),
        None => scene.triangles.iter().map(|t| t.id).collect(),
    };
    let n = ids.len().max(1);
    for (rank, id) in ids.iter().enumerate() {
        let Some(t) = scene.get(*id) else { continue };
        let fill = match painter_order {
            Some(_) => {
                let g = 230 - (170 * rank / n) as u32;
                format!("rgb({g},{g},{})", (g + 20).min(255))
            }
            None => "none".into(),
        };
        writeln!(
            s,
            r##"<polygon points="{}" fill="{fill}" fill-opacity="0.85" stroke="#000" stroke-width="0.8"><title>{}</title></polygon>"##,
            f.points(&t.proj()),
            t.id
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
