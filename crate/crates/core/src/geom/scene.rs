//! Scenes and their line-oriented text format.

use super::{GeomError, Point3, Triangle};
use crate::num::{format_rational, parse_rational, q, qi, Q};

/// Axis-aligned box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub lo: [Q; 3],
    pub hi: [Q; 3],
}

impl BBox {
    pub fn contains(&self, p: &Point3) -> bool {
        let c = p.coords();
        (0..3).all(|i| self.lo[i] <= c[i] && c[i] <= self.hi[i])
    }

    pub fn contains_strict(&self, p: &Point3) -> bool {
        let c = p.coords();
        (0..3).all(|i| self.lo[i] < c[i] && c[i] < self.hi[i])
    }

    pub fn diameter_f64(&self) -> f64 {
        (0..3)
            .map(|i| {
                let d = crate::num::to_f64(&(&self.hi[i] - &self.lo[i]));
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn cube(r: i64) -> BBox {
        BBox { lo: [qi(-r), qi(-r), qi(-r)], hi: [qi(r), qi(r), qi(r)] }
    }
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub triangles: Vec<Triangle>,
    pub bbox: BBox,
}

impl Scene {
    /// Wraps triangles with a padded bounding box that strictly contains them.
    pub fn new(triangles: Vec<Triangle>) -> Self {
        let bbox = Self::padded_bbox(&triangles);
        Self { triangles, bbox }
    }

    pub fn padded_bbox(triangles: &[Triangle]) -> BBox {
        if triangles.is_empty() {
            return BBox::cube(1);
        }
        let mut lo = triangles[0].v[0].coords();
        let mut hi = lo.clone();
        for t in triangles {
            for v in &t.v {
                let c = v.coords();
                for i in 0..3 {
                    if c[i] < lo[i] {
                        lo[i] = c[i].clone();
                    }
                    if c[i] > hi[i] {
                        hi[i] = c[i].clone();
                    }
                }
            }
        }
        let ext = (0..3).map(|i| &hi[i] - &lo[i]).max().unwrap();
        let pad = ext / qi(8) + q(1, 64);
        for i in 0..3 {
            lo[i] = &lo[i] - &pad;
            hi[i] = &hi[i] + &pad;
        }
        BBox { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&Triangle> {
        self.triangles.iter().find(|t| t.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SceneParseError {
    #[error("line {line}: expected 10 fields `id x1 y1 z1 x2 y2 z2 x3 y3 z3`, got {got}")]
    Fields { line: usize, got: usize },
    #[error("line {line}: bad number `{text}`")]
    Number { line: usize, text: String },
    #[error("line {line}: {source}")]
    Triangle { line: usize, source: GeomError },
    #[error("duplicate triangle id {0}")]
    DuplicateId(usize),
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneParseError> {
    let mut tris: Vec<Triangle> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 10 {
            return Err(SceneParseError::Fields { line: i + 1, got: parts.len() });
        }
        let id: usize = parts[0]
            .parse()
            .map_err(|_| SceneParseError::Number { line: i + 1, text: parts[0].into() })?;
        let mut c = Vec::with_capacity(9);
        for p in &parts[1..] {
            c.push(parse_rational(p).ok_or_else(|| SceneParseError::Number { line: i + 1, text: (*p).into() })?);
        }
        let pt = |k: usize| Point3::new(c[3 * k].clone(), c[3 * k + 1].clone(), c[3 * k + 2].clone());
        let t = Triangle::new(id, pt(0), pt(1), pt(2)).map_err(|e| SceneParseError::Triangle { line: i + 1, source: e })?;
        if tris.iter().any(|o| o.id == id) {
            return Err(SceneParseError::DuplicateId(id));
        }
        tris.push(t);
    }
    Ok(Scene::new(tris))
}

pub fn write_scene(scene: &Scene) -> String {
    let mut s = String::from("# id x1 y1 z1 x2 y2 z2 x3 y3 z3\n");
    for t in &scene.triangles {
        s.push_str(&t.id.to_string());
        for v in &t.v {
            for c in v.coords() {
                s.push(' ');
                s.push_str(&format_rational(&c));
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_bbox() {
        let text = "# two triangles\n0 0 0 0 1 0 0 0 1 0\n1 0 0 1/2 1 0 1/2 0 1 1/2\n";
        let s = parse_scene(text).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.triangles[1].v[0].z, q(1, 2));
        let again = parse_scene(&write_scene(&s)).unwrap();
        assert_eq!(again.triangles, s.triangles);
        for t in &s.triangles {
            for v in &t.v {
                assert!(s.bbox.contains_strict(v));
            }
        }
        assert!(matches!(parse_scene("0 1 2"), Err(SceneParseError::Fields { line: 1, got: 3 })));
        assert!(matches!(parse_scene("0 0 0 0 1 0 0 2 0 0"), Err(SceneParseError::Triangle { .. })));
    }
}
