//! Sign-certified voxel grids and their same-sign flood fill.

use super::EdgeSeg;
use crate::geom::{BBox, Point3};
use crate::num::{qi, to_f64, Q};
use crate::poly::{roots_along_segment, AlgebraError, Poly, TriPoly};
use std::collections::{BTreeMap, VecDeque};

/// Float interval `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Iv(pub f64, pub f64);

impl Iv {
    fn mul(self, o: Iv) -> Iv {
        let c = [self.0 * o.0, self.0 * o.1, self.1 * o.0, self.1 * o.1];
        Iv(c.iter().copied().fold(f64::INFINITY, f64::min), c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    fn pow(self, k: u32) -> Iv {
        if k == 0 {
            return Iv(1.0, 1.0);
        }
        let (a, b) = (self.0.powi(k as i32), self.1.powi(k as i32));
        if k % 2 == 1 {
            Iv(a, b)
        } else if self.0 <= 0.0 && self.1 >= 0.0 {
            Iv(0.0, a.max(b))
        } else {
            Iv(a.min(b), a.max(b))
        }
    }
}

/// Polynomial with float coefficients for interval evaluation.
#[derive(Clone, Debug)]
pub(crate) struct FloatPoly(Vec<(Vec<u32>, f64)>);

impl FloatPoly {
    pub fn new(p: &Poly) -> Self {
        FloatPoly(p.terms().map(|(e, c)| (e.clone(), to_f64(c))).collect())
    }

    /// Sign certified over the box, or 0.
    pub fn sign_on(&self, b: [Iv; 3]) -> i8 {
        let mut lo = 0.0;
        let mut hi = 0.0;
        let mut mag = 0.0;
        for (e, c) in &self.0 {
            let mut m = Iv(*c, *c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = m.mul(b[i].pow(k));
                }
            }
            lo += m.0;
            hi += m.1;
            mag += m.0.abs().max(m.1.abs());
        }
        let slack = mag * 1e-12;
        if lo > slack {
            1
        } else if hi < -slack {
            -1
        } else {
            0
        }
    }
}

/// Connected same-sign components of certified voxels; uncertified voxels are buffer.
#[derive(Clone, Debug)]
pub struct CellDecomposition {
    pub lo: [f64; 3],
    pub h: f64,
    pub dims: [usize; 3],
    /// Cell id per voxel, `u32::MAX` on buffer.
    pub labels: Vec<u32>,
    /// Sign of the polynomial on each cell.
    pub cell_sign: Vec<i8>,
    /// Voxel sign, 0 on buffer.
    pub signs: Vec<i8>,
}

pub const BUFFER: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Located {
    Cell(usize),
    OnBuffer,
    Outside,
}

impl CellDecomposition {
    pub fn count(&self) -> usize {
        self.cell_sign.len()
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.dims[1] + j) * self.dims[0] + i
    }

    pub fn coords(&self, v: usize) -> [usize; 3] {
        let i = v % self.dims[0];
        let j = (v / self.dims[0]) % self.dims[1];
        let k = v / (self.dims[0] * self.dims[1]);
        [i, j, k]
    }

    pub fn voxel_box(&self, v: usize) -> [[f64; 2]; 3] {
        let c = self.coords(v);
        [0, 1, 2].map(|a| {
            let l = self.lo[a] + c[a] as f64 * self.h;
            [l, l + self.h]
        })
    }

    pub fn center(&self, v: usize) -> [f64; 3] {
        self.voxel_box(v).map(|[a, b]| 0.5 * (a + b))
    }

    /// Six face neighbours.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.coords(v);
        (0..6).filter_map(move |d| {
            let a = d / 2;
            let mut n = c;
            if d % 2 == 0 {
                if n[a] == 0 {
                    return None;
                }
                n[a] -= 1;
            } else {
                n[a] += 1;
                if n[a] >= self.dims[a] {
                    return None;
                }
            }
            Some(self.index(n[0], n[1], n[2]))
        })
    }

    pub fn voxel_of(&self, p: [f64; 3]) -> Option<usize> {
        let mut c = [0usize; 3];
        for a in 0..3 {
            let t = ((p[a] - self.lo[a]) / self.h).floor();
            if t < 0.0 || t >= self.dims[a] as f64 {
                return None;
            }
            c[a] = t as usize;
        }
        Some(self.index(c[0], c[1], c[2]))
    }

    pub fn locate_f64(&self, p: [f64; 3]) -> Located {
        match self.voxel_of(p) {
            None => Located::Outside,
            Some(v) if self.labels[v] == BUFFER => Located::OnBuffer,
            Some(v) => Located::Cell(self.labels[v] as usize),
        }
    }

    pub fn locate_cell(&self, p: &Point3) -> Located {
        self.locate_f64(p.to_f64())
    }
}

/// Flood-fills `labels` over voxels with equal nonzero `signs`; returns per-component sign.
pub(crate) fn flood(d: &CellDecomposition, signs: &[i8], blocked: &dyn Fn(usize) -> bool) -> (Vec<u32>, Vec<i8>) {
    let n = signs.len();
    let mut labels = vec![BUFFER; n];
    let mut comp_sign = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if signs[s] == 0 || labels[s] != BUFFER || blocked(s) {
            continue;
        }
        let id = comp_sign.len() as u32;
        comp_sign.push(signs[s]);
        labels[s] = id;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for w in d.neighbours(v) {
                if labels[w] == BUFFER && signs[w] == signs[s] && !blocked(w) {
                    labels[w] = id;
                    queue.push_back(w);
                }
            }
        }
    }
    (labels, comp_sign)
}

/// Voxel grid of side `h` over `bbox`, signs certified by interval evaluation.
pub fn decompose_cells(f: &TriPoly, bbox: &BBox, h: &Q) -> CellDecomposition {
    let fp = FloatPoly::new(f.poly());
    let hf = to_f64(h);
    assert!(hf > 0.0, "grid step must be positive");
    let lo = [0, 1, 2].map(|a| to_f64(&bbox.lo[a]));
    let dims = [0, 1, 2].map(|a| (((to_f64(&bbox.hi[a]) - lo[a]) / hf).ceil() as usize).max(1));
    let mut d = CellDecomposition { lo, h: hf, dims, labels: vec![], cell_sign: vec![], signs: vec![] };
    let n = dims[0] * dims[1] * dims[2];
    let signs: Vec<i8> = (0..n)
        .map(|v| {
            let b = d.voxel_box(v);
            fp.sign_on([Iv(b[0][0], b[0][1]), Iv(b[1][0], b[1][1]), Iv(b[2][0], b[2][1])])
        })
        .collect();
    let (labels, cell_sign) = flood(&d, &signs, &|_| false);
    d.labels = labels;
    d.cell_sign = cell_sign;
    d.signs = signs;
    d
}

/// Cell counts at `h` and `h / 2`.
pub fn refinement_counts(f: &TriPoly, bbox: &BBox, h: &Q) -> (usize, usize) {
    let a = decompose_cells(f, bbox, h).count();
    let b = decompose_cells(f, bbox, &(h / qi(2))).count();
    (a, b)
}

/// Crossing tally of a general polynomial on a voxel decomposition.
#[derive(Clone, Debug, Default)]
pub struct VoxelAudit {
    pub crossings: BTreeMap<usize, Vec<usize>>,
    /// Open pieces whose every probe landed on the buffer.
    pub unresolved: usize,
}

/// Splits each segment at the roots of `f` and locates its open pieces.
pub fn audit_poly(f: &TriPoly, d: &CellDecomposition, segs: &[EdgeSeg]) -> Result<VoxelAudit, AlgebraError> {
    let mut out = VoxelAudit::default();
    for (i, s) in segs.iter().enumerate() {
        let (p, q) = (s.p.coords(), s.q.coords());
        let r = roots_along_segment(f.poly(), &p, &q)?;
        let mut cuts = vec![0.0];
        for root in &r.roots {
            cuts.push(to_f64(&root.lo));
            cuts.push(to_f64(&root.hi));
        }
        cuts.push(1.0);
        let (pf, qf) = (s.p.to_f64(), s.q.to_f64());
        for k in 0..=r.roots.len() {
            let (a, b) = (cuts[2 * k], cuts[2 * k + 1]);
            if b <= a {
                continue;
            }
            let mut found = None;
            for w in [0.5, 0.25, 0.75, 0.125, 0.875, 0.375, 0.625] {
                let t = a + w * (b - a);
                let x = [0, 1, 2].map(|c| pf[c] + t * (qf[c] - pf[c]));
                if let Located::Cell(c) = d.locate_f64(x) {
                    found = Some(c);
                    break;
                }
            }
            match found {
                Some(c) => {
                    let e = out.crossings.entry(c).or_default();
                    if e.last() != Some(&i) {
                        e.push(i);
                    }
                }
                None => out.unresolved += 1,
            }
        }
    }
    Ok(out)
}
