//! Reference strategies: vertical prism decomposition and a standalone BSP.

use crate::arrangement::{build_segment_map, MapError};
use crate::cutter::autopartition;
use crate::depth::{pieces_from_triangles, verify_acyclic, DepthError, Piece};
use crate::geom::polygon::fan;
use crate::geom::{Point2, Rotation, Scene, Triangle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, thiserror::Error)]
pub enum BaselineError {
    #[error("planar map of triangle {tri}: {err}")]
    Map { tri: usize, err: MapError },
    #[error(transparent)]
    Depth(#[from] DepthError),
}

#[derive(Clone, Debug)]
pub struct BaselineOutput {
    /// Triangular pieces.
    pub pieces: Vec<Piece>,
    /// Faces of the arrangement restricted to each triangle (prism only).
    pub faces: Vec<usize>,
}

fn fan_pieces(frags: impl IntoIterator<Item = Piece>) -> Vec<Piece> {
    let mut out = Vec::new();
    for f in frags {
        for [a, b, c] in fan(&f.poly) {
            out.push(Piece::new(out.len(), f.tri, f.plane.clone(), vec![a, b, c]));
        }
    }
    out
}

/// Cuts every triangle along the projected edges of all the others, then
/// fans each trapezoid into triangles. Uncut triangles are kept whole.
pub fn prism_decompose(scene: &Scene) -> Result<BaselineOutput, BaselineError> {
    let mut frags = Vec::new();
    let mut faces = Vec::new();
    for t in &scene.triangles {
        let segs: Vec<(Point2, Point2)> = scene
            .triangles
            .iter()
            .filter(|o| o.id != t.id)
            .flat_map(|o| {
                let p = o.proj();
                (0..3).map(move |k| (p[k].clone(), p[(k + 1) % 3].clone())).collect::<Vec<_>>()
            })
            .collect();
        let map = build_segment_map(&t.proj(), &segs, t.id as u64).map_err(|err| BaselineError::Map { tri: t.id, err })?;
        faces.push(map.faces);
        if map.faces == 1 && map.arcs.iter().all(|a| a.boundary) {
            frags.push(Piece::from_triangle(frags.len(), t));
            continue;
        }
        for tr in map.trapezoids {
            frags.push(Piece::new(frags.len(), t.id, t.plane.clone(), tr.poly));
        }
    }
    Ok(BaselineOutput { pieces: fan_pieces(frags), faces })
}

/// Autopartition of the whole scene, fanned into triangles.
pub fn bsp_standalone(scene: &Scene) -> BaselineOutput {
    let out = autopartition(pieces_from_triangles(&scene.triangles));
    BaselineOutput { pieces: fan_pieces(out.fragments), faces: vec![] }
}

/// Rotates triangular pieces into a new frame; `None` if one turns vertical.
pub fn rotate_pieces(pieces: &[Piece], r: &Rotation) -> Option<Vec<Piece>> {
    let mut tris = Vec::with_capacity(pieces.len());
    for p in pieces {
        let v = p.vertices3();
        if v.len() != 3 {
            return None;
        }
        let t = Triangle::new(p.id, r.apply(&v[0]), r.apply(&v[1]), r.apply(&v[2])).ok()?;
        tris.push(t);
    }
    let mut out = pieces_from_triangles(&tris);
    for (o, p) in out.iter_mut().zip(pieces) {
        o.tri = p.tri;
    }
    Some(out)
}

/// Acyclicity of triangular pieces seen from `views` random directions.
/// Returns the number of directions checked and how many were acyclic.
pub fn acyclic_under_rotations(pieces: &[Piece], views: usize, seed: u64) -> Result<(usize, usize), DepthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut ok) = (0, 0);
    let mut attempts = 0;
    while checked < views && attempts < 4 * views {
        attempts += 1;
        let r = Rotation::random(&mut rng, 0.6);
        let Some(rot) = rotate_pieces(pieces, &r) else { continue };
        checked += 1;
        if verify_acyclic(&rot)?.acyclic {
            ok += 1;
        }
    }
    Ok((checked, ok))
}
