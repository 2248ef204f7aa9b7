//! Scene generators.

use crate::geom::{verify_general_position, Point3, Scene, Triangle};
use crate::num::{q, qi, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod experiment;

pub use experiment::{run_experiment, ExperimentRow, ExperimentSpec, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("grid needs k >= 2, got {0}")]
    GridSize(usize),
    #[error("need at least one triangle")]
    Empty,
    #[error("sampling budget exhausted after placing {achieved} of {wanted} triangles")]
    Budget { achieved: usize, wanted: usize },
}

fn p3(x: Q, y: Q, z: Q) -> Point3 {
    Point3::new(x, y, z)
}

/// Thin wedge from `u` (wide end) to `v` (apex), overshooting both ends by
/// `over` and with heights interpolated from `zu` to `zv` along the axis.
fn wedge(id: usize, u: [Q; 2], v: [Q; 2], zu: Q, zv: Q, width: &Q, over: &Q) -> Triangle {
    let d = [&v[0] - &u[0], &v[1] - &u[1]];
    let n = [-d[1].clone(), d[0].clone()];
    let at = |t: &Q| [&u[0] + &d[0] * t, &u[1] + &d[1] * t, &zu + (&zv - &zu) * t];
    let a = at(&-over.clone());
    let b = at(&(qi(1) + over));
    let side = |s: i64| {
        let w = width * qi(s);
        p3(&a[0] + &n[0] * &w, &a[1] + &n[1] * &w, a[2].clone())
    };
    Triangle::new(id, side(1), side(-1), p3(b[0].clone(), b[1].clone(), b[2].clone())).expect("wedge is a valid triangle")
}

/// Three thin wedges whose depth relation is a 3-cycle.
pub fn gen_triple_cycle() -> Scene {
    let ab = [qi(0), qi(0)];
    let bc = [qi(4), qi(0)];
    let ca = [qi(2), qi(3)];
    let (w, o) = (q(1, 40), q(1, 4));
    let tris = vec![
        // A runs from the CA crossing down to the AB crossing, rising towards AB.
        wedge(0, ca.clone(), ab.clone(), q(1, 10), q(21, 10), &w, &o),
        wedge(1, ab, bc.clone(), q(11, 10), q(19, 10), &w, &o),
        wedge(2, bc, ca, q(9, 10), q(13, 10), &w, &o),
    ];
    Scene::new(tris)
}

/// `k` horizontal and `k` vertical thin triangles over a `k x k` grid, tilted
/// with alternating slopes so that the strips weave.
pub fn gen_grid(k: usize) -> Result<Scene, GenError> {
    if k < 2 {
        return Err(GenError::GridSize(k));
    }
    let kq = qi(k as i64);
    let half = &kq / qi(2);
    let w = q(1, 100);
    let (sigma, tau) = (q(1, 5), q(1, 10));
    let mut tris = Vec::with_capacity(2 * k);
    for i in 0..k {
        let c = &qi(i as i64) + q(1, 2);
        let s = if i % 2 == 0 { sigma.clone() } else { -sigma.clone() };
        let off = q(i as i64 + 1, 1000);
        let z = |x: &Q| &s * (x - &half) + &off;
        let (x0, x1) = (qi(-1), &kq + qi(1));
        tris.push(
            Triangle::new(
                tris.len(),
                p3(x0.clone(), &c - &w, z(&x0)),
                p3(x1.clone(), &c - &w, z(&x1)),
                p3(half.clone(), &c + &w, z(&half)),
            )
            .expect("strip is a valid triangle"),
        );
    }
    for j in 0..k {
        let c = &qi(j as i64) + q(1, 2);
        let t = if j % 2 == 0 { tau.clone() } else { -tau.clone() };
        let off = q(j as i64 + 1, 997);
        let z = |y: &Q| &t * (y - &half) - &off;
        let (y0, y1) = (qi(-1), &kq + qi(1));
        tris.push(
            Triangle::new(
                tris.len(),
                p3(&c + &w, y0.clone(), z(&y0)),
                p3(&c + &w, y1.clone(), z(&y1)),
                p3(&c - &w, half.clone(), z(&half)),
            )
            .expect("strip is a valid triangle"),
        );
    }
    Ok(Scene::new(tris))
}

fn coord(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    q(rng.gen_range(lo..=hi), 1000)
}

/// Rejection-sampled pairwise disjoint triangles in the unit box, with
/// coordinates on a 1/1000 grid.
pub fn gen_random_disjoint(n: usize, seed: u64) -> Result<Scene, GenError> {
    if n == 0 {
        return Err(GenError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tris: Vec<Triangle> = Vec::with_capacity(n);
    let budget = 400 * n;
    for _ in 0..budget {
        if tris.len() == n {
            break;
        }
        let c = [coord(&mut rng, 150, 850), coord(&mut rng, 150, 850), coord(&mut rng, 100, 900)];
        let vs: Vec<Point3> = (0..3)
            .map(|_| {
                p3(
                    &c[0] + coord(&mut rng, -250, 250),
                    &c[1] + coord(&mut rng, -250, 250),
                    &c[2] + coord(&mut rng, -80, 80),
                )
            })
            .collect();
        let Ok(t) = Triangle::new(tris.len(), vs[0].clone(), vs[1].clone(), vs[2].clone()) else { continue };
        if t.area2_xy() < q(1, 100) {
            continue;
        }
        tris.push(t);
        let gp = verify_general_position(&Scene::new(tris.clone()));
        if !gp.pass() {
            tris.pop();
        }
    }
    if tris.len() < n {
        return Err(GenError::Budget { achieved: tris.len(), wanted: n });
    }
    Ok(Scene::new(tris))
}

/// Scenes used by the acceptance runs: the triple cycle, grids `2..=6` and
/// random scenes for 20 seeds.
pub fn shipped_scenes() -> Vec<(String, Scene)> {
    let mut out = vec![("triple".to_string(), gen_triple_cycle())];
    for k in 2..=6 {
        out.push((format!("grid{k}"), gen_grid(k).unwrap()));
    }
    for seed in 0..20u64 {
        let n = 10 + (seed as usize % 4) * 10;
        if let Ok(s) = gen_random_disjoint(n, seed) {
            out.push((format!("random{n}s{seed}"), s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{build_relation, find_cycle, pieces_from_triangles, CycleResult};

    fn cycle_len(s: &Scene) -> Option<usize> {
        match find_cycle(&build_relation(&pieces_from_triangles(&s.triangles)).unwrap()) {
            CycleResult::Cycle(c) => Some(c.len()),
            CycleResult::Acyclic(_) => None,
        }
    }

    #[test]
    fn triple_cycle_is_a_certified_3_cycle() {
        let s = gen_triple_cycle();
        assert!(verify_general_position(&s).pass(), "{:?}", verify_general_position(&s));
        assert_eq!(cycle_len(&s), Some(3));
    }

    #[test]
    fn grids_are_certified_and_cyclic() {
        for k in 2..=4 {
            let s = gen_grid(k).unwrap();
            assert_eq!(s.len(), 2 * k);
            assert!(verify_general_position(&s).pass());
            assert!(cycle_len(&s).is_some());
        }
        assert_eq!(gen_grid(1).unwrap_err(), GenError::GridSize(1));
    }

    #[test]
    fn random_scenes_are_deterministic() {
        let a = gen_random_disjoint(12, 7).unwrap();
        let b = gen_random_disjoint(12, 7).unwrap();
        assert_eq!(a.triangles, b.triangles);
        assert!(verify_general_position(&a).pass());
        assert_eq!(gen_random_disjoint(1, 3).unwrap().len(), 1);
    }
}
