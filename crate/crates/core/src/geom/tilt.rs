//! Small exact rotations of the coordinate frame.

use super::{above_below, verify_general_position, DepthOrderLabel, Point3, Scene, Triangle};
use crate::num::{dyadic, qi, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Exact orthogonal 3x3 matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation(pub [[Q; 3]; 3]);

impl Rotation {
    pub fn identity() -> Self {
        let z = Q::zero;
        let o = Q::one;
        Rotation([[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]])
    }

    /// Cayley transform `(I - A)(I + A)^-1` of the skew matrix with axial vector `w`.
    pub fn cayley(w: [Q; 3]) -> Self {
        let [p, q, r] = w;
        let s = Q::one() + &p * &p + &q * &q + &r * &r;
        let two = qi(2);
        // Closed form of the Cayley rotation; orthogonality is checked in tests.
        let m = [
            [
                Q::one() + &p * &p - &q * &q - &r * &r,
                &two * (&p * &q + &r),
                &two * (&p * &r - &q),
            ],
            [
                &two * (&p * &q - &r),
                Q::one() - &p * &p + &q * &q - &r * &r,
                &two * (&q * &r + &p),
            ],
            [
                &two * (&p * &r + &q),
                &two * (&q * &r - &p),
                Q::one() - &p * &p - &q * &q + &r * &r,
            ],
        ];
        Rotation(m.map(|row| row.map(|v| v / &s)))
    }

    /// Random rotation from the seeded generator; axial entries up to `scale`.
    pub fn random(rng: &mut impl Rng, scale: f64) -> Self {
        let w = [0, 1, 2].map(|_| dyadic(rng.gen_range(-scale..=scale), 24));
        Self::cayley(w)
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        let c = p.coords();
        let r = |i: usize| &self.0[i][0] * &c[0] + &self.0[i][1] * &c[1] + &self.0[i][2] * &c[2];
        Point3::new(r(0), r(1), r(2))
    }

    pub fn is_orthogonal(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let d: Q = (0..3).map(|k| &self.0[i][k] * &self.0[j][k]).sum();
                d == if i == j { Q::one() } else { Q::zero() }
            })
        })
    }

    /// Squared Frobenius distance to the identity.
    pub fn dist2_identity(&self) -> Q {
        let mut s = Q::zero();
        for i in 0..3 {
            for j in 0..3 {
                let d = &self.0[i][j] - if i == j { Q::one() } else { Q::zero() };
                s += &d * &d;
            }
        }
        s
    }

    pub fn apply_triangle(&self, t: &Triangle) -> Option<Triangle> {
        Triangle::new(t.id, self.apply(&t.v[0]), self.apply(&t.v[1]), self.apply(&t.v[2])).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TiltError {
    #[error("magnitude must be nonnegative")]
    Negative,
    #[error("no admissible tilt after {attempts} attempts")]
    Exhausted { attempts: usize },
}

#[derive(Clone, Debug)]
pub struct TiltOutcome {
    pub scene: Scene,
    pub rotation: Rotation,
    pub magnitude: Q,
    pub attempts: usize,
}

fn digraph(scene: &Scene) -> BTreeSet<(usize, usize)> {
    let mut e = BTreeSet::new();
    let t = &scene.triangles;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            match above_below(&t[i], &t[j]) {
                Ok(DepthOrderLabel::Below) => {
                    e.insert((t[i].id, t[j].id));
                }
                Ok(DepthOrderLabel::Above) => {
                    e.insert((t[j].id, t[i].id));
                }
                _ => {}
            }
        }
    }
    e
}

/// Rotates the scene by a random rotation within `magnitude` of the identity.
///
/// Each attempt is re-certified and its depth digraph compared with the
/// original one; failures halve the magnitude, up to `budget` attempts.
pub fn tilt_frame(scene: &Scene, magnitude: &Q, seed: u64, budget: usize) -> Result<TiltOutcome, TiltError> {
    if *magnitude < Q::zero() {
        return Err(TiltError::Negative);
    }
    if magnitude.is_zero() {
        return Ok(TiltOutcome { scene: scene.clone(), rotation: Rotation::identity(), magnitude: Q::zero(), attempts: 0 });
    }
    let base = digraph(scene);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = magnitude.clone();
    for attempt in 1..=budget {
        let scale = crate::num::to_f64(&m) / 4.0;
        let rot = Rotation::random(&mut rng, scale);
        if rot.dist2_identity() > &m * &m {
            m /= qi(2);
            continue;
        }
        let tris: Option<Vec<Triangle>> = scene.triangles.iter().map(|t| rot.apply_triangle(t)).collect();
        let Some(tris) = tris else {
            m /= qi(2);
            continue;
        };
        let out = Scene::new(tris);
        if verify_general_position(&out).pass() && digraph(&out) == base {
            return Ok(TiltOutcome { scene: out, rotation: rot, magnitude: m, attempts: attempt });
        }
        m /= qi(2);
    }
    Err(TiltError::Exhausted { attempts: budget })
}
