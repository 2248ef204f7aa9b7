//! Fixed workloads shared by the benchmarks.

use depthcut::geom::Scene;
use depthcut::scenes::{gen_grid, gen_random_disjoint, gen_triple_cycle};

/// Named scenes in increasing size.
pub fn workloads() -> Vec<(&'static str, Scene)> {
    vec![
        ("triple", gen_triple_cycle()),
        ("grid4", gen_grid(4).expect("grid")),
        ("random20", gen_random_disjoint(20, 1).expect("random scene")),
        ("random40", gen_random_disjoint(40, 3).expect("random scene")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use depthcut::geom::verify_general_position;

    #[test]
    fn workloads_are_in_general_position() {
        for (name, s) in workloads() {
            assert!(verify_general_position(&s).pass(), "{name}");
        }
    }
}
