//! Experiment driver: runs strategies over scenes and collects stats rows.

use super::{gen_grid, gen_random_disjoint, gen_triple_cycle, GenError};
use crate::baselines::{bsp_standalone, prism_decompose};
use crate::cutter::{eliminate_cycles, CutParams, CutPlan};
use crate::depth::{verify_acyclic, Piece};
use crate::geom::{verify_general_position, Point2, Scene};
use crate::num::{format_rational, parse_rational, Q};
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Prism,
    Bsp,
    Partition,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Prism => "prism",
            Strategy::Bsp => "bsp",
            Strategy::Partition => "partition",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "prism" => Some(Strategy::Prism),
            "bsp" => Some(Strategy::Bsp),
            "partition" => Some(Strategy::Partition),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Triple,
    Grid(usize),
    Random(usize),
}

impl Generator {
    pub fn generate(&self, seed: u64) -> Result<Scene, GenError> {
        match *self {
            Generator::Triple => Ok(gen_triple_cycle()),
            Generator::Grid(k) => gen_grid(k),
            Generator::Random(n) => gen_random_disjoint(n, seed),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Generator::Triple => "triple".into(),
            Generator::Grid(k) => format!("grid{k}"),
            Generator::Random(n) => format!("random{n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub generators: Vec<Generator>,
    pub strategies: Vec<Strategy>,
    pub degrees: Vec<usize>,
    pub seeds: Vec<u64>,
    pub c_target: Option<Q>,
}

/// Result of one strategy on one scene.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub pieces: Vec<Piece>,
    pub plan: Option<CutPlan>,
    pub acyclic: bool,
}

pub fn run_strategy(scene: &Scene, strategy: Strategy, params: &CutParams) -> Result<RunOutput, String> {
    let (pieces, plan) = match strategy {
        Strategy::Prism => (prism_decompose(scene).map_err(|e| e.to_string())?.pieces, None),
        Strategy::Bsp => (bsp_standalone(scene).pieces, None),
        Strategy::Partition => {
            let out = eliminate_cycles(scene, params).map_err(|e| e.to_string())?;
            (out.pieces, Some(out.plan))
        }
    };
    let acyclic = verify_acyclic(&pieces).map_err(|e| e.to_string())?.acyclic;
    Ok(RunOutput { pieces, plan, acyclic })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub scene: String,
    pub seed: u64,
    pub n: usize,
    pub strategy: Strategy,
    /// Zero for the baselines.
    pub degree: usize,
    pub pieces: usize,
    pub curves: usize,
    pub nodes: usize,
    pub measured_c: Option<Q>,
    pub non_disconnecting: usize,
    pub acyclic: bool,
    pub error: Option<String>,
    pub millis: u128,
}

pub const ROW_HEADER: &str =
    "scene\tseed\tn\tstrategy\tD\tpieces\tcurves\tnodes\tmeasured_c\tnon_disconnecting\tacyclic\terror\tms";

impl ExperimentRow {
    /// Tab-separated row; `with_time` appends the wall time column.
    pub fn tsv(&self, with_time: bool) -> String {
        let mut s = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.scene,
            self.seed,
            self.n,
            self.strategy.name(),
            self.degree,
            self.pieces,
            self.curves,
            self.nodes,
            self.measured_c.as_ref().map(format_rational).unwrap_or_else(|| "-".into()),
            self.non_disconnecting,
            self.acyclic,
            self.error.as_deref().unwrap_or("-"),
        );
        if with_time {
            write!(s, "\t{}", self.millis).unwrap();
        }
        s
    }
}

/// One stats row, plus the output when the run succeeded.
pub fn run_one(name: &str, seed: u64, scene: &Scene, strategy: Strategy, params: &CutParams) -> (ExperimentRow, Option<RunOutput>) {
    let start = Instant::now();
    let res = run_strategy(scene, strategy, params);
    let mut row = ExperimentRow {
        scene: name.to_string(),
        seed,
        n: scene.len(),
        strategy,
        degree: if strategy == Strategy::Partition { params.degree } else { 0 },
        pieces: 0,
        curves: 0,
        nodes: 0,
        measured_c: None,
        non_disconnecting: 0,
        acyclic: false,
        error: None,
        millis: 0,
    };
    let out = match res {
        Ok(out) => {
            row.pieces = out.pieces.len();
            row.acyclic = out.acyclic;
            if let Some(plan) = &out.plan {
                row.curves = plan.curve_count();
                row.nodes = plan.nodes.len();
                row.measured_c = plan.max_c();
                row.non_disconnecting = plan.non_disconnecting();
            }
            Some(out)
        }
        Err(e) => {
            row.error = Some(e);
            None
        }
    };
    row.millis = start.elapsed().as_millis();
    (row, out)
}

/// Runs every (scene, strategy, degree) combination; failures are recorded in
/// the row and the run continues.
pub fn run_experiment(spec: &ExperimentSpec) -> Vec<ExperimentRow> {
    let mut rows = Vec::new();
    for g in &spec.generators {
        let seeds: Vec<u64> = if matches!(g, Generator::Random(_)) { spec.seeds.clone() } else { vec![0] };
        for &seed in &seeds {
            let scene = match g.generate(seed) {
                Ok(s) if verify_general_position(&s).pass() => s,
                Ok(_) => continue,
                Err(_) => continue,
            };
            for &st in &spec.strategies {
                let degrees: Vec<usize> = if st == Strategy::Partition { spec.degrees.clone() } else { vec![0] };
                for &d in &degrees {
                    let mut params = CutParams::new(d.max(1));
                    params.seed = seed.wrapping_add(1);
                    if let Some(c) = &spec.c_target {
                        params.c_target = c.clone();
                    }
                    rows.push(run_one(&g.label(), seed, &scene, st, &params).0);
                }
            }
        }
    }
    rows
}

pub fn rows_table(rows: &[ExperimentRow], with_time: bool) -> String {
    let mut s = String::new();
    if with_time {
        s.push_str(ROW_HEADER);
    } else {
        s.push_str(ROW_HEADER.trim_end_matches("\tms"));
    }
    s.push('\n');
    for r in rows {
        s.push_str(&r.tsv(with_time));
        s.push('\n');
    }
    s
}

/// `triangle_id piece_id boundary_description` lines, with the boundary as
/// `x,y` vertices joined by `;`.
pub fn piece_manifest(pieces: &[Piece]) -> String {
    let mut s = String::from("triangle_id\tpiece_id\tboundary\n");
    for p in pieces {
        let b: Vec<String> = p.poly.iter().map(|v| format!("{},{}", format_rational(&v.x), format_rational(&v.y))).collect();
        writeln!(s, "{}\t{}\t{}", p.tri, p.id, b.join(";")).unwrap();
    }
    s
}

/// Reads a piece manifest back, taking each piece's plane from its triangle.
pub fn parse_manifest(text: &str, scene: &Scene) -> Result<Vec<Piece>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 3 {
            return Err(format!("line {}: expected 3 fields", i + 1));
        }
        let tri: usize = f[0].parse().map_err(|_| format!("line {}: bad triangle id", i + 1))?;
        let id: usize = f[1].parse().map_err(|_| format!("line {}: bad piece id", i + 1))?;
        let t = scene.get(tri).ok_or_else(|| format!("line {}: unknown triangle {tri}", i + 1))?;
        let mut poly = Vec::new();
        for v in f[2].split(';') {
            let (x, y) = v.split_once(',').ok_or_else(|| format!("line {}: bad vertex `{v}`", i + 1))?;
            let (x, y) = (parse_rational(x), parse_rational(y));
            match (x, y) {
                (Some(x), Some(y)) => poly.push(Point2::new(x, y)),
                _ => return Err(format!("line {}: bad vertex `{v}`", i + 1)),
            }
        }
        out.push(Piece::new(id, tri, t.plane.clone(), poly));
    }
    Ok(out)
}

/// Per-node stats of a partition run.
pub fn node_table(plan: &CutPlan) -> String {
    let mut s = String::from("node\tparent\tdepth\ttriangles\tleaf\tmeasured_c\tcells\tcurves\tslices\tnon_disconnecting\tchildren\tbsp_cuts\n");
    for n in &plan.nodes {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            n.id,
            n.parent.map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
            n.depth,
            n.tris.len(),
            n.leaf.map(|l| format!("{l:?}")).unwrap_or_else(|| "-".into()),
            n.partition.as_ref().map(|p| format_rational(&p.audit.measured_c)).unwrap_or_else(|| "-".into()),
            n.partition.as_ref().map(|p| p.audit.cell_count.to_string()).unwrap_or_else(|| "-".into()),
            n.stats.curves,
            n.stats.slices,
            n.stats.non_disconnecting,
            n.stats.child_sizes.len(),
            n.stats.bsp_cuts,
        )
        .unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_is_deterministic() {
        let spec = ExperimentSpec {
            generators: vec![Generator::Triple, Generator::Random(8)],
            strategies: vec![Strategy::Prism, Strategy::Bsp, Strategy::Partition],
            degrees: vec![2],
            seeds: vec![3],
            c_target: None,
        };
        let a = rows_table(&run_experiment(&spec), false);
        let b = rows_table(&run_experiment(&spec), false);
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 2 * 3);
        assert!(a.lines().skip(1).all(|l| l.contains("\ttrue\t-")), "{a}");
    }

    #[test]
    fn manifest_round_trip() {
        let scene = gen_triple_cycle();
        let out = run_strategy(&scene, Strategy::Bsp, &CutParams::new(2)).unwrap();
        let back = parse_manifest(&piece_manifest(&out.pieces), &scene).unwrap();
        assert_eq!(back, out.pieces);
    }
}
