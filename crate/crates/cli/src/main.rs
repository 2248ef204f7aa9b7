use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use depthcut::arrangement::svg::{scene_svg, triangle_svg};
use depthcut::cutter::{recurrence_audit, CutParams};
use depthcut::depth::{build_relation, find_cycle, pieces_from_triangles, verify_acyclic, CycleResult};
use depthcut::geom::{parse_scene, verify_general_position, write_scene, Scene};
use depthcut::num::{format_rational, from_f64, parse_rational, Q};
use depthcut::partition::{audit_poly, decompose_cells, edge_segments, Region};
use depthcut::scenes::experiment::{
    node_table, parse_manifest, piece_manifest, rows_table, run_one, Generator, ExperimentSpec,
};
use depthcut::scenes::{gen_grid, gen_random_disjoint, gen_triple_cycle, run_experiment, Strategy};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "depthcut", version, about = "Depth-cycle elimination for triangle scenes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Triple,
    Grid,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Prism,
    Bsp,
    Partition,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Prism => Strategy::Prism,
            StrategyArg::Bsp => Strategy::Bsp,
            StrategyArg::Partition => Strategy::Partition,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated scene.
    Gen {
        kind: GenKind,
        /// Grid size for `grid`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Triangle count for `random`.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut a scene into acyclic pieces.
    Cut {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value = "partition")]
        strategy: StrategyArg,
        #[arg(long)]
        out: PathBuf,
        /// Bound on the measured partition constant, as a rational.
        #[arg(long)]
        c_target: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Voxels per bounding-box diagonal for the voxel cross-audit of the root partition.
        #[arg(long)]
        grid_res: Option<u32>,
    },
    /// Certify a scene and, optionally, a piece manifest cut from it.
    Verify {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        pieces: Option<PathBuf>,
    },
    /// Run every strategy over the generated scene families.
    Bench {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Random seeds per random-scene size.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        degrees: Vec<usize>,
        #[arg(long)]
        c_target: Option<String>,
    },
}

fn read_scene(path: &Path) -> Result<Scene> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_scene(&text)?)
}

fn rational(s: &Option<String>) -> Result<Option<Q>> {
    match s {
        None => Ok(None),
        Some(t) => parse_rational(t).map(Some).with_context(|| format!("bad rational `{t}`")),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen { kind, k, n, seed, out } => {
            let scene = match kind {
                GenKind::Triple => gen_triple_cycle(),
                GenKind::Grid => gen_grid(k)?,
                GenKind::Random => gen_random_disjoint(n, seed)?,
            };
            let gp = verify_general_position(&scene);
            if !gp.pass() {
                bail!("generated scene is not in general position: {:?}", gp.violations);
            }
            match out {
                Some(p) => write(&p, &write_scene(&scene))?,
                None => print!("{}", write_scene(&scene)),
            }
        }
        Cmd::Cut { scene, degree, strategy, out, c_target, seed, grid_res } => {
            let sc = read_scene(&scene)?;
            let gp = verify_general_position(&sc);
            if !gp.pass() {
                bail!("scene is not in general position: {}", gp.violations[0]);
            }
            let mut params = CutParams::new(degree);
            params.seed = seed;
            if let Some(c) = rational(&c_target)? {
                params.c_target = c;
            }
            let strategy: Strategy = strategy.into();
            fs::create_dir_all(out.join("svg"))?;
            let (row, res) = run_one(scene.to_string_lossy().as_ref(), seed, &sc, strategy, &params);
            write(&out.join("stats.tsv"), &rows_table(&[row.clone()], true))?;
            let res = res.ok_or_else(|| anyhow::anyhow!(row.error.unwrap_or_default()))?;
            write(&out.join("pieces.tsv"), &piece_manifest(&res.pieces))?;
            if let Some(plan) = &res.plan {
                write(&out.join("nodes.tsv"), &node_table(plan))?;
                let r = recurrence_audit(plan);
                write(
                    &out.join("recurrence.tsv"),
                    &format!(
                        "nodes\tleaves\tdepth\tcurves\toverhead\tb\tchild_contract\tpierce_bound\n{}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{}\t{}\n",
                        r.nodes, r.leaves, r.depth, r.total_curves, r.overhead, r.b, r.child_contract, r.pierce_bound
                    ),
                )?;
                let mut slices = String::from("cell\tchunks\tslices\tnon_disconnecting\te\tv\tx\n");
                for rep in &plan.slice_reports {
                    slices.push_str(&rep.row());
                    slices.push('\n');
                }
                write(&out.join("slices.tsv"), &slices)?;
                if let Some(root) = plan.nodes.first().and_then(|n| n.partition.as_ref()) {
                    let mut audit = root.audit.table();
                    if let Some(res) = grid_res {
                        let h = from_f64(sc.bbox.diameter_f64() / res.max(1) as f64);
                        let f = root.poly();
                        let d = decompose_cells(&f, &sc.bbox, &h);
                        let tris: Vec<_> = sc.triangles.iter().collect();
                        let segs = edge_segments(&tris, &Region::new(sc.bbox.clone()));
                        let va = audit_poly(&f, &d, &segs)?;
                        let max = va.crossings.values().map(|v| v.len()).max().unwrap_or(0);
                        audit.push_str(&format!(
                            "voxel_cells\t{}\nvoxel_max_crossings\t{}\nvoxel_unresolved\t{}\nexact_cells\t{}\nexact_max_crossings\t{}\n",
                            d.count(),
                            max,
                            va.unresolved,
                            root.audit.cell_count,
                            root.audit.max_crossings
                        ));
                    }
                    write(&out.join("audit.tsv"), &audit)?;
                }
            }
            let empty = vec![];
            for t in &sc.triangles {
                let curves = res.plan.as_ref().and_then(|p| p.curves.get(&t.id)).unwrap_or(&empty);
                let mine: Vec<_> = res.pieces.iter().filter(|p| p.tri == t.id).collect();
                write(&out.join("svg").join(format!("tri_{}.svg", t.id)), &triangle_svg(t, curves, &mine))?;
            }
            let order = match find_cycle(&build_relation(&pieces_from_triangles(&sc.triangles))?) {
                CycleResult::Acyclic(o) => Some(o.iter().map(|&i| sc.triangles[i].id).collect::<Vec<_>>()),
                CycleResult::Cycle(_) => None,
            };
            write(&out.join("svg").join("scene.svg"), &scene_svg(&sc, order.as_deref()))?;
            println!(
                "{} pieces, acyclic: {}{}",
                res.pieces.len(),
                res.acyclic,
                res.plan.as_ref().and_then(|p| p.max_c()).map(|c| format!(", measured c {}", format_rational(&c))).unwrap_or_default()
            );
            if !res.acyclic {
                bail!("output pieces contain a depth cycle");
            }
        }
        Cmd::Verify { scene, pieces } => {
            let sc = read_scene(&scene)?;
            let gp = verify_general_position(&sc);
            for v in &gp.violations {
                println!("violation\t{v}");
            }
            let list = match &pieces {
                Some(p) => parse_manifest(&fs::read_to_string(p)?, &sc).map_err(anyhow::Error::msg)?,
                None => pieces_from_triangles(&sc.triangles),
            };
            let verdict = verify_acyclic(&list)?;
            println!("general_position\t{}", gp.pass());
            println!("pieces\t{}", list.len());
            println!("acyclic\t{}", verdict.acyclic);
            if !verdict.acyclic {
                let w: Vec<String> = verdict.witness.iter().map(|i| i.to_string()).collect();
                println!("witness\t{}", w.join(" "));
            }
            if !gp.pass() || (pieces.is_some() && !verdict.acyclic) {
                std::process::exit(1);
            }
        }
        Cmd::Bench { out, seeds, degrees, c_target } => {
            let mut generators = vec![Generator::Triple];
            generators.extend((2..=6).map(Generator::Grid));
            generators.extend([10, 20, 40].map(Generator::Random));
            let spec = ExperimentSpec {
                generators,
                strategies: vec![Strategy::Prism, Strategy::Bsp, Strategy::Partition],
                degrees,
                seeds: (0..seeds).collect(),
                c_target: rational(&c_target)?,
            };
            let rows = run_experiment(&spec);
            let table = rows_table(&rows, true);
            let mut trend = String::from("n\tstrategy\tD\tmean_pieces\tpieces/n^1.5\tpieces/n^2\n");
            let mut keys: Vec<(usize, &'static str, usize)> = rows.iter().map(|r| (r.n, r.strategy.name(), r.degree)).collect();
            keys.sort();
            keys.dedup();
            for (n, s, d) in keys {
                let sel: Vec<_> = rows.iter().filter(|r| r.n == n && r.strategy.name() == s && r.degree == d && r.error.is_none()).collect();
                if sel.is_empty() {
                    continue;
                }
                let mean = sel.iter().map(|r| r.pieces as f64).sum::<f64>() / sel.len() as f64;
                let nf = n as f64;
                trend.push_str(&format!("{n}\t{s}\t{d}\t{mean:.1}\t{:.3}\t{:.3}\n", mean / nf.powf(1.5), mean / (nf * nf)));
            }
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    write(&dir.join("experiment.tsv"), &table)?;
                    write(&dir.join("trend.tsv"), &trend)?;
                }
                None => print!("{table}\n{trend}"),
            }
            let bad = rows.iter().filter(|r| r.error.is_some() || !r.acyclic).count();
            eprintln!("{} runs, {} failed", rows.len(), bad);
        }
    }
    Ok(())
}
