use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_depthcut"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("depthcut-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(cmd: &mut Command) -> (bool, String) {
    let out = cmd.output().unwrap();
    (out.status.success(), String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr))
}

#[test]
fn triple_cycle_is_cut_and_verified() {
    let dir = scratch("triple");
    let scene = dir.join("triple.scene");
    let (ok, log) = run(bin().args(["gen", "triple", "--out"]).arg(&scene));
    assert!(ok, "{log}");
    let (ok, log) = run(bin().args(["verify", "--scene"]).arg(&scene));
    assert!(ok, "{log}");
    assert!(log.contains("acyclic\tfalse"), "{log}");
    assert!(log.contains("witness\t"), "{log}");

    let out = dir.join("cut");
    let (ok, log) = run(bin().args(["cut", "--degree", "2", "--scene"]).arg(&scene).arg("--out").arg(&out));
    assert!(ok, "{log}");
    assert!(log.contains("acyclic: true"), "{log}");
    for f in ["stats.tsv", "pieces.tsv", "nodes.tsv", "recurrence.tsv", "slices.tsv", "svg/scene.svg", "svg/tri_0.svg"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    let stats = std::fs::read_to_string(out.join("stats.tsv")).unwrap();
    assert!(stats.starts_with("scene\tseed\tn\tstrategy"));

    let (ok, log) = run(bin().args(["verify", "--scene"]).arg(&scene).arg("--pieces").arg(out.join("pieces.tsv")));
    assert!(ok, "{log}");
    assert!(log.contains("acyclic\ttrue"), "{log}");
}

#[test]
fn baselines_run_on_a_grid() {
    let dir = scratch("grid");
    let scene = dir.join("grid.scene");
    let (ok, log) = run(bin().args(["gen", "grid", "--k", "2", "--out"]).arg(&scene));
    assert!(ok, "{log}");
    for s in ["prism", "bsp"] {
        let out = dir.join(s);
        let (ok, log) = run(bin().args(["cut", "--strategy", s, "--scene"]).arg(&scene).arg("--out").arg(&out));
        assert!(ok, "{log}");
        assert!(out.join("pieces.tsv").exists());
    }
}

#[test]
fn bad_input_is_rejected() {
    let dir = scratch("bad");
    let scene = dir.join("bad.scene");
    std::fs::write(&scene, "not a scene\n").unwrap();
    let (ok, _) = run(bin().args(["verify", "--scene"]).arg(&scene));
    assert!(!ok);
    let (ok, _) = run(bin().args(["cut", "--scene"]).arg(dir.join("missing")).arg("--out").arg(&dir));
    assert!(!ok);
}
