use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rankeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankeval"))
        .args(args)
        .env_remove("RANKEVAL_SEED")
        .env_remove("RANKEVAL_WORKERS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn digests(manifest: &Path) -> Vec<String> {
    fs::read_to_string(manifest)
        .unwrap()
        .lines()
        .filter(|l| l.contains(".sha256 = "))
        .map(str::to_string)
        .collect()
}

#[test]
fn list_prints_the_registry() {
    let o = rankeval(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 36);
    assert!(text.contains("kendall_distance"));
    assert!(text.contains("rmae"));
    assert_eq!(text, stdout(&rankeval(&["list"])));
}

#[test]
fn eval_examples() {
    let o = rankeval(&["eval", "kendall_tau", "--sigma", "1,2,3", "--tau", "1,2,3"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1\n"));
    let o = rankeval(&["eval", "mse", "--sigma", "1,2,3,4,5,6,7,8,9,10", "--tau", "2,1,3,4,5,6,7,8,9,10"]);
    assert_eq!(stdout(&o), "2\n");
    let id = "1,2,3,4,5,6,7,8,9,10";
    let o = rankeval(&["eval", "precision", "--sigma", id, "--tau", id, "--relevant", "5", "--retrieved", "5"]);
    assert_eq!(stdout(&o), "1\n");
    let o = rankeval(&["eval", "dcg", "--tau", "2,1"]);
    assert_eq!(stdout(&o), "2.63092975357\n");
    let o = rankeval(&["eval", "kendall_tau", "--tau", "3,1,2,4", "--k", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn eval_reads_files_and_reports_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tau.txt");
    fs::write(&file, "2,1,3\n").unwrap();
    let o = rankeval(&["eval", "mae", "--sigma", "1,2,3", "--tau", file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "2\n");
    let o = rankeval(&["eval", "mae", "--sigma", "1,2,2", "--tau", "1,2,3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--sigma \"1,2,2\""));
    let o = rankeval(&["eval", "mae", "--sigma", "1,2", "--tau", "1,2,3"]);
    assert_eq!(code(&o), 2);
    let o = rankeval(&["eval", "not_a_metric", "--tau", "1,2,3"]);
    assert_eq!(code(&o), 2);
    let o = rankeval(&["eval", "precision", "--tau", "1,2,3", "--relevant", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oracle_exit_codes() {
    let o = rankeval(&["oracle", "kendall-swap", "--n", "10"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("oracle kendall-swap n=10: pass"));
    let o = rankeval(&["oracle", "distance-axioms", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("dcg(a) - dcg(b): fail("));
    let o = rankeval(&["oracle", "dcg-ioi", "--n", "6"]);
    assert_eq!(code(&o), 0);
    let o = rankeval(&["oracle", "dcg-ioi", "--n", "7"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("equal: dcg("));
    let o = rankeval(&["oracle", "dcg-ioi", "--n", "12"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n <= 8"));
    assert_eq!(code(&rankeval(&["oracle", "nonsense"])), 2);
}

fn agreement_run(dir: &Path, extra: &[&str]) -> Output {
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let (csv, svg, meta, manifest) = (p("a.csv"), p("a.svg"), p("a.meta"), p("a.manifest"));
    let mut args = vec![
        "agreement", "--n", "12", "--samples", "60", "--pairs", "400", "--metrics",
        "dcg,ndcg,mse,rmse,kendall_tau,recall", "--out-csv", &csv, "--out-svg", &svg, "--meta", &meta,
        "--manifest", &manifest,
    ];
    args.extend_from_slice(extra);
    rankeval(&args)
}

#[test]
fn agreement_outputs_are_worker_independent() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (dir, workers) in dirs.iter().zip(["1", "4", "8"]) {
        let o = agreement_run(dir.path(), &["--workers", workers]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let csv = fs::read(dirs[0].path().join("a.csv")).unwrap();
    for dir in &dirs[1..] {
        assert_eq!(fs::read(dir.path().join("a.csv")).unwrap(), csv);
        assert_eq!(digests(&dir.path().join("a.manifest")), digests(&dirs[0].path().join("a.manifest")));
    }
    let text = String::from_utf8(csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "metric,dcg,ndcg,mse,rmse,kendall_tau,recall");
    assert!(lines[1].starts_with("dcg,1.000000,1.000000,"));
    assert!(lines[3].starts_with("mse,") && lines[3].contains(",1.000000,1.000000,"));
    let svg = fs::read_to_string(dirs[0].path().join("a.svg")).unwrap();
    assert_eq!(svg.matches("<rect ").count(), 36);
    let meta = fs::read_to_string(dirs[0].path().join("a.meta")).unwrap();
    assert!(meta.contains("relevant_j = 6"));
}

#[test]
fn agreement_seed_precedence_and_replay() {
    let a = tempfile::tempdir().unwrap();
    let o = agreement_run(a.path(), &["--seed", "7"]);
    assert_eq!(code(&o), 0);
    let manifest = a.path().join("a.manifest");
    assert!(fs::read_to_string(&manifest).unwrap().contains("\nseed = 7\n"));

    // Replaying the manifest reproduces the digests.
    let b = tempfile::tempdir().unwrap();
    let p = |name: &str| b.path().join(name).to_str().unwrap().to_string();
    let o = rankeval(&[
        "agreement", "--config", manifest.to_str().unwrap(), "--out-csv", &p("a.csv"), "--out-svg", &p("a.svg"),
        "--meta", &p("a.meta"), "--manifest", &p("a.manifest"),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(digests(&manifest), digests(&b.path().join("a.manifest")));

    // The environment seed sits below the config file and the flag.
    let c = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rankeval"))
        .args(["agreement", "--n", "6", "--samples", "10", "--pairs", "20", "--metrics", "mse"])
        .args(["--out-csv", c.path().join("x.csv").to_str().unwrap()])
        .args(["--out-svg", c.path().join("x.svg").to_str().unwrap()])
        .args(["--meta", c.path().join("x.meta").to_str().unwrap()])
        .args(["--manifest", c.path().join("x.manifest").to_str().unwrap()])
        .env("RANKEVAL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(c.path().join("x.manifest")).unwrap().contains("\nseed = 99\n"));

    let o = Command::new(env!("CARGO_BIN_EXE_rankeval"))
        .args(["agreement", "--config", manifest.to_str().unwrap()])
        .args(["--out-csv", c.path().join("y.csv").to_str().unwrap()])
        .args(["--out-svg", c.path().join("y.svg").to_str().unwrap()])
        .args(["--meta", c.path().join("y.meta").to_str().unwrap()])
        .args(["--manifest", c.path().join("y.manifest").to_str().unwrap()])
        .env("RANKEVAL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(c.path().join("y.manifest")).unwrap().contains("\nseed = 7\n"));
}

#[test]
fn agreement_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/a.csv");
    let o = rankeval(&[
        "agreement", "--n", "6", "--samples", "10", "--pairs", "20", "--metrics", "mse", "--out-csv",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    let o = rankeval(&["agreement", "--n", "6", "--samples", "3", "--pairs", "20"]);
    assert_eq!(code(&o), 2);
    let o = rankeval(&["agreement", "--config", dir.path().join("absent.cfg").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn properties_grid_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, workers) in [(&a, "1"), (&b, "3")] {
        let o = rankeval(&[
            "properties", "--metrics", "dcg,ndcg,kendall_tau", "--properties", "ioi,symmetry,wsd", "--n", "20",
            "--pairs", "50", "--out", dir.path().to_str().unwrap(), "--workers", workers,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let grid = fs::read_to_string(a.path().join("verdicts.csv")).unwrap();
    assert_eq!(
        grid,
        "property,dcg,ndcg,kendall_tau\nioi,pass,pass,fail\nsymmetry,fail,fail,pass\nwsd,fail,fail,pass\n"
    );
    assert_eq!(fs::read(a.path().join("report.txt")).unwrap(), fs::read(b.path().join("report.txt")).unwrap());
    assert_eq!(digests(&a.path().join("manifest.txt")), digests(&b.path().join("manifest.txt")));

    let c = tempfile::tempdir().unwrap();
    let o = rankeval(&[
        "properties", "--config", a.path().join("manifest.txt").to_str().unwrap(), "--out",
        c.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(digests(&a.path().join("manifest.txt")), digests(&c.path().join("manifest.txt")));
}

#[test]
fn properties_flags_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = rankeval(&["properties", "--metrics", "dcg", "--properties", "ioi", "--exhaustive-ioi", "9", "--out", out]);
    assert_eq!(code(&o), 2);
    let o = rankeval(&["properties", "--metrics", "dcg", "--properties", "flavour", "--out", out]);
    assert_eq!(code(&o), 2);
    let o = rankeval(&[
        "properties", "--metrics", "mse", "--properties", "robustness_1", "--n", "10", "--pairs", "5",
        "--swap-samples", "all", "--rounding", "half", "--out", out,
    ]);
    assert_eq!(code(&o), 0);
    let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
    assert!(manifest.contains("swap_samples = all"));
    assert!(manifest.contains("rounding = half_away_from_zero"));
}
