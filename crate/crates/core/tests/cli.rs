use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn triad(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triad"))
        .args(args)
        .current_dir(dir)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn truth(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.truth.json"))).unwrap()).unwrap()
}

#[test]
fn gen_writes_edges_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    triad(&["gen", "wheel", "--n", "1001", "--out", "w.el"], d);
    assert_eq!(std::fs::read_to_string(d.join("w.el")).unwrap().lines().count(), 2000);
    assert_eq!(truth(d, "w.el")["T"], 1000);

    triad(&["gen", "lb", "--p", "4", "--q", "4", "--N", "30", "--kind", "no", "--out", "lb.el"], d);
    assert_eq!(truth(d, "lb.el")["T"], 64);

    let k3 = triad(&["gen", "book", "--k", "1"], d);
    assert_eq!(String::from_utf8(k3.stdout).unwrap(), "0 1\n0 2\n1 2\n");

    let bad = triad(&["gen", "wheel", "--n", "3", "--out", "x.el"], d);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exact_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k3.el"), "0 1\n1 2\n0 2\n").unwrap();
    let v = json(&triad(&["exact", "k3.el"], d));
    assert_eq!((v["T"].as_u64(), v["kappa"].as_u64(), v["d_E"].as_u64()), (Some(1), Some(2), Some(6)));

    triad(&["gen", "wheel", "--n", "1001", "-o", "w.el"], d);
    let v = json(&triad(&["exact", "w.el"], d));
    assert_eq!((v["T"].as_u64(), v["kappa"].as_u64()), (Some(1000), Some(3)));

    triad(&["gen", "lb", "--p", "2", "--q", "1", "--N", "6", "--kind", "yes", "-o", "yes.el"], d);
    assert_eq!(json(&triad(&["exact", "yes.el"], d))["T"], 0);

    let csv = triad(&["--format", "csv", "exact", "k3.el"], d);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "n,m,T,kappa,d_E\n3,3,1,2,6\n");
}

#[test]
fn estimate_modes_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    triad(&["gen", "book", "--k", "998", "-o", "book.el", "--quiet"], d);
    let main = json(&triad(
        &["estimate", "--mode", "main", "--epsilon", "0.2", "--t-hat", "998", "--kappa-hat", "2", "--seed", "7", "--scale", "0.005", "book.el"],
        d,
    ));
    assert_eq!(main["passes"], 6);
    let keys: Vec<&str> = main.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec!["estimate", "passes", "stored_edges_peak", "r", "ell", "s", "assignment_calls", "memo_size", "seed", "config"];
    expected.sort();
    let mut keys_sorted = keys.clone();
    keys_sorted.sort();
    assert_eq!(keys_sorted, expected);
    assert_eq!(main["config"]["total_passes"], 7);

    let ideal = json(&triad(&["estimate", "--mode", "ideal", "--epsilon", "0.2", "--t-hat", "998", "book.el"], d));
    assert_eq!(ideal["passes"], 3);

    let missing = triad(&["estimate", "--mode", "main", "--kappa-hat", "2", "book.el"], d);
    assert_eq!(missing.status.code(), Some(2));
    let bad_eps = triad(&["estimate", "--epsilon", "0.7", "--t-hat", "5", "--kappa-hat", "2", "book.el"], d);
    assert_eq!(bad_eps.status.code(), Some(2));
    let even = triad(&["estimate", "--t-hat", "5", "--kappa-hat", "2", "--repetitions", "4", "book.el"], d);
    assert_eq!(even.status.code(), Some(2));

    std::fs::write(d.join("bad.el"), "0 1\n1 x\n").unwrap();
    let parse = triad(&["estimate", "--t-hat", "5", "--kappa-hat", "2", "bad.el"], d);
    assert_eq!(parse.status.code(), Some(3));
    std::fs::write(d.join("dup.el"), "0 1\n1 0\n").unwrap();
    assert_eq!(triad(&["exact", "dup.el"], d).status.code(), Some(3));
}

#[test]
fn shared_passes_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    triad(&["gen", "book", "--k", "500", "-o", "b.el", "--quiet"], d);
    let args = ["estimate", "--t-hat", "500", "--kappa-hat", "2", "--scale", "0.01", "--repetitions", "5"];
    let seq = json(&triad(&[&args[..], &["b.el"]].concat(), d));
    assert_eq!(seq["passes"], 30);
    let shared = json(&triad(&[&args[..], &["--share-passes", "--debug-dump-assignments", "dump.json", "b.el"]].concat(), d));
    assert_eq!(shared["passes"], 6);
    assert_eq!(seq["estimate"], shared["estimate"]);
    let dump: Value = serde_json::from_str(&std::fs::read_to_string(d.join("dump.json")).unwrap()).unwrap();
    assert_eq!(dump.as_array().unwrap().len(), 5);
    let total: usize = dump.as_array().unwrap().iter().map(|t| t.as_array().unwrap().len()).sum();
    assert_eq!(total as u64, shared["memo_size"].as_u64().unwrap());
}

#[test]
fn env_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    triad(&["gen", "book", "--k", "300", "-o", "b.el", "--quiet"], d);
    let via_flag = triad(&["estimate", "--t-hat", "300", "--kappa-hat", "2", "--scale", "0.01", "--seed", "11", "b.el"], d);
    let via_env = Command::new(env!("CARGO_BIN_EXE_triad"))
        .args(["estimate", "b.el"])
        .current_dir(d)
        .env_clear()
        .env("TRIAD_SEED", "11")
        .env("TRIAD_T_HAT", "300")
        .env("TRIAD_KAPPA_HAT", "2")
        .env("TRIAD_SCALE", "0.01")
        .output()
        .unwrap();
    assert!(via_env.status.success());
    assert_eq!(via_flag.stdout, via_env.stdout);
}

#[test]
fn bench_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.json"), r#"{"experiments": []}"#).unwrap();
    let out = triad(&["bench", "empty.json"], d);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "family,n,m,T_exact,kappa,epsilon,t_hat,kappa_hat,estimate,relative_error,passes,stored_edges_peak,r,ell,s,seed,wall_time_ms\n"
    );

    std::fs::write(
        d.join("book.json"),
        r#"{"experiments": [{"family": "book", "k": 998, "epsilon": 0.2, "scale": 0.005,
            "repetitions": 11, "share_passes": true, "trials": 30, "seed": 100}]}"#,
    )
    .unwrap();
    let a = triad(&["bench", "book.json"], d);
    let b = triad(&["bench", "book.json"], d);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 30);
    let good = rows.iter().filter(|r| r[9].parse::<f64>().unwrap() <= 0.25).count();
    assert!(good >= 20, "{good}/30");
    assert!(rows.iter().all(|r| r[16].is_empty()));

    std::fs::write(d.join("bad.json"), r#"{"experiments": [{"family": "torus"}]}"#).unwrap();
    assert_eq!(triad(&["bench", "bad.json"], d).status.code(), Some(3));
}
