use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn ogd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ogd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value of a `key: value` line in the compute report.
fn field(report: &str, key: &str) -> f64 {
    let line = report
        .lines()
        .find(|l| l.starts_with(&format!("{key}:")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"));
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn col(rows: &[Vec<String>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

#[test]
fn compute_tmsv_matches_arccosh() {
    let dir = TempDir::new().unwrap();
    let c = 99f64.sqrt();
    let state = write(
        &dir,
        "tmsv.toml",
        &format!("[standard]\na = 10.0\nb = 10.0\nc = {c:?}\nd = {:?}\n", -c),
    );
    let json = dir.path().join("out.json");
    let o = ogd(&["compute", "--state", p(&state), "--out", p(&json)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(
        (field(&report, "ogd") - 10f64.acosh()).abs() <= 1e-5,
        "{report}"
    );
    let rec: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!((rec["ogd"].as_f64().unwrap() - 10f64.acosh()).abs() <= 1e-5);
    assert_eq!(rec["seed"].as_u64(), Some(0));
}

#[test]
fn compute_product_state_is_classical() {
    let dir = TempDir::new().unwrap();
    let state = write(&dir, "p.toml", "[standard]\na = 4\nb = 2\nc = 0\nd = 0\n");
    let o = ogd(&["compute", "--state", p(&state)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    for key in ["ogd", "gqd", "renyi2"] {
        assert!(field(&report, key).abs() <= 1e-9, "{key}\n{report}");
    }
}

#[test]
fn compute_reports_family_branch() {
    let dir = TempDir::new().unwrap();
    let state = write(
        &dir,
        "f.toml",
        "[family]\nkind = \"symmetric_t\"\na = 10\nt = 1\n",
    );
    let o = ogd(&["compute", "--state", p(&state)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = stdout(&o);
    assert!(
        report
            .lines()
            .any(|l| l.split_whitespace().eq(["branch:", "homodyne"])),
        "{report}"
    );
    assert!((field(&report, "ogd_closed_form") - 10f64.acosh()).abs() <= 1e-12);
}

#[test]
fn invalid_states_exit_2() {
    let dir = TempDir::new().unwrap();
    let asym = write(
        &dir,
        "a.toml",
        "cov = [[2,0.5,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]\n",
    );
    let o = ogd(&["compute", "--state", p(&asym)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("symmetry violation"), "{}", stderr(&o));

    let unphysical = write(
        &dir,
        "u.toml",
        "[standard]\na = 2\nb = 2\nc = 1.9\nd = -1.9\n",
    );
    for verb in ["compute", "protocol"] {
        let o = ogd(&[verb, "--state", p(&unphysical)]);
        assert_eq!(o.status.code(), Some(2));
        assert!(
            stderr(&o).contains("symplectic eigenvalue"),
            "{}",
            stderr(&o)
        );
        assert!(o.stdout.is_empty());
    }

    let o = ogd(&["compute", "--state", p(&dir.path().join("missing.toml"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = ogd(&["compute", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_symmetric_family() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fig1.csv");
    let args = [
        "sweep",
        "--family",
        "symmetric_t",
        "--param",
        "a=10",
        "--range",
        "0:1:0.25",
        "--out",
        p(&out),
    ];
    let o = ogd(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = std::fs::read(&out).unwrap();
    let o = ogd(&args);
    assert!(o.status.success());
    assert_eq!(
        first,
        std::fs::read(&out).unwrap(),
        "sweep output differs between runs"
    );

    let text = String::from_utf8(first).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(
        text.lines().next().unwrap(),
        "sweep_value,ogd_numeric,ogd_closed_form,gqd,renyi2,det_local,det_joint,branch"
    );
    let rows = csv_rows(&text);
    assert_eq!(col(&rows, 0), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    let ogd_num = col(&rows, 1);
    let ogd_cf = col(&rows, 2);
    for (a, b) in ogd_num.iter().zip(&ogd_cf) {
        assert!((a - b).abs() <= 1e-6);
    }
    assert!((ogd_num[4] - 10f64.acosh()).abs() <= 1e-5);
    // kink at t = √(9/11) ≈ 0.9045
    assert_eq!(rows[3][7], "squeezed");
    assert_eq!(rows[4][7], "homodyne");
}

#[test]
fn sweep_cc_ca_family() {
    let o = ogd(&[
        "sweep", "--family", "cc_ca", "--param", "c=9", "--range", "-1:1:0.1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    let q = col(&rows, 0);
    let ogd_num = col(&rows, 1);
    let gqd = col(&rows, 3);
    let threshold = 1.0 / 19f64.sqrt();
    for i in 0..q.len() {
        if q[i] >= threshold {
            assert!(ogd_num[i].abs() <= 1e-9, "q={} ogd={}", q[i], ogd_num[i]);
        } else if q[i + 1] < threshold {
            assert!(ogd_num[i + 1] < ogd_num[i], "not decreasing at q={}", q[i]);
        }
    }
    assert!(gqd[q.len() - 1] > gqd[0]);
}

#[test]
fn sweep_measure_subset_leaves_columns_empty() {
    let o = ogd(&[
        "sweep",
        "--family",
        "asymmetric",
        "--param",
        "b=3",
        "--param",
        "v=1",
        "--range",
        "-2:2:1",
        "--measures",
        "renyi2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(r.len(), 8);
        assert!(r[1].is_empty() && r[2].is_empty() && r[3].is_empty() && r[7].is_empty());
        assert!(!r[4].is_empty());
    }
}

#[test]
fn sweep_rejects_bad_ranges() {
    let o = ogd(&[
        "sweep",
        "--family",
        "symmetric_t",
        "--param",
        "a=10",
        "--range",
        "0:1.5:0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("range outside family validity"),
        "{}",
        stderr(&o)
    );
    let o = ogd(&["sweep", "--family", "symmetric_t", "--range", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ogd(&[
        "sweep",
        "--family",
        "symmetric_t",
        "--param",
        "a=10",
        "--range",
        "0:1:-0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ogd(&[
        "sweep", "--family", "nope", "--param", "a=10", "--range", "0:1:0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn protocol_tmsv_converges() {
    let dir = TempDir::new().unwrap();
    let r: f64 = 0.5;
    let (a, c) = ((2.0 * r).cosh(), (2.0 * r).sinh());
    let state = write(
        &dir,
        "tmsv.toml",
        &format!(
            "[standard]\na = {a:?}\nb = {a:?}\nc = {c:?}\nd = {:?}\n",
            -c
        ),
    );
    let out = dir.path().join("proto.csv");
    let o = ogd(&["protocol", "--state", p(&state), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "vs,i_local,i_joint,gap,ogd,|gap-ogd|"
    );
    let rows = csv_rows(&text);
    assert_eq!(col(&rows, 0), vec![1.0, 1e2, 1e4, 1e6, 1e8]);
    assert!(*col(&rows, 5).last().unwrap() <= 1e-4);
}

#[test]
fn protocol_without_strategy_gap() {
    let dir = TempDir::new().unwrap();
    let cc = write(
        &dir,
        "cc.toml",
        "[family]\nkind = \"cc_ca\"\nc = 9\nq = 1\n",
    );
    let product = write(&dir, "p.toml", "[standard]\na = 4\nb = 2\nc = 0\nd = 0\n");
    for state in [cc, product] {
        let o = ogd(&["protocol", "--state", p(&state), "--vs", "1,1e3,1e6"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let rows = csv_rows(&stdout(&o));
        assert_eq!(rows.len(), 3);
        assert!(col(&rows, 3).iter().all(|g| g.abs() <= 1e-9));
    }
}

#[test]
fn validate_is_deterministic_and_detects_corruption() {
    let args = ["validate", "--only", "7,9"];
    let first = ogd(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    let table = stdout(&first);
    assert!(table.starts_with("criterion"));
    assert!(table.contains("tolerance"));
    assert!(table.contains("0 failed"));
    let second = ogd(&args);
    assert_eq!(first.stdout, second.stdout);

    let corrupted = ogd(&["validate", "--only", "7,9", "--corrupt-tolerance", "9"]);
    assert_eq!(corrupted.status.code(), Some(4));
    assert!(stdout(&corrupted).contains("FAIL"));

    let o = ogd(&["validate", "--only", "12"]);
    assert_eq!(o.status.code(), Some(2));
}
