use std::process::{Command, Output};

fn curvimom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvimom")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap()
}

#[test]
fn expect_examples() {
    let out = curvimom(&["expect", "canonical:r", "hydrogen:n=1,L=0,M=0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["value_re"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(v["units"], "atomic");
    assert_eq!(v["command"], "expect");

    let out = curvimom(&["expect", "naive:r", "hydrogen:n=1,L=0,M=0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!((json(&out)["defect"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = curvimom(&["expect", "canonical:phi", "hydrogen:n=2,L=1,M=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value_re"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["expect", "canonical:r", "hydrogen:n=1,L=3"][..],
        &["expect", "sideways:r", "hydrogen:n=1,L=0"],
        &["expect", "canonical:x", "hydrogen:n=1,L=0"],
        &["hydrogen-table", "--nmax", "7"],
        &["hydrogen-table", "--nmax", "0"],
        &["check", "--radial-order", "7"],
        &["check", "--units", "si"],
        &["p-theta-scan", "--lmax", "11"],
        &["bogus"],
    ] {
        let out = curvimom(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn hydrogen_table_csv() {
    let out = curvimom(&["hydrogen-table", "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "n,L,inv_r2_quad,inv_r2_closed,inv_r3_quad,inv_r3_closed,residual,p_r,p_theta"
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    let keys: Vec<(&str, &str)> = rows.iter().map(|r| (&r[0], &r[1])).collect();
    assert_eq!(keys, [("1", "0"), ("2", "0"), ("2", "1")]);
    let inv_r3: f64 = rows[2][5].parse().unwrap();
    assert!((inv_r3 - 1.0 / 24.0).abs() < 1e-15);
    let residual: f64 = rows[2][6].parse().unwrap();
    assert!(residual <= 1e-8);
}

#[test]
fn json_lines_are_objects() {
    let out = curvimom(&["hydrogen-table", "--nmax", "3", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.is_object());
    }
}

#[test]
fn check_passes_and_degrades() {
    let out = curvimom(&["check", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 8);

    let out = curvimom(&["check", "--radial-order", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn check_is_deterministic_per_seed() {
    let a = curvimom(&["check", "--seed", "7", "--format", "json"]);
    let b = curvimom(&["check", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = curvimom(&["check", "--seed", "8", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn si_constants_file() {
    let dir = std::env::temp_dir().join(format!("curvimom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("codata.json");
    std::fs::write(&path, r#"{"hbar": 1.054571817e-34, "m": 9.1093837015e-31, "e2": 2.307077552e-28}"#).unwrap();
    let p = path.to_str().unwrap();

    let out = curvimom(&["expect", "canonical:phi", "hydrogen:n=2,L=1,M=1", "--units", "si", "--si-constants", p]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["units"], "si");
    assert!((v["value_re"].as_f64().unwrap() / 1.054571817e-34 - 1.0).abs() < 1e-10);

    let out = curvimom(&["check", "--units", "si", "--si-constants", p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn p_theta_scan_rows() {
    let out = curvimom(&["p-theta-scan", "--lmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.starts_with("L,M,value_re,value_im,defect,boundary_term,quad_error\n"));
}
