use std::process::Command;

fn torsionlab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn passing_run_exits_zero_and_writes_outputs() {
    let dir = std::env::temp_dir().join(format!("torsionlab-cli-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (code, stdout) = torsionlab(&["exponent", "--n", "2,4", "--theta", "0.5,1.5", "--out", d, "--seed", "3"]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("exponent: PASS"));
    let csv = std::fs::read_to_string(dir.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",3")));
    assert!(dir.join("results.json").exists());
    assert!(dir.join("plotdata").join("alpha.dat").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(torsionlab(&["no-such-experiment"]).0, 1);
    assert_eq!(torsionlab(&["sector", "--beta", "1.5"]).0, 1);
    assert_eq!(torsionlab(&["coarea", "--domain", "l-shape"]).0, 1);
}

#[test]
fn divergent_cusp_fails_only_on_request() {
    let args = ["cusp", "--p", "2", "--beta", "0.5,0.8", "--h0", "0.05", "--levels", "2"];
    assert_eq!(torsionlab(&args).0, 0);
    let mut strict = args.to_vec();
    strict.push("--fail-on-divergent");
    assert_eq!(torsionlab(&strict).0, 2);
}

#[test]
fn solve_then_beta_integral() {
    let dir = std::env::temp_dir().join(format!("torsionlab-cli-solve-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    assert_eq!(torsionlab(&["solve", "--domain", "square", "--levels", "2", "--out", d]).0, 0);
    let field = dir.join("fields").join("level1.json");
    let (code, stdout) = torsionlab(&["beta-integral", "--field", field.to_str().unwrap(), "--beta", "0.5"]);
    assert_eq!(code, 0, "{stdout}");

    // a field that vanishes identically has a divergent integral
    let mut rec: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&field).unwrap()).unwrap();
    let n = rec["values"].as_array().unwrap().len();
    rec["values"] = serde_json::json!(vec![0.0; n]);
    let zero = dir.join("zero.json");
    std::fs::write(&zero, rec.to_string()).unwrap();
    assert_eq!(torsionlab(&["beta-integral", "--field", zero.to_str().unwrap()]).0, 3);
    std::fs::remove_dir_all(&dir).unwrap();
}
