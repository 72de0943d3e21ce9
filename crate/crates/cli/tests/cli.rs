use std::process::{Command, Output};

use serde_json::Value;

fn noncomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noncomm"))
        .args(args)
        .env_remove("NONCOMM_QUAD_TOL")
        .env_remove("NONCOMM_ROOT_TOL")
        .env_remove("NONCOMM_CRIT_TOL")
        .env_remove("NONCOMM_THREADS")
        .env_remove("NONCOMM_FORMAT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_reports_every_field() {
    let out = noncomm(&["solve", "--n", "1", "--l", "0", "--alphaZ", "7.29735e-3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "n",
            "l",
            "alphaZ",
            "epsilon",
            "eta",
            "energy_model",
            "energy_schrodinger",
            "energy_klein_gordon",
            "mean_radius",
            "root_count",
            "residual"
        ]
    );
    let eps = v["epsilon"].as_f64().unwrap();
    assert!((eps / 0.776e-6 - 1.0).abs() < 1e-2, "{eps}");
}

#[test]
fn no_bound_state_exits_with_two() {
    let out = noncomm(&["solve", "--n", "1", "--l", "0", "--alphaZ", "0.52"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "no bound state");
    assert_eq!(err["n"], 1);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["solve", "--n", "2", "--l", "5", "--alphaZ", "0.1"][..],
        &["solve", "--n", "1", "--l", "0", "--alphaZ", "-0.1"],
        &["solve", "--n", "1", "--l", "0"],
        &["sweep", "--n", "1", "--l", "0", "--min", "0.3", "--max", "0.1"],
        &[
            "sweep", "--n", "1", "--l", "0", "--min", "0.1", "--max", "0.3", "--steps", "1",
        ],
        &[
            "rhs-curve",
            "--n",
            "1",
            "--l",
            "0",
            "--alphaZ",
            "0.3",
            "--eta-max",
            "1.5",
        ],
        &["critical", "--n", "1", "--l", "0", "--crit-tol", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(noncomm(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(noncomm(&["--help"]).status.code(), Some(0));
    assert_eq!(noncomm(&["--version"]).status.code(), Some(0));
}

#[test]
fn tolerance_flags_override_environment() {
    let args = ["critical", "--n", "2", "--l", "1"];
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_noncomm"));
        cmd.args(args).args(extra);
        if let Some(v) = env {
            cmd.env("NONCOMM_CRIT_TOL", v);
        }
        cmd.output().unwrap()
    };
    assert_eq!(run(Some("-1"), &[]).status.code(), Some(1));
    let flagged = run(Some("-1"), &["--crit-tol", "1e-3"]);
    assert_eq!(flagged.status.code(), Some(0));
    let coarse = json(&flagged)["alphaZ_c"].as_f64().unwrap();
    let from_env = json(&run(Some("1e-3"), &[]))["alphaZ_c"].as_f64().unwrap();
    assert_eq!(coarse, from_env);
    assert!((coarse - 1.221611).abs() < 1e-3);
}

#[test]
fn sweep_table_shape() {
    let out = noncomm(&[
        "sweep", "--n", "1", "--l", "0", "--min", "0.45", "--max", "0.55", "--steps", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "alphaZ,epsilon,energy_model,energy_schrodinger,energy_klein_gordon"
    );
    assert_eq!(lines.len(), 4);
    // Past both critical couplings only the Schrödinger column is filled.
    let last: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(last[0], "5.50000000000e-1");
    assert_eq!((last[1], last[2], last[4]), ("", "", ""));
    assert_eq!(last[3], "-1.51250000000e-1");
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 of 3 rows"));
}

#[test]
fn epsilon_sweep_and_ground_state_tables() {
    let out = noncomm(&["epsilon-sweep", "--min", "0.001", "--max", "1.3", "--steps", "3"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alphaZ,eps_10,eps_20,eps_21");
    let small: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((small[1] / small[2] - 8.0).abs() < 0.1);
    assert!((small[1] / small[3] - 24.0).abs() < 0.3);
    assert!(lines[3].starts_with("1.30000000000e0,,") && lines[3].ends_with(','));

    let out = noncomm(&["ground-state", "--min", "0.3", "--max", "1.5", "--steps", "7"]);
    let expected = "alphaZ,ground_n,ground_l\n\
                    3.00000000000e-1,1,0\n\
                    5.00000000000e-1,1,0\n\
                    7.00000000000e-1,2,0\n\
                    9.00000000000e-1,2,1\n\
                    1.10000000000e0,2,1\n\
                    1.30000000000e0,2,0\n\
                    1.50000000000e0,none,none\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn json_format_for_tables() {
    let out = noncomm(&[
        "--format",
        "json",
        "rhs-curve",
        "--n",
        "1",
        "--l",
        "0",
        "--alphaZ",
        "1e-6",
        "--eta-steps",
        "5",
    ]);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!((r["g_eta"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn oracle_check_exit_codes() {
    let out = noncomm(&["oracle-check", "--n", "1", "--l", "0", "--alphaZ", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agreement"], true);
    assert!(v["rel_diff_energy"].as_f64().unwrap() < 1e-8);

    let out = noncomm(&["oracle-check", "--n", "1", "--l", "0", "--alphaZ", "0.52"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        (v["bound_analytic"].clone(), v["bound_numeric"].clone()),
        (false.into(), false.into())
    );
    assert!(v["epsilon_numeric"].is_null());

    // A quadrature too loose to reproduce the shooting solver.
    let out = noncomm(&[
        "--quad-tol",
        "1e-2",
        "--root-tol",
        "1e-3",
        "oracle-check",
        "--n",
        "2",
        "--l",
        "1",
        "--alphaZ",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["agreement"], false);
}

#[test]
fn output_files_are_deterministic_across_thread_counts() {
    let dir = std::env::temp_dir().join(format!("noncomm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut files = Vec::new();
    for threads in ["1", "4", "1"] {
        let path = dir.join(format!("sweep-{}-{threads}.csv", files.len()));
        let p = path.to_str().unwrap();
        let out = noncomm(&[
            "sweep",
            "--n",
            "2",
            "--l",
            "1",
            "--min",
            "0.01",
            "--max",
            "1.25",
            "--steps",
            "40",
            "--threads",
            threads,
            "--output",
            p,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    std::fs::remove_dir_all(&dir).unwrap();
}
