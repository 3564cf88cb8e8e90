use std::path::PathBuf;
use std::process::{Command, Output};

fn odelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("odelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn evolve_rows() {
    let out = odelab(&["evolve", "--field", "z^2", "--z0", "1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,value\n0,1\n1,2\n2,5\n");
}

#[test]
fn solve_reports_zero_residuals() {
    let out = odelab(&[
        "solve", "--field", "z^2", "--z0", "1/2", "--n", "20", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&out)).unwrap();
    let residuals = report["residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 20);
    assert!(residuals.iter().all(|r| r == "0"));
    assert_eq!(report["all_zero"], true);
    assert_eq!(report["trajectory"].as_array().unwrap().len(), 21);
}

#[test]
fn gamma_sequence() {
    let out = odelab(&["sequence", "gamma", "--n", "5"]);
    assert_eq!(
        stdout(&out),
        "[\"1\",\"1/2\",\"3/8\",\"5/16\",\"35/128\",\"63/256\"]\n"
    );
}

#[test]
fn verify_exit_codes() {
    let good = scratch("good.csv");
    let bad = scratch("bad.json");
    let evolved = odelab(&[
        "evolve",
        "--field",
        "z^2 - 1",
        "--z0",
        "1/3",
        "--n",
        "6",
        "--out",
        good.to_str().unwrap(),
    ]);
    assert_eq!(evolved.status.code(), Some(0));
    assert!(evolved.stdout.is_empty());
    std::fs::write(&bad, "[\"1\", \"3\"]").unwrap();

    let ok = odelab(&[
        "verify",
        "--field",
        "z^2 - 1",
        "--input",
        good.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).lines().count(), 7);

    let fail = odelab(&["verify", "--field", "z^2", "--input", bad.to_str().unwrap()]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(stdout(&fail), "n,residual\n0,1\n");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(
        odelab(&["evolve", "--field", "3z", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        odelab(&["evolve", "--field", "z", "--z0", "x", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        odelab(&["borel", "--field", "z^3", "--z0", "1", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(odelab(&["fly"]).status.code(), Some(2));
    assert_eq!(
        odelab(&["stencil", "--lower", "1", "--upper", "1"])
            .status
            .code(),
        Some(2)
    );
    let err = odelab(&["evolve", "--field", "z^", "--n", "2"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("column 3"));
}

#[test]
fn negative_values_are_accepted() {
    let out = odelab(&["evolve", "--field", "-z^2", "--z0", "-1/3", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,value\n0,-1/3\n1,-4/9\n");
}

#[test]
fn borel_and_recurrence() {
    let borel = odelab(&["borel", "--field", "z^2", "--z0", "1/2", "--n", "3"]);
    assert_eq!(borel.status.code(), Some(0));
    // w_n = z_n / n! with z = 1/2, 3/4, 5/4, 19/8
    assert_eq!(
        stdout(&borel),
        "n,value,residual\n0,1/2,0\n1,3/4,0\n2,5/8,0\n3,19/48,\n"
    );

    let rec = odelab(&["recurrence", "--field", "z^2", "--z0", "1", "--n", "3"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&rec)).unwrap();
    assert_eq!(report["hat"], serde_json::json!(["1", "1", "1", "1"]));
    assert_eq!(report["all_zero"], true);
}

#[test]
fn taylor_beta_and_stencil() {
    assert_eq!(
        stdout(&odelab(&[
            "taylor", "--field", "z^2", "--z0", "1", "--n", "3"
        ])),
        "[\"1\",\"1\",\"1\",\"1\"]\n"
    );
    assert_eq!(
        stdout(&odelab(&[
            "sequence", "beta", "--field", "z^2 + 1", "--n", "5"
        ])),
        "[\"0\",\"1\",\"0\",\"1/3\",\"0\",\"2/15\"]\n"
    );
    let stencil = odelab(&[
        "stencil", "--lower", "-1", "--upper", "1", "--format", "csv",
    ]);
    assert_eq!(stdout(&stencil), "i,k,alpha\n0,-1,-1/2\n1,0,0\n2,1,1/2\n");
}

#[test]
fn decimals_are_opt_in() {
    let out = odelab(&[
        "evolve",
        "--field",
        "z^2",
        "--z0",
        "1/3",
        "--n",
        "1",
        "--decimals",
        "3",
    ]);
    assert_eq!(
        stdout(&out),
        "n,value,value_decimal\n0,1/3,0.333\n1,4/9,0.444\n"
    );
}

#[test]
fn problem_files() {
    let trajectory = scratch("traj.json");
    std::fs::write(&trajectory, "[\"1\", \"2\", \"5\"]").unwrap();
    let verify = scratch("verify.json");
    std::fs::write(
        &verify,
        r#"{"field": "z^2", "z0": "1", "n_max": 2, "mode": "verify", "input": "traj.json"}"#,
    )
    .unwrap();
    let out = odelab(&["run", verify.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,residual\n0,0\n1,0\n");

    let solve = scratch("solve.json");
    std::fs::write(
        &solve,
        r#"{"field": "z^2", "z0": "1/2", "n_max": 2, "mode": "solve"}"#,
    )
    .unwrap();
    let from_file = odelab(&["run", solve.to_str().unwrap()]);
    let from_flags = odelab(&["solve", "--field", "z^2", "--z0", "1/2", "--n", "2"]);
    assert_eq!(from_file.stdout, from_flags.stdout);

    let broken = scratch("broken.json");
    std::fs::write(&broken, r#"{"field": "z^2"}"#).unwrap();
    assert_eq!(
        odelab(&["run", broken.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn identical_specs_give_identical_files() {
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    for path in [&a, &b] {
        let out = odelab(&[
            "solve",
            "--field",
            "-1/2*z^2 + 3/4*z - 1",
            "--z0",
            "2/3",
            "--n",
            "15",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
