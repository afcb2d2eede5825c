use std::process::{Command, Output};

fn minres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn minres_single_interval() {
    let out = minres(&["minres", "--set", "1,2", "--n", "2"]);
    let v = stdout_json(&out);
    let l = v["L"].as_f64().unwrap();
    assert!((l - 1.0 / 17.0).abs() < 1e-9);
    assert_eq!(v["effective_degree"], 2);
    assert_eq!(v["certified"], true);
    assert_eq!(v["deltas"].as_array().unwrap().len(), 2);
    assert_eq!(v["reference"].as_array().unwrap().len(), 3);
}

#[test]
fn minres_with_grid_bracket() {
    let out = minres(&["minres", "--set", "1,2", "--n", "3", "--grid", "64"]);
    let v = stdout_json(&out);
    let l = v["L"].as_f64().unwrap();
    let lo = v["oracle_lower"].as_f64().unwrap();
    let hi = v["oracle_upper"].as_f64().unwrap();
    assert!(lo - 1e-8 <= l && l <= hi + 1e-8);
    assert!((l - 1.0 / 99.0).abs() < 1e-9);
}

#[test]
fn kappa_closed_form() {
    let out = minres(&["kappa", "--set", "1,2"]);
    let v = stdout_json(&out);
    let k = v["kappa"].as_f64().unwrap();
    assert!((k - (3.0 - 8f64.sqrt())).abs() < 1e-10);
}

#[test]
fn report_csv_shares_deviation_across_degrees() {
    let set = "-2.6457513110645906,-1.7320508075688772;1.7320508075688772,2.6457513110645906";
    let out = minres(&["report", "--set", set, "--n-max", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "n,L,classic,sharp,ratio,equality,certified");
    assert_eq!(lines.len(), 5);
    let l2: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    let l3: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
    assert!((l2 - 0.4).abs() < 1e-9);
    assert!((l3 - l2).abs() < 1e-9);
    assert!(lines[3].contains("equality"));
    assert!(lines[4].contains("strict"));
}

#[test]
fn deterministic_output() {
    let args = ["report", "--set", "-2,-1;1,3", "--n-max", "4"];
    let a = minres(&args);
    let b = minres(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "byte-identical across runs");
}

#[test]
fn parse_set_variants() {
    // overlap merges
    let out = minres(&["kappa", "--set", "1,2;1.5,3"]);
    let v = stdout_json(&out);
    // merged [1,3]: kappa = 1/(2 + sqrt 3)
    let u: f64 = 2.0; // |u(0)| for [1,3]
    let expect = 1.0 / (u + (u * u - 1.0).sqrt());
    assert!((v["kappa"].as_f64().unwrap() - expect).abs() < 1e-10);
}

#[test]
fn set_from_json_file() {
    let dir = std::env::temp_dir().join("minres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("set.json");
    std::fs::write(&path, r#"{"intervals":[[1.0,2.0]]}"#).unwrap();
    let spec = format!("@{}", path.display());
    let out = minres(&["kappa", "--set", &spec]);
    let v = stdout_json(&out);
    assert!((v["kappa"].as_f64().unwrap() - (3.0 - 8f64.sqrt())).abs() < 1e-10);
}

#[test]
fn invimage_subcommand() {
    let out = minres(&["invimage", "--poly", r#"{"basis":"monomial","coeffs":[-2.5,0,0.5]}"#]);
    let v = stdout_json(&out);
    assert_eq!(v["ell"], 2);
    assert!((v["L_n"].as_f64().unwrap() - 0.4).abs() < 1e-12);
    let eps = v["endpoints"].as_array().unwrap();
    assert_eq!(eps.len(), 4);
    assert!((eps[0].as_f64().unwrap() + 7f64.sqrt()).abs() < 1e-10);
    // kappa^n * (|P(0)| + sqrt(P(0)^2 - 1)) = 1
    let kpn = v["kappa_pow_n"].as_f64().unwrap();
    assert!((kpn * (2.5 + (2.5f64 * 2.5 - 1.0).sqrt()) - 1.0).abs() < 1e-11);
}

#[test]
fn bw_subcommand() {
    let out = minres(&[
        "bw",
        "--set",
        "-1,1",
        "--x",
        "2",
        "--poly",
        r#"{"basis":"monomial","coeffs":[-1,0,2]}"#,
    ]);
    let v = stdout_json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 7.0).abs() < 1e-10);
    assert!((v["rhs"].as_f64().unwrap() - 7.0).abs() < 1e-9);
    assert_eq!(v["pass"], true);

    // seeded random polynomial path is deterministic
    let args = ["bw", "--set", "-1,1", "--x", "2", "--n", "5", "--random", "--seed", "7"];
    let a = minres(&args);
    let b = minres(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["pass"], true);
}

#[test]
fn invalid_input_exits_2() {
    let out = minres(&["kappa", "--set", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = minres(&["kappa", "--set", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // 0 in S
    let out = minres(&["minres", "--set", "-1,1", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quad_tol_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_minres"))
        .args(["kappa", "--set", "1,2"])
        .env("MINRES_QUAD_TOL", "1e-6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["quad_tol"].as_f64().unwrap(), 1e-6);
    // explicit flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_minres"))
        .args(["kappa", "--set", "1,2", "--quad-tol", "1e-8"])
        .env("MINRES_QUAD_TOL", "1e-6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["quad_tol"].as_f64().unwrap(), 1e-8);
}

#[test]
fn every_numeric_field_is_finite() {
    let out = minres(&["report", "--set", "-3,-1;0.5,2", "--n-max", "5"]);
    let v = stdout_json(&out);
    fn walk(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => assert!(n.as_f64().unwrap().is_finite()),
            serde_json::Value::Array(a) => a.iter().for_each(walk),
            serde_json::Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&v);
}
