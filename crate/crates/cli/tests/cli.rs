use std::process::Command;

fn minv(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_minv"))
        .args(args)
        .output()
        .expect("binary runs");
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.success(), text)
}

fn ok(args: &[&str]) -> String {
    let (success, text) = minv(args);
    assert!(success, "command {:?} failed:\n{}", args, text);
    text
}

#[test]
fn data_table_and_json() {
    let text = ok(&["data", "SU(2)_4", "--fast"]);
    assert!(text.contains("5 sectors"));
    assert!(text.contains("(4)"));
    assert!(text.contains("1/8"));

    let text = ok(&["data", "SU(2)_4", "--fast", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["sectors"], 5);
    assert_eq!(v["labels"][2]["h"], "1/3");
}

#[test]
fn fusion_by_label_name() {
    let text = ok(&["fusion", "SU(2)_4", "(2)", "(2)", "--fast"]);
    assert!(text.contains("(0) + (2) + (4)"));
    let text = ok(&["fusion", "SU(3)_5", "(1,0)", "(0,1)", "--fast"]);
    assert!(text.contains("(0,0) + (1,1)"));
}

#[test]
fn invariants_list_enumerate_verify() {
    let text = ok(&["invariants", "SU(2)_16", "list", "--fast"]);
    for name in ["A17", "D10", "E7"] {
        assert!(text.contains(name), "missing {name}:\n{text}");
    }

    let text = ok(&["invariants", "Z_5(a=2)", "enumerate", "--fast"]);
    assert!(text.contains("2 physical invariants"));

    let text = ok(&["invariants", "SU(2)_16", "verify", "--fast"]);
    assert!(text.contains("PASS verify_D10"));
    assert!(text.contains("3 of 3 checks passed"));
}

#[test]
fn stored_invariants_round_trip_through_files() {
    let list = ok(&["invariants", "SU(2)_16", "list", "--fast", "--json"]);
    let dtos: serde_json::Value = serde_json::from_str(&list).unwrap();
    let d10 = dtos
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["name"] == "D10")
        .unwrap()
        .clone();

    let dir = std::env::temp_dir();
    let good = dir.join("minv_cli_test_d10.json");
    std::fs::write(&good, serde_json::to_string(&d10).unwrap()).unwrap();
    let text = ok(&[
        "invariants",
        "SU(2)_16",
        "verify",
        "--file",
        good.to_str().unwrap(),
        "--fast",
    ]);
    assert!(text.contains("OK: D10 verified"));

    let mut bad = d10.clone();
    bad["entries"].as_array_mut().unwrap().push(serde_json::json!([0, 1, 1]));
    let bad_path = dir.join("minv_cli_test_bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let (success, text) = minv(&[
        "invariants",
        "SU(2)_16",
        "verify",
        "--file",
        bad_path.to_str().unwrap(),
        "--fast",
    ]);
    assert!(!success);
    assert!(text.contains("error"));
}

#[test]
fn products_and_decompositions() {
    let text = ok(&["product", "SU(2)_16", "D10", "D10", "--fast"]);
    assert!(text.contains("D10 . D10 = 2*D10"));

    let text = ok(&["decompose", "SU(2)_16", "E7", "--fast"]);
    assert!(text.contains("E7 E7* = D10 + E7"));

    let text = ok(&["product", "SU(2)_16", "E7", "A17*", "--fast"]);
    assert!(text.contains("E7 . A17* = E7"));
}

#[test]
fn counts_of_the_su3_exceptional() {
    let text = ok(&["counts", "SU(3)_9", "E12", "--fast"]);
    assert!(text.contains("tr Z           = 12"));
    assert!(text.contains("= 6"));
}

#[test]
fn branching_flow_for_the_d_series() {
    let text = ok(&[
        "branching", "show", "SU(2)_16", "--current", "(16)", "--fast",
    ]);
    assert!(text.contains("(8)#1"));
    assert!(text.contains("(0) + (16)"));

    let text = ok(&[
        "branching", "decompose", "SU(2)_16", "--current", "(16)", "--fast",
    ]);
    assert!(text.contains("1 x id"));
    assert!(text.contains("1 x (4 5)"));

    let text = ok(&[
        "branching", "restrict", "SU(2)_16", "--current", "(16)", "--fast",
    ]);
    assert!(text.contains("= D10"));

    // nonlocal current: still shown, but flagged
    let text = ok(&["branching", "show", "SU(2)_6", "--current", "(6)", "--fast"]);
    assert!(text.contains("warning: nonlocal extension"));
}

#[test]
fn branching_embedding_and_sandwich() {
    let text = ok(&[
        "branching", "sandwich", "SU(2)_10", "--embedding", "so5", "--fast",
    ]);
    assert!(text.contains("commutes with the extended S and T"));
    assert!(text.contains("sigma"));

    let (success, text) = minv(&[
        "branching", "sandwich", "SU(2)_16", "--embedding", "so5", "--fast",
    ]);
    assert!(!success);
    assert!(text.contains("SU(2)_10"));
}

#[test]
fn nimrep_check_theta_dot() {
    let text = ok(&["nimrep", "check", "SU(2)_16", "--diagram", "D10", "--fast"]);
    assert!(text.contains("PASS spectrum"));
    assert!(text.contains("PASS trace_identity"));

    let text = ok(&[
        "nimrep", "theta", "SU(2)_10", "--diagram", "E6", "--vertex", "5",
        "--invariant", "E6", "--fast",
    ]);
    assert!(text.contains("theta[6] = (0) + (4) + (6) + (10)"));
    assert!(text.contains("candidate (even spins of E6) = (0) + (4) + (6) + (10)"));

    let text = ok(&["nimrep", "dot", "SU(2)_10", "--diagram", "E6", "--fast"]);
    assert!(text.starts_with("graph \"E6\""));
    assert!(text.contains("v2 -- v5;"));

    let text = ok(&["nimrep", "dot", "SU(2)_4", "--generator", "(1)", "--fast"]);
    assert!(text.contains("v0 -- v1;"));

    let (success, text) = minv(&["nimrep", "build", "SU(2)_16", "--diagram", "E6", "--fast"]);
    assert!(!success);
    assert!(text.contains("Coxeter"));
}

#[test]
fn report_runs_green_on_small_data() {
    let text = ok(&["report", "SU(2)_4", "--fast"]);
    assert!(text.contains("PASS modular_axioms"));
    assert!(text.contains("8 of 8 checks passed"));

    let text = ok(&["report", "Z_5(a=2)", "--fast"]);
    assert!(text.contains("PASS"));
    assert!(text.contains("checks passed"));
}

#[test]
fn bad_inputs_fail_cleanly() {
    let (success, text) = minv(&["data", "SU(2", "--fast"]);
    assert!(!success);
    assert!(text.contains("group data is written like SU(2)_16"));

    let (success, text) = minv(&["data", "XX_3", "--fast"]);
    assert!(!success);
    assert!(text.contains("unrecognized theory"));

    let (success, text) = minv(&["fusion", "SU(2)_4", "(9)", "(2)", "--fast"]);
    assert!(!success);
    assert!(text.contains("no sector named"));

    let (success, text) = minv(&["product", "SU(2)_16", "E6", "D10", "--fast"]);
    assert!(!success);
    assert!(text.contains("known: A17, D10, E7"));
}
