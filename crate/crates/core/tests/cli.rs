use std::process::Command;

fn hilbres(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbres")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn config(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn one_node_config() {
    let (code, out, _) = hilbres(&["eval", &config("one_node.cfg")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3*L^2 + 2*L*c1 + c2");
}

#[test]
fn severi_json_records() {
    let (code, out, _) = hilbres(&["--json", "severi", "--r", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let recs = v["coefficients"].as_array().unwrap();
    let keys: Vec<&str> = recs.iter().map(|r| r["monomial"].as_str().unwrap()).collect();
    assert_eq!(keys, ["L^2", "L*c1", "c1^2", "c2"]);
    assert_eq!(recs[0]["numerator"], "3");
    assert_eq!(recs[0]["denominator"], "1");
}

#[test]
fn empty_config_is_a_usage_error() {
    let path = std::env::temp_dir().join(format!("hilbres-empty-{}.cfg", std::process::id()));
    std::fs::write(&path, "# nothing here\n\n").unwrap();
    let (code, _, err) = hilbres(&["eval", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 2);
    assert!(err.contains("empty configuration"));
}

#[test]
fn plane_specialization_and_mdeg() {
    let (_, out, _) = hilbres(&["severi", "--r", "1", "--plane-degree", "5"]);
    assert!(out.contains("P2,d=5 = 48"), "{out}");
    let (code, out, _) = hilbres(&["mdeg", "2,0", "1,1", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3*a*b");
}
