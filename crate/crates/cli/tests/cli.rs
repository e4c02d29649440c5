use std::process::{Command, Output};

fn cartan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .env_remove("CARTAN_NEWFORMS")
        .env_remove("CARTAN_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn invariants_text() {
    let o = cartan(&["invariants", "11:ns"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "X_ns(11): d=110 ε₂=2 ε₃=2 ε∞=10 g=4 A=1\n");
}

#[test]
fn invariants_csv_and_json() {
    let o = cartan(&["--format", "csv", "invariants", "13:s:plus"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("spec,d,eps2,eps3,eps_inf,genus,gonality_lb"));
    assert!(lines.next().unwrap().ends_with(",91,7,1,7,3,1"));

    let o = cartan(&["--format", "json", "invariants", "13:s:plus"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "cartan.invariants/1");
    assert_eq!(v["data"]["invariants"]["genus"], 3);
}

#[test]
fn bad_spec_exits_with_2() {
    let o = cartan(&["invariants", "12:7=ns"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert!(o.stdout.is_empty());
}

#[test]
fn classify_small_genus() {
    let o = cartan(&["--format", "json", "classify", "6:s:plus"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "cartan.verdict/1");
    assert_eq!(v["data"]["status"], "infinite_aut");
}

#[test]
fn classify_names_the_group() {
    let o = cartan(&["classify", "13:ns"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("aut group   Z/2 (order 2)"), "{text}");
    assert!(text.contains("field       ℚ(√13)"), "{text}");
}

#[test]
fn verify_chen_passes() {
    let o = cartan(&["verify", "chen", "--prime-powers", "4,9", "--spec", "6:2=s,3=ns"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("3 checks, 0 failed\n"));
}

#[test]
fn verify_chen_rejects_composites() {
    let o = cartan(&["verify", "chen", "--prime-powers", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table2_csv() {
    let o = cartan(&["--format", "csv", "table", "table2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("subgroup,spec,order,group\n"));
    assert!(text.contains("C_ns+(3),"));
}

#[test]
fn lowlevels_without_fixture_marks_cm_unknown() {
    let o = cartan(&["--format", "csv", "table", "lowlevels", "--max", "12"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(stdout(&o).lines().count(), 13);
}

#[test]
fn malformed_fixture_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "level,label,dim,is_cm,cm_disc,al_signs\n11,11.2.a,one,false,,11:-\n").unwrap();
    let o = cartan(&["--newforms", path.to_str().unwrap(), "classify", "11:ns"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&o.stderr));
}
