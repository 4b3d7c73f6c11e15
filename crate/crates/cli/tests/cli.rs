use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn isolab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isolab"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &Path, name: &str, v: &Value) {
    std::fs::write(dir.join(name), v.to_string()).unwrap();
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn cycle_doc(n: usize) -> Value {
    json!({
        "scale": 1,
        "vertices": (0..n).map(|i| json!([i, 0])).collect::<Vec<_>>(),
        "edges": (0..n).map(|i| json!([i, (i + 1) % n, 1])).collect::<Vec<_>>(),
        "measures": null,
    })
}

#[test]
fn exact_profile_of_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c8.json", &cycle_doc(8));
    let o = isolab(dir.path(), &["profile", "--space", "c8.json", "--h", "1", "--exact", "--out", "p.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let p = read(dir.path(), "p.json");
    assert_eq!(p["kind"], "exact");
    assert_eq!(p["points"], json!([[1, 3], [2, 4], [3, 4], [4, 4]]));
}

#[test]
fn generate_then_named_family() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "v.json", &json!({"k_max": 3}));
    let o = isolab(dir.path(), &["generate", "vonkoch", "--params", "v.json", "--out", "vk.json"]);
    assert_eq!(code(&o), 0);
    let doc = read(dir.path(), "vk.json");
    assert_eq!(doc["generator"], "vonkoch");
    assert_eq!(doc["describe"]["trees"][0]["tree_size"], 21);

    let o = isolab(
        dir.path(),
        &["profile", "--space", "vk.json", "--h", "100", "--family", "named:A_*", "--csv"],
    );
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,value"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn growth_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c8.json", &cycle_doc(8));
    let o = isolab(
        dir.path(),
        &["growth", "--space", "c8.json", "--center", "0", "--radii", "0..=4", "--out", "g.json"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let g = read(dir.path(), "g.json");
    assert_eq!(g["points"], json!([[0, 1], [1, 3], [2, 5], [3, 7], [4, 8]]));

    write(
        dir.path(),
        "lin.json",
        &json!({"label": "2t", "shape": {"power": {"coeff": 2.0, "exponent": 1.0, "t_min": 1.0, "t_max": 4.0}}, "lookup": "floor"}),
    );
    let o = isolab(
        dir.path(),
        &["compare", "--f", "g.json", "--g", "lin.json", "--grid", "2^0..2^3", "--out", "w.json"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(read(dir.path(), "w.json")["relation"], "dominates");
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.json", &json!({"report": "r.json", "plot": "r.svg"}));
    let o = isolab(dir.path(), &["--config", "cfg.json", "verify", "oracle_h_independence"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read(dir.path(), "r.json");
    assert_eq!(r["passed"], true);
    assert!(std::fs::read_to_string(dir.path().join("r.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "cfg.json", &json!({"experiment": "no_such_experiment", "max_vertices": 10}));
    let o = isolab(dir.path(), &["--config", "cfg.json", "verify", "vonkoch_spheres"]);
    assert_eq!(code(&o), 3);
    let o = isolab(dir.path(), &["--config", "cfg.json", "verify"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&isolab(dir.path(), &["verify", "nonsense"])), 2);
    assert_eq!(code(&isolab(dir.path(), &["profile", "--space", "missing.json", "--exact"])), 2);
    assert_eq!(code(&isolab(dir.path(), &["compare", "--f", "a", "--g", "b", "--grid", "3..9"])), 2);
    assert_eq!(code(&isolab(dir.path(), &["bogus-subcommand"])), 2);
    write(dir.path(), "c8.json", &cycle_doc(8));
    let off = isolab(dir.path(), &["growth", "--space", "c8.json", "--center", "0,0", "--radii", "1"]);
    assert_eq!(code(&off), 2);
    assert_eq!(code(&isolab(dir.path(), &["verify", "vonkoch_spheres", "--max-vertices", "10"])), 3);

    write(
        dir.path(),
        "sq.json",
        &json!({"label": "t^2", "shape": {"power": {"coeff": 1.0, "exponent": 2.0, "t_min": 1.0, "t_max": 4096.0}}, "lookup": "floor"}),
    );
    write(
        dir.path(),
        "t.json",
        &json!({"label": "t", "shape": {"power": {"coeff": 1.0, "exponent": 1.0, "t_min": 1.0, "t_max": 4096.0}}, "lookup": "floor"}),
    );
    assert_eq!(code(&isolab(dir.path(), &["compare", "--f", "sq.json", "--g", "t.json", "--grid", "2^0..2^2"])), 1);
}
