use std::path::Path;
use std::process::{Command, Output};

use hexafield::serial::pasture_from_json;
use hexafield::{Caps, Pasture};
use serde_json::Value;

fn hexafield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hexafield"))
        .args(args)
        .env_remove("HEXAFIELD_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = hexafield(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn quotient_output_feeds_the_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["quotient", "--q", "9", "--index", "2"]);
    let h = pasture_from_json(&text, &Caps::default()).unwrap();
    assert_eq!(h.order(), 2);
    let path = write(dir.path(), "h.json", &text);

    let check = json(&["--format", "json", "check", "--pasture", &path]);
    assert_eq!(check["is_hyperfield"], true);
    assert_eq!(check["is_field"], false);

    let verdict = json(&["isquotient", "--pasture", &path]);
    assert_eq!(verdict["status"], "quotient");

    let classified = json(&["classify", "--pasture", &path]);
    assert_eq!(classified["is_hyperfield"], true);
    let canon = serde_json::to_string(&classified["canonical"]).unwrap();
    assert!(pasture_from_json(&canon, &Caps::default()).is_ok());
}

#[test]
fn product_with_krasner_returns_the_factor() {
    let dir = tempfile::tempdir().unwrap();
    let sign = write(dir.path(), "s.json", r#"{"group":"Z2","epsilon":[1],"nullset":[[[0],[1]]]}"#);
    let k = write(dir.path(), "k.json", r#"{"group":"Z1","epsilon":[],"nullset":[[[],[]]]}"#);
    let out = json(&["product", "--a", &sign, "--b", &k]);
    assert_eq!(out["verdict"], true);
    assert_eq!(out["is_hyperfield"], true);
    let p = pasture_from_json(&out["product"].to_string(), &Caps::default()).unwrap();
    assert_eq!(p, Pasture::sign());
}

#[test]
fn malformed_or_missing_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    for (i, bad) in [
        r#"{"group":"Z2","epsilon":[1]"#,
        r#"{"group":"Z2","epsilon":[1],"nullset":[],"more":0}"#,
        r#"{"group":"Z2","epsilon":[0,1],"nullset":[]}"#,
        r#"{"group":"Z3","epsilon":[1],"nullset":[]}"#,
        "[]",
    ]
    .iter()
    .enumerate()
    {
        let path = write(dir.path(), &format!("bad{i}.json"), bad);
        for cmd in ["check", "isquotient", "classify"] {
            let o = hexafield(&[cmd, "--pasture", &path]);
            assert_eq!(o.status.code(), Some(1), "{cmd} {bad}");
            assert!(o.stdout.is_empty());
            assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
        }
    }
    let missing = dir.path().join("absent.json");
    assert_eq!(hexafield(&["check", "--pasture", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn usage_and_capacity_exit_codes() {
    assert_eq!(hexafield(&[]).status.code(), Some(64));
    assert_eq!(hexafield(&["census"]).status.code(), Some(64));
    assert_eq!(hexafield(&["--threads", "x", "hexcount", "--group", "Z2"]).status.code(), Some(64));
    assert_eq!(hexafield(&["census", "--group", "Z12"]).status.code(), Some(2));
    assert_eq!(hexafield(&["quotient", "--q", "10", "--index", "3"]).status.code(), Some(1));
    assert_eq!(hexafield(&["quotient", "--q", "9", "--index", "3"]).status.code(), Some(1));
}

#[test]
fn thread_variable_is_honoured_and_harmless() {
    let args = ["--seed", "7", "lottery", "--group", "Z6", "--eps", "3", "--samples", "500", "--event", "hyperfield"];
    let plain = ok(&args);
    let env = Command::new(env!("CARGO_BIN_EXE_hexafield"))
        .args(args)
        .env("HEXAFIELD_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), plain);
    let bad = Command::new(env!("CARGO_BIN_EXE_hexafield"))
        .args(args)
        .env("HEXAFIELD_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn census_csv_agrees_with_the_library() {
    let out = ok(&["census", "--group", "Z4"]);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["group", "epsilon", "nullset", "is_hyperfield", "is_field", "is_4full", "is_00", "automorphisms"]
    );
    let caps = Caps::default();
    let g: hexafield::AbelianGroup = "Z4".parse().unwrap();
    let expected: u64 = g
        .units_of_order_le_2()
        .iter()
        .map(|u| hexafield::lottery::census(&g, u, &caps).unwrap().hyperfields)
        .sum();
    let mut count = 0;
    for r in rows.records() {
        let r = r.unwrap();
        assert_eq!(&r[3], "true");
        count += 1;
    }
    assert_eq!(count, expected);
}

#[test]
fn skew_hexagons_of_s3() {
    let out = json(&["skewhex", "--group", "S3"]);
    assert_eq!(out["orbits"], 5);
    assert_eq!(out["burnside"], 5);
    let sizes: u64 = out["orbit_sizes"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(sizes, 36);
}
