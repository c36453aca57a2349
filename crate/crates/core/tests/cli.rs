use serde_json::Value;

use starfree::cli::{run, Outcome};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("starfree").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("starfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

const PARITY: &str = "classes: 2\nidentity: 0\nletter a -> 1\nmult 0 0 -> 0\nmult 0 1 -> 1\nmult 1 0 -> 1\nmult 1 1 -> 0\n";

#[test]
fn member_examples() {
    assert_eq!(cli(&["member", "(aa)*", "--base", "mod"]).code, 0);
    assert_eq!(cli(&["member", "(aa)*", "--base", "triv"]).code, 1);
    assert_eq!(cli(&["member", "(ab)*"]).code, 0);
    let (code, v) = json(&["member", "(aa)*", "--base", "triv"]);
    assert_eq!(code, 1);
    assert_eq!(v["member"], false);
    assert!(v["violation"].is_object());
}

#[test]
fn separate_examples() {
    let out = cli(&["separate", "(aa)*", "a(aa)*", "--base", "triv"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("bad"), "{}", out.stdout);
    let (code, v) = json(&["separate", "(aa)*", "a(aa)*", "--base", "mod"]);
    assert_eq!(code, 0);
    assert_eq!(v["coverable"], true);
    assert!(v["separator"].is_string());
    let (_, v) = json(&["separate", "(aa)*", "a(aa)*", "--base", "triv"]);
    assert_eq!(v["verdict"]["bad_element"]["names"], serde_json::json!(["ε", "a"]));
}

#[test]
fn cover_and_stutters() {
    assert_eq!(cli(&["cover", "(aa)*", "a(aa)*", "aa*", "--base", "triv"]).code, 1);
    assert_eq!(cli(&["cover", "(aa)*", "a(aa)*", "a", "--base", "triv"]).code, 0);
    assert_eq!(cli(&["cover", "(aa)*", "a(aa)*", "0", "--base", "triv"]).code, 0);
    assert_eq!(cli(&["cover", "(aa)*"]).code, 2);
    assert_eq!(cli(&["stutters", "(aa)*", "--base", "mod"]).code, 0);
    assert_eq!(cli(&["stutters", "(aa)*", "--base", "triv"]).code, 1);
    let (_, v) = json(&["stutters", "(aa)*", "--base", "mod"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
}

#[test]
fn finite_base_file() {
    let base = scratch("parity.cls", PARITY);
    let flag = format!("finite:{base}");
    assert_eq!(cli(&["member", "(aa)*", "--base", &flag]).code, 0);
    let out = cli(&["synthesize", &base, "0", "--base", &flag]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("expression"));
}

#[test]
fn check_sd_examples() {
    let base = scratch("parity2.cls", PARITY);
    let flag = format!("finite:{base}");
    let out = cli(&["check-sd", "({aa})*10", "--base", &flag]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("sync-delay"), "{}", out.stdout);
    let expr = scratch("ok.sd", "({a})*1 ^ {0}\n");
    let (code, v) = json(&["check-sd", &expr, "--base", &flag]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(cli(&["check-sd", "a | a", "--base", &flag]).code, 1);
    assert_eq!(cli(&["check-sd", "(a", "--base", &flag]).code, 2);
}

#[test]
fn synthesize_from_language() {
    let (code, v) = json(&["synthesize", "(ab)*", "accept"]);
    assert_eq!(code, 0);
    assert_eq!(v["measure_decreases"], true);
    assert!(v["expression"].as_str().unwrap().contains("ba"));
    assert_eq!(cli(&["synthesize", "(aa)*", "accept"]).code, 2);
}

#[test]
fn oracle_subcommands() {
    assert_eq!(cli(&["oracle", "aperiodic", "(ab)*"]).code, 0);
    assert_eq!(cli(&["oracle", "aperiodic", "(aa)*"]).code, 1);
    assert_eq!(cli(&["oracle", "mod-eps", "a(aa)*"]).code, 0);
    assert_eq!(cli(&["oracle", "mod-eps", "(aa)*"]).code, 1);
    assert_eq!(cli(&["oracle", "separator", "(aa)*", "(aa)*", "a(aa)*"]).code, 0);
    assert_eq!(cli(&["oracle", "separator", "0", "(aa)*", "a(aa)*"]).code, 1);
    let out = cli(&["oracle", "corpus", "--seed", "7", "--count", "15"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("agreement: yes"));
}

#[test]
fn errors_and_determinism() {
    assert_eq!(cli(&["member", "(a"]).code, 2);
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["member", "(aa)*", "--base", "nope"]).code, 2);
    assert_eq!(cli(&["separate", "(ab)*", "b", "--base", "triv", "--budget", "2"]).code, 2);
    let a = cli(&["separate", "(ab)*+b", "a(ab)*", "--seed", "3", "--json"]);
    let b = cli(&["separate", "(ab)*+b", "a(ab)*", "--seed", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
