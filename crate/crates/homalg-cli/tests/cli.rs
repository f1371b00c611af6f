use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn homalg(args: &[&str], inputs: &[&str]) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_homalg"));
    cmd.args(args);
    for i in inputs {
        cmd.arg("--input").arg(fixtures().join(i));
    }
    let o = cmd.output().expect("binary runs");
    Out {
        code: o.status.code().expect("exit code"),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

/// The report without the fields that legitimately vary between runs.
fn body(stdout: &str) -> Value {
    let mut v: Value = serde_json::from_str(stdout).expect("report is JSON");
    let o = v.as_object_mut().unwrap();
    assert!(o.remove("timings").is_some());
    assert!(o.remove("sources").is_some());
    v
}

fn cases() -> Vec<Value> {
    let text = std::fs::read_to_string(fixtures().join("cases.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn strs(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect()
}

/// Runs every case whose name satisfies `select` against its golden report.
/// `HOMALG_BLESS=1` rewrites the golden files instead.
fn run_cases(select: impl Fn(&str) -> bool) {
    let bless = std::env::var_os("HOMALG_BLESS").is_some();
    let mut ran = 0;
    for c in cases() {
        let name = c["name"].as_str().unwrap();
        if !select(name) {
            continue;
        }
        let out = homalg(&strs(&c["args"]), &strs(&c["inputs"]));
        assert_eq!(out.code as i64, c["exit"].as_i64().unwrap(), "{name}: exit code\n{}", out.stderr);
        let got = body(&out.stdout);
        let mut unhashed = got.clone();
        let hash = unhashed.as_object_mut().unwrap().remove("determinism_hash").unwrap();
        assert_eq!(hash.as_str().unwrap(), homalg_cli::determinism_hash(&unhashed), "{name}: hash covers the body");
        let golden = fixtures().join("golden").join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
            std::fs::write(&golden, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        } else {
            let want: Value = serde_json::from_str(&std::fs::read_to_string(&golden).unwrap_or_else(|_| panic!("{name}: missing golden"))).unwrap();
            assert_eq!(got, want, "{name}: report differs from golden");
        }
        ran += 1;
    }
    assert!(ran > 0);
}

#[test]
fn compute_goldens() {
    run_cases(|n| cases().iter().any(|c| c["name"] == n && strs(&c["args"])[0] == "compute"));
}

#[test]
fn verify_goldens() {
    run_cases(|n| !n.starts_with("mutant-") && cases().iter().any(|c| c["name"] == n && strs(&c["args"])[0] == "verify"));
}

#[test]
fn mutation_goldens() {
    run_cases(|n| n.starts_with("mutant-"));
}

fn dims(args: &[&str], inputs: &[&str]) -> Vec<u64> {
    let out = homalg(args, inputs);
    assert_eq!(out.code, 0, "{}", out.stderr);
    body(&out.stdout)["results"]["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect()
}

#[test]
fn dimension_anchors() {
    assert_eq!(dims(&["compute", "--theory", "group"], &["z2_f2.json"]), [1, 1, 1, 1, 1]);
    assert_eq!(dims(&["compute", "--theory", "engine"], &["z2_f2.json"]), [1, 1, 1, 1, 1]);
    assert_eq!(dims(&["compute", "--theory", "group"], &["z3_q.json"]), [1, 0, 0, 0, 0]);
    assert_eq!(dims(&["compute", "--theory", "cech", "--window", "2"], &["circle.json"]), [1, 1, 0]);
    assert_eq!(dims(&["compute", "--theory", "cech", "--window", "3"], &["torus.json"]), [1, 2, 1, 0]);
    assert_eq!(dims(&["compute", "--theory", "lie", "--window", "2"], &["abelian2.json"]), [1, 2, 1]);
    assert_eq!(dims(&["compute", "--theory", "lie", "--window", "4"], &["heisenberg.json"]), [1, 2, 2, 1, 0]);
}

#[test]
fn polynomial_ring_on_z2() {
    let out = homalg(&["compute", "--theory", "group", "--ring"], &["z2_f2.json"]);
    let ring = body(&out.stdout)["results"]["ring"].as_array().unwrap().clone();
    assert_eq!(ring.len(), 15);
    assert!(ring.iter().all(|e| strs(&e["product"]) == ["1"]));
}

#[test]
fn torus_pairing_is_alternating() {
    let out = homalg(&["compute", "--theory", "cech", "--window", "2", "--ring"], &["torus.json"]);
    let ring = body(&out.stdout)["results"]["ring"].as_array().unwrap().clone();
    let mut g = [[0i64; 2]; 2];
    for e in ring.iter().filter(|e| e["left"][0] == 1 && e["right"][0] == 1) {
        let (i, j) = (e["left"][1].as_u64().unwrap() as usize, e["right"][1].as_u64().unwrap() as usize);
        g[i][j] = strs(&e["product"])[0].parse().unwrap();
    }
    assert_eq!((g[0][0], g[1][1]), (0, 0));
    assert_eq!(g[0][1], -g[1][0]);
    assert_ne!(g[0][1], 0);
}

#[test]
fn refutations_carry_counterexamples() {
    for c in cases().iter().filter(|c| c["exit"] == 1) {
        let out = homalg(&strs(&c["args"]), &strs(&c["inputs"]));
        let b = body(&out.stdout);
        assert_eq!(b["verification"]["status"], "fail");
        assert!(b["verification"]["reports"].as_array().unwrap().iter().any(|r| r.get("counterexample").is_some()), "{}", c["name"]);
    }
}

#[test]
fn hash_ignores_file_layout() {
    let dir = std::env::temp_dir().join(format!("homalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let merged = dir.join("s3.json");
    std::fs::write(&merged, r#"{"group": "S3", "module": "sign-f2"}"#).unwrap();
    let split = homalg(&["compute", "--theory", "group", "--window", "2"], &["s3_group.json", "s3_f2_module.json"]);
    let one = homalg(&["compute", "--theory", "group", "--window", "2"], &[merged.to_str().unwrap()]);
    let again = homalg(&["compute", "--theory", "group", "--window", "2"], &[merged.to_str().unwrap()]);
    assert_eq!(body(&split.stdout), body(&one.stdout));
    assert_eq!(body(&one.stdout), body(&again.stdout));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn input_errors_exit_three() {
    let bad: &[(&[&str], &[&str])] = &[
        (&["compute", "--theory", "group", "--field", "Q"], &["z2_f2.json"]),
        (&["verify", "--theory", "group", "--check", "no-such-check"], &["z2_f2.json"]),
        (&["verify", "--theory", "cech", "--check", "sign-lemma"], &["circle.json"]),
        (&["verify", "--theory", "group"], &["z2_f2.json", "mutations/negate-koszul-d1.json"]),
        (&["verify", "--theory", "group", "--check", "sign-lemma"], &["z3_f3.json", "mutations/flip-cup-sign.json"]),
        (&["compute", "--theory", "group"], &["z2_f2.json", "z3_f3.json"]),
        (&["compute", "--theory", "lie"], &["z2_f2.json"]),
        (&["compute", "--theory", "group"], &["does-not-exist.json"]),
    ];
    for (args, inputs) in bad {
        let out = homalg(args, inputs);
        assert_eq!(out.code, 3, "{args:?} {inputs:?}: {}", out.stdout);
        assert!(out.stderr.starts_with("error: "), "{}", out.stderr);
    }
}

#[test]
fn field_flag_agrees_or_fills_in() {
    assert_eq!(dims(&["compute", "--theory", "group", "--field", "Fp:2"], &["z2_f2.json"]), [1, 1, 1, 1, 1]);
    assert_eq!(dims(&["compute", "--theory", "group", "--field", "Fp:3", "--window", "2"], &["z3_q.json"]), [1, 1, 1]);
}

#[test]
fn text_summary() {
    let out = homalg(&["compute", "--theory", "cech", "--window", "2", "--text"], &["circle.json"]);
    assert!(out.stdout.contains("H^1: 1"), "{}", out.stdout);
    let out = homalg(&["verify", "--theory", "lie", "--text"], &["sl2_relative_h.json"]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("hypothesis fails: absolute case"), "{}", out.stdout);
}
