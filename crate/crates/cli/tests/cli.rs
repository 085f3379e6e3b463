use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn certilab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certilab"))
        .args(args)
        .current_dir(dir)
        .env_remove("CERTILAB_CAP")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_shapes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&certilab(&["generate", "path", "--n", "10", "--out", "p.json"], d)), 0);
    assert_eq!(json_file(&d.join("p.json"))["nodes"].as_array().unwrap().len(), 10);
    let out = certilab(
        &["generate", "dumbbell", "--base", "triangle", "--k", "1", "--variant", "symmetric", "--out", "d.json"],
        d,
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json_file(&d.join("d.json"))["nodes"].as_array().unwrap().len(), 9);
    for name in ["w1.json", "w2.json"] {
        let args = ["generate", "weighted", "--n", "6", "--m", "8", "--w", "10", "--seed", "7", "--out", name];
        assert_eq!(code(&certilab(&args, d)), 0);
    }
    assert_eq!(std::fs::read(d.join("w1.json")).unwrap(), std::fs::read(d.join("w2.json")).unwrap());
}

#[test]
fn prove_verify_round_trip_for_every_catalog_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let list = certilab(&["list"], d);
    let schemes: Value = serde_json::from_slice(&list.stdout).unwrap();
    let names: Vec<String> = schemes
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.len() >= 11);
    for name in names {
        let gen = certilab(&["generate", "yes", "--scheme", &name, "--n", "9", "--seed", "3", "--out", "i.json"], d);
        assert_eq!(code(&gen), 0, "{name}: {}", String::from_utf8_lossy(&gen.stderr));
        let prove = certilab(&["prove", "--scheme", &name, "--instance", "i.json", "--out", "c.json"], d);
        assert_eq!(code(&prove), 0, "{name}: {}", String::from_utf8_lossy(&prove.stderr));
        let verify = certilab(&["verify", "--scheme", &name, "--instance", "i.json", "--certs", "c.json"], d);
        assert_eq!(code(&verify), 0, "{name}");
        let verdict: Value = serde_json::from_slice(&verify.stdout).unwrap();
        assert_eq!(verdict["global"], "accept");
    }
}

#[test]
fn flipped_bit_is_rejected_and_no_instance_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    certilab(&["generate", "yes", "--scheme", "spanning-tree", "--n", "8", "--out", "t.json"], d);
    certilab(&["prove", "--scheme", "spanning-tree", "--instance", "t.json", "--out", "c.json"], d);
    let mut doc = json_file(&d.join("c.json"));
    let certs = doc["certificates"].as_object_mut().unwrap();
    let (_, first) = certs.iter_mut().next().unwrap();
    let text = first.as_str().unwrap().to_string();
    let (len, hex) = text.split_once(':').unwrap();
    let flipped = u64::from_str_radix(hex, 16).unwrap() ^ (1 << (hex.len() * 4 - 1));
    *first = Value::String(format!("{len}:{flipped:0width$x}", width = hex.len()));
    std::fs::write(d.join("bad.json"), doc.to_string()).unwrap();
    let out = certilab(&["verify", "--scheme", "spanning-tree", "--instance", "t.json", "--certs", "bad.json"], d);
    assert_eq!(code(&out), 1);
    let verdict: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(verdict["global"], "reject");

    certilab(&["generate", "cycle", "--n", "5", "--out", "c5.json"], d);
    let out = certilab(&["prove", "--scheme", "path", "--instance", "c5.json", "--out", "never.json"], d);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a path"));
    assert!(!d.join("never.json").exists());
}

#[test]
fn empty_certificates_pass_proper_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    certilab(&["generate", "yes", "--scheme", "proper-coloring:3", "--n", "12", "--out", "g.json"], d);
    let nodes = json_file(&d.join("g.json"))["nodes"].as_array().unwrap().clone();
    let certs: serde_json::Map<String, Value> = nodes
        .iter()
        .map(|n| (n["id"].to_string(), Value::String("0:".into())))
        .collect();
    std::fs::write(d.join("e.json"), serde_json::json!({ "certificates": certs }).to_string()).unwrap();
    let out = certilab(&["verify", "--scheme", "proper-coloring:3", "--instance", "g.json", "--certs", "e.json"], d);
    assert_eq!(code(&out), 0);
}

#[test]
fn falsify_exit_codes_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    certilab(&["generate", "cycle", "--n", "4", "--out", "c4.json"], d);
    let out = certilab(&["falsify", "--scheme", "path", "--instance", "c4.json", "--bits", "3"], d);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "sound-up-to-budget");
    assert_eq!(report["assignments_tested"], 50625);

    let out = certilab(&["falsify", "--scheme", "degree2", "--instance", "c4.json", "--bits", "1"], d);
    assert_eq!(code(&out), 1);

    let out = certilab(&["falsify", "--scheme", "path", "--instance", "c4.json", "--bits", "3", "--cap", "100"], d);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let env_cap = Command::new(env!("CARGO_BIN_EXE_certilab"))
        .args(["falsify", "--scheme", "path", "--instance", "c4.json", "--bits", "3"])
        .current_dir(d)
        .env("CERTILAB_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&env_cap), 2);

    certilab(&["generate", "yes", "--scheme", "mst", "--n", "7", "--out", "m.json"], d);
    let out = certilab(&["falsify", "--scheme", "mst", "--instance", "m.json", "--mutations"], d);
    assert_eq!(code(&out), 0);
}

#[test]
fn attacks_report_fooled_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = certilab(
        &["attack", "crossing", "--scheme", "const1bit", "--n", "24", "--out", "fooled.json", "--certs-out", "fc.json"],
        d,
    );
    assert_eq!(code(&out), 1);
    let verify = certilab(&["verify", "--scheme", "const1bit", "--instance", "fooled.json", "--certs", "fc.json"], d);
    assert_eq!(code(&verify), 0);
    let prove = certilab(&["prove", "--scheme", "const1bit", "--instance", "fooled.json"], d);
    assert_eq!(code(&prove), 1, "the fooled instance is not a path");

    let out = certilab(&["attack", "crossing", "--scheme", "path", "--n", "200"], d);
    assert_eq!(code(&out), 0);
    let out = certilab(&["attack", "cut-and-plug", "--scheme", "const1bit", "--n", "9"], d);
    assert_eq!(code(&out), 1);
    let out = certilab(&["attack", "cut-and-plug", "--scheme", "path", "--n", "30", "--paths", "3"], d);
    assert_eq!(code(&out), 0);
}

#[test]
fn random_decide_and_bench_size() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    certilab(&["generate", "path", "--n", "6", "--out", "p.json"], d);
    let out = certilab(&["random-decide", "--instance", "p.json", "--trials", "1000"], d);
    assert_eq!(code(&out), 0);
    let stats: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["accept_frequency"], 1.0);
    assert_eq!(stats["class"], "zero-ones");
    let out = certilab(&["random-decide", "--instance", "p.json", "--p", "1.5"], d);
    assert_eq!(code(&out), 2);

    let out = certilab(&["bench-size", "spanning-tree"], d);
    assert_eq!(code(&out), 0);
    let series: Value = serde_json::from_slice(&out.stdout).unwrap();
    for point in series["series"].as_array().unwrap() {
        let n = point["n"].as_u64().unwrap();
        let bound = point["id_bits"].as_u64().unwrap() + (64 - (n - 1).leading_zeros()) as u64;
        assert!(point["max_bits"].as_u64().unwrap() <= bound);
    }
    let out = certilab(&["bench-size", "universal", "--predicate", "cycle", "--sizes", "10,20"], d);
    let series: Value = serde_json::from_slice(&out.stdout).unwrap();
    for point in series["series"].as_array().unwrap() {
        let n = point["n"].as_u64().unwrap();
        assert!(point["max_bits"].as_u64().unwrap() >= n * n);
    }
}

#[test]
fn usage_faults_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&certilab(&["prove", "--scheme", "nonsense", "--instance", "x.json"], d)), 2);
    std::fs::write(d.join("junk.json"), "{not json").unwrap();
    assert_eq!(code(&certilab(&["prove", "--scheme", "path", "--instance", "junk.json"], d)), 2);
    assert_eq!(code(&certilab(&["frobnicate"], d)), 2);
    certilab(&["generate", "path", "--n", "3", "--out", "p.json"], d);
    std::fs::write(d.join("c.json"), r#"{"certificates":{"1":"0:"}}"#).unwrap();
    let out = certilab(&["verify", "--scheme", "path", "--instance", "p.json", "--certs", "c.json", "--model", "lcp:0"], d);
    assert_eq!(code(&out), 2);
    let out = certilab(&["verify", "--scheme", "path", "--instance", "p.json", "--certs", "c.json"], d);
    assert_eq!(code(&out), 2, "missing certificates are a fault");
}
