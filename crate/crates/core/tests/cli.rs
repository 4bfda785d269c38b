use std::path::Path;
use std::process::Command;

use lmrd_core::cli::{self, codefile};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut all = vec!["lmrd"];
    all.extend_from_slice(args);
    let code = cli::run(all, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn bound_examples() {
    let (code, out, _) = run(&["bound", "-q2", "-v10", "-d6", "-k5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("A_2(10,6;5) ≤ 32923"), "{out}");
    assert!(out.contains("LMRD plus S_t caps"));

    let (code, out, _) = run(&["--json", "bound", "-q2", "-v11", "-d6", "-k4"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "16765");
    assert_eq!(v["sub_resolutions"][0]["rule"]["name"], "prop1");

    let (code, _, err) = run(&[
        "bound", "-q2", "-v10", "-d4", "-k5", "--rule", "prop2", "--c", "9",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("c ≤ min{k−d/2,d/2} violated"), "{err}");

    let (code, _, err) = run(&["bound", "-q6", "-v10", "-d4", "-k5"]);
    assert_eq!(code, 2);
    assert!(err.contains("prime power"));
    assert_eq!(run(&["bound", "-q2"]).0, 2);
}

#[test]
fn construct_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f6 = dir.path().join("f6.cdc");
    let (code, out, _) = run(&["construct", "family6l", "-q2", "-l1", "-o", p(&f6)]);
    assert_eq!(code, 0, "{out}");
    let file = codefile::read(&f6).unwrap();
    assert_eq!(file.code.len(), 71);
    assert_eq!(file.code.claimed_d(), 4);
    let text = std::fs::read_to_string(&f6).unwrap();
    assert_eq!(codefile::serialize(&file.code), text);

    let gz = dir.path().join("f63.cdc.gz");
    assert_eq!(
        run(&["construct", "family63l", "-q2", "-l1", "-o", p(&gz)]).0,
        0
    );
    let (code, out, _) = run(&["--json", "verify", p(&gz)]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["size"], 1033);
    assert_eq!(v["verification"]["min_distance"], 6);

    let (code, out, _) = run(&["--json", "verify", p(&f6), "--expect-d", "6"]);
    assert_eq!(code, 1);
    let records: Vec<serde_json::Value> = serde_json::Deserializer::from_str(&out)
        .into_iter()
        .collect::<Result<_, _>>()
        .unwrap();
    assert_eq!(records[0]["ok"], false);
    assert_eq!(records[1]["exit_code"], 1);
}

#[test]
fn construct_refuses_and_reports() {
    let (code, out, _) = run(&["construct", "lmrd", "-q2", "-v6", "-d4", "-k3"]);
    assert_eq!(code, 0);
    let parsed = codefile::parse(&out).unwrap();
    assert_eq!(parsed.code.len(), 64);
    // pivot vectors at Hamming distance 2 cap the claim at 2
    let (code, out, _) = run(&[
        "--json",
        "construct",
        "echelon-ferrers",
        "--skeleton",
        "111000,110100",
        "--delta",
        "2",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["d"], 2);
    assert_eq!(
        run(&["construct", "echelon-ferrers", "--skeleton", "1110,11"]).0,
        2
    );
    assert_eq!(run(&["construct", "lmrd", "-q2", "-v6", "-d5", "-k3"]).0, 2);
}

#[test]
fn verify_reports_parse_problems() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.cdc");
    std::fs::write(
        &dup,
        "cdc q=2 v=4 k=2 d=4 count=2\n\n1000\n0100\n\n1100\n0100\n",
    )
    .unwrap();
    let (code, _, err) = run(&["verify", p(&dup)]);
    assert_eq!(code, 2);
    assert!(err.contains("dedup"), "{err}");
    assert!(err.contains("count=2"), "{err}");

    let bad = dir.path().join("bad.cdc");
    std::fs::write(&bad, "cdc q=2 v=4 k=2 d=4 count=1\n\n1000\n0120\n").unwrap();
    let (code, _, err) = run(&["verify", p(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");

    let close = dir.path().join("close.cdc");
    std::fs::write(
        &close,
        "cdc q=2 v=4 k=2 d=4 count=2\n\n1000\n0100\n\n1000\n0010\n",
    )
    .unwrap();
    let (code, out, _) = run(&["verify", p(&close)]);
    assert_eq!(code, 1);
    assert!(out.contains("witness pair 0, 1"), "{out}");
}

#[test]
fn search_is_deterministic_and_handles_empty_subcode() {
    let dir = tempfile::tempdir().unwrap();
    let sub = dir.path().join("gamma-2.cdc");
    assert_eq!(
        run(&[
            "construct",
            "grassmannian",
            "-q2",
            "-v4",
            "-k2",
            "-o",
            p(&sub)
        ])
        .0,
        0
    );
    let a = dir.path().join("a.cdc");
    let b = dir.path().join("b.cdc");
    for out in [&a, &b] {
        let (code, text, _) = run(&[
            "search",
            "-q2",
            "-v8",
            "-d4",
            "-k4",
            "--subcode",
            p(&sub),
            "--n-max",
            "3",
            "--r-max",
            "20",
            "--seed",
            "42",
            "-o",
            p(out),
        ]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("restart 2:"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run(&["verify", p(&a)]).0, 0);

    let (code, _, err) = run(&["search", "-q2", "-v8", "-d4", "-k4", "--subcode", p(&sub)]);
    assert_eq!(code, 0);
    assert!(err.contains("seed: "));

    let empty = dir.path().join("empty.cdc");
    std::fs::write(&empty, "cdc q=2 v=4 k=2 d=4 count=0\n").unwrap();
    let out = dir.path().join("pure.cdc");
    assert_eq!(
        run(&[
            "search",
            "-q2",
            "-v8",
            "-d4",
            "-k4",
            "--subcode",
            p(&empty),
            "--seed",
            "1",
            "-o",
            p(&out)
        ])
        .0,
        0
    );
    assert_eq!(codefile::read(&out).unwrap().code.len(), 1 << 12);

    // k < d: one codeword per subcode element at most
    let one = dir.path().join("one.cdc");
    std::fs::write(&one, "cdc q=2 v=4 k=3 d=6 count=1\n\n1000\n0100\n0010\n").unwrap();
    let (code, text, _) = run(&[
        "--json",
        "search",
        "-q2",
        "-v7",
        "-d6",
        "-k3",
        "--subcode",
        p(&one),
        "--seed",
        "3",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["extension"], 1);
    assert_eq!(v["size"], 17);

    let wrong = dir.path().join("wrong.cdc");
    std::fs::write(&wrong, "cdc q=2 v=4 k=1 d=2 count=1\n\n1000\n").unwrap();
    assert_eq!(
        run(&[
            "search",
            "-q2",
            "-v8",
            "-d4",
            "-k4",
            "--subcode",
            p(&wrong),
            "--seed",
            "1"
        ])
        .0,
        2
    );
}

#[test]
fn orbits_identity_and_bad_generators() {
    let dir = tempfile::tempdir().unwrap();
    let id = dir.path().join("id.txt");
    std::fs::write(
        &id,
        "# identity\n100000\n010000\n001000\n000100\n000010\n000001\n",
    )
    .unwrap();
    let (code, out, _) = run(&[
        "--json",
        "orbits",
        "-q2",
        "-v6",
        "-k3",
        "-t2",
        "--generator",
        p(&id),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stats"]["universe"], v["stats"]["orbits"]);

    let sing = dir.path().join("sing.txt");
    std::fs::write(&sing, "100000\n100000\n001000\n000100\n000010\n000001\n").unwrap();
    assert_eq!(
        run(&[
            "orbits",
            "-q2",
            "-v6",
            "-k3",
            "-t2",
            "--generator",
            p(&sing)
        ])
        .0,
        2
    );
    assert_eq!(run(&["orbits", "-q2", "-v6", "-k3", "-t2"]).0, 2);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_lmrd");
    let ok = Command::new(exe)
        .args(["bound", "-q2", "-v7", "-d6", "-k3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("≤ 17"));
    let bad = Command::new(exe)
        .args([
            "bound", "-q2", "-v10", "-d4", "-k5", "--rule", "prop2", "--c", "9",
        ])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(exe).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
