use std::fs;
use std::process::Command;

use flatsol::report::ReportDocument;

fn flatsol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatsol")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn compute_klein_text() {
    let (code, out, _) = flatsol(&["compute", "--endo", "klein9"]);
    assert_eq!(code, 0);
    assert!(out.contains("0: Z[1/3]    raw: Z[1/9]"));
    assert!(out.contains("1: Z[1/3] (+) Z/2"));
}

#[test]
fn json_documents_round_trip() {
    for endo in ["circle2", "circle3", "torus23", "klein9", "o36x125"] {
        let (code, out, _) = flatsol(&["compute", "--endo", endo, "--format", "json"]);
        assert_eq!(code, 0);
        let doc = ReportDocument::from_json(&out).unwrap();
        assert_eq!(doc.to_json(), out, "{endo}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        for key in ["manifold", "degree", "gradeds", "checks"] {
            assert!(v.get(key).is_some(), "{endo} lacks {key}");
        }
    }
}

#[test]
fn periodic_ranges() {
    let (code, out, _) = flatsol(&["periodic", "--endo", "circle2", "--k", "1..=4"]);
    assert_eq!(code, 0);
    for (k, v) in [(1, 1), (2, 3), (3, 7), (4, 15)] {
        assert!(out.contains(&format!("|Per_{k}| = {v} ")), "{out}");
    }
    let (code, _, err) = flatsol(&["periodic", "--endo", "klein9"]);
    assert_eq!(code, 2);
    assert!(err.contains("insufficient data"));
    let (code, _, _) = flatsol(&["periodic", "--endo", "circle2", "--k", "3..1"]);
    assert_eq!(code, 2);
}

#[test]
fn endo_files_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("klein.toml");
    fs::write(&path, "manifold = \"Klein\"\ndegree = 9\ninduced_homology = [[[1]], [[3, 0], [0, 1]], []]\n").unwrap();
    let (code, from_file, _) = flatsol(&["compute", "--endo", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(from_file, flatsol(&["compute", "--endo", "klein9"]).1);

    fs::write(&path, "manifold = \"Klein\"\ndegree = 9\ninduced_homology = [[[2]], [[3, 0], [0, 1]], []]\n").unwrap();
    let (code, _, err) = flatsol(&["compute", "--endo", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid"), "{err}");

    assert_eq!(flatsol(&["compute", "--endo", "nope"]).0, 2);
    assert_eq!(flatsol(&["compute", "--colour", "red"]).0, 2);
    assert_eq!(flatsol(&["show", "--manifold", "nowhere"]).0, 2);
}

#[test]
fn show_and_list() {
    let (code, out, _) = flatsol(&["show", "--manifold", "n3_4"]);
    assert_eq!(code, 0);
    assert!(out.contains("H_1 = Z (+) Z/4"));
    assert!(out.contains("H^2 = Z/4"));
    let (code, out, _) = flatsol(&["list", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["manifolds"].as_array().unwrap().len(), 14);
}
