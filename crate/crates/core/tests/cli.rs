use std::process::Command;

use addcubic::cli::Report;
use addcubic::localalg::{chain_algebra_products, AlgebraDocument, AlgebraPair};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_addcubic")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn report(args: &[&str]) -> (i32, Report) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, _) = run(&a);
    (code, serde_json::from_str(&out).unwrap())
}

const EX2: &str = "x0^2*y0 + x0*x1*y1 + x1^3";

#[test]
fn decide_exit_codes() {
    let (code, r) = report(&["decide", EX2]);
    assert_eq!((code, r.verdict.as_str(), r.unique), (0, "admits", Some(true)));
    let (code, r) = report(&["decide", "x0^3 + x1^3 + x2^3 + x3^3"]);
    assert_eq!((code, r.verdict.as_str(), r.reason.as_deref()), (0, "no", Some("NoRankOnePoint")));
    let (code, _, err) = run(&["decide", "x0^2 + x1^2"]);
    assert_eq!(code, 2);
    assert!(err.contains("degree 3"));
    assert_eq!(run(&["decide"]).0, 2);
}

#[test]
fn scramble_agrees_with_plain() {
    for input in [EX2, "x0^2*y0 + x0*x1^2", "x0^3 + x1*x2*x3", "x0^2*y0 + x0*x1*y1 + x0*x2^2 + x2^3"] {
        let (_, plain) = report(&["decide", input]);
        for seed in ["1", "2", "3"] {
            let (_, scr) = report(&["decide", input, "--scramble", seed]);
            assert_eq!((plain.verdict.as_str(), plain.k, plain.s), (scr.verdict.as_str(), scr.k, scr.s), "{input} seed {seed}");
        }
    }
}

#[test]
fn json_keys_are_stable() {
    let (_, out, _) = run(&["normalize", EX2, "--vars", "x0,x1,y1,y0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["tool", "version", "command", "input", "verdict", "n", "k", "s", "unique", "certificate", "checks", "timings"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    let cert = &v["certificate"];
    assert_eq!(cert["scalar"], "1");
    assert!(cert["transform"][0].as_array().unwrap().iter().all(|x| x.is_string()));
}

#[test]
fn algebra_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = run(&["algebra", EX2, "--vars", "x0,x1,y1,y2,y0", "--scramble", "5", "--json"]);
    assert_eq!(code, 0);
    std::fs::write(&path, &out).unwrap();
    let (code, r) = report(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{:?}", r.checks);
    assert!(r.checks.len() > 20);

    let mut tampered: Report = serde_json::from_str(&out).unwrap();
    tampered.certificate.as_mut().unwrap().normal_form = "x0^2*y0 + x0*x1*y1 + 2*x1^3".into();
    std::fs::write(&path, serde_json::to_string(&tampered).unwrap()).unwrap();
    let (code, r) = report(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r.checks.get("certificate"), Some(&false));
}

#[test]
fn from_algebra_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alg.json");
    let pair = AlgebraPair::from_table(chain_algebra_products(4)).unwrap();
    std::fs::write(&path, serde_json::to_string(&AlgebraDocument::from_pair(&pair)).unwrap()).unwrap();
    let (code, r) = report(&["from-algebra", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.verdict, "admits");
    assert!(r.checks.values().all(|&b| b));
    assert_eq!(r.algebras[0].hilbert_profile, vec![1, 1, 1]);

    let truncated = AlgebraPair::from_table(chain_algebra_products(3)).unwrap();
    std::fs::write(&path, serde_json::to_string(&AlgebraDocument::from_pair(&truncated)).unwrap()).unwrap();
    let (code, r) = report(&["from-algebra", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r.error.unwrap().contains("b0_in_m3"));
    std::fs::write(&path, "{").unwrap();
    assert_eq!(run(&["from-algebra", path.to_str().unwrap()]).0, 2);
}

#[test]
fn action_output() {
    let (code, r) = report(&["action", EX2, "--vars", "x0,x1,y1,y0"]);
    assert_eq!(code, 0);
    let act = r.action.unwrap();
    assert_eq!(act.params, ["t1", "t2"]);
    assert_eq!(act.matrix[3][0], "1/2*t1^3 - t1*t2");
    assert!(r.checks.values().all(|&b| b));
}
