//! End-to-end checks of the command surface: exit-code triage, grammar
//! errors, JSON round trips, and byte-level determinism.

use std::process::Command;

use smallknot::cert::{replay, SmallKnotCertificate, Verdict};

fn run(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("smallknot".to_string()).chain(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = smallknot_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn cf_eval_prints_the_exact_value() {
    let (code, out, _) = run(&["cf", "eval", "2,4,-2"]);
    assert_eq!((code, out.as_str()), (0, "16/7\n"));

    let (code, out, _) = run(&["cf", "eval", "5"]);
    assert_eq!((code, out.as_str()), (0, "5/1\n"));

    let (code, out, _) = run(&["cf", "eval", "5,1,-1"]);
    assert_eq!((code, out.as_str()), (0, "inf\n"));
}

#[test]
fn cf_simple_round_trips_through_eval() {
    let (code, out, _) = run(&["cf", "simple", "16/7"]);
    assert_eq!((code, out.as_str()), (0, "2,3,2\n"));

    let (code, out, _) = run(&["cf", "simple", "8/3"]);
    assert_eq!((code, out.as_str()), (0, "2,1,2\n"));

    let (code, eval_out, _) = run(&["cf", "eval", out.trim()]);
    assert_eq!((code, eval_out.as_str()), (0, "8/3\n"));

    let (code, _, err) = run(&["cf", "simple", "-3/2"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "stderr was: {err}");
}

#[test]
fn parse_errors_carry_positions_and_exit_2() {
    let (code, out, err) = run(&["cf", "eval", "2,0,3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("byte 2"), "stderr was: {err}");

    let (code, _, err) = run(&["check-pair", "--k", "2", "--pair", "(inf,-5"]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"), "stderr was: {err}");

    let (code, _, err) = run(&["table", "--k", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("k >= 1"), "stderr was: {err}");
}

#[test]
fn link_equiv_exit_codes_follow_the_verdict() {
    assert_eq!(run(&["link", "equiv", "2,6,-2", "2,5,2"]).0, 0);
    assert_eq!(run(&["link", "equiv", "3,2", "2,3"]).0, 1);
    assert_eq!(run(&["link", "equiv", "3,2", "2,3", "--mirror"]).0, 0);
    assert_eq!(run(&["link", "equiv", "3,3", "2,4,-2"]).0, 1);
}

#[test]
fn check_pair_member_and_non_member() {
    let (code, out, _) = run(&["check-pair", "--k", "2", "--pair", "(inf,0)"]);
    assert_eq!(code, 0);
    assert!(out.contains("(2/t,2t)"), "output was: {out}");
    assert!(out.contains("0/1"), "output was: {out}");

    let (code, out, _) = run(&["check-pair", "--k", "2", "--pair", "(inf,-5/1)"]);
    assert_eq!(code, 1);
    assert_eq!(out, "non-member\n");

    let (_, out, _) = run(&["check-pair", "--k", "2", "--pair", "(inf,-5/1)", "--trace"]);
    assert!(out.lines().count() > 10, "trace missing: {out}");

    // Both orders by default; --ordered restricts to the written order.
    assert_eq!(run(&["check-pair", "--k", "3", "--pair", "(-12,empty)"]).0, 0);
    assert_eq!(run(&["check-pair", "--k", "3", "--pair", "(empty,-12)"]).0, 0);
}

#[test]
fn certify_lens_triage() {
    let (code, out, _) = run(&["certify", "lens", "--p", "5", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: certified"));
    assert!(out.contains("b(16, 7)"), "defaults to k = 2: {out}");

    let (code, out, _) = run(&["certify", "lens", "--p", "8", "--q", "1", "--k", "2"]);
    assert_eq!(code, 2);
    assert!(out.contains("verdict: invalid"));
    assert!(out.contains("4k"));

    // Without --k the first admissible index (3, since 8 = 4*2*1) is used.
    let (code, out, _) = run(&["certify", "lens", "--p", "8", "--q", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("b(24, 11)"), "output was: {out}");

    let (code, _, _) = run(&["certify", "lens", "--p", "7", "--q", "2", "--k", "1"]);
    assert_eq!(code, 2);

    let (code, out, _) = run(&["certify", "lens", "--p", "5", "--q", "-3"]);
    assert_eq!(code, 0);
    assert!(out.contains("5/3-filling"), "sign folds into the slope: {out}");
}

#[test]
fn certify_spherical_triage() {
    let (code, out, _) = run(&["certify", "spherical", "--a3", "2", "--b3", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: certified"));

    let (code, _, err) = run(&["certify", "spherical", "--a3", "1", "--b3", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("excluded case"), "stderr was: {err}");
    assert!(err.contains("1/3"), "names the excluded family: {err}");

    let (code, _, err) = run(&["certify", "spherical", "--a3", "2", "--b3", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("coprime"), "stderr was: {err}");
}

#[test]
fn certificate_json_round_trips_through_replay() {
    for args in [
        vec!["certify", "lens", "--p", "7", "--q", "-2", "--k", "4", "--json"],
        vec!["certify", "spherical", "--a3", "-3", "--b3", "4", "--json"],
    ] {
        let (code, out, _) = run(&args);
        assert_eq!(code, 0);
        let cert: SmallKnotCertificate = serde_json::from_str(&out).unwrap();
        assert_eq!(cert.verdict(), Verdict::Certified);
        let replayed = replay(&cert).unwrap();
        assert_eq!(replayed, cert);
    }
}

#[test]
fn json_mode_emits_one_document() {
    for args in [
        vec!["cf", "eval", "2,4,-2", "--json"],
        vec!["table", "--k", "2", "--json"],
        vec!["check-pair", "--k", "2", "--pair", "(inf,-5/1)", "--json"],
        vec!["certify", "lens", "--p", "5", "--q", "1", "--json"],
    ] {
        let (_, out, _) = run(&args);
        let parsed: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
        assert!(parsed.is_object());
    }
}

#[test]
fn custom_exceptional_set_is_honored() {
    // A hostile config listing 9/2 must flip (2, 3) to refusal.
    let dir = std::env::temp_dir().join("smallknot-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exceptional.slopes");
    std::fs::write(&path, "# test set\ninf\n9/2\n").unwrap();

    let (code, out, _) = run(&[
        "certify",
        "spherical",
        "--a3",
        "2",
        "--b3",
        "3",
        "--exceptional-slopes",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "output was: {out}");
    assert!(out.contains("verdict: refuted"), "output was: {out}");

    // The recorded set replays to the same refutation.
    let (code, out, _) = run(&[
        "certify",
        "spherical",
        "--a3",
        "2",
        "--b3",
        "3",
        "--json",
        "--exceptional-slopes",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let cert: SmallKnotCertificate = serde_json::from_str(&out).unwrap();
    assert_eq!(cert.verdict(), Verdict::Refuted);
    assert_eq!(replay(&cert).unwrap(), cert);
}

#[test]
fn sweep_runs_from_a_config_file() {
    let dir = std::env::temp_dir().join("smallknot-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.toml");
    std::fs::write(
        &path,
        "[identities]\nmax_k = 100\nmax_w = 5\nmin_u = -8\n\n\
         [lens]\nmax_p = 6\nmax_abs_q = 3\nks_per_pair = 2\n",
    )
    .unwrap();

    let (code, out, _) = run(&["sweep", path.to_str().unwrap()]);
    assert_eq!(code, 0, "output was: {out}");
    assert!(out.contains("result: ok"));
    assert!(out.contains("identities"));

    let (code, out, _) = run(&["sweep", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(parsed["sections"].is_array());

    let (code, _, err) = run(&["sweep", "/nonexistent/sweep.toml"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let exe = env!("CARGO_BIN_EXE_smallknot");
    let invoke = |args: &[&str]| {
        let output = Command::new(exe).args(args).output().unwrap();
        (output.status.code(), output.stdout, output.stderr)
    };
    for args in [
        vec!["certify", "lens", "--p", "5", "--q", "1", "--json"],
        vec!["certify", "spherical", "--a3", "2", "--b3", "5", "--json"],
        vec!["table", "--k", "3"],
        vec!["check-pair", "--k", "2", "--pair", "(inf,-5/1)", "--trace"],
    ] {
        let first = invoke(&args);
        let second = invoke(&args);
        assert_eq!(first, second, "non-deterministic output for {args:?}");
    }
}
