use std::io::Write;
use std::process::{Command, Output};

fn soslift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soslift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn enumerate_v3_in_lex_order() {
    let out = soslift(&["enumerate", "--set", "V", "--m", "3", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "123\n213\n231\n321\n");
}

#[test]
fn enumerate_json_lines() {
    let out = soslift(&[
        "enumerate",
        "--set",
        "V",
        "--m",
        "6",
        "--method",
        "lift",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], r#"{"m":6,"values":[1,2,3,4,5,6]}"#);
}

#[test]
fn tau_at_a_farey_point() {
    let out = soslift(&["tau", "--m", "5", "--alpha", "2/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "35241\n");
    let out = soslift(&["tau", "--m", "4", "--alpha", "2/5", "--closed-form"]);
    assert_eq!(stdout(&out), "2413\n");
    let out = soslift(&["tau", "--m", "3", "--alpha", "2/5", "--sos"]);
    assert_eq!(stdout(&out), "312\n");
}

#[test]
fn smallest_verify_passes() {
    let out = soslift(&[
        "verify",
        "--m-max",
        "2",
        "--sos-max",
        "4",
        "--samples",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn verify_tree_passes() {
    let out = soslift(&["verify-tree", "--depth", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn malformed_input_names_the_token() {
    let out = soslift(&["tau", "--m", "5", "--alpha", "2/x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("2/x"), "{}", stderr(&out));

    let out = soslift(&["project", "--perm", "1224"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("1224"), "{}", stderr(&out));

    let out = soslift(&["enumerate", "--set", "Q", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains('Q'));
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(
        soslift(&["project", "--perm", "1324"]).status.code(),
        Some(2)
    );
    assert_eq!(
        soslift(&["tau", "--m", "5", "--alpha", "1/3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        soslift(&["enumerate", "--set", "V", "--m", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(soslift(&["lift", "--to-m", "501"]).status.code(), Some(2));
}

#[test]
fn size_guard_reads_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_soslift"))
        .args(["enumerate", "--set", "V", "--m", "4"])
        .env("SOSLIFT_MAX_BRUTE_M", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn project_and_lift() {
    let out = soslift(&["project", "--perm", "2413"]);
    assert_eq!(stdout(&out), "231\n");
    let out = soslift(&["lift", "--to-m", "4"]);
    assert_eq!(stdout(&out), "1234\n2341\n2413\n3142\n3214\n4321\n");
}

#[test]
fn lift_from_a_file() {
    let dir = std::env::temp_dir().join(format!("soslift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("v3.jsonl");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, r#"{{"m":3,"values":[1,2,3]}}"#).unwrap();
    writeln!(f, "231\n213").unwrap();
    writeln!(f, r#"{{"m":3,"values":[3,2,1]}}"#).unwrap();
    drop(f);
    let p = path.to_str().unwrap();
    let out = soslift(&["lift", "--from-m", "3", "--input", p]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "1234\n2341\n2413\n3142\n3214\n4321\n");
    let out = soslift(&["lift", "--from-m", "3", "--input", p, "--to-m", "6"]);
    assert_eq!(stdout(&out).lines().count(), 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn farey_listing() {
    let out = soslift(&["farey", "--m", "3"]);
    assert_eq!(
        stdout(&out),
        "0/1 1/3 1/2 2/3 1/1\n(0/1, 1/3) 123\n(1/3, 1/2) 231\n(1/2, 2/3) 213\n(2/3, 1/1) 321\n"
    );
}

#[test]
fn tree_exports() {
    let out = soslift(&["tree", "--depth", "3", "--format", "dot"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("231<sup>(1)</sup>"));
    let out = soslift(&["tree", "--depth", "3", "--kind", "both", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["gen"]["children"][0]["label"], "12");
    assert_eq!(v["farey"]["children"][1]["interval"], "(1/2, 1/1)");
    let out = soslift(&[
        "tree",
        "--depth",
        "2",
        "--format",
        "json",
        "--with-y-levels",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["gen"]["children"][0]["anchor"], true);
}

#[test]
fn sosrec_survey() {
    let out = soslift(&["sosrec", "--m", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("m=5 "));
}

#[test]
fn output_is_identical_across_thread_counts() {
    for args in [
        &["enumerate", "--set", "Y", "--m", "7"][..],
        &["lift", "--to-m", "30"][..],
        &["tree", "--depth", "7", "--kind", "both"][..],
        &[
            "verify",
            "--m-max",
            "5",
            "--sos-max",
            "8",
            "--samples",
            "20",
        ][..],
    ] {
        let base = soslift(&[args, &["--threads", "1"]].concat());
        let many = soslift(&[args, &["--threads", "4"]].concat());
        assert!(base.status.success(), "{args:?}");
        assert_eq!(base.stdout, many.stdout, "{args:?}");
        assert_eq!(base.stdout, soslift(args).stdout, "{args:?}");
    }
}
