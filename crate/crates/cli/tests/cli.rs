use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pptri"))
        .args(args)
        .output()
        .expect("the binary spawns");
    (
        out.status.code().expect("the binary exits normally"),
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
    )
}

fn run_json(args: &[&str]) -> (i32, serde_json::Value) {
    let (code, stdout, stderr) = run(args);
    assert!(stderr.is_empty(), "unexpected stderr: {stderr}");
    let value = serde_json::from_str(&stdout).expect("stdout is one JSON document");
    (code, value)
}

#[test]
fn verify_q3_reports_no_mismatches() {
    let (code, report) = run_json(&["verify", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["mismatches"], serde_json::json!([]));
    assert_eq!(report["total_pairs"], 81);
    assert_eq!(report["pp_count"], 3);
}

#[test]
fn rejects_non_prime_power_order() {
    let (code, _, stderr) = run(&["verify", "--q", "6"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("prime power"), "stderr was: {stderr}");
}

#[test]
fn q_shorthand_matches_explicit_p_and_n() {
    let (code_q, via_q, _) = run(&["verify", "--q", "9"]);
    let (code_pn, via_pn, _) = run(&["verify", "--p", "3", "--n", "2"]);
    assert_eq!(code_q, 0);
    assert_eq!(code_pn, 0);
    assert_eq!(via_q, via_pn);
}

#[test]
fn field_flags_are_required_and_exclusive() {
    let (code, _, _) = run(&["verify"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--q", "3", "--p", "3", "--n", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["verify", "--p", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn classify_reports_the_second_odd_case() {
    let (code, report) = run_json(&["classify", "--q", "5", "--a", "1", "--b", "0"]);
    assert_eq!(code, 0);
    assert_eq!(report["is_pp"], true);
    assert_eq!(report["case"], "A.ii");
}

#[test]
fn classify_rejects_out_of_range_encodings() {
    let (code, _, stderr) = run(&["classify", "--q", "5", "--a", "25", "--b", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out of range"), "stderr was: {stderr}");
}

#[test]
fn oversized_exhaustive_runs_are_refused_but_sampling_works() {
    let (code, _, stderr) = run(&["verify", "--q", "64"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds the limit"), "stderr was: {stderr}");

    let (code, report) = run_json(&["verify", "--q", "64", "--samples", "50"]);
    assert_eq!(code, 0);
    assert_eq!(report["mode"], "sampled");
    assert_eq!(report["total_pairs"], 50);
}

#[test]
fn field_budget_errors_name_the_budget() {
    let (code, _, stderr) = run(&["verify", "--q", "2048"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("budget"), "stderr was: {stderr}");
}

#[test]
fn csv_lists_one_row_per_permutation_pair() {
    let (code, stdout, _) = run(&["verify", "--q", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "a_enc,b_enc,case_tag");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "0,0,A.i");
    assert!(lines[2..].iter().all(|l| l.ends_with(",A.ii")));
}

#[test]
fn csv_is_rejected_outside_verify() {
    let (code, _, stderr) = run(&[
        "classify", "--q", "5", "--a", "1", "--b", "0", "--format", "csv",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("csv"), "stderr was: {stderr}");
}

#[test]
fn reports_are_identical_across_worker_counts() {
    let (code_a, one, _) = run(&["verify", "--q", "5", "--workers", "1"]);
    let (code_b, three, _) = run(&["verify", "--q", "5", "--workers", "3"]);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(one, three);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().expect("a temp dir is available");
    let path = dir.path().join("report.json");
    let (code, stdout, _) = run(&["verify", "--q", "4"]);
    assert_eq!(code, 0);
    let (code, piped, _) = run(&["verify", "--q", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(piped.is_empty());
    let written = std::fs::read_to_string(&path).expect("the report file exists");
    assert_eq!(written, stdout);
}

#[test]
fn identities_subcommand_passes() {
    let (code, report) = run_json(&["identities", "--q", "8"]);
    assert_eq!(code, 0);
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["identities"].as_array().unwrap().len(), 8);
}

#[test]
fn powersums_subcommand_passes() {
    let (code, report) = run_json(&["powersums", "--q", "4"]);
    assert_eq!(code, 0);
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["expansion"]["mode"], "exhaustive");
    assert_eq!(report["closed_forms"]["admissible_pairs"], 15);

    let (code, report) = run_json(&["powersums", "--q", "7", "--samples", "64"]);
    assert_eq!(code, 0);
    assert_eq!(report["expansion"]["mode"], "sampled");
    assert_eq!(report["expansion"]["checked"], 64);
}

#[test]
fn hermite_subcommand_passes_within_its_budget() {
    let (code, report) = run_json(&["hermite", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(report["all_agree"], true);
    assert_eq!(report["total_pairs"], 81);

    let (code, _, stderr) = run(&["hermite", "--q", "9"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("exceeds the limit"), "stderr was: {stderr}");
}

#[test]
fn cubic_subcommand_sweeps_both_checks() {
    let (code, report) = run_json(&["cubic", "--q", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["all_hold"], true);
    assert_eq!(report["identity_sweep"]["applicable"], true);
    assert_eq!(report["uniqueness"]["instances"], 6);
    assert_eq!(report["uniqueness"]["checked"], 6);

    let (code, report) = run_json(&["cubic", "--q", "8"]);
    assert_eq!(code, 0);
    assert_eq!(report["identity_sweep"]["applicable"], false);
    assert_eq!(report["uniqueness"]["instances"], 27);
    assert_eq!(report["uniqueness"]["checked"], 24);
}

#[test]
fn cubic_instance_mode_follows_the_full_sweep() {
    let (_, full) = run_json(&["cubic", "--q", "9"]);
    let skipped = full["uniqueness"]["skipped_subfield_b"].as_array().unwrap();
    assert_eq!(skipped.len(), 6);

    let degenerate = &skipped[0];
    let a = degenerate[0].to_string();
    let b = degenerate[1].to_string();
    let (code, _, stderr) = run(&["cubic", "--q", "9", "--a", &a, "--b", &b]);
    assert_eq!(code, 2);
    assert!(stderr.contains("basis"), "stderr was: {stderr}");

    let (code, _, stderr) = run(&["cubic", "--q", "9", "--a", "0", "--b", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("A.iv or B.iii"), "stderr was: {stderr}");
}

#[test]
fn cubic_target_mode_reports_the_attached_cubic() {
    let (_, csv, _) = run(&["verify", "--q", "7", "--format", "csv"]);
    let row = csv
        .lines()
        .find(|l| l.ends_with(",A.iv"))
        .expect("q = 7 has fourth-case instances");
    let mut cols = row.split(',');
    let a = cols.next().unwrap();
    let b = cols.next().unwrap();

    let (code, report) = run_json(&["cubic", "--q", "7", "--a", a, "--b", b]);
    assert_eq!(code, 0);
    assert_eq!(report["uniqueness"]["ok"], true);

    let (code, report) = run_json(&["cubic", "--q", "7", "--a", a, "--b", b, "--w", "10"]);
    assert_eq!(code, 0);
    assert_eq!(report["case"], "A.iv");
    if report["lead_vanishes"] == false {
        assert!(report["roots_in_subfield"].as_u64().unwrap() <= 1);
        assert_eq!(report["identities"]["factorization_holds"], true);
        assert_eq!(report["identities"]["derivative_holds"], true);
    }
}
