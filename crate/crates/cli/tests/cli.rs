use std::process::{Command, Output};

fn sumset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumset"))
        .args(args)
        .env_remove("SUMSET_JOBS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON report")
}

#[test]
fn group_info_reports_structure() {
    let o = sumset(&["group-info", "--group", "Z9"]);
    assert_eq!(code(&o), 0);
    let info = &json(&o)["results"][0];
    assert_eq!(info["kind"], "group_info");
    assert_eq!((info["order"].as_u64(), info["p"].as_u64()), (Some(9), Some(3)));
    assert_eq!(info["abelian"], true);
    assert_eq!(info["automorphisms"], 6);

    let o = sumset(&["group-info", "--group", "Heis3", "--no-automorphisms"]);
    let info = &json(&o)["results"][0];
    assert_eq!((info["order"].as_u64(), info["center_size"].as_u64()), (Some(27), Some(3)));
    assert_eq!((info["abelian"].as_bool(), info["nilpotent"].as_bool()), (Some(false), Some(true)));
}

#[test]
fn missing_or_unknown_group_is_a_usage_error() {
    let o = sumset(&["group-info"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("Heis3"));
    let o = sumset(&["verify", "cd", "--group", "Nope"]);
    assert_eq!(code(&o), 4);
    let o = sumset(&["verify", "cd", "--group", "Z5", "--mode", "sideways"]);
    assert_eq!(code(&o), 4);
    let o = sumset(&["verify", "cd", "--group", "Z5", "--mode", "exhaustive", "--max-a", "2"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_theorem1_passes_on_z9() {
    let o = sumset(&["verify", "thm1", "--group", "Z9", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["schema_version"], 1);
    let r = &doc["results"][0];
    assert_eq!(r["status"], "PASS");
    assert_eq!(r["instances_checked"], 511 * 511);
}

#[test]
fn non_nilpotent_group_is_a_precondition_error() {
    let o = sumset(&["verify", "thm1", "--group", "F21"]);
    assert_eq!(code(&o), 5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not nilpotent"));
}

#[test]
fn field_lemma_results() {
    let o = sumset(&["verify", "field-lemma", "--p", "7", "--max-size", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["results"][0]["status"], "PASS");
    // the whole of F_3 with γ = −1 falls short of the bound
    let o = sumset(&["verify", "field-lemma", "--p", "3", "--max-size", "3", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    let csv = stdout(&o);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theorem,check,a,b,sigma,gamma,lhs,rhs,weight"));
    assert_eq!(lines.next(), Some("field-lemma,field_gamma,0 1 2,0 1 2,,2,2,3,1"));
    assert_eq!(code(&sumset(&["verify", "field-lemma"])), 4);
}

#[test]
fn extremal_scan_formats() {
    let o = sumset(&["extremal", "--bound", "eh-diagonal", "--group", "Z7", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let threes: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1).unwrap().split(' ').count() == 3)
        .collect();
    // x + y = x + z forces y = z, so every 3-set of Z7 has three distinct
    // pairwise sums and meets the diagonal bound
    assert_eq!(threes.len(), 35);
    assert!(threes.iter().any(|l| l.starts_with("eh_diagonal,0 1 2,,,3,3,1,true,0 1,")));

    let o = sumset(&["extremal", "--bound", "eh", "--group", "Z2"]);
    assert_eq!(code(&o), 0);
    let scan = &json(&o)["results"][0];
    assert_eq!(scan["instances"].as_array().unwrap().len(), 0);

    let o = sumset(&["extremal", "--bound", "eh", "--group", "Heis3", "--max-a", "2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("equality cases"));
}

#[test]
fn sampled_reports_are_byte_identical() {
    let args = ["verify", "bw", "--group", "Heis3", "--samples", "20000", "--seed", "11"];
    let a = sumset(&args);
    let b = sumset(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let jobs = sumset(&["--jobs", "1", "verify", "bw", "--group", "Heis3", "--samples", "20000", "--seed", "11"]);
    assert_eq!(jobs.stdout, a.stdout);
}

#[test]
fn out_file_group_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let def = dir.path().join("z3.json");
    std::fs::write(&def, r#"{"name": "C3", "order": 3, "table": [[0,1,2],[1,2,0],[2,0,1]]}"#).unwrap();
    let out = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    std::fs::create_dir(&cache).unwrap();
    let o = sumset(&[
        "verify",
        "thm3",
        "--group-file",
        def.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--aut-cache",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["group"]["name"], "C3");
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);

    std::fs::write(&def, r#"{"order": 2, "table": [[0,1],[1,1]]}"#).unwrap();
    let o = sumset(&["group-info", "--group-file", def.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
}

#[test]
fn timing_is_opt_in() {
    let o = sumset(&["verify", "cd", "--group", "Z5"]);
    assert!(json(&o).get("timing").is_none());
    let o = sumset(&["verify", "cd", "--group", "Z5", "--timing"]);
    assert!(json(&o)["timing"]["wall_time_secs"].is_number());
}
