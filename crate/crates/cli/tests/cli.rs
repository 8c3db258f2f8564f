use std::process::Command;

use ram_cli::catalog::{run_catalog, CatalogConfig, CatalogEntry, Probe, Record};
use ram_cli::commands;
use ramstruct::oracle::SearchBudget;
use serde_json::Value;

fn ram(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ram"))
        .args(args)
        .output()
        .unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn recheck(group: &str, v: &Value) {
    let w = &v["witness"];
    let (code, c) = ram(&[
        "check",
        "--group",
        group,
        "--t1",
        w["t1"].as_str().unwrap(),
        "--t2",
        w["t2"].as_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(c["result"]["valid"], true, "{c}");
    assert_eq!(c["result"]["size"], w["size"]);
}

#[test]
fn check_reports_failures_definitively() {
    let (code, v) = ram(&[
        "check",
        "--group",
        "C5xC5",
        "--t1",
        "[x1; x2; (x1*x2)^-1]",
        "--t2",
        "[x1; x2; (x1*x2)^-1]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["valid"], false);
    assert_eq!(v["result"]["failure"]["kind"], "not_disjoint");
    let (code, v) = ram(&[
        "check",
        "--group",
        "C2xC2",
        "--t1",
        "[x1; x1]",
        "--t2",
        "[x1; x2; x1*x2]",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["failure"]["kind"], "too_short");
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(
        ram(&["check", "--group", "C1xC2", "--t1", "[x1]", "--t2", "[x1]"]).0,
        1
    );
    assert_eq!(
        ram(&["check", "--group", "C4", "--t1", "[]", "--t2", "[x1]"]).0,
        1
    );
    assert_eq!(ram(&["predict", "--group", "heis(4)"]).0, 1);
    assert_eq!(ram(&["search", "--group", "C4", "--size", "five"]).0, 1);
    assert_eq!(ram(&["frobnicate"]).0, 1);
    assert_eq!(ram(&["semiabelian", "--group", "C6"]).0, 1);
    assert_eq!(ram(&["--help"]).0, 0);
}

#[test]
fn search_witnesses_round_trip() {
    for (group, size) in [
        ("C2xC2xC2", "5,6"),
        ("heis(3)", "4,4"),
        ("cayley:d4", "5,6"),
        ("prod(C3,cayley:s3)", "3,4"),
    ] {
        let (code, v) = ram(&["search", "--group", group, "--size", size]);
        assert_eq!(code, 0, "{v}");
        if v["result"]["exists"] == true {
            recheck(group, &v);
        }
    }
    let (code, v) = ram(&["search", "--group", "C2xC2xC2", "--size", "5,7"]);
    assert_eq!(
        (code, &v["result"]["verdict"]),
        (0, &Value::from("none_exists"))
    );
    assert_eq!(v["exhaustive"], true);
}

#[test]
fn search_all_lists_distinct_structures() {
    let (code, v) = ram(&[
        "search", "--group", "C2xC2xC2", "--size", "5,6", "--all", "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 4);
    let list = v["result"]["structures"].as_array().unwrap();
    for (i, a) in list.iter().enumerate() {
        recheck("C2xC2xC2", &serde_json::json!({ "witness": a }));
        for b in &list[i + 1..] {
            assert_ne!(a, b);
        }
    }
    let (code, v) = ram(&[
        "search", "--group", "C3xC3", "--size", "3,3", "--all", "2", "--budget", "60000",
    ]);
    assert_eq!((code, &v["result"]["exists"]), (0, &Value::Bool(false)));
}

#[test]
fn budget_exhaustion_exits_two() {
    let (code, v) = ram(&[
        "--budget-ms",
        "1",
        "search",
        "--group",
        "C5xC5xC5",
        "--size",
        "9,9",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["verdict"], "budget_exhausted");
    assert_eq!(v["exhaustive"], false);
    let (code, v) = ram(&[
        "--budget-ms",
        "1",
        "--seed",
        "7",
        "sizes",
        "--group",
        "heis(5)",
        "--cap",
        "6",
    ]);
    assert_eq!(code, 2);
    assert!(!v["result"]["undecided"].as_array().unwrap().is_empty());
}

#[test]
fn construct_routes() {
    let (code, v) = ram(&["construct", "--group", "C6xC6xC2", "--size", "5,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["method"], "nilpotent");
    recheck("C6xC6xC2", &v);
    let (code, v) = ram(&["construct", "--group", "C2xC4xC4xC4", "--size", "7,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["method"], "semi_abelian_odd_odd");
    recheck("C2xC4xC4xC4", &v);
    let (code, v) = ram(&["construct", "--group", "C2xC2xC2", "--size", "5,7"]);
    assert_eq!(
        (code, &v["result"]["outcome"]),
        (0, &Value::from("inadmissible"))
    );
    let (code, v) = ram(&[
        "construct",
        "--group",
        "cayley:q8",
        "--size",
        "5,5",
        "--strategy",
        "theorem",
    ]);
    assert_eq!(
        (code, &v["result"]["outcome"]),
        (2, &Value::from("unknown"))
    );
}

#[test]
fn predict_and_invariants() {
    let (code, v) = ram(&["predict", "--group", "C6xC6xC2", "--grid", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["constraints"]["min_size"], 5);
    assert!(!v["result"]["grid"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([5, 5])));
    let (code, v) = ram(&["predict", "--group", "cayley:s3"]);
    assert_eq!((code, &v["result"]["applies"]), (2, &Value::from(false)));
    let (code, v) = ram(&["invariants", "--group", "heis(5)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["profile"]["classification"]["powerful"], false);
    assert_eq!(v["result"]["profile"]["classification"]["p_central"], true);
    let (_, v) = ram(&["invariants", "--group", "C6xC6xC2"]);
    assert_eq!(v["result"]["d"], 3);
}

#[test]
fn semiabelian_levels() {
    let (code, v) = ram(&["semiabelian", "--group", "cayley:q8", "--level", "1"]);
    assert_eq!(code, 0);
    let row = &v["result"]["levels"][0];
    assert_eq!(row["holds"], false);
    assert_eq!(row["witness"].as_array().unwrap().len(), 2);
    let (_, v) = ram(&["semiabelian", "--group", "C2xC4xC4xC4"]);
    for row in v["result"]["levels"].as_array().unwrap() {
        assert_eq!(row["holds"], true);
        assert_eq!(
            (&row["sa1"], &row["sa2"]),
            (&Value::Bool(true), &Value::Bool(true))
        );
    }
    assert_eq!(v["result"]["levels"][0]["trivial_level"], true);
}

#[test]
fn text_output() {
    let out = Command::new(env!("CARGO_BIN_EXE_ram"))
        .args(["--text", "predict", "--group", "C2xC2xC2", "--size", "5,7"])
        .output()
        .unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("predict C2xC2xC2: definitive"), "{s}");
}

#[test]
fn catalog_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    let cfg = CatalogConfig {
        entries: ["C2xC2xC2", "C3xC3", "cayley:q8", "heis(3)"]
            .iter()
            .map(|s| CatalogEntry {
                spec: s.to_string(),
                cap: 7,
            })
            .collect(),
        probes: vec![Probe {
            spec: "C2xC4xC4".into(),
            size: (5, 5),
            note: "test".into(),
        }],
        budget: SearchBudget::default(),
        out: Some(path.clone()),
        use_cache: true,
    };
    let first = run_catalog(&cfg).unwrap();
    assert_eq!(
        (first.summary.oracle_runs, first.summary.cache_hits),
        (5, 0)
    );
    assert_eq!(first.summary.mismatches, 0);
    let text1 = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text1.lines().count(), 5);
    for line in text1.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["key"].as_str().unwrap().len(), 64);
    }
    let second = run_catalog(&cfg).unwrap();
    assert_eq!(
        (second.summary.oracle_runs, second.summary.cache_hits),
        (0, 5)
    );
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text1);
    assert_eq!(first.records, second.records);

    let mut wider = cfg.clone();
    wider.entries[0].cap = 8;
    let third = run_catalog(&wider).unwrap();
    assert_eq!(third.summary.oracle_runs, 1);

    let c2 = first.records.iter().find_map(|r| match r {
        Record::Group(g) if g.spec == "C2xC2xC2" => Some(g),
        _ => None,
    });
    let c2 = c2.unwrap();
    assert!(c2.predictor.forbid_both_odd);
    assert_eq!(c2.agreement, Some(true));
    let q8 = first.records.iter().find_map(|r| match r {
        Record::Group(g) if g.spec == "cayley:q8" => Some(g),
        _ => None,
    });
    assert_eq!(q8.unwrap().agreement, None);
}

#[test]
fn catalog_command_writes_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.jsonl");
    let (code, v) = ram(&[
        "catalog",
        "--max-order",
        "8",
        "--cap",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["summary"]["mismatches"], 0);
    let (_, again) = ram(&[
        "catalog",
        "--max-order",
        "8",
        "--cap",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(again["result"]["summary"]["oracle_runs"], 0);
    assert_eq!(again["result"]["records"], v["result"]["records"]);
}

#[test]
fn library_commands_match_binary() {
    let r = commands::predict("C2xC2xC2", Some((5, 7)), None).unwrap();
    assert_eq!(r.result["member"], false);
    assert_eq!(r.exit_code(), 0);
    assert!(commands::load_group("prod(C3,").is_err());
    assert_eq!(commands::parse_size("(5, 7)"), Ok((5, 7)));
}
