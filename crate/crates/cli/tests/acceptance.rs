//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::sync::OnceLock;
use std::time::Instant;

use ram_cli::catalog::{run_catalog, CatalogConfig, CatalogRun, Record};
use ramstruct::constructors::{
    elementary_abelian_structure, exponent_p_structure, product_combine, product_project,
    semi_abelian_2group_odd_odd, Factor,
};
use ramstruct::invariants::{
    exponent_log, is_semi_abelian, omega, pgroup_prime, power_image, torsion_set,
};
use ramstruct::oracle::{find_structure, size_set_up_to, SearchBudget};
use ramstruct::structures::check_ramification;
use ramstruct::theory::{predict, predict_elementary_abelian, predict_exponent_p};
use ramstruct::{Error, FiniteGroup, GroupSpec};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn group(spec: &str) -> FiniteGroup {
    GroupSpec::parse(spec).unwrap().build().unwrap()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ram(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_ram"))
        .args(args)
        .output()
        .expect("ram binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

/// Full built-in catalog, run once into a temporary file.
fn catalog() -> &'static Result<CatalogRun, String> {
    static RUN: OnceLock<Result<CatalogRun, String>> = OnceLock::new();
    RUN.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("ram-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let mut cfg = CatalogConfig::builtin(32, 8, SearchBudget::with_millis(1_800_000));
        cfg.out = Some(dir.join("catalog.jsonl"));
        cfg.use_cache = false;
        let run = run_catalog(&cfg).map_err(|e| format!("{e:#}"));
        let _ = std::fs::remove_dir_all(&dir);
        run
    })
}

fn c1_counterexample() -> Outcome {
    let (code, v) = ram(&[
        "check",
        "--group",
        "C2xC4xC4xC4",
        "--t1",
        "[x2; x3; x4; x2^-1; x3^-1; x4^-1*x1; x1]",
        "--t2",
        "[x2*x3*x1; x2*x4; x3*x4; x2*x3*x4; x2*x3*x4*x1]",
    ]);
    ensure(code == 0, format!("exit code {code}"))?;
    ensure(
        v["result"]["valid"] == true,
        format!("verdict {}", v["result"]),
    )?;
    ensure(v["result"]["size"] == serde_json::json!([7, 5]), "size")?;
    Ok("valid, size (7,5)".into())
}

fn c2_non_inherited() -> Outcome {
    let (code, v) = ram(&[
        "check",
        "--group",
        "C6xC6xC2",
        "--t1",
        "[x1; x2; x3; x2^-1; (x1*x3)^-1]",
        "--t2",
        "[x1*x2; x1*x2; (x1*x2)^-2; x1*x2*x3; (x1*x2*x3)^-1; x1^2*x2*x3; (x1^2*x2*x3)^-1]",
    ]);
    ensure(code == 0, format!("exit code {code}"))?;
    ensure(
        v["result"]["valid"] == true,
        format!("verdict {}", v["result"]),
    )?;
    ensure(v["result"]["size"] == serde_json::json!([5, 7]), "size")?;
    let (code, p) = ram(&["predict", "--group", "C2xC2xC2", "--size", "5,7"]);
    ensure(code == 0, format!("predict exit code {code}"))?;
    ensure(p["result"]["member"] == false, "C2^3 admits (5,7)")?;
    Ok("valid (5,7) on C6xC6xC2; (5,7) not in S(C2^3)".into())
}

fn c3_elementary_bases() -> Outcome {
    let cases = [
        (5, 2, 3, 3),
        (3, 2, 4, 4),
        (2, 3, 5, 6),
        (2, 3, 6, 6),
        (2, 4, 5, 5),
    ];
    for (p, d, r1, r2) in cases {
        let (g, s) = elementary_abelian_structure(p, d, r1, r2).map_err(|e| e.to_string())?;
        let again = check_ramification(&g, s.t1(), s.t2())
            .map_err(|f| format!("C{p}^{d} ({r1},{r2}): {f:?}"))?;
        ensure(again.size() == (r1, r2), "size")?;
    }
    Ok("5 constructions validate".into())
}

fn c4_negatives() -> Outcome {
    let b = SearchBudget::default();
    let v4 = size_set_up_to(&group("C2xC2"), 7, b);
    ensure(v4.exhaustive && v4.pairs.is_empty(), "C2^2 has sizes")?;
    let c3 = group("C3xC3");
    for s in 3..=6 {
        let out = find_structure(&c3, 3, s, b);
        ensure(
            out.exhaustive && out.exists() == Some(false),
            format!("C3^2 (3,{s})"),
        )?;
    }
    let v8 = size_set_up_to(&group("C2xC2xC2"), 9, b);
    ensure(v8.exhaustive, "C2^3 sweep not exhaustive")?;
    for &(r1, r2) in &v8.pairs {
        ensure(r1.min(r2) > 4, format!("C2^3 ({r1},{r2})"))?;
        ensure(
            !(r1 % 2 == 1 && r2 % 2 == 1),
            format!("C2^3 both odd ({r1},{r2})"),
        )?;
    }
    Ok(format!("C2^3 sizes up to 9: {:?}", v8.pairs))
}

fn c5_predictor_vs_oracle() -> Outcome {
    let run = catalog().as_ref().map_err(Clone::clone)?;
    let mut compared = 0;
    for r in &run.records {
        let Record::Group(g) = r else { continue };
        let needs_predictor = !g.spec.starts_with("cayley:");
        if needs_predictor {
            ensure(
                g.predictor.applies,
                format!("{}: predictor does not apply", g.spec),
            )?;
        }
        if g.predictor.applies {
            ensure(g.exhaustive, format!("{}: oracle not exhaustive", g.spec))?;
            ensure(
                g.mismatches.is_empty(),
                format!("{}: {:?}", g.spec, g.mismatches),
            )?;
            compared += 1;
        }
    }
    Ok(format!("{compared} groups, 0 mismatches"))
}

fn c6_exponent_p() -> Outcome {
    let h = group("heis(3)");
    let scs = predict_exponent_p(&h).map_err(|e| e.to_string())?;
    let b = SearchBudget::default();
    for (r, expect) in [(4, true), (3, false)] {
        let out = find_structure(&h, r, r, b);
        ensure(out.exists() == Some(expect), format!("oracle ({r},{r})"))?;
        ensure(scs.contains(r, r) == expect, format!("predictor ({r},{r})"))?;
    }
    let s = exponent_p_structure(&h, 4, 4).map_err(|e| e.to_string())?;
    check_ramification(&h, s.t1(), s.t2()).map_err(|f| format!("{f:?}"))?;
    Ok("(4,4) yes, (3,3) no; witness validates".into())
}

fn semi_abelian_levels(g: &FiniteGroup) -> Result<bool, String> {
    let e = exponent_log(g).map_err(|e| e.to_string())?;
    let mut all = true;
    for i in 0..=e {
        let v = is_semi_abelian(g, i).map_err(|e| e.to_string())?;
        if v.holds {
            let om = omega(g, i).unwrap();
            ensure(
                om == torsion_set(g, i).unwrap(),
                format!("SA1 fails at {i}"),
            )?;
            let image = power_image(g, i).unwrap().len();
            ensure(g.order() / om.len() == image, format!("SA2 fails at {i}"))?;
        } else {
            all = false;
        }
    }
    Ok(all)
}

fn c7_semi_abelian() -> Outcome {
    for name in ["q8", "d4"] {
        let g = group(&format!("cayley:{name}"));
        let v = is_semi_abelian(&g, 1).map_err(|e| e.to_string())?;
        ensure(!v.holds, format!("{name} passes at level 1"))?;
        let (x, y) = v.witness.ok_or("no witness")?;
        let same = g.pow(x, 2) == g.pow(y, 2);
        let dies = g.pow(g.mul(x, g.inv(y)), 2).is_identity();
        ensure(same != dies, format!("{name}: witness does not violate"))?;
        semi_abelian_levels(&g)?;
    }
    let run = catalog().as_ref().map_err(Clone::clone)?;
    let mut checked = 0;
    for r in &run.records {
        let Record::Group(rec) = r else { continue };
        let g = group(&rec.spec);
        if pgroup_prime(&g).is_err() {
            continue;
        }
        let all = semi_abelian_levels(&g)?;
        if g.is_abelian() {
            ensure(all, format!("{} fails some level", rec.spec))?;
        }
        checked += 1;
    }
    Ok(format!(
        "Q8, D4 fail at 1; {checked} catalog p-groups checked"
    ))
}

fn c8_odd_odd() -> Outcome {
    let g = group("C2xC4xC4xC4");
    let t = Instant::now();
    let s = semi_abelian_2group_odd_odd(&g, 7, 7).map_err(|e| e.to_string())?;
    check_ramification(&g, s.t1(), s.t2()).map_err(|f| format!("{f:?}"))?;
    let ms = t.elapsed().as_millis();
    let c43 = group("C4xC4xC4");
    ensure(
        semi_abelian_2group_odd_odd(&c43, 7, 7) == Err(Error::DegenerateRank),
        "C4^3 did not report DegenerateRank",
    )?;
    let run = catalog().as_ref().map_err(Clone::clone)?;
    let probe = run
        .records
        .iter()
        .find_map(|r| match r {
            Record::Probe(p) if p.spec == "C4xC4xC4" && p.size == (7, 7) => Some(p),
            _ => None,
        })
        .ok_or("probe missing from catalog")?;
    ensure(probe.exhaustive, "probe undecided")?;
    let exists = probe.exists.ok_or("probe undecided")?;
    if let Some(w) = &probe.witness {
        let t1 = ramstruct::literal::parse_tuple(&c43, &w.t1).unwrap();
        let t2 = ramstruct::literal::parse_tuple(&c43, &w.t2).unwrap();
        check_ramification(&c43, &t1, &t2).map_err(|f| format!("{f:?}"))?;
    }
    Ok(format!(
        "C2xC4^3 (7,7) built in {ms} ms; C4^3 (7,7) exists = {exists} (search, {} candidates)",
        probe.candidates_examined
    ))
}

fn c9_totality() -> Outcome {
    let mut built = 0;
    let mut refused = 0;
    for p in [2u64, 3, 5] {
        for d in 1..=5 {
            let scs = predict_elementary_abelian(p, d).map_err(|e| e.to_string())?;
            for r1 in 3..=9 {
                for r2 in 3..=9 {
                    match elementary_abelian_structure(p, d, r1, r2) {
                        Ok((g, s)) => {
                            ensure(
                                scs.contains(r1, r2),
                                format!("built outside S: {p} {d} {r1} {r2}"),
                            )?;
                            check_ramification(&g, s.t1(), s.t2())
                                .map_err(|f| format!("C{p}^{d} ({r1},{r2}): {f:?}"))?;
                            ensure(s.size() == (r1, r2), "size")?;
                            built += 1;
                        }
                        Err(Error::InadmissibleSize { .. }) => {
                            ensure(
                                !scs.contains(r1, r2),
                                format!("refused inside S: {p} {d} {r1} {r2}"),
                            )?;
                            refused += 1;
                        }
                        Err(e) => return Err(format!("C{p}^{d} ({r1},{r2}): {e}")),
                    }
                }
            }
        }
    }
    Ok(format!("{built} built, {refused} inadmissible"))
}

fn c10_products() -> Outcome {
    let (g3, s3) = elementary_abelian_structure(3, 2, 5, 7).map_err(|e| e.to_string())?;
    let (g2, s2) = elementary_abelian_structure(2, 3, 5, 6).map_err(|e| e.to_string())?;
    let (p, s) = product_combine(&g3, &s3, &g2, &s2).map_err(|e| e.to_string())?;
    ensure(p.order() == 72, "order")?;
    check_ramification(&p, s.t1(), s.t2()).map_err(|f| format!("{f:?}"))?;
    ensure(s.size() == (5, 7), format!("size {:?}", s.size()))?;
    let (f, back) =
        product_project(&p, &s, Factor::Left, Some((5, 7))).map_err(|e| e.to_string())?;
    ensure(f.order() == 9, "factor order")?;
    check_ramification(&f, back.t1(), back.t2()).map_err(|e| format!("{e:?}"))?;
    ensure(back.size() == (5, 7), "projected size")?;
    ensure(
        predict(&p).map(|scs| scs.contains(5, 7)) == Ok(true),
        "prediction",
    )?;
    Ok("(5,7) on order 72, projected (5,7) on C3^2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("counterexample C2xC4^3 (7,5)", c1_counterexample),
        ("non-inherited size C6xC6xC2 (5,7)", c2_non_inherited),
        ("elementary abelian base constructions", c3_elementary_bases),
        ("oracle negatives", c4_negatives),
        ("predictor equals oracle", c5_predictor_vs_oracle),
        ("exponent-p consistency on heis(3)", c6_exponent_p),
        ("semi-abelian detector", c7_semi_abelian),
        ("odd-odd 2-group construction", c8_odd_odd),
        ("elementary abelian totality", c9_totality),
        ("direct-product round trip", c10_products),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
