//! One function per subcommand. `Err` means bad input (exit code 1).

use anyhow::{bail, Context, Result};
use ramstruct::constructors::{construct_any, Construction, Strategy};
use ramstruct::invariants::{
    exponent, is_nilpotent, is_semi_abelian, min_generators, omega, pgroup_prime, power_image,
    profile, sylow_decomposition, torsion_set,
};
use ramstruct::literal::parse_tuple;
use ramstruct::oracle::{
    enumerate_structures, size_set_up_to, Oracle, SearchBudget, SearchVerdict,
};
use ramstruct::structures::{check_ramification, RamFailure, SphericalFailure};
use ramstruct::theory::predict as predict_sizes;
use ramstruct::{Error, FiniteGroup, GroupSpec};
use serde_json::{json, Value};

use crate::report::{Report, Status, Witness};

/// Parses and materializes a group spec; returns the normalized spec text.
pub fn load_group(spec: &str) -> Result<(String, FiniteGroup)> {
    let parsed = GroupSpec::parse(spec).with_context(|| format!("invalid group spec {spec:?}"))?;
    let g = parsed
        .build()
        .with_context(|| format!("cannot build group {spec:?}"))?;
    Ok((parsed.to_string(), g))
}

/// Parses `R1,R2`, optionally parenthesized.
pub fn parse_size(text: &str) -> Result<(usize, usize), String> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    let (a, b) = t
        .split_once(',')
        .ok_or_else(|| format!("expected R1,R2, got {text:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad size {s:?}: {e}"))
    };
    Ok((parse(a)?, parse(b)?))
}

fn describe_failure(g: &FiniteGroup, f: &RamFailure) -> String {
    match f {
        RamFailure::TooShort { side, len } => format!("{side:?} tuple has length {len} < 3"),
        RamFailure::NotSpherical { side, reason } => {
            let why = match reason {
                SphericalFailure::Empty => "empty".to_string(),
                SphericalFailure::TrivialEntry { position } => {
                    format!("entry {position} is the identity")
                }
                SphericalFailure::NotGenerating { generated_order } => {
                    format!("entries generate a subgroup of order {generated_order}")
                }
                SphericalFailure::ProductNotIdentity { product } => {
                    format!("product is {}", g.render(*product))
                }
            };
            format!("{side:?} tuple is not spherical: {why}")
        }
        RamFailure::NotDisjoint { shared } => {
            format!("Sigma(T1) and Sigma(T2) share {}", g.render(*shared))
        }
    }
}

pub fn check(spec: &str, t1: &str, t2: &str) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let a = parse_tuple(&g, t1).context("invalid T1")?;
    let b = parse_tuple(&g, t2).context("invalid T2")?;
    let report = match check_ramification(&g, &a, &b) {
        Ok(s) => Report::new(
            "check",
            Some(name),
            Status::Definitive,
            json!({ "valid": true, "size": s.size() }),
        )
        .with_witness(Some(Witness::of(&g, &s))),
        Err(f) => Report::new(
            "check",
            Some(name),
            Status::Definitive,
            json!({
                "valid": false,
                "size": (a.len(), b.len()),
                "failure": f,
                "detail": describe_failure(&g, &f),
            }),
        ),
    };
    Ok(report)
}

pub fn search(spec: &str, size: (usize, usize), budget: SearchBudget) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let (r1, r2) = size;
    if r1 < 3 || r2 < 3 {
        bail!("sizes must be at least 3");
    }
    let out = Oracle::new(&g).find(r1, r2, budget);
    let (verdict, status) = match &out.verdict {
        SearchVerdict::Found(_) => ("found", Status::Definitive),
        SearchVerdict::NoneExists => ("none_exists", Status::Definitive),
        SearchVerdict::BudgetExhausted => ("budget_exhausted", Status::Undecided),
    };
    Ok(Report::new(
        "search",
        Some(name),
        status,
        json!({ "size": size, "verdict": verdict, "exists": out.exists() }),
    )
    .with_witness(out.structure().map(|s| Witness::of(&g, s)))
    .with_counters(out.candidates_examined, out.elapsed_ms)
    .with_exhaustive(out.exhaustive))
}

/// Up to `limit` structures in deterministic order, by the tuple enumerator.
pub fn search_all(
    spec: &str,
    size: (usize, usize),
    limit: usize,
    budget: SearchBudget,
) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let (r1, r2) = size;
    if r1 < 3 || r2 < 3 {
        bail!("sizes must be at least 3");
    }
    let (found, complete) = enumerate_structures(&g, r1, r2, limit, budget);
    let structures: Vec<Witness> = found.iter().map(|s| Witness::of(&g, s)).collect();
    let exists = if !found.is_empty() {
        Some(true)
    } else if complete {
        Some(false)
    } else {
        None
    };
    let status = if exists.is_some() {
        Status::Definitive
    } else {
        Status::Undecided
    };
    Ok(Report::new(
        "search",
        Some(name),
        status,
        json!({
            "size": size,
            "exists": exists,
            "limit": limit,
            "count": structures.len(),
            "structures": structures,
            "complete": complete,
        }),
    )
    .with_witness(structures.first().cloned())
    .with_exhaustive(complete))
}

pub fn sizes(spec: &str, cap: usize, budget: SearchBudget) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    if cap < 3 {
        bail!("cap must be at least 3");
    }
    let set = size_set_up_to(&g, cap, budget);
    let status = if set.exhaustive {
        Status::Definitive
    } else {
        Status::Undecided
    };
    Ok(Report::new(
        "sizes",
        Some(name),
        status,
        json!({ "cap": cap, "pairs": set.pairs, "undecided": set.undecided }),
    )
    .with_counters(set.candidates_examined, set.elapsed_ms)
    .with_exhaustive(set.exhaustive))
}

/// Library errors that mean "no predictor covers this group".
fn not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::HypothesisViolated(_) | Error::NotNilpotent | Error::NotAPGroup(_)
    )
}

pub fn predict(spec: &str, size: Option<(usize, usize)>, grid: Option<usize>) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let scs = match predict_sizes(&g) {
        Ok(scs) => scs,
        Err(e) if not_applicable(&e) => {
            return Ok(Report::new(
                "predict",
                Some(name),
                Status::Undecided,
                json!({ "applies": false, "reason": e.to_string() }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let mut result = json!({ "applies": true, "constraints": scs });
    if let Some((r1, r2)) = size {
        result["size"] = json!((r1, r2));
        result["member"] = json!(scs.contains(r1, r2));
    }
    if let Some(cap) = grid {
        result["cap"] = json!(cap);
        result["grid"] = json!(scs.grid(cap));
    }
    Ok(Report::new(
        "predict",
        Some(name),
        Status::Definitive,
        result,
    ))
}

pub fn construct(
    spec: &str,
    size: (usize, usize),
    strategy: Strategy,
    budget: SearchBudget,
) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let (r1, r2) = size;
    let c = construct_any(&g, r1, r2, strategy, budget)?;
    let report = match c {
        Construction::Built { structure, method } => Report::new(
            "construct",
            Some(name),
            Status::Definitive,
            json!({ "outcome": "built", "size": size, "method": method }),
        )
        .with_witness(Some(Witness::of(&g, &structure))),
        Construction::Inadmissible { reason } => Report::new(
            "construct",
            Some(name),
            Status::Definitive,
            json!({ "outcome": "inadmissible", "size": size, "reason": reason }),
        ),
        Construction::Unknown { reason } => Report::new(
            "construct",
            Some(name),
            Status::Undecided,
            json!({ "outcome": "unknown", "size": size, "reason": reason }),
        ),
    };
    Ok(report)
}

pub fn invariants(spec: &str) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let nilpotent = is_nilpotent(&g);
    let mut result = json!({
        "order": g.order(),
        "abelian": g.is_abelian(),
        "cyclic": g.is_cyclic(),
        "nilpotent": nilpotent,
        "exponent": exponent(&g),
    });
    if nilpotent {
        result["d"] = json!(min_generators(&g)?);
        let primes: Vec<u64> = sylow_decomposition(&g)?.iter().map(|f| f.p).collect();
        result["primes"] = json!(primes);
    }
    if pgroup_prime(&g).is_ok() {
        result["profile"] = serde_json::to_value(profile(&g)?)?;
    }
    Ok(Report::new(
        "invariants",
        Some(name),
        Status::Definitive,
        result,
    ))
}

fn level_report(g: &FiniteGroup, i: u32) -> Result<Value> {
    let v = is_semi_abelian(g, i)?;
    let om = omega(g, i)?;
    let torsion = torsion_set(g, i)?;
    let image = power_image(g, i)?;
    let mut out = json!({
        "level": i,
        "holds": v.holds,
        "trivial_level": i == 0,
        "omega_order": om.len(),
        "torsion_set_size": torsion.len(),
        "power_image_size": image.len(),
    });
    if let Some((x, y)) = v.witness {
        out["witness"] = json!([g.render(x), g.render(y)]);
    }
    if v.holds {
        out["sa1"] = json!(om == torsion);
        out["sa2"] = json!(g.order() / om.len() == image.len());
    }
    Ok(out)
}

pub fn semiabelian(spec: &str, level: Option<u32>) -> Result<Report> {
    let (name, g) = load_group(spec)?;
    let p = pgroup_prime(&g)?;
    let e = ramstruct::invariants::exponent_log(&g)?;
    let levels: Vec<u32> = match level {
        Some(i) => vec![i],
        None => (0..=e).collect(),
    };
    let rows = levels
        .iter()
        .map(|&i| level_report(&g, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(
        "semiabelian",
        Some(name),
        Status::Definitive,
        json!({ "p": p, "e": e, "levels": rows }),
    ))
}
