//! Demo operations on plain strings, callable natively and from JavaScript.

use ramstruct::constructors::{construct_any, Construction, Strategy};
use ramstruct::literal::parse_tuple;
use ramstruct::oracle::{size_set_up_to, SearchBudget};
use ramstruct::structures::check_ramification;
use ramstruct::theory::predict;
use ramstruct::{FiniteGroup, GroupSpec};
use serde_json::{json, Value};

/// Candidate limit for one request. The browser has no wall clock budget.
pub const MAX_CANDIDATES: u64 = 20_000_000;
pub const MAX_CAP: usize = 10;
/// Groups larger than this are rejected to keep the page responsive.
pub const MAX_DEMO_ORDER: usize = 512;

fn budget() -> SearchBudget {
    SearchBudget {
        max_candidates: MAX_CANDIDATES,
        ..SearchBudget::default()
    }
}

fn load(spec: &str) -> Result<(String, FiniteGroup), String> {
    let parsed = GroupSpec::parse(spec).map_err(|e| e.to_string())?;
    if let GroupSpec::Cayley(path) = &parsed {
        if ramstruct::bundled::bundled_json(path).is_none() {
            return Err(format!(
                "only bundled Cayley tables are available here, not {path:?}"
            ));
        }
    }
    let g = parsed.build().map_err(|e| e.to_string())?;
    if g.order() > MAX_DEMO_ORDER {
        return Err(format!(
            "order {} exceeds the demo limit {MAX_DEMO_ORDER}",
            g.order()
        ));
    }
    Ok((parsed.to_string(), g))
}

fn error(msg: String) -> Value {
    json!({ "error": msg })
}

pub fn check(spec: &str, t1: &str, t2: &str) -> Value {
    let run = || -> Result<Value, String> {
        let (name, g) = load(spec)?;
        let a = parse_tuple(&g, t1).map_err(|e| format!("T1: {e}"))?;
        let b = parse_tuple(&g, t2).map_err(|e| format!("T2: {e}"))?;
        Ok(match check_ramification(&g, &a, &b) {
            Ok(s) => json!({ "group": name, "valid": true, "size": s.size() }),
            Err(f) => json!({ "group": name, "valid": false, "failure": f }),
        })
    };
    run().unwrap_or_else(error)
}

/// Predicted and searched membership for every `3 <= r1 <= r2 <= cap`.
pub fn size_grid(spec: &str, cap: usize) -> Value {
    let run = || -> Result<Value, String> {
        if !(3..=MAX_CAP).contains(&cap) {
            return Err(format!("cap must be between 3 and {MAX_CAP}"));
        }
        let (name, g) = load(spec)?;
        let prediction = predict(&g);
        let set = size_set_up_to(&g, cap, budget());
        let mut cells = Vec::new();
        let mut mismatches = 0;
        for r1 in 3..=cap {
            for r2 in r1..=cap {
                let predicted = prediction.as_ref().ok().map(|s| s.contains(r1, r2));
                let oracle = if set.undecided.contains(&(r1, r2)) {
                    None
                } else {
                    Some(set.pairs.contains(&(r1, r2)))
                };
                if let (Some(p), Some(o)) = (predicted, oracle) {
                    mismatches += usize::from(p != o);
                }
                cells.push(json!({ "r1": r1, "r2": r2, "predicted": predicted, "oracle": oracle }));
            }
        }
        Ok(json!({
            "group": name,
            "order": g.order(),
            "cap": cap,
            "predictor": match &prediction {
                Ok(scs) => json!({ "applies": true, "constraints": scs }),
                Err(e) => json!({ "applies": false, "reason": e.to_string() }),
            },
            "cells": cells,
            "mismatches": mismatches,
            "exhaustive": set.exhaustive,
            "candidates_examined": set.candidates_examined,
        }))
    };
    run().unwrap_or_else(error)
}

pub fn construct(spec: &str, r1: usize, r2: usize) -> Value {
    let run = || -> Result<Value, String> {
        let (name, g) = load(spec)?;
        let c = construct_any(&g, r1, r2, Strategy::Auto, budget()).map_err(|e| e.to_string())?;
        Ok(match c {
            Construction::Built { structure, method } => json!({
                "group": name,
                "outcome": "built",
                "method": method,
                "t1": g.render_tuple(structure.t1()),
                "t2": g.render_tuple(structure.t2()),
            }),
            Construction::Inadmissible { reason } => {
                json!({ "group": name, "outcome": "inadmissible", "reason": reason })
            }
            Construction::Unknown { reason } => {
                json!({ "group": name, "outcome": "unknown", "reason": reason })
            }
        })
    };
    run().unwrap_or_else(error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_counterexample() {
        let v = check(
            "C2xC4xC4xC4",
            "[x2; x3; x4; x2^-1; x3^-1; x4^-1*x1; x1]",
            "[x2*x3*x1; x2*x4; x3*x4; x2*x3*x4; x2*x3*x4*x1]",
        );
        assert_eq!(v["valid"], true);
        assert_eq!(v["size"], json!([7, 5]));
        let bad = check("C5xC5", "[x1; x2]", "[x1; x2; (x1*x2)^-1]");
        assert_eq!(bad["valid"], false);
        assert_eq!(bad["failure"]["kind"], "too_short");
    }

    #[test]
    fn grid_agrees_on_c2_cubed() {
        let v = size_grid("C2xC2xC2", 7);
        assert_eq!(v["mismatches"], 0);
        assert_eq!(v["exhaustive"], true);
        let cells = v["cells"].as_array().unwrap();
        assert_eq!(cells.len(), 15);
        let c57 = cells.iter().find(|c| c["r1"] == 5 && c["r2"] == 7).unwrap();
        assert_eq!(
            (&c57["predicted"], &c57["oracle"]),
            (&json!(false), &json!(false))
        );
        let q8 = size_grid("cayley:q8", 5);
        assert_eq!(q8["predictor"]["applies"], false);
        assert_eq!(q8["cells"][0]["predicted"], Value::Null);
    }

    #[test]
    fn construct_then_check() {
        let v = construct("C6xC6xC2", 5, 7);
        assert_eq!(v["outcome"], "built");
        let c = check(
            "C6xC6xC2",
            v["t1"].as_str().unwrap(),
            v["t2"].as_str().unwrap(),
        );
        assert_eq!(c["valid"], true);
        assert_eq!(construct("C7", 4, 4)["outcome"], "inadmissible");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(check("C1", "[x1]", "[x1]")["error"].is_string());
        assert!(size_grid("C2xC2xC2", 2)["error"].is_string());
        assert!(size_grid("cayley:/etc/passwd", 4)["error"].is_string());
        assert!(construct("heis(11)", 3, 3)["error"].is_string());
    }
}
