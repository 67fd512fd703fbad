//! Browser bindings. Every operation returns a JSON string; errors come back
//! as `{"error": message}` so the page never has to catch exceptions.

use cayley_nzflow::constructions::{a4_counterexample, a4_simple_subgraph, construct, GammaSpec};
use cayley_nzflow::flow::{oracle_nz3, verify};
use cayley_nzflow::ladder::{ladder_flow, ladder_flow_null_rung, make_ladder, LadderKind};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn wrap(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Builds one of the four graph families and its flow. `second` is `k` for
/// the semidirect families and `s` for the `A4 x Zp` ones; `r` is ignored
/// by the latter.
pub fn construct_summary(family: &str, p: u32, second: u32, r: u32) -> Result<Value, String> {
    let spec = match family {
        "gamma1" => GammaSpec::Gamma1 { p, k: second, r },
        "gamma2" => GammaSpec::Gamma2 { p, k: second, r },
        "gamma3" => GammaSpec::Gamma3 { p, s: second },
        "gamma4" => GammaSpec::Gamma4 { p, s: second },
        other => return Err(format!("unknown family {other:?}")),
    };
    let c = construct(&spec).map_err(|e| e.to_string())?;
    let graph = c.graph();
    let check = verify(graph, &c.flow).map_err(|e| e.to_string())?;
    let mut counts = [0usize; 3];
    for (_, _, v) in c.flow.entries() {
        counts[v as usize] += 1;
    }
    Ok(json!({
        "construction": c.report.construction,
        "params": c.report.params,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "valid": check.valid,
        "nowhere_zero": check.nowhere_zero,
        "values": { "1": counts[1], "2": counts[2] },
        "certificate": c.certificate.as_ref().map(|cert| json!({
            "U": cert.u.len(),
            "W": cert.w.len(),
            "U_prime": cert.u_prime.len(),
            "W_prime": cert.w_prime.len(),
            "matching": cert.matching.len(),
        })),
        "checks": c.report.checks,
        "notes": c.report.notes,
    }))
}

/// Runs the exhaustive search on the `A4` multigraph.
pub fn a4_summary() -> Result<Value, String> {
    let cay = a4_counterexample().map_err(|e| e.to_string())?;
    let none = oracle_nz3(cay.graph()).map_err(|e| e.to_string())?.is_none();
    let simple = a4_simple_subgraph().map_err(|e| e.to_string())?;
    Ok(json!({
        "vertices": cay.graph().vertex_count(),
        "edges": cay.graph().edge_count(),
        "has_flow": !none,
        "simple_subgraph_bipartite": simple.graph().is_bipartite(),
    }))
}

/// Circular or Möbius ladder with `t` rungs: whether it has a nowhere-zero
/// flow, and otherwise the flow that vanishes on a single rung.
pub fn ladder_summary(mobius: bool, t: usize) -> Result<Value, String> {
    let kind = if mobius { LadderKind::Mobius } else { LadderKind::Circular };
    let ladder = make_ladder(kind, t).map_err(|e| e.to_string())?;
    let graph = ladder.graph();
    let flow = ladder_flow(&ladder);
    let null_rung = match &flow {
        Some(_) => None,
        None => {
            let rung = *ladder.rungs.iter().next().ok_or("ladder without rungs")?;
            let f = ladder_flow_null_rung(&ladder, rung).map_err(|e| e.to_string())?;
            let valid = verify(graph, &f).map_err(|e| e.to_string())?.valid;
            Some(json!({ "rung": rung, "valid": valid, "null_set": f.null_set() }))
        }
    };
    Ok(json!({
        "kind": kind.to_string(),
        "rungs": t,
        "bipartite": graph.is_bipartite(),
        "nowhere_zero_flow": flow.is_some(),
        "null_rung_flow": null_rung,
    }))
}

#[wasm_bindgen]
pub fn construct_family(family: &str, p: u32, second: u32, r: u32) -> String {
    wrap(construct_summary(family, p, second, r))
}

#[wasm_bindgen]
pub fn a4_counterexample_check() -> String {
    wrap(a4_summary())
}

#[wasm_bindgen]
pub fn ladder(mobius: bool, t: usize) -> String {
    wrap(ladder_summary(mobius, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma4_summary() {
        let v = construct_summary("gamma4", 7, 3, 0).unwrap();
        assert_eq!(v["vertices"], 84);
        assert_eq!(v["nowhere_zero"], true);
    }

    #[test]
    fn errors_are_json() {
        let v: Value = serde_json::from_str(&construct_family("gamma1", 5, 1, 2)).unwrap();
        assert!(v["error"].as_str().unwrap().contains("r^(3k)"));
        let v: Value = serde_json::from_str(&construct_family("nope", 5, 1, 1)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn a4_has_no_flow() {
        let v = a4_summary().unwrap();
        assert_eq!(v["has_flow"], false);
        assert_eq!(v["simple_subgraph_bipartite"], false);
    }

    #[test]
    fn odd_ladder_uses_a_null_rung() {
        let v = ladder_summary(false, 5).unwrap();
        assert_eq!(v["nowhere_zero_flow"], false);
        assert_eq!(v["null_rung_flow"]["valid"], true);
        assert_eq!(v["null_rung_flow"]["null_set"].as_array().unwrap().len(), 1);
        assert_eq!(ladder_summary(false, 4).unwrap()["nowhere_zero_flow"], true);
    }
}
